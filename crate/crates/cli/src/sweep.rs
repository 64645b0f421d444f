//! Distance sweeps above an element: the library, a fixed Gauss-Legendre rule
//! and the adaptive oracle side by side.

use std::time::Instant;

use layerpot::oracle::{adaptive_potentials, gl_potentials, Potential};
use layerpot::{evaluate_monomials, ElementGeometry, EvalRequest, HelmholtzRoute, Kernel, MonomialExpansion, Vec3, C64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelName {
    Laplace,
    Helmholtz,
}

/// Observation points `r_p = (x, y, h)` in element coordinates with `h / D`
/// log-spaced over `[h_min, h_max]`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub kernel: KernelName,
    /// Wavenumber times element diameter, used for the Helmholtz kernel.
    pub kd: f64,
    pub vertices: [[f64; 3]; 3],
    /// In-plane position of the observation point in element coordinates.
    pub point: [f64; 2],
    /// Observation normal in global coordinates; defaults to the element normal.
    pub normal: Option<[f64; 3]>,
    /// `(b, c, coefficient)` triples of the density in element coordinates.
    pub density: Vec<(usize, usize, f64)>,
    pub h_min: f64,
    pub h_max: f64,
    pub points: usize,
    pub gl_order: usize,
    pub oracle_tol: f64,
    pub taylor_tol: f64,
    pub pe_max: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            kernel: KernelName::Laplace,
            kd: 1.0,
            vertices: [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            point: [1.0 / 3.0, 1.0 / 3.0],
            normal: None,
            density: vec![(3, 0, 1.0)],
            h_min: 1e-6,
            h_max: 1.0,
            points: 25,
            gl_order: 12,
            oracle_tol: 1e-12,
            taylor_tol: 1e-12,
            pe_max: 32,
        }
    }
}

impl SweepSpec {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        let spec: Self = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> CliResult<()> {
        if !(self.h_min > 0.0 && self.h_min <= self.h_max) {
            return Err(CliError::Input(format!(
                "grid bounds must satisfy 0 < h_min <= h_max, got [{}, {}]",
                self.h_min, self.h_max
            )));
        }
        if self.points == 0 {
            return Err(CliError::Input("the grid needs at least one point".into()));
        }
        if self.kernel == KernelName::Helmholtz && !(self.kd > 0.0 && self.kd <= 1.0) {
            return Err(CliError::Input(format!("kD must lie in (0, 1], got {}", self.kd)));
        }
        if self.density.is_empty() {
            return Err(CliError::Input("empty density".into()));
        }
        Ok(())
    }

    pub fn geometry(&self) -> CliResult<ElementGeometry> {
        Ok(ElementGeometry::from_arrays(self.vertices)?)
    }

    pub fn kernel(&self, g: &ElementGeometry) -> Kernel {
        match self.kernel {
            KernelName::Laplace => Kernel::Laplace,
            KernelName::Helmholtz => Kernel::Helmholtz { k: self.kd / g.diameter },
        }
    }

    pub fn density(&self) -> MonomialExpansion {
        let order = self.density.iter().map(|&(b, c, _)| b + c).max().unwrap_or(0);
        let mut d = MonomialExpansion::zeros(order);
        for &(b, c, v) in &self.density {
            d.set(b, c, d.get(b, c) + v);
        }
        d
    }

    pub fn grid(&self) -> Vec<f64> {
        log_grid(self.h_min, self.h_max, self.points)
    }
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n).map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMethod {
    Ripe,
    Gl12,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "h_over_D")]
    pub h_over_d: f64,
    #[serde(serialize_with = "potential_name")]
    pub potential: Potential,
    pub method: SweepMethod,
    pub value_re: f64,
    pub value_im: f64,
    pub rel_diff_vs_oracle: f64,
    pub wall_time_ns: u64,
}

fn potential_name<S: serde::Serializer>(p: &Potential, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(p.name())
}

pub(crate) fn rel_diff(a: C64, b: C64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).norm() / b.norm()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_nanos() as u64)
}

/// `[V, K, K', D]` of `density` by the recursions.
pub fn ripe_values(req: &EvalRequest, density: &MonomialExpansion) -> layerpot::Result<[C64; 4]> {
    let mut r = req.clone();
    r.order = density.order();
    let a = evaluate_monomials(&r)?.contract(density).as_array();
    Ok([a[0].unwrap(), a[1].unwrap(), a[2].unwrap(), a[3].unwrap()])
}

/// All rows of one sweep in grid order, together with the number of oracle
/// evaluations that missed their tolerance (their rows carry NaN).
pub fn run_sweep(spec: &SweepSpec, route: HelmholtzRoute) -> CliResult<(Vec<SweepRow>, usize)> {
    spec.validate()?;
    let g = spec.geometry()?;
    let kernel = spec.kernel(&g);
    let density = spec.density();
    let normal = spec.normal.map(Vec3::from).unwrap_or(g.k_hat);
    let per_point: Vec<CliResult<(Vec<SweepRow>, bool)>> = spec
        .grid()
        .par_iter()
        .map(|&hd| {
            let p = g.to_global(spec.point[0], spec.point[1], hd * g.diameter);
            let mut req = EvalRequest::new(g.clone(), p, kernel, density.order()).with_normal(normal);
            req.taylor_tol = spec.taylor_tol;
            req.pe_max = spec.pe_max;
            req.route = route;
            let (ripe, t_ripe) = timed(|| ripe_values(&req, &density));
            let ripe = ripe?;
            let (gl, t_gl) = timed(|| gl_potentials(&g, &density, kernel, &p, &normal, spec.gl_order));
            let (oracle, t_oracle) = timed(|| adaptive_potentials(&g, &density, kernel, &p, &normal, spec.oracle_tol));
            let (oracle, failed) = match oracle {
                Ok(o) => (o.values, false),
                Err(layerpot::Error::NotConverged { .. }) => ([C64::new(f64::NAN, f64::NAN); 4], true),
                Err(e) => return Err(e.into()),
            };
            let mut rows = Vec::with_capacity(12);
            for pot in Potential::ALL {
                let i = pot.index();
                for (method, v, t) in [
                    (SweepMethod::Ripe, ripe[i], t_ripe),
                    (SweepMethod::Gl12, gl[i], t_gl),
                    (SweepMethod::Oracle, oracle[i], t_oracle),
                ] {
                    rows.push(SweepRow {
                        h_over_d: hd,
                        potential: pot,
                        method,
                        value_re: v.re,
                        value_im: v.im,
                        rel_diff_vs_oracle: rel_diff(v, oracle[i]),
                        wall_time_ns: t,
                    });
                }
            }
            Ok((rows, failed))
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = 0;
    for r in per_point {
        let (r, failed) = r?;
        rows.extend(r);
        failures += failed as usize;
    }
    Ok((rows, failures))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityRow {
    pub p_s: usize,
    pub kernel: KernelName,
    #[serde(rename = "h_over_D")]
    pub h_over_d: f64,
    #[serde(serialize_with = "potential_name")]
    pub potential: Potential,
    /// Largest relative difference over all monomials `x^b y^c`, `b + c <= p_s`.
    pub max_rel_diff: f64,
}

/// Accuracy against the oracle for every monomial of each order in `orders`,
/// on the configuration of the default sweep.
pub fn run_stability(
    orders: &[usize],
    kernels: &[KernelName],
    grid: &[f64],
    oracle_tol: f64,
    route: HelmholtzRoute,
) -> CliResult<Vec<StabilityRow>> {
    let spec = SweepSpec::default();
    let g = spec.geometry()?;
    let n = g.k_hat;
    let top = orders.iter().copied().max().unwrap_or(0);
    let cases: Vec<(KernelName, f64)> = kernels.iter().flat_map(|&k| grid.iter().map(move |&h| (k, h))).collect();
    let results: Vec<CliResult<Vec<StabilityRow>>> = cases
        .par_iter()
        .map(|&(kname, hd)| {
            let kernel = SweepSpec { kernel: kname, ..SweepSpec::default() }.kernel(&g);
            let p = g.to_global(spec.point[0], spec.point[1], hd * g.diameter);
            // one oracle value per monomial, shared by all orders
            let mut reference = Vec::new();
            for d in 0..=top {
                for c in 0..=d {
                    let m = MonomialExpansion::monomial(d, d - c, c);
                    reference.push(((d - c, c), adaptive_potentials(&g, &m, kernel, &p, &n, oracle_tol)?.values));
                }
            }
            let mut rows = Vec::new();
            for &ps in orders {
                let req = EvalRequest::new(g.clone(), p, kernel, ps).with_normal(n).with_route(route);
                let table = evaluate_monomials(&req)?;
                let mut worst = [0.0f64; 4];
                for ((b, c), want) in reference.iter().filter(|((b, c), _)| b + c <= ps) {
                    let got = table.get(*b, *c).as_array();
                    for i in 0..4 {
                        worst[i] = worst[i].max(rel_diff(got[i].unwrap(), want[i]));
                    }
                }
                for pot in Potential::ALL {
                    rows.push(StabilityRow {
                        p_s: ps,
                        kernel: kname,
                        h_over_d: hd,
                        potential: pot,
                        max_rel_diff: worst[pot.index()],
                    });
                }
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    rows.sort_by(|a, b| {
        (a.p_s, a.kernel as u8, a.potential.index())
            .cmp(&(b.p_s, b.kernel as u8, b.potential.index()))
            .then(a.h_over_d.total_cmp(&b.h_over_d))
    });
    Ok(rows)
}

pub fn write_csv<T: Serialize>(rows: &[T], out: impl std::io::Write) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
