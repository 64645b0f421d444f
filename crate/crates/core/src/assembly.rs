//! Assembly of the four layer potentials from edge primitives and point terms.

use crate::error::{Error, Result};
use crate::geometry::{ElementGeometry, Location, Projection};
use crate::helmholtz::{expansion_for_edge, fixed_expansion_for_edge, helmholtz_edge_tables, helmholtz_element_tables};
use crate::laplace::{laplace_edge_tables, laplace_element_tables, Families};
use crate::shapefn::{MonomialExpansion, ShapeSet};
use crate::table::{MonomialTable, SweepOrder};
use crate::{Vec3, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Laplace,
    Helmholtz { k: f64 },
}

impl Kernel {
    pub fn wavenumber(&self) -> f64 {
        match self {
            Kernel::Laplace => 0.0,
            Kernel::Helmholtz { k } => *k,
        }
    }
}

/// How Helmholtz tables are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HelmholtzRoute {
    /// Use the low-frequency series when `k R` is small, the recursion otherwise.
    #[default]
    Auto,
    /// Taylor-expanded edge primitives with the `1 / (ik)` recurrences.
    Recursion,
    /// `e^{ikr} = Σ (ik)^n r^n / n!` applied to Laplace tables of raised radial power.
    LowFrequency,
}

/// Below this `k R_max` the automatic route switches to the low-frequency series.
pub const LOW_FREQUENCY_LIMIT: f64 = 0.5;
const LOW_FREQUENCY_MAX_TERMS: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRequest {
    pub geometry: ElementGeometry,
    pub point: Vec3,
    /// Unit normal at the observation point; required for `K'` and `D`.
    pub normal: Option<Vec3>,
    pub kernel: Kernel,
    /// Maximum total monomial degree `p_s`.
    pub order: usize,
    pub taylor_tol: f64,
    pub pe_max: usize,
    /// Use exactly `pe_max` Taylor terms instead of choosing them from `taylor_tol`.
    pub fixed_pe: bool,
    pub sweep: SweepOrder,
    pub route: HelmholtzRoute,
}

impl EvalRequest {
    pub fn new(geometry: ElementGeometry, point: Vec3, kernel: Kernel, order: usize) -> Self {
        Self {
            geometry,
            point,
            normal: None,
            kernel,
            order,
            taylor_tol: 1e-12,
            pe_max: 32,
            fixed_pe: false,
            sweep: SweepOrder::default(),
            route: HelmholtzRoute::default(),
        }
    }

    pub fn with_normal(mut self, n: Vec3) -> Self {
        self.normal = Some(n);
        self
    }

    pub fn with_route(mut self, route: HelmholtzRoute) -> Self {
        self.route = route;
        self
    }
}

/// The four potentials of one density, together with the gradients they derive from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialQuad {
    /// Single layer `∫ G N`.
    pub v: C64,
    /// Double layer `∫ ∂G/∂n_q N`.
    pub k: C64,
    /// Adjoint double layer `∫ ∂G/∂n_p N`.
    pub kp: Option<C64>,
    /// Hypersingular operator `-∫ ∂²G/∂n_p∂n_q N`.
    pub d: Option<C64>,
    /// Gradient of `v` with respect to the observation point.
    pub grad_v: [C64; 3],
    /// Gradient of `k` with respect to the observation point.
    pub grad_k: [C64; 3],
}

impl PotentialQuad {
    fn zero() -> Self {
        let z = C64::new(0.0, 0.0);
        Self {
            v: z,
            k: z,
            kp: None,
            d: None,
            grad_v: [z; 3],
            grad_k: [z; 3],
        }
    }

    fn add_scaled(&mut self, o: &PotentialQuad, w: C64) {
        self.v += o.v * w;
        self.k += o.k * w;
        for i in 0..3 {
            self.grad_v[i] += o.grad_v[i] * w;
            self.grad_k[i] += o.grad_k[i] * w;
        }
    }

    fn with_normal(mut self, n: Option<Vec3>) -> Self {
        if let Some(n) = n {
            let dot = |g: &[C64; 3]| g[0] * n.x + g[1] * n.y + g[2] * n.z;
            self.kp = Some(dot(&self.grad_v));
            self.d = Some(-dot(&self.grad_k));
        }
        self
    }

    pub fn as_array(&self) -> [Option<C64>; 4] {
        [Some(self.v), Some(self.k), self.kp, self.d]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalMeta {
    pub kernel: Kernel,
    pub order: usize,
    pub location: Location,
    pub h: f64,
    /// Largest Taylor order used over the three edges (recursion route only).
    pub p_e: Option<usize>,
    /// Number of series terms (low-frequency route only).
    pub series_terms: Option<usize>,
    /// Weight given to the point term: 1 inside, 1/2 on an edge, 0 outside.
    pub point_weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonomialPotentials {
    pub meta: EvalMeta,
    entries: Vec<PotentialQuad>,
}

impl MonomialPotentials {
    fn slot(order: usize, b: usize, c: usize) -> usize {
        c * (order + 1) + b
    }

    /// Potentials of the density `x^b y^c` in element coordinates.
    pub fn get(&self, b: usize, c: usize) -> &PotentialQuad {
        assert!(b + c <= self.meta.order, "monomial ({b},{c}) above order {}", self.meta.order);
        &self.entries[Self::slot(self.meta.order, b, c)]
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &PotentialQuad)> {
        let p = self.meta.order;
        (0..=p).flat_map(move |c| (0..=p - c).map(move |b| ((b, c), self.get(b, c))))
    }

    /// Potentials of the polynomial density `Σ coef_{b,c} x^b y^c`.
    pub fn contract(&self, density: &MonomialExpansion) -> PotentialQuad {
        let mut q = PotentialQuad::zero();
        let with_normal = self.entries[0].kp.is_some();
        if with_normal {
            q.kp = Some(C64::new(0.0, 0.0));
            q.d = Some(C64::new(0.0, 0.0));
        }
        for (b, c, coef) in density.terms() {
            if coef == 0.0 {
                continue;
            }
            let e = self.get(b, c);
            q.add_scaled(e, C64::new(coef, 0.0));
            if with_normal {
                q.kp = Some(q.kp.unwrap() + e.kp.unwrap() * coef);
                q.d = Some(q.d.unwrap() + e.d.unwrap() * coef);
            }
        }
        q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ripe,
    GaussLegendre,
}

/// RIPE inside `switch_radius` element diameters, plain quadrature beyond.
pub fn select_method(h_over_d: f64, switch_radius: f64) -> Method {
    if h_over_d.abs() < switch_radius {
        Method::Ripe
    } else {
        Method::GaussLegendre
    }
}

fn point_weight(geom: &ElementGeometry, proj: &Projection) -> Result<f64> {
    match proj.location {
        Location::StrictInterior => Ok(1.0),
        Location::StrictExterior => Ok(0.0),
        Location::OnContour => {
            if proj.vertex.is_some() || proj.h.abs() <= geom.tau_h() {
                Err(Error::SingularOnContour)
            } else {
                Ok(0.5)
            }
        }
    }
}

/// Edge and point tables for one observation point.
struct Tables<T> {
    edges: Vec<(Families<T>, Families<T>)>,
    point: Families<T>,
}

impl<T: Copy + Default + Into<C64>> Tables<T> {
    fn potentials(&self, geom: &ElementGeometry, w: f64, b: usize, c: usize, a: i32) -> PotentialQuad {
        let mut q = PotentialQuad::zero();
        let add = |acc: &mut [C64; 3], v: &Vec3, s: C64| {
            acc[0] += s * v.x;
            acc[1] += s * v.y;
            acc[2] += s * v.z;
        };
        for (j, (s, e)) in self.edges.iter().enumerate() {
            let d = |f: fn(&Families<T>) -> &MonomialTable<T>| f(e).get(b, c, a).into() - f(s).get(b, c, a).into();
            let edge = &geom.edges[j];
            q.v += d(|f| &f.base);
            let dz = d(|f| &f.z);
            q.k += dz;
            add(&mut q.grad_v, &edge.i_hat, d(|f| &f.xp));
            add(&mut q.grad_v, &edge.j_hat, d(|f| &f.yp));
            add(&mut q.grad_v, &geom.k_hat, -dz);
            add(&mut q.grad_k, &edge.i_hat, d(|f| &f.z_xp));
            add(&mut q.grad_k, &edge.j_hat, d(|f| &f.z_yp));
            add(&mut q.grad_k, &geom.k_hat, d(|f| &f.z_zp));
        }
        if w != 0.0 {
            let t = &self.point;
            let g = |f: &MonomialTable<T>| f.get(b, c, a).into() * w;
            q.v += g(&t.base);
            q.k += g(&t.z);
            add(&mut q.grad_v, &geom.i_hat, g(&t.xp));
            add(&mut q.grad_v, &geom.j_hat, g(&t.yp));
            add(&mut q.grad_v, &geom.k_hat, -g(&t.z));
            add(&mut q.grad_k, &geom.i_hat, g(&t.z_xp));
            add(&mut q.grad_k, &geom.j_hat, g(&t.z_yp));
            add(&mut q.grad_k, &geom.k_hat, g(&t.z_zp));
        }
        q
    }
}

fn laplace_tables(req: &EvalRequest, proj: &Projection, p: usize) -> Result<Tables<f64>> {
    let g = &req.geometry;
    let mut edges = Vec::with_capacity(3);
    for j in 0..3 {
        let s0 = g.edge_scalars(&req.point, j, false);
        let s1 = g.edge_scalars(&req.point, j, true);
        let f0 = laplace_edge_tables(&s0, p, g.tau_a(), req.sweep)?;
        let f1 = laplace_edge_tables(&s1, p, g.tau_a(), req.sweep)?;
        edges.push((f0, f1));
    }
    let point = laplace_element_tables(proj.x_p, proj.y_p, proj.h, p, g.tau_h(), req.sweep);
    Ok(Tables { edges, point })
}

fn max_vertex_distance(req: &EvalRequest) -> f64 {
    req.geometry
        .vertices
        .iter()
        .map(|v| (v - req.point).norm())
        .fold(0.0, f64::max)
}

/// Number of terms of `Σ (ik)^n r^n / n!` needed for `r <= r_max`.
fn series_terms(k: f64, r_max: f64, tol: f64) -> Result<usize> {
    let x = k * r_max;
    let mut term = 1.0;
    for n in 1..=LOW_FREQUENCY_MAX_TERMS {
        term *= x / n as f64;
        if term <= tol {
            return Ok(n);
        }
    }
    Err(Error::ExpansionNotConverged {
        k_dr: x,
        tail: term,
        terms: LOW_FREQUENCY_MAX_TERMS,
    })
}

pub fn evaluate_monomials(req: &EvalRequest) -> Result<MonomialPotentials> {
    let g = &req.geometry;
    if let Some(n) = req.normal {
        if (n.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("observation normal has length {}", n.norm())));
        }
    }
    let proj = g.project(&req.point);
    let w = point_weight(g, &proj)?;
    let p = req.order;
    let mut meta = EvalMeta {
        kernel: req.kernel,
        order: p,
        location: proj.location,
        h: proj.h,
        p_e: None,
        series_terms: None,
        point_weight: w,
    };
    let mut entries = vec![PotentialQuad::zero(); (p + 1) * (p + 1)];
    let k = match req.kernel {
        Kernel::Helmholtz { k } if k != 0.0 => k,
        _ => {
            let t = laplace_tables(req, &proj, p)?;
            for c in 0..=p {
                for b in 0..=p - c {
                    entries[MonomialPotentials::slot(p, b, c)] =
                        t.potentials(g, w, b, c, 0).with_normal(req.normal);
                }
            }
            return Ok(MonomialPotentials { meta, entries });
        }
    };
    if !k.is_finite() || k < 0.0 {
        return Err(Error::InvalidInput(format!("wavenumber must be positive, got {k}")));
    }

    let r_max = max_vertex_distance(req);
    let low = match req.route {
        HelmholtzRoute::LowFrequency => true,
        HelmholtzRoute::Recursion => false,
        HelmholtzRoute::Auto => k * r_max <= LOW_FREQUENCY_LIMIT,
    };
    if low {
        let n = series_terms(k, r_max, req.taylor_tol)?;
        meta.series_terms = Some(n);
        let t = laplace_tables(req, &proj, p + n)?;
        let ik = C64::new(0.0, k);
        for c in 0..=p {
            for b in 0..=p - c {
                let mut q = PotentialQuad::zero();
                let mut coef = C64::new(1.0, 0.0);
                for m in 0..=n {
                    if m > 0 {
                        coef *= ik / m as f64;
                    }
                    q.add_scaled(&t.potentials(g, w, b, c, m as i32), coef);
                }
                entries[MonomialPotentials::slot(p, b, c)] = q.with_normal(req.normal);
            }
        }
        return Ok(MonomialPotentials { meta, entries });
    }

    let mut edges = Vec::with_capacity(3);
    let mut p_e = 0;
    for j in 0..3 {
        let s0 = g.edge_scalars(&req.point, j, false);
        let s1 = g.edge_scalars(&req.point, j, true);
        let tay = if req.fixed_pe {
            fixed_expansion_for_edge(k, &s0, &s1, req.pe_max)?
        } else {
            expansion_for_edge(k, &s0, &s1, p, req.taylor_tol, req.pe_max)?
        };
        p_e = p_e.max(tay.p_e());
        let f0 = helmholtz_edge_tables(&s0, &tay, p, g.tau_a(), req.sweep)?;
        let f1 = helmholtz_edge_tables(&s1, &tay, p, g.tau_a(), req.sweep)?;
        edges.push((f0, f1));
    }
    meta.p_e = Some(p_e);
    let point = helmholtz_element_tables(proj.x_p, proj.y_p, proj.h, k, p, g.tau_h(), req.sweep);
    let t = Tables { edges, point };
    for c in 0..=p {
        for b in 0..=p - c {
            entries[MonomialPotentials::slot(p, b, c)] =
                t.potentials(g, w, b, c, 0).with_normal(req.normal);
        }
    }
    Ok(MonomialPotentials { meta, entries })
}

/// Potentials of every shape function of `shapes` for one observation point.
pub fn shape_potentials(req: &EvalRequest, shapes: &ShapeSet) -> Result<Vec<PotentialQuad>> {
    let mut r = req.clone();
    r.order = shapes.order();
    let mono = evaluate_monomials(&r)?;
    Ok(shapes.expansions().iter().map(|e| mono.contract(e)).collect())
}
