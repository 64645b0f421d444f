//! One-off evaluation from a flat key/value file.
//!
//! ```toml
//! vertices = [[0, 0, 0], [1, 0, 0], [0, 1, 0]]
//! point = [0.3333333333333333, 0.3333333333333333, 0.0]
//! normal = [0, 0, 1]
//! kernel = "helmholtz"
//! k = 0.5
//! density = [[0, 0, 1.0], [1, 0, -2.0]]   # (b, c, coefficient) in element coordinates
//! ```

use std::fmt::Write as _;

use layerpot::{evaluate_monomials, select_method, EvalRequest, Kernel, Method, MonomialExpansion, Vec3};
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::sweep::KernelName;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalInput {
    pub vertices: [[f64; 3]; 3],
    pub point: [f64; 3],
    /// Required for `K'` and `D`; without it only `V` and `K` are reported.
    pub normal: Option<[f64; 3]>,
    pub kernel: KernelName,
    #[serde(default)]
    pub k: f64,
    pub density: Vec<(usize, usize, f64)>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_pe_max")]
    pub pe_max: usize,
}

fn default_tol() -> f64 {
    1e-12
}

fn default_pe_max() -> usize {
    32
}

impl EvalInput {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        Ok(toml::from_str(text)?)
    }
}

pub fn run_eval(input: &EvalInput, switch_radius: f64) -> CliResult<String> {
    if input.density.is_empty() {
        return Err(CliError::Input("empty density".into()));
    }
    let g = layerpot::ElementGeometry::from_arrays(input.vertices)?;
    let kernel = match input.kernel {
        KernelName::Laplace => Kernel::Laplace,
        KernelName::Helmholtz => Kernel::Helmholtz { k: input.k },
    };
    let order = input.density.iter().map(|&(b, c, _)| b + c).max().unwrap_or(0);
    let mut density = MonomialExpansion::zeros(order);
    for &(b, c, v) in &input.density {
        density.set(b, c, density.get(b, c) + v);
    }
    let mut req = EvalRequest::new(g.clone(), Vec3::from(input.point), kernel, order);
    req.normal = input.normal.map(Vec3::from);
    req.taylor_tol = input.tol;
    req.pe_max = input.pe_max;
    let table = evaluate_monomials(&req)?;
    let q = table.contract(&density);
    let meta = table.meta;

    let method = match (kernel, meta.series_terms) {
        (Kernel::Laplace, _) => "ripe",
        (_, Some(_)) => "ripe-low-frequency",
        _ => "ripe-taylor",
    };
    let mut out = String::new();
    let c = |z: layerpot::C64| format!("{:.16e} {:+.16e}i", z.re, z.im);
    writeln!(out, "kernel: {}", match kernel {
        Kernel::Laplace => "laplace".to_string(),
        Kernel::Helmholtz { k } => format!("helmholtz k={k}"),
    })
    .unwrap();
    writeln!(out, "method: {method}").unwrap();
    let advice = match select_method(meta.h.abs() / g.diameter, switch_radius) {
        Method::Ripe => "ripe",
        Method::GaussLegendre => "gauss_legendre",
    };
    writeln!(out, "advised_method: {advice} (switch radius {switch_radius} D)").unwrap();
    writeln!(out, "p_s: {order}").unwrap();
    match (meta.p_e, meta.series_terms) {
        (Some(p), _) => writeln!(out, "p_e: {p}").unwrap(),
        (_, Some(n)) => writeln!(out, "series_terms: {n}").unwrap(),
        _ => writeln!(out, "p_e: none").unwrap(),
    }
    writeln!(out, "location: {:?}", meta.location).unwrap();
    writeln!(out, "h: {:e}", meta.h).unwrap();
    writeln!(out, "singular_term: {} (weight {})", meta.point_weight > 0.0, meta.point_weight).unwrap();
    writeln!(out, "V: {}", c(q.v)).unwrap();
    writeln!(out, "K: {}", c(q.k)).unwrap();
    match (q.kp, q.d) {
        (Some(kp), Some(d)) => {
            writeln!(out, "Kp: {}", c(kp)).unwrap();
            writeln!(out, "D: {}", c(d)).unwrap();
        }
        _ => writeln!(out, "Kp, D: not computed (no normal given)").unwrap(),
    }
    Ok(out)
}
