//! Timing of the recursions against the adaptive oracle.
//!
//! The two methods do different amounts of work: one recursion run yields all
//! `(p_s + 1)(p_s + 2) / 2` monomials at once, while each oracle run integrates
//! the single density `x^{p_s}`.

use std::time::Instant;

use layerpot::oracle::adaptive_potentials;
use layerpot::{evaluate_monomials, ElementGeometry, EvalRequest, HelmholtzRoute, Kernel, MonomialExpansion, Vec3};
use serde::Serialize;

use crate::error::CliResult;
use crate::sweep::KernelName;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchMethod {
    /// Full monomial table by the recursions.
    RipeAllMonomials,
    /// Adaptive oracle for the single density `x^{p_s}`.
    OracleSingleDensity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub p_s: usize,
    pub kernel: KernelName,
    pub method: BenchMethod,
    pub median_ns: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub orders: Vec<usize>,
    pub repeat: usize,
    pub h_over_d: f64,
    /// Fixed number of Taylor terms for the Helmholtz recursion.
    pub pe: usize,
    pub oracle_tol: f64,
    /// `k D` for the Helmholtz rows.
    pub kd: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            orders: (1..=5).collect(),
            repeat: 21,
            h_over_d: 1e-4,
            pe: 32,
            oracle_tol: 1e-10,
            kd: 1.0,
        }
    }
}

pub fn median_ns(repeat: usize, mut f: impl FnMut()) -> u64 {
    let mut t: Vec<u64> = (0..repeat.max(1))
        .map(|_| {
            let s = Instant::now();
            f();
            s.elapsed().as_nanos() as u64
        })
        .collect();
    t.sort_unstable();
    t[t.len() / 2]
}

fn setup(cfg: &BenchConfig, h_over_d: f64, kname: KernelName) -> CliResult<(ElementGeometry, Vec3, Kernel)> {
    let g = ElementGeometry::from_arrays([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])?;
    let p = g.to_global(1.0 / 3.0, 1.0 / 3.0, h_over_d * g.diameter);
    let kernel = match kname {
        KernelName::Laplace => Kernel::Laplace,
        KernelName::Helmholtz => Kernel::Helmholtz { k: cfg.kd / g.diameter },
    };
    Ok((g, p, kernel))
}

/// Request used for timing: the recursion route with exactly `cfg.pe` Taylor terms.
pub fn bench_request(cfg: &BenchConfig, ps: usize, h_over_d: f64, kname: KernelName) -> CliResult<EvalRequest> {
    let (g, p, kernel) = setup(cfg, h_over_d, kname)?;
    let mut req = EvalRequest::new(g.clone(), p, kernel, ps)
        .with_normal(g.k_hat)
        .with_route(HelmholtzRoute::Recursion);
    req.pe_max = cfg.pe;
    req.fixed_pe = true;
    Ok(req)
}

pub fn time_ripe(cfg: &BenchConfig, ps: usize, h_over_d: f64, kname: KernelName) -> CliResult<u64> {
    let req = bench_request(cfg, ps, h_over_d, kname)?;
    evaluate_monomials(&req)?;
    Ok(median_ns(cfg.repeat, || {
        std::hint::black_box(evaluate_monomials(std::hint::black_box(&req)).ok());
    }))
}

pub fn time_oracle(cfg: &BenchConfig, ps: usize, h_over_d: f64, kname: KernelName) -> CliResult<u64> {
    let (g, p, kernel) = setup(cfg, h_over_d, kname)?;
    let density = MonomialExpansion::monomial(ps, ps, 0);
    adaptive_potentials(&g, &density, kernel, &p, &g.k_hat, cfg.oracle_tol)?;
    // the oracle is slow; a few repeats suffice for a median
    Ok(median_ns(cfg.repeat.min(5), || {
        std::hint::black_box(adaptive_potentials(&g, &density, kernel, &p, &g.k_hat, cfg.oracle_tol).ok());
    }))
}

pub fn run_bench(cfg: &BenchConfig) -> CliResult<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &ps in &cfg.orders {
        for kernel in [KernelName::Laplace, KernelName::Helmholtz] {
            rows.push(BenchRow {
                p_s: ps,
                kernel,
                method: BenchMethod::RipeAllMonomials,
                median_ns: time_ripe(cfg, ps, cfg.h_over_d, kernel)?,
            });
            rows.push(BenchRow {
                p_s: ps,
                kernel,
                method: BenchMethod::OracleSingleDensity,
                median_ns: time_oracle(cfg, ps, cfg.h_over_d, kernel)?,
            });
        }
    }
    Ok(rows)
}
