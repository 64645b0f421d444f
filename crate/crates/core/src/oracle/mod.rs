//! Reference values by direct numerical quadrature, independent of the recursions.
//!
//! Points whose projection falls inside or on the element are integrated in
//! polar coordinates around the projection, with the static part of the
//! kernel integrated in closed form along each ray. Other points use adaptive
//! quadrisection of the element with a collapsed Gauss-Legendre rule.

mod polar;
pub mod quad1d;

use std::f64::consts::PI;

use crate::assembly::Kernel;
use crate::error::{Error, Result};
use crate::gauss;
use crate::geometry::{ElementGeometry, Location};
use crate::shapefn::MonomialExpansion;
use crate::{Vec3, C64};

use quad1d::{add, diff_norm, norm, zero, Vals};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Potential {
    V,
    K,
    Kp,
    D,
}

impl Potential {
    pub const ALL: [Potential; 4] = [Potential::V, Potential::K, Potential::Kp, Potential::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Potential::V => "V",
            Potential::K => "K",
            Potential::Kp => "Kp",
            Potential::D => "D",
        }
    }
}

/// Radial derivatives `G`, `G'`, `G''` of `e^{ikr} / (4π r)`.
pub(crate) fn radial(k: f64, r: f64) -> [C64; 3] {
    let e = C64::from_polar(1.0, k * r) / (4.0 * PI);
    let ikr = C64::new(0.0, k * r);
    [
        e / r,
        e * (ikr - 1.0) / (r * r),
        e * (C64::new(2.0 - k * k * r * r, -2.0 * k * r)) / (r * r * r),
    ]
}

/// Integrands of `V`, `K`, `K'` and `D` at source `q` (normal `n_q`) for
/// observation point `p` with normal `n_p`.
pub fn integrands(k: f64, p: &Vec3, n_p: &Vec3, q: &Vec3, n_q: &Vec3) -> Vals {
    let d = q - p;
    let r = d.norm();
    let [g, g1, g2] = radial(k, r);
    let nq = n_q.dot(&d);
    let np = n_p.dot(&d);
    let g1r = g1 / r;
    let dg1r = g2 / r - g1 / (r * r);
    [
        g,
        g1r * nq,
        -g1r * np,
        dg1r * (np * nq / r) + g1r * n_p.dot(n_q),
    ]
}

/// Collapsed tensor Gauss-Legendre rule on the reference triangle
/// `(0,0), (1,0), (0,1)`: `(u, v, weight)`, weights summing to 1/2.
/// Exact for polynomials of total degree `order` (rounded down to even).
pub fn gl_triangle(order: usize) -> Vec<[f64; 3]> {
    let n = order / 2 + 1;
    let (x, w) = gauss::legendre(n);
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let s = 0.5 * (1.0 + x[i]);
        for j in 0..n {
            let t = 0.5 * (1.0 + x[j]);
            out.push([s, (1.0 - s) * t, 0.25 * (1.0 - s) * w[i] * w[j]]);
        }
    }
    out
}

/// Polynomial density in element coordinates `(x, y)`.
pub type Density<'a> = &'a MonomialExpansion;

fn triangle_sum(
    geom: &ElementGeometry,
    tri: &[[f64; 2]; 3],
    rule: &[[f64; 3]],
    density: Density,
    k: f64,
    p: &Vec3,
    n_p: &Vec3,
) -> Vals {
    let [a, b, c] = tri;
    let jac = ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])).abs();
    let mut acc = zero();
    for &[u, v, w] in rule {
        let x = a[0] + u * (b[0] - a[0]) + v * (c[0] - a[0]);
        let y = a[1] + u * (b[1] - a[1]) + v * (c[1] - a[1]);
        let q = geom.to_global(x, y, 0.0);
        let f = integrands(k, p, n_p, &q, &geom.k_hat);
        let s = density.eval(x, y) * w * jac;
        for i in 0..4 {
            acc[i] += f[i] * s;
        }
    }
    acc
}

fn element_triangle(geom: &ElementGeometry) -> [[f64; 2]; 3] {
    let [[x2, x3], [y2, y3]] = geom.xi;
    [[0.0, 0.0], [x2, y2], [x3, y3]]
}

/// `[V, K, K', D]` by a single application of the collapsed rule of the given order.
pub fn gl_potentials(
    geom: &ElementGeometry,
    density: Density,
    kernel: Kernel,
    p: &Vec3,
    n_p: &Vec3,
    order: usize,
) -> [C64; 4] {
    let rule = gl_triangle(order);
    triangle_sum(geom, &element_triangle(geom), &rule, density, kernel.wavenumber(), p, n_p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub values: [C64; 4],
    pub error: f64,
    pub evaluations: usize,
}

impl OracleResult {
    pub fn get(&self, p: Potential) -> C64 {
        self.values[p.index()]
    }
}

const MAX_LEAVES: usize = 100_000;

/// Adaptive reference values of `[V, K, K', D]` to relative tolerance `tol`.
pub fn adaptive_potentials(
    geom: &ElementGeometry,
    density: Density,
    kernel: Kernel,
    p: &Vec3,
    n_p: &Vec3,
    tol: f64,
) -> Result<OracleResult> {
    let proj = geom.project(p);
    let inside = match proj.location {
        Location::StrictInterior => true,
        Location::OnContour => {
            if proj.vertex.is_some() || proj.h.abs() <= geom.tau_h() {
                return Err(Error::SingularOnContour);
            }
            true
        }
        Location::StrictExterior => false,
    };
    if inside {
        polar::polar_potentials(geom, density, kernel.wavenumber(), p, n_p, tol)
    } else {
        quadrisection(geom, density, kernel.wavenumber(), p, n_p, tol)
    }
}

fn quadrisection(
    geom: &ElementGeometry,
    density: Density,
    k: f64,
    p: &Vec3,
    n_p: &Vec3,
    tol: f64,
) -> Result<OracleResult> {
    struct Leaf {
        tri: [[f64; 2]; 3],
        value: Vals,
        err: f64,
    }
    let hi = gl_triangle(13);
    let lo = gl_triangle(9);
    let local = geom.to_local(p);
    let mut evals = 0;
    let mut make = |tri: [[f64; 2]; 3]| {
        let value = triangle_sum(geom, &tri, &hi, density, k, p, n_p);
        let coarse = triangle_sum(geom, &tri, &lo, density, k, p, n_p);
        evals += hi.len() + lo.len();
        let mut err = diff_norm(&value, &coarse);
        // a leaf must not be larger than its distance to the observation point
        let cx = (tri[0][0] + tri[1][0] + tri[2][0]) / 3.0;
        let cy = (tri[0][1] + tri[1][1] + tri[2][1]) / 3.0;
        let rad = tri
            .iter()
            .map(|v| (v[0] - cx).hypot(v[1] - cy))
            .fold(0.0, f64::max);
        let dist = ((local.x - cx).hypot(local.y - cy) - rad).max(0.0).hypot(local.z);
        if rad > dist {
            err = err.max(norm(&value));
        }
        Leaf { tri, value, err }
    };
    let mut leaves = vec![make(element_triangle(geom))];
    loop {
        let mut total = zero();
        let mut err = 0.0;
        let mut worst = 0;
        for (i, l) in leaves.iter().enumerate() {
            add(&mut total, &l.value);
            err += l.err;
            if l.err > leaves[worst].err {
                worst = i;
            }
        }
        let target = tol * norm(&total);
        if err <= target {
            return Ok(OracleResult {
                values: total,
                error: err,
                evaluations: evals,
            });
        }
        if leaves.len() + 3 > MAX_LEAVES {
            return Err(Error::NotConverged {
                estimate: err,
                tolerance: target,
            });
        }
        let t = leaves.swap_remove(worst).tri;
        let m = |i: usize, j: usize| [(t[i][0] + t[j][0]) / 2.0, (t[i][1] + t[j][1]) / 2.0];
        let (m01, m12, m20) = (m(0, 1), m(1, 2), m(2, 0));
        for tri in [
            [t[0], m01, m20],
            [m01, t[1], m12],
            [m20, m12, t[2]],
            [m12, m20, m01],
        ] {
            leaves.push(make(tri));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_rule_exactness() {
        let rule = gl_triangle(12);
        assert_eq!(rule.len(), 49);
        // ∫ u^a v^b over the reference triangle = a! b! / (a + b + 2)!
        let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
        for a in 0..=6u32 {
            for b in 0..=(12 - a) {
                let q: f64 = rule.iter().map(|[u, v, w]| w * u.powi(a as i32) * v.powi(b as i32)).sum();
                let exact = fact(a) * fact(b) / fact(a + b + 2);
                assert!((q - exact).abs() < 1e-15, "{a} {b}");
            }
        }
    }
}
