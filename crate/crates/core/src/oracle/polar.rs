//! Polar integration around the projection of the observation point.
//!
//! Each sub-triangle (projection, edge) is swept by rays. Along a ray the
//! density is expanded exactly in powers of `ρ`, so the subtracted terms carry
//! no cancellation. The static parts removed from `K'` and `D` are integrated
//! in closed form; for in-plane points they are finite-part integrals.

use std::f64::consts::PI;

use super::quad1d::{self, add, Rule, Vals};
use super::{radial, OracleResult};
use crate::error::{Error, Result};
use crate::geometry::ElementGeometry;
use crate::shapefn::MonomialExpansion;
use crate::{Vec3, C64};

const FOUR_PI: f64 = 4.0 * PI;

/// Coefficients of `N(x_p + ρ cos θ, y_p + ρ sin θ)` in powers of `ρ`.
fn ray_coefficients(n: &MonomialExpansion, xp: f64, yp: f64, c: f64, s: f64) -> Vec<f64> {
    let p = n.order();
    let binom_pow = |base: f64, dir: f64, e: usize| {
        // (base + dir ρ)^e
        let mut bin = 1.0;
        (0..=e)
            .map(|m| {
                let t = bin * base.powi((e - m) as i32) * dir.powi(m as i32);
                bin = bin * (e - m) as f64 / (m + 1) as f64;
                t
            })
            .collect::<Vec<_>>()
    };
    let mut out = vec![0.0; p + 1];
    for (b, cc, coef) in n.terms() {
        if coef == 0.0 {
            continue;
        }
        let xs = binom_pow(xp, c, b);
        let ys = binom_pow(yp, s, cc);
        for (i, xv) in xs.iter().enumerate() {
            for (j, yv) in ys.iter().enumerate() {
                out[i + j] += coef * xv * yv;
            }
        }
    }
    out
}

/// `Σ_{m >= from} q_m ρ^m`
fn tail(q: &[f64], from: usize, rho: f64) -> f64 {
    if from >= q.len() {
        return 0.0;
    }
    q[from..].iter().rev().fold(0.0, |acc, &v| acc * rho + v) * rho.powi(from as i32)
}

/// `ρ G'(ρ) + 1 / (4πρ)` without cancellation at small `kρ`.
fn regular_part(k: f64, rho: f64) -> C64 {
    let x = k * rho;
    if x < 0.1 {
        // Σ_{m>=2} (ix)^m (m - 1) / m!
        let ix = C64::new(0.0, x);
        let mut term = ix;
        let mut sum = C64::new(0.0, 0.0);
        for m in 2..20 {
            term = term * ix / m as f64;
            sum += term * (m - 1) as f64;
        }
        sum / (FOUR_PI * rho)
    } else {
        (C64::from_polar(1.0, x) * C64::new(-1.0, x) + 1.0) / (FOUR_PI * rho)
    }
}

struct Setup<'a> {
    density: &'a MonomialExpansion,
    k: f64,
    xp: f64,
    yp: f64,
    h: f64,
    n: Vec3,
    tol: f64,
    rule: Rule,
    evals: usize,
}

impl Setup<'_> {
    /// Ray integral of `[V, K, K', D]` along direction `θ` out to `R`.
    fn ray(&mut self, theta: f64, big_r: f64) -> Vals {
        let (s, c) = theta.sin_cos();
        let q = ray_coefficients(self.density, self.xp, self.yp, c, s);
        let t = self.n.x * c + self.n.y * s;
        let n3 = self.n.z;
        let k = self.k;
        let h = self.h;
        let n0 = q[0];
        let rule = &self.rule;
        let tol = self.tol * 1e-2;

        if h == 0.0 {
            let q1 = q.get(1).copied().unwrap_or(0.0);
            let o = quad1d::integrate(
                rule,
                |rho| {
                    let [g, g1, _] = radial(k, rho);
                    let d1 = tail(&q, 1, rho);
                    let d2 = tail(&q, 2, rho);
                    let nn = n0 + d1;
                    [
                        g * (nn * rho),
                        C64::new(0.0, 0.0),
                        -g1 * (d1 * rho * t) - regular_part(k, rho) * (n0 * t),
                        g1 * (d2 * n3) + regular_part(k, rho) * (q1 * n3),
                    ]
                },
                0.0,
                big_r,
                tol,
                1e-300,
                400,
            );
            self.evals += o.evals;
            let [gr, _, _] = radial(k, big_r);
            let ln = big_r.ln() / FOUR_PI;
            let mut v = o.value;
            // fp ∫_0^R ρ G' dρ = -ln R / 4π + ∫ regular part; fp ∫_0^R G' dρ = G(R) - ik/4π
            v[2] += -(n0 * t) * (-ln);
            v[3] += (gr - C64::new(0.0, k / FOUR_PI)) * (n0 * n3) + C64::new(-ln, 0.0) * (q1 * n3);
            return v;
        }

        let ah = h.abs();
        let top = (big_r / ah).asinh();
        let o = quad1d::integrate(
            rule,
            |tau| {
                let rho = ah * tau.sinh();
                let r = ah * tau.cosh();
                let [g, g1, g2] = radial(k, r);
                let d1 = tail(&q, 1, rho);
                let nn = n0 + d1;
                let g1r = g1 / r;
                let dg1r = g2 / r - g1 / (r * r);
                let g1_lap = -1.0 / (FOUR_PI * r * r);
                let dg1r_lap = 3.0 / (FOUR_PI * r.powi(4));
                let kd = dg1r * (h * h / r) + g1r;
                let w = rho * r;
                [
                    g * (nn * w),
                    g1 * (-h / r * nn * w),
                    (g1 * (h * n3 / r * nn) - (g1 * nn - n0 * g1_lap) * (t * rho / r)) * w,
                    (kd * (d1 * n3) - (dg1r * nn - n0 * dg1r_lap) * (t * h * rho / r)) * w,
                ]
            },
            0.0,
            top,
            tol,
            1e-300,
            400,
        );
        self.evals += o.evals;
        let rr = big_r.hypot(h);
        let mut v = o.value;
        let eh = C64::from_polar(1.0, k * ah);
        let er = C64::from_polar(1.0, k * rr);
        let phi = (er * C64::new(big_r * big_r, k * rr * h * h) / rr.powi(3) - C64::new(0.0, k) * eh) / FOUR_PI;
        v[2] += C64::new(t * n0 / FOUR_PI * (top - big_r / rr), 0.0);
        v[3] += phi * (n0 * n3) - C64::new(t * n0 * big_r.powi(3) / (FOUR_PI * h * rr.powi(3)), 0.0);
        v
    }
}

pub(super) fn polar_potentials(
    geom: &ElementGeometry,
    density: &MonomialExpansion,
    k: f64,
    p: &Vec3,
    n_p: &Vec3,
    tol: f64,
) -> Result<OracleResult> {
    let local = geom.to_local(p);
    let n = Vec3::new(geom.i_hat.dot(n_p), geom.j_hat.dot(n_p), geom.k_hat.dot(n_p));
    let h = if local.z.abs() <= 1e-14 * geom.diameter { 0.0 } else { local.z };
    let mut setup = Setup {
        density,
        k,
        xp: local.x,
        yp: local.y,
        h,
        n,
        tol,
        rule: Rule::new(),
        evals: 0,
    };
    let [[x2, x3], [y2, y3]] = geom.xi;
    let verts = [[0.0, 0.0], [x2, y2], [x3, y3]];
    let mut total = quad1d::zero();
    let mut error = 0.0;
    let mut ok = true;
    for j in 0..3 {
        let a = verts[j];
        let b = verts[(j + 1) % 3];
        let (ex, ey) = (b[0] - a[0], b[1] - a[1]);
        let len = ex.hypot(ey);
        let (nx, ny) = (ey / len, -ex / len);
        let d = (a[0] - local.x) * nx + (a[1] - local.y) * ny;
        if d <= 1e-14 * geom.diameter {
            continue;
        }
        let tn = ny.atan2(nx);
        let wrap = |v: f64| (v + PI).rem_euclid(2.0 * PI) - PI;
        let alpha = wrap((a[1] - local.y).atan2(a[0] - local.x) - tn);
        let beta = wrap((b[1] - local.y).atan2(b[0] - local.x) - tn);
        let mut pieces = vec![];
        if alpha < 0.0 && beta > 0.0 {
            pieces.push((alpha, 0.0));
            pieces.push((0.0, beta));
        } else {
            pieces.push((alpha, beta));
        }
        for (lo, hi) in pieces {
            let rule = Rule::new();
            let o = quad1d::integrate(
                &rule,
                |phi| setup.ray(tn + phi, d / phi.cos()),
                lo,
                hi,
                tol * 0.1,
                1e-300,
                4000,
            );
            ok &= o.converged;
            error += o.error;
            add(&mut total, &o.value);
        }
    }
    let scale = quad1d::norm(&total);
    if !ok && error > tol * scale {
        return Err(Error::NotConverged {
            estimate: error,
            tolerance: tol * scale,
        });
    }
    Ok(OracleResult {
        values: total,
        error,
        evaluations: setup.evals,
    })
}
