//! Edge primitives and point terms for the Helmholtz kernel `e^{ikr} / (4π r)`.
//!
//! The oscillatory factor on each edge is re-expanded about the distance `r0`
//! from the observation point to the start vertex:
//! `e^{ikr} ≈ e^{ik r0} Σ_{l<p_e} A_l r^l`. The edge integrals then reduce to the
//! Laplace primitives `κ`, `i` and `k`, while the recurrences in `b`, `c` and `a`
//! carry the exact `1 / (ik)` structure of the Helmholtz fields.

use std::f64::consts::PI;

use crate::elemint::ElemTables;
use crate::error::{Error, Result};
use crate::geometry::EdgeScalars;
use crate::kappa::{kappa_table, KAPPA_A_MIN};
use crate::laplace::Families;
use crate::table::{powers, sweep, MonomialTable, SweepOrder};
use crate::C64;

const FOUR_PI: f64 = 4.0 * PI;

/// Coefficients of `e^{ik(r - r0)} ≈ Σ_{l<p_e} A_l r^l`.
#[derive(Debug, Clone, PartialEq)]
pub struct Taylor {
    pub k: f64,
    pub r0: f64,
    pub coeffs: Vec<C64>,
    /// Bound on the dropped remainder, `(k Δr)^{p_e} / p_e!`.
    pub tail: f64,
}

impl Taylor {
    pub fn p_e(&self) -> usize {
        self.coeffs.len()
    }

    /// `out[i] = scale Σ_l α_l f[i + l]`; `f` needs `out.len() + p_e - 1` values.
    pub fn correlate(&self, f: &[f64], scale: C64, out: &mut [C64]) {
        const W: usize = 8;
        // independent accumulators per output keep the pipeline full
        for (chunk, o) in out.chunks_mut(W).enumerate() {
            let n = o.len();
            let f = &f[chunk * W..];
            let (mut re, mut im) = ([0.0; W], [0.0; W]);
            for (l, al) in self.coeffs.iter().enumerate() {
                for (j, &v) in f[l..l + n].iter().enumerate() {
                    re[j] += al.re * v;
                    im[j] += al.im * v;
                }
            }
            for (j, o) in o.iter_mut().enumerate() {
                *o = C64::new(re[j], im[j]) * scale;
            }
        }
    }

    pub fn phase(&self) -> C64 {
        C64::from_polar(1.0, self.k * self.r0)
    }

    pub fn eval(&self, r: f64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * r + c) * self.phase()
    }
}

/// Smallest number of terms whose remainder bound `(k Δr)^p / p!` is at most `tol`.
pub fn expansion_order(k: f64, dr: f64, tol: f64, pe_max: usize) -> Result<(usize, f64)> {
    let x = k * dr;
    let mut term = 1.0;
    for p in 1..=pe_max {
        term *= x / p as f64;
        if term <= tol {
            return Ok((p, term));
        }
    }
    Err(Error::ExpansionNotConverged {
        k_dr: x,
        tail: term,
        terms: pe_max,
    })
}

pub fn taylor_coefficients(k: f64, r0: f64, p_e: usize) -> Vec<C64> {
    let ik = C64::new(0.0, k);
    let mik_r0 = C64::new(0.0, -k * r0);
    // partial[m] = Σ_{j<=m} (-ik r0)^j / j!
    let mut partial = Vec::with_capacity(p_e);
    let mut term = C64::new(1.0, 0.0);
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..p_e {
        if j > 0 {
            term *= mik_r0 / j as f64;
        }
        acc += term;
        partial.push(acc);
    }
    let mut pref = C64::new(1.0, 0.0);
    (0..p_e)
        .map(|l| {
            if l > 0 {
                pref *= ik / l as f64;
            }
            pref * partial[p_e - 1 - l]
        })
        .collect()
}

/// Largest deviation of `r` from `r0` along an edge, given the endpoint distances
/// and the edge-frame offsets of the observation point.
pub fn edge_radius_spread(start: &EdgeScalars, end: &EdgeScalars) -> f64 {
    let r0 = start.r;
    let lo = start.x_d.min(end.x_d);
    let hi = start.x_d.max(end.x_d);
    let closest = 0.0f64.clamp(lo, hi);
    let r_min = (start.gamma2 + closest * closest).sqrt();
    let r_max = start.r.max(end.r);
    (r_max - r0).max(r0 - r_min)
}

fn checked_spread(k: f64, start: &EdgeScalars, end: &EdgeScalars) -> Result<f64> {
    let dr = edge_radius_spread(start, end);
    if k * dr > MAX_K_DR {
        return Err(Error::ExpansionNotConverged {
            k_dr: k * dr,
            tail: f64::INFINITY,
            terms: 0,
        });
    }
    Ok(dr)
}

/// Expansion with exactly `p_e` terms, regardless of the remainder bound.
pub fn fixed_expansion_for_edge(k: f64, start: &EdgeScalars, end: &EdgeScalars, p_e: usize) -> Result<Taylor> {
    let dr = checked_spread(k, start, end)?;
    let p_e = p_e.max(1);
    let tail = (1..=p_e).fold(1.0, |t, n| t * k * dr / n as f64);
    Ok(Taylor {
        k,
        r0: start.r,
        coeffs: taylor_coefficients(k, start.r, p_e),
        tail,
    })
}

/// Largest `k Δr` for which the edge expansion is attempted.
pub const MAX_K_DR: f64 = 1.0;

/// Adaptive expansion for an edge feeding tables of degree `p`.
///
/// The `1/(ik)` recurrences amplify the truncation error by up to
/// `(k Δr)^{-(p+1)}`, so the tail is driven below `tol` times that factor.
pub fn expansion_for_edge(
    k: f64,
    start: &EdgeScalars,
    end: &EdgeScalars,
    p: usize,
    tol: f64,
    pe_max: usize,
) -> Result<Taylor> {
    let dr = checked_spread(k, start, end)?;
    let target = tol * (k * dr).powi(p as i32 + 1).min(1.0);
    let (p_e, tail) = expansion_order(k, dr, target, pe_max)?;
    Ok(Taylor {
        k,
        r0: start.r,
        coeffs: taylor_coefficients(k, start.r, p_e),
        tail,
    })
}

/// `θ_{b,c,a} = ∫ x^b y^c r^a e^{ikr} dx_d` and its observation-point derivatives.
struct Theta {
    base: MonomialTable<C64>,
    z: MonomialTable<C64>,
    xp: MonomialTable<C64>,
    yp: MonomialTable<C64>,
    z_xp: MonomialTable<C64>,
    z_yp: MonomialTable<C64>,
    z_zp: MonomialTable<C64>,
}

fn theta_tables(s: &EdgeScalars, e: &ElemTables, tay: &Taylor, p: usize) -> Theta {
    let p_e = tay.p_e();
    // the recurrences for degree p read θ only at b + c + a <= p - 1
    let q = p.saturating_sub(1);
    let a_top = p as i32 - 1;
    let kap = kappa_table(s, e, q, a_top + p_e as i32 - 1);
    let ph = tay.phase();
    let k = tay.k;
    let ik = C64::new(0.0, k);
    let mut base = MonomialTable::new(q, KAPPA_A_MIN, a_top);
    for c in 0..=q {
        for b in 0..=q - c {
            tay.correlate(kap.run(b, c), ph, base.run_mut(b, c));
        }
    }
    let (yd, zd, r) = (s.y_d(), s.z_d(), s.r);
    let er = C64::from_polar(1.0, k * r);
    let (xs, ys) = (powers(s.x, 0, q as i32), powers(s.y, 0, q as i32));
    let poly = |b: usize, c: usize| xs[b] * ys[c];
    let rs = powers(r, -2, a_top);
    let rpow = |a: i32| rs[(a + 2) as usize];
    let lower = |t: &MonomialTable<C64>, b: usize, c: usize, a: i32| {
        let mut v = C64::new(0.0, 0.0);
        if b > 0 {
            v += t.get(b - 1, c, a) * (s.alpha_x * b as f64);
        }
        if c > 0 {
            v += t.get(b, c - 1, a) * (s.alpha_y * c as f64);
        }
        v
    };
    // a θ_{a-2} + ik θ_{a-1}, with the first term dropped at a = 0
    let radial = |t: &MonomialTable<C64>, b: usize, c: usize, a: i32| {
        let mut v = ik * t.get(b, c, a - 1);
        if a != 0 {
            v += t.get(b, c, a - 2) * a as f64;
        }
        v
    };

    let z = MonomialTable::from_fn(q, -1, a_top, |b, c, a| radial(&base, b, c, a) * zd);
    let xp = MonomialTable::from_fn(q, 0, a_top, |b, c, a| -er * (poly(b, c) * rpow(a)) + lower(&base, b, c, a));
    let yp = MonomialTable::from_fn(q, 0, a_top, |b, c, a| -radial(&base, b, c, a) * yd);
    let z_xp = MonomialTable::from_fn(q, 0, a_top, |b, c, a| {
        let endpoint = -er * (C64::new(a as f64, k * r) * (poly(b, c) * rpow(a - 2) * zd));
        endpoint + lower(&z, b, c, a)
    });
    let z_yp = MonomialTable::from_fn(q, 0, a_top, |b, c, a| -radial(&z, b, c, a) * yd);
    let z_zp = MonomialTable::from_fn(q, 0, a_top, |b, c, a| -radial(&z, b, c, a) * zd - radial(&base, b, c, a));
    Theta {
        base,
        z,
        xp,
        yp,
        z_xp,
        z_yp,
        z_zp,
    }
}

/// Helmholtz edge primitives at one endpoint. `tay` must be the expansion of the
/// edge this endpoint belongs to.
/// Helmholtz form of the `b`/`c` recurrences, with an `a`-axis seed that
/// sees its previous value.
#[allow(clippy::too_many_arguments)]
#[inline(always)]
fn fill(
    p: usize,
    order: SweepOrder,
    xp: f64,
    yp: f64,
    inv_ik: C64,
    axis: impl Fn(i32, C64) -> C64,
    eb: impl Fn(usize, usize, i32) -> C64,
    ec: impl Fn(usize, usize, i32) -> C64,
) -> MonomialTable<C64> {
    let mut prev = C64::new(0.0, 0.0);
    sweep(
        p,
        order,
        |a| {
            prev = axis(a, prev);
            prev
        },
        |t, b, c, a| {
            let mut v = t.get(b, c, a) * xp + eb(b, c, a);
            if a > 0 {
                v += (t.get(b, c, a - 1) * xp - t.get(b + 1, c, a - 1)) * (a as f64 * inv_ik);
            }
            if b > 0 {
                v -= t.get(b - 1, c, a + 1) * (b as f64 * inv_ik);
            }
            v
        },
        |t, c, a| {
            let mut v = t.get(0, c, a) * yp + ec(0, c, a);
            if a > 0 {
                v += (t.get(0, c, a - 1) * yp - t.get(0, c + 1, a - 1)) * (a as f64 * inv_ik);
            }
            if c > 0 {
                v -= t.get(0, c - 1, a + 1) * (c as f64 * inv_ik);
            }
            v
        },
    )
}

pub fn helmholtz_edge_tables(
    s: &EdgeScalars,
    tay: &Taylor,
    p: usize,
    tau_a: f64,
    order: SweepOrder,
) -> Result<Families<C64>> {
    let p_e = tay.p_e();
    let k = tay.k;
    let e = ElemTables::new(s.x_d, s.y_p, s.z_p, (p + p_e) as i32 + 1, tau_a)?;
    let th = theta_tables(s, &e, tay, p);

    let ik = C64::new(0.0, k);
    let inv_ik = C64::new(0.0, -1.0 / k);
    let pre = tay.phase() / FOUR_PI;
    // Σ_l α_l f(l + s) e^{ik r0} / 4π for the s values the recursions touch
    let sums = |f: &dyn Fn(i32) -> f64, lo: i32, hi: i32| -> Vec<C64> {
        let vals: Vec<f64> = (lo..hi + p_e as i32).map(f).collect();
        let mut out = vec![C64::new(0.0, 0.0); (hi - lo + 1) as usize];
        tay.correlate(&vals, pre, &mut out);
        out
    };
    let hi = p as i32;
    let (ss_t, uu_t, zz_t) = (sums(&|m| e.k(m), -1, hi), sums(&|m| e.i(m), -3, hi), sums(&|m| e.zz_k(m), -3, hi));
    let ss = |s_: i32| ss_t[(s_ + 1) as usize];
    let uu = |s_: i32| uu_t[(s_ + 3) as usize];
    let zz = |s_: i32| zz_t[(s_ + 3) as usize];
    let (xp, yp) = (s.x_p, s.y_p_elem);
    let (in_, jn) = (s.i_dot_n, s.j_dot_n);
    let (x_d, y_e, z_e, zd, r, rho2) = (s.x_d, s.y_p, s.z_p, s.z_d(), s.r, s.rho2);
    let (beta_x, beta_y) = (-in_, -jn);
    let er = C64::from_polar(1.0, k * r);

    macro_rules! run {
        ($axis:expr, $eb:expr, $ec:expr $(,)?) => {
            fill(p, order, xp, yp, inv_ik, $axis, $eb, $ec)
        };
    }
    // (a + 1) / (ik) applied to the previous a-axis entry
    let step = |a: i32, prev: C64| -prev * (a as f64 * inv_ik);
    fn scaled(t: &MonomialTable<C64>, f: C64) -> impl Fn(usize, usize, i32) -> C64 + '_ {
        move |b, c, a| t.get(b, c, a) * f
    }
    let theta_term = |t, dot: f64| scaled(t, inv_ik * (dot / FOUR_PI));
    // dot-product extra terms of a derivative family: w (F_a + a/(ik) F_{a-1})
    let shift = |t: &MonomialTable<C64>, b: usize, c: usize, a: i32, w: f64| {
        let mut v = t.get(b, c, a) * w;
        if a > 0 {
            v += t.get(b, c, a - 1) * (w * a as f64) * inv_ik;
        }
        v
    };

    let tb = theta_term(&th.base, in_);
    let tc = theta_term(&th.base, jn);
    let base = run!(
        &|a, prev| {
            if a == 0 {
                -ss(0) * inv_ik
            } else {
                step(a, prev) - ss(a) * inv_ik
            }
        },
        &tb,
        &tc,
    );

    let tb = theta_term(&th.z, in_);
    let tc = theta_term(&th.z, jn);
    let z = run!(
        &|a, prev| {
            if a == 0 {
                -ss(-1) * zd
            } else {
                step(a, prev) - (ss(a - 1) + ss(a - 2) * (a as f64 * inv_ik)) * zd
            }
        },
        &tb,
        &tc,
    );

    let ep = |a: i32| er * r.powi(a) / (FOUR_PI * rho2);
    let tb = theta_term(&th.xp, in_);
    let tc = theta_term(&th.xp, jn);
    let xpf = run!(
        &|a, prev| {
            let src = -ep(a) * y_e * inv_ik;
            if a == 0 {
                src
            } else {
                step(a, prev) + src
            }
        },
        &|b, c, a| shift(&base, b, c, a, s.alpha_x) + tb(b, c, a),
        &|b, c, a| shift(&base, b, c, a, s.alpha_y) + tc(b, c, a),
    );

    let tb = theta_term(&th.yp, in_);
    let tc = theta_term(&th.yp, jn);
    let ypf = run!(
        &|a, prev| {
            let src = -ep(a) * x_d * inv_ik;
            if a == 0 {
                uu(-1) + src
            } else {
                step(a, prev) + uu(a - 1) + uu(a - 2) * (a as f64 * inv_ik) + src
            }
        },
        &|b, c, a| shift(&base, b, c, a, beta_x) + tb(b, c, a),
        &|b, c, a| shift(&base, b, c, a, beta_y) + tc(b, c, a),
    );

    // y_p z_p e^{ikr} (kr - i a) r^{a-2} / (4π k ρ²)
    let zsrc = |a: i32, w: f64| er * C64::new(k * r, -(a as f64)) * (w * r.powi(a - 2) / (FOUR_PI * k * rho2));
    let tb = theta_term(&th.z_xp, in_);
    let tc = theta_term(&th.z_xp, jn);
    let z_xp = run!(
        &|a, prev| {
            let src = zsrc(a, y_e * z_e);
            if a == 0 {
                src
            } else {
                step(a, prev) + src
            }
        },
        &|b, c, a| shift(&z, b, c, a, s.alpha_x) + tb(b, c, a),
        &|b, c, a| shift(&z, b, c, a, s.alpha_y) + tc(b, c, a),
    );

    let tb = theta_term(&th.z_yp, in_);
    let tc = theta_term(&th.z_yp, jn);
    let z_yp = run!(
        &|a, prev| {
            let src = zsrc(a, x_d * z_e);
            if a == 0 {
                (ik * uu(-2) - uu(-3)) * zd + src
            } else {
                let m = a - 1;
                let u = ik * uu(m - 1)
                    + uu(m - 2) * (2 * m + 1) as f64
                    + uu(m - 3) * ((m * m - 1) as f64) * inv_ik;
                step(a, prev) + u * zd + src
            }
        },
        &|b, c, a| shift(&z, b, c, a, beta_x) + tb(b, c, a),
        &|b, c, a| shift(&z, b, c, a, beta_y) + tc(b, c, a),
    );

    let tb = theta_term(&th.z_zp, in_);
    let tc = theta_term(&th.z_zp, jn);
    let z_zp = run!(
        &|a, prev| {
            if a == 0 {
                ss(-1) + ik * zz(-2) - zz(-3)
            } else {
                let m = a - 1;
                step(a, prev)
                    + ss(m)
                    + ss(m - 1) * (a as f64 * inv_ik)
                    + ik * zz(m - 1)
                    + zz(m - 2) * (2 * m + 1) as f64
                    + zz(m - 3) * ((m * m - 1) as f64) * inv_ik
            }
        },
        &tb,
        &tc,
    );

    Ok(Families {
        base,
        z,
        xp: xpf,
        yp: ypf,
        z_xp,
        z_yp,
        z_zp,
    })
}

/// Helmholtz point terms at the projection `(x_p, y_p)` of an observation point at height `h`.
pub fn helmholtz_element_tables(
    x_p: f64,
    y_p: f64,
    h: f64,
    k: f64,
    p: usize,
    tau_h: f64,
    order: SweepOrder,
) -> Families<C64> {
    let u = h.abs();
    let off = u > tau_h;
    let zd = -h;
    let ik = C64::new(0.0, k);
    let inv_ik = C64::new(0.0, -1.0 / k);
    let eh = C64::from_polar(1.0, k * u);
    let zero = C64::new(0.0, 0.0);

    macro_rules! run {
        ($axis:expr, $eb:expr, $ec:expr $(,)?) => {
            fill(p, order, x_p, y_p, inv_ik, $axis, $eb, $ec)
        };
    }
    let step = |a: i32, prev: C64| -prev * (a as f64 * inv_ik);
    let none = |_: usize, _: usize, _: i32| zero;
    let shift = |t: &MonomialTable<C64>, b: usize, c: usize, a: i32| {
        let mut v = t.get(b, c, a);
        if a > 0 {
            v += t.get(b, c, a - 1) * (a as f64) * inv_ik;
        }
        v
    };

    let base = run!(
        &|a, prev| {
            if a == 0 {
                C64::new(0.0, 0.5 / k) * eh
            } else {
                step(a, prev) - eh * u.powi(a) * 0.5 * inv_ik
            }
        },
        &none,
        &none,
    );
    let z = run!(
        &|a, prev| {
            if !off {
                zero
            } else if a == 0 {
                -eh * (zd / (2.0 * u))
            } else {
                let m = a - 1;
                step(a, prev) + eh * C64::new(-k * u, (m + 1) as f64) * (zd * u.powi(m - 1) / (2.0 * k))
            }
        },
        &none,
        &none,
    );
    let xp = run!(&|_, _| zero, &|b, c, a| shift(&base, b, c, a), &none);
    let yp = run!(&|_, _| zero, &none, &|b, c, a| shift(&base, b, c, a));
    let z_xp = run!(&|_, _| zero, &|b, c, a| shift(&z, b, c, a), &none);
    let z_yp = run!(&|_, _| zero, &none, &|b, c, a| shift(&z, b, c, a));
    let z_zp = run!(
        &|a, prev| {
            if a == 0 {
                ik * eh * 0.5
            } else {
                let m = (a - 1) as f64;
                let mut q = C64::new(-2.0 * (m + 1.0) * k * u.powi(a - 1), -k * k * u.powi(a));
                if a > 1 {
                    q += C64::new(0.0, m * (m + 1.0) * u.powi(a - 2));
                }
                step(a, prev) - eh * q / (2.0 * k)
            }
        },
        &none,
        &none,
    );
    Families {
        base,
        z,
        xp,
        yp,
        z_xp,
        z_yp,
        z_zp,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_reproduces_exponential() {
        let (k, r0) = (1.3, 0.7);
        let c = taylor_coefficients(k, r0, 30);
        let t = Taylor {
            k,
            r0,
            coeffs: c,
            tail: 0.0,
        };
        for r in [0.2, 0.7, 1.5] {
            let exact = C64::from_polar(1.0, k * r);
            assert!((t.eval(r) - exact).norm() < 1e-13);
        }
    }

    #[test]
    fn expansion_order_bounds_tail() {
        let (p, tail) = expansion_order(1.0, 1.0, 1e-12, 32).unwrap();
        assert!(tail <= 1e-12);
        assert_eq!(p, 15);
        assert!(matches!(
            expansion_order(20.0, 2.0, 1e-12, 32),
            Err(Error::ExpansionNotConverged { .. })
        ));
    }
}
