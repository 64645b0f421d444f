//! Edge primitives `κ_{b,c,a} = ∫ x^b y^c r^a dx_d` of polynomial-weighted radial powers.
//!
//! On edge `j`, `x = α_x x_d - α̂` and `y = α_y x_d - β̂`, so the table follows from
//! `i_a` by two-term seeds and three-term recurrences in `b` and `c`. The table
//! carries ghost entries down to `a = -3` for the derivative identities.

use crate::elemint::ElemTables;
use crate::error::{Error, Result};
use crate::geometry::EdgeScalars;
use crate::table::{powers, MonomialTable};

pub const KAPPA_A_MIN: i32 = -3;

pub fn kappa_table(
    s: &EdgeScalars,
    e: &ElemTables,
    bc_max: usize,
    a_top: i32,
) -> MonomialTable<f64> {
    let mut t = MonomialTable::new(bc_max, KAPPA_A_MIN, a_top);
    let (ax, ay, ah, bh, g2) = (s.alpha_x, s.alpha_y, s.alpha_hat, s.beta_hat, s.gamma2);
    let r = s.r;
    // ∫ x_d r^a dx_d
    let xr = |a: i32| {
        if a == -2 {
            r.ln()
        } else {
            r.powi(a + 2) / (a + 2) as f64
        }
    };

    for a in KAPPA_A_MIN..=a_top {
        t.set(0, 0, a, e.i(a));
    }
    if bc_max == 0 {
        return t;
    }
    for a in KAPPA_A_MIN..=a_top - 1 {
        t.set(0, 1, a, ay * xr(a) - bh * e.i(a));
        t.set(1, 0, a, ax * xr(a) - ah * e.i(a));
    }
    let cyy = bh * bh + ay * ay * g2;
    let cxx = ah * ah + ax * ax * g2;
    for c in 0..bc_max.saturating_sub(1) {
        for a in KAPPA_A_MIN..=t.a_max(0, c + 2) {
            let v = ay * ay * t.get(0, c, a + 2) - 2.0 * bh * t.get(0, c + 1, a) - cyy * t.get(0, c, a);
            t.set(0, c + 2, a, v);
        }
    }
    for b in 0..bc_max.saturating_sub(1) {
        for a in KAPPA_A_MIN..=t.a_max(b + 2, 0) {
            let v = ax * ax * t.get(b, 0, a + 2) - 2.0 * ah * t.get(b + 1, 0, a) - cxx * t.get(b, 0, a);
            t.set(b + 2, 0, a, v);
        }
    }
    let cxy = ah * bh + ax * ay * g2;
    for c in 0..bc_max - 1 {
        for b in 0..bc_max - 1 - c {
            for a in KAPPA_A_MIN..=t.a_max(b + 1, c + 1) {
                let v = ax * ay * t.get(b, c, a + 2)
                    - bh * t.get(b + 1, c, a)
                    - ah * t.get(b, c + 1, a)
                    - cxy * t.get(b, c, a);
                t.set(b + 1, c + 1, a, v);
            }
        }
    }
    t
}

/// Which partial derivative of `κ` to build.
///
/// `Xp` and `Yp` differentiate with respect to the edge-frame coordinates of the
/// observation point, `Z` with respect to the source height, and `ZXp` is the
/// mixed second derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KappaDerivative {
    Xp,
    Yp,
    Z,
    ZXp,
}

pub fn kappa_derivative(
    kappa: &MonomialTable<f64>,
    s: &EdgeScalars,
    which: KappaDerivative,
) -> Result<MonomialTable<f64>> {
    let bc_max = kappa.bc_max();
    let a_top = kappa.a_top();
    let base = kappa.a_min();
    let (xs, ys) = (powers(s.x, 0, bc_max as i32), powers(s.y, 0, bc_max as i32));
    let poly = |b: usize, c: usize| xs[b] * ys[c];
    let rs = powers(s.r, base - 2, a_top);
    let rpow = |a: i32| rs[(a - base + 2) as usize];
    let lower = |b: usize, c: usize, a: i32| {
        let mut v = 0.0;
        if b > 0 {
            v += s.alpha_x * b as f64 * kappa.get(b - 1, c, a);
        }
        if c > 0 {
            v += s.alpha_y * c as f64 * kappa.get(b, c - 1, a);
        }
        v
    };
    if which == KappaDerivative::Xp {
        return Ok(MonomialTable::from_fn(bc_max, base, a_top, |b, c, a| {
            -poly(b, c) * rpow(a) + lower(b, c, a)
        }));
    }
    if base > -3 {
        return Err(Error::MissingGhostEntries {
            needed: -3,
            available: base,
        });
    }
    let a_min = base + 2;
    let (yd, zd) = (s.y_d(), s.z_d());
    Ok(MonomialTable::from_fn(bc_max, a_min, a_top, |b, c, a| {
        let af = a as f64;
        match which {
            KappaDerivative::Yp => -af * yd * kappa.get(b, c, a - 2),
            KappaDerivative::Z => af * zd * kappa.get(b, c, a - 2),
            KappaDerivative::ZXp => af * zd * (-poly(b, c) * rpow(a - 2) + lower(b, c, a - 2)),
            KappaDerivative::Xp => unreachable!(),
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ElementGeometry;
    use crate::{gauss, Vec3};

    fn setup() -> (ElementGeometry, Vec3) {
        let g = ElementGeometry::from_arrays([[0.1, 0.0, 0.2], [1.2, 0.3, 0.0], [0.4, 1.1, 0.5]])
            .unwrap();
        (g, Vec3::new(0.5, 0.9, 0.7))
    }

    #[test]
    fn kappa_matches_edge_quadrature() {
        let (g, rp) = setup();
        for j in 0..3 {
            let s0 = g.edge_scalars(&rp, j, false);
            let s1 = g.edge_scalars(&rp, j, true);
            let e0 = ElemTables::new(s0.x_d, s0.y_p, s0.z_p, 8, 1e-14).unwrap();
            let e1 = ElemTables::new(s1.x_d, s1.y_p, s1.z_p, 8, 1e-14).unwrap();
            let k0 = kappa_table(&s0, &e0, 4, 6);
            let k1 = kappa_table(&s1, &e1, 4, 6);
            let edge = &g.edges[j];
            for (b, c, a) in k0.indices() {
                let q: f64 = gauss::on_interval(30, 0.0, edge.length)
                    .map(|(t, w)| {
                        let p = edge.start + edge.i_hat * t;
                        let l = g.to_local(&p);
                        w * l.x.powi(b as i32) * l.y.powi(c as i32) * (p - rp).norm().powi(a)
                    })
                    .sum();
                let d = k1.get(b, c, a) - k0.get(b, c, a);
                assert!((d - q).abs() < 1e-12 * q.abs().max(1.0), "({b},{c},{a}) {d} {q}");
            }
        }
    }

    #[test]
    fn ghost_entries_required() {
        let (g, rp) = setup();
        let s = g.edge_scalars(&rp, 0, true);
        let e = ElemTables::new(s.x_d, s.y_p, s.z_p, 6, 1e-14).unwrap();
        let k = kappa_table(&s, &e, 2, 4);
        let d = kappa_derivative(&k, &s, KappaDerivative::Yp).unwrap();
        assert_eq!(d.get(0, 0, 2), -2.0 * s.y_d() * k.get(0, 0, 0));
        let mut trimmed = MonomialTable::new(2, -1, 4);
        for (b, c, a) in trimmed.clone().indices() {
            trimmed.set(b, c, a, k.get(b, c, a));
        }
        assert!(matches!(
            kappa_derivative(&trimmed, &s, KappaDerivative::Z),
            Err(Error::MissingGhostEntries { .. })
        ));
    }
}
