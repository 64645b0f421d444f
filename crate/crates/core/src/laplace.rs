//! Edge primitives and point terms for the Laplace kernel `1 / (4π r)`.
//!
//! For a monomial density `x^b y^c` the surface integral of `x^b y^c r^{a-1} / 4π`
//! equals the sum over edges of the primitives `ξ_{b,c,a}` evaluated at the edge
//! endpoints, plus the point term `T_{b,c,a}` when the observation point projects
//! strictly inside the element. The six derivative families give the double-layer,
//! gradient and hypersingular quantities.

use std::f64::consts::PI;

use crate::elemint::{ElemTables, ObsDerivative};
use crate::error::Result;
use crate::geometry::EdgeScalars;
use crate::kappa::{kappa_derivative, kappa_table, KappaDerivative};
use crate::table::{sweep, MonomialTable, SweepOrder};

const FOUR_PI: f64 = 4.0 * PI;

/// The seven families of a Laplace primitive table.
///
/// `z` is the derivative with respect to the source height; `xp`, `yp`, `zp`
/// are derivatives with respect to the observation point. At the edge level
/// `xp` and `yp` refer to the edge frame, at the element level to the element
/// frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Families<T> {
    pub base: MonomialTable<T>,
    pub z: MonomialTable<T>,
    pub xp: MonomialTable<T>,
    pub yp: MonomialTable<T>,
    pub z_xp: MonomialTable<T>,
    pub z_yp: MonomialTable<T>,
    pub z_zp: MonomialTable<T>,
}

/// `ξ_{b+1,c,a} = x_p ξ_{b,c,a} - b/(a+1) ξ_{b-1,c,a+2} + e_b(b, c, a)` and the
/// matching `c` recurrence, seeded along the `a` axis.
#[inline(always)]
fn fill(
    p: usize,
    order: SweepOrder,
    xp: f64,
    yp: f64,
    seed: impl Fn(i32) -> f64,
    eb: impl Fn(usize, usize, i32) -> f64,
    ec: impl Fn(usize, usize, i32) -> f64,
) -> MonomialTable<f64> {
    sweep(
        p,
        order,
        seed,
        |t, b, c, a| {
            let mut v = xp * t.get(b, c, a) + eb(b, c, a);
            if b > 0 {
                v -= b as f64 / (a + 1) as f64 * t.get(b - 1, c, a + 2);
            }
            v
        },
        |t, c, a| {
            let mut v = yp * t.get(0, c, a) + ec(0, c, a);
            if c > 0 {
                v -= c as f64 / (a + 1) as f64 * t.get(0, c - 1, a + 2);
            }
            v
        },
    )
}

pub fn laplace_edge_tables(
    s: &EdgeScalars,
    p: usize,
    tau_a: f64,
    order: SweepOrder,
) -> Result<Families<f64>> {
    let e = ElemTables::new(s.x_d, s.y_p, s.z_p, p as i32 + 2, tau_a)?;
    // the recurrences read κ only at b + c <= p - 1
    let kap = kappa_table(s, &e, p.saturating_sub(1), p as i32 + 1);
    let k_xp = kappa_derivative(&kap, s, KappaDerivative::Xp)?;
    let k_zxp = kappa_derivative(&kap, s, KappaDerivative::ZXp)?;

    let (xp, yp) = (s.x_p, s.y_p_elem);
    let (in_, jn) = (s.i_dot_n, s.j_dot_n);
    let (x_d, y_e, z_e) = (s.x_d, s.y_p, s.z_p);
    let (yd, zd) = (s.y_d(), s.z_d());
    let rho2 = s.rho2;
    let r = s.r;
    let (beta_x, beta_y) = (-in_, -jn);

    macro_rules! run {
        ($seed:expr, $eb:expr, $ec:expr $(,)?) => {
            fill(p, order, xp, yp, $seed, $eb, $ec)
        };
    }

    let base = run!(
        &|a| -e.k(a + 1) / ((a + 1) as f64 * FOUR_PI),
        &|b, c, a| in_ / ((a + 1) as f64 * FOUR_PI) * kap.get(b, c, a + 1),
        &|b, c, a| jn / ((a + 1) as f64 * FOUR_PI) * kap.get(b, c, a + 1),
    );
    let z = run!(
        &|a| z_e * e.k(a - 1) / FOUR_PI,
        &|b, c, a| in_ / FOUR_PI * zd * kap.get(b, c, a - 1),
        &|b, c, a| jn / FOUR_PI * zd * kap.get(b, c, a - 1),
    );
    let xpf = run!(
        &|a| e.dk(ObsDerivative::Xp, a + 1) * (-1.0 / ((a + 1) as f64 * FOUR_PI)),
        &|b, c, a| {
            s.alpha_x * base.get(b, c, a) + in_ / ((a + 1) as f64 * FOUR_PI) * k_xp.get(b, c, a + 1)
        },
        &|b, c, a| {
            s.alpha_y * base.get(b, c, a) + jn / ((a + 1) as f64 * FOUR_PI) * k_xp.get(b, c, a + 1)
        },
    );
    let ypf = run!(
        &|a| (e.i(a - 1) - x_d * r.powi(a + 1) / ((a + 1) as f64 * rho2)) / FOUR_PI,
        &|b, c, a| beta_x * base.get(b, c, a) - in_ / FOUR_PI * yd * kap.get(b, c, a - 1),
        &|b, c, a| beta_y * base.get(b, c, a) - jn / FOUR_PI * yd * kap.get(b, c, a - 1),
    );
    let z_xp = run!(
        &|a| z_e * y_e * r.powi(a - 1) / (FOUR_PI * rho2),
        &|b, c, a| {
            s.alpha_x * z.get(b, c, a) + in_ / ((a + 1) as f64 * FOUR_PI) * k_zxp.get(b, c, a + 1)
        },
        &|b, c, a| {
            s.alpha_y * z.get(b, c, a) + jn / ((a + 1) as f64 * FOUR_PI) * k_zxp.get(b, c, a + 1)
        },
    );
    let z_yp = run!(
        &|a| z_e * (x_d * r.powi(a - 1) / rho2 - (a - 1) as f64 * e.i(a - 3)) / FOUR_PI,
        &|b, c, a| {
            beta_x * z.get(b, c, a) - in_ * (a - 1) as f64 / FOUR_PI * yd * zd * kap.get(b, c, a - 3)
        },
        &|b, c, a| {
            beta_y * z.get(b, c, a) - jn * (a - 1) as f64 / FOUR_PI * yd * zd * kap.get(b, c, a - 3)
        },
    );
    let zz = |b, c, a: i32| kap.get(b, c, a - 1) + zd * zd * (a - 1) as f64 * kap.get(b, c, a - 3);
    let z_zp = run!(
        &|a| (a as f64 * e.k(a - 1) + (a - 1) as f64 * y_e * e.i(a - 3)) / FOUR_PI,
        &|b, c, a| -in_ / FOUR_PI * zz(b, c, a),
        &|b, c, a| -jn / FOUR_PI * zz(b, c, a),
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

/// Point terms at the projection `(x_p, y_p)` of an observation point at height `h`.
pub fn laplace_element_tables(
    x_p: f64,
    y_p: f64,
    h: f64,
    p: usize,
    tau_h: f64,
    order: SweepOrder,
) -> Families<f64> {
    let ah = h.abs();
    let off = ah > tau_h;
    macro_rules! run {
        ($seed:expr, $eb:expr, $ec:expr $(,)?) => {
            fill(p, order, x_p, y_p, $seed, $eb, $ec)
        };
    }
    let zero = |_: usize, _: usize, _: i32| 0.0;

    let base = run!(&|a| -ah.powi(a + 1) / (2.0 * (a + 1) as f64), &zero, &zero);
    let z = run!(
        &|a| if off { h * ah.powi(a - 1) / 2.0 } else { 0.0 },
        &zero,
        &zero,
    );
    let xp = run!(&|_| 0.0, &|b, c, a| base.get(b, c, a), &zero);
    let yp = run!(&|_| 0.0, &zero, &|b, c, a| base.get(b, c, a));
    let z_xp = run!(&|_| 0.0, &|b, c, a| z.get(b, c, a), &zero);
    let z_yp = run!(&|_| 0.0, &zero, &|b, c, a| z.get(b, c, a));
    let z_zp = run!(
        &|a| match a {
            0 => 0.0,
            1 => 0.5,
            _ if off => a as f64 * ah.powi(a - 1) / 2.0,
            _ => 0.0,
        },
        &zero,
        &zero,
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
