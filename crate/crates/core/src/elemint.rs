//! Closed-form primitives of the two one-dimensional integrals that appear on
//! every edge:
//!
//! * `i_m(x; a) = ∫ r^m dx` with `r² = x² + a²`, for `m >= -3`;
//! * `k_m(x; y', z') = ∫ z' r^m / (x² + z'²) dx` with `r² = x² + y'² + z'²`, for `m >= -1`.
//!
//! In edge-frame terms `x = x_d`, `y' = z_p` and `z' = -y_p`, so that
//! `k_m = -y_p ∫ r^m / ρ² dx_d`. Higher orders come from the upward recurrences
//! `i_{m+2} = (x r^{m+2} + (m+2) a² i_m) / (m+3)` and `k_{m+2} = z' i_m + y'² k_m`.

use crate::error::{Error, Result};

/// Values of `i_m` for `m = -3..=m_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ITable {
    pub x: f64,
    pub a: f64,
    pub r: f64,
    vals: Vec<f64>,
}

impl ITable {
    pub fn get(&self, m: i32) -> f64 {
        self.vals[(m + 3) as usize]
    }

    pub fn m_max(&self) -> i32 {
        self.vals.len() as i32 - 4
    }
}

/// Values of `k_m` for `m = -1..=m_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct KTable {
    vals: Vec<f64>,
}

impl KTable {
    pub fn get(&self, m: i32) -> f64 {
        self.vals[(m + 1) as usize]
    }

    pub fn m_max(&self) -> i32 {
        self.vals.len() as i32 - 2
    }
}

pub fn i_table(x: f64, a: f64, m_max: i32, tau_a: f64) -> Result<ITable> {
    let m_max = m_max.max(0);
    let mut vals = vec![0.0; (m_max + 4) as usize];
    let a = a.abs();
    let r = x.hypot(a);
    if a <= tau_a {
        if x == 0.0 {
            return Err(Error::SingularPrimitive("i_m with x = 0 and a = 0"));
        }
        let ax = x.abs();
        for m in -3..=m_max {
            vals[(m + 3) as usize] = if m == -1 {
                x.signum() * ax.ln()
            } else {
                x * ax.powi(m) / (m + 1) as f64
            };
        }
        return Ok(ITable { x, a, r: ax, vals });
    }
    let a2 = a * a;
    vals[0] = x / (a2 * r);
    vals[1] = (x / a).atan() / a;
    vals[2] = if x >= 0.0 {
        (r + x).ln()
    } else {
        2.0 * a.ln() - (r - x).ln()
    };
    vals[3] = x;
    let mut rp = r;
    for m in -1..=m_max - 2 {
        // rp = r^{m+2}
        let im = vals[(m + 3) as usize];
        vals[(m + 5) as usize] = (x * rp + (m + 2) as f64 * a2 * im) / (m + 3) as f64;
        rp *= r;
    }
    Ok(ITable { x, a, r, vals })
}

/// Builds `k_m` for `m = -1..=m_max`, reusing an `i` table with `a² = y'² + z'²`.
pub fn k_table_from(i: &ITable, y1: f64, z1: f64, m_max: i32, tau_a: f64) -> Result<KTable> {
    let m_max = m_max.max(1);
    let x = i.x;
    let mut vals = vec![0.0; (m_max + 2) as usize];
    let az = z1.abs();
    if az <= tau_a {
        if x.abs() <= tau_a {
            return Err(Error::SingularPrimitive("k_m with x = 0 and z' = 0"));
        }
        return Ok(KTable { vals });
    }
    if y1.abs() <= tau_a {
        for m in -1..=m_max {
            vals[(m + 1) as usize] = z1 * i.get(m - 2);
        }
        return Ok(KTable { vals });
    }
    let r = i.r;
    let t = (y1 * x / (az * r)).atan();
    vals[0] = z1 / (y1 * az) * t;
    vals[1] = z1.signum() * (x / az).atan();
    vals[2] = y1 * z1.signum() * t + z1 * i.get(-1);
    let y2 = y1 * y1;
    for m in 0..=m_max - 2 {
        vals[(m + 3) as usize] = z1 * i.get(m) + y2 * vals[(m + 1) as usize];
    }
    Ok(KTable { vals })
}

/// Both primitive families at one edge endpoint, with partial derivatives with
/// respect to the observation point.
#[derive(Debug, Clone, PartialEq)]
pub struct ElemTables {
    pub i: ITable,
    pub k: KTable,
    pub x_d: f64,
    pub y_p: f64,
    pub z_p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObsDerivative {
    Xp,
    Yp,
    Zp,
}

impl ElemTables {
    /// `m_max` bounds both families; `i` is built to `m_max` and `k` to `m_max`.
    pub fn new(x_d: f64, y_p: f64, z_p: f64, m_max: i32, tau_a: f64) -> Result<Self> {
        let a = y_p.hypot(z_p);
        let i = i_table(x_d, a, m_max, tau_a)?;
        let k = k_table_from(&i, z_p, -y_p, m_max, tau_a)?;
        Ok(Self { i, k, x_d, y_p, z_p })
    }

    pub fn i(&self, m: i32) -> f64 {
        self.i.get(m)
    }

    pub fn k(&self, m: i32) -> f64 {
        self.k.get(m)
    }

    /// `z_p² k_m`, expressed through `k_{m+2}` so that it is available for `m >= -3`.
    pub fn zz_k(&self, m: i32) -> f64 {
        if m >= -1 {
            self.z_p * self.z_p * self.k(m)
        } else {
            self.k(m + 2) + self.y_p * self.i(m)
        }
    }

    pub fn r(&self) -> f64 {
        self.i.r
    }

    fn rho2(&self) -> f64 {
        self.x_d * self.x_d + self.y_p * self.y_p
    }

    pub fn di(&self, d: ObsDerivative, l: i32) -> f64 {
        let lf = l as f64;
        match d {
            ObsDerivative::Xp => -self.r().powi(l),
            ObsDerivative::Yp if l == 0 => 0.0,
            ObsDerivative::Zp if l == 0 => 0.0,
            ObsDerivative::Yp => lf * self.y_p * self.i(l - 2),
            ObsDerivative::Zp => lf * self.z_p * self.i(l - 2),
        }
    }

    pub fn dk(&self, d: ObsDerivative, l: i32) -> f64 {
        let lf = l as f64;
        let r = self.r().powi(l);
        match d {
            ObsDerivative::Xp => self.y_p * r / self.rho2(),
            ObsDerivative::Yp if l == 0 => self.x_d * r / self.rho2(),
            ObsDerivative::Yp => self.x_d * r / self.rho2() - lf * self.i(l - 2),
            ObsDerivative::Zp if l == 0 => 0.0,
            ObsDerivative::Zp => lf * self.z_p * self.k(l - 2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss;

    fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let n = 64;
        let mut s = 0.0;
        for p in 0..n {
            let (lo, hi) = (a + (b - a) * p as f64 / n as f64, a + (b - a) * (p + 1) as f64 / n as f64);
            s += gauss::on_interval(20, lo, hi).map(|(x, w)| w * f(x)).sum::<f64>();
        }
        s
    }

    #[test]
    fn i_matches_quadrature() {
        let (a, x0, x1) = (0.37, -0.8, 1.3);
        let t0 = i_table(x0, a, 8, 1e-14).unwrap();
        let t1 = i_table(x1, a, 8, 1e-14).unwrap();
        for m in -3..=8 {
            let q = quad(|x| (x * x + a * a).sqrt().powi(m), x0, x1);
            assert!((t1.get(m) - t0.get(m) - q).abs() < 1e-12 * q.abs().max(1.0), "m={m}");
        }
    }

    #[test]
    fn k_matches_quadrature() {
        let (y1, z1, x0, x1) = (0.4, -0.25, -0.6, 0.9);
        let t0 = ElemTables::new(x0, -z1, y1, 8, 1e-14).unwrap();
        let t1 = ElemTables::new(x1, -z1, y1, 8, 1e-14).unwrap();
        for m in -1..=8 {
            let q = quad(
                |x| z1 * (x * x + y1 * y1 + z1 * z1).sqrt().powi(m) / (x * x + z1 * z1),
                x0,
                x1,
            );
            assert!((t1.k(m) - t0.k(m) - q).abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn derivative_example() {
        let t = ElemTables::new(0.5, 0.3, 0.2, 4, 1e-14).unwrap();
        assert!((t.di(ObsDerivative::Xp, 2) + 0.38).abs() < 1e-15);
    }

    #[test]
    fn degenerate_branch_on_carrier_line() {
        let (x0, x1) = (0.3, 1.1);
        let t0 = i_table(x0, 1e-14, 5, 1e-12).unwrap();
        let t1 = i_table(x1, 1e-14, 5, 1e-12).unwrap();
        for m in -3..=5 {
            let q = quad(|x| x.powi(m), x0, x1);
            assert!((t1.get(m) - t0.get(m) - q).abs() < 1e-13 * q.abs().max(1.0), "m={m}");
        }
        assert!(i_table(0.0, 0.0, 3, 1e-12).is_err());
    }

    #[test]
    fn zero_offset_k_vanishes() {
        let t = ElemTables::new(0.7, 0.0, 0.4, 5, 1e-12).unwrap();
        for m in -1..=5 {
            assert_eq!(t.k(m), 0.0);
        }
        assert!(ElemTables::new(0.0, 0.0, 0.4, 5, 1e-12).is_err());
    }
}
