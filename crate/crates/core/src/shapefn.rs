//! Shape functions and their expansion in element-frame monomials `x^b y^c`.
//!
//! A polynomial on the reference triangle `(u, v)` is pulled into the element
//! frame through `(x, y) = Ξ (u, v)`. The linear map preserves homogeneous
//! degree, so each degree `d` is recovered separately by interpolating
//! `Q_d(1, t)` at `d + 1` Chebyshev nodes and solving the Vandermonde system
//! with the Björck-Pereyra scheme.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::ElementGeometry;

/// Bivariate polynomial `Σ_{b+c<=order} coef_{b,c} s^b t^c`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialExpansion {
    order: usize,
    coeffs: Vec<f64>,
}

fn slot(b: usize, c: usize) -> usize {
    let d = b + c;
    d * (d + 1) / 2 + c
}

impl MonomialExpansion {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![0.0; (order + 1) * (order + 2) / 2],
        }
    }

    pub fn monomial(order: usize, b: usize, c: usize) -> Self {
        let mut m = Self::zeros(order);
        m.set(b, c, 1.0);
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, b: usize, c: usize) -> f64 {
        if b + c > self.order {
            0.0
        } else {
            self.coeffs[slot(b, c)]
        }
    }

    pub fn set(&mut self, b: usize, c: usize, v: f64) {
        self.coeffs[slot(b, c)] = v;
    }

    /// `(b, c, coefficient)` for every stored term.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..=self.order).flat_map(move |d| (0..=d).map(move |c| (d - c, c, self.get(d - c, c))))
    }

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        self.terms()
            .map(|(b, c, v)| v * s.powi(b as i32) * t.powi(c as i32))
            .sum()
    }

    fn eval_degree(&self, d: usize, s: f64, t: f64) -> f64 {
        (0..=d)
            .map(|c| self.get(d - c, c) * s.powi((d - c) as i32) * t.powi(c as i32))
            .sum()
    }

    /// Re-express a reference-coordinate polynomial `P(u, v)` as `Q(x, y)` in the
    /// element frame of `geom`.
    pub fn from_reference(geom: &ElementGeometry, p: &MonomialExpansion) -> Result<Self> {
        let [[a, b], [c, d]] = geom.xi;
        let det = a * d - b * c;
        let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
        if !det.is_finite() || det.abs() <= 1e-14 * scale * scale {
            return Err(Error::SingularTransform { det });
        }
        let inv = |x: f64, y: f64| ((d * x - b * y) / det, (-c * x + a * y) / det);
        let mut q = Self::zeros(p.order);
        q.set(0, 0, p.get(0, 0));
        for deg in 1..=p.order {
            let nodes: Vec<f64> = (0..=deg)
                .map(|i| ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * (deg + 1)) as f64).cos())
                .collect();
            let rhs: Vec<f64> = nodes
                .iter()
                .map(|&t| {
                    let (u, v) = inv(1.0, t);
                    p.eval_degree(deg, u, v)
                })
                .collect();
            // Q_d(1, t) = Σ_c A_{d-c,c} t^c
            let sol = bjorck_pereyra(&nodes, rhs);
            for (cc, v) in sol.into_iter().enumerate() {
                q.set(deg - cc, cc, v);
            }
        }
        Ok(q)
    }
}

/// Monomial coefficients of the polynomial interpolating `(t_i, f_i)`.
pub fn bjorck_pereyra(t: &[f64], mut f: Vec<f64>) -> Vec<f64> {
    let n = t.len();
    for k in 0..n.saturating_sub(1) {
        for i in (k + 1..n).rev() {
            f[i] = (f[i] - f[i - 1]) / (t[i] - t[i - k - 1]);
        }
    }
    for k in (0..n.saturating_sub(1)).rev() {
        for i in k..n - 1 {
            f[i] -= t[k] * f[i + 1];
        }
    }
    f
}

/// Lagrange interpolation nodes on the reference triangle.
///
/// Vertices first, then edge nodes in edge order (1-2, 2-3, 3-1), then interior nodes.
pub fn lagrange_nodes(order: usize) -> Result<Vec<(f64, f64)>> {
    let n = order as f64;
    let mut nodes = vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)];
    match order {
        1 => {}
        2 => nodes.extend([(0.5, 0.0), (0.5, 0.5), (0.0, 0.5)]),
        3 => {
            for i in 1..order {
                nodes.push((i as f64 / n, 0.0));
            }
            for i in 1..order {
                nodes.push(((n - i as f64) / n, i as f64 / n));
            }
            for i in 1..order {
                nodes.push((0.0, (n - i as f64) / n));
            }
            nodes.push((1.0 / 3.0, 1.0 / 3.0));
        }
        _ => return Err(Error::UnsupportedOrder(order)),
    }
    Ok(nodes)
}

/// Lagrange basis on the reference triangle, in reference coordinates.
pub fn lagrange_reference(order: usize) -> Result<Vec<MonomialExpansion>> {
    let nodes = lagrange_nodes(order)?;
    let m = nodes.len();
    let exps: Vec<(usize, usize)> = (0..=order)
        .flat_map(|d| (0..=d).map(move |c| (d - c, c)))
        .collect();
    let vand = DMatrix::from_fn(m, m, |i, j| {
        let (u, v) = nodes[i];
        u.powi(exps[j].0 as i32) * v.powi(exps[j].1 as i32)
    });
    let lu = vand.lu();
    (0..m)
        .map(|k| {
            let rhs = DVector::from_fn(m, |i, _| if i == k { 1.0 } else { 0.0 });
            let sol = lu.solve(&rhs).ok_or(Error::SingularTransform { det: 0.0 })?;
            let mut p = MonomialExpansion::zeros(order);
            for (j, &(b, c)) in exps.iter().enumerate() {
                p.set(b, c, sol[j]);
            }
            Ok(p)
        })
        .collect()
}

/// A set of shape functions expressed in element-frame monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSet {
    order: usize,
    expansions: Vec<MonomialExpansion>,
}

impl ShapeSet {
    pub fn lagrange(geom: &ElementGeometry, order: usize) -> Result<Self> {
        let refs = lagrange_reference(order)?;
        Self::from_reference(geom, &refs)
    }

    pub fn from_reference(geom: &ElementGeometry, polys: &[MonomialExpansion]) -> Result<Self> {
        let order = polys.iter().map(|p| p.order()).max().unwrap_or(0);
        let expansions = polys
            .iter()
            .map(|p| MonomialExpansion::from_reference(geom, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { order, expansions })
    }

    /// Shape functions already written in element-frame monomials.
    pub fn from_expansions(expansions: Vec<MonomialExpansion>) -> Self {
        let order = expansions.iter().map(|p| p.order()).max().unwrap_or(0);
        Self { order, expansions }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn expansions(&self) -> &[MonomialExpansion] {
        &self.expansions
    }

    pub fn len(&self) -> usize {
        self.expansions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expansions.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bjorck_pereyra_recovers_coefficients() {
        let coef = [0.3, -1.2, 0.7, 2.0];
        let t = [-0.9, -0.2, 0.4, 0.8];
        let f = t
            .iter()
            .map(|&x| coef.iter().rev().fold(0.0, |acc, c| acc * x + c))
            .collect();
        for (a, b) in bjorck_pereyra(&t, f).iter().zip(coef) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn lagrange_is_cardinal() {
        for order in 1..=3 {
            let nodes = lagrange_nodes(order).unwrap();
            let basis = lagrange_reference(order).unwrap();
            for (i, p) in basis.iter().enumerate() {
                for (j, &(u, v)) in nodes.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((p.eval(u, v) - want).abs() < 1e-12);
                }
            }
        }
        assert!(matches!(lagrange_reference(4), Err(Error::UnsupportedOrder(4))));
    }

    #[test]
    fn unit_triangle_second_order() {
        let g = ElementGeometry::from_arrays([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
            .unwrap();
        let s = ShapeSet::lagrange(&g, 2).unwrap();
        let n1 = &s.expansions()[0];
        let want = [(0, 0, 1.0), (1, 0, -3.0), (0, 1, -3.0), (2, 0, 2.0), (1, 1, 4.0), (0, 2, 2.0)];
        for (b, c, v) in want {
            assert!((n1.get(b, c) - v).abs() < 1e-12, "({b},{c})");
        }
    }
}
