//! Element frames, edge frames and projection of observation points.
//!
//! The element frame has its origin at the first vertex, `î` along the first
//! edge and `k̂` along the oriented normal. Edge `j` runs from vertex `j` to
//! vertex `j + 1 (mod 3)`; its frame has `î^j` along the edge and
//! `ĵ^j = k̂ × î^j` pointing into the element, so the outward normal is `-ĵ^j`.

use crate::error::{Error, Result};
use crate::Vec3;

const DEGENERATE_AREA: f64 = 1e-12;
const REL_TAU: f64 = 1e-12;
pub const TAU_EDGE: f64 = 1e-10;

/// Affine map from edge coordinates to element coordinates:
/// `x = alpha_x * x^j + beta_x * y^j + gamma_x`, likewise for `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub start: Vec3,
    pub end: Vec3,
    pub length: f64,
    pub i_hat: Vec3,
    pub j_hat: Vec3,
    pub alpha_x: f64,
    pub beta_x: f64,
    pub gamma_x: f64,
    pub alpha_y: f64,
    pub beta_y: f64,
    pub gamma_y: f64,
}

impl Edge {
    /// `î · n^j`
    pub fn i_dot_n(&self) -> f64 {
        -self.beta_x
    }

    /// `ĵ · n^j`
    pub fn j_dot_n(&self) -> f64 {
        -self.beta_y
    }

    pub fn normal(&self) -> Vec3 {
        -self.j_hat
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    StrictInterior,
    StrictExterior,
    OnContour,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    /// Element coordinates of the projected point.
    pub x_p: f64,
    pub y_p: f64,
    /// Signed height above the element plane along `k̂`.
    pub h: f64,
    pub barycentric: [f64; 3],
    pub location: Location,
    /// For on-contour points: the vertex index if the projection hits a vertex.
    pub vertex: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementGeometry {
    pub vertices: [Vec3; 3],
    pub i_hat: Vec3,
    pub j_hat: Vec3,
    pub k_hat: Vec3,
    /// Element coordinates of `v2 - v1` (first column) and `v3 - v1` (second column).
    pub xi: [[f64; 2]; 2],
    pub edges: [Edge; 3],
    pub area: f64,
    pub diameter: f64,
}

impl ElementGeometry {
    pub fn new(v1: Vec3, v2: Vec3, v3: Vec3) -> Result<Self> {
        let vertices = [v1, v2, v3];
        let e12 = v2 - v1;
        let e13 = v3 - v1;
        let diameter = e12.norm().max(e13.norm()).max((v3 - v2).norm());
        let cross = e12.cross(&e13);
        let area = 0.5 * cross.norm();
        let threshold = DEGENERATE_AREA * diameter * diameter;
        if !area.is_finite() || area <= threshold {
            return Err(Error::DegenerateElement { area, threshold });
        }
        let i_hat = e12.normalize();
        let k_hat = cross.normalize();
        let j_hat = k_hat.cross(&i_hat);

        let local = |p: Vec3| (i_hat.dot(&(p - v1)), j_hat.dot(&(p - v1)));
        let (x2, y2) = local(v2);
        let (x3, y3) = local(v3);
        let xi = [[x2, x3], [y2, y3]];

        let edges = std::array::from_fn(|j| {
            let start = vertices[j];
            let end = vertices[(j + 1) % 3];
            let d = end - start;
            let length = d.norm();
            let ie = d / length;
            let je = k_hat.cross(&ie);
            let (gx, gy) = local(start);
            Edge {
                start,
                end,
                length,
                i_hat: ie,
                j_hat: je,
                alpha_x: i_hat.dot(&ie),
                beta_x: i_hat.dot(&je),
                gamma_x: gx,
                alpha_y: j_hat.dot(&ie),
                beta_y: j_hat.dot(&je),
                gamma_y: gy,
            }
        });

        Ok(Self {
            vertices,
            i_hat,
            j_hat,
            k_hat,
            xi,
            edges,
            area,
            diameter,
        })
    }

    pub fn from_arrays(v: [[f64; 3]; 3]) -> Result<Self> {
        Self::new(Vec3::from(v[0]), Vec3::from(v[1]), Vec3::from(v[2]))
    }

    pub fn tau_h(&self) -> f64 {
        REL_TAU * self.diameter
    }

    pub fn tau_a(&self) -> f64 {
        REL_TAU * self.diameter
    }

    /// Element coordinates `(x, y, z)` of a global point.
    pub fn to_local(&self, p: &Vec3) -> Vec3 {
        let d = p - self.vertices[0];
        Vec3::new(self.i_hat.dot(&d), self.j_hat.dot(&d), self.k_hat.dot(&d))
    }

    pub fn to_global(&self, x: f64, y: f64, z: f64) -> Vec3 {
        self.vertices[0] + self.i_hat * x + self.j_hat * y + self.k_hat * z
    }

    /// Barycentric coordinates `(λ1, λ2, λ3)` of an in-plane point given in element coordinates.
    pub fn barycentric(&self, x: f64, y: f64) -> [f64; 3] {
        let [[a, b], [c, d]] = self.xi;
        let det = a * d - b * c;
        let u = (d * x - b * y) / det;
        let v = (-c * x + a * y) / det;
        [1.0 - u - v, u, v]
    }

    pub fn project(&self, r_p: &Vec3) -> Projection {
        self.project_with(r_p, TAU_EDGE)
    }

    pub fn project_with(&self, r_p: &Vec3, tau_edge: f64) -> Projection {
        let l = self.to_local(r_p);
        let lam = self.barycentric(l.x, l.y);
        let min = lam.iter().cloned().fold(f64::INFINITY, f64::min);
        let (location, vertex) = if min > tau_edge {
            (Location::StrictInterior, None)
        } else if min < -tau_edge {
            (Location::StrictExterior, None)
        } else {
            let vertex = lam.iter().position(|&v| (v - 1.0).abs() <= tau_edge);
            (Location::OnContour, vertex)
        };
        Projection {
            x_p: l.x,
            y_p: l.y,
            h: l.z,
            barycentric: lam,
            location,
            vertex,
        }
    }

    /// Scalars describing the observation point relative to an endpoint of edge `j`.
    /// `at_end` selects the end vertex (`x^j = L`) instead of the start vertex.
    pub fn edge_scalars(&self, r_p: &Vec3, j: usize, at_end: bool) -> EdgeScalars {
        let e = &self.edges[j];
        let rel = r_p - e.start;
        let xp_e = e.i_hat.dot(&rel);
        let yp_e = e.j_hat.dot(&rel);
        let zp_e = self.k_hat.dot(&rel);
        let x_edge = if at_end { e.length } else { 0.0 };
        let x_d = x_edge - xp_e;
        let gamma2 = yp_e * yp_e + zp_e * zp_e;
        let rho2 = x_d * x_d + yp_e * yp_e;
        let r = (rho2 + zp_e * zp_e).sqrt();
        let p = self.to_local(r_p);
        EdgeScalars {
            edge: j,
            x_edge,
            x_d,
            y_p: yp_e,
            z_p: zp_e,
            r,
            rho2,
            gamma2,
            r0: rel.norm(),
            alpha_x: e.alpha_x,
            alpha_y: e.alpha_y,
            alpha_hat: -e.gamma_x - e.alpha_x * xp_e,
            beta_hat: -e.gamma_y - e.alpha_y * xp_e,
            i_dot_n: e.i_dot_n(),
            j_dot_n: e.j_dot_n(),
            x: e.alpha_x * x_edge + e.gamma_x,
            y: e.alpha_y * x_edge + e.gamma_y,
            x_p: p.x,
            y_p_elem: p.y,
        }
    }
}

/// Observation-point scalars at one endpoint of one edge.
///
/// `x_d`, `y_p`, `z_p` are edge-frame quantities: `x_d = x^j - x_p^j`,
/// `y_p = y_p^j` (so `y_d = -y_p` on the edge), `z_p = z_p^j = h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeScalars {
    pub edge: usize,
    pub x_edge: f64,
    pub x_d: f64,
    pub y_p: f64,
    pub z_p: f64,
    pub r: f64,
    pub rho2: f64,
    pub gamma2: f64,
    /// Distance from the observation point to the start vertex of the edge.
    pub r0: f64,
    pub alpha_x: f64,
    pub alpha_y: f64,
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub i_dot_n: f64,
    pub j_dot_n: f64,
    /// Element coordinates of the endpoint.
    pub x: f64,
    pub y: f64,
    /// Element coordinates of the projected observation point.
    pub x_p: f64,
    pub y_p_elem: f64,
}

impl EdgeScalars {
    pub fn y_d(&self) -> f64 {
        -self.y_p
    }

    pub fn z_d(&self) -> f64 {
        -self.z_p
    }

    pub fn gamma(&self) -> f64 {
        self.gamma2.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit() -> ElementGeometry {
        ElementGeometry::from_arrays([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap()
    }

    #[test]
    fn unit_triangle_frames() {
        let g = unit();
        assert_abs_diff_eq!(g.k_hat, Vec3::z(), epsilon = 1e-15);
        assert_eq!(g.xi, [[1.0, 0.0], [0.0, 1.0]]);
        let e = &g.edges[1];
        assert_abs_diff_eq!(e.length, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(e.alpha_x, -1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(e.beta_x, -1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(e.gamma_x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.gamma_y, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn outward_normals() {
        let g = unit();
        let c = (g.vertices[0] + g.vertices[1] + g.vertices[2]) / 3.0;
        for e in &g.edges {
            let mid = (e.start + e.end) * 0.5;
            assert!(e.normal().dot(&(mid - c)) > 0.0);
        }
    }

    #[test]
    fn degenerate_rejected() {
        let r = ElementGeometry::from_arrays([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]]);
        assert!(matches!(r, Err(Error::DegenerateElement { .. })));
    }

    #[test]
    fn classification() {
        let g = unit();
        let c = Vec3::new(1.0 / 3.0, 1.0 / 3.0, 0.2);
        let p = g.project(&c);
        assert_eq!(p.location, Location::StrictInterior);
        assert_abs_diff_eq!(p.h, 0.2, epsilon = 1e-15);
        assert_eq!(g.project(&Vec3::new(2.0, 2.0, 0.0)).location, Location::StrictExterior);
        let p = g.project(&Vec3::new(0.5, 0.0, 1.0));
        assert_eq!(p.location, Location::OnContour);
        assert_eq!(p.vertex, None);
        assert_eq!(g.project(&Vec3::new(1.0, 0.0, 0.3)).vertex, Some(1));
    }

    #[test]
    fn endpoint_round_trip() {
        let g = ElementGeometry::from_arrays([[0.3, -0.2, 1.0], [1.4, 0.1, 0.7], [0.2, 0.9, 1.3]])
            .unwrap();
        let rp = Vec3::new(0.4, 0.2, -0.5);
        for j in 0..3 {
            for at_end in [false, true] {
                let s = g.edge_scalars(&rp, j, at_end);
                let v = if at_end { g.edges[j].end } else { g.edges[j].start };
                let l = g.to_local(&v);
                assert_abs_diff_eq!(s.x, l.x, epsilon = 1e-14);
                assert_abs_diff_eq!(s.y, l.y, epsilon = 1e-14);
                assert_abs_diff_eq!(s.r, (v - rp).norm(), epsilon = 1e-14);
                assert_abs_diff_eq!(s.alpha_x * s.x_d - s.alpha_hat, s.x, epsilon = 1e-14);
                assert_abs_diff_eq!(s.alpha_y * s.x_d - s.beta_hat, s.y, epsilon = 1e-14);
            }
        }
    }
}
