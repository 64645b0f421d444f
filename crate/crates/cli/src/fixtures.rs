//! Published single-layer and hypersingular values for the second-order
//! Lagrange element on the unit right triangle, observed from its centroid.

use layerpot::{shape_potentials, ElementGeometry, EvalRequest, Kernel, ShapeSet, Vec3};

use crate::error::CliResult;

/// Largest accepted relative difference against a published value.
pub const FIXTURE_GATE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    Single,
    Hypersingular,
}

#[derive(Debug, Clone, Copy)]
pub struct Table {
    pub number: usize,
    pub kernel: &'static str,
    pub layer: Layer,
    /// Recursive-method values for `N_1 … N_6`.
    pub recursive: [f64; 6],
    /// Values from an independent singular-integration method, same rows.
    pub reference: [f64; 6],
}

/// Index into [`ShapeSet::lagrange`] order (vertices 1-3, then midpoints of
/// edges 12, 23, 13) for each published row `N_1 … N_6`.
pub const ROW_TO_SHAPE: [usize; 6] = [1, 2, 0, 4, 3, 5];

#[allow(clippy::excessive_precision)]
pub const TABLES: [Table; 4] = [
    Table {
        number: 1,
        kernel: "laplace",
        layer: Layer::Single,
        recursive: [
            -0.0096108650741614,
            -0.0096108650741614,
            -0.0059161308348599,
            0.0733163156462961,
            0.0716914080260122,
            0.0716914080260122,
        ],
        reference: [
            -0.0096108650753968,
            -0.0096108650753968,
            -0.0059161308348537,
            0.0733163156487268,
            0.0716914080259944,
            0.0716914080259944,
        ],
    },
    Table {
        number: 2,
        kernel: "laplace",
        layer: Layer::Hypersingular,
        recursive: [
            0.3411586129005689,
            0.3411586129005690,
            0.5031187119584526,
            -0.7261344637586460,
            -0.9322819538428125,
            -0.9322819538428122,
        ],
        reference: [
            0.3411586129009882,
            0.3411586129009879,
            0.5031187119589535,
            -0.7261344637604444,
            -0.9322819538448199,
            -0.9322819538448149,
        ],
    },
    Table {
        number: 3,
        kernel: "helmholtz",
        layer: Layer::Single,
        recursive: [
            -0.0097575874677327,
            -0.0097575874677327,
            -0.0059358291069226,
            0.0724350497721009,
            0.0707990955161933,
            0.0707990955161934,
        ],
        reference: [
            -0.0097575874673111,
            -0.0097575874673111,
            -0.0059358291069324,
            0.0724350497713923,
            0.0707990955162131,
            0.0707990955162131,
        ],
    },
    Table {
        number: 4,
        kernel: "helmholtz",
        layer: Layer::Hypersingular,
        recursive: [
            0.3387374371700406,
            0.3387374371700407,
            0.5016372264001558,
            -0.7079157406214216,
            -0.9144708322784949,
            -0.9144708322784947,
        ],
        reference: [
            0.3387374371703727,
            0.3387374371703721,
            0.5016372264006584,
            -0.7079157406230446,
            -0.9144708322805092,
            -0.9144708322805069,
        ],
    },
];

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub table: usize,
    pub row: usize,
    pub computed: f64,
    pub recursive: f64,
    pub reference: f64,
    /// Relative differences against `recursive` and `reference`.
    pub rel_diff: [f64; 2],
}

impl TableRow {
    pub fn worst(&self) -> f64 {
        self.rel_diff[0].max(self.rel_diff[1])
    }
}

/// Published values checked by [`run_tables`], two per row.
pub fn published_count(rows: &[TableRow]) -> usize {
    2 * rows.len()
}

fn unit_triangle() -> CliResult<ElementGeometry> {
    Ok(ElementGeometry::from_arrays([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])?)
}

/// Recomputes every published entry. The tables list real parts, the
/// Helmholtz ones at `kD = 1`, and the hypersingular columns hold `∫ ∂²G/∂n_p∂n_q N`,
/// the negative of the operator value `D`.
pub fn run_tables() -> CliResult<Vec<TableRow>> {
    let g = unit_triangle()?;
    let shapes = ShapeSet::lagrange(&g, 2)?;
    let centroid = Vec3::new(1.0 / 3.0, 1.0 / 3.0, 0.0);
    let mut rows = Vec::with_capacity(24);
    for t in &TABLES {
        let kernel = match t.kernel {
            "laplace" => Kernel::Laplace,
            _ => Kernel::Helmholtz { k: 1.0 / g.diameter },
        };
        let req = EvalRequest::new(g.clone(), centroid, kernel, 2).with_normal(g.k_hat);
        let q = shape_potentials(&req, &shapes)?;
        for row in 0..6 {
            let s = &q[ROW_TO_SHAPE[row]];
            let computed = match t.layer {
                Layer::Single => s.v.re,
                Layer::Hypersingular => -s.d.expect("normal supplied").re,
            };
            let rel = |v: f64| (computed - v).abs() / v.abs();
            rows.push(TableRow {
                table: t.number,
                row: row + 1,
                computed,
                recursive: t.recursive[row],
                reference: t.reference[row],
                rel_diff: [rel(t.recursive[row]), rel(t.reference[row])],
            });
        }
    }
    Ok(rows)
}

pub fn format_tables(rows: &[TableRow]) -> String {
    let mut out = String::new();
    let mut current = 0;
    for r in rows {
        if r.table != current {
            current = r.table;
            let t = &TABLES[current - 1];
            let layer = match t.layer {
                Layer::Single => "single layer",
                Layer::Hypersingular => "hypersingular",
            };
            out.push_str(&format!("\nTable {current}: {} {layer}\n", t.kernel));
            out.push_str(&format!(
                "{:<4} {:>22} {:>22} {:>12} {:>22} {:>12}\n",
                "", "computed", "recursive", "rel_diff", "reference", "rel_diff"
            ));
        }
        out.push_str(&format!(
            "N{:<3} {:>22.16} {:>22.16} {:>12.3e} {:>22.16} {:>12.3e}\n",
            r.row, r.computed, r.recursive, r.rel_diff[0], r.reference, r.rel_diff[1]
        ));
    }
    out
}
