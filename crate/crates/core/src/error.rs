use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate element: area {area:e} below {threshold:e}")]
    DegenerateElement { area: f64, threshold: f64 },

    #[error("singular monomial transform (det = {det:e})")]
    SingularTransform { det: f64 },

    #[error("unsupported interpolation order {0}")]
    UnsupportedOrder(usize),

    #[error("primitive is singular at the evaluation point ({0})")]
    SingularPrimitive(&'static str),

    #[error("table lacks ghost entries down to a = {needed} (has a >= {available})")]
    MissingGhostEntries { needed: i32, available: i32 },

    #[error("Taylor expansion of e^(ikr) not converged: k*dr = {k_dr:e}, tail {tail:e} after {terms} terms (requires k|r - r0| <= 1 on every edge)")]
    ExpansionNotConverged { k_dr: f64, tail: f64, terms: usize },

    #[error("observation point projects onto the element contour")]
    SingularOnContour,

    #[error("quadrature not converged: error estimate {estimate:e} exceeds {tolerance:e}")]
    NotConverged { estimate: f64, tolerance: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
