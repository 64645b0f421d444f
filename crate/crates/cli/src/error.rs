use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("could not read {path}: {source}")]
    Read { path: String, source: std::io::Error },

    #[error("could not write output: {0}")]
    Write(#[from] std::io::Error),

    #[error("could not write CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed input file: {0}")]
    Parse(#[from] toml::de::Error),

    #[error("{count} table entries exceed the fixture gate of {gate:e}")]
    FixtureGate { count: usize, gate: f64 },

    #[error("{0} oracle evaluations did not converge")]
    OracleFailures(usize),

    #[error(transparent)]
    Numerical(#[from] layerpot::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        use layerpot::Error as E;
        let code = match self {
            CliError::FixtureGate { .. } => 2,
            CliError::Input(_) | CliError::Read { .. } | CliError::Parse(_) => 3,
            CliError::Write(_) | CliError::Csv(_) => 3,
            CliError::Numerical(E::InvalidInput(_) | E::DegenerateElement { .. } | E::UnsupportedOrder(_)) => 3,
            CliError::Numerical(_) | CliError::OracleFailures(_) => 4,
        };
        ExitCode::from(code)
    }

    /// What the user can change to get a result.
    pub fn hint(&self) -> Option<&'static str> {
        use layerpot::Error as E;
        match self {
            CliError::Numerical(E::SingularOnContour) => Some(
                "the point lies on the element contour (an edge in the element plane, or above a vertex); \
                 move it off the contour or lift it out of the element plane",
            ),
            CliError::Numerical(E::ExpansionNotConverged { .. }) => Some(
                "the Taylor expansion of e^(ikr) assumes k|r - r0| <= 1 along each edge; \
                 subdivide the element or lower the wavenumber",
            ),
            CliError::Numerical(E::DegenerateElement { .. }) => {
                Some("the vertices are (nearly) collinear; check the element definition")
            }
            _ => None,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
