use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate hull: input points are collinear or too few")]
    DegenerateHull,

    #[error("unsupported quadrature degree {degree} (supported 1..={max})")]
    UnsupportedDegree { degree: usize, max: usize },

    #[error("derivative order {order} exceeds what the {family} kernel supports (max {max})")]
    DerivativeOrder {
        family: &'static str,
        order: usize,
        max: usize,
    },

    #[error("breakpoints must be strictly increasing")]
    NonMonotone,

    #[error("duplicate Voronoi seeds at ({0}, {1})")]
    DuplicateSeeds(f64, f64),

    #[error("underdetermined system: {rows} equations for {cols} unknowns")]
    Underdetermined { rows: usize, cols: usize },

    #[error("mollifier {family} is C^{actual}, the PDE requires at least C^{required}")]
    Smoothness {
        family: &'static str,
        required: usize,
        actual: usize,
    },

    #[error("numerically rank-deficient least-squares system (condition estimate {condition:.3e})")]
    RankDeficient { condition: f64 },

    #[error("relative error undefined: exact field vanishes at every sample point")]
    ZeroDenominator,

    #[error("uniform collocation requires a tensor-product domain")]
    NonTensorDomain,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("level {level}: {source}")]
    AtLevel {
        level: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
