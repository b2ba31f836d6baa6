use thiserror::Error;

use crate::generator::Gate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate triple: points {0} and {1} coincide")]
    DegenerateTriple(usize, usize),

    #[error("parameter {t} outside arc range [{lo}, {hi}]")]
    ParamOutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("curve needs at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("invalid sampled curve: {0}")]
    InvalidCurve(String),

    #[error("theta {0} outside (0, pi/2]")]
    InvalidTheta(f64),

    #[error("value {0} outside (0, 1]")]
    OutOfRange(f64),

    #[error("n must be at least {min}, got {n}")]
    InvalidN { n: u32, min: u32 },

    #[error("k = {k} outside [0, {n})")]
    InvalidK { n: u32, k: u32 },

    #[error("gcd({n}, {k}) != 1: the seam produces {components} components")]
    NotCoprime { n: u32, k: u32, components: usize },

    #[error("open construction (n = {n}, k = {k}) failed gate {gate}: {witness}")]
    ConstructionFailed {
        n: u32,
        k: u32,
        gate: Gate,
        witness: String,
    },

    #[error("the tube area law applies to closed curves only")]
    OpenCurveUnsupported,

    #[error("empty grid")]
    EmptyGrid,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
