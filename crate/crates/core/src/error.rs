use thiserror::Error;

/// Errors raised by the polynomial, measure and experiment layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty coefficient sequence")]
    EmptyCoefficients,

    #[error("the zero polynomial is not a valid value")]
    ZeroPolynomial,

    #[error("polynomial is not monic (leading coefficient {0})")]
    NotMonic(String),

    #[error("cannot parse polynomial at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("root iteration failed to certify after {sweeps} sweeps (largest radius {best_radius:e})")]
    NoConvergence {
        sweeps: usize,
        best_radius: f64,
        radii: Vec<f64>,
    },

    #[error("atom at modulus {modulus} exceeds radius bound {bound}")]
    RadiusBound { modulus: f64, bound: f64 },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("operation `{op}` is not supported for shape `{shape}`")]
    UnsupportedShape { shape: &'static str, op: &'static str },

    #[error("witness {witness} is not 1-Lipschitz between support points {first} and {second}")]
    NotLipschitz {
        witness: usize,
        first: usize,
        second: usize,
    },

    #[error("index {index} is outside the admissible range of the family")]
    IndexOutOfRange { index: u32 },

    #[error("enumeration budget of {budget} nodes exceeded at degree {degree} ({bound})")]
    BudgetExceeded {
        budget: u64,
        degree: usize,
        bound: String,
    },

    #[error("experiment failed at index {index}: {reason}")]
    ExperimentFailure { index: u32, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
