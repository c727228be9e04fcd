use thiserror::Error;

/// Errors produced anywhere in the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entries length {len} is not dim² for dim {dim}")]
    BadShape { dim: usize, len: usize },

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("channel has no Kraus operators")]
    EmptyChannel,

    #[error("Kraus completeness violated (residual {0:e})")]
    Incomplete(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("operator is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("Bloch vector norm {0} exceeds 1")]
    BlochNorm(f64),

    #[error("unitary axis is not a unit vector (norm {0})")]
    AxisNotUnit(f64),

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("trace of S01 has imaginary part {0:e}")]
    ComplexTrace(f64),

    #[error("Fisher information is negative ({0:e})")]
    NegativeFisher(f64),

    #[error("measurement outcome probability is degenerate (P+ = {0}) with nonzero derivative")]
    DegenerateMeasurement(f64),

    #[error("line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("at p = {p}: {source}")]
    GridPoint {
        p: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{0}")]
    Output(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability<T: crate::Scalar>(name: &'static str, value: T) -> Result<()> {
    if value.is_finite() && value >= T::zero() && value <= T::one() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value: value.as_f64(),
            range: "[0, 1]",
        })
    }
}
