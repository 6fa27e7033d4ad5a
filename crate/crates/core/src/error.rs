use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("requested table size {requested} exceeds resource bound {max}")]
    ResourceBound { requested: usize, max: usize },

    #[error("cutoff mismatch: {left} vs {right}")]
    CutoffMismatch { left: usize, right: usize },

    #[error("Fock index {n} exceeds cutoff {cutoff}")]
    FockOutOfRange { n: usize, cutoff: usize },

    #[error("invalid beam splitter t={t}, r={r}: coefficients must be nonnegative with t^2+r^2=1")]
    InvalidBeamSplitter { t: f64, r: f64 },

    #[error("operation requires an integer photon-number support")]
    NonIntegerSupport,

    #[error("diagonal entry {index} is negative beyond tolerance: {value}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("invalid index tuple: {0}")]
    InvalidIndexTuple(String),

    #[error("sum not converged: value changed by {delta:e} when the cutoff was raised by 2")]
    NotConverged { delta: f64 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("interference fringe is identically zero; visibility undefined")]
    DegenerateVisibility,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
