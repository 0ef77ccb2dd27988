use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero vector")]
    ZeroVector,
    #[error("invalid amplitude at index {index}: {value}")]
    InvalidAmplitude { index: usize, value: f64 },
    #[error("dimension overflow: {len} values do not fit in {n_qubits} qubits")]
    DimensionOverflow { len: usize, n_qubits: u32 },
    #[error("state is not normalized (squared norm {norm_sq})")]
    NotNormalized { norm_sq: f64 },
    #[error("threshold must be positive, got {0}")]
    NonPositiveThreshold(f64),
    #[error("empty kept set: threshold {threshold} exceeds the largest magnitude")]
    EmptyKeptSet { threshold: f64 },
    #[error("empty tail")]
    EmptyTail,
    #[error("nothing to randomize: the tail set is empty")]
    NothingToRandomize,
    #[error("oracle size limit: {n_qubits} qubits exceeds the dense limit of {limit}")]
    OracleSizeLimit { n_qubits: u32, limit: u32 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parameter {name} = {value} outside its domain ({domain})")]
    Domain { name: &'static str, value: f64, domain: &'static str },
    #[error("l1 condition diverges for power-law exponent {0} <= 1")]
    L1Diverges(f64),
    #[error("insufficient data: {found} nonzero amplitudes, need at least {needed}")]
    InsufficientData { found: usize, needed: usize },
    #[error("target too strict: tau = {tau} not reachable with at most {max_kept} kept amplitudes")]
    TargetTooStrict { tau: f64, max_kept: usize },
    #[error("degenerate ground state (gap {gap:e})")]
    DegenerateGroundState { gap: f64 },
    #[error("eigensolver did not converge (residual {residual:e})")]
    NotConverged { residual: f64 },
    #[error("observable is not symmetric (max deviation {deviation:e})")]
    NotSymmetric { deviation: f64 },
    #[error("invalid threshold grid: {0}")]
    InvalidGrid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
