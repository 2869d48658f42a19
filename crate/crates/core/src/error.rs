use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("d*n must be even (n = {n}, d = {d})")]
    OddProduct { n: usize, d: usize },
    #[error("degree {d} out of range for n = {n} (need 1 <= d <= n-1)")]
    DegreeOutOfRange { n: usize, d: usize },
    #[error("vertex {v} out of range for n = {n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("loop at vertex {0} in pair list")]
    Loop(u32),
    #[error("edge {0}-{1} is not present")]
    EdgeMissing(u32, u32),
    #[error("edge {0}-{1} is already present")]
    EdgePresent(u32, u32),
    #[error("vertex {v} has degree {got}, expected {want}")]
    DegreeBroken { v: u32, got: usize, want: usize },
    #[error("budget exhausted: {what} (budget {budget})")]
    BudgetExhausted { what: String, budget: u64 },
    #[error("switching is not valid in the current graph")]
    InvalidMove,
    #[error("no valid move of the requested type")]
    NoValidMove,
    #[error("octagon is not a B1 octagon of the variant required by this type")]
    WrongVariant,
    #[error("forbidden graph is not regular (required by this algorithm)")]
    NotRegularComplement,
    #[error("bound guard at stratum {stratum}: {detail} (instance outside the regime of the analytic bounds; try the oracle bound provider)")]
    BoundGuard { stratum: usize, detail: String },
    #[error("parameter system invalid at stratum {stratum}: {detail}")]
    SolverInvariantViolated { stratum: usize, detail: String },
    #[error("sample is not in the enumerated support")]
    UnknownOutcome,
    #[error("chi-square needs expected count >= 5 per outcome (got {expected:.3})")]
    InsufficientSamples { expected: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
