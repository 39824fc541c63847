use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one of the failure
/// classes surfaced by the command-line tool (see [`Error::exit_code`]).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("character of order {n} is not defined on F_{q}^* (n must divide q - 1)")]
    UnsupportedCharacter { n: u64, q: u64 },
    #[error("unsupported chart: {0}")]
    UnsupportedChart(String),
    #[error("unsupported field F_{p}^{k}: {reason}")]
    UnsupportedField { p: u64, k: u32, reason: String },
    #[error("enumeration budget exceeded: {needed} points requested, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("singularity is not isolated")]
    NonIsolated,
    #[error("singularity is not of type ADE: {0}")]
    NotAde(String),
    #[error("residue characteristic {0} is below the supported floor of 7")]
    UnsupportedCharacteristic(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no table entry for degree {degree}, type {label} (exact sequence forces |Br_nr| = |Br_bar| * |H1|)")]
    TableMiss { degree: u32, label: String },
    #[error("residue is identically zero or undefined on the special fibre")]
    DegenerateResidue,
    #[error("residue function is zero or undefined at {0}")]
    IndeterminateAtPoint(String),
    #[error("point reduces to a singular point of the special fibre: {0}")]
    SingularReduction(String),
    #[error("no determinate smooth points available")]
    Empty,
    #[error("special fibre smooth locus is not geometrically connected: {0}")]
    Component(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code: 2 for domain errors, 3 for budget or unsupported input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. }
            | Error::UnsupportedChart(_)
            | Error::UnsupportedField { .. }
            | Error::UnsupportedCharacteristic(_)
            | Error::Unsupported(_)
            | Error::NonIsolated
            | Error::NotAde(_)
            | Error::TableMiss { .. } => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
