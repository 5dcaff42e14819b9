use thiserror::Error;

/// Errors raised by the library.
///
/// Violations of a mathematical bound are never errors: they are reported
/// through the `satisfied`/status fields of the audit results. Errors are
/// reserved for misuse, unmet hypotheses and resource gates.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("undefined resultant: zero polynomial input")]
    UndefinedResultant,
    #[error("discriminant undefined for constants")]
    ConstantDiscriminant,
    #[error("zero polynomial mod {0}")]
    ZeroModP(u64),
    #[error("zero polynomial has no content valuation")]
    ZeroPolynomial,
    #[error("empty polynomial family")]
    EmptyFamily,
    #[error("{0} must be at least 2")]
    TooSmall(&'static str),
    #[error("odd prime powers only (got p = {0})")]
    EvenPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{x} is not a unit mod {modulus}")]
    NotAUnit { x: u64, modulus: u64 },
    #[error("modulus {0} exceeds the supported range")]
    ModulusTooLarge(u64),
    #[error("character moduli do not match: {0}")]
    ModulusMismatch(String),
    #[error("lemma hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("bound vacuous: every character in the tuple is trivial")]
    BoundVacuous,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("memory budget exceeded: {needed_mb} MB needed, {budget_mb} MB allowed; try --segment-width {suggested_width}")]
    MemoryBudget {
        needed_mb: u64,
        budget_mb: u64,
        suggested_width: usize,
    },
    #[error("complexity gate exceeded: {0}")]
    ComplexityGate(String),
    #[error("rounding budget {budget:e} is not below 1e-6 of the bound {bound:e}; exact phase summation required")]
    RoundingBudget { budget: f64, bound: f64 },
    #[error("no prime in the interval ({lo}, {hi}]")]
    NoPrimeInInterval { lo: f64, hi: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
