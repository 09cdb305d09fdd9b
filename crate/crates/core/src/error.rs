use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("field {p}^{e} exceeds the enumeration bound 2^63")]
    FieldTooLarge { p: u64, e: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({left} vs {right})")]
    MixedFields { left: String, right: String },
    #[error("degree {sub} does not divide {ambient}")]
    DegreeNotDividing { sub: u32, ambient: u32 },
    #[error("element does not lie in the subfield F_{p}^{e}")]
    NotInSubfield { p: u64, e: u32 },
    #[error("no primitive {ell}-th root of unity in F_{q}: {ell} does not divide q - 1")]
    NoRootOfUnity { ell: u64, q: u64 },
    #[error("k must be positive")]
    NonPositiveExponent,
    #[error("operation requires a non-constant polynomial")]
    ConstantPolynomial,
    #[error("polynomial degree {0} is too small for this operation")]
    DegreeTooSmall(usize),
    #[error("input exceeds the brute-force oracle bound: {0}")]
    OracleBound(String),
    #[error("denominator of the composition vanishes identically")]
    DegenerateComposition,
    #[error("rational function degree {degree} exceeds the configured bound {bound}")]
    DegreeBound { degree: u64, bound: u64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("characteristic 2 is not supported here")]
    EvenCharacteristic,
    #[error("no gamma found for q = {q}, m = {m}: the set T is empty or only yields gamma = 0")]
    NoGamma { q: u64, m: u64 },
    #[error("work estimate {required} field evaluations exceeds the budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("internal invariant violated: {0}")]
    InvariantViolated(String),
    #[error("wild ramification: characteristic divides m")]
    WildRamification,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
