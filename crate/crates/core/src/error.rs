use thiserror::Error;

/// Every failure the library can report. `code()` gives the stable string
/// emitted by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("constant term is zero")]
    ZeroConstantTerm,
    #[error("polynomial is not +1-symmetric")]
    NotPlusSymmetric,
    #[error("polynomial is not *-symmetric")]
    NotStarSymmetric,
    #[error("odd degree")]
    OddDegree,
    #[error("interval endpoint is a root")]
    EndpointIsRoot,
    #[error("reduction mod p is zero")]
    ZeroReduction,
    #[error("constant coefficient vanishes mod p")]
    ZeroConstant,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("zero input")]
    ZeroInput,
    #[error("zero diagonal entry")]
    ZeroEntry,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("precision budget must be positive")]
    BudgetNonpositive,
    #[error("p = 2 is not supported here")]
    PIsTwo,
    #[error("p-adic precision budget exhausted")]
    PrecisionExceeded,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("signature ({0},{1}) has r - s not divisible by 8")]
    SignatureNotMod8(u64, u64),
    #[error("sign condition fails: {0}")]
    SignConditionFails(String),
    #[error("invalid index map: {0}")]
    InvalidIndexMap(String),
    #[error("the two vertices coincide")]
    SameVertex,
    #[error("not a Salem polynomial: {0}")]
    NotSalem(String),
    #[error("degrees sum to {0}, expected 22")]
    DegreeSumNot22(usize),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("index map not in Idx: {0}")]
    NotInIdx(String),
    #[error("degree {0} out of range")]
    DegreeOutOfRange(usize),
    #[error("unknown lattice name {0:?}")]
    UnknownName(String),
    #[error("matrix is not an isometry of the lattice")]
    NotAnIsometry,
    #[error("malformed matrix: {0}")]
    BadMatrix(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("an integer could not be factored")]
    FactorizationFailed,
    #[error("syntax error at {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonMonic => "NonMonic",
            Error::ZeroConstantTerm => "ZeroConstantTerm",
            Error::NotPlusSymmetric => "NotPlusSymmetric",
            Error::NotStarSymmetric => "NotStarSymmetric",
            Error::OddDegree => "OddDegree",
            Error::EndpointIsRoot => "EndpointIsRoot",
            Error::ZeroReduction => "ZeroReduction",
            Error::ZeroConstant => "ZeroConstant",
            Error::NotPrimePower(_) => "NotPrimePower",
            Error::NotPrime(_) => "NotPrime",
            Error::ZeroInput => "ZeroInput",
            Error::ZeroEntry => "ZeroEntry",
            Error::NotSquarefree => "NotSquarefree",
            Error::BudgetNonpositive => "BudgetNonpositive",
            Error::PIsTwo => "PIsTwo",
            Error::PrecisionExceeded => "PrecisionExceeded",
            Error::DegreeMismatch(_) => "DegreeMismatch",
            Error::SignatureNotMod8(..) => "SignatureNotMod8",
            Error::SignConditionFails(_) => "SignConditionFails",
            Error::InvalidIndexMap(_) => "InvalidIndexMap",
            Error::SameVertex => "SameVertex",
            Error::NotSalem(_) => "NotSalem",
            Error::DegreeSumNot22(_) => "DegreeSumNot22",
            Error::IndexOutOfRange(_) => "IndexOutOfRange",
            Error::NotInIdx(_) => "NotInIdx",
            Error::DegreeOutOfRange(_) => "DegreeOutOfRange",
            Error::UnknownName(_) => "UnknownName",
            Error::NotAnIsometry => "NotAnIsometry",
            Error::BadMatrix(_) => "BadMatrix",
            Error::Io(_) => "IoError",
            Error::FactorizationFailed => "FactorizationFailed",
            Error::SyntaxError { .. } => "SyntaxError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
