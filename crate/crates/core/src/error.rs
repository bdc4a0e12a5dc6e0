use thiserror::Error;

/// Every failure the library can report. Variant names are stable and are
/// surfaced verbatim by the command-line front end (see [`Error::name`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u64 },
    #[error("no built-in modulus for p={p}, n={n}; supply one explicitly")]
    UnsupportedDegree { p: u64, n: usize },
    #[error("malformed modulus: {0}")]
    MalformedModulus(String),
    #[error("field of order {p}^{n} is too large for the element encoding")]
    FieldTooLarge { p: u64, n: usize },
    #[error("characteristic 2 has no nonsquares")]
    EvenCharacteristic,
    #[error("division by the zero polynomial")]
    DivisionByZeroPolynomial,
    #[error("operands live over different coefficient domains")]
    DomainMismatch,
    #[error("coefficient has no image under the supplied embedding")]
    EmbeddingUndefined,
    #[error("operation undefined on the zero element")]
    ZeroElement,
    #[error("g2 must be nonzero for a rank-2 datum")]
    ZeroG2,
    #[error("twisting constant must be nonzero")]
    ZeroTwist,
    #[error("datum is not minimal; reduction type by divisibility is undefined")]
    NonMinimalDatum,
    #[error("bad reduction at {prime}")]
    BadReduction { prime: String },
    #[error("expected a prime of degree {expected}, got degree {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("prime degree {degree} exceeds the search cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("no characteristic polynomial found at {prime}")]
    NoSolution { prime: String },
    #[error("{count} candidate characteristic polynomials at {prime}")]
    MultipleSolutions { prime: String, count: usize },
    #[error("the torsion matrix is undefined at the prime (T)")]
    PrimeIsT,
    #[error("torsion points did not split within degree {cap} over the residue field")]
    SplittingNotFound { cap: usize },
    #[error("the criterion needs odd q >= 5 (got q = {q})")]
    SmallOrEvenQ { q: u64 },
    #[error("anchors a1 and a2 must be distinct")]
    EqualAnchors,
    #[error("anchors a1 and a2 must be nonzero")]
    ZeroAnchor,
    #[error("eta must be a nonsquare")]
    EtaIsSquare,
    #[error("malformed residue: {0}")]
    MalformedResidue(String),
    #[error("X = {x} is below the formula threshold for c = ({c1}, {c2})")]
    ThresholdViolation { c1: u32, c2: u32, x: u32 },
    #[error("enumeration of {size} pairs exceeds the cap {cap}")]
    EnumerationTooLarge { size: String, cap: u64 },
    #[error("no admissible primes to sample")]
    NoAdmissiblePrimes,
    #[error(
        "internal inconsistency at {prime}: matrix gives (trace, det) = {matrix:?}, search gives {search:?}"
    )]
    InternalInconsistency {
        prime: String,
        matrix: (Vec<u64>, Vec<u64>),
        search: (Vec<u64>, Vec<u64>),
    },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// The variant name, used as the machine-readable error code.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::ReducibleModulus { .. } => "ReducibleModulus",
            Error::UnsupportedDegree { .. } => "UnsupportedDegree",
            Error::MalformedModulus(_) => "MalformedModulus",
            Error::FieldTooLarge { .. } => "FieldTooLarge",
            Error::EvenCharacteristic => "EvenCharacteristic",
            Error::DivisionByZeroPolynomial => "DivisionByZeroPolynomial",
            Error::DomainMismatch => "DomainMismatch",
            Error::EmbeddingUndefined => "EmbeddingUndefined",
            Error::ZeroElement => "ZeroElement",
            Error::ZeroG2 => "ZeroG2",
            Error::ZeroTwist => "ZeroTwist",
            Error::NonMinimalDatum => "NonMinimalDatum",
            Error::BadReduction { .. } => "BadReduction",
            Error::WrongDegree { .. } => "WrongDegree",
            Error::DegreeCapExceeded { .. } => "DegreeCapExceeded",
            Error::NoSolution { .. } => "NoSolution",
            Error::MultipleSolutions { .. } => "MultipleSolutions",
            Error::PrimeIsT => "PrimeIsT",
            Error::SplittingNotFound { .. } => "SplittingNotFound",
            Error::SmallOrEvenQ { .. } => "SmallOrEvenQ",
            Error::EqualAnchors => "EqualAnchors",
            Error::ZeroAnchor => "ZeroAnchor",
            Error::EtaIsSquare => "EtaIsSquare",
            Error::MalformedResidue(_) => "MalformedResidue",
            Error::ThresholdViolation { .. } => "ThresholdViolation",
            Error::EnumerationTooLarge { .. } => "EnumerationTooLarge",
            Error::NoAdmissiblePrimes => "NoAdmissiblePrimes",
            Error::InternalInconsistency { .. } => "InternalInconsistency",
            Error::Parse(_) => "Parse",
        }
    }

    /// Errors that signal a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::InternalInconsistency { .. }
                | Error::MultipleSolutions { .. }
                | Error::NoSolution { .. }
                | Error::SplittingNotFound { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
