use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the library. Every variant maps to a stable kebab-case
/// code (see [`Error::code`]) so harnesses can match on it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("elements or ideals belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("defining polynomial is not irreducible over Q")]
    NotIrreducible,
    #[error("invalid integral basis: {0}")]
    InvalidBasis(String),
    #[error("an integral basis must be supplied for this field (disc(f) = {disc} is not squarefree)")]
    BasisRequired { disc: BigInt },
    #[error("prime {p} divides the index [O_K : Z[theta]] = {index}")]
    IndexDivisorUnsupported { p: u64, index: BigInt },
    #[error("automorphisms must be supplied for this field")]
    AutomorphismsRequired,
    #[error("invalid automorphism table: {0}")]
    InvalidAutomorphism(String),
    #[error("no primitive element found among {trials} trial elements")]
    PrimitiveElementNotFound { trials: usize },
    #[error("prime over {p} is ramified")]
    RamifiedPrime { p: u64 },
    #[error("method unavailable: {0}")]
    MethodUnavailable(String),
    #[error("no failing approximation level up to {cap}")]
    LevelCapExceeded { cap: u32 },
    #[error("not a witness case: {0}")]
    NotAWitnessCase(String),
    #[error("residue system of size {size} for P^{k} over {p} exceeds the cap {cap}")]
    ResidueCapExceeded { p: u64, k: u32, size: BigInt, cap: u64 },
    #[error("census incomplete: no non-member prime within {primes_scanned} rational primes")]
    IncompleteCensus {
        primes_scanned: usize,
        description: Box<crate::intpoly::OverringDescription>,
    },
    #[error("pair is not unimodular")]
    NotUnimodular,
    #[error("element is not in the ring: {0}")]
    NotInRing(String),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("search state cap of {cap} exceeded")]
    SearchCap { cap: usize },
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}

/// Broad classes used by the command line front end to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    MathDomain,
    Resource,
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::FieldMismatch => "invalid-argument",
            Error::DivisionByZero => "division-by-zero",
            Error::NotIrreducible => "not-irreducible",
            Error::InvalidBasis(_) => "invalid-basis",
            Error::BasisRequired { .. } => "basis-required",
            Error::IndexDivisorUnsupported { .. } => "index-divisor-unsupported",
            Error::AutomorphismsRequired => "automorphisms-required",
            Error::InvalidAutomorphism(_) => "invalid-automorphism",
            Error::PrimitiveElementNotFound { .. } => "primitive-element-not-found",
            Error::RamifiedPrime { .. } => "ramified-prime",
            Error::MethodUnavailable(_) => "method-unavailable",
            Error::LevelCapExceeded { .. } => "level-cap-exceeded",
            Error::NotAWitnessCase(_) => "not-a-witness-case",
            Error::ResidueCapExceeded { .. } => "residue-cap-exceeded",
            Error::IncompleteCensus { .. } => "incomplete-census",
            Error::NotUnimodular => "not-unimodular",
            Error::NotInRing(_) => "not-in-ring",
            Error::UnsupportedRing(_) => "unsupported-ring",
            Error::SearchCap { .. } => "search-cap",
            Error::ResourceCap(_) => "resource-cap",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidArgument(_) | Error::FieldMismatch => ErrorClass::Usage,
            Error::ResidueCapExceeded { .. }
            | Error::SearchCap { .. }
            | Error::LevelCapExceeded { .. }
            | Error::ResourceCap(_) => ErrorClass::Resource,
            _ => ErrorClass::MathDomain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
