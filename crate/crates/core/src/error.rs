use thiserror::Error;

/// Errors raised by the library. Variants are grouped so a front end can map
/// them onto exit codes: [`Error::is_resource`] marks budget exhaustion, the
/// rest are domain errors (bad input or violated preconditions).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomial is not monic with integer coefficients: {0}")]
    NotMonic(String),
    #[error("defining polynomial is reducible over Q: has factor {0}")]
    Reducible(String),
    #[error("invalid integral basis: {0}")]
    InvalidBasis(String),
    #[error("no integral basis known for {0}; supply one explicitly")]
    NonCatalogueField(String),
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("elements or ideals belong to different fields ({0} vs {1})")]
    ParentMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero ideal where a nonzero ideal is required")]
    ZeroIdeal,
    #[error("zero element where a nonzero element is required")]
    ZeroElement,
    #[error("element is not integral: {0}")]
    NotIntegral(String),
    #[error("moduli are not pairwise coprime")]
    NotCoprime,
    #[error("prime {0} divides the index of every tried monogenic suborder; Kummer-Dedekind does not apply")]
    UnsupportedPrime(String),
    #[error("field is not Galois over Q (found {found} of {degree} automorphisms); enlarge to its Galois closure first")]
    NotGalois { found: usize, degree: usize },
    #[error("automorphism does not have order 2")]
    NotAnInvolution,
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("singular curve: 4A^3 + 27B^2 = 0")]
    SingularCurve,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("generator has finite order {0}")]
    TorsionGenerator(u32),
    #[error("uniformizer -x/y is undefined at this point ({0})")]
    UniformizerUndefined(&'static str),
    #[error("curve has bad reduction at {0}")]
    BadReduction(String),
    #[error("invalid forcing instance: {0}")]
    InvalidInstance(String),
    #[error("polynomial system error: {0}")]
    System(String),
    #[error("missing witness assignment for variable `{0}`")]
    MissingAssignment(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precision cap of {0} bits reached before roots were isolated")]
    PrecisionCap(u32),
    #[error("resource budget exceeded: {0}")]
    Resource(String),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_) | Error::PrecisionCap(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
