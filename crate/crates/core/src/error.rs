use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("variable contexts do not match")]
    Context,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("truncation orders differ: {left} vs {right}")]
    Truncation { left: usize, right: usize },
    #[error("series is not divisible by nu: {0}")]
    Divisibility(String),
    #[error("degree {degree} exceeds the configured degree bound {bound}")]
    DegreeBound { degree: u32, bound: u32 },
    #[error("complete intersection hypothesis failed at homological degree {homological} and total degree {degree}")]
    Acyclicity { homological: usize, degree: u32 },
    #[error("operator {0} does not raise a filtration")]
    Filtration(String),
    #[error("perturbation lemma hypothesis `{identity}` fails: {witness}")]
    LemmaHypothesis { identity: String, witness: String },
    #[error("input is not invariant: {0}")]
    Invariance(String),
    #[error("cochain is not closed: {0}")]
    Closedness(String),
    #[error("sign convention breach: {0}")]
    Convention(String),
    #[error("invalid data: {0}")]
    Invalid(String),
}
