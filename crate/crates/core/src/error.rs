use thiserror::Error;

/// Every failure mode the library reports.
///
/// Variants are grouped loosely by the module that raises them. The CLI maps
/// [`Error::is_resource_cap`] variants to exit code 3 and everything else to 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("value out of range [0,1]: {0}")]
    ValueOutOfRange(String),
    #[error("duplicate label: {0}")]
    DuplicateLabel(String),
    #[error("distribution support index {index} out of range (len {len})")]
    SupportOutOfRange { index: usize, len: usize },
    #[error("invalid distribution: {0}")]
    BadDistribution(String),
    #[error("invalid monotone map: {0}")]
    BadMonotoneMap(String),
    #[error("averaging tuple is empty")]
    EmptyTuple,
    #[error("mixture weight {0} outside [0,1]")]
    LambdaOutOfRange(String),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("class has no hypotheses")]
    EmptyClass,
    #[error("class is not {{0,1}}-valued")]
    NotConceptClass,
    #[error("scale {0} outside (0,1]")]
    GammaOutOfRange(String),
    #[error("bad threshold interval: r={r} must be < s={s} inside [0,1]")]
    BadInterval { r: String, s: String },
    #[error("class too large for exhaustive search: {0}")]
    ClassTooLarge(String),
    #[error("tree depth {have} below required {need}")]
    DepthTooSmall { have: usize, need: usize },
    #[error("witness rejected: {0}")]
    BadWitness(String),
    #[error("parameter constraint violated: {0}")]
    ParameterConstraintViolated(String),
    #[error("branch {branch} carries only {ones} labelled nodes, need {need}")]
    BranchDeficient { branch: usize, ones: usize, need: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("bad range: {0}")]
    BadRange(String),
    #[error("bad table: {0}")]
    BadTable(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("index error: {0}")]
    IndexError(String),
    #[error("state space exceeded cap: {0}")]
    StateExplosion(String),
    #[error("policy error: {0}")]
    PolicyError(String),
    #[error("sample is empty")]
    EmptySample,
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::TooLarge(_) | Error::ClassTooLarge(_) | Error::StateExplosion(_)
        )
    }
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

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resource_caps() {
        assert!(Error::ClassTooLarge("x".into()).is_resource_cap());
        assert!(Error::StateExplosion("x".into()).is_resource_cap());
        assert!(!Error::EmptyClass.is_resource_cap());
        assert!(!Error::Parse("x".into()).is_resource_cap());
        assert_eq!(Error::DepthTooSmall { have: 1, need: 3 }.to_string(), "tree depth 1 below required 3");
    }
}
