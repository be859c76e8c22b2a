use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("malformed diagram type: {0}")]
    MalformedType(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("coordinate arity mismatch: {0}")]
    Arity(String),

    #[error("index out of range: {0}")]
    BadIndex(String),

    /// `∂∂ != 0` somewhere in a built complex.
    #[error("sign consistency failure in degree {degree}: {detail}")]
    SignConsistency { degree: usize, detail: String },

    #[error("quotient is not consistent: {0}")]
    QuotientConsistency(String),

    #[error("slide neighbor {0} is missing from the complex")]
    EnumerationIncomplete(String),

    #[error("subdivision vertex identification failed: {0}")]
    Subdivision(String),

    #[error("invalid gluing specification: {0}")]
    GluingSpec(String),

    #[error("gluing is degenerate: {0}")]
    GluingDegenerate(String),

    #[error("matrices are not composable: {0}")]
    NotComposable(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
