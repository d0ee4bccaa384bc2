use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the domain of an operation (off-sphere point, non-real
    /// cyclotomic element, wrong dimension, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at a pole (north pole for projection, center for inversion).
    #[error("pole: {0}")]
    Pole(String),

    /// Scalars from different backends or cyclotomic contexts were mixed.
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),

    /// A root of unity was requested that the cyclotomic context does not contain.
    #[error("cyclotomic context: {0}")]
    Context(String),

    /// Some (d+1)-subset lies on a common (d-2)-sphere or (d-2)-flat.
    #[error("general position violated by points {witness:?}")]
    GeneralPosition { witness: Vec<usize> },

    /// Some D-subset of a point set in R^D fails to span a hyperplane, or the
    /// whole set lies in one hyperplane.
    #[error("span violation: points {witness:?} do not span a hyperplane")]
    SpanViolation { witness: Vec<usize> },

    /// Rank-deficient input to an operation that needs a unique solution.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Subset tally for incidence count `m` is not a multiple of C(m, k).
    #[error("inconsistent incidence tally: {subsets} subsets with count {m} is not divisible by {binom}")]
    InexactDivision { m: usize, subsets: u64, binom: u64 },

    /// Two independent evaluation routes disagreed.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("indeterminate: {0}")]
    Indeterminate(String),

    #[error("precision cap of {bits} bits reached before the sign was certified")]
    PrecisionExhausted { bits: u32 },

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Malformed serialized input; `field` names the offending location.
    #[error("parse error in `{field}`: {msg}")]
    Parse { field: String, msg: String },

    #[error("correspondence mismatch at m = {m}: hyperspheres {spheres}, hyperplanes {planes}")]
    CorrespondenceMismatch { m: usize, spheres: u64, planes: u64 },

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            msg: msg.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::parse("json", e.to_string())
    }
}
