use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scalar literal `{0}` (expected an integer or `a/b`)")]
pub struct ParseScalarError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{op}: ambient dimensions differ ({left} vs {right})")]
    DimensionMismatch {
        op: &'static str,
        left: usize,
        right: usize,
    },
    #[error("quotient: denominator ({sub}-dim) is not contained in numerator ({sup}-dim)")]
    NotContained { sup: usize, sub: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("{op}: expected a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BicomplexError {
    #[error("no conjugation structure")]
    NoConjugation,
    #[error("invalid placement: {0}")]
    InvalidPlacement(String),
    #[error("assembly is not mirror-symmetric: {0}")]
    NotMirrorSymmetric(String),
    #[error("block {block} at ({p},{q}) has shape {got:?}, expected {expected:?}")]
    BlockShape {
        block: &'static str,
        p: usize,
        q: usize,
        got: (usize, usize),
        expected: (usize, usize),
    },
    #[error("bidegree ({p},{q}) outside bounds ({p_max},{q_max})")]
    OutOfBounds {
        p: usize,
        q: usize,
        p_max: usize,
        q_max: usize,
    },
    #[error("broken complex at ({p},{q}): {source}")]
    Containment {
        p: usize,
        q: usize,
        source: LinalgError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HodgeError {
    #[error("gram matrix at ({p},{q}) is {got}x{got}, expected {expected}x{expected}")]
    GramShape {
        p: usize,
        q: usize,
        got: usize,
        expected: usize,
    },
    #[error("gram matrix at ({p},{q}) is not Hermitian")]
    NotHermitian { p: usize, q: usize },
    #[error("gram matrix at ({p},{q}) is not positive definite")]
    NotPositiveDefinite { p: usize, q: usize },
    #[error("adjoint: map is {rows}x{cols} but grams are {src}x{src} and {tgt}x{tgt}")]
    AdjointShape {
        rows: usize,
        cols: usize,
        src: usize,
        tgt: usize,
    },
    #[error("not an exterior-algebra model")]
    NotExteriorModel,
    #[error("the star operator needs the coframe to be orthonormal")]
    MetricNotOrthonormal,
    #[error("laplacian assembly at ({p},{q}): {detail}")]
    Assembly { p: usize, q: usize, detail: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid structure equations: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("unknown builtin model `{0}`")]
    UnknownBuiltin(String),
}

/// Errors reading or writing the bicomplex file format.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Shape(String),
}

/// Errors of the full analysis pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("invalid bicomplex: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error(transparent)]
    Bicomplex(#[from] BicomplexError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
}
