//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("mesh orientation error: tet {cell} has non-positive volume")]
    InvertedTet { cell: usize },

    #[error("mesh orientation error: boundary face {face} points into the solid")]
    InwardFace { face: usize },

    #[error("mesh is not watertight: edge ({a}, {b}) is shared by {count} boundary faces")]
    OpenEdge { a: usize, b: usize, count: usize },

    #[error("boundary face {face} is not a face of any tet")]
    OrphanFace { face: usize },

    #[error("mesh index out of range: {what} refers to vertex {index} but there are {n_vertices}")]
    IndexOutOfRange {
        what: String,
        index: usize,
        n_vertices: usize,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(
        "pyroelectric constraint violated: |p| = {p_norm} must be < min(eps = {eps}, c_eps/T0 = {c_over_t0})"
    )]
    PyroConstraint {
        p_norm: f64,
        eps: f64,
        c_over_t0: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    Dimension {
        expected: usize,
        got: usize,
        context: String,
    },

    #[error("kernel evaluated at coincident points")]
    CoincidentPoints,

    #[error("evaluation point is too close to the surface (distance {dist}, limit {limit})")]
    PointOnSurface { dist: f64, limit: f64 },

    #[error("unsupported quadrature order {order} for {kind}")]
    UnsupportedOrder { kind: String, order: usize },

    #[error("laplace parameter must satisfy Re s > 0, got {0}")]
    NotInRightHalfPlane(f64),

    #[error("linear solve failed at s = {s}: {msg}")]
    Solver { s: String, msg: String },

    #[error("frequency solve failed at s = {s}: {msg}")]
    FrequencySolve { s: String, msg: String },

    #[error("wavelet `{0}` has no closed-form transform; use the time-domain driver")]
    NoClosedFormTransform(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
