use thiserror::Error;

use crate::convexify::DescentTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index:?} out of range for stencil `{stencil}` on a {shape:?} grid")]
    Bounds {
        stencil: &'static str,
        index: (usize, usize),
        shape: (usize, usize),
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("envelope fit failed: {reason} (weighted residual {residual:.3e})")]
    Fit { reason: String, residual: f64 },

    #[error("no signal left after truncation")]
    NoSignal,

    #[error("ingestion error: {0}")]
    Ingest(String),

    #[error("gradient descent diverged: step size fell below {min_step:e} after {} iterations", trace.records.len())]
    Divergence { min_step: f64, trace: Box<DescentTrace> },

    #[error("p~ became non-positive ({value:.3e}) at x = {x:.5}")]
    PhysicalBreakdown { x: f64, value: f64 },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error in {what}: {detail}")]
    Parse { what: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// Process exit code: 2 for configuration and input problems, 1 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Argument(_)
            | Error::Parse { .. }
            | Error::Io(_)
            | Error::Json(_)
            | Error::Ingest(_) => 2,
            Error::Context { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}

pub(crate) fn parse_err(what: impl Into<String>, detail: impl ToString) -> Error {
    Error::Parse {
        what: what.into(),
        detail: detail.to_string(),
    }
}
