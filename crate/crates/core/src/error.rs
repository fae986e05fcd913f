use thiserror::Error;

use crate::metric::PointId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("distance matrix is not symmetric at ({0}, {1})")]
    AsymmetricMatrix(PointId, PointId),
    #[error("invalid distance at ({0}, {1}): {2}")]
    InvalidDistance(PointId, PointId, f64),
    #[error("invalid edge weight {weight} on edge ({u}, {v})")]
    InvalidWeight { u: PointId, v: PointId, weight: f64 },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{op}: precondition violated: {msg}")]
    Precondition { op: &'static str, msg: String },
    #[error("separator oracle violated its contract: {0}")]
    SeparatorContract(String),
    #[error("{op}: no valid result after {attempts} attempts")]
    RetriesExhausted { op: &'static str, attempts: usize },
    #[error("landmark selection failed the portal check after {0} densifications")]
    LandmarksFailed(usize),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition(op: &'static str, msg: impl Into<String>) -> Error {
    Error::Precondition {
        op,
        msg: msg.into(),
    }
}

impl Error {
    pub(crate) fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
