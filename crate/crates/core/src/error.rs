use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({x}, {y}) lies outside the rink boundary")]
    OutsideRink { x: f64, y: f64 },

    #[error("event {event_id}: coordinate ({x}, {y}) lies outside the rink boundary")]
    EventOutsideRink { event_id: String, x: f64, y: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: unknown event type `{value}`")]
    UnknownEventType { line: usize, value: String },

    #[error("line {line}: field `{field}` out of bounds: {message}")]
    Bounds {
        line: usize,
        field: &'static str,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("analysis error: {0}")]
    Analysis(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
