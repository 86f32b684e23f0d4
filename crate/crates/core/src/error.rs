use thiserror::Error;

use crate::model::DayRecord;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid game configuration: {0}")]
    InvalidConfig(String),
    #[error("agent id {id} outside [0, {}] for N = {n_big}", n_big + 1)]
    InvalidId { id: u64, n_big: u64 },
    #[error("malformed transcript: {0}")]
    Format(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    /// The transcript cannot come from agents that all follow the strategy.
    #[error("protocol deviation on day {day}: {reason}")]
    Deviation { day: u64, reason: String },
    #[error("inconsistent split: attendance moved by {moved} but only {set_size} agents were splitting")]
    InconsistentSplit { moved: i64, set_size: u64 },
    #[error("decision requested in the wrong phase: {0}")]
    WrongPhase(&'static str),
    #[error("invalid id {id} for N = {n_big}")]
    InvalidId { id: u64, n_big: u64 },
    #[error("day offsets in the cyclic phase start at 1")]
    InvalidDayOffset,
    #[error("record {record:?} does not sum to {expected}")]
    BadAttendance { record: DayRecord, expected: u64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("negative set size {0}")]
    NegativeSize(i64),
    #[error("requested order {order} but only {available} coefficients are available")]
    OrderTooLarge { order: usize, available: usize },
    #[error("a least-squares line needs at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("fit range {n_min}..={n_max} outside the table (length {len})")]
    RangeOutOfTable { n_min: usize, n_max: usize, len: usize },
    #[error("argument must be positive, got {0}")]
    NonPositive(f64),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("at least {min} samples are required, got {got}")]
    TooFewSamples { min: usize, got: usize },
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error("episode exceeded the cap of {cap} days")]
    DayCapExceeded { cap: u64 },
    #[error("agents disagree on the public protocol state on day {day}")]
    ConsensusBroken { day: u64 },
    #[error("agent {agent} derived id {derived} but the driver assigned {truth}")]
    IdMismatch { agent: usize, derived: u64, truth: u64 },
    #[error("no coordination within {max_rounds} periods")]
    Timeout { max_rounds: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
