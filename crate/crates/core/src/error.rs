use thiserror::Error;

use crate::state::{QuestionType, StateType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("interval {lo}-{hi} outside universe of size {size}")]
    OutOfRange { lo: u64, hi: u64, size: u64 },
    #[error("question has {0} intervals after normalization (at most 4 allowed)")]
    TooManyIntervals(usize),
    #[error("state final")]
    StateFinal,
    #[error("state is not well-shaped")]
    NotWellShaped,
    #[error("target {target} not admissible for state {state}: {reason}")]
    Admissibility {
        state: StateType,
        target: QuestionType,
        reason: String,
    },
    #[error("no 4-interval question of type {target} preserving shape found for state {state}")]
    SynthesisFailed { state: StateType, target: QuestionType },
    #[error("Spencer step infeasible for state {0}")]
    SpencerInfeasible(StateType),
    #[error("Guzicki gap: neither case applies to state {0}")]
    GuzickiGap(StateType),
    #[error("no perfect strategy known from this state {0}")]
    NoStrategy(StateType),
    #[error("no table for m = {0}")]
    UnlistedTable(u32),
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
