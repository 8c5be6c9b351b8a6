//! Searching with three lies using questions that are unions of at most four intervals.

pub mod error;
pub mod niceness;
pub mod question;
pub mod shape;
pub mod state;
pub mod strategy;
pub mod synthesis;
pub mod verify;

pub use error::{Error, Result};
pub use question::{Interval, Question};
pub use state::{Answer, GameState, QuestionType, StateType};
