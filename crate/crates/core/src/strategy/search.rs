//! Fallback for states where the printed rules leave a child that cannot be finished.
//!
//! Below [`SEARCH_CHARACTER`] the exhaustive type-level oracle decides niceness, so rule
//! outputs are checked against it and replaced by a searched question type when needed.

use crate::error::{Error, Result};
use crate::niceness::{finishes_within, in_w_tilde, winning_qtypes};
use crate::question::Question;
use crate::state::{character, children_types, volume, GameState, QuestionType, StateType};
use crate::synthesis::synthesize;

use super::{is_halving_type, lookup, tiny};

/// Largest character the oracle is consulted for.
pub const SEARCH_CHARACTER: u64 = 11;

/// Realization attempts before giving up on a state.
const MAX_ATTEMPTS: usize = 256;

/// Children the printed rules handle on their own.
fn regular(c: StateType) -> bool {
    let [t0, t1, t2, _] = c.0;
    c.support() <= tiny::TINY_SUPPORT
        || t0 + t1 + t2 <= 1
        || (t0 == 0 && in_w_tilde(c))
        || is_halving_type(c)
        || lookup(c).is_some()
}

/// Whether `c` is known to be finishable within its character. Beyond the oracle's
/// reach the answer is `true`: such states are left to the printed rules.
pub fn known_nice(c: StateType) -> bool {
    let [t0, t1, t2, _] = c.0;
    if c.support() <= 1 || t0 + t1 + t2 <= 1 {
        return true;
    }
    let ch = character(c);
    if c.support() <= tiny::TINY_SUPPORT || ch <= SEARCH_CHARACTER {
        return finishes_within(c, ch);
    }
    t0 != 0 || in_w_tilde(c)
}

/// Whether asking `q` in `state` leaves two children that are known nice.
pub fn sound(state: &GameState, q: &Question) -> bool {
    let t = state.state_type();
    let qt = crate::question::question_type(state, q);
    match children_types(t, qt) {
        Ok((y, n)) => known_nice(y) && known_nice(n),
        Err(_) => false,
    }
}

/// A realizable question whose children both finish in `ch - 1` questions. Children the
/// printed rules handle come first, then the better balanced splits.
pub fn searched_question(state: &GameState) -> Result<Question> {
    let t = state.state_type();
    let ch = character(t);
    if ch > SEARCH_CHARACTER {
        return Err(Error::NoStrategy(t));
    }
    let mut cands: Vec<(usize, u128, QuestionType)> = winning_qtypes(t, ch)
        .into_iter()
        .map(|qt| {
            let (y, n) = children_types(t, qt).expect("winning type fits");
            let irregular = usize::from(!regular(y)) + usize::from(!regular(n));
            let (wy, wn) = (volume(y, ch - 1), volume(n, ch - 1));
            (irregular, wy.abs_diff(wn), qt)
        })
        .collect();
    cands.sort();
    for (_, _, qt) in cands.into_iter().take(MAX_ATTEMPTS) {
        if let Ok(s) = synthesize(state, qt) {
            return Ok(s.question);
        }
    }
    Err(Error::NoStrategy(t))
}
