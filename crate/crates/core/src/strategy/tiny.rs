//! Exact play for states with very few candidates.

use crate::error::{Error, Result};
use crate::question::Question;
use crate::shape::necklace::{Necklace, RankMap, Selection};
use crate::niceness::finishes_within;
use crate::state::{children_types, GameState, QuestionType, StateType};
use crate::synthesis::children_well_shaped;

/// Largest support handled here.
pub const TINY_SUPPORT: u64 = 4;

/// Whether `k` questions of any kind always finish `s`.
pub fn can_finish(s: StateType, k: u64) -> bool {
    finishes_within(s, k)
}

/// Length of an optimal strategy for a small state type.
pub fn tiny_depth(s: StateType) -> u64 {
    let mut k = s.character();
    while !can_finish(s, k) {
        k += 1;
    }
    k
}

/// Optimal question for a state with at most four candidates. Among optimal
/// questions, those leaving both children well-shaped and using fewer intervals win.
pub fn minimax_tiny(state: &GameState) -> Result<Question> {
    let stype = state.state_type();
    let n = stype.support();
    if n > TINY_SUPPORT {
        return Err(Error::Precondition(format!("{stype} has more than {TINY_SUPPORT} candidates")));
    }
    if n <= 1 {
        return Err(Error::StateFinal);
    }
    let k = tiny_depth(stype);
    let neck = Necklace::of_state(state);
    let levels: Vec<u8> = state.support_runs().flat_map(|r| std::iter::repeat_n(r.level, r.len() as usize)).collect();
    let mut best: Option<((bool, usize), Selection)> = None;
    for mask in 1u32..(1 << n) - 1 {
        let mut sel = Selection::new(n);
        let mut qt = [0u64; 4];
        for (r, &lv) in levels.iter().enumerate() {
            if mask >> r & 1 == 1 {
                sel.add(r as u64, 1);
                qt[lv as usize] += 1;
            }
        }
        let (y, no) = children_types(stype, QuestionType(qt))?;
        if !(can_finish(y, k - 1) && can_finish(no, k - 1)) {
            continue;
        }
        let score = (!children_well_shaped(&neck, &sel), sel.ranges().len());
        if best.as_ref().is_none_or(|(b, _)| score < *b) {
            best = Some((score, sel));
        }
    }
    let (_, sel) = best.ok_or_else(|| Error::Internal(format!("no optimal question for {stype}")))?;
    let (q, _) = RankMap::new(state)
        .realize(&sel)
        .ok_or_else(|| Error::Internal("tiny selection".into()))?;
    Ok(q)
}
