//! Building 4-interval questions of a prescribed type that keep both children well-shaped.
//!
//! All builders work on the necklace: a level-0..2 base selection is produced by a
//! construction (or by the exhaustive planner), level 3 is completed by [`fill_level3`],
//! and every candidate is validated before it is returned.

mod constructions;
mod planner;

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::question::{Question, MAX_INTERVALS};
use crate::shape::first_embedding;
use crate::shape::necklace::{NArc, Necklace, RankMap, Selection};
use crate::state::{Answer, GameState, QuestionType, StateType};

pub use constructions::{
    synth_theorem1, synth_type_0bcd, synth_type_100d, synth_type_102d, synth_type_11cd,
};

/// How a question was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Construction,
    Planner,
    Endgame,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synthesized {
    pub question: Question,
    /// The question asks the complement of the requested selection: its type is the
    /// complementary type and the two answers are swapped.
    pub complemented: bool,
    pub route: Route,
}

static CONSTRUCTED: AtomicU64 = AtomicU64::new(0);
static PLANNED: AtomicU64 = AtomicU64::new(0);
static COMPLEMENTED: AtomicU64 = AtomicU64::new(0);

/// Process-wide counts of (construction, planner, complemented) results.
pub fn stats() -> (u64, u64, u64) {
    (
        CONSTRUCTED.load(Ordering::Relaxed),
        PLANNED.load(Ordering::Relaxed),
        COMPLEMENTED.load(Ordering::Relaxed),
    )
}

/// Arc indices in the canonical rotation order, so results do not depend on where
/// the necklace happens to start on the line.
pub(crate) fn canonical_order(neck: &Necklace) -> Vec<usize> {
    let n = neck.arcs.len();
    let r = neck.min_rotation();
    (0..n).map(|k| (r + k) % n).collect()
}

/// Adds `k` elements of `arc` taken from its low-rank end (`low`) or its high-rank end.
pub(crate) fn take(sel: &mut Selection, arc: &NArc, k: u64, low: bool) {
    if k == 0 {
        return;
    }
    debug_assert!(k <= arc.len);
    let start = if low { arc.start } else { arc.start + arc.len - k };
    sel.add(start, k);
}

/// Number of line intervals the selection needs when asked directly.
pub(crate) fn line_intervals(sel: &Selection) -> usize {
    sel.ranges().len()
}

pub(crate) fn children_well_shaped(neck: &Necklace, sel: &Selection) -> bool {
    [Answer::Yes, Answer::No].iter().all(|&a| {
        let levels: Vec<u8> = sel.child_pairs(neck, a).iter().map(|p| p.0).collect();
        first_embedding(&levels).is_some()
    })
}

#[derive(Debug, Clone, Copy)]
enum Fill {
    None,
    Full,
    Low,
    High,
    Both,
    Mid,
}

const FILLS: [Fill; 6] = [Fill::None, Fill::Full, Fill::Low, Fill::High, Fill::Both, Fill::Mid];

fn fill_range(f: Fill, len: u64) -> Option<(u64, u64)> {
    match f {
        Fill::None => Some((0, 0)),
        Fill::Full => Some((len, len)),
        Fill::Low | Fill::High if len >= 2 => Some((1, len - 1)),
        Fill::Both if len >= 3 => Some((2, len - 1)),
        Fill::Mid if len >= 3 => Some((1, len - 2)),
        _ => None,
    }
}

fn apply_fill(sel: &mut Selection, arc: &NArc, f: Fill, k: u64, total: u64) {
    match f {
        Fill::None => {}
        Fill::Full | Fill::Low => take(sel, arc, k, true),
        Fill::High => take(sel, arc, k, false),
        Fill::Both => {
            take(sel, arc, 1, true);
            take(sel, arc, k - 1, false);
        }
        Fill::Mid => sel.add((arc.start + 1) % total, k),
    }
}

/// Completions of `base` with exactly `d` level-3 elements, fewest line intervals first.
/// Only completions that fit in four intervals directly or via the complement are kept.
pub fn fill_level3(neck: &Necklace, base: &Selection, d: u64) -> Vec<Selection> {
    let order = canonical_order(neck);
    let arcs: Vec<NArc> = order
        .iter()
        .map(|&i| neck.arcs[i])
        .filter(|a| a.level == 3)
        .collect();
    let mut out: Vec<(usize, usize, Selection)> = Vec::new();
    if arcs.len() > 4 {
        // not a template shape; fill greedily in canonical order
        let mut sel = base.clone();
        let mut left = d;
        for a in &arcs {
            let k = left.min(a.len);
            take(&mut sel, a, k, true);
            left -= k;
        }
        return if left == 0 { vec![sel] } else { Vec::new() };
    }
    let n = arcs.len();
    let combos = 6usize.pow(n as u32);
    'combo: for code in 0..combos {
        let mut fills = Vec::with_capacity(n);
        let (mut lo, mut hi) = (0, 0);
        let mut c = code;
        for a in &arcs {
            let f = FILLS[c % 6];
            c /= 6;
            let Some((l, h)) = fill_range(f, a.len) else { continue 'combo };
            lo += l;
            hi += h;
            fills.push((f, l, h));
        }
        if d < lo || d > hi {
            continue;
        }
        let mut extra = d - lo;
        let mut sel = base.clone();
        for (a, &(f, l, h)) in arcs.iter().zip(&fills) {
            let k = l + extra.min(h - l);
            extra -= k - l;
            apply_fill(&mut sel, a, f, k, neck.total);
        }
        let li = line_intervals(&sel);
        let runs = sel.circular_runs();
        if runs <= MAX_INTERVALS {
            out.push((li.min(MAX_INTERVALS + 1), code, sel));
        }
    }
    out.sort_by_key(|x| (x.0, x.1));
    let mut seen: Vec<Selection> = Vec::new();
    for (_, _, s) in out {
        if !seen.contains(&s) {
            seen.push(s);
        }
    }
    seen
}

/// First completion of `base` that has the target type, fits in four intervals and
/// keeps both children well-shaped.
pub(crate) fn complete(neck: &Necklace, base: &Selection, target: QuestionType) -> Option<Selection> {
    let t = base.count_type(neck);
    if (0..3).any(|i| t.0[i] != target.0[i]) || t.0[3] != 0 {
        return None;
    }
    fill_level3(neck, base, target.0[3])
        .into_iter()
        .find(|s| s.count_type(neck) == target && children_well_shaped(neck, s))
}

/// Turns a validated selection into a line question.
pub(crate) fn realize(
    state: &GameState,
    sel: &Selection,
    route: Route,
) -> Result<Synthesized> {
    let map = RankMap::new(state);
    let (question, complemented) = map
        .realize(sel)
        .ok_or_else(|| Error::Internal(format!("selection {:?} needs too many intervals", sel.ranges())))?;
    match route {
        Route::Construction => CONSTRUCTED.fetch_add(1, Ordering::Relaxed),
        Route::Planner => PLANNED.fetch_add(1, Ordering::Relaxed),
        Route::Endgame => 0,
    };
    if complemented {
        COMPLEMENTED.fetch_add(1, Ordering::Relaxed);
    }
    Ok(Synthesized { question, complemented, route })
}

/// Any route: constructions first, then the exhaustive planner, for the target and then
/// for its complement.
pub fn synthesize(state: &GameState, target: QuestionType) -> Result<Synthesized> {
    let stype = state.state_type();
    if !target.fits(stype) {
        return Err(Error::Admissibility {
            state: stype,
            target,
            reason: "target exceeds the state".into(),
        });
    }
    let neck = Necklace::of_state(state);
    if first_embedding(&neck.level_seq()).is_none() {
        return Err(Error::NotWellShaped);
    }
    if let Some(sel) = constructions::construct(&neck, target, constructions::Family::All) {
        return realize(state, &sel, Route::Construction);
    }
    if let Some(sel) = planner::plan(&neck, target) {
        return realize(state, &sel, Route::Planner);
    }
    let comp = target.complement(stype);
    if let Some(sel) = planner::plan(&neck, comp) {
        return realize(state, &sel.complement(), Route::Planner);
    }
    Err(Error::SynthesisFailed { state: stype, target })
}

/// One-interval question for states with at most one candidate below level 3.
pub fn synth_endgame(state: &GameState) -> Result<Question> {
    let stype = state.state_type();
    let low = stype.0[0] + stype.0[1] + stype.0[2];
    if low > 1 {
        return Err(Error::Precondition(format!("{stype} has {low} candidates below level 3")));
    }
    let q = stype.character();
    if q == 0 {
        return Err(Error::StateFinal);
    }
    let neck = Necklace::of_state(state);
    let total = neck.total;
    let k = endgame_size(stype, q)?;
    let mut sel = Selection::new(total);
    if low == 0 {
        sel.add(0, k);
    } else {
        // the low element plus k level-3 neighbours, kept inside one rank range
        let c = neck.arcs.iter().find(|a| a.level < 3).expect("low element");
        let right = total - 1 - c.start;
        let left_take = k.saturating_sub(right).min(c.start);
        sel.add(c.start - left_take, k + 1);
    }
    let map = RankMap::new(state);
    let (question, flipped) = map
        .realize(&sel)
        .ok_or_else(|| Error::Internal("endgame selection".into()))?;
    debug_assert!(!flipped && question.len() <= 1);
    Ok(question)
}

/// Number of level-3 elements asked together with the low element (or alone).
pub fn endgame_size(stype: StateType, q: u64) -> Result<u64> {
    let [t0, t1, t2, t3] = stype.0;
    if t0 + t1 + t2 == 0 {
        return Ok(t3.div_ceil(2));
    }
    let j = if t0 == 1 {
        0
    } else if t1 == 1 {
        1
    } else {
        2
    };
    let alpha: u128 = (0..=(3 - j)).map(|i| crate::state::binom(q - 1, i)).sum();
    let half = 1u128 << (q - 1);
    if alpha > half {
        return Err(Error::Precondition(format!("{stype}: low element outweighs half the volume")));
    }
    let k = (half - alpha) as u64;
    if k > t3 {
        return Err(Error::Precondition(format!("{stype}: needs {k} level-3 elements")));
    }
    Ok(k)
}

/// Line cover of every rank range of an arc (testing helper).
#[cfg(test)]
pub(crate) fn arc_span(neck: &Necklace, i: usize) -> Vec<(u64, u64)> {
    crate::shape::necklace::arc_ranges(&neck.arcs[i], neck.total)
}


#[cfg(test)]
mod examples {
    use super::*;
    use crate::question::question_type;
    use crate::shape::{is_well_shaped, state_from_pairs, template_state, Pattern};
    use crate::state::children_types;

    fn check(state: &GameState, target: QuestionType, got: Result<Synthesized>) -> Synthesized {
        let got = got.unwrap_or_else(|e| panic!("{}: {e}", state.state_type()));
        let q = &got.question;
        assert!(q.len() <= MAX_INTERVALS);
        let t = question_type(state, q);
        let want = if got.complemented { target.complement(state.state_type()) } else { target };
        assert_eq!(t, want);
        let (y, n) = children_types(state.state_type(), t).unwrap();
        for (a, ty) in [(Answer::Yes, y), (Answer::No, n)] {
            let c = state.apply_answer(q, a).unwrap();
            assert_eq!(c.state_type(), ty);
            assert!(is_well_shaped(&c), "{a:?} child of {} under {q}", state.state_type());
        }
        got
    }

    fn qt(a: [u64; 4]) -> QuestionType {
        QuestionType(a)
    }

    #[test]
    fn two_truthful_candidates() {
        let s = state_from_pairs(1, &[(0, 2)]).unwrap();
        check(&s, qt([1, 0, 0, 0]), synth_theorem1(&s, qt([1, 0, 0, 0])));
    }

    #[test]
    fn full_template_half_bounds() {
        for p in Pattern::ALL {
            let s = template_state(7, p, [3; 12]).unwrap();
            let t = qt([3, 5, 8, 6]);
            let got = check(&s, t, synth_theorem1(&s, t));
            assert_eq!(got.route, Route::Construction);
        }
    }

    #[test]
    fn halving_initial_states() {
        for m in 1..8 {
            let s = GameState::initial(m);
            let t = qt([1 << (m - 1), 0, 0, 0]);
            check(&s, t, synth_theorem1(&s, t));
        }
    }

    #[test]
    fn level_one_start() {
        // (0,4,4,5)
        let s = state_from_pairs(4, &[(1, 2), (2, 2), (3, 2), (2, 2), (1, 2), (2, 0), (3, 3)]).unwrap();
        assert_eq!(s.state_type(), StateType([0, 4, 4, 5]));
        let t = qt([0, 2, 2, 3]);
        let (y, n) = children_types(s.state_type(), t).unwrap();
        assert_eq!((y, n), (StateType([0, 2, 4, 5]), StateType([0, 2, 4, 4])));
        check(&s, t, synth_type_0bcd(&s, t));
    }

    #[test]
    fn one_level_one_candidate() {
        // (0,1,3,5) with [0,1,0,5]
        let s = state_from_pairs(4, &[(3, 2), (2, 1), (1, 1), (2, 2), (3, 3)]).unwrap();
        let t = qt([0, 1, 0, 5]);
        let (y, n) = children_types(s.state_type(), t).unwrap();
        assert_eq!((y, n), (StateType([0, 1, 0, 8]), StateType([0, 0, 4, 0])));
        check(&s, t, synthesize(&s, t));
    }

    #[test]
    fn lemma_11cd() {
        // (1,4,6,4) with [1,1,3,2]
        let s = template_state(5, Pattern::Sigma1, [1, 1, 1, 1, 2, 1, 1, 1, 1, 1, 1, 2]).unwrap();
        assert_eq!(s.state_type(), StateType([1, 3, 6, 4]));
        let s = template_state(5, Pattern::Sigma1, [1, 2, 1, 1, 2, 1, 1, 1, 1, 1, 1, 2]).unwrap();
        assert_eq!(s.state_type(), StateType([1, 4, 6, 4]));
        let t = qt([1, 1, 3, 2]);
        let (y, n) = children_types(s.state_type(), t).unwrap();
        assert_eq!((y, n), (StateType([1, 1, 6, 5]), StateType([0, 4, 4, 5])));
        check(&s, t, synth_type_11cd(&s, t));
    }

    #[test]
    fn lemma_11cd_large() {
        let s = template_state(
            12,
            Pattern::Sigma1,
            [50, 6, 1, 5, 50, 937, 50, 5, 49, 936, 49, 936],
        )
        .unwrap();
        assert_eq!(s.state_type(), StateType([1, 16, 248, 2809]));
        let t = qt([1, 1, 116, 1852]);
        check(&s, t, synth_type_11cd(&s, t));
    }

    #[test]
    fn lemma_102d() {
        // (1,1,6,5) with [1,0,2,3], then (1,1,8,45) with [1,0,2,29]
        let s = template_state(4, Pattern::Sigma1, [1, 1, 1, 0, 2, 2, 1, 0, 1, 2, 1, 1]).unwrap();
        assert_eq!(s.state_type(), StateType([1, 1, 6, 5]));
        let t = qt([1, 0, 2, 3]);
        let (y, n) = children_types(s.state_type(), t).unwrap();
        assert_eq!((y, n), (StateType([1, 0, 3, 7]), StateType([0, 2, 4, 4])));
        check(&s, t, synth_type_102d(&s, t));
        let s = template_state(7, Pattern::Sigma1, [2, 1, 1, 0, 2, 15, 1, 0, 2, 15, 1, 15]).unwrap();
        assert_eq!(s.state_type(), StateType([1, 1, 8, 45]));
        let t = qt([1, 0, 2, 29]);
        check(&s, t, synth_type_102d(&s, t));
    }

    #[test]
    fn lemma_102d_from_no_level_one() {
        let s = template_state(4, Pattern::Sigma1, [1, 0, 1, 0, 1, 3, 0, 0, 1, 2, 0, 2]).unwrap();
        assert_eq!(s.state_type(), StateType([1, 0, 3, 7]));
        let t = qt([1, 0, 0, 2]);
        let (y, n) = children_types(s.state_type(), t).unwrap();
        assert_eq!((y, n), (StateType([1, 0, 0, 5]), StateType([0, 1, 3, 5])));
        check(&s, t, synth_type_100d(&s, t));
        let s = template_state(4, Pattern::Sigma1, [1, 0, 1, 0, 1, 3, 0, 0, 1, 3, 0, 3]).unwrap();
        assert_eq!(s.state_type(), StateType([1, 0, 3, 9]));
        let t = qt([1, 0, 0, 4]);
        check(&s, t, synth_type_100d(&s, t));
    }

    #[test]
    fn inadmissible_targets_are_rejected() {
        let s = template_state(7, Pattern::Sigma1, [3; 12]).unwrap();
        assert!(matches!(
            synth_theorem1(&s, qt([3, 6, 0, 0])),
            Err(Error::Admissibility { .. })
        ));
        assert!(matches!(
            synth_type_102d(&s, qt([1, 0, 2, 0])),
            Err(Error::Admissibility { .. })
        ));
    }
}
