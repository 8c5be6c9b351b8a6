//! Small 0-typical states: the M̃ recursion, the table of non-nice states and
//! DP-guided question types.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::state::{apply_answer_type, character, children_types, volume, Answer, QuestionType, StateType};

/// Characters covered by the precomputed tables.
pub const ENVELOPE_CHARACTER: u64 = 13;

fn pow2(q: u64) -> u128 {
    1u128 << q
}

/// Children pairs `(t1, t2)` of `(0,t1,t2,0)` under `[0,α1,α2]`, yes first.
fn child_pairs(t1: u64, t2: u64, a1: u64, a2: u64) -> ((u64, u64), (u64, u64)) {
    ((a1, t1 - a1 + a2), (t1 - a1, a1 + t2 - a2))
}

/// Least `t3` with `ch(0,t1,t2,t3) > k`.
fn least_t3_above(t1: u64, t2: u64, k: u64) -> u64 {
    let w = volume(StateType([0, t1, t2, 0]), k);
    let cap = pow2(k);
    if w > cap {
        0
    } else {
        (cap - w + 1) as u64
    }
}

/// `0..=hi` ordered by distance from `t/2`.
fn centre_out(t: u64, hi: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (0..=hi).collect();
    v.sort_by_key(|&i| (i.abs_diff(t / 2), i));
    v
}

/// Character of `(0,t1,t2,t3)` with level weights read from a table.
fn ch012(t1: u64, t2: u64, t3: u64) -> u64 {
    static W: OnceLock<Vec<(u128, u128)>> = OnceLock::new();
    let w = W.get_or_init(|| {
        (0..100u64).map(|q| (crate::state::level_weight(1, q), crate::state::level_weight(2, q))).collect()
    });
    let mut q = 0;
    while q < 100 {
        let (w1, w2) = w[q as usize];
        if t1 as u128 * w1 + t2 as u128 * w2 + t3 as u128 <= pow2(q) {
            return q;
        }
        q += 1;
    }
    character(StateType([0, t1, t2, t3]))
}

/// Memoized M̃ (constrained) or M (unconstrained).
struct Dp {
    constrained: bool,
    memo: HashMap<(u64, u64), u64>,
}

impl Dp {
    fn new(constrained: bool) -> Self {
        Dp { constrained, memo: HashMap::new() }
    }

    fn bound(&self, t: u64) -> u64 {
        if self.constrained {
            t.div_ceil(2)
        } else {
            t
        }
    }

    fn value(&mut self, t1: u64, t2: u64) -> u64 {
        match (t1, t2) {
            (0, 0) => return 1,
            (1, 0) | (0, 1) => return 0,
            _ => {}
        }
        if let Some(&v) = self.memo.get(&(t1, t2)) {
            return v;
        }
        let mut best = u64::MAX;
        // balanced candidates first: they usually reach 0 and end the scan
        'scan: for a1 in centre_out(t1, self.bound(t1)) {
            for a2 in centre_out(t2, self.bound(t2)) {
                if let Some(v) = self.minc(t1, t2, a1, a2) {
                    best = best.min(v);
                    if best == 0 {
                        break 'scan;
                    }
                }
            }
        }
        self.memo.insert((t1, t2), best);
        best
    }

    fn minc(&mut self, t1: u64, t2: u64, a1: u64, a2: u64) -> Option<u64> {
        let (y, n) = child_pairs(t1, t2, a1, a2);
        if y == (t1, t2) || n == (t1, t2) {
            return None;
        }
        let k1 = ch012(y.0, y.1, t2 - a2);
        let k2 = ch012(n.0, n.1, a2);
        let my = self.value(y.0, y.1);
        let k3 = ch012(y.0, y.1, my);
        let mn = self.value(n.0, n.1);
        let k4 = ch012(n.0, n.1, mn);
        Some(least_t3_above(t1, t2, k1.max(k2).max(k3).max(k4)))
    }
}

fn tilde() -> &'static Mutex<Dp> {
    static T: OnceLock<Mutex<Dp>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(Dp::new(true)))
}

fn unconstrained() -> &'static Mutex<Dp> {
    static T: OnceLock<Mutex<Dp>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(Dp::new(false)))
}

/// M̃(t1,t2): least `d` with `(0,t1,t2,d)` in W̃.
pub fn m_tilde(t1: u64, t2: u64) -> u64 {
    tilde().lock().unwrap().value(t1, t2)
}

/// Same recursion with α_i ranging up to t_i.
pub fn m_unconstrained(t1: u64, t2: u64) -> u64 {
    unconstrained().lock().unwrap().value(t1, t2)
}

/// MinC(t1,t2,α1,α2); `None` for candidates whose child repeats `(t1,t2)`.
pub fn minc(t1: u64, t2: u64, a1: u64, a2: u64) -> Option<u64> {
    assert!(a1 <= t1 && a2 <= t2, "α out of range");
    tilde().lock().unwrap().minc(t1, t2, a1, a2)
}

pub fn is_0typical(stype: StateType) -> bool {
    let [t0, t1, t2, t3] = stype.0;
    t0 == 0 && t2 + 1 >= t1 && t3 >= character(stype)
}

/// `(0,t1,t2,t3)` with `t3 ≥ M̃(t1,t2)`.
pub fn in_w_tilde(stype: StateType) -> bool {
    let [t0, t1, t2, t3] = stype.0;
    t0 == 0 && t3 >= m_tilde(t1, t2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonNiceRow {
    pub character: u64,
    pub t1: u64,
    pub t2: u64,
    pub t3_min: u64,
    pub t3_max: u64,
}

/// All 0-typical `(0,t1,t2,t3)` of character at most `max_character` outside W̃,
/// grouped into `t3` ranges and sorted by character, then `(t1,t2)`.
pub fn non_nice_table(max_character: u64) -> Vec<NonNiceRow> {
    let cap = pow2(max_character);
    let mut rows = Vec::new();
    let mut t1 = 0;
    while volume(StateType([0, t1, 0, 0]), max_character) <= cap {
        let mut t2 = t1.saturating_sub(1);
        while volume(StateType([0, t1, t2, 0]), max_character) <= cap {
            let m = m_tilde(t1, t2);
            let mut cur: Option<NonNiceRow> = None;
            for t3 in 0..m {
                let s = StateType([0, t1, t2, t3]);
                let ch = character(s);
                if ch > max_character {
                    break;
                }
                if s.support() == 0 || !is_0typical(s) {
                    continue;
                }
                match cur.as_mut() {
                    Some(r) if r.character == ch && r.t3_max + 1 == t3 => r.t3_max = t3,
                    _ => {
                        rows.extend(cur.take());
                        cur = Some(NonNiceRow { character: ch, t1, t2, t3_min: t3, t3_max: t3 });
                    }
                }
            }
            rows.extend(cur);
            t2 += 1;
        }
        t1 += 1;
    }
    rows.sort_by_key(|r| (r.character, r.t1, r.t2, r.t3_min));
    rows
}

/// Children the dispatcher finishes within their character without the DP: final,
/// one candidate below level 3, or at most four candidates that admit such a strategy.
fn settled(s: StateType) -> bool {
    let [t0, t1, t2, _] = s.0;
    let n = s.support();
    n <= 1 || t0 + t1 + t2 <= 1 || (n <= 4 && finishes_within(s, character(s)))
}

/// Question type for a state of W̃: both children of smaller character and each either
/// settled (final, one candidate below level 3, or at most four candidates) or in W̃.
/// Types with more settled children come first, then lexicographic order.
pub fn dp_qtype(stype: StateType) -> Result<QuestionType> {
    let t0 = stype.0[0];
    if t0 != 0 || !in_w_tilde(stype) {
        return Err(Error::Precondition(format!("{stype} is not in W̃")));
    }
    static CACHE: OnceLock<Mutex<HashMap<StateType, QuestionType>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&qt) = cache.lock().expect("dp cache").get(&stype) {
        return Ok(qt);
    }
    let qt = dp_search(stype)?;
    cache.lock().expect("dp cache").insert(stype, qt);
    Ok(qt)
}

fn dp_search(stype: StateType) -> Result<QuestionType> {
    let [_, t1, t2, t3] = stype.0;
    let ch = character(stype);
    if ch == 0 {
        return Err(Error::StateFinal);
    }
    let lim = pow2(ch - 1);
    let mut best: Option<(usize, QuestionType)> = None;
    for a1 in 0..=t1.div_ceil(2) {
        for a2 in 0..=t2.div_ceil(2) {
            // the yes volume grows by one per level-3 element asked, the no volume shrinks
            let (y0, n0) = children_types(stype, QuestionType([0, a1, a2, 0]))?;
            let (vy, vn) = (volume(y0, ch - 1), volume(n0, ch - 1));
            if vy > lim {
                continue;
            }
            let lo = vn.saturating_sub(lim).min(t3 as u128 + 1) as u64;
            let hi = (lim - vy).min(t3 as u128) as u64;
            for a3 in lo..=hi {
                let qt = QuestionType([0, a1, a2, a3]);
                let (y, n) = children_types(stype, qt)?;
                debug_assert!(volume(y, ch - 1) <= lim && volume(n, ch - 1) <= lim);
                let ok = |c: StateType| settled(c) || in_w_tilde(c);
                if !(ok(y) && ok(n)) {
                    continue;
                }
                let open = [y, n].iter().filter(|&&c| !settled(c)).count();
                if best.is_none_or(|(o, _)| open < o) {
                    best = Some((open, qt));
                }
                if open == 0 {
                    return Ok(qt);
                }
            }
        }
    }
    best.map(|b| b.1)
        .ok_or_else(|| Error::Internal(format!("{stype} is in W̃ but no DP question exists")))
}

/// Exhaustive type-level search: a strategy of `ch(stype)` questions of any type exists.
/// States with no candidate at all are not nice.
pub fn nice_by_search(stype: StateType) -> bool {
    stype.support() > 0 && finishes_within(stype, character(stype))
}

/// Whether some strategy of `q` questions of any type always finishes `s`.
/// Candidates on one level are interchangeable, so question types suffice.
pub fn finishes_within(s: StateType, q: u64) -> bool {
    static MEMO: OnceLock<Mutex<HashMap<(StateType, u64), bool>>> = OnceLock::new();
    wins(s, q, MEMO.get_or_init(Default::default))
}

/// Every question type after which both children finish within `q - 1` questions.
pub fn winning_qtypes(s: StateType, q: u64) -> Vec<QuestionType> {
    let mut out = Vec::new();
    if q == 0 || s.support() <= 1 {
        return out;
    }
    let [t0, t1, t2, t3] = s.0;
    let lim = pow2(q - 1);
    for a0 in 0..=t0 {
        for a1 in 0..=t1 {
            for a2 in 0..=t2 {
                let base = QuestionType([a0, a1, a2, 0]);
                let y0 = apply_answer_type(s, base, Answer::Yes).unwrap();
                let n0 = apply_answer_type(s, base, Answer::No).unwrap();
                let wy = volume(y0, q - 1);
                let wn = volume(n0, q - 1);
                if wy > lim || wn > lim + t3 as u128 {
                    continue;
                }
                let lo = (wn.saturating_sub(lim)) as u64;
                let hi = ((lim - wy) as u64).min(t3);
                for a3 in lo..=hi {
                    let qt = QuestionType([a0, a1, a2, a3]);
                    let (y, n) = children_types(s, qt).unwrap();
                    if finishes_within(y, q - 1) && finishes_within(n, q - 1) {
                        out.push(qt);
                    }
                }
            }
        }
    }
    out
}

fn wins(s: StateType, q: u64, memo: &Mutex<HashMap<(StateType, u64), bool>>) -> bool {
    if s.support() <= 1 {
        return true;
    }
    if q == 0 || volume(s, q) > pow2(q) {
        return false;
    }
    if let Some(&v) = memo.lock().expect("oracle memo").get(&(s, q)) {
        return v;
    }
    let [t0, t1, t2, t3] = s.0;
    let lim = pow2(q - 1);
    let mut found = false;
    'outer: for a0 in 0..=t0 {
        for a1 in 0..=t1 {
            for a2 in 0..=t2 {
                // yes-volume grows by one per level-3 candidate asked, no-volume shrinks
                let base = QuestionType([a0, a1, a2, 0]);
                let y0 = apply_answer_type(s, base, Answer::Yes).unwrap();
                let n0 = apply_answer_type(s, base, Answer::No).unwrap();
                let wy = volume(y0, q - 1);
                let wn = volume(n0, q - 1);
                if wy > lim || wn > lim + t3 as u128 {
                    continue;
                }
                let lo = (wn.saturating_sub(lim)) as u64;
                let hi = ((lim - wy) as u64).min(t3);
                for a3 in lo..=hi {
                    let qt = QuestionType([a0, a1, a2, a3]);
                    let (y, n) = children_types(s, qt).unwrap();
                    if wins(y, q - 1, memo) && wins(n, q - 1, memo) {
                        found = true;
                        break 'outer;
                    }
                }
            }
        }
    }
    memo.lock().expect("oracle memo").insert((s, q), found);
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases() {
        assert_eq!(m_tilde(0, 0), 1);
        assert_eq!(m_tilde(1, 0), 0);
        assert_eq!(m_tilde(0, 1), 0);
        assert_eq!(m_unconstrained(0, 0), 1);
    }

    #[test]
    fn table_rows() {
        assert_eq!(m_tilde(1, 5), 8);
        assert_eq!(m_tilde(2, 1), 14);
        assert_eq!(m_tilde(2, 2), 7);
        assert_eq!(m_unconstrained(1, 5), 8);
    }

    #[test]
    fn self_reference_is_skipped() {
        assert_eq!(minc(3, 4, 0, 0), None);
        assert!(minc(3, 4, 1, 0).is_some());
    }

    #[test]
    fn min_over_minc() {
        let best = (0..=1)
            .flat_map(|a1| (0..=1).map(move |a2| (a1, a2)))
            .filter_map(|(a1, a2)| minc(2, 1, a1, a2))
            .min();
        assert_eq!(best, Some(14));
    }

    #[test]
    fn zero_typical() {
        assert!(is_0typical(StateType([0, 5, 22, 44])));
        assert!(!is_0typical(StateType([1, 0, 0, 5])));
        assert!(!is_0typical(StateType([0, 3, 1, 100])));
    }

    #[test]
    fn dp_question_for_m4_row() {
        assert_eq!(dp_qtype(StateType([0, 1, 3, 5])).unwrap(), QuestionType([0, 1, 0, 5]));
    }

    #[test]
    fn search_oracle_small() {
        assert!(nice_by_search(StateType([0, 0, 0, 1])));
        assert!(!nice_by_search(StateType([0, 0, 0, 0])));
        assert!(!nice_by_search(StateType([0, 2, 2, 6])));
        assert!(nice_by_search(StateType([0, 2, 2, 7])));
        assert!(nice_by_search(StateType([0, 0, 4, 0])));
    }
}
