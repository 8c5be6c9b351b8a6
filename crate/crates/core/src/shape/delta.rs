//! Splitting/covering classification and arc-count changes under an answer.

use crate::error::{Error, Result};
use crate::question::Question;
use crate::state::{Answer, GameState};

use super::necklace::{new_level, Necklace, Selection};
use super::{first_embedding, minimal_counts, minimal_list, ArcRole};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitKind {
    ModeSplit,
    SaddleSplit,
    UpStepSplit,
    DownStepSplit,
    ModeCover,
    SaddleCover,
    StepCover,
    NoTouch,
    /// Touches the arc without being a cover or a one-boundary split.
    Other,
}

impl SplitKind {
    pub fn is_split(self) -> bool {
        !matches!(
            self,
            SplitKind::ModeCover | SplitKind::SaddleCover | SplitKind::StepCover | SplitKind::NoTouch
        )
    }

    fn cover_of(role: ArcRole) -> SplitKind {
        match role {
            ArcRole::Mode => SplitKind::ModeCover,
            ArcRole::Saddle => SplitKind::SaddleCover,
            _ => SplitKind::StepCover,
        }
    }
}

/// Change of the arc count on the arc's level (and the next one) for a touched arc.
/// Untouched arcs are covered by the complementary question, so they are looked up as
/// the cover of their role with the answer swapped.
pub fn delta(kind: SplitKind, answer: Answer) -> i64 {
    use Answer::*;
    use SplitKind::*;
    match (kind, answer) {
        (SaddleSplit, _) => 1,
        (ModeSplit, _) => 0,
        (UpStepSplit, Yes) => 0,
        (UpStepSplit, No) => 1,
        (DownStepSplit, Yes) => 1,
        (DownStepSplit, No) => 0,
        (SaddleCover, Yes) => 0,
        (SaddleCover, No) => 1,
        (ModeCover, Yes) => 0,
        (ModeCover, No) => -1,
        (StepCover, _) => 0,
        (NoTouch, _) | (Other, _) => 0,
    }
}

/// One entry of the minimal list with its neighbours' levels.
#[derive(Debug, Clone, Copy)]
struct Local {
    prev: u8,
    level: u8,
    next: u8,
    len: u64,
    start: u64,
}

fn locals(necklace: &Necklace) -> Vec<Local> {
    let list = minimal_list(necklace);
    let n = list.len();
    (0..n)
        .map(|k| {
            let (level, len, start) = list[k];
            Local {
                prev: list[(k + n - 1) % n].0,
                level,
                next: list[(k + 1) % n].0,
                len,
                start,
            }
        })
        .collect()
}

/// `(inside, len)` pieces of the cyclic rank range in rank order.
fn pieces(sel: &Selection, start: u64, len: u64) -> Vec<(bool, u64)> {
    let total = sel.total();
    let mut out: Vec<(bool, u64)> = Vec::new();
    let mut segs = vec![(start, (start + len).min(total))];
    if start + len > total {
        segs.push((0, start + len - total));
    }
    for (lo, hi) in segs {
        let mut cur = lo;
        for &(l, h) in sel.ranges() {
            if h <= cur || l >= hi {
                continue;
            }
            let (l, h) = (l.max(cur), h.min(hi));
            if l > cur {
                out.push((false, l - cur));
            }
            out.push((true, h - l));
            cur = h;
        }
        if hi > cur {
            out.push((false, hi - cur));
        }
    }
    let mut merged: Vec<(bool, u64)> = Vec::new();
    for p in out {
        match merged.last_mut() {
            Some(last) if last.0 == p.0 => last.1 += p.1,
            _ => merged.push(p),
        }
    }
    merged
}

fn classify_local(l: &Local, sel: &Selection) -> SplitKind {
    if l.len == 0 {
        return SplitKind::NoTouch;
    }
    let role = if l.prev == l.level || l.next == l.level {
        ArcRole::Mode
    } else {
        ArcRole::of(l.prev, l.level, l.next)
    };
    let p = pieces(sel, l.start, l.len);
    match p.as_slice() {
        [(false, _)] => SplitKind::NoTouch,
        [(true, _)] => SplitKind::cover_of(role),
        [(a, _), (_, _)] => {
            // the selected piece flanks `prev` when it comes first
            let flank = if *a { l.prev } else { l.next };
            match role {
                ArcRole::Mode => SplitKind::ModeSplit,
                ArcRole::Saddle => SplitKind::SaddleSplit,
                _ if flank > l.level => SplitKind::DownStepSplit,
                _ => SplitKind::UpStepSplit,
            }
        }
        _ => SplitKind::Other,
    }
}

/// Kind of interaction of the selection with every entry of the minimal list,
/// as `(level, len, kind, role)`.
pub fn classify(state: &GameState, q: &Question) -> Vec<(u8, u64, SplitKind, ArcRole)> {
    let n = Necklace::of_state(state);
    let sel = Selection::of_question(state, q);
    locals(&n)
        .iter()
        .map(|l| {
            let role = if l.prev == l.level {
                ArcRole::Mode
            } else {
                ArcRole::of(l.prev, l.level, l.next)
            };
            (l.level, l.len, classify_local(l, &sel), role)
        })
        .collect()
}

fn linear_counts(seq: &[u8]) -> [i64; 4] {
    let mut merged: Vec<u8> = Vec::with_capacity(seq.len());
    for &x in seq {
        if merged.last() != Some(&x) {
            merged.push(x);
        }
    }
    let mut c = [0i64; 5];
    for (k, &a) in merged.iter().enumerate() {
        c[a as usize] += 1;
        if let Some(&b) = merged.get(k + 1) {
            for l in a.min(b) + 1..a.max(b) {
                c[l as usize] += 1;
            }
        }
    }
    [c[0], c[1], c[2], c[3]]
}

/// Arc-count change per level caused by one arc alone, its neighbours held fixed.
fn local_delta(l: &Local, sel: &Selection, answer: Answer, single: bool) -> [i64; 4] {
    let after: Vec<u8> = pieces(sel, l.start, l.len)
        .into_iter()
        .map(|(inside, _)| new_level(l.level, inside, answer))
        .collect();
    let mut d = [0i64; 4];
    if single {
        let mut cyc = after.clone();
        cyc.dedup();
        if cyc.len() > 1 && cyc[0] == cyc[cyc.len() - 1] {
            cyc.pop();
        }
        let a = minimal_counts(&cyc);
        let b = minimal_counts(&[l.level]);
        for i in 0..4 {
            d[i] = a[i] as i64 - b[i] as i64;
        }
        return d;
    }
    let mut seq = vec![l.prev];
    seq.extend(after);
    seq.push(l.next);
    let a = linear_counts(&seq);
    let b = linear_counts(&[l.prev, l.level, l.next]);
    for i in 0..4 {
        d[i] = a[i] - b[i];
    }
    d
}

/// Per-level arc counts of the yes and no children, obtained by adding every arc's
/// local change to the current counts. Children are read on the parent's support:
/// a newly eliminated piece stays in place as a plateau above level 3.
pub fn predicted_counts(state: &GameState, q: &Question) -> ([i64; 4], [i64; 4]) {
    let n = Necklace::of_state(state);
    let sel = Selection::of_question(state, q);
    let base = minimal_counts(&n.level_seq());
    let ls = locals(&n);
    let single = n.arcs.len() == 1;
    let mut out = [[0i64; 4]; 2];
    for (k, answer) in [Answer::Yes, Answer::No].into_iter().enumerate() {
        if ls.len() == 2 {
            // both neighbours of each arc are the same arc: evaluate the pair jointly
            let child: Vec<u8> = sel.child_pairs_on(&n, answer, true).iter().map(|p| p.0).collect();
            out[k] = minimal_counts(&child).map(|x| x as i64);
            continue;
        }
        for i in 0..4 {
            out[k][i] = base[i] as i64;
        }
        for l in ls.iter().filter(|l| l.len > 0) {
            let d = local_delta(l, &sel, answer, single);
            for i in 0..4 {
                out[k][i] += d[i];
            }
        }
    }
    (out[0], out[1])
}

/// Direct arc counts per level of a child drawn on the parent's support.
pub fn child_counts_on_parent(state: &GameState, q: &Question, answer: Answer) -> [i64; 4] {
    let n = Necklace::of_state(state);
    let sel = Selection::of_question(state, q);
    let child: Vec<u8> = sel.child_pairs_on(&n, answer, true).iter().map(|p| p.0).collect();
    minimal_counts(&child).map(|x| x as i64)
}

/// Arc-count change per level restricted to the arcs on level `i` and `i-1`.
pub fn restricted_sums(state: &GameState, q: &Question) -> ([i64; 4], [i64; 4]) {
    let n = Necklace::of_state(state);
    let sel = Selection::of_question(state, q);
    let ls = locals(&n);
    let single = n.arcs.len() == 1;
    let mut out = [[0i64; 4]; 2];
    for (k, answer) in [Answer::Yes, Answer::No].into_iter().enumerate() {
        for l in ls.iter().filter(|l| l.len > 0) {
            let d = local_delta(l, &sel, answer, single);
            for i in 0..4u8 {
                if l.level == i || l.level + 1 == i {
                    out[k][i as usize] += d[i as usize];
                }
            }
        }
    }
    (out[0], out[1])
}

/// True iff levels 0..2 keep their arc counts under both answers. Level 3 is left out:
/// any answer eliminates some level-3 candidates, which only removes or merges
/// level-3 arcs and never breaks the template.
pub fn preserves_well_shape(state: &GameState, q: &Question) -> Result<bool> {
    let n = Necklace::of_state(state);
    if first_embedding(&n.level_seq()).is_none() {
        return Err(Error::NotWellShaped);
    }
    let base = minimal_counts(&n.level_seq());
    let (yes, no) = predicted_counts(state, q);
    Ok((0..3).all(|i| yes[i] == base[i] as i64 && no[i] == base[i] as i64))
}

/// Sufficient conditions on levels 0..2: at most one split arc per level, the split
/// compensated by covered/uncovered modes, and covered saddles paid for by a further
/// covered mode. The saddle clause is also applied to the complementary question,
/// since an untouched saddle gains an arc on a yes answer. A level with no split arc
/// must balance its covers directly.
pub fn lemma_conditions_hold(state: &GameState, q: &Question) -> Result<bool> {
    let n = Necklace::of_state(state);
    if first_embedding(&n.level_seq()).is_none() {
        return Err(Error::NotWellShaped);
    }
    let sel = Selection::of_question(state, q);
    let ls = locals(&n);
    for level in 0..3u8 {
        let at: Vec<(SplitKind, ArcRole)> = ls
            .iter()
            .filter(|l| l.level == level && l.len > 0)
            .map(|l| (classify_local(l, &sel), ArcRole::of(l.prev, l.level, l.next)))
            .collect();
        let splits: Vec<SplitKind> = at.iter().map(|x| x.0).filter(|k| k.is_split()).collect();
        if splits.len() > 1 {
            return Ok(false);
        }
        let covered_modes = at.iter().filter(|x| x.0 == SplitKind::ModeCover).count();
        let uncovered_modes = at
            .iter()
            .filter(|x| x.0 == SplitKind::NoTouch && x.1 == ArcRole::Mode)
            .count();
        let covered_saddles = at.iter().filter(|x| x.0 == SplitKind::SaddleCover).count();
        let uncovered_saddles = at
            .iter()
            .filter(|x| x.0 == SplitKind::NoTouch && x.1 == ArcRole::Saddle)
            .count();
        // modes spent by (b): (covered, uncovered)
        let used = match splits.first() {
            Some(SplitKind::ModeSplit) => (0, 0),
            Some(SplitKind::UpStepSplit) if covered_modes >= 1 => (1, 0),
            Some(SplitKind::DownStepSplit) if uncovered_modes >= 1 => (0, 1),
            Some(SplitKind::SaddleSplit) if covered_modes >= 1 && uncovered_modes >= 1 => (1, 1),
            Some(_) => return Ok(false),
            None => {
                let sum = |answer: Answer| -> i64 {
                    at.iter()
                        .map(|&(k, role)| match k {
                            SplitKind::NoTouch => delta(SplitKind::cover_of(role), answer.flip()),
                            _ => delta(k, answer),
                        })
                        .sum()
                };
                if sum(Answer::Yes) != 0 || sum(Answer::No) != 0 {
                    return Ok(false);
                }
                continue;
            }
        };
        // (c), and the same clause for the complementary question
        if covered_saddles > 0 && covered_modes < used.0 + covered_saddles {
            return Ok(false);
        }
        if uncovered_saddles > 0 && uncovered_modes < used.1 + uncovered_saddles {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::{is_well_shaped, template_state, Pattern};
    use super::super::minimal_counts;

    fn sigma1() -> GameState {
        template_state(7, Pattern::Sigma1, [3; 12]).unwrap()
    }

    #[test]
    fn table_values() {
        assert_eq!(delta(SplitKind::SaddleSplit, Answer::Yes), 1);
        assert_eq!(delta(SplitKind::SaddleSplit, Answer::No), 1);
        assert_eq!(delta(SplitKind::ModeCover, Answer::No), -1);
        assert_eq!(delta(SplitKind::ModeCover, Answer::Yes), 0);
        assert_eq!(delta(SplitKind::StepCover, Answer::Yes), 0);
        assert_eq!(delta(SplitKind::StepCover, Answer::No), 0);
    }

    #[test]
    fn mode_splits_preserve() {
        // sigma1 with all arcs of length 3: S at 6..8, H at 21..23, A at 30..32
        let s = sigma1();
        let q = Question::from_pairs(&[(6, 6), (21, 21), (30, 30)]).unwrap();
        assert!(lemma_conditions_hold(&s, &q).unwrap());
        assert!(preserves_well_shape(&s, &q).unwrap());
        // step covers between the splits change nothing either
        let q = Question::from_pairs(&[(8, 15), (23, 27), (32, 33)]).unwrap();
        assert!(lemma_conditions_hold(&s, &q).unwrap());
        assert!(preserves_well_shape(&s, &q).unwrap());
    }

    #[test]
    fn two_splits_on_a_level_fail_clause_a() {
        let s = sigma1();
        // N (3..6) and O (9..12) both split at level 1
        let q = Question::from_pairs(&[(3, 3), (11, 11)]).unwrap();
        assert!(!lemma_conditions_hold(&s, &q).unwrap());
    }

    #[test]
    fn not_well_shaped_is_an_error() {
        let bad = GameState::from_levels(&[0, 1, 0, 1]).unwrap();
        assert_eq!(preserves_well_shape(&bad, &Question::empty()), Err(Error::NotWellShaped));
    }

    /// Each single-arc geometry on a full sigma1 instance has the tabulated local effect.
    #[test]
    fn local_effect_matches_table() {
        let s = sigma1();
        let n = Necklace::of_state(&s);
        let ls = locals(&n);
        for l in ls.iter().filter(|l| l.level < 3) {
            let choices = [(0, 1), (0, 3), (2, 1)];
            for (off, len) in choices {
                let mut sel = Selection::new(n.total);
                sel.add(l.start + off, len);
                let kind = classify_local(l, &sel);
                for answer in [Answer::Yes, Answer::No] {
                    let d = local_delta(l, &sel, answer, false);
                    let want = delta(kind, answer);
                    assert_eq!(d[l.level as usize], want, "{kind:?} {answer:?} {l:?}");
                    assert_eq!(d[l.level as usize + 1], want, "{kind:?} {answer:?} {l:?}");
                }
            }
        }
    }

    #[test]
    fn eliminated_saddle_stays_as_a_gap() {
        let s = sigma1();
        // cover all of P (33..35) and nothing else; a no answer eliminates it
        let q = Question::from_pairs(&[(33, 35)]).unwrap();
        let (_, no) = predicted_counts(&s, &q);
        assert_eq!(no, [1, 3, 5, 4]);
        assert_eq!(no, child_counts_on_parent(&s, &q, Answer::No));
        let (_, rno) = restricted_sums(&s, &q);
        assert_eq!(rno[3], 1);
        // on its own support the child loses P and merges A with L
        let child = s.apply_answer(&q, Answer::No).unwrap();
        assert_eq!(minimal_counts(&Necklace::of_state(&child).level_seq()), [1, 3, 4, 2]);
        assert!(is_well_shaped(&child));
    }
}
