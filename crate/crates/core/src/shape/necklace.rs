//! Circular view of the support and rank-based selections over it.
//!
//! Support elements are numbered by rank (increasing label order). The
//! necklace is the cyclic sequence of maximal same-level arcs in rank order;
//! an arc may wrap from the highest rank back to rank 0.

use crate::question::{Interval, Question, MAX_INTERVALS};
use crate::state::{Answer, GameState, QuestionType, ELIMINATED};

/// Maximal run of same-level candidates in rank order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NArc {
    pub level: u8,
    pub len: u64,
    /// Rank of the first element; the arc occupies `start..start+len` modulo the support size.
    pub start: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Necklace {
    pub arcs: Vec<NArc>,
    pub total: u64,
}

impl Necklace {
    pub fn of_state(state: &GameState) -> Necklace {
        let mut arcs: Vec<NArc> = Vec::new();
        let mut rank = 0;
        for r in state.support_runs() {
            match arcs.last_mut() {
                Some(last) if last.level == r.level => last.len += r.len(),
                _ => arcs.push(NArc {
                    level: r.level,
                    len: r.len(),
                    start: rank,
                }),
            }
            rank += r.len();
        }
        Necklace::close(arcs, rank)
    }

    /// Builds an abstract necklace from a cyclic `(level, len)` sequence; zero lengths are skipped.
    pub fn from_levels(seq: &[(u8, u64)]) -> Necklace {
        let mut arcs: Vec<NArc> = Vec::new();
        let mut rank = 0;
        for &(level, len) in seq {
            if len == 0 {
                continue;
            }
            match arcs.last_mut() {
                Some(last) if last.level == level => last.len += len,
                _ => arcs.push(NArc { level, len, start: rank }),
            }
            rank += len;
        }
        Necklace::close(arcs, rank)
    }

    fn close(mut arcs: Vec<NArc>, total: u64) -> Necklace {
        if arcs.len() > 1 && arcs[0].level == arcs[arcs.len() - 1].level {
            let first = arcs.remove(0);
            arcs.last_mut().unwrap().len += first.len;
        }
        Necklace { arcs, total }
    }

    pub fn level_seq(&self) -> Vec<u8> {
        self.arcs.iter().map(|a| a.level).collect()
    }

    pub fn pairs(&self) -> Vec<(u8, u64)> {
        self.arcs.iter().map(|a| (a.level, a.len)).collect()
    }

    /// Index of the rotation of `pairs()` that is lexicographically smallest.
    pub fn min_rotation(&self) -> usize {
        let p = self.pairs();
        let n = p.len();
        (0..n)
            .min_by(|&a, &b| {
                (0..n)
                    .map(|i| p[(a + i) % n])
                    .cmp((0..n).map(|i| p[(b + i) % n]))
            })
            .unwrap_or(0)
    }

    /// Rotation-canonical `(level, len)` sequence; equal for states that differ only by position.
    pub fn signature(&self) -> Vec<(u8, u64)> {
        let p = self.pairs();
        let r = self.min_rotation();
        (0..p.len()).map(|i| p[(r + i) % p.len()]).collect()
    }

    pub fn level_count(&self, level: u8) -> u64 {
        self.arcs.iter().filter(|a| a.level == level).map(|a| a.len).sum()
    }
}

/// A set of ranks, stored as sorted disjoint non-wrapping ranges `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Selection {
    ranges: Vec<(u64, u64)>,
    total: u64,
}

impl Selection {
    pub fn new(total: u64) -> Self {
        Selection {
            ranges: Vec::new(),
            total,
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn ranges(&self) -> &[(u64, u64)] {
        &self.ranges
    }

    /// Adds the cyclic range of `len` ranks starting at `start`.
    pub fn add(&mut self, start: u64, len: u64) {
        if len == 0 || self.total == 0 {
            return;
        }
        let len = len.min(self.total);
        let start = start % self.total;
        if start + len <= self.total {
            self.insert(start, start + len);
        } else {
            self.insert(start, self.total);
            self.insert(0, start + len - self.total);
        }
    }

    fn insert(&mut self, lo: u64, hi: u64) {
        self.ranges.push((lo, hi));
        self.ranges.sort_unstable();
        let mut merged: Vec<(u64, u64)> = Vec::with_capacity(self.ranges.len());
        for &(l, h) in &self.ranges {
            match merged.last_mut() {
                Some(last) if l <= last.1 => last.1 = last.1.max(h),
                _ => merged.push((l, h)),
            }
        }
        self.ranges = merged;
    }

    /// Ranks of the support candidates that `q` contains.
    pub fn of_question(state: &GameState, q: &Question) -> Selection {
        let mut sel = Selection::new(state.support_size());
        let mut rank = 0;
        for r in state.support_runs() {
            for iv in q.intervals() {
                let (lo, hi) = (iv.lo.max(r.lo), iv.hi.min(r.hi));
                if lo <= hi {
                    sel.insert(rank + (lo - r.lo), rank + (hi - r.lo) + 1);
                }
            }
            rank += r.len();
        }
        sel
    }

    /// Selected length inside the rank range `[lo, hi)`.
    pub fn overlap_len(&self, lo: u64, hi: u64) -> u64 {
        self.overlap(lo, hi)
    }

    pub fn contains(&self, rank: u64) -> bool {
        let idx = self.ranges.partition_point(|r| r.1 <= rank);
        self.ranges.get(idx).is_some_and(|r| r.0 <= rank)
    }

    pub fn size(&self) -> u64 {
        self.ranges.iter().map(|r| r.1 - r.0).sum()
    }

    /// Number of maximal cyclic runs of selected ranks.
    pub fn circular_runs(&self) -> usize {
        let n = self.ranges.len();
        if n > 1 && self.ranges[0].0 == 0 && self.ranges[n - 1].1 == self.total {
            n - 1
        } else {
            n
        }
    }

    /// Whether some run crosses from the last rank to rank 0.
    pub fn wraps(&self) -> bool {
        let n = self.ranges.len();
        n > 0 && self.ranges[0].0 == 0 && self.ranges[n - 1].1 == self.total && self.size() < self.total
    }

    pub fn complement(&self) -> Selection {
        let mut out = Selection::new(self.total);
        let mut cur = 0;
        for &(l, h) in &self.ranges {
            if l > cur {
                out.ranges.push((cur, l));
            }
            cur = h;
        }
        if cur < self.total {
            out.ranges.push((cur, self.total));
        }
        out
    }

    /// Selected count per level.
    pub fn count_type(&self, necklace: &Necklace) -> QuestionType {
        let mut a = [0u64; 4];
        for arc in &necklace.arcs {
            for (lo, hi) in arc_ranges(arc, necklace.total) {
                a[arc.level as usize] += self.overlap(lo, hi);
            }
        }
        QuestionType(a)
    }

    fn overlap(&self, lo: u64, hi: u64) -> u64 {
        self.ranges
            .iter()
            .map(|&(l, h)| h.min(hi).saturating_sub(l.max(lo)))
            .sum()
    }

    /// Cyclic `(level, len)` sequence of the child necklace, eliminated pieces removed.
    pub fn child_pairs(&self, necklace: &Necklace, answer: Answer) -> Vec<(u8, u64)> {
        self.child_pairs_on(necklace, answer, false)
    }

    /// Child drawn on the parent's support: with `keep_eliminated`, newly eliminated
    /// pieces stay in place at the eliminated level.
    pub fn child_pairs_on(&self, necklace: &Necklace, answer: Answer, keep_eliminated: bool) -> Vec<(u8, u64)> {
        let mut out: Vec<(u8, u64)> = Vec::new();
        let mut push = |level: u8, len: u64| {
            if len == 0 || (level >= ELIMINATED && !keep_eliminated) {
                return;
            }
            match out.last_mut() {
                Some(last) if last.0 == level => last.1 += len,
                _ => out.push((level, len)),
            }
        };
        for arc in &necklace.arcs {
            for (lo, hi) in arc_ranges(arc, necklace.total) {
                let mut cur = lo;
                for &(l, h) in &self.ranges {
                    if h <= cur || l >= hi {
                        continue;
                    }
                    let (l, h) = (l.max(cur), h.min(hi));
                    push(new_level(arc.level, false, answer), l - cur);
                    push(new_level(arc.level, true, answer), h - l);
                    cur = h;
                }
                push(new_level(arc.level, false, answer), hi - cur);
            }
        }
        if out.len() > 1 && out[0].0 == out[out.len() - 1].0 {
            let first = out.remove(0);
            out.last_mut().unwrap().1 += first.1;
        }
        out
    }
}

pub(crate) fn new_level(level: u8, inside: bool, answer: Answer) -> u8 {
    let falsified = match answer {
        Answer::Yes => !inside,
        Answer::No => inside,
    };
    (level + falsified as u8).min(ELIMINATED)
}

/// Non-wrapping rank ranges `[lo, hi)` covered by an arc, in necklace order.
pub(crate) fn arc_ranges(arc: &NArc, total: u64) -> Vec<(u64, u64)> {
    if arc.start + arc.len <= total {
        vec![(arc.start, arc.start + arc.len)]
    } else {
        vec![(arc.start, total), (0, arc.start + arc.len - total)]
    }
}

/// Maps ranks to labels for one state.
pub struct RankMap {
    /// `(first rank, first label, length)` of each support run.
    segs: Vec<(u64, u64, u64)>,
    total: u64,
    size: u64,
}

impl RankMap {
    pub fn new(state: &GameState) -> Self {
        let mut segs = Vec::new();
        let mut rank = 0;
        for r in state.support_runs() {
            segs.push((rank, r.lo, r.len()));
            rank += r.len();
        }
        RankMap {
            segs,
            total: rank,
            size: state.universe().size(),
        }
    }

    pub fn label(&self, rank: u64) -> u64 {
        let idx = self.segs.partition_point(|s| s.0 + s.2 <= rank);
        let (r0, l0, _) = self.segs[idx];
        l0 + (rank - r0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Line intervals covering exactly the selected candidates, one per rank range.
    /// Consecutive ranges that touch across the wrap are not merged here.
    fn line_intervals(&self, sel: &Selection) -> Vec<Interval> {
        sel.ranges()
            .iter()
            .map(|&(lo, hi)| Interval {
                lo: self.label(lo),
                hi: self.label(hi - 1),
            })
            .collect()
    }

    /// Realizes a selection on the line. When the selection needs more than four
    /// line intervals (a run wraps), the complementary selection is used instead;
    /// the flag reports that case.
    pub fn realize(&self, sel: &Selection) -> Option<(Question, bool)> {
        debug_assert_eq!(sel.total(), self.total);
        let direct = self.line_intervals(sel);
        if direct.len() <= MAX_INTERVALS {
            let q = Question::new(direct).ok()?;
            return Some((q, false));
        }
        let comp = sel.complement();
        let ivs = self.line_intervals(&comp);
        if ivs.len() <= MAX_INTERVALS {
            let q = Question::new(ivs).ok()?;
            return Some((q, true));
        }
        let _ = self.size;
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapping_arc_is_merged() {
        let s = GameState::from_levels(&[1, 0, 0, 1, 4, 2, 2, 1]).unwrap();
        let n = Necklace::of_state(&s);
        assert_eq!(n.total, 7);
        assert_eq!(n.pairs(), vec![(0, 2), (1, 1), (2, 2), (1, 2)]);
        assert_eq!(n.arcs[3].start, 6);
    }

    #[test]
    fn selection_runs_and_complement() {
        let mut s = Selection::new(10);
        s.add(8, 4);
        assert_eq!(s.ranges(), &[(0, 2), (8, 10)]);
        assert_eq!(s.circular_runs(), 1);
        assert!(s.wraps());
        s.add(4, 1);
        assert_eq!(s.circular_runs(), 2);
        let c = s.complement();
        assert_eq!(c.ranges(), &[(2, 4), (5, 8)]);
        assert_eq!(c.size() + s.size(), 10);
    }

    #[test]
    fn child_pairs_merge_and_eliminate() {
        let n = Necklace::from_levels(&[(2, 2), (3, 3)]);
        let mut s = Selection::new(5);
        s.add(2, 3);
        assert_eq!(s.child_pairs(&n, Answer::Yes), vec![(3, 5)]);
        assert_eq!(s.child_pairs(&n, Answer::No), vec![(2, 2)]);
    }

    #[test]
    fn realize_uses_complement_on_wrap() {
        let s = GameState::from_levels(&[0; 8]).unwrap();
        let map = RankMap::new(&s);
        let mut sel = Selection::new(8);
        sel.add(6, 3);
        sel.add(2, 1);
        sel.add(4, 1);
        // runs {6,7,0}, {2}, {4}: four line intervals, realized directly
        let (q, flipped) = map.realize(&sel).unwrap();
        assert!(!flipped);
        assert_eq!(q.len(), 4);
        sel.add(1, 1);
        // now {6,7,0}, {1,2}? no: 0 and 1 touch so {6,7,0,1,2}, {4}
        let (q2, _) = map.realize(&sel).unwrap();
        assert!(q2.len() <= 4);
    }
}
