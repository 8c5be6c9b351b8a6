//! Arc-by-arc constructions on a template embedding.

use super::{complete, line_intervals, planner, realize, Route, Synthesized};
use crate::error::{Error, Result};
use crate::question::MAX_INTERVALS;
use crate::shape::necklace::{Necklace, Selection};
use crate::shape::{embeddings, ArcName, Pattern, Slot};
use crate::state::{GameState, QuestionType, StateType};

/// Embeddings tried per state. Degenerate necklaces embed in many ways; the first few
/// already cover all distinct slot geometries in practice.
const MAX_EMBEDDINGS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Family {
    All,
    Theorem1,
    Type11cd,
    Type102d,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Head,
    Tail,
}

impl End {
    fn other(self) -> End {
        match self {
            End::Head => End::Tail,
            End::Tail => End::Head,
        }
    }
}

struct Frame<'a> {
    pattern: Pattern,
    slots: [Slot; 12],
    neck: &'a Necklace,
}

impl Frame<'_> {
    fn slot(&self, name: ArcName) -> Slot {
        let i = self.pattern.names().iter().position(|&n| n == name).unwrap();
        self.slots[i]
    }

    fn pos(&self, name: ArcName) -> usize {
        self.pattern.names().iter().position(|&n| n == name).unwrap()
    }

    /// End of `from` that faces `to` along the template.
    fn toward(&self, from: ArcName, to: ArcName) -> End {
        if (self.pos(from) + 1) % 12 == self.pos(to) {
            End::Tail
        } else {
            End::Head
        }
    }

    fn neighbours(&self, name: ArcName) -> [ArcName; 2] {
        let p = self.pos(name);
        let names = self.pattern.names();
        [names[(p + 11) % 12], names[(p + 1) % 12]]
    }

    fn take(&self, sel: &mut Selection, name: ArcName, k: u64, end: End) {
        let s = self.slot(name);
        if k == 0 || s.len == 0 {
            return;
        }
        let start = match end {
            End::Head => s.head(k, self.neck.total),
            End::Tail => s.tail(k, self.neck.total),
        };
        sel.add(start, k);
    }

    fn len(&self, name: ArcName) -> u64 {
        self.slot(name).len
    }

    /// Takes slots whole in order; the first one that cannot be taken whole is taken
    /// partially, once per listed end.
    fn fill_seq(&self, base: &Selection, seq: &[(ArcName, Vec<End>)], k: u64) -> Vec<Selection> {
        let mut sel = base.clone();
        let mut left = k;
        for (name, ends) in seq {
            if left == 0 {
                break;
            }
            let len = self.len(*name);
            if left >= len {
                self.take(&mut sel, *name, len, End::Head);
                left -= len;
                continue;
            }
            return ends
                .iter()
                .map(|&e| {
                    let mut s = sel.clone();
                    self.take(&mut s, *name, left, e);
                    s
                })
                .collect();
        }
        if left == 0 {
            vec![sel]
        } else {
            Vec::new()
        }
    }

    fn larger(&self, x: ArcName, y: ArcName) -> [ArcName; 2] {
        // ties go to the second one, which follows its mode in the template
        if self.len(x) > self.len(y) {
            [x, y]
        } else {
            [y, x]
        }
    }

    fn level2_others(&self, skip: &[ArcName]) -> Vec<ArcName> {
        let mut v: Vec<ArcName> = self
            .pattern
            .names()
            .into_iter()
            .filter(|n| n.level() == 2 && !skip.contains(n))
            .collect();
        v.sort_by_key(|&n| std::cmp::Reverse(self.len(n)));
        v
    }

    fn level0(&self, base: &Selection, a: u64) -> Vec<Selection> {
        use ArcName::*;
        let [a1, _] = self.larger(N, O);
        let e = self.toward(S, a1);
        self.fill_seq(base, &[(S, vec![e, e.other()])], a)
    }

    fn level1(&self, base: &Selection, b: u64) -> Vec<Selection> {
        use ArcName::*;
        let [a1, a1b] = self.larger(N, O);
        let [a2, _] = self.larger(B, C);
        let e = self.toward(H, a2);
        let mut out = Vec::new();
        for (x, y) in [(a1, a1b), (a1b, a1)] {
            let seq = [
                (H, vec![e, e.other()]),
                (x, vec![self.toward(x, S)]),
                (y, vec![self.toward(y, S)]),
            ];
            out.extend(self.fill_seq(base, &seq, b));
            if b <= self.len(H) {
                break;
            }
        }
        out
    }

    fn level2(&self, base: &Selection, c: u64) -> Vec<Selection> {
        use ArcName::*;
        let [a3, _] = self.larger(R, P);
        let [a2, a2b] = self.larger(B, C);
        let ea = self.toward(A, a3);
        let mut out = Vec::new();
        for x in [a2, a2b] {
            let rest = self.level2_others(&[A, x]);
            // preferred end of the overflow arc faces the opposite level to A2's far end
            let far = self.neighbours(x).into_iter().find(|&n| n != H).unwrap();
            for first in 0..rest.len().max(1) {
                let mut order = rest.clone();
                if !order.is_empty() {
                    let e = order.remove(first);
                    order.insert(0, e);
                }
                let mut seq = vec![(A, vec![ea, ea.other()]), (x, vec![self.toward(x, H)])];
                for &en in &order {
                    let [p, q] = self.neighbours(en);
                    let pick = if (far.level() == 1) == (p.level() == 3) { p } else { q };
                    let e = self.toward(en, pick);
                    seq.push((en, vec![e, e.other()]));
                }
                out.extend(self.fill_seq(base, &seq, c));
                if c <= self.len(A) + self.len(x) {
                    break;
                }
            }
            if c <= self.len(A) {
                break;
            }
        }
        out
    }

    fn theorem1(&self, t: QuestionType) -> Vec<Selection> {
        let [a, b, c, _] = t.0;
        let mut out = Vec::new();
        let empty = Selection::new(self.neck.total);
        for s0 in self.level0(&empty, a) {
            for s1 in self.level1(&s0, b) {
                out.extend(self.level2(&s1, c));
            }
        }
        out
    }

    fn type11cd(&self, t: QuestionType) -> Vec<Selection> {
        use ArcName::*;
        let [a, b, c, _] = t.0;
        if a != self.len(S) || b != 1 {
            return Vec::new();
        }
        let mut s0 = Selection::new(self.neck.total);
        self.take(&mut s0, S, a, End::Head);
        let mut out = Vec::new();
        let [a3, _] = self.larger(R, P);
        let ea = self.toward(A, a3);
        let mut us = self.level2_others(&[A, B]);
        us.reverse();
        for u in us {
            let lu = self.len(u);
            if lu == 0 || lu > c || c - lu > self.len(A) {
                continue;
            }
            let Some(v) = self.neighbours(u).into_iter().find(|n| n.level() == 1) else {
                continue;
            };
            if self.len(v) == 0 {
                continue;
            }
            let mut s = s0.clone();
            self.take(&mut s, u, lu, End::Head);
            self.take(&mut s, v, 1, self.toward(v, u));
            for e in [ea, ea.other()] {
                let mut s2 = s.clone();
                self.take(&mut s2, A, c - lu, e);
                out.push(s2);
            }
        }
        for s1 in self.level1(&s0, 1) {
            out.extend(self.level2(&s1, c));
        }
        out
    }

    fn type102d(&self, t: QuestionType) -> Vec<Selection> {
        use ArcName::*;
        let [a, b, c, _] = t.0;
        if a != self.len(S) || b != 0 || c != 2 {
            return Vec::new();
        }
        let mut s0 = Selection::new(self.neck.total);
        self.take(&mut s0, S, a, End::Head);
        let mut out = Vec::new();
        let level3_end = |x: ArcName| {
            let [p, q] = self.neighbours(x);
            let n = if p.level() == 3 { p } else { q };
            self.toward(x, n)
        };
        let twos = self.level2_others(&[]);
        for &e in &twos {
            match self.len(e) {
                0 => {}
                1 => {
                    for &f in &twos {
                        if f != e && self.len(f) > 0 {
                            let mut s = s0.clone();
                            self.take(&mut s, e, 1, End::Head);
                            self.take(&mut s, f, 1, level3_end(f));
                            out.push(s);
                        }
                    }
                }
                _ => {
                    let end = level3_end(e);
                    for en in [end, end.other()] {
                        let mut s = s0.clone();
                        self.take(&mut s, e, 2, en);
                        out.push(s);
                    }
                }
            }
        }
        out
    }
}

/// First valid selection produced by the constructions of `family`. Selections that
/// need the complement to be asked are returned only when nothing direct exists.
pub(crate) fn construct(neck: &Necklace, target: QuestionType, family: Family) -> Option<Selection> {
    let mut fallback = None;
    let mut seen: Vec<Selection> = Vec::new();
    for emb in embeddings(&neck.level_seq()).into_iter().take(MAX_EMBEDDINGS) {
        let f = Frame {
            pattern: emb.orientation.pattern,
            slots: emb.slots(neck),
            neck,
        };
        let mut bases = Vec::new();
        if matches!(family, Family::All | Family::Theorem1) {
            bases.extend(f.theorem1(target));
        }
        if matches!(family, Family::All | Family::Type11cd) {
            bases.extend(f.type11cd(target));
        }
        if matches!(family, Family::All | Family::Type102d) {
            bases.extend(f.type102d(target));
        }
        for b in bases {
            if seen.contains(&b) {
                continue;
            }
            if let Some(s) = complete(neck, &b, target) {
                if line_intervals(&s) <= MAX_INTERVALS {
                    return Some(s);
                }
                fallback.get_or_insert(s);
            }
            seen.push(b);
        }
    }
    fallback
}

fn admit(cond: bool, state: StateType, target: QuestionType, reason: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Admissibility { state, target, reason: reason.into() })
    }
}

fn run(state: &GameState, target: QuestionType, family: Family) -> Result<Synthesized> {
    let stype = state.state_type();
    let neck = Necklace::of_state(state);
    if crate::shape::first_embedding(&neck.level_seq()).is_none() {
        return Err(Error::NotWellShaped);
    }
    if let Some(s) = construct(&neck, target, family) {
        return realize(state, &s, Route::Construction);
    }
    if let Some(s) = planner::plan(&neck, target) {
        return realize(state, &s, Route::Planner);
    }
    Err(Error::SynthesisFailed { state: stype, target })
}

/// Question of type `[a,b,c,d]` with a ≤ t0, b ≤ ⌈t1/2⌉, c ≤ ⌈t2/2⌉, d ≤ ⌈2·t3/3⌉.
pub fn synth_theorem1(state: &GameState, target: QuestionType) -> Result<Synthesized> {
    let s = state.state_type();
    let [a0, b0, c0, d0] = s.0;
    let [a, b, c, d] = target.0;
    admit(
        a <= a0 && b <= b0.div_ceil(2) && c <= c0.div_ceil(2) && d <= (2 * d0).div_ceil(3),
        s,
        target,
        "outside the half-size bounds",
    )?;
    run(state, target, Family::Theorem1)
}

/// States `(0,b0,c0,d0)` with b ≤ ⌈b0/2⌉, c ≤ ⌈c0/2⌉ and any d ≤ d0.
pub fn synth_type_0bcd(state: &GameState, target: QuestionType) -> Result<Synthesized> {
    let s = state.state_type();
    let [a0, b0, c0, d0] = s.0;
    let [a, b, c, d] = target.0;
    admit(a0 == 0 && a == 0, s, target, "state has a level-0 candidate")?;
    admit(
        b <= b0.div_ceil(2) && c <= c0.div_ceil(2) && d <= d0,
        s,
        target,
        "outside the bounds",
    )?;
    run(state, target, Family::Theorem1)
}

/// States `(1,b1,c1,d1)` with b1 ≥ 1 and target `[1,1,c,d]`, ⌊c1/4⌋ ≤ c ≤ ⌈c1/2⌉.
pub fn synth_type_11cd(state: &GameState, target: QuestionType) -> Result<Synthesized> {
    let s = state.state_type();
    let [a0, b0, c0, d0] = s.0;
    let [a, b, c, d] = target.0;
    admit(a0 == 1 && b0 >= 1, s, target, "state is not (1,b,c,d) with b ≥ 1")?;
    admit(a == 1 && b == 1, s, target, "target is not [1,1,c,d]")?;
    admit(c0 / 4 <= c && c <= c0.div_ceil(2) && d <= d0, s, target, "c or d out of range")?;
    run(state, target, Family::Type11cd)
}

/// States `(1,1,c2,d2)` with target `[1,0,2,d]`.
pub fn synth_type_102d(state: &GameState, target: QuestionType) -> Result<Synthesized> {
    let s = state.state_type();
    let [a0, b0, c0, d0] = s.0;
    let [a, b, c, d] = target.0;
    admit(a0 == 1 && b0 == 1 && c0 >= 2, s, target, "state is not (1,1,c,d) with c ≥ 2")?;
    admit(a == 1 && b == 0 && c == 2 && d <= d0, s, target, "target is not [1,0,2,d]")?;
    run(state, target, Family::Type102d)
}

/// States `(1,0,c3,d3)` with target `[1,0,0,d]`.
pub fn synth_type_100d(state: &GameState, target: QuestionType) -> Result<Synthesized> {
    let s = state.state_type();
    let [a0, b0, _, d0] = s.0;
    let [a, b, c, d] = target.0;
    admit(a0 == 1 && b0 == 0, s, target, "state is not (1,0,c,d)")?;
    admit(a == 1 && b == 0 && c == 0 && d <= d0, s, target, "target is not [1,0,0,d]")?;
    run(state, target, Family::Theorem1)
}
