//! Playing a smaller state inside a larger scripted one.
//!
//! The real state is copied into a bigger universe and padded with phantom candidates
//! until its type matches a scripted type of the same character. Questions chosen for
//! the padded state are pulled back along the monotone label map.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::question::{Interval, Question};
use crate::state::{binom, character, GameState, Run, StateType, Universe, ELIMINATED};

/// Monotone injection of real labels into shadow labels, stored as shifted segments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelMap {
    /// `(real lo, real hi, shadow lo)`, increasing.
    segs: Vec<(u64, u64, u64)>,
}

impl LabelMap {
    pub fn image(&self, x: u64) -> u64 {
        let i = self.segs.partition_point(|s| s.1 < x);
        let (lo, _, slo) = self.segs[i];
        slo + (x - lo)
    }

    /// Real labels whose image lies in `[a, b]`; an interval because the map is monotone.
    fn preimage(&self, a: u64, b: u64) -> Option<(u64, u64)> {
        let mut out: Option<(u64, u64)> = None;
        for &(lo, hi, slo) in &self.segs {
            let shi = slo + (hi - lo);
            if shi < a || slo > b {
                continue;
            }
            let x0 = lo + a.saturating_sub(slo);
            let x1 = hi - shi.saturating_sub(b);
            out = Some(match out {
                None => (x0, x1),
                Some((p, _)) => (p, x1),
            });
        }
        out
    }

    /// Restriction of a shadow question to the real universe.
    pub fn pull_back(&self, q: &Question) -> Result<Question> {
        let mut ivs: Vec<Interval> = Vec::new();
        for iv in q.intervals() {
            if let Some((lo, hi)) = self.preimage(iv.lo, iv.hi) {
                match ivs.last_mut() {
                    Some(last) if last.hi + 1 >= lo => last.hi = last.hi.max(hi),
                    _ => ivs.push(Interval { lo, hi }),
                }
            }
        }
        Question::new(ivs)
    }
}

/// A padded copy of the real state and the map into it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Shadow {
    pub state: GameState,
    pub map: Arc<LabelMap>,
}

/// `(1, m, C(m,2), C(m,3))`.
pub fn post_halving_type(m: u64) -> StateType {
    StateType([1, m, binom(m, 2) as u64, binom(m, 3) as u64])
}

/// Detects a post-halving type and returns its `m`.
pub fn post_halving_m(t: StateType) -> Option<u64> {
    let m = t.0[1];
    (t == post_halving_type(m)).then_some(m)
}

/// Smallest scripted `m'` ≥ `m` whose post-halving state has the same character.
pub fn covering_m(m: u64, scripted: &[u64]) -> Option<u64> {
    let ch = character(post_halving_type(m));
    scripted
        .iter()
        .copied()
        .filter(|&k| k >= m)
        .min()
        .filter(|&k| character(post_halving_type(k)) == ch)
}

/// Pads a post-halving state of parameter `m` up to parameter `target`. Phantoms of
/// level ℓ go right after the first run of level ℓ, so arcs only grow.
pub fn embed(real: &GameState, target: u64) -> Result<Shadow> {
    let t = real.state_type();
    let m = post_halving_m(t).ok_or_else(|| Error::Precondition(format!("{t} is not a post-halving type")))?;
    if target < m {
        return Err(Error::Precondition(format!("cannot embed m = {m} into m = {target}")));
    }
    let mut extra = [0u64; 4];
    for (l, e) in extra.iter_mut().enumerate().skip(1) {
        *e = (binom(target, l as u64) - binom(m, l as u64)) as u64;
    }
    let real_size = real.universe().size();
    let padded = real_size + extra.iter().sum::<u64>();
    let bits = 64 - (padded - 1).leading_zeros();
    let universe = Universe::new(bits.max(real.m()));
    let mut runs = Vec::new();
    let mut segs = Vec::new();
    let mut shift = 0u64;
    let mut placed = [false; 4];
    for r in real.runs() {
        segs.push((r.lo, r.hi, r.lo + shift));
        runs.push(Run { lo: r.lo + shift, hi: r.hi + shift, level: r.level });
        let l = r.level as usize;
        if l < 4 && !placed[l] && extra[l] > 0 {
            placed[l] = true;
            let lo = r.hi + shift + 1;
            runs.push(Run { lo, hi: lo + extra[l] - 1, level: r.level });
            shift += extra[l];
        }
    }
    if (1..4).any(|l| extra[l] > 0 && !placed[l]) {
        return Err(Error::Internal(format!("{t} lacks a level to pad")));
    }
    let end = real_size + shift;
    if end < universe.size() {
        runs.push(Run { lo: end, hi: universe.size() - 1, level: ELIMINATED });
    }
    let state = GameState::from_runs(universe, runs);
    debug_assert_eq!(state.state_type(), post_halving_type(target));
    Ok(Shadow { state, map: Arc::new(LabelMap { segs }) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Answer;

    fn post_halving(m: u32) -> GameState {
        // one full-size halving sequence with the lowest labels always in the question
        let mut s = GameState::initial(m);
        for _ in 0..m {
            let stype = s.state_type();
            let target = crate::state::QuestionType(stype.0.map(|x| x / 2));
            let q = crate::synthesis::synth_theorem1(&s, target).unwrap().question;
            s = s.apply_answer(&q, Answer::Yes).unwrap();
        }
        s
    }

    #[test]
    fn covering_values() {
        let set = [1, 4, 8, 12, 17, 23, 32];
        for m in 6..=32u64 {
            let c = covering_m(m, &set).unwrap_or_else(|| panic!("no cover for {m}"));
            assert!(c >= m);
        }
        assert_eq!(covering_m(6, &set), Some(8));
        assert_eq!(covering_m(13, &set), Some(17));
        assert_eq!(covering_m(5, &set), None);
    }

    #[test]
    fn embedding_pads_to_the_script() {
        let real = post_halving(6);
        assert_eq!(real.state_type(), post_halving_type(6));
        let sh = embed(&real, 8).unwrap();
        assert_eq!(sh.state.state_type(), post_halving_type(8));
        assert!(crate::shape::is_well_shaped(&sh.state));
        // every real label keeps its level
        for x in 0..real.universe().size() {
            assert_eq!(real.level_of(x), sh.state.level_of(sh.map.image(x)));
        }
    }

    #[test]
    fn pull_back_tracks_the_real_game() {
        let real = post_halving(7);
        let sh = embed(&real, 8).unwrap();
        let q = Question::from_pairs(&[(3, 40), (90, 100), (150, 200)]).unwrap();
        let rq = sh.map.pull_back(&q).unwrap();
        for a in [Answer::Yes, Answer::No] {
            let r = real.apply_answer(&rq, a).unwrap();
            let s = sh.state.apply_answer(&q, a).unwrap();
            for x in 0..real.universe().size() {
                assert_eq!(r.level_of(x), s.level_of(sh.map.image(x)));
            }
        }
    }
}
