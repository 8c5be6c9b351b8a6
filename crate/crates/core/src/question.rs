//! Intervals, 4-interval questions and their types.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::state::{apply_answer_type, character, volume, Answer, GameState, QuestionType, Universe};

/// Maximum number of intervals in a question.
pub const MAX_INTERVALS: usize = 4;

/// Closed, non-empty interval `[lo, hi]` of labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: u64,
    pub hi: u64,
}

impl Interval {
    pub fn new(lo: u64, hi: u64) -> Option<Interval> {
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn len(&self) -> u64 {
        self.hi - self.lo + 1
    }

    pub fn contains(&self, x: u64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// A union of at most four intervals, kept sorted with touching intervals merged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Question {
    intervals: Vec<Interval>,
}

impl Question {
    pub fn empty() -> Self {
        Question::default()
    }

    /// Normalizes and validates; fails when more than four intervals remain.
    pub fn new(intervals: impl IntoIterator<Item = Interval>) -> Result<Self> {
        let q = Question::normalized(intervals);
        if q.intervals.len() > MAX_INTERVALS {
            return Err(Error::TooManyIntervals(q.intervals.len()));
        }
        Ok(q)
    }

    /// Pairs `(lo, hi)`; pairs with `lo > hi` denote the empty interval and are dropped.
    pub fn from_pairs(pairs: &[(u64, u64)]) -> Result<Self> {
        Question::new(pairs.iter().filter_map(|&(lo, hi)| Interval::new(lo, hi)))
    }

    fn normalized(intervals: impl IntoIterator<Item = Interval>) -> Self {
        let mut ivs: Vec<Interval> = intervals.into_iter().collect();
        ivs.sort();
        let mut out: Vec<Interval> = Vec::with_capacity(ivs.len());
        for iv in ivs {
            match out.last_mut() {
                Some(last) if iv.lo <= last.hi.saturating_add(1) => last.hi = last.hi.max(iv.hi),
                _ => out.push(iv),
            }
        }
        Question { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        let idx = self.intervals.partition_point(|iv| iv.hi < x);
        self.intervals.get(idx).is_some_and(|iv| iv.contains(x))
    }

    pub fn check_universe(&self, universe: Universe) -> Result<()> {
        match self.intervals.last() {
            Some(iv) if iv.hi >= universe.size() => Err(Error::OutOfRange {
                lo: iv.lo,
                hi: iv.hi,
                size: universe.size(),
            }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "-");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}-{}", iv.lo, iv.hi)?;
        }
        Ok(())
    }
}

impl FromStr for Question {
    type Err = Error;

    /// Parses the literal form `"0-3,9-9,14-20"`; `"-"` or `""` is the empty question.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Question::empty());
        }
        let mut ivs = Vec::new();
        for part in s.split(',') {
            let (lo, hi) = part
                .trim()
                .split_once('-')
                .ok_or_else(|| Error::Parse(format!("interval {part:?} is not lo-hi")))?;
            let lo: u64 = lo.trim().parse().map_err(|e| Error::Parse(format!("{part:?}: {e}")))?;
            let hi: u64 = hi.trim().parse().map_err(|e| Error::Parse(format!("{part:?}: {e}")))?;
            ivs.push(Interval::new(lo, hi).ok_or_else(|| Error::Parse(format!("{part:?}: lo > hi")))?);
        }
        Question::new(ivs)
    }
}

/// Number of candidates per level covered by `q`.
pub fn question_type(state: &GameState, q: &Question) -> QuestionType {
    let mut a = [0u64; 4];
    let ivs = q.intervals();
    let mut k = 0;
    for r in state.support_runs() {
        while k < ivs.len() && ivs[k].hi < r.lo {
            k += 1;
        }
        let mut j = k;
        while j < ivs.len() && ivs[j].lo <= r.hi {
            let lo = ivs[j].lo.max(r.lo);
            let hi = ivs[j].hi.min(r.hi);
            a[r.level as usize] += hi - lo + 1;
            j += 1;
        }
    }
    QuestionType(a)
}

/// Whether the children's volumes at `character - 1` differ by at most one.
pub fn is_balanced(state: &GameState, q: &Question) -> Result<bool> {
    is_balanced_type(state.state_type(), question_type(state, q))
}

pub fn is_balanced_type(stype: crate::state::StateType, qtype: QuestionType) -> Result<bool> {
    let ch = character(stype);
    if ch == 0 {
        return Err(Error::StateFinal);
    }
    let yes = apply_answer_type(stype, qtype, Answer::Yes)?;
    let no = apply_answer_type(stype, qtype, Answer::No)?;
    let (wy, wn) = (volume(yes, ch - 1), volume(no, ch - 1));
    Ok(wy.abs_diff(wn) <= 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::StateType;

    #[test]
    fn normalization_merges_and_drops_empty() {
        let q = Question::from_pairs(&[(5, 7), (0, 2), (3, 4), (9, 8)]).unwrap();
        assert_eq!(q.intervals(), &[Interval { lo: 0, hi: 7 }]);
        let again = Question::new(q.intervals().iter().copied()).unwrap();
        assert_eq!(again, q);
    }

    #[test]
    fn five_disjoint_intervals_rejected() {
        let err = Question::from_pairs(&[(0, 0), (2, 2), (4, 4), (6, 6), (8, 8)]).unwrap_err();
        assert_eq!(err, Error::TooManyIntervals(5));
    }

    #[test]
    fn literal_round_trip() {
        let q: Question = "0-3,9-9,14-20".parse().unwrap();
        assert_eq!(q.to_string(), "0-3,9-9,14-20");
        assert!("3-1".parse::<Question>().is_err());
        assert!("".parse::<Question>().unwrap().is_empty());
    }

    #[test]
    fn question_type_examples() {
        let s = GameState::initial(3);
        assert_eq!(question_type(&s, &Question::empty()), QuestionType::default());
        let q = Question::from_pairs(&[(0, 3)]).unwrap();
        assert_eq!(question_type(&s, &q), QuestionType::new(4, 0, 0, 0));
    }

    #[test]
    fn balance_examples() {
        let s = GameState::from_levels(&[3, 3, 4, 4]).unwrap();
        let q = Question::from_pairs(&[(0, 0)]).unwrap();
        assert!(is_balanced(&s, &q).unwrap());
        let s4 = GameState::from_levels(&[3, 3, 3, 3]).unwrap();
        let q3 = Question::from_pairs(&[(0, 2)]).unwrap();
        assert!(!is_balanced(&s4, &q3).unwrap());
        let fin = GameState::from_levels(&[3, 4]).unwrap();
        assert_eq!(is_balanced(&fin, &q), Err(Error::StateFinal));
        assert!(is_balanced_type(StateType::new(1, 8, 28, 56), QuestionType::new(1, 4, 10, 22)).unwrap());
    }
}
