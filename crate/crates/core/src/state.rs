//! Universe, game states, state/question types and the volume calculus.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::question::Question;

/// Number of lies the responder may tell.
pub const LIES: usize = 3;
/// Level assigned to elements that falsify more than [`LIES`] answers.
pub const ELIMINATED: u8 = 4;

const PASCAL_ROWS: usize = 65;

fn pascal() -> &'static Vec<[u128; PASCAL_ROWS]> {
    static TABLE: OnceLock<Vec<[u128; PASCAL_ROWS]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut rows = vec![[0u128; PASCAL_ROWS]; PASCAL_ROWS];
        for n in 0..PASCAL_ROWS {
            rows[n][0] = 1;
            for k in 1..=n {
                rows[n][k] = rows[n - 1][k - 1] + if k < n { rows[n - 1][k] } else { 0 };
            }
        }
        rows
    })
}

/// Binomial coefficient. Cached for `n <= 64`; computed directly above that.
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    if (n as usize) < PASCAL_ROWS {
        return pascal()[n as usize][k as usize];
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn pow2(q: u64) -> u128 {
    if q >= 128 {
        u128::MAX
    } else {
        1u128 << q
    }
}

/// Per-level element counts `(t0, t1, t2, t3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StateType(pub [u64; 4]);

/// Per-level question intersection counts `[a0, a1, a2, a3]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QuestionType(pub [u64; 4]);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn flip(self) -> Answer {
        match self {
            Answer::Yes => Answer::No,
            Answer::No => Answer::Yes,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Answer::Yes => 'y',
            Answer::No => 'n',
        }
    }
}

impl StateType {
    pub const fn new(t0: u64, t1: u64, t2: u64, t3: u64) -> Self {
        StateType([t0, t1, t2, t3])
    }

    pub fn support(&self) -> u64 {
        self.0.iter().sum()
    }

    /// The `q`-th volume: `sum_j t_j * sum_{l <= 3-j} C(q, l)`.
    pub fn volume(&self, q: u64) -> u128 {
        volume(*self, q)
    }

    pub fn character(&self) -> u64 {
        character(*self)
    }

    /// Componentwise domination `self <= other`.
    pub fn dominated_by(&self, other: &StateType) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }
}

impl QuestionType {
    pub const fn new(a0: u64, a1: u64, a2: u64, a3: u64) -> Self {
        QuestionType([a0, a1, a2, a3])
    }

    /// Type of the complementary question within a state of type `stype`.
    pub fn complement(&self, stype: StateType) -> QuestionType {
        QuestionType(std::array::from_fn(|i| stype.0[i] - self.0[i]))
    }

    pub fn fits(&self, stype: StateType) -> bool {
        self.0.iter().zip(stype.0.iter()).all(|(a, t)| a <= t)
    }
}

impl fmt::Display for StateType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

impl fmt::Display for QuestionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "[{a},{b},{c},{d}]")
    }
}

fn parse_quad(s: &str, open: char, close: char) -> Result<[u64; 4]> {
    let inner = s
        .trim()
        .strip_prefix(open)
        .and_then(|r| r.strip_suffix(close))
        .ok_or_else(|| Error::Parse(format!("expected {open}a,b,c,d{close}, got {s:?}")))?;
    let parts: Vec<u64> = inner
        .split(',')
        .map(|p| p.trim().parse::<u64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    parts
        .try_into()
        .map_err(|_| Error::Parse(format!("{s:?}: need four components")))
}

impl FromStr for StateType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_quad(s, '(', ')').map(StateType)
    }
}

impl FromStr for QuestionType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_quad(s, '[', ']').map(QuestionType)
    }
}

/// Weight of a single element at `level` in the `q`-th volume.
pub fn level_weight(level: usize, q: u64) -> u128 {
    (0..=(LIES - level) as u64).map(|l| binom(q, l)).sum()
}

pub fn volume(stype: StateType, q: u64) -> u128 {
    stype
        .0
        .iter()
        .enumerate()
        .map(|(j, &t)| t as u128 * level_weight(j, q))
        .sum()
}

/// Smallest `q` with `volume(stype, q) <= 2^q`.
pub fn character(stype: StateType) -> u64 {
    let mut q = 0;
    while volume(stype, q) > pow2(q) {
        q += 1;
    }
    q
}

/// Information-theoretic lower bound on the number of questions for `2^m` candidates.
pub fn n_min(m: u32) -> u64 {
    let mut q: u64 = 0;
    loop {
        let rhs: u128 = (0..=LIES as u64).map(|i| binom(q, i)).sum();
        if q >= m as u64 && pow2(q - m as u64) >= rhs {
            return q;
        }
        q += 1;
    }
}

/// Type of the child state obtained by answering a question of type `qtype`.
pub fn apply_answer_type(stype: StateType, qtype: QuestionType, answer: Answer) -> Result<StateType> {
    if !qtype.fits(stype) {
        return Err(Error::Precondition(format!(
            "question type {qtype} exceeds state type {stype}"
        )));
    }
    let sat = match answer {
        Answer::Yes => qtype.0,
        Answer::No => qtype.complement(stype).0,
    };
    let t = stype.0;
    Ok(StateType([
        sat[0],
        sat[1] + (t[0] - sat[0]),
        sat[2] + (t[1] - sat[1]),
        sat[3] + (t[2] - sat[2]),
    ]))
}

/// Both children types, yes first.
pub fn children_types(stype: StateType, qtype: QuestionType) -> Result<(StateType, StateType)> {
    Ok((
        apply_answer_type(stype, qtype, Answer::Yes)?,
        apply_answer_type(stype, qtype, Answer::No)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Universe {
    pub m: u32,
}

impl Universe {
    pub fn new(m: u32) -> Self {
        assert!(m < 64, "universe bit-width must be below 64");
        Universe { m }
    }

    pub fn size(&self) -> u64 {
        1u64 << self.m
    }
}

/// Maximal run of consecutive labels sharing a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Run {
    pub lo: u64,
    pub hi: u64,
    pub level: u8,
}

impl Run {
    pub fn len(&self) -> u64 {
        self.hi - self.lo + 1
    }
}

/// A game state: the level of every label, stored as maximal runs over the line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameState {
    universe: Universe,
    runs: Vec<Run>,
}

impl GameState {
    pub fn initial(m: u32) -> Self {
        let universe = Universe::new(m);
        GameState {
            universe,
            runs: vec![Run {
                lo: 0,
                hi: universe.size() - 1,
                level: 0,
            }],
        }
    }

    /// Builds a state from an explicit level per label; the length must be a power of two.
    pub fn from_levels(levels: &[u8]) -> Result<Self> {
        let n = levels.len();
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::Precondition(format!("{n} labels is not a power of two")));
        }
        if let Some(bad) = levels.iter().find(|&&l| l > ELIMINATED) {
            return Err(Error::Precondition(format!("level {bad} out of range")));
        }
        let m = n.trailing_zeros();
        let runs = levels
            .iter()
            .enumerate()
            .map(|(i, &level)| Run {
                lo: i as u64,
                hi: i as u64,
                level,
            })
            .collect();
        Ok(GameState::from_runs(Universe::new(m), runs))
    }

    /// Normalizes (merges) the given runs, which must tile the universe in order.
    pub fn from_runs(universe: Universe, runs: Vec<Run>) -> Self {
        let mut merged: Vec<Run> = Vec::with_capacity(runs.len());
        for r in runs {
            match merged.last_mut() {
                Some(last) if last.level == r.level && last.hi + 1 == r.lo => last.hi = r.hi,
                _ => merged.push(r),
            }
        }
        debug_assert!(merged.first().is_some_and(|r| r.lo == 0));
        debug_assert!(merged.last().is_some_and(|r| r.hi == universe.size() - 1));
        GameState {
            universe,
            runs: merged,
        }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn m(&self) -> u32 {
        self.universe.m
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    /// Runs of candidate labels (level below [`ELIMINATED`]).
    pub fn support_runs(&self) -> impl Iterator<Item = &Run> + '_ {
        self.runs.iter().filter(|r| r.level < ELIMINATED)
    }

    pub fn level_of(&self, x: u64) -> u8 {
        let idx = self.runs.partition_point(|r| r.hi < x);
        self.runs[idx].level
    }

    /// Explicit level vector. Only sensible for small universes.
    pub fn levels(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.universe.size() as usize);
        for r in &self.runs {
            out.extend(std::iter::repeat_n(r.level, r.len() as usize));
        }
        out
    }

    pub fn state_type(&self) -> StateType {
        let mut t = [0u64; 4];
        for r in self.support_runs() {
            t[r.level as usize] += r.len();
        }
        StateType(t)
    }

    pub fn support_size(&self) -> u64 {
        self.support_runs().map(Run::len).sum()
    }

    pub fn is_final(&self) -> bool {
        self.support_size() <= 1
    }

    pub fn character(&self) -> u64 {
        character(self.state_type())
    }

    /// Child state after `answer` to `question`.
    pub fn apply_answer(&self, question: &Question, answer: Answer) -> Result<GameState> {
        question.check_universe(self.universe)?;
        let ivs = question.intervals();
        let mut out = Vec::with_capacity(self.runs.len() + 2 * ivs.len());
        let bump = |inside: bool, level: u8| -> u8 {
            if level >= ELIMINATED {
                return ELIMINATED;
            }
            let falsified = match answer {
                Answer::Yes => !inside,
                Answer::No => inside,
            };
            (level + falsified as u8).min(ELIMINATED)
        };
        let mut k = 0;
        for r in &self.runs {
            let mut cur = r.lo;
            while cur <= r.hi {
                while k < ivs.len() && ivs[k].hi < cur {
                    k += 1;
                }
                let (inside, end) = match ivs.get(k) {
                    Some(iv) if iv.lo <= cur => (true, iv.hi.min(r.hi)),
                    Some(iv) => (false, (iv.lo - 1).min(r.hi)),
                    None => (false, r.hi),
                };
                out.push(Run {
                    lo: cur,
                    hi: end,
                    level: bump(inside, r.level),
                });
                if end == u64::MAX {
                    break;
                }
                cur = end + 1;
            }
        }
        Ok(GameState::from_runs(self.universe, out))
    }
}
