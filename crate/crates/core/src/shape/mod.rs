//! Arc lists, the two twelve-arc templates and well-shapedness.

pub mod delta;
pub mod necklace;

use std::fmt;

use crate::state::GameState;
use necklace::{Necklace, RankMap};

pub use delta::{
    classify, delta, lemma_conditions_hold, predicted_counts, preserves_well_shape, SplitKind,
};

/// Named arcs of a well-shaped state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcName {
    L,
    N,
    S,
    O,
    M,
    Q,
    B,
    H,
    C,
    R,
    A,
    P,
}

impl ArcName {
    pub fn level(self) -> u8 {
        use ArcName::*;
        match self {
            S => 0,
            N | O | H => 1,
            L | M | B | C | A => 2,
            Q | R | P => 3,
        }
    }
}

impl fmt::Display for ArcName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pattern {
    Sigma1,
    Sigma2,
}

impl Pattern {
    pub const ALL: [Pattern; 2] = [Pattern::Sigma1, Pattern::Sigma2];

    pub fn names(self) -> [ArcName; 12] {
        use ArcName::*;
        match self {
            Pattern::Sigma1 => [L, N, S, O, M, Q, B, H, C, R, A, P],
            Pattern::Sigma2 => [L, N, S, O, B, H, C, Q, M, R, A, P],
        }
    }

    pub fn levels(self) -> [u8; 12] {
        self.names().map(ArcName::level)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapePattern {
    Sigma1,
    Sigma2,
    NotWellShaped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArcRole {
    Mode,
    Saddle,
    /// Lower neighbor before, higher neighbor after.
    StepUp,
    StepDown,
}

impl ArcRole {
    pub fn of(prev: u8, level: u8, next: u8) -> ArcRole {
        match (prev > level, next > level) {
            (true, true) => ArcRole::Mode,
            (false, false) => ArcRole::Saddle,
            (false, true) => ArcRole::StepUp,
            (true, false) => ArcRole::StepDown,
        }
    }

    pub fn is_step(self) -> bool {
        matches!(self, ArcRole::StepUp | ArcRole::StepDown)
    }
}

/// A template orientation: `reversed` means the template order runs against rank order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Orientation {
    pub pattern: Pattern,
    pub reversed: bool,
}

impl Orientation {
    pub const ALL: [Orientation; 4] = [
        Orientation { pattern: Pattern::Sigma1, reversed: false },
        Orientation { pattern: Pattern::Sigma2, reversed: false },
        Orientation { pattern: Pattern::Sigma1, reversed: true },
        Orientation { pattern: Pattern::Sigma2, reversed: true },
    ];

    /// Template levels listed in rank order.
    fn rank_levels(self) -> [u8; 12] {
        let mut l = self.pattern.levels();
        if self.reversed {
            l.reverse();
        }
        l
    }

    /// Template index (in name order) of the `j`-th slot in rank order.
    fn name_index(self, j: usize) -> usize {
        if self.reversed {
            11 - j
        } else {
            j
        }
    }
}

/// Placement of the necklace arcs into the slots of one oriented template.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Embedding {
    pub orientation: Orientation,
    /// Template index in name order for each necklace arc.
    pub slot_of_arc: Vec<usize>,
}

/// One template slot resolved against a necklace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub name: ArcName,
    pub arc: Option<usize>,
    pub start: u64,
    pub len: u64,
    /// Template order runs against rank order.
    pub reversed: bool,
}

impl Slot {
    pub fn level(&self) -> u8 {
        self.name.level()
    }

    /// Rank start of the first `k` elements in template order.
    pub fn head(&self, k: u64, total: u64) -> u64 {
        debug_assert!(k <= self.len);
        if self.reversed {
            (self.start + self.len - k) % total.max(1)
        } else {
            self.start
        }
    }

    /// Rank start of the last `k` elements in template order.
    pub fn tail(&self, k: u64, total: u64) -> u64 {
        debug_assert!(k <= self.len);
        if self.reversed {
            self.start
        } else {
            (self.start + self.len - k) % total.max(1)
        }
    }
}

impl Embedding {
    pub fn slots(&self, necklace: &Necklace) -> [Slot; 12] {
        let names = self.orientation.pattern.names();
        let mut slots = names.map(|name| Slot {
            name,
            arc: None,
            start: 0,
            len: 0,
            reversed: self.orientation.reversed,
        });
        for (i, &j) in self.slot_of_arc.iter().enumerate() {
            let a = necklace.arcs[i];
            slots[j].arc = Some(i);
            slots[j].start = a.start;
            slots[j].len = a.len;
        }
        slots
    }
}

/// Every way of embedding the cyclic level sequence into an oriented template.
pub fn embeddings(levels: &[u8]) -> Vec<Embedding> {
    let mut out = Vec::new();
    for o in Orientation::ALL {
        embed_into(levels, o, &mut out, usize::MAX);
    }
    out
}

pub fn first_embedding(levels: &[u8]) -> Option<Embedding> {
    let mut out = Vec::new();
    for o in Orientation::ALL {
        embed_into(levels, o, &mut out, 1);
        if !out.is_empty() {
            break;
        }
    }
    out.pop()
}

fn embed_into(levels: &[u8], o: Orientation, out: &mut Vec<Embedding>, limit: usize) {
    let r = levels.len();
    if r > 12 {
        return;
    }
    let t = o.rank_levels();
    if r == 0 {
        out.push(Embedding { orientation: o, slot_of_arc: Vec::new() });
        return;
    }
    let mut offs = vec![0usize; r];
    for p in 0..12 {
        if t[p] != levels[0] {
            continue;
        }
        search(levels, &t, p, 1, 0, &mut offs, o, out, limit);
        if out.len() >= limit {
            return;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    levels: &[u8],
    t: &[u8; 12],
    p: usize,
    i: usize,
    last: usize,
    offs: &mut Vec<usize>,
    o: Orientation,
    out: &mut Vec<Embedding>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    let r = levels.len();
    if i == r {
        let slot_of_arc = offs.iter().map(|&d| o.name_index((p + d) % 12)).collect();
        out.push(Embedding { orientation: o, slot_of_arc });
        return;
    }
    // leave room for the arcs still to place
    for d in last + 1..=12 - (r - i) {
        if t[(p + d) % 12] == levels[i] {
            offs[i] = d;
            search(levels, t, p, i + 1, d, offs, o, out, limit);
        }
    }
}

/// Entry of an arc list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcEntry {
    pub name: Option<ArcName>,
    pub level: u8,
    pub len: u64,
    /// Rank of the first element in rank order (meaningful when `len > 0`).
    pub start: u64,
    /// First and last label in rank order; `lo > hi` when the arc wraps.
    pub labels: Option<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcList {
    pub entries: Vec<ArcEntry>,
    pub pattern: ShapePattern,
    pub orientation: Option<Orientation>,
}

impl ArcList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn level_counts(&self) -> [usize; 4] {
        let mut c = [0; 4];
        for e in &self.entries {
            c[e.level as usize] += 1;
        }
        c
    }

    /// One line per arc: `name level [lo..hi] role`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, e) in self.entries.iter().enumerate() {
            let name = e.name.map_or("-".to_string(), |n| n.to_string());
            let range = match e.labels {
                Some((lo, hi)) => format!("[{lo}..{hi}]"),
                None => "[]".to_string(),
            };
            s.push_str(&format!("{name} {} {range} {:?}\n", e.level, arc_role(self, i)));
        }
        s
    }
}

pub fn arc_role(arcs: &ArcList, idx: usize) -> ArcRole {
    let n = arcs.entries.len();
    let level = arcs.entries[idx].level;
    if n == 1 {
        return ArcRole::Mode;
    }
    let prev = arcs.entries[(idx + n - 1) % n].level;
    let next = arcs.entries[(idx + 1) % n].level;
    ArcRole::of(prev, level, next)
}

/// Minimal cyclic list of `(level, len, start)` with empty fill arcs between levels
/// that differ by more than one, rotated to start at the necklace's canonical rotation.
pub fn minimal_list(necklace: &Necklace) -> Vec<(u8, u64, u64)> {
    let n = necklace.arcs.len();
    let r0 = necklace.min_rotation();
    let mut out = Vec::new();
    for k in 0..n {
        let a = necklace.arcs[(r0 + k) % n];
        out.push((a.level, a.len, a.start));
        if n > 1 {
            let b = necklace.arcs[(r0 + k + 1) % n];
            let end = (a.start + a.len) % necklace.total.max(1);
            push_fills(&mut out, a.level, b.level, end);
        }
    }
    out
}

fn push_fills(out: &mut Vec<(u8, u64, u64)>, from: u8, to: u8, at: u64) {
    if from < to {
        for l in from + 1..to {
            out.push((l, 0, at));
        }
    } else {
        for l in (to + 1..from).rev() {
            out.push((l, 0, at));
        }
    }
}

/// Arc counts per level 0..3 of the minimal list of a cyclic level sequence.
/// Entries at the eliminated level take part in the path but are not counted.
pub fn minimal_counts(levels: &[u8]) -> [u64; 4] {
    let mut c = [0u64; 5];
    let n = levels.len();
    for k in 0..n {
        let (a, b) = (levels[k], levels[(k + 1) % n]);
        c[a as usize] += 1;
        if n > 1 {
            for l in a.min(b) + 1..a.max(b) {
                c[l as usize] += 1;
            }
        }
    }
    [c[0], c[1], c[2], c[3]]
}

/// Well-shaped: the necklace embeds into one of the twelve-arc templates, empty arcs allowed.
pub fn is_well_shaped(state: &GameState) -> bool {
    let n = Necklace::of_state(state);
    first_embedding(&n.level_seq()).is_some()
}

/// All twelve arcs non-empty, i.e. the minimal list itself has level counts (1,3,5,3).
pub fn is_strictly_well_shaped(state: &GameState) -> bool {
    let n = Necklace::of_state(state);
    minimal_counts(&n.level_seq()) == [1, 3, 5, 3]
}

pub fn shape_pattern(state: &GameState) -> ShapePattern {
    let n = Necklace::of_state(state);
    match first_embedding(&n.level_seq()) {
        Some(e) => match e.orientation.pattern {
            Pattern::Sigma1 => ShapePattern::Sigma1,
            Pattern::Sigma2 => ShapePattern::Sigma2,
        },
        None => ShapePattern::NotWellShaped,
    }
}

/// Template-padded twelve-arc list for well-shaped states, otherwise the minimal list.
pub fn canonical_arcs(state: &GameState) -> ArcList {
    let necklace = Necklace::of_state(state);
    let map = RankMap::new(state);
    let labels = |start: u64, len: u64| {
        (len > 0).then(|| (map.label(start), map.label((start + len - 1) % map.total())))
    };
    if let Some(e) = first_embedding(&necklace.level_seq()) {
        let entries = e
            .slots(&necklace)
            .iter()
            .map(|s| ArcEntry {
                name: Some(s.name),
                level: s.level(),
                len: s.len,
                start: s.start,
                labels: labels(s.start, s.len),
            })
            .collect();
        let pattern = match e.orientation.pattern {
            Pattern::Sigma1 => ShapePattern::Sigma1,
            Pattern::Sigma2 => ShapePattern::Sigma2,
        };
        return ArcList { entries, pattern, orientation: Some(e.orientation) };
    }
    let entries = minimal_list(&necklace)
        .into_iter()
        .map(|(level, len, start)| ArcEntry {
            name: None,
            level,
            len,
            start,
            labels: labels(start, len),
        })
        .collect();
    ArcList { entries, pattern: ShapePattern::NotWellShaped, orientation: None }
}

/// Lays out a cyclic `(level, len)` sequence from label 0 and fills the rest of the
/// universe with eliminated labels.
pub fn state_from_pairs(m: u32, pairs: &[(u8, u64)]) -> crate::Result<GameState> {
    use crate::state::{Run, Universe, ELIMINATED};
    let u = Universe::new(m);
    let total: u64 = pairs.iter().map(|p| p.1).sum();
    if total > u.size() {
        return Err(crate::Error::Precondition(format!(
            "{total} candidates do not fit in 2^{m}"
        )));
    }
    let mut runs = Vec::new();
    let mut pos = 0;
    for &(level, len) in pairs {
        if len > 0 {
            runs.push(Run { lo: pos, hi: pos + len - 1, level });
            pos += len;
        }
    }
    if pos < u.size() {
        runs.push(Run { lo: pos, hi: u.size() - 1, level: ELIMINATED });
    }
    Ok(GameState::from_runs(u, runs))
}

/// Template instance with the given arc sizes listed in the pattern's name order.
pub fn template_state(m: u32, pattern: Pattern, sizes: [u64; 12]) -> crate::Result<GameState> {
    let pairs: Vec<(u8, u64)> = pattern
        .names()
        .iter()
        .zip(sizes)
        .map(|(n, s)| (n.level(), s))
        .collect();
    state_from_pairs(m, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ArcName::*;

    #[test]
    fn initial_state_pads_to_sigma1() {
        let s = GameState::initial(3);
        let arcs = canonical_arcs(&s);
        assert_eq!(arcs.len(), 12);
        assert_eq!(arcs.pattern, ShapePattern::Sigma1);
        let full: Vec<_> = arcs.entries.iter().filter(|e| e.len > 0).collect();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0].name, Some(S));
        assert_eq!(full[0].len, 8);
    }

    #[test]
    fn full_sigma1_listing() {
        let s = template_state(6, Pattern::Sigma1, [1; 12]).unwrap();
        let arcs = canonical_arcs(&s);
        let names: Vec<_> = arcs.entries.iter().map(|e| e.name.unwrap()).collect();
        assert_eq!(names, vec![L, N, S, O, M, Q, B, H, C, R, A, P]);
        assert_eq!(arcs.level_counts(), [1, 3, 5, 3]);
        assert_eq!(arc_role(&arcs, 2), ArcRole::Mode);
        assert_eq!(arc_role(&arcs, 5), ArcRole::Saddle);
        assert!(arc_role(&arcs, 1).is_step());
        assert!(is_strictly_well_shaped(&s));
    }

    #[test]
    fn patterns_are_recognized() {
        let s1 = template_state(6, Pattern::Sigma1, [2; 12]).unwrap();
        let s2 = template_state(6, Pattern::Sigma2, [2; 12]).unwrap();
        assert_eq!(shape_pattern(&s1), ShapePattern::Sigma1);
        assert_eq!(shape_pattern(&s2), ShapePattern::Sigma2);
        let bad = GameState::from_levels(&[0, 1, 0, 1]).unwrap();
        assert!(!is_well_shaped(&bad));
        assert_eq!(shape_pattern(&bad), ShapePattern::NotWellShaped);
    }

    #[test]
    fn modes_and_saddles_per_pattern() {
        for (p, modes, saddles) in [
            (Pattern::Sigma1, vec![S, H, A], vec![Q, R, P]),
            (Pattern::Sigma2, vec![S, H, M, A], vec![B, Q, R, P]),
        ] {
            let s = template_state(6, p, [1; 12]).unwrap();
            let arcs = canonical_arcs(&s);
            for (i, e) in arcs.entries.iter().enumerate() {
                let role = arc_role(&arcs, i);
                let n = e.name.unwrap();
                assert_eq!(role == ArcRole::Mode, modes.contains(&n), "{p:?} {n}");
                assert_eq!(role == ArcRole::Saddle, saddles.contains(&n), "{p:?} {n}");
            }
        }
    }

    /// Closed walks of twelve unit steps with level counts (1,3,5,3) are exactly the
    /// four oriented templates.
    #[test]
    fn full_count_walks_are_templates() {
        let mut found = 0;
        for bits in 0u32..(1 << 11) {
            let mut w = vec![0i32];
            for k in 0..11 {
                let last = *w.last().unwrap();
                w.push(if bits >> k & 1 == 1 { last + 1 } else { last - 1 });
            }
            if w.iter().any(|&l| !(0..=3).contains(&l)) || (w[11] - w[0]).abs() != 1 {
                continue;
            }
            let mut c = [0; 4];
            for &l in &w {
                c[l as usize] += 1;
            }
            if c != [1, 3, 5, 3] {
                continue;
            }
            found += 1;
            let levels: Vec<u8> = w.iter().map(|&l| l as u8).collect();
            assert!(first_embedding(&levels).is_some(), "{levels:?}");
        }
        assert_eq!(found, 4);
    }

    #[test]
    fn minimal_list_inserts_fills() {
        let n = Necklace::from_levels(&[(0, 3), (3, 1)]);
        let l = minimal_list(&n);
        assert_eq!(l.iter().map(|e| e.0).collect::<Vec<_>>(), vec![0, 1, 2, 3, 2, 1]);
        assert_eq!(minimal_counts(&[0, 3]), [1, 2, 2, 1]);
    }

    #[test]
    fn dump_has_one_line_per_arc() {
        let s = template_state(6, Pattern::Sigma2, [1; 12]).unwrap();
        let d = canonical_arcs(&s).dump();
        assert_eq!(d.lines().count(), 12);
        assert!(d.starts_with("L 2 [0..0] "));
    }
}
