//! Exhaustive adversarial checking of the strategy.
//!
//! Every answer sequence is played out. Positions with equal [`NodeKey`] get identical
//! decisions, so their subtrees are explored once. The traversal fills a table of
//! subtree heights; budgets, failure paths and the depth histogram are read off it.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use dashmap::DashMap;

use crate::shape::is_well_shaped;
use crate::state::{character, n_min, Answer, GameState, StateType};
use crate::strategy::{Mode, Node, NodeKey};

/// Subtrees deeper than this are treated as non-terminating.
const HARD_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum FailureReason {
    DepthExceeded,
    NotWellShaped,
    NoProgress,
    Dispatcher(String),
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::DepthExceeded => write!(f, "depth exceeded"),
            FailureReason::NotWellShaped => write!(f, "non-well-shaped"),
            FailureReason::NoProgress => write!(f, "no progress"),
            FailureReason::Dispatcher(e) => write!(f, "dispatcher error: {e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    /// Answers from the root, `y`/`n`.
    pub path: String,
    pub reason: FailureReason,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub mode: Mode,
    pub check_shape: bool,
    /// Subtrees above this depth are explored in parallel.
    pub parallel_depth: usize,
    pub max_failures: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { mode: Mode::Perfect, check_shape: true, parallel_depth: 4, max_failures: 32 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub m: Option<u32>,
    pub mode: Mode,
    pub root: StateType,
    pub budget: u64,
    /// Distinct positions expanded.
    pub nodes_visited: u64,
    /// Positions of the full (unshared) game tree.
    pub tree_nodes: u128,
    /// Height of the strategy tree; `None` if some branch never terminates properly.
    pub max_depth_used: Option<u64>,
    /// Questions after which a child kept its parent's character.
    pub character_stalls: u64,
    pub failures: Vec<Failure>,
    /// depth → state type → number of tree positions.
    pub histogram: BTreeMap<usize, BTreeMap<StateType, u128>>,
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn success(&self) -> bool {
        self.failures.is_empty()
    }

    /// Positions at the deepest level reached.
    pub fn deepest_count(&self) -> u128 {
        self.histogram.values().last().map_or(0, |h| h.values().sum())
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        match self.m {
            Some(m) => writeln!(s, "m: {m}")?,
            None => writeln!(s, "m: -")?,
        }
        writeln!(s, "mode: {}", self.mode)?;
        writeln!(s, "root: {}", self.root)?;
        writeln!(s, "budget: {}", self.budget)?;
        writeln!(s, "result: {}", if self.success() { "ok" } else { "FAIL" })?;
        writeln!(s, "nodes_visited: {}", self.nodes_visited)?;
        writeln!(s, "tree_nodes: {}", self.tree_nodes)?;
        match self.max_depth_used {
            Some(d) => writeln!(s, "max_depth_used: {d}")?,
            None => writeln!(s, "max_depth_used: -")?,
        }
        writeln!(s, "character_stalls: {}", self.character_stalls)?;
        writeln!(s, "failures: {}", self.failures.len())?;
        for fl in &self.failures {
            let p = if fl.path.is_empty() { "-" } else { &fl.path };
            writeln!(s, "failure\t{p}\t{}", fl.reason)?;
        }
        writeln!(s, "histogram:")?;
        for (d, types) in &self.histogram {
            for (t, c) in types {
                writeln!(s, "depth\t{d}\t{t}\t{c}")?;
            }
        }
        if let Some(n) = &self.note {
            writeln!(s, "note: {n}")?;
        }
        f.write_str(&s)
    }
}

struct Entry {
    stype: StateType,
    own: Option<FailureReason>,
    /// Subtree height, `None` when something below failed.
    height: Option<u64>,
    children: Option<[Arc<NodeKey>; 2]>,
    stalls: u64,
}

struct Explorer<'a> {
    opts: &'a VerifyOptions,
    memo: DashMap<Arc<NodeKey>, Arc<Entry>>,
}

impl Explorer<'_> {
    fn explore(&self, node: &Node, key: Arc<NodeKey>, depth: usize) -> Arc<Entry> {
        if let Some(e) = self.memo.get(&key) {
            return e.clone();
        }
        let entry = Arc::new(self.expand(node, &key, depth));
        self.memo.entry(key).or_insert(entry).clone()
    }

    fn expand(&self, node: &Node, key: &Arc<NodeKey>, depth: usize) -> Entry {
        let stype = node.real.state_type();
        let leaf = |own: Option<FailureReason>| Entry {
            stype,
            height: if own.is_none() { Some(0) } else { None },
            own,
            children: None,
            stalls: 0,
        };
        if node.is_final() {
            return leaf(None);
        }
        if depth >= HARD_DEPTH {
            return leaf(Some(FailureReason::NoProgress));
        }
        let step = match node.step(self.opts.mode) {
            Ok(Some(s)) => s,
            Ok(None) => return leaf(None),
            Err(e) => return leaf(Some(FailureReason::Dispatcher(e.to_string()))),
        };
        let kids = [Answer::Yes, Answer::No].map(|a| node.child(&step, a));
        let [y, n] = match kids {
            [Ok(y), Ok(n)] => [y, n],
            [Err(e), _] | [_, Err(e)] => return leaf(Some(FailureReason::Dispatcher(e.to_string()))),
        };
        let keys = [Arc::new(y.key()), Arc::new(n.key())];
        if keys.iter().any(|k| **k == **key) {
            return leaf(Some(FailureReason::NoProgress));
        }
        if self.opts.check_shape
            && [&y, &n].iter().any(|c| !c.is_final() && !is_well_shaped(c.working()))
        {
            return leaf(Some(FailureReason::NotWellShaped));
        }
        let ch = character(node.working().state_type());
        let stalls = [&y, &n].iter().filter(|c| character(c.working().state_type()) >= ch).count() as u64;
        let (ey, en) = if depth < self.opts.parallel_depth {
            rayon::join(
                || self.explore(&y, keys[0].clone(), depth + 1),
                || self.explore(&n, keys[1].clone(), depth + 1),
            )
        } else {
            (self.explore(&y, keys[0].clone(), depth + 1), self.explore(&n, keys[1].clone(), depth + 1))
        };
        let height = match (ey.height, en.height) {
            (Some(a), Some(b)) => Some(1 + a.max(b)),
            _ => None,
        };
        Entry { stype, own: None, height, children: Some(keys), stalls }
    }
}

fn collect(
    memo: &HashMap<Arc<NodeKey>, Arc<Entry>>,
    key: &Arc<NodeKey>,
    budget: u64,
    path: &mut String,
    out: &mut Vec<Failure>,
    cap: usize,
) {
    if out.len() >= cap {
        return;
    }
    let e = &memo[key];
    if let Some(r) = &e.own {
        out.push(Failure { path: path.clone(), reason: r.clone() });
        return;
    }
    if e.height.is_some_and(|h| h <= budget) {
        return;
    }
    let Some(children) = &e.children else { return };
    if budget == 0 {
        out.push(Failure { path: path.clone(), reason: FailureReason::DepthExceeded });
        return;
    }
    for (c, k) in ['y', 'n'].iter().zip(children) {
        path.push(*c);
        collect(memo, k, budget - 1, path, out, cap);
        path.pop();
    }
}

/// Plays every answer sequence from `node` with at most `budget` questions.
pub fn verify_node(node: Node, budget: u64, opts: &VerifyOptions) -> VerificationReport {
    let explorer = Explorer { opts, memo: DashMap::new() };
    let root_key = Arc::new(node.key());
    let mut failures = Vec::new();
    if opts.check_shape && !node.is_final() && !is_well_shaped(node.working()) {
        failures.push(Failure { path: String::new(), reason: FailureReason::NotWellShaped });
    }
    let root = explorer.explore(&node, root_key.clone(), 0);
    let memo: HashMap<Arc<NodeKey>, Arc<Entry>> = explorer.memo.into_iter().collect();
    collect(&memo, &root_key, budget, &mut String::new(), &mut failures, opts.max_failures);
    failures.sort();
    failures.dedup();

    let mut histogram = BTreeMap::new();
    let mut tree_nodes = 0u128;
    let mut level: HashMap<Arc<NodeKey>, u128> = HashMap::from([(root_key, 1)]);
    let mut depth = 0;
    while !level.is_empty() {
        let mut row: BTreeMap<StateType, u128> = BTreeMap::new();
        let mut next: HashMap<Arc<NodeKey>, u128> = HashMap::new();
        for (k, c) in level {
            let e = &memo[&k];
            *row.entry(e.stype).or_default() += c;
            tree_nodes += c;
            if let Some(ch) = &e.children {
                for k2 in ch {
                    *next.entry(k2.clone()).or_default() += c;
                }
            }
        }
        histogram.insert(depth, row);
        level = next;
        depth += 1;
    }

    VerificationReport {
        m: None,
        mode: opts.mode,
        root: node.real.state_type(),
        budget,
        nodes_visited: memo.len() as u64,
        tree_nodes,
        max_depth_used: root.height,
        character_stalls: memo.values().map(|e| e.stalls).sum(),
        failures,
        histogram,
        note: None,
    }
}

pub fn verify_state(state: GameState, budget: u64, check_shape: bool) -> VerificationReport {
    let opts = VerifyOptions { check_shape, ..VerifyOptions::default() };
    verify_node(Node::new(state), budget, &opts)
}

/// Full verification from the initial state of `2^m` labels with budget `n_min(m)`.
pub fn verify_perfect(m: u32, opts: &VerifyOptions) -> VerificationReport {
    let mut r = verify_node(Node::initial(m), n_min(m), opts);
    r.m = Some(m);
    if [2, 3, 5].contains(&m) {
        r.note = Some(format!("no perfect strategy is expected for m = {m}"));
    }
    r
}

/// Plain recursion without sharing: (success, height, leaves). For cross-checking.
pub fn verify_unmemoized(node: &Node, budget: u64, opts: &VerifyOptions) -> (bool, u64, u64) {
    if node.is_final() {
        return (true, 0, 1);
    }
    if budget == 0 {
        return (false, 0, 1);
    }
    let Ok(Some(step)) = node.step(opts.mode) else { return (false, 0, 1) };
    let mut ok = true;
    let mut height = 0;
    let mut leaves = 0;
    for a in [Answer::Yes, Answer::No] {
        let Ok(c) = node.child(&step, a) else { return (false, 0, 1) };
        if opts.check_shape && !c.is_final() && !is_well_shaped(c.working()) {
            ok = false;
        }
        let (o, h, l) = verify_unmemoized(&c, budget - 1, opts);
        ok &= o;
        height = height.max(h + 1);
        leaves += l;
    }
    (ok, height, leaves)
}

/// Whether `k` arbitrary subset questions always finish a state given by candidate levels.
fn subset_can_finish(levels: &mut Vec<u8>, k: u64, memo: &mut HashMap<(Vec<u8>, u64), bool>) -> bool {
    levels.retain(|&l| l <= 3);
    levels.sort_unstable();
    if levels.len() <= 1 {
        return true;
    }
    if k == 0 {
        return false;
    }
    if let Some(&v) = memo.get(&(levels.clone(), k)) {
        return v;
    }
    let n = levels.len();
    let mut found = false;
    for mask in 0u32..(1 << n) {
        let mut yes: Vec<u8> = (0..n).map(|i| levels[i] + (mask >> i & 1 == 0) as u8).collect();
        let mut no: Vec<u8> = (0..n).map(|i| levels[i] + (mask >> i & 1 == 1) as u8).collect();
        if subset_can_finish(&mut yes, k - 1, memo) && subset_can_finish(&mut no, k - 1, memo) {
            found = true;
            break;
        }
    }
    memo.insert((levels.clone(), k), found);
    found
}

/// Shortest strategy over all subset questions for a state with at most eight candidates.
pub fn optimal_length_exhaustive(state: &GameState) -> Option<u64> {
    let levels: Vec<u8> = state.support_runs().flat_map(|r| std::iter::repeat_n(r.level, r.len() as usize)).collect();
    if levels.len() > 8 {
        return None;
    }
    let mut memo = HashMap::new();
    let mut k = 0;
    while !subset_can_finish(&mut levels.clone(), k, &mut memo) {
        k += 1;
    }
    Some(k)
}

/// Confirms that no strategy with fewer than `character(state)` questions exists,
/// by exhaustive search over all subset questions. Requires at most eight candidates.
pub fn verify_optimal_tiny(state: &GameState) -> bool {
    let ch = state.character();
    if ch == 0 {
        return true;
    }
    let mut levels: Vec<u8> =
        state.support_runs().flat_map(|r| std::iter::repeat_n(r.level, r.len() as usize)).collect();
    assert!(levels.len() <= 8, "verify_optimal_tiny needs at most eight candidates");
    !subset_can_finish(&mut levels, ch - 1, &mut HashMap::new())
}
