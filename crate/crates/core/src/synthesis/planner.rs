//! Exhaustive search over arc-aligned base selections, used when no construction applies.

use super::{canonical_order, complete, line_intervals, take};
use crate::question::MAX_INTERVALS;
use crate::shape::necklace::{NArc, Necklace, Selection};
use crate::state::QuestionType;

/// Base selections with more runs than this cannot be brought down to four by level 3.
const MAX_BASE_RANGES: usize = 7;
/// Cap on base selections examined per level.
const MAX_PER_LEVEL: usize = 4096;

/// Ways to pick exactly `k` elements from `arcs`: some arcs whole, at most one arc
/// partially from one end.
fn level_choices(arcs: &[NArc], k: u64, total: u64) -> Vec<Selection> {
    let n = arcs.len();
    let mut out = Vec::new();
    if n > 16 {
        return out;
    }
    for mask in 0u32..(1 << n) {
        let whole: u64 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| arcs[i].len).sum();
        if whole > k {
            continue;
        }
        let rest = k - whole;
        let mut sel = Selection::new(total);
        for i in (0..n).filter(|&i| mask >> i & 1 == 1) {
            take(&mut sel, &arcs[i], arcs[i].len, true);
        }
        if rest == 0 {
            out.push(sel);
            continue;
        }
        for i in (0..n).filter(|&i| mask >> i & 1 == 0) {
            if arcs[i].len > rest {
                for low in [true, false] {
                    let mut s = sel.clone();
                    take(&mut s, &arcs[i], rest, low);
                    out.push(s);
                }
            }
        }
        if out.len() >= MAX_PER_LEVEL {
            break;
        }
    }
    out
}

fn union(a: &Selection, b: &Selection) -> Selection {
    let mut s = a.clone();
    for &(lo, hi) in b.ranges() {
        s.add(lo, hi - lo);
    }
    s
}

/// Valid selection of type `target`, direct realizations first.
pub(crate) fn plan(neck: &Necklace, target: QuestionType) -> Option<Selection> {
    let order = canonical_order(neck);
    let per_level: Vec<Vec<Selection>> = (0..3u8)
        .map(|lv| {
            let arcs: Vec<NArc> = order
                .iter()
                .map(|&i| neck.arcs[i])
                .filter(|a| a.level == lv)
                .collect();
            level_choices(&arcs, target.0[lv as usize], neck.total)
        })
        .collect();
    let mut bases = Vec::new();
    for s0 in &per_level[0] {
        for s1 in &per_level[1] {
            let s01 = union(s0, s1);
            if s01.circular_runs() > MAX_BASE_RANGES {
                continue;
            }
            for s2 in &per_level[2] {
                let s = union(&s01, s2);
                if s.circular_runs() <= MAX_BASE_RANGES {
                    bases.push(s);
                }
            }
        }
    }
    bases.sort_by_key(|s| (s.circular_runs(), s.ranges().len()));
    bases.dedup();
    let mut fallback = None;
    for b in &bases {
        if let Some(s) = complete(neck, b, target) {
            if line_intervals(&s) <= MAX_INTERVALS {
                return Some(s);
            }
            fallback.get_or_insert(s);
        }
    }
    fallback
}
