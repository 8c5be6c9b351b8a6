use ulam4::niceness::{is_0typical, m_tilde, m_unconstrained, nice_by_search, non_nice_table};
use ulam4::state::{volume, StateType};

/// The published table: (character, t1, t2, t3 range).
const PUBLISHED: &[(u64, u64, u64, u64, u64)] = &[
    (6, 1, 5, 6, 7),
    (6, 2, 1, 6, 13),
    (6, 2, 2, 6, 6),
    (7, 2, 7, 7, 14),
    (7, 3, 2, 7, 25),
    (7, 3, 3, 7, 17),
    (7, 3, 4, 7, 9),
    (8, 3, 15, 8, 10),
    (8, 4, 9, 8, 27),
    (8, 4, 10, 8, 18),
    (8, 4, 11, 8, 9),
    (8, 5, 4, 8, 35),
    (8, 5, 5, 8, 26),
    (8, 5, 6, 8, 17),
    (8, 5, 7, 8, 8),
    (9, 7, 16, 9, 30),
    (9, 7, 17, 9, 20),
    (9, 7, 18, 9, 10),
    (9, 8, 9, 9, 54),
    (9, 8, 10, 9, 44),
    (9, 8, 11, 9, 34),
    (9, 8, 12, 9, 24),
    (9, 8, 13, 9, 14),
    (9, 9, 8, 9, 18),
    (10, 13, 25, 10, 21),
    (10, 13, 26, 10, 10),
    (10, 14, 17, 10, 53),
    (10, 14, 18, 10, 42),
    (10, 14, 19, 10, 31),
    (10, 14, 20, 10, 20),
    (10, 15, 14, 10, 30),
    (10, 15, 15, 10, 19),
    (11, 25, 30, 11, 13),
];

#[test]
fn regenerated_table_matches_published_rows() {
    let got: Vec<_> = non_nice_table(13)
        .into_iter()
        .map(|r| (r.character, r.t1, r.t2, r.t3_min, r.t3_max))
        .collect();
    for r in &got {
        if !PUBLISHED.contains(r) {
            println!("extra {r:?}");
        }
    }
    for r in PUBLISHED {
        if !got.contains(r) {
            println!("missing {r:?}");
        }
    }
    assert_eq!(got, PUBLISHED);
}

/// Least `t3` making `(0,t1,t2,t3)` 0-typical, if `t2 ≥ t1 - 1`.
fn typical_from(t1: u64, t2: u64) -> Option<u64> {
    (t2 + 1 >= t1).then(|| (0..).find(|&z| is_0typical(StateType([0, t1, t2, z]))).unwrap())
}

#[test]
fn constrained_and_unconstrained_agree_on_0typical_states() {
    let cap = 1u128 << 13;
    let (mut pairs, mut literal) = (0, 0);
    for t1 in (0..).take_while(|&t1| volume(StateType([0, t1, 0, 0]), 13) <= cap) {
        for t2 in (0..).take_while(|&t2| volume(StateType([0, t1, t2, 0]), 13) <= cap) {
            let (a, b) = (m_tilde(t1, t2), m_unconstrained(t1, t2));
            pairs += 1;
            if a != b {
                literal += 1;
                if let Some(z) = typical_from(t1, t2) {
                    assert_eq!(a.max(z), b.max(z), "({t1},{t2})");
                }
            }
        }
    }
    println!("{pairs} pairs; {literal} differ only below the 0-typical range");
}

#[test]
fn search_oracle_agrees_on_small_states() {
    let mut bad = Vec::new();
    for t1 in 0..=6 {
        for t2 in 0..=8 {
            let m = m_tilde(t1, t2);
            for t3 in 0..=40 {
                let s = StateType([0, t1, t2, t3]);
                if nice_by_search(s) != (t3 >= m) {
                    bad.push(s);
                }
            }
        }
    }
    println!("{} disagreements: {:?}", bad.len(), &bad[..bad.len().min(20)]);
    assert!(bad.is_empty());
}
