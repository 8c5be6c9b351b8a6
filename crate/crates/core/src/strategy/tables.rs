//! Scripted questions for the small post-halving states.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::state::{QuestionType, StateType};

/// Which specialized construction realizes a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lemma {
    /// At most four candidates, any subset works.
    Straightforward,
    Theorem1,
    Type11cd,
    Type102d,
    Type100d,
    Type0bcd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub state: StateType,
    pub question: QuestionType,
    pub lemma: Lemma,
    pub yes: StateType,
    pub no: StateType,
}

const fn row(s: [u64; 4], q: [u64; 4], lemma: Lemma, yes: [u64; 4], no: [u64; 4]) -> TableRow {
    TableRow { state: StateType(s), question: QuestionType(q), lemma, yes: StateType(yes), no: StateType(no) }
}

use Lemma::*;

/// Post-halving `m` values with a script.
pub const TABLE_MS: [u64; 7] = [1, 4, 8, 12, 17, 23, 32];

/// Rows as printed, keyed by `m`. The printed children are kept verbatim, typos included.
pub const SCRIPTS: &[(u64, &[TableRow])] = &[
    (1, &[
        row([1, 1, 0, 0], [1, 0, 0, 0], Straightforward, [1, 0, 1, 0], [0, 2, 0, 0]),
        row([1, 0, 1, 0], [1, 0, 0, 0], Straightforward, [1, 0, 0, 1], [0, 1, 1, 0]),
        row([0, 2, 0, 0], [0, 1, 0, 0], Straightforward, [0, 1, 1, 0], [0, 1, 1, 0]),
        row([0, 1, 1, 0], [0, 1, 0, 0], Straightforward, [0, 1, 0, 1], [0, 0, 2, 0]),
    ]),
    (4, &[
        row([1, 4, 6, 4], [1, 1, 3, 2], Type11cd, [1, 1, 6, 5], [0, 4, 4, 5]),
        row([1, 1, 6, 5], [1, 0, 2, 3], Type102d, [1, 0, 3, 7], [0, 2, 4, 4]),
        row([0, 4, 4, 5], [0, 2, 2, 3], Type0bcd, [0, 2, 4, 5], [0, 2, 4, 4]),
        row([0, 2, 4, 4], [0, 1, 2, 2], Type0bcd, [0, 1, 3, 4], [0, 1, 3, 4]),
        row([0, 2, 4, 5], [0, 1, 2, 3], Type0bcd, [0, 1, 3, 5], [0, 1, 3, 4]),
        row([0, 1, 3, 4], [0, 1, 0, 4], Type0bcd, [0, 1, 0, 7], [0, 0, 4, 0]),
        row([0, 1, 3, 5], [0, 1, 0, 5], Type0bcd, [0, 1, 0, 8], [0, 0, 4, 0]),
    ]),
    (8, &[
        row([1, 8, 28, 56], [1, 4, 10, 22], Theorem1, [1, 4, 14, 40], [0, 5, 22, 44]),
        row([1, 4, 14, 40], [1, 1, 5, 36], Type11cd, [1, 1, 8, 45], [0, 4, 10, 9]),
        row([1, 1, 8, 45], [1, 0, 2, 29], Type102d, [1, 0, 3, 35], [0, 2, 6, 18]),
    ]),
    (12, &[
        row([1, 12, 66, 220], [1, 6, 27, 110], Theorem1, [1, 6, 33, 149], [0, 7, 45, 137]),
        row([1, 6, 33, 149], [1, 1, 13, 136], Type11cd, [1, 1, 18, 156], [0, 6, 21, 26]),
        row([1, 1, 18, 156], [1, 0, 2, 120], Type102d, [1, 0, 3, 136], [0, 2, 16, 38]),
    ]),
    (17, &[
        row([1, 17, 136, 680], [1, 8, 60, 373], Theorem1, [1, 8, 69, 449], [0, 10, 84, 367]),
        row([1, 8, 69, 449], [1, 1, 30, 344], Type11cd, [1, 1, 37, 383], [0, 2, 35, 69]),
        row([1, 1, 37, 383], [1, 0, 2, 316], Type102d, [1, 0, 3, 351], [0, 2, 35, 69]),
    ]),
    (23, &[
        row([1, 23, 253, 1771], [1, 11, 115, 946], Theorem1, [1, 11, 127, 1084], [0, 13, 149, 940]),
        row([1, 11, 127, 1084], [1, 1, 58, 767], Type11cd, [1, 1, 68, 836], [0, 11, 70, 375]),
        row([1, 1, 68, 836], [1, 0, 2, 700], Type102d, [1, 0, 3, 766], [0, 2, 66, 138]),
    ]),
    (32, &[
        row([1, 32, 496, 4960], [1, 16, 232, 2545], Theorem1, [1, 16, 248, 2809], [0, 17, 280, 2647]),
        row([1, 16, 248, 2809], [1, 1, 116, 1852], Type11cd, [1, 1, 131, 1984], [0, 16, 133, 1073]),
        row([1, 1, 131, 1984], [1, 0, 2, 1635], Type102d, [1, 0, 3, 1764], [0, 2, 129, 351]),
    ]),
];

/// Rows for `(1,0,3,n)`, 7 ≤ n ≤ 9, as printed.
pub const SCRIPT_103N: &[TableRow] = &[
    row([1, 0, 3, 7], [1, 0, 0, 2], Type100d, [1, 0, 0, 5], [0, 1, 3, 5]),
    row([0, 1, 3, 5], [0, 1, 0, 5], Type0bcd, [0, 1, 0, 8], [0, 0, 4, 0]),
    row([1, 0, 3, 8], [1, 0, 0, 3], Type100d, [1, 0, 0, 6], [0, 1, 3, 5]),
    row([1, 0, 3, 9], [1, 0, 0, 4], Type100d, [1, 0, 0, 7], [0, 1, 3, 5]),
];

/// Rows of the script for `m`, if one exists.
pub fn table_strategy(m: u64) -> Option<&'static [TableRow]> {
    SCRIPTS.iter().find(|(k, _)| *k == m).map(|(_, rows)| *rows)
}

/// Scripted question for a state type, across every table.
pub fn lookup(stype: StateType) -> Option<&'static TableRow> {
    static INDEX: OnceLock<HashMap<StateType, &'static TableRow>> = OnceLock::new();
    INDEX
        .get_or_init(|| {
            let mut idx = HashMap::new();
            for row in SCRIPTS.iter().flat_map(|(_, rows)| rows.iter()).chain(SCRIPT_103N) {
                let prev = idx.insert(row.state, row);
                assert!(prev.is_none_or(|p| p.question == row.question), "conflicting rows for {}", row.state);
            }
            idx
        })
        .get(&stype)
        .copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{character, children_types};

    #[test]
    fn printed_children_match_except_one() {
        let mut bad = Vec::new();
        for row in SCRIPTS.iter().flat_map(|(_, r)| r.iter()).chain(SCRIPT_103N) {
            let (y, n) = children_types(row.state, row.question).unwrap();
            if (y, n) != (row.yes, row.no) {
                bad.push((row.state, y, n));
            }
        }
        // the second m = 17 row repeats the next row's no-state
        assert_eq!(
            bad,
            vec![(StateType([1, 8, 69, 449]), StateType([1, 1, 37, 383]), StateType([0, 8, 40, 135]))]
        );
    }

    #[test]
    fn every_row_drops_character() {
        for row in SCRIPTS.iter().flat_map(|(_, r)| r.iter()).chain(SCRIPT_103N) {
            let (y, n) = children_types(row.state, row.question).unwrap();
            let ch = character(row.state);
            assert!(character(y) < ch && character(n) < ch, "{}", row.state);
        }
    }

    #[test]
    fn lookup_finds_rows() {
        assert_eq!(lookup(StateType([1, 8, 28, 56])).unwrap().question, QuestionType([1, 4, 10, 22]));
        assert!(lookup(StateType([1, 9, 36, 84])).is_none());
        assert_eq!(table_strategy(4).unwrap().len(), 7);
    }
}
