use ulam4::shape::state_from_pairs;
use ulam4::state::n_min;
use ulam4::strategy::{Mode, Node};
use ulam4::verify::{verify_node, verify_perfect, verify_state, verify_unmemoized, VerifyOptions};

#[test]
fn memoized_and_plain_traversals_agree() {
    for m in [1, 4, 6, 7] {
        for mode in [Mode::Perfect, Mode::Printed] {
            let opts = VerifyOptions { mode, ..VerifyOptions::default() };
            let budget = n_min(m);
            let r = verify_perfect(m, &opts);
            let (ok, height, leaves) = verify_unmemoized(&Node::initial(m), budget, &opts);
            assert_eq!(r.success(), ok, "m = {m}, {mode}");
            if ok {
                assert_eq!(r.max_depth_used, Some(height), "m = {m}");
                assert_eq!(r.tree_nodes, 2 * leaves as u128 - 1, "m = {m}");
            }
        }
    }
}

#[test]
fn serial_and_parallel_reports_match() {
    for m in [4, 6] {
        let serial = VerifyOptions { parallel_depth: 0, ..VerifyOptions::default() };
        let wide = VerifyOptions { parallel_depth: 12, ..VerifyOptions::default() };
        assert_eq!(verify_perfect(m, &serial), verify_perfect(m, &wide));
    }
}

#[test]
fn two_level3_candidates() {
    let s = state_from_pairs(1, &[(3, 2)]).unwrap();
    assert!(verify_state(s.clone(), 1, true).success());
    let r = verify_state(s, 0, true);
    assert!(!r.success());
    assert_eq!(r.failures.len(), 1);
}

#[test]
fn spencer_mode_is_reported_not_hidden() {
    let opts = VerifyOptions { mode: Mode::Spencer, ..VerifyOptions::default() };
    let r = verify_node(Node::initial(6), n_min(6), &opts);
    assert!(!r.success());
    assert!(r.failures.iter().any(|f| f.reason.to_string().contains("(1,6,15,20)")), "{r}");
}

#[test]
fn impossible_sizes_fail() {
    for m in [2, 3, 5] {
        let r = verify_perfect(m, &VerifyOptions::default());
        assert!(!r.success(), "m = {m}");
        assert!(r.note.is_some());
    }
}
