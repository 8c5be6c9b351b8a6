//! Closed-form question types.

use crate::error::{Error, Result};
use crate::niceness::is_0typical;
use crate::state::{binom, character, children_types, volume, QuestionType, StateType};

fn c(n: u64, k: u64) -> i128 {
    binom(n, k) as i128
}

fn to_u64(v: i128, what: &str, s: StateType) -> Result<u64> {
    u64::try_from(v).map_err(|_| Error::Internal(format!("{what} = {v} is negative for {s}")))
}

/// Balanced type with the lower levels halved, or its complement when that asks fewer
/// level-3 candidates. The flag reports the complement.
pub fn spencer_qtype(stype: StateType, q: u64) -> Result<(QuestionType, bool)> {
    let t = stype.0;
    if t[0] + t[1] + t[2] <= 1 {
        return Err(Error::Precondition(format!("{stype} has at most one candidate below level 3")));
    }
    let mut a = [0u64; 4];
    let mut ceil = true;
    for i in 0..3 {
        a[i] = if t[i] % 2 == 1 {
            let v = if ceil { t[i].div_ceil(2) } else { t[i] / 2 };
            ceil = !ceil;
            v
        } else {
            t[i] / 2
        };
    }
    // level i moves C(q, 3-i) volume between the children per candidate
    let s: i128 = (0..3).map(|i| (t[i] as i128 - 2 * a[i] as i128) * c(q, 3 - i as u64)).sum::<i128>() + t[3] as i128;
    let a3 = s.div_euclid(2);
    let qt = |x: i128| -> Option<QuestionType> {
        (0..=t[3] as i128).contains(&x).then(|| QuestionType([a[0], a[1], a[2], x as u64]))
    };
    let direct = qt(a3);
    let comp = direct.map(|d| d.complement(stype));
    match (direct, comp) {
        (Some(d), Some(cq)) if d.0[3] <= (2 * t[3]).div_ceil(3) || d.0[3] <= cq.0[3] => Ok((d, false)),
        (Some(_), Some(cq)) => Ok((cq, true)),
        _ => Err(Error::SpencerInfeasible(stype)),
    }
}

/// The eight cases for 0-typical states; `None` when neither case condition holds.
fn guzicki_case(t: [u64; 4], k: u64) -> Option<Result<QuestionType>> {
    let [_, t1, t2, t3] = t;
    let (k, t1i, t2i, t3i) = (k as i128, t1 as i128, t2 as i128, t3 as i128);
    let half = |x: i128| x.div_euclid(2);
    let ty = |a: [i128; 3]| -> Result<QuestionType> {
        let mut out = [0u64; 4];
        for i in 0..3 {
            out[i + 1] = to_u64(a[i], "component", StateType(t))?;
        }
        Ok(QuestionType(out))
    };
    let e1 = t1 % 2 == 0;
    let e2 = t2 % 2 == 0;
    let case1 = k >= 3 && t2i >= 3 * k - 3;
    let case2 = k >= 4 && t3i >= k * k;
    if !case1 && !case2 {
        return None;
    }
    Some(match (e1, e2) {
        (true, true) => ty([t1i / 2, t2i / 2, half(t3i)]),
        (true, false) => ty([t1i / 2, half(t2i), half(t3i + k - 1)]),
        (false, true) if case1 => {
            let r = k * k - k + 2;
            let b1 = (r / (2 * (k - 1))) / 2;
            let tt = (2 * b1 + 1) * (k - 1) - r / 2;
            ty([t1i - half(t1i), t2i - (t2i / 2 + b1), t3i - half(t3i - tt - 1)])
        }
        (false, false) if case1 => {
            let r = k * k - k + 2;
            let b1 = (r / (2 * (k - 1)) + 1) / 2;
            let tt = 2 * b1 * (k - 1) - r / 2;
            ty([t1i - half(t1i), t2i - (half(t2i) + b1), t3i - half(t3i - tt - 1)])
        }
        (false, true) => {
            let tt = (k * k - 3 * k + 2) / 2;
            ty([half(t1i), t2i / 2, half(t3i + tt)])
        }
        (false, false) => {
            let tt = (k * k - 5 * k + 4) / 2;
            ty([t1i - half(t1i), t2i - (t2i + 1) / 2, t3i - half(t3i + tt)])
        }
    })
}

/// Question type for a 0-typical state; both children are checked to be 0-typical with
/// smaller character.
pub fn guzicki_qtype(stype: StateType) -> Result<QuestionType> {
    if !is_0typical(stype) {
        return Err(Error::Precondition(format!("{stype} is not 0-typical")));
    }
    let k = character(stype);
    let qt = guzicki_case(stype.0, k).ok_or(Error::GuzickiGap(stype))??;
    if !qt.fits(stype) {
        return Err(Error::Internal(format!("{qt} does not fit {stype}")));
    }
    let (y, n) = children_types(stype, qt)?;
    for ch in [y, n] {
        if character(ch) >= k || !is_0typical(ch) {
            return Err(Error::Internal(format!("{stype} under {qt}: child {ch} fails the case guarantee")));
        }
    }
    Ok(qt)
}

/// Level-3 count making the two children's `(q-1)`-volumes as equal as possible, within `lo..=hi`.
pub(crate) fn balance_d(stype: StateType, mut qt: QuestionType, q: u64, lo: u64, hi: u64) -> QuestionType {
    let best = (lo..=hi)
        .min_by_key(|&d| {
            qt.0[3] = d;
            let (y, n) = children_types(stype, qt).expect("fits");
            volume(y, q - 1).abs_diff(volume(n, q - 1))
        })
        .unwrap_or(lo);
    qt.0[3] = best;
    qt
}

fn check_drop(stype: StateType, qt: QuestionType, limit: u64) -> bool {
    qt.fits(stype)
        && children_types(stype, qt)
            .map(|(y, n)| character(y) <= limit && character(n) <= limit)
            .unwrap_or(false)
}

/// The three question types for `(1,m,C(m,2),C(m,3))`, m ≥ 33, as printed, each checked for
/// the character drop and re-balanced on level 3 if the check fails.
/// Returns the types of Q1, Q2 (asked in YES1) and Q3 (asked in YES2).
pub fn lemma7_sequence(stype: StateType) -> Result<[QuestionType; 3]> {
    let [t0, b0, c0, d0] = stype.0;
    let m = b0;
    if t0 != 1 || m < 33 || c0 != binom(m, 2) as u64 || d0 != binom(m, 3) as u64 {
        return Err(Error::Precondition(format!("{stype} is not (1,m,C(m,2),C(m,3)) with m ≥ 33")));
    }
    let ch = character(stype);
    let q = ch - 2;
    let q1 = plan_q1(stype, q)?;
    let yes1 = children_types(stype, q1)?.0;
    let q2 = plan_q2(yes1, q)?;
    let yes2 = children_types(yes1, q2)?.0;
    let q3 = plan_q3(yes2, q)?;
    Ok([q1, q2, q3])
}

pub(crate) fn plan_q1(s: StateType, q: u64) -> Result<QuestionType> {
    let [_, b0, c0, d0] = s.0.map(|x| x as i128);
    let (hb, hc) = (b0 / 2, c0 / 2);
    let alpha = d0 + 2 * hc - c0 - 2 * hb - c(q + 1, 3)
        + c(q + 1, 2) * (b0 + 1 - 2 * hb)
        + (q as i128 + 2) * (c0 + 4 * hb - b0 - 2 * hc);
    let x = alpha.div_euclid(2).clamp(0, d0);
    let qt = QuestionType([1, hb as u64, (hc - hb) as u64, x as u64]);
    repair(s, qt, q + 1)
}

pub(crate) fn plan_q2(s: StateType, q: u64) -> Result<QuestionType> {
    let [_, b1, c1, d1] = s.0.map(|x| x as i128);
    let (hb, hc) = (b1 / 2, c1 / 2);
    let beta = (b1 - 1) * c(q, 2) - c(q, 3) + (q as i128 + 1) * (c1 + 2 - b1 + 2 * hb - 2 * hc) + d1 - c1
        + 2 * hc
        - 2 * hb;
    let y = beta.div_euclid(2).clamp(0, d1);
    let cc = to_u64(hc - hb, "c", s)?;
    let qt = QuestionType([1, 1, cc, y as u64]);
    repair(s, qt, q)
}

pub(crate) fn plan_q3(s: StateType, q: u64) -> Result<QuestionType> {
    let [_, _, c2, d2] = s.0.map(|x| x as i128);
    let num = d2 + 4 - c2 - c(q - 1, 3) + 2 * c(q - 1, 2) + q as i128 * (c2 - 5);
    let z = num.div_euclid(2).clamp(0, d2);
    let qt = QuestionType([1, 0, 2, z as u64]);
    repair(s, qt, q - 1)
}

/// Keeps a printed type when both children reach `limit`, otherwise balances level 3.
fn repair(s: StateType, qt: QuestionType, limit: u64) -> Result<QuestionType> {
    if !QuestionType([qt.0[0], qt.0[1], qt.0[2], 0]).fits(s) {
        return Err(Error::Precondition(format!("question type {qt} exceeds state type {s}")));
    }
    if check_drop(s, qt, limit) {
        Ok(qt)
    } else {
        Ok(balance_d(s, qt, limit + 1, 0, s.0[3]))
    }
}

/// Type for `(1,0,3,n)`, n ≥ 7.
pub fn type_103n(stype: StateType) -> Result<QuestionType> {
    let [t0, t1, t2, n] = stype.0;
    if (t0, t1, t2) != (1, 0, 3) || n < 7 {
        return Err(Error::Precondition(format!("{stype} is not (1,0,3,n) with n ≥ 7")));
    }
    if n <= 9 {
        return Ok(QuestionType([1, 0, 0, n - 5]));
    }
    let q = character(stype) - 1;
    let x = (n as i128 + 3 * q as i128 - c(q, 3)).div_euclid(2).clamp(0, n as i128);
    Ok(QuestionType([1, 0, 0, x as u64]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::question::is_balanced_type;

    fn st(a: [u64; 4]) -> StateType {
        StateType(a)
    }

    #[test]
    fn spencer_halves_halving_states() {
        for m in 2..10u64 {
            for j in 0..m {
                let f = 1 << (m - j);
                let s = st([f, j * f, binom(j, 2) as u64 * f, binom(j, 3) as u64 * f]);
                let q = character(s) - 1;
                let (t, flip) = spencer_qtype(s, q).unwrap();
                assert!(!flip);
                assert_eq!(t.0, s.0.map(|x| x / 2));
            }
        }
    }

    #[test]
    fn spencer_is_balanced() {
        let mut ok = 0;
        for t0 in 0..4 {
            for t1 in 0..12 {
                for t2 in (0..40).step_by(3) {
                    for t3 in (0..300).step_by(7) {
                        let s = st([t0, t1, t2, t3]);
                        if t0 + t1 + t2 <= 1 {
                            continue;
                        }
                        match spencer_qtype(s, character(s) - 1) {
                            Ok((t, _)) => {
                                assert!(is_balanced_type(s, t).unwrap(), "{s} {t}");
                                ok += 1;
                            }
                            Err(e) => assert_eq!(e, Error::SpencerInfeasible(s)),
                        }
                    }
                }
            }
        }
        assert!(ok > 1000, "{ok}");
    }

    #[test]
    fn spencer_fails_on_small_scripted_states() {
        // one level-0 candidate outweighs every level-3 candidate
        let s = st([1, 8, 28, 56]);
        assert_eq!(spencer_qtype(s, character(s) - 1), Err(Error::SpencerInfeasible(s)));
    }

    #[test]
    fn guzicki_even_case() {
        let s = st([0, 8, 28, 56]);
        assert_eq!(character(s), 10);
        assert_eq!(guzicki_qtype(s).unwrap(), QuestionType([0, 4, 14, 28]));
    }

    #[test]
    fn guzicki_gap_is_reported() {
        // 0-typical, character 7, t2 < 18 and t3 < 49
        let s = st([0, 2, 4, 8]);
        assert!(is_0typical(s));
        assert_eq!(guzicki_qtype(s), Err(Error::GuzickiGap(s)));
    }

    #[test]
    fn type_103n_rows_and_balance() {
        assert_eq!(type_103n(st([1, 0, 3, 7])).unwrap(), QuestionType([1, 0, 0, 2]));
        assert_eq!(type_103n(st([1, 0, 3, 9])).unwrap(), QuestionType([1, 0, 0, 4]));
        let s = st([1, 0, 3, 10]);
        let t = type_103n(s).unwrap();
        assert_eq!(t, QuestionType([1, 0, 0, 4]));
        let (y, n) = children_types(s, t).unwrap();
        assert_eq!((y, n), (st([1, 0, 0, 7]), st([0, 1, 3, 6])));
        assert_eq!(volume(y, 6), 49);
        assert_eq!(volume(n, 6), 49);
    }

    #[test]
    fn three_step_plan_for_33() {
        let s = st([1, 33, 528, 5456]);
        let [q1, q2, q3] = lemma7_sequence(s).unwrap();
        assert_eq!(&q1.0[..3], &[1, 16, 248]);
        let ch = character(s);
        let (y1, n1) = children_types(s, q1).unwrap();
        assert!(character(y1) < ch && character(n1) < ch && is_0typical(n1));
        let (y2, n2) = children_types(y1, q2).unwrap();
        assert!(character(y2) < ch - 1 && character(n2) < ch - 1 && is_0typical(n2));
        let (y3, n3) = children_types(y2, q3).unwrap();
        assert!(character(y3) < ch - 2 && character(n3) < ch - 2 && is_0typical(n3));
        assert_eq!(&y3.0[..3], &[1, 0, 3]);
    }

    #[test]
    fn three_step_plan_rejects_small_m() {
        assert!(lemma7_sequence(st([1, 32, 496, 4960])).is_err());
    }
}
