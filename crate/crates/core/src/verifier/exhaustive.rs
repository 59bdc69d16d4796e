use rayon::prelude::*;

use super::{LocalReport, Mode, ThresholdBound};
use crate::construction::GroundSet;
use crate::diffset::DiffScratch;
use crate::model::{threshold_holds, SubsetMask};
use crate::{Error, Result};

/// Largest ground set enumerated exhaustively.
pub const EXHAUSTIVE_CAP: usize = 20;

/// All `k`-subsets of `{0..n}` as bit masks, in colexicographic order.
pub fn colex_masks(n: usize, k: usize) -> Vec<u32> {
    assert!(n <= 31, "colex_masks supports n <= 31");
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let limit = 1u64 << n;
    let mut out = Vec::new();
    let mut x: u64 = (1 << k) - 1;
    while x < limit {
        out.push(x as u32);
        // Gosper's hack: next larger word with the same popcount
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

/// Minimum of `|Q - Q|` over every `k`-subset `Q`.
///
/// The witness is the first minimizer in colex order, independent of how
/// the work was split across threads.
pub fn verify_exhaustive<S: GroundSet + Sync + ?Sized>(set: &S, k: usize) -> Result<LocalReport> {
    let n = set.len();
    if n > EXHAUSTIVE_CAP {
        return Err(Error::CapExceeded { size: n, cap: EXHAUSTIVE_CAP });
    }
    if k == 0 || k > n {
        return Err(Error::Invalid(format!("k = {k} outside 1..={n}")));
    }
    let values = set.values();
    let masks = colex_masks(n, k);
    let (min_diff, idx) = masks
        .par_iter()
        .enumerate()
        .map_init(
            || (DiffScratch::for_values(values), Vec::with_capacity(k)),
            |(scratch, buf), (idx, &mask)| {
                buf.clear();
                let mut m = mask;
                while m != 0 {
                    buf.push(values[m.trailing_zeros() as usize]);
                    m &= m - 1;
                }
                (scratch.count(buf), idx)
            },
        )
        .min()
        .expect("at least one subset");
    let witness = SubsetMask::from_word(n, masks[idx] as u64)?;
    Ok(LocalReport {
        k,
        min_diff,
        witness,
        bound: ThresholdBound::new(k as u64),
        holds: threshold_holds(min_diff, k as u64)?,
        subsets_checked: masks.len() as u64,
        mode: Mode::Exhaustive,
        complete: true,
    })
}

/// One exhaustive report for every `k` in `1..=|P|`.
pub fn verify_all_k<S: GroundSet + Sync + ?Sized>(set: &S) -> Result<Vec<LocalReport>> {
    (1..=set.len()).map(|k| verify_exhaustive(set, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_baseline, build_pn, BaselineKind};

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn colex_order_and_count() {
        assert_eq!(colex_masks(4, 2), vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        for n in 0..=12 {
            for k in 0..=n {
                let m = colex_masks(n, k);
                assert_eq!(m.len() as u64, binom(n as u64, k as u64));
                assert!(m.windows(2).all(|w| w[0] < w[1]));
                assert!(m.iter().all(|x| x.count_ones() as usize == k));
            }
        }
    }

    #[test]
    fn small_cases() {
        let p3 = build_pn(3).unwrap();
        let r1 = verify_exhaustive(&p3, 1).unwrap();
        assert_eq!((r1.min_diff, r1.holds), (1, true));
        let r2 = verify_exhaustive(&p3, 2).unwrap();
        assert_eq!((r2.min_diff, r2.holds), (3, true));
        assert_eq!(r2.witness.popcount(), 2);

        let p2 = build_pn(2).unwrap();
        // brute force over the 4 three-element subsets of P_2
        let r3 = verify_exhaustive(&p2, 3).unwrap();
        assert_eq!(r3.min_diff, 7);
        assert_eq!(r3.subsets_checked, 4);
        assert!(r3.holds);
        let r4 = verify_exhaustive(&p2, 4).unwrap();
        assert_eq!(r4.min_diff, 9);
        assert!(r4.holds);
    }

    #[test]
    fn all_k_on_p1() {
        let reports = verify_all_k(&build_pn(1).unwrap()).unwrap();
        assert_eq!(reports.len(), 2);
        assert!(reports.iter().all(|r| r.holds));
    }

    #[test]
    fn ap_baseline_fails_locality() {
        let ap = build_baseline(BaselineKind::ArithmeticProgression, 16, 0).unwrap();
        let r = verify_exhaustive(&ap, 4).unwrap();
        assert_eq!(r.min_diff, 7);
        assert!(!r.holds);
        assert_eq!(r.witness.to_string(), "0,1,2,3");
    }

    #[test]
    fn cap_and_range_errors() {
        let p5 = build_pn(5).unwrap();
        assert!(matches!(verify_exhaustive(&p5, 2), Err(Error::CapExceeded { .. })));
        let p2 = build_pn(2).unwrap();
        assert!(verify_exhaustive(&p2, 0).is_err());
        assert!(verify_exhaustive(&p2, 5).is_err());
    }
}
