//! Exact difference-set counting.
//!
//! Counting uses a per-worker [`DiffScratch`]: a stamped dense table when
//! the difference range is small, a hash set otherwise. Profiles go through
//! a sort-based path so their output order is reproducible.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::construction::{GroundSet, PointSet};
use crate::model::SubsetMask;
use crate::{Error, Result};

/// Largest difference range served by the dense table (entries).
pub const DENSE_LIMIT: usize = 1 << 22;

/// Reusable dedup storage for counting distinct differences.
#[derive(Debug, Clone)]
pub struct DiffScratch {
    span: i64,
    stamps: Vec<u32>,
    epoch: u32,
    sparse: HashSet<i64>,
}

impl DiffScratch {
    /// Scratch for differences in `[-span, span]`.
    pub fn with_span(span: i64) -> Self {
        let span = span.max(0);
        let dense = (2 * span as u128 + 1) <= DENSE_LIMIT as u128;
        DiffScratch {
            span,
            stamps: if dense { vec![0; 2 * span as usize + 1] } else { Vec::new() },
            epoch: 0,
            sparse: HashSet::new(),
        }
    }

    /// Scratch sized for every difference of `values` (and of its subsets).
    pub fn for_values(values: &[i64]) -> Self {
        match (values.iter().min(), values.iter().max()) {
            (Some(lo), Some(hi)) => Self::with_span(hi - lo),
            _ => Self::with_span(0),
        }
    }

    fn is_dense(&self) -> bool {
        !self.stamps.is_empty()
    }

    fn next_epoch(&mut self) {
        if self.epoch == u32::MAX {
            self.stamps.iter_mut().for_each(|s| *s = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
    }

    /// `|{a - b : a in left, b in right}|`.
    pub fn count_cross(&mut self, left: &[i64], right: &[i64]) -> u64 {
        if left.is_empty() || right.is_empty() {
            return 0;
        }
        // dense slots cover |a - b| <= span only
        let in_range = self.is_dense() && {
            let (lmin, lmax) = min_max(left);
            let (rmin, rmax) = min_max(right);
            lmax - rmin <= self.span && rmax - lmin <= self.span
        };
        if in_range {
            self.next_epoch();
            let epoch = self.epoch;
            let base = self.span;
            let mut count = 0u64;
            for &a in left {
                for &b in right {
                    let slot = &mut self.stamps[(a - b + base) as usize];
                    if *slot != epoch {
                        *slot = epoch;
                        count += 1;
                    }
                }
            }
            count
        } else {
            self.sparse.clear();
            for &a in left {
                for &b in right {
                    self.sparse.insert(a - b);
                }
            }
            self.sparse.len() as u64
        }
    }

    pub fn count(&mut self, values: &[i64]) -> u64 {
        self.count_cross(values, values)
    }
}

fn min_max(v: &[i64]) -> (i64, i64) {
    v.iter()
        .fold((i64::MAX, i64::MIN), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// `|A - A|`.
pub fn diff_count<S: GroundSet + ?Sized>(set: &S) -> u64 {
    DiffScratch::for_values(set.values()).count(set.values())
}

/// `|A - A|` via sorting and deduplicating all pairwise differences.
pub fn diff_count_sorted(values: &[i64]) -> u64 {
    let mut diffs: Vec<i64> = values
        .iter()
        .flat_map(|&a| values.iter().map(move |&b| a - b))
        .collect();
    diffs.sort_unstable();
    diffs.dedup();
    diffs.len() as u64
}

/// `|A - B|` for two hypercube sets over the same generators.
pub fn cross_diff_count(a: &PointSet, b: &PointSet) -> Result<u64> {
    if a.levels() != b.levels() {
        return Err(Error::Dimension { left: a.levels(), right: b.levels() });
    }
    Ok(cross_diff_count_values(a.values(), b.values()))
}

pub fn cross_diff_count_values(a: &[i64], b: &[i64]) -> u64 {
    let all: Vec<i64> = a.iter().chain(b).copied().collect();
    DiffScratch::for_values(&all).count_cross(a, b)
}

/// Number of distinct positive differences, `(|A - A| - 1) / 2`.
pub fn distance_count<S: GroundSet + ?Sized>(set: &S) -> u64 {
    if set.is_empty() {
        return 0;
    }
    (diff_count(set) - 1) / 2
}

/// Multiplicity of each difference, keyed by canonical code (difference
/// plus the set's code offset) in ascending order.
pub fn diff_profile<S: GroundSet + ?Sized>(set: &S) -> BTreeMap<i64, u64> {
    let offset = set.code_offset();
    let v = set.values();
    let mut diffs: Vec<i64> = v
        .iter()
        .flat_map(|&a| v.iter().map(move |&b| a - b + offset))
        .collect();
    diffs.sort_unstable();
    let mut out = BTreeMap::new();
    for chunk in diffs.chunk_by(|x, y| x == y) {
        out.insert(chunk[0], chunk.len() as u64);
    }
    out
}

/// `code,count` rows sorted by code, with a header line.
pub fn profile_csv(profile: &BTreeMap<i64, u64>) -> String {
    let mut out = String::from("code,count\n");
    for (code, count) in profile {
        let _ = writeln!(out, "{code},{count}");
    }
    out
}

/// `|Q - Q|` for many subsets, spread over the current rayon pool.
pub fn diff_counts_parallel<S: GroundSet + Sync + ?Sized>(set: &S, masks: &[SubsetMask]) -> Vec<u64> {
    let values = set.values();
    masks
        .par_iter()
        .map_init(
            || (DiffScratch::for_values(values), Vec::new()),
            |(scratch, buf), mask| {
                buf.clear();
                buf.extend(mask.indices().map(|i| values[i]));
                scratch.count(buf)
            },
        )
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_baseline, build_pn, BaselineKind, IntegerSet};
    use crate::model::CoefficientVector;
    use proptest::prelude::*;

    /// Naive pairwise oracle.
    fn naive(a: &[i64], b: &[i64]) -> u64 {
        let mut seen = HashSet::new();
        for &x in a {
            for &y in b {
                seen.insert(x - y);
            }
        }
        seen.len() as u64
    }

    fn ps(levels: usize, bits: &[u64]) -> PointSet {
        PointSet::new(
            levels,
            bits.iter().map(|&b| CoefficientVector::new(b, levels).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn diff_count_examples() {
        assert_eq!(diff_count(&build_pn(0).unwrap()), 1);
        assert_eq!(diff_count(&build_pn(2).unwrap()), 9);
        let p5 = build_pn(5).unwrap();
        assert_eq!(diff_count(&p5), 243);
        assert_eq!(naive(p5.values(), p5.values()), 243);
        for j in 0..=12 {
            assert_eq!(diff_count(&build_pn(j).unwrap()), 3u64.pow(j as u32));
        }
    }

    #[test]
    fn cross_examples() {
        let empty = ps(2, &[]);
        let single = ps(2, &[1]);
        assert_eq!(cross_diff_count(&empty, &single).unwrap(), 0);
        assert_eq!(cross_diff_count(&single, &single).unwrap(), 1);
        // A = {(0,0),(1,0)}, B = {(0,1)}
        let a = ps(2, &[0b00, 0b01]);
        let b = ps(2, &[0b10]);
        assert_eq!(cross_diff_count(&a, &b).unwrap(), 2);
        assert!(cross_diff_count(&a, &ps(3, &[0])).is_err());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance_count(&build_pn(0).unwrap()), 0);
        let p2 = build_pn(2).unwrap();
        let positive: HashSet<i64> = p2
            .values()
            .iter()
            .flat_map(|&a| p2.values().iter().map(move |&b| a - b))
            .filter(|&d| d > 0)
            .collect();
        assert_eq!(positive.len(), 4);
        assert_eq!(distance_count(&p2), 4);
    }

    #[test]
    fn profile_examples() {
        let p0 = build_pn(0).unwrap();
        assert_eq!(diff_profile(&p0).into_iter().collect::<Vec<_>>(), vec![(0, 1)]);
        // P_1: codes 0 (-r1), 1 (zero, twice), 2 (+r1)
        let p1 = build_pn(1).unwrap();
        assert_eq!(
            diff_profile(&p1).into_iter().collect::<Vec<_>>(),
            vec![(0, 1), (1, 2), (2, 1)]
        );
        let ap = build_baseline(BaselineKind::ArithmeticProgression, 6, 0).unwrap();
        let prof = diff_profile(&ap);
        assert_eq!(prof.len(), 11);
        for (d, c) in prof {
            assert_eq!(c, 6 - d.unsigned_abs());
        }
        assert_eq!(
            profile_csv(&diff_profile(&p1)),
            "code,count\n0,1\n1,2\n2,1\n"
        );
    }

    #[test]
    fn sparse_path_matches_naive() {
        let r = build_baseline(BaselineKind::RandomIntegers, 40, 3).unwrap();
        assert_eq!(diff_count(&r), naive(r.values(), r.values()));
        let wide = IntegerSet::new(vec![0, 1, 1 << 40, (1 << 40) + 3]).unwrap();
        assert_eq!(diff_count(&wide), naive(wide.values(), wide.values()));
        assert_eq!(diff_count_sorted(wide.values()), diff_count(&wide));
    }

    #[test]
    fn random_subsets_of_p6_match_oracle() {
        use rand::{Rng, SeedableRng};
        let p6 = build_pn(6).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let masks: Vec<SubsetMask> = (0..100)
            .map(|_| SubsetMask::from_word(64, rng.gen::<u64>()).unwrap())
            .collect();
        let counts = diff_counts_parallel(&p6, &masks);
        for (mask, count) in masks.iter().zip(counts) {
            let vals = p6.select(mask);
            assert_eq!(count, naive(&vals, &vals));
            assert_eq!(count, diff_count_sorted(&vals));
        }
    }

    proptest! {
        #[test]
        fn symmetric_and_odd(vals in proptest::collection::hash_set(-500i64..500, 1..40)) {
            let set = IntegerSet::new(vals.into_iter().collect()).unwrap();
            let c = diff_count(&set);
            prop_assert_eq!(c % 2, 1);
            let prof = diff_profile(&set);
            for (&d, &m) in &prof {
                prop_assert_eq!(prof.get(&-d), Some(&m));
            }
            prop_assert_eq!(prof.values().sum::<u64>(), (set.len() * set.len()) as u64);
        }

        #[test]
        fn cross_is_symmetric_and_monotone(
            a in proptest::collection::vec(0u64..256, 0..30),
            b in proptest::collection::vec(0u64..256, 0..30),
        ) {
            let dedup = |v: Vec<u64>| -> Vec<u64> {
                let mut v = v; v.sort_unstable(); v.dedup(); v
            };
            let a = ps(8, &dedup(a));
            let b = ps(8, &dedup(b));
            prop_assert_eq!(cross_diff_count(&a, &b).unwrap(), cross_diff_count(&b, &a).unwrap());
            prop_assert_eq!(cross_diff_count(&a, &a).unwrap(), if a.is_empty() { 0 } else { diff_count(&a) });
            // A ⊆ A ∪ B implies |A - A| <= |(A ∪ B) - (A ∪ B)|
            let mut union: Vec<u64> = a.elements().iter().chain(b.elements()).map(|e| e.bits()).collect();
            union.sort_unstable(); union.dedup();
            let u = ps(8, &union);
            prop_assert!(diff_count(&a) <= diff_count(&u));
        }
    }
}
