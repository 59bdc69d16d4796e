//! Building `P_n`, its truncations, and integer comparison baselines.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{code_offset, CoefficientVector, SubsetMask, NATIVE_LEVEL_LIMIT};
use crate::{Error, Result};

/// Largest `P_n` this crate will materialize (2^28 points).
pub const MAX_MATERIALIZED_LEVELS: usize = 28;

/// Anything whose elements are distinct integers with faithful differences.
///
/// For hypercube sets the integers are base-3 embeddings, so integer
/// differences are in bijection with trit vectors. `code_offset` shifts a
/// difference to its canonical (non-negative) code.
pub trait GroundSet {
    fn values(&self) -> &[i64];

    fn len(&self) -> usize {
        self.values().len()
    }

    fn is_empty(&self) -> bool {
        self.values().is_empty()
    }

    fn code_offset(&self) -> i64 {
        0
    }

    /// Values of the elements selected by `mask`.
    fn select(&self, mask: &SubsetMask) -> Vec<i64> {
        mask.indices().map(|i| self.values()[i]).collect()
    }
}

/// An ordered, duplicate-free set of hypercube points sharing one level count.
#[derive(Clone, PartialEq, Eq)]
pub struct PointSet {
    levels: usize,
    elements: Vec<CoefficientVector>,
    values: Vec<i64>,
}

impl PointSet {
    pub fn new(levels: usize, elements: Vec<CoefficientVector>) -> Result<Self> {
        if levels > NATIVE_LEVEL_LIMIT {
            return Err(Error::Overflow { levels, limit: NATIVE_LEVEL_LIMIT });
        }
        let mut seen = HashSet::with_capacity(elements.len());
        let mut values = Vec::with_capacity(elements.len());
        for e in &elements {
            if e.levels() != levels {
                return Err(Error::Dimension { left: levels, right: e.levels() });
            }
            if !seen.insert(e.bits()) {
                return Err(Error::Duplicate(format!("{e:?}")));
            }
            values.push(e.embed_base3()? as i64);
        }
        Ok(PointSet { levels, elements, values })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn elements(&self) -> &[CoefficientVector] {
        &self.elements
    }

    pub fn subset(&self, mask: &SubsetMask) -> Result<PointSet> {
        if mask.len() != self.len() {
            return Err(Error::Invalid(format!(
                "mask over {} elements applied to a set of {}",
                mask.len(),
                self.len()
            )));
        }
        PointSet::new(self.levels, mask.indices().map(|i| self.elements[i]).collect())
    }
}

impl GroundSet for PointSet {
    fn values(&self) -> &[i64] {
        &self.values
    }

    fn code_offset(&self) -> i64 {
        code_offset(self.levels)
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointSet")
            .field("levels", &self.levels)
            .field("elements", &self.elements)
            .finish()
    }
}

/// A duplicate-free set of plain integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSet {
    values: Vec<i64>,
}

impl IntegerSet {
    pub fn new(values: Vec<i64>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(values.len());
        for &v in &values {
            if !seen.insert(v) {
                return Err(Error::Duplicate(v.to_string()));
            }
        }
        Ok(IntegerSet { values })
    }
}

impl GroundSet for IntegerSet {
    fn values(&self) -> &[i64] {
        &self.values
    }
}

impl<T: GroundSet + ?Sized> GroundSet for &T {
    fn values(&self) -> &[i64] {
        (**self).values()
    }

    fn code_offset(&self) -> i64 {
        (**self).code_offset()
    }
}

/// `P_levels`: all `2^levels` vertices of the hypercube, ascending by
/// base-3 embedding. `P_0` is the single point standing for the real 1.
pub fn build_pn(levels: usize) -> Result<PointSet> {
    if levels > MAX_MATERIALIZED_LEVELS {
        return Err(Error::Overflow { levels, limit: MAX_MATERIALIZED_LEVELS });
    }
    // bits order and base-3 order coincide: the top set bit dominates both.
    let elements = (0..1u64 << levels)
        .map(|b| CoefficientVector::new(b, levels))
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(levels, elements)
}

/// Levels needed to hold `n` points: `ceil(log2 n)`.
pub fn levels_for(n: usize) -> usize {
    n.next_power_of_two().trailing_zeros() as usize
}

/// The first `n` points of `P_{ceil(log2 n)}` in canonical order.
pub fn build_truncated(n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::Invalid("truncation size must be positive".into()));
    }
    let levels = levels_for(n);
    if levels > MAX_MATERIALIZED_LEVELS {
        return Err(Error::Overflow { levels, limit: MAX_MATERIALIZED_LEVELS });
    }
    let elements = (0..n as u64)
        .map(|b| CoefficientVector::new(b, levels))
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(levels, elements)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaselineKind {
    ArithmeticProgression,
    Sidon,
    RandomIntegers,
}

impl BaselineKind {
    pub fn name(self) -> &'static str {
        match self {
            BaselineKind::ArithmeticProgression => "arithmetic-progression",
            BaselineKind::Sidon => "sidon",
            BaselineKind::RandomIntegers => "random-integers",
        }
    }
}

impl FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arithmetic-progression" | "arithmetic_progression" | "ap" => {
                Ok(BaselineKind::ArithmeticProgression)
            }
            "sidon" => Ok(BaselineKind::Sidon),
            "random-integers" | "random_integers" | "random" => Ok(BaselineKind::RandomIntegers),
            other => Err(Error::Invalid(format!("unknown baseline kind {other:?}"))),
        }
    }
}

/// Comparison sets of size `n`:
///
/// - arithmetic progression `{0, ..., n-1}`;
/// - the greedy (Mian–Chowla) Sidon set `1, 2, 4, 8, 13, 21, ...`;
/// - `n` distinct uniform draws from `[0, n^3]`, sorted, deterministic per `seed`.
pub fn build_baseline(kind: BaselineKind, n: usize, seed: u64) -> Result<IntegerSet> {
    if n == 0 {
        return Err(Error::Invalid("baseline size must be positive".into()));
    }
    let values = match kind {
        BaselineKind::ArithmeticProgression => (0..n as i64).collect(),
        BaselineKind::Sidon => mian_chowla(n),
        BaselineKind::RandomIntegers => {
            let top = (n as i64)
                .checked_pow(3)
                .ok_or_else(|| Error::Invalid(format!("n = {n} too large for n^3 range")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut seen = HashSet::with_capacity(n);
            let mut out = Vec::with_capacity(n);
            while out.len() < n {
                let v = rng.gen_range(0..=top);
                if seen.insert(v) {
                    out.push(v);
                }
            }
            out.sort_unstable();
            out
        }
    };
    IntegerSet::new(values)
}

fn mian_chowla(n: usize) -> Vec<i64> {
    let mut set: Vec<i64> = Vec::with_capacity(n);
    let mut diffs: HashSet<i64> = HashSet::new();
    let mut candidate = 1i64;
    while set.len() < n {
        let fresh: Vec<i64> = set.iter().map(|&s| candidate - s).collect();
        let distinct = fresh.iter().all(|d| !diffs.contains(d));
        if distinct {
            diffs.extend(fresh);
            set.push(candidate);
        }
        candidate += 1;
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pn_sizes() {
        assert_eq!(build_pn(0).unwrap().len(), 1);
        assert_eq!(build_pn(0).unwrap().values(), &[0]);
        assert_eq!(build_pn(1).unwrap().len(), 2);
        for j in 0..=12 {
            assert_eq!(build_pn(j).unwrap().len(), 1 << j);
        }
        let p4 = build_pn(4).unwrap();
        let distinct: HashSet<_> = p4.values().iter().collect();
        assert_eq!(distinct.len(), 16);
        assert!(p4.values().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn pn_recursion_fidelity() {
        for j in 1..=10 {
            let pj = build_pn(j).unwrap();
            let prev = build_pn(j - 1).unwrap();
            let low: Vec<_> = pj
                .elements()
                .iter()
                .filter(|e| e.bit(j - 1) == 0)
                .copied()
                .collect();
            let lifted: Vec<_> = prev.elements().iter().map(|e| e.lift(j).unwrap()).collect();
            assert_eq!(low, lifted);
            // the other half is r_j + P_{j-1}
            let r_j = 3i64.pow(j as u32 - 1);
            let high: Vec<i64> = pj.values()[1 << (j - 1)..].to_vec();
            let shifted: Vec<i64> = prev.values().iter().map(|v| v + r_j).collect();
            assert_eq!(high, shifted);
        }
    }

    #[test]
    fn pn_policy() {
        assert!(matches!(build_pn(29), Err(Error::Overflow { .. })));
    }

    #[test]
    fn truncated_sets() {
        assert_eq!(build_truncated(4).unwrap(), build_pn(2).unwrap());
        let t3 = build_truncated(3).unwrap();
        assert_eq!(t3.len(), 3);
        assert_eq!(t3.levels(), 2);
        let t1 = build_truncated(1).unwrap();
        assert_eq!(t1.len(), 1);
        assert_eq!(t1.levels(), 0);
        assert!(build_truncated(0).is_err());
    }

    #[test]
    fn point_set_validation() {
        let a = CoefficientVector::new(1, 2).unwrap();
        let b = CoefficientVector::new(1, 3).unwrap();
        assert!(matches!(PointSet::new(2, vec![a, a]), Err(Error::Duplicate(_))));
        assert!(matches!(PointSet::new(2, vec![a, b]), Err(Error::Dimension { .. })));
        assert!(IntegerSet::new(vec![1, 2, 1]).is_err());
    }

    #[test]
    fn baselines() {
        let ap = build_baseline(BaselineKind::ArithmeticProgression, 5, 0).unwrap();
        assert_eq!(ap.values(), &[0, 1, 2, 3, 4]);
        let sidon = build_baseline(BaselineKind::Sidon, 8, 0).unwrap();
        assert_eq!(sidon.values(), &[1, 2, 4, 8, 13, 21, 31, 45]);
        let r1 = build_baseline(BaselineKind::RandomIntegers, 10, 1).unwrap();
        let r2 = build_baseline(BaselineKind::RandomIntegers, 10, 1).unwrap();
        let r3 = build_baseline(BaselineKind::RandomIntegers, 10, 2).unwrap();
        assert_eq!(r1, r2);
        assert_ne!(r1, r3);
        assert!(r1.values().iter().all(|&v| (0..=1000).contains(&v)));
        assert_eq!("sidon".parse::<BaselineKind>().unwrap(), BaselineKind::Sidon);
        assert!("nope".parse::<BaselineKind>().is_err());
    }

    #[test]
    fn sidon_has_no_repeated_positive_difference() {
        for n in 1..=50 {
            let s = build_baseline(BaselineKind::Sidon, n, 0).unwrap();
            let mut seen = HashSet::new();
            for (i, &a) in s.values().iter().enumerate() {
                for &b in &s.values()[..i] {
                    assert!(seen.insert(a - b), "n={n}: repeated difference {}", a - b);
                }
            }
        }
    }
}
