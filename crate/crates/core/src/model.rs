//! Exact representations of hypercube points, their differences and subsets.
//!
//! The generators `r_1, ..., r_n` are modelled by `r_j = 3^{j-1}`. A point of
//! `P_n` is a 0/1 coefficient vector and embeds as `Σ bits_j 3^j`; a
//! difference of two points has digits in `{-1, 0, 1}`, and balanced base-3
//! expansions are unique, so distinct coefficient (or trit) vectors always
//! map to distinct integers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

use crate::interval::Interval;
use crate::powers::{log2_3_enclosure, p_enclosure, PowerEvaluator, PowerSum};
use crate::{Error, Result};

/// Bit width of a [`CoefficientVector`].
pub const MAX_LEVELS: usize = 64;

/// Largest level count whose base-3 embedding fits the native `i64` path
/// (`3^39 < 2^63`). Beyond it use [`CoefficientVector::embed_base3_big`].
pub const NATIVE_LEVEL_LIMIT: usize = 39;

/// `3^j` for `j <= NATIVE_LEVEL_LIMIT`.
pub const fn pow3(j: usize) -> i64 {
    let mut acc = 1i64;
    let mut i = 0;
    while i < j {
        acc *= 3;
        i += 1;
    }
    acc
}

/// Offset turning a balanced base-3 value into its canonical code:
/// `(3^n - 1) / 2`.
pub const fn code_offset(levels: usize) -> i64 {
    (pow3(levels) - 1) / 2
}

/// A vertex of `{0,1}^n`; bit `j` is the coefficient of generator `r_{j+1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoefficientVector {
    bits: u64,
    levels: u8,
}

impl CoefficientVector {
    pub fn new(bits: u64, levels: usize) -> Result<Self> {
        if levels > MAX_LEVELS {
            return Err(Error::Overflow { levels, limit: MAX_LEVELS });
        }
        if levels < 64 && bits >> levels != 0 {
            return Err(Error::Invalid(format!(
                "bit pattern {bits:#b} does not fit in {levels} levels"
            )));
        }
        Ok(CoefficientVector { bits, levels: levels as u8 })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut word = 0u64;
        for (j, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 if j < 64 => word |= 1 << j,
                1 => {}
                _ => return Err(Error::Invalid(format!("bit value {b} at position {j}"))),
            }
        }
        Self::new(word, bits.len())
    }

    pub fn zero(levels: usize) -> Result<Self> {
        Self::new(0, levels)
    }

    pub fn levels(&self) -> usize {
        self.levels as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn bit(&self, j: usize) -> u8 {
        ((self.bits >> j) & 1) as u8
    }

    /// The same point viewed with `levels` generators (high bits zero).
    pub fn lift(&self, levels: usize) -> Result<Self> {
        Self::new(self.bits, levels)
    }

    /// `Σ bits_j 3^j`, refusing level counts beyond the native policy.
    pub fn embed_base3(&self) -> Result<u64> {
        let n = self.levels();
        if n > NATIVE_LEVEL_LIMIT {
            return Err(Error::Overflow { levels: n, limit: NATIVE_LEVEL_LIMIT });
        }
        Ok((0..n)
            .filter(|&j| self.bit(j) == 1)
            .map(|j| pow3(j) as u64)
            .sum())
    }

    /// Big-integer embedding, valid for every level count.
    pub fn embed_base3_big(&self) -> BigUint {
        let three = BigUint::from(3u8);
        (0..self.levels())
            .filter(|&j| self.bit(j) == 1)
            .map(|j| three.pow(j as u32))
            .sum()
    }
}

impl fmt::Debug for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for j in 0..self.levels() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.bit(j))?;
        }
        write!(f, ")")
    }
}

/// Free-function form of [`CoefficientVector::embed_base3`].
pub fn embed_base3(v: &CoefficientVector) -> Result<u64> {
    v.embed_base3()
}

/// An element of `P_n - P_n`: one trit in `{-1, 0, 1}` per generator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DifferenceVector {
    trits: Vec<i8>,
}

impl DifferenceVector {
    pub fn from_trits(trits: Vec<i8>) -> Result<Self> {
        if trits.len() > MAX_LEVELS {
            return Err(Error::Overflow { levels: trits.len(), limit: MAX_LEVELS });
        }
        if let Some(t) = trits.iter().find(|t| !(-1..=1).contains(*t)) {
            return Err(Error::Invalid(format!("trit {t} outside {{-1,0,1}}")));
        }
        Ok(DifferenceVector { trits })
    }

    /// Inverse of [`DifferenceVector::canonical_code`].
    pub fn from_code(mut code: u128, levels: usize) -> Result<Self> {
        if levels > MAX_LEVELS {
            return Err(Error::Overflow { levels, limit: MAX_LEVELS });
        }
        let mut trits = Vec::with_capacity(levels);
        for _ in 0..levels {
            trits.push((code % 3) as i8 - 1);
            code /= 3;
        }
        if code != 0 {
            return Err(Error::Invalid(format!("code out of range for {levels} levels")));
        }
        Ok(DifferenceVector { trits })
    }

    pub fn levels(&self) -> usize {
        self.trits.len()
    }

    pub fn trits(&self) -> &[i8] {
        &self.trits
    }

    pub fn trit(&self, j: usize) -> i8 {
        self.trits[j]
    }

    /// `Σ (trit_j + 1) 3^j`, a bijection onto `[0, 3^n)`.
    pub fn canonical_code(&self) -> u128 {
        self.trits
            .iter()
            .rev()
            .fold(0u128, |acc, &t| acc * 3 + (t + 1) as u128)
    }

    pub fn negate(&self) -> Self {
        DifferenceVector {
            trits: self.trits.iter().map(|t| -t).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.trits.iter().all(|&t| t == 0)
    }
}

impl fmt::Debug for DifferenceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.trits)
    }
}

/// `u - v` as a trit vector.
pub fn difference(u: &CoefficientVector, v: &CoefficientVector) -> Result<DifferenceVector> {
    if u.levels() != v.levels() {
        return Err(Error::Dimension { left: u.levels(), right: v.levels() });
    }
    Ok(DifferenceVector {
        trits: (0..u.levels())
            .map(|j| u.bit(j) as i8 - v.bit(j) as i8)
            .collect(),
    })
}

/// Trit `j` of the balanced base-3 expansion of `value`.
pub fn balanced_trit(value: i64, j: usize) -> i8 {
    let mut v = value;
    for _ in 0..j {
        v = (v - balanced_digit(v)) / 3;
    }
    balanced_digit(v) as i8
}

fn balanced_digit(v: i64) -> i64 {
    match v.rem_euclid(3) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// A subset of an indexed ground set, one bit per element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    words: Vec<u64>,
    len: usize,
    popcount: usize,
}

impl SubsetMask {
    pub fn empty(len: usize) -> Self {
        SubsetMask {
            words: vec![0; len.div_ceil(64)],
            len,
            popcount: 0,
        }
    }

    pub fn full(len: usize) -> Self {
        Self::from_indices(len, 0..len).expect("indices in range")
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut m = Self::empty(len);
        for i in indices {
            if i >= len {
                return Err(Error::Invalid(format!("index {i} outside ground set of {len}")));
            }
            m.insert(i);
        }
        Ok(m)
    }

    /// Mask from the low `len` bits of a word (`len <= 64`).
    pub fn from_word(len: usize, word: u64) -> Result<Self> {
        if len > 64 || (len < 64 && word >> len != 0) {
            return Err(Error::Invalid(format!("word {word:#x} does not fit {len} elements")));
        }
        let mut m = Self::empty(len);
        if len > 0 {
            m.words[0] = word;
        }
        m.popcount = word.count_ones() as usize;
        Ok(m)
    }

    fn insert(&mut self, i: usize) {
        let (w, b) = (i / 64, i % 64);
        if self.words[w] >> b & 1 == 0 {
            self.words[w] |= 1 << b;
            self.popcount += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.popcount == 0
    }

    pub fn popcount(&self) -> usize {
        self.popcount
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    /// Parses a comma-separated index list.
    pub fn parse_indices(len: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty(len));
        }
        let idx = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Invalid(format!("bad index {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(len, idx)
    }
}

impl fmt::Display for SubsetMask {
    /// Comma-separated element indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.indices() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetMask({}/{}: {})", self.popcount, self.len, self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentName {
    /// `p = log_4 3`
    P,
    /// `log_2 3 = 2p`
    Log2Of3,
}

/// A rigorous enclosure of one of the two irrational exponents.
#[derive(Clone, Debug)]
pub struct ExactExponent {
    name: ExponentName,
    enclosure: Interval,
}

impl ExactExponent {
    /// Working precision of the stored enclosures; width is far below 1e-30.
    pub const PRECISION: u32 = 128;

    pub fn p() -> Self {
        ExactExponent {
            name: ExponentName::P,
            enclosure: p_enclosure(Self::PRECISION),
        }
    }

    pub fn log2_3() -> Self {
        ExactExponent {
            name: ExponentName::Log2Of3,
            enclosure: log2_3_enclosure(Self::PRECISION),
        }
    }

    pub fn name(&self) -> ExponentName {
        self.name
    }

    pub fn enclosure(&self) -> &Interval {
        &self.enclosure
    }
}

/// Decides `m >= k^{log2 3}`.
///
/// `k^{log2 3} = (k^2)^p`; for `k = 2^s` this is the integer `3^s` and the
/// comparison is exact. Other `k` go through interval evaluation with
/// precision doubling, failing with [`Error::Undecidable`] at the cap.
pub fn threshold_holds(m: u64, k: u64) -> Result<bool> {
    threshold_holds_with(&mut PowerEvaluator::new(), m, k)
}

pub fn threshold_holds_with(ev: &mut PowerEvaluator, m: u64, k: u64) -> Result<bool> {
    if m == 0 || k == 0 {
        return Err(Error::Invalid("threshold_holds needs m >= 1 and k >= 1".into()));
    }
    if k > u32::MAX as u64 {
        return Err(Error::Invalid(format!("k = {k} too large")));
    }
    Ok(ev.compare(&PowerSum::integer(m as i128), &PowerSum::power(k * k))? != Ordering::Less)
}

/// Exact value of `k^{log2 3}` when `k` is a power of two.
pub fn exact_threshold(k: u64) -> Option<u64> {
    if k.is_power_of_two() {
        Some(3u64.pow(k.trailing_zeros()))
    } else {
        None
    }
}

/// Enclosure of `k^{log2 3}` at `prec` bits.
pub fn threshold_enclosure(k: u64, prec: u32) -> Interval {
    match exact_threshold(k) {
        Some(v) => Interval::from_int(prec, v as i64),
        None => {
            let k = Interval::from_int(prec, k as i64);
            k.pow(&log2_3_enclosure(prec)).expect("k > 0")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn cv(bits: &[u8]) -> CoefficientVector {
        CoefficientVector::from_bits(bits).unwrap()
    }

    #[test]
    fn embed_examples() {
        assert_eq!(cv(&[0, 0, 0]).embed_base3().unwrap(), 0);
        assert_eq!(cv(&[1, 0, 0]).embed_base3().unwrap(), 1);
        // 3^0 + 3^1 by direct digit sum
        assert_eq!(cv(&[1, 1, 0]).embed_base3().unwrap(), 1 + 3);
    }

    #[test]
    fn embed_overflow_policy() {
        let v = CoefficientVector::new(1 << 40, 41).unwrap();
        assert!(matches!(v.embed_base3(), Err(Error::Overflow { .. })));
        assert_eq!(v.embed_base3_big(), BigUint::from(3u8).pow(40));
        let w = CoefficientVector::new(u64::MAX >> 25, 39).unwrap();
        assert_eq!(
            BigUint::from(w.embed_base3().unwrap()),
            w.embed_base3_big()
        );
    }

    #[test]
    fn vector_rejects_wide_bits() {
        assert!(CoefficientVector::new(0b100, 2).is_err());
        assert!(CoefficientVector::new(0, 65).is_err());
        assert!(CoefficientVector::from_bits(&[0, 2]).is_err());
    }

    #[test]
    fn difference_examples() {
        let u = cv(&[1, 0]);
        let v = cv(&[0, 1]);
        assert_eq!(difference(&u, &v).unwrap().trits(), &[1, -1]);
        let z = difference(&u, &u).unwrap();
        assert!(z.is_zero());
        // all-zero trits encode to (3^n - 1) / 2
        assert_eq!(z.canonical_code(), 4);
        assert!(matches!(
            difference(&u, &cv(&[0, 1, 0])),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn p2_has_nine_differences() {
        let pts: Vec<_> = (0..4).map(|b| CoefficientVector::new(b, 2).unwrap()).collect();
        let codes: HashSet<u128> = pts
            .iter()
            .flat_map(|u| pts.iter().map(move |v| difference(u, v).unwrap().canonical_code()))
            .collect();
        assert_eq!(codes.len(), 9);
    }

    #[test]
    fn injectivity_up_to_twelve_levels() {
        for n in 0..=12usize {
            let embedded: HashSet<u64> = (0..1u64 << n)
                .map(|b| CoefficientVector::new(b, n).unwrap().embed_base3().unwrap())
                .collect();
            assert_eq!(embedded.len(), 1 << n);
        }
        for n in 0..=8usize {
            let total = 3u128.pow(n as u32);
            let codes: HashSet<u128> = (0..total)
                .map(|c| DifferenceVector::from_code(c, n).unwrap().canonical_code())
                .collect();
            assert_eq!(codes.len() as u128, total);
        }
    }

    #[test]
    fn balanced_trits_match_vectors() {
        let u = cv(&[1, 0, 1, 0]);
        let v = cv(&[0, 1, 1, 1]);
        let d = u.embed_base3().unwrap() as i64 - v.embed_base3().unwrap() as i64;
        let dv = difference(&u, &v).unwrap();
        for j in 0..4 {
            assert_eq!(balanced_trit(d, j), dv.trit(j));
        }
    }

    #[test]
    fn subset_mask_basics() {
        let m = SubsetMask::from_indices(70, [0, 3, 65]).unwrap();
        assert_eq!(m.popcount(), 3);
        assert!(m.contains(65) && !m.contains(64));
        assert_eq!(m.to_string(), "0,3,65");
        assert_eq!(SubsetMask::parse_indices(70, "0,3,65").unwrap(), m);
        assert!(SubsetMask::from_indices(4, [4]).is_err());
        assert_eq!(SubsetMask::from_word(5, 0b10110).unwrap().popcount(), 3);
        assert!(SubsetMask::from_word(3, 0b1000).is_err());
    }

    #[test]
    fn threshold_examples() {
        assert!(threshold_holds(3, 2).unwrap());
        assert!(!threshold_holds(2, 2).unwrap());
        assert!(threshold_holds(9, 4).unwrap());
        assert!(!threshold_holds(8, 4).unwrap());
        // 3^{log2 3} = 5.70452249469111763535... (mpmath, 60 digits)
        assert!(threshold_holds(6, 3).unwrap());
        assert!(!threshold_holds(5, 3).unwrap());
        assert!(threshold_holds(1, 1).unwrap());
        assert!(threshold_holds(0, 1).is_err());
    }

    #[test]
    fn exponent_enclosures() {
        // ln 3 / ln 4 and ln 3 / ln 2 to 40 digits (mpmath)
        let p_ref = rug::Float::with_val(
            256,
            rug::Float::parse("0.7924812503605780907268694719739082543799").unwrap(),
        );
        let l_ref = rug::Float::with_val(
            256,
            rug::Float::parse("1.584962500721156181453738943947816508759").unwrap(),
        );
        let p = ExactExponent::p();
        let l = ExactExponent::log2_3();
        assert_eq!(p.name(), ExponentName::P);
        assert!(p.enclosure().contains(&p_ref));
        assert!(l.enclosure().contains(&l_ref));
        assert!(p.enclosure().width() <= 1e-30);
        assert!(l.enclosure().width() <= 1e-30);
        // 2p and log2 3 agree at interval level
        let two_p = p.enclosure().scale(2);
        let slack = Interval::from_f64_bounds(128, -1e-35, 1e-35).unwrap();
        assert!(two_p.subset_of(&(l.enclosure() + &slack)));
        assert!(l.enclosure().subset_of(&(&two_p + &slack)));
    }

    #[test]
    fn threshold_enclosure_exact_for_powers_of_two() {
        let e = threshold_enclosure(8, 64);
        assert_eq!((e.lo_f64(), e.hi_f64()), (27.0, 27.0));
        let e = threshold_enclosure(3, 64);
        assert!(e.lo_f64() < 5.704522494691118 && e.hi_f64() > 5.704522494691117);
    }

    /// 200-digit oracle: `m >= k^{log2 3}` iff `ln m >= log2 3 * ln k`,
    /// evaluated with round-to-nearest at ~665 bits.
    fn oracle(m: u64, k: u64) -> bool {
        use rug::Float;
        if k.is_power_of_two() {
            // zero-margin case: k^{log2 3} = 3^{log2 k}
            return m >= 3u64.pow(k.trailing_zeros());
        }
        let prec = 665;
        let lm = Float::with_val(prec, m).ln();
        let lk = Float::with_val(prec, k).ln();
        let l23 = Float::with_val(prec, 3).ln() / Float::with_val(prec, 2).ln();
        lm >= l23 * lk
    }

    proptest! {
        #[test]
        fn antisymmetry(a in 0u64..1 << 12, b in 0u64..1 << 12) {
            let u = CoefficientVector::new(a, 12).unwrap();
            let v = CoefficientVector::new(b, 12).unwrap();
            prop_assert_eq!(difference(&u, &v).unwrap(), difference(&v, &u).unwrap().negate());
        }

        #[test]
        fn code_roundtrip(code in 0u128..3u128.pow(20)) {
            let d = DifferenceVector::from_code(code, 20).unwrap();
            prop_assert_eq!(d.canonical_code(), code);
        }

        #[test]
        fn threshold_matches_oracle(m in 1u64..=100_000, k in 1u64..=64) {
            prop_assert_eq!(threshold_holds(m, k).unwrap(), oracle(m, k));
        }
    }

    #[test]
    fn threshold_boundary_neighbourhood_matches_oracle() {
        for k in 1..=64u64 {
            let centre = threshold_enclosure(k, 64).mid_f64().floor() as u64;
            for m in centre.saturating_sub(2).max(1)..=centre + 2 {
                assert_eq!(threshold_holds(m, k).unwrap(), oracle(m, k), "m={m} k={k}");
            }
        }
    }
}
