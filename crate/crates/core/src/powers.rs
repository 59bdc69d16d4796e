//! Exact-aware comparison of sums of `m^p` terms with `p = log_4 3`.
//!
//! Every positive integer factors uniquely as `m = 4^s * r` with `4 ∤ r`,
//! and then `m^p = 3^s * r^p`. A [`PowerSum`] stores its terms in that
//! normal form, so two sums that are formally identical compare `Equal`
//! without any floating point (this is what makes `4^p = 3` and the
//! zero-margin cases of the local bound decidable). Sums that differ
//! formally are separated by interval evaluation with precision doubling,
//! and an [`Error::Undecidable`] is raised if the cap is reached first.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use rug::Float;

use crate::interval::{Interval, DEFAULT_PRECISION};
use crate::{Error, Result};

/// Default escalation cap in decimal digits.
pub const DEFAULT_PRECISION_CAP_DIGITS: u32 = 512;

/// Environment variable overriding the escalation cap (decimal digits).
pub const PRECISION_CAP_ENV: &str = "DIFFSET_PRECISION_CAP";

/// Escalation cap in bits, honouring `DIFFSET_PRECISION_CAP`.
pub fn precision_cap_bits() -> u32 {
    let digits = std::env::var(PRECISION_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .filter(|&d| d > 0)
        .unwrap_or(DEFAULT_PRECISION_CAP_DIGITS);
    digits_to_bits(digits)
}

pub fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32
}

/// Enclosure of `p = ln 3 / ln 4`.
pub fn p_enclosure(prec: u32) -> Interval {
    let ln3 = Interval::ln_of(prec, 3).expect("ln 3");
    let ln4 = Interval::ln_of(prec, 4).expect("ln 4");
    ln3.div(&ln4).expect("ln 4 > 0")
}

/// Enclosure of `log2 3 = ln 3 / ln 2`.
pub fn log2_3_enclosure(prec: u32) -> Interval {
    let ln3 = Interval::ln_of(prec, 3).expect("ln 3");
    let ln2 = Interval::ln_of(prec, 2).expect("ln 2");
    ln3.div(&ln2).expect("ln 2 > 0")
}

/// Splits `m > 0` as `(s, r)` with `m = 4^s * r` and `4 ∤ r`.
pub fn split_fours(mut m: u64) -> (u32, u64) {
    debug_assert!(m > 0);
    let mut s = 0;
    while m.is_multiple_of(4) {
        m /= 4;
        s += 1;
    }
    (s, m)
}

/// A formal sum `Σ c_r * r^p` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PowerSum {
    terms: BTreeMap<u64, i128>,
}

impl PowerSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// The constant `c` (stored as `c * 1^p`).
    pub fn integer(c: i128) -> Self {
        let mut s = Self::new();
        s.add_integer(c);
        s
    }

    /// The single term `m^p`.
    pub fn power(m: u64) -> Self {
        let mut s = Self::new();
        s.add_power(m);
        s
    }

    pub fn add_integer(&mut self, c: i128) -> &mut Self {
        self.accumulate(1, c);
        self
    }

    /// Adds `m^p`; `0^p = 0` contributes nothing.
    pub fn add_power(&mut self, m: u64) -> &mut Self {
        self.add_power_times(m, 1)
    }

    pub fn add_power_times(&mut self, m: u64, times: i128) -> &mut Self {
        if m == 0 || times == 0 {
            return self;
        }
        let (s, r) = split_fours(m);
        self.accumulate(r, times * 3i128.pow(s));
        self
    }

    fn accumulate(&mut self, r: u64, c: i128) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(r).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&r);
        }
    }

    pub fn minus(&self, other: &PowerSum) -> PowerSum {
        let mut out = self.clone();
        for (&r, &c) in &other.terms {
            out.accumulate(r, -c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value, when the sum is an integer.
    pub fn exact_value(&self) -> Option<i128> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&1).copied(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, i128)> + '_ {
        self.terms.iter().map(|(&r, &c)| (r, c))
    }
}

/// Evaluates and compares [`PowerSum`]s, caching `r^p` at the base precision.
#[derive(Debug)]
pub struct PowerEvaluator {
    cap_bits: u32,
    cache: HashMap<u64, Interval>,
    p_base: Interval,
}

impl Default for PowerEvaluator {
    fn default() -> Self {
        Self::new()
    }
}

impl PowerEvaluator {
    pub fn new() -> Self {
        Self::with_cap_bits(precision_cap_bits())
    }

    pub fn with_cap_bits(cap_bits: u32) -> Self {
        PowerEvaluator {
            cap_bits: cap_bits.max(DEFAULT_PRECISION),
            cache: HashMap::new(),
            p_base: p_enclosure(DEFAULT_PRECISION),
        }
    }

    pub fn cap_bits(&self) -> u32 {
        self.cap_bits
    }

    /// Enclosure of `r^p` at `prec` bits.
    pub fn power(&mut self, r: u64, prec: u32) -> Interval {
        if r == 1 {
            return Interval::from_int(prec, 1);
        }
        let compute = |p: &Interval| {
            (p * &Interval::ln_of(prec, r).expect("r > 0")).exp()
        };
        if prec == DEFAULT_PRECISION {
            let p = &self.p_base;
            return self.cache.entry(r).or_insert_with(|| compute(p)).clone();
        }
        compute(&p_enclosure(prec))
    }

    /// Enclosure of the sum at `prec` bits.
    pub fn enclose(&mut self, sum: &PowerSum, prec: u32) -> Interval {
        let mut acc = Interval::from_int(prec, 0);
        for (r, c) in sum.terms() {
            let coeff = Interval::point(Float::with_val(128, c));
            acc = &acc + &(&coeff * &self.power(r, prec));
        }
        acc
    }

    /// Decides the order of `lhs` and `rhs`.
    pub fn compare(&mut self, lhs: &PowerSum, rhs: &PowerSum) -> Result<Ordering> {
        let diff = lhs.minus(rhs);
        if let Some(v) = diff.exact_value() {
            return Ok(v.cmp(&0));
        }
        let mut prec = DEFAULT_PRECISION;
        loop {
            let e = self.enclose(&diff, prec);
            if e.is_positive() {
                return Ok(Ordering::Greater);
            }
            if e.is_negative() {
                return Ok(Ordering::Less);
            }
            if prec >= self.cap_bits {
                return Err(Error::Undecidable {
                    bits: prec,
                    what: format!("sign of {diff:?}"),
                });
            }
            prec = (prec * 2).min(self.cap_bits);
        }
    }

    /// `lhs >= rhs`.
    pub fn at_least(&mut self, lhs: &PowerSum, rhs: &PowerSum) -> Result<bool> {
        Ok(self.compare(lhs, rhs)? != Ordering::Less)
    }
}
