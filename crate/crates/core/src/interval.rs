//! Closed intervals over MPFR floats with outward (directed) rounding.
//!
//! Every operation returns an enclosure of the exact image: lower endpoints
//! are rounded toward -inf and upper endpoints toward +inf. The working
//! precision of a result is the larger of its operands' precisions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::AssignRound;
use rug::{Float, Rational};

use crate::{Error, Result};

/// Starting precision (bits) for interval evaluations.
pub const DEFAULT_PRECISION: u32 = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

fn down<T>(prec: u32, val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, Round::Down).0
}

fn up<T>(prec: u32, val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, Round::Up).0
}

fn min_of(mut v: Vec<Float>) -> Float {
    let first = v.remove(0);
    v.into_iter().fold(first, |acc, x| if x < acc { x } else { acc })
}

fn max_of(mut v: Vec<Float>) -> Float {
    let first = v.remove(0);
    v.into_iter().fold(first, |acc, x| if x > acc { x } else { acc })
}

impl Interval {
    /// Builds `[lo, hi]`; rejects NaN endpoints and `lo > hi`.
    pub fn new(lo: Float, hi: Float) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::Invalid("NaN interval endpoint".into()));
        }
        if lo > hi {
            return Err(Error::Invalid(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval holding an exactly representable value.
    pub fn point(value: Float) -> Self {
        Interval { lo: value.clone(), hi: value }
    }

    /// Exact enclosure of an `f64` (lossless for `prec >= 53`).
    pub fn from_f64(prec: u32, value: f64) -> Self {
        Self::point(Float::with_val(prec.max(53), value))
    }

    pub fn from_f64_bounds(prec: u32, lo: f64, hi: f64) -> Result<Self> {
        Self::new(
            Float::with_val(prec.max(53), lo),
            Float::with_val(prec.max(53), hi),
        )
    }

    /// Enclosure of an integer, exact when it fits in `prec` bits.
    pub fn from_int(prec: u32, value: i64) -> Self {
        Interval {
            lo: down(prec, value),
            hi: up(prec, value),
        }
    }

    /// Enclosure of the rational `num / den`.
    pub fn from_ratio(prec: u32, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Invalid("zero denominator".into()));
        }
        let q = Rational::from((num, den));
        Ok(Interval {
            lo: down(prec, &q),
            hi: up(prec, &q),
        })
    }

    /// Enclosure of `ln(n)` for a positive integer `n`.
    pub fn ln_of(prec: u32, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("ln(0)".into()));
        }
        let x = Float::with_val(64, n);
        Ok(Interval {
            lo: down(prec, x.ln_ref()),
            hi: up(prec, x.ln_ref()),
        })
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    /// Lower endpoint rounded down to `f64`.
    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    /// Upper endpoint rounded up to `f64`.
    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    pub fn mid_f64(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> Float {
        up(self.prec(), &self.hi - &self.lo)
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    /// True iff every point of the interval is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.lo > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0
    }

    /// True iff `self` lies inside `other`.
    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// The same set of reals (widened outward if `prec` is lower).
    pub fn to_prec(&self, prec: u32) -> Interval {
        Interval {
            lo: down(prec, &self.lo),
            hi: up(prec, &self.hi),
        }
    }

    /// Splits at a point inside the interval; `None` when no float lies
    /// strictly between the endpoints.
    pub fn bisect(&self) -> Option<(Interval, Interval)> {
        let prec = self.prec();
        let mid = down(prec, &self.lo + &self.hi) / 2u32;
        if mid <= self.lo || mid >= self.hi {
            return None;
        }
        Some((
            Interval { lo: self.lo.clone(), hi: mid.clone() },
            Interval { lo: mid, hi: self.hi.clone() },
        ))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: if self.lo <= other.lo { self.lo.clone() } else { other.lo.clone() },
            hi: if self.hi >= other.hi { self.hi.clone() } else { other.hi.clone() },
        }
    }

    /// Enclosure of `max(x, y)` for `x` in `self`, `y` in `other`.
    pub fn max(&self, other: &Interval) -> Interval {
        Interval {
            lo: if self.lo >= other.lo { self.lo.clone() } else { other.lo.clone() },
            hi: if self.hi >= other.hi { self.hi.clone() } else { other.hi.clone() },
        }
    }

    /// Enclosure of `|x|`.
    pub fn abs(&self) -> Interval {
        let prec = self.prec();
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            -self
        } else {
            let neg_lo = up(prec, -&self.lo);
            Interval {
                lo: Float::with_val(prec, 0),
                hi: if neg_lo > self.hi { neg_lo } else { self.hi.clone() },
            }
        }
    }

    pub fn sqr(&self) -> Interval {
        let prec = self.prec();
        if self.lo >= 0 {
            Interval {
                lo: down(prec, self.lo.square_ref()),
                hi: up(prec, self.hi.square_ref()),
            }
        } else if self.hi <= 0 {
            Interval {
                lo: down(prec, self.hi.square_ref()),
                hi: up(prec, self.lo.square_ref()),
            }
        } else {
            let a = up(prec, self.lo.square_ref());
            let b = up(prec, self.hi.square_ref());
            Interval {
                lo: Float::with_val(prec, 0),
                hi: if a > b { a } else { b },
            }
        }
    }

    pub fn scale(&self, factor: i64) -> Interval {
        self * &Interval::from_int(self.prec(), factor)
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        if other.contains_zero() {
            return Err(Error::Invalid("interval division by an interval containing 0".into()));
        }
        let prec = self.prec().max(other.prec());
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lows = pairs.iter().map(|(a, b)| down(prec, *a / *b)).collect();
        let highs = pairs.iter().map(|(a, b)| up(prec, *a / *b)).collect();
        Ok(Interval {
            lo: min_of(lows),
            hi: max_of(highs),
        })
    }

    pub fn exp(&self) -> Interval {
        let prec = self.prec();
        Interval {
            lo: down(prec, self.lo.exp_ref()),
            hi: up(prec, self.hi.exp_ref()),
        }
    }

    pub fn ln(&self) -> Result<Interval> {
        if self.lo <= 0 {
            return Err(Error::Invalid("ln of an interval reaching 0".into()));
        }
        let prec = self.prec();
        Ok(Interval {
            lo: down(prec, self.lo.ln_ref()),
            hi: up(prec, self.hi.ln_ref()),
        })
    }

    /// Enclosure of `x^e` over the box, computed as `exp(e ln x)`.
    ///
    /// Requires `x >= 0`; when the base reaches 0 the exponent must be
    /// strictly positive.
    pub fn pow(&self, exponent: &Interval) -> Result<Interval> {
        if self.lo < 0 {
            return Err(Error::Invalid("pow of an interval with negative part".into()));
        }
        if self.lo > 0 {
            return Ok((exponent * &self.ln()?).exp());
        }
        if exponent.lo <= 0 {
            return Err(Error::Invalid("0^e needs a positive exponent".into()));
        }
        let prec = self.prec().max(exponent.prec());
        if self.hi == 0 {
            return Ok(Interval::point(Float::with_val(prec, 0)));
        }
        let top = Interval::point(self.hi.clone()).pow(exponent)?;
        Ok(Interval {
            lo: Float::with_val(prec, 0),
            hi: top.hi,
        })
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        let prec = self.prec().max(rhs.prec());
        Interval {
            lo: down(prec, &self.lo + &rhs.lo),
            hi: up(prec, &self.hi + &rhs.hi),
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        let prec = self.prec().max(rhs.prec());
        Interval {
            lo: down(prec, &self.lo - &rhs.hi),
            hi: up(prec, &self.hi - &rhs.lo),
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let prec = self.prec().max(rhs.prec());
        let pairs = [
            (&self.lo, &rhs.lo),
            (&self.lo, &rhs.hi),
            (&self.hi, &rhs.lo),
            (&self.hi, &rhs.hi),
        ];
        let lows = pairs.iter().map(|(a, b)| down(prec, *a * *b)).collect();
        let highs = pairs.iter().map(|(a, b)| up(prec, *a * *b)).collect();
        Interval {
            lo: min_of(lows),
            hi: max_of(highs),
        }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }
}

impl fmt::Display for Interval {
    /// Endpoints are printed as `f64`s rounded outward.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo_f64(), self.hi_f64())
    }
}
