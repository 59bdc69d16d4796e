//! Interval extensions of the functions in the inductive inequality.
//!
//! With `p = log_4 3`:
//!
//! ```text
//! f(x, g)  = x^p + x^{2p} + g^p - (x+1)^p (x+g)^p
//! f0(x)    = f(x, 0) = x^p + x^{2p} - (x^2+x)^p
//! f1(x)    = f(x, 1) = x^p + x^{2p} + 1 - (x+1)^{2p}
//! r(x)     = (1+x)^{p/(p-1)}
//! ```

use crate::interval::Interval;
use crate::powers::p_enclosure;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Analytic {
    prec: u32,
    p: Interval,
}

impl Analytic {
    pub fn new(prec: u32) -> Self {
        Analytic { prec, p: p_enclosure(prec) }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn p(&self) -> &Interval {
        &self.p
    }

    /// `a p + b`.
    pub fn lin(&self, a: i64, b: i64) -> Interval {
        &self.p.scale(a) + &self.int(b)
    }

    fn int(&self, v: i64) -> Interval {
        Interval::from_int(self.prec, v)
    }

    /// `x^{a p + b}`.
    fn xp(&self, x: &Interval, a: i64, b: i64) -> Result<Interval> {
        x.pow(&self.lin(a, b))
    }

    pub fn point(&self, x: f64) -> Interval {
        Interval::from_f64(self.prec, x)
    }

    pub fn span(&self, lo: f64, hi: f64) -> Result<Interval> {
        Interval::from_f64_bounds(self.prec, lo, hi)
    }

    /// Enclosure of `f(x, gamma)`; needs `x > 0` and `gamma >= 0`.
    pub fn f(&self, x: &Interval, gamma: &Interval) -> Result<Interval> {
        if !x.is_positive() {
            return Err(Error::Invalid("f(x, gamma) needs x > 0".into()));
        }
        if *gamma.lo() < 0 {
            return Err(Error::Invalid("f(x, gamma) needs gamma >= 0".into()));
        }
        let one = self.int(1);
        let lhs = &(&self.xp(x, 1, 0)? + &self.xp(x, 2, 0)?) + &gamma.pow(&self.p)?;
        let rhs = &(x + &one).pow(&self.p)? * &(x + gamma).pow(&self.p)?;
        Ok(&lhs - &rhs)
    }

    pub fn f0(&self, x: &Interval) -> Result<Interval> {
        let quad = &x.sqr() + x;
        Ok(&(&self.xp(x, 1, 0)? + &self.xp(x, 2, 0)?) - &quad.pow(&self.p)?)
    }

    /// `f0'(x) = p x^{p-1} + 2p x^{2p-1} - p (2x+1) (x^2+x)^{p-1}`.
    pub fn f0_prime(&self, x: &Interval) -> Result<Interval> {
        let quad = &x.sqr() + x;
        let two_x_plus_1 = &x.scale(2) + &self.int(1);
        let t1 = &self.p * &self.xp(x, 1, -1)?;
        let t2 = &self.p.scale(2) * &self.xp(x, 2, -1)?;
        let t3 = &(&self.p * &two_x_plus_1) * &quad.pow(&self.lin(1, -1))?;
        Ok(&(&t1 + &t2) - &t3)
    }

    pub fn f1(&self, x: &Interval) -> Result<Interval> {
        let xp1 = x + &self.int(1);
        Ok(&(&(&self.xp(x, 1, 0)? + &self.xp(x, 2, 0)?) + &self.int(1)) - &self.xp(&xp1, 2, 0)?)
    }

    /// `f1'(x) = p x^{p-1} + 2p x^{2p-1} - 2p (x+1)^{2p-1}`.
    pub fn f1_prime(&self, x: &Interval) -> Result<Interval> {
        let xp1 = x + &self.int(1);
        let two_p = self.p.scale(2);
        let t1 = &self.p * &self.xp(x, 1, -1)?;
        let t2 = &two_p * &self.xp(x, 2, -1)?;
        let t3 = &two_p * &self.xp(&xp1, 2, -1)?;
        Ok(&(&t1 + &t2) - &t3)
    }

    /// `f1''(x) = p(p-1) x^{p-2} + 2p(2p-1) x^{2p-2} - 2p(2p-1) (x+1)^{2p-2}`.
    pub fn f1_second(&self, x: &Interval) -> Result<Interval> {
        let xp1 = x + &self.int(1);
        let c1 = &self.p * &self.lin(1, -1);
        let c2 = &self.p.scale(2) * &self.lin(2, -1);
        let t1 = &c1 * &self.xp(x, 1, -2)?;
        let t2 = &c2 * &self.xp(x, 2, -2)?;
        let t3 = &c2 * &self.xp(&xp1, 2, -2)?;
        Ok(&(&t1 + &t2) - &t3)
    }

    /// `f1'''(x) = p(p-1)(p-2) x^{p-3} + c (x^{2p-3} - (x+1)^{2p-3})`
    /// with `c = 2p(2p-1)(2p-2)`.
    pub fn f1_third(&self, x: &Interval) -> Result<Interval> {
        let xp1 = x + &self.int(1);
        let c1 = &(&self.p * &self.lin(1, -1)) * &self.lin(1, -2);
        let c2 = &(&self.p.scale(2) * &self.lin(2, -1)) * &self.lin(2, -2);
        let t1 = &c1 * &self.xp(x, 1, -3)?;
        let inner = &self.xp(x, 2, -3)? - &self.xp(&xp1, 2, -3)?;
        Ok(&t1 + &(&c2 * &inner))
    }

    /// `r(x) = (1+x)^{p/(p-1)}`.
    pub fn r(&self, x: &Interval) -> Result<Interval> {
        let e = self.p.div(&self.lin(1, -1))?;
        (x + &self.int(1)).pow(&e)
    }

    /// `1 + t^p - (1+t)^p`, the normalised form of `a^p + b^p - (a+b)^p`
    /// with `t = b/a`.
    pub fn subadditivity_gap(&self, t: &Interval) -> Result<Interval> {
        let one = self.int(1);
        Ok(&(&one + &t.pow(&self.p)?) - &(&one + t).pow(&self.p)?)
    }

    /// `p^2 - 3p/4`, the quadratic Taylor coefficient of `f1` at 1.
    pub fn taylor_coefficient(&self) -> Result<Interval> {
        let three_quarters = Interval::from_ratio(self.prec, 3, 4)?;
        Ok(&self.p.sqr() - &(&self.p * &three_quarters))
    }
}
