//! Serialized positivity certificates and their independent validator.
//!
//! ```text
//! certificate claim=f1 status=verified precision=64 max_depth=7
//! domain [1/10,10]
//! fact taylor_c2 [0.0336655944026316,0.0336655944026317]
//! box [0.09999999999999999,0.15625] method=interval_positive lb=0.0059
//! box [0.6,0.65] method=taylor_exclusion lb=0.0041 aux=0.0419
//! end
//! ```
//!
//! Box endpoints are `f64` values printed in shortest round-trip form, so a
//! parsed certificate describes exactly the boxes that were checked.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rug::Rational;

use super::analytic::Analytic;
use crate::interval::{Interval, DEFAULT_PRECISION};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClaimId {
    /// `1 + t^p > (1+t)^p` on `(0, 1]`, the normalised form of `a^p + b^p > (a+b)^p`.
    Subadditivity,
    /// `0 < r(x) < 1` on `[1/10, 10]`.
    GammaReduction,
    /// `f0 >= 0` on `[0, 10]`.
    F0,
    /// `f1 >= 0` on `[1/10, 10]`, zero only at `x = 1`.
    F1,
    /// No zero of `f1` needs to be sought outside `(1/10, 10)`.
    DomainReduction,
}

impl ClaimId {
    pub const ALL: [ClaimId; 5] = [
        ClaimId::Subadditivity,
        ClaimId::GammaReduction,
        ClaimId::F0,
        ClaimId::F1,
        ClaimId::DomainReduction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClaimId::Subadditivity => "subadditivity",
            ClaimId::GammaReduction => "gamma-reduction",
            ClaimId::F0 => "f0",
            ClaimId::F1 => "f1",
            ClaimId::DomainReduction => "domain-reduction",
        }
    }

    /// Segments the boxes must cover; `None` as an upper end means `+inf`.
    pub fn domain(self) -> Vec<(Rational, Option<Rational>)> {
        let r = |n: i64, d: i64| Rational::from((n, d));
        match self {
            ClaimId::Subadditivity => vec![(r(0, 1), Some(r(1, 1)))],
            ClaimId::GammaReduction | ClaimId::F1 => vec![(r(1, 10), Some(r(10, 1)))],
            ClaimId::F0 => vec![(r(0, 1), Some(r(10, 1)))],
            ClaimId::DomainReduction => vec![(r(0, 1), Some(r(1, 10))), (r(10, 1), None)],
        }
    }

    fn domain_text(self) -> String {
        self.domain()
            .iter()
            .map(|(lo, hi)| match hi {
                Some(hi) => format!("[{lo},{hi}]"),
                None => format!("[{lo},inf]"),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown claim {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    IntervalPositive,
    TaylorExclusion,
    AnalyticReduction,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::IntervalPositive => "interval_positive",
            Method::TaylorExclusion => "taylor_exclusion",
            Method::AnalyticReduction => "analytic_reduction",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interval_positive" => Ok(Method::IntervalPositive),
            "taylor_exclusion" => Ok(Method::TaylorExclusion),
            "analytic_reduction" => Ok(Method::AnalyticReduction),
            other => Err(Error::Invalid(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Verified,
    Failed,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Failed => "failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertBox {
    pub lo: f64,
    pub hi: f64,
    pub method: Method,
    /// Lower bound of the certified quantity on the box.
    pub lb: f64,
    /// Method-specific extra: the `|f1'''|` bound for Taylor boxes.
    pub aux: Option<f64>,
}

/// A named constant with an outward-rounded enclosure.
#[derive(Clone, Debug, PartialEq)]
pub struct Fact {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

impl Fact {
    pub fn new(name: &str, e: &Interval) -> Fact {
        Fact { name: name.to_string(), lo: e.lo_f64(), hi: e.hi_f64() }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub claim: ClaimId,
    pub status: Status,
    /// Largest precision (bits) any box needed.
    pub precision: u32,
    /// Deepest bisection level reached.
    pub max_depth: u32,
    pub facts: Vec<Fact>,
    /// Sorted by left endpoint.
    pub boxes: Vec<CertBox>,
    /// Boxes that could not be certified; empty iff `status` is verified.
    pub gaps: Vec<(f64, f64)>,
}

impl Certificate {
    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified && self.gaps.is_empty()
    }

    pub fn fact(&self, name: &str) -> Option<&Fact> {
        self.facts.iter().find(|f| f.name == name)
    }

    pub fn count(&self, method: Method) -> usize {
        self.boxes.iter().filter(|b| b.method == method).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "certificate claim={} status={} precision={} max_depth={}",
            self.claim,
            self.status.name(),
            self.precision,
            self.max_depth
        );
        let _ = writeln!(out, "domain {}", self.claim.domain_text());
        for f in &self.facts {
            let _ = writeln!(out, "fact {} [{:?},{:?}]", f.name, f.lo, f.hi);
        }
        for b in &self.boxes {
            let _ = write!(out, "box [{:?},{:?}] method={} lb={:?}", b.lo, b.hi, b.method.name(), b.lb);
            if let Some(a) = b.aux {
                let _ = write!(out, " aux={a:?}");
            }
            out.push('\n');
        }
        for (lo, hi) in &self.gaps {
            let _ = writeln!(out, "gap [{lo:?},{hi:?}]");
        }
        out.push_str("end\n");
        out
    }

    pub fn parse(text: &str) -> Result<Certificate> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines.next().ok_or_else(|| parse_err(1, "empty certificate"))?;
        let mut words = head.split_whitespace();
        if words.next() != Some("certificate") {
            return Err(parse_err(1, "expected `certificate` header"));
        }
        let (mut claim, mut status, mut precision, mut max_depth) = (None, None, None, None);
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(|| parse_err(1, "expected key=value"))?;
            match k {
                "claim" => claim = Some(v.parse::<ClaimId>()?),
                "status" => {
                    status = Some(match v {
                        "verified" => Status::Verified,
                        "failed" => Status::Failed,
                        _ => return Err(parse_err(1, "bad status")),
                    })
                }
                "precision" => precision = Some(v.parse().map_err(|_| parse_err(1, "bad precision"))?),
                "max_depth" => max_depth = Some(v.parse().map_err(|_| parse_err(1, "bad max_depth"))?),
                _ => return Err(parse_err(1, &format!("unknown key {k}"))),
            }
        }
        let mut cert = Certificate {
            claim: claim.ok_or_else(|| parse_err(1, "missing claim"))?,
            status: status.ok_or_else(|| parse_err(1, "missing status"))?,
            precision: precision.unwrap_or(DEFAULT_PRECISION),
            max_depth: max_depth.unwrap_or(0),
            facts: Vec::new(),
            boxes: Vec::new(),
            gaps: Vec::new(),
        };
        let mut ended = false;
        for (i, line) in lines {
            let n = i + 1;
            if ended {
                return Err(parse_err(n, "content after `end`"));
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("domain") => {}
                Some("end") => ended = true,
                Some("fact") => {
                    let name = words.next().ok_or_else(|| parse_err(n, "fact without name"))?;
                    let (lo, hi) = parse_pair(n, words.next())?;
                    cert.facts.push(Fact { name: name.to_string(), lo, hi });
                }
                Some("gap") => cert.gaps.push(parse_pair(n, words.next())?),
                Some("box") => {
                    let (lo, hi) = parse_pair(n, words.next())?;
                    let (mut method, mut lb, mut aux) = (None, None, None);
                    for w in words {
                        let (k, v) = w.split_once('=').ok_or_else(|| parse_err(n, "expected key=value"))?;
                        match k {
                            "method" => method = Some(v.parse::<Method>()?),
                            "lb" => lb = Some(parse_f64(n, v)?),
                            "aux" => aux = Some(parse_f64(n, v)?),
                            _ => return Err(parse_err(n, &format!("unknown key {k}"))),
                        }
                    }
                    cert.boxes.push(CertBox {
                        lo,
                        hi,
                        method: method.ok_or_else(|| parse_err(n, "box without method"))?,
                        lb: lb.ok_or_else(|| parse_err(n, "box without lb"))?,
                        aux,
                    });
                }
                _ => return Err(parse_err(n, "unrecognised line")),
            }
        }
        if !ended {
            return Err(parse_err(0, "missing `end`"));
        }
        Ok(cert)
    }
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse { line, msg: msg.to_string() }
}

fn parse_f64(line: usize, s: &str) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| parse_err(line, &format!("bad number {s:?}")))?;
    if v.is_nan() {
        return Err(parse_err(line, "NaN"));
    }
    Ok(v)
}

fn parse_pair(line: usize, word: Option<&str>) -> Result<(f64, f64)> {
    let w = word.ok_or_else(|| parse_err(line, "missing [lo,hi]"))?;
    let inner = w
        .strip_prefix('[')
        .and_then(|w| w.strip_suffix(']'))
        .ok_or_else(|| parse_err(line, "expected [lo,hi]"))?;
    let (lo, hi) = inner.split_once(',').ok_or_else(|| parse_err(line, "expected [lo,hi]"))?;
    let (lo, hi) = (parse_f64(line, lo)?, parse_f64(line, hi)?);
    if lo > hi {
        return Err(parse_err(line, "empty range"));
    }
    Ok((lo, hi))
}

/// Outcome of a successful validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub claim: ClaimId,
    pub boxes_checked: usize,
    pub facts_checked: usize,
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Certificate(msg.into())
}

fn exact(x: f64) -> Option<Rational> {
    Rational::from_f64(x)
}

/// Checks that the merged union of the boxes contains every domain segment.
fn check_coverage(claim: ClaimId, boxes: &[CertBox]) -> Result<()> {
    let mut sorted: Vec<&CertBox> = boxes.iter().collect();
    sorted.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for b in sorted {
        match merged.last_mut() {
            Some(last) if b.lo <= last.1 => last.1 = last.1.max(b.hi),
            _ => merged.push((b.lo, b.hi)),
        }
    }
    for (lo, hi) in claim.domain() {
        let covered = merged.iter().any(|&(a, b)| {
            let starts = exact(a).is_some_and(|a| a <= lo) || a == f64::NEG_INFINITY;
            let ends = match (&hi, b) {
                (_, b) if b == f64::INFINITY => true,
                (None, _) => false,
                (Some(hi), b) => exact(b).is_some_and(|b| b >= *hi),
            };
            starts && ends
        });
        if !covered {
            let hi = hi.map_or("inf".to_string(), |h| h.to_string());
            return Err(reject(format!("boxes leave a gap in [{lo},{hi}]")));
        }
    }
    Ok(())
}

/// Named facts the validator can recompute.
pub(crate) fn fact_enclosure(an: &Analytic, name: &str) -> Result<Option<Interval>> {
    let prec = an.prec();
    let one = Interval::from_int(prec, 1);
    let pw = |n: i64| Interval::from_int(prec, n).pow(an.p());
    Ok(Some(match name {
        "p" => an.p().clone(),
        "p_minus_1" => an.lin(1, -1),
        "p_over_p_minus_1" => an.p().div(&an.lin(1, -1))?,
        "r_at_1" => an.r(&one)?,
        "f0_at_1" => an.f0(&one)?,
        "f0_prime_at_1" => an.f0_prime(&one)?,
        "f0_at_edge" => an.f0(&Interval::from_f64(prec, super::F0_ANALYTIC_EDGE))?,
        "f1_at_1" => an.f1(&one)?,
        "f1_prime_at_1" => an.f1_prime(&one)?,
        "f1_second_at_1" => an.f1_second(&one)?,
        "taylor_c2" => an.taylor_coefficient()?,
        "taylor_radius" => taylor_radius(an)?,
        "one_plus_ten_p" => &one + &pw(10)?,
        "twelve_p" => pw(12)?,
        "margin" => domain_margin(an)?,
        "two_minus_two_p" => &Interval::from_int(prec, 2) - &pw(2)?,
        _ => return Ok(None),
    }))
}

/// `1/10`, the bound on `|f1'''|` over the Taylor zone.
pub(crate) fn third_derivative_bound(prec: u32) -> Interval {
    Interval::from_ratio(prec, 1, 10).expect("nonzero denominator")
}

/// `6 c2 / M`: the Taylor lower bound `c2 u^2 - (M/6) u^3` is positive for
/// `0 < u` below this radius.
pub(crate) fn taylor_radius(an: &Analytic) -> Result<Interval> {
    an.taylor_coefficient()?.scale(6).div(&third_derivative_bound(an.prec()))
}

/// `1 + 10^p - 12^p`.
pub(crate) fn domain_margin(an: &Analytic) -> Result<Interval> {
    let prec = an.prec();
    let one = Interval::from_int(prec, 1);
    let ten = Interval::from_int(prec, 10).pow(an.p())?;
    let twelve = Interval::from_int(prec, 12).pow(an.p())?;
    Ok(&(&one + &ten) - &twelve)
}

/// `p t0^{1-p} < 1`: on `(0, t0]`, `(1+t)^p <= 1 + p t < 1 + t^p`.
pub(crate) fn small_t_premise(an: &Analytic, t0: f64) -> Result<Interval> {
    let t = Interval::from_f64(an.prec(), t0);
    Ok(an.p() * &t.pow(&an.lin(-1, 1))?)
}

fn box_interval(an: &Analytic, b: &CertBox) -> Result<Interval> {
    an.span(b.lo, b.hi)
}

/// Recomputes every box and fact of `cert` from scratch.
pub fn validate_certificate(cert: &Certificate) -> Result<Validation> {
    if cert.status != Status::Verified {
        return Err(reject("certificate status is not verified"));
    }
    if !cert.gaps.is_empty() {
        return Err(reject(format!("certificate lists {} gaps", cert.gaps.len())));
    }
    if cert.boxes.is_empty() {
        return Err(reject("certificate has no boxes"));
    }
    check_coverage(cert.claim, &cert.boxes)?;
    let prec = cert.precision.clamp(DEFAULT_PRECISION, 4096);
    let an = Analytic::new(prec);

    let mut facts_checked = 0;
    for f in &cert.facts {
        if let Some(e) = fact_enclosure(&an, &f.name)? {
            // both enclose the same real, so they must meet
            if e.lo_f64() > f.hi || e.hi_f64() < f.lo {
                return Err(reject(format!("fact {} does not match recomputation", f.name)));
            }
            facts_checked += 1;
        }
    }

    let mut taylor: Vec<&CertBox> = Vec::new();
    for b in &cert.boxes {
        let x = box_interval(&an, b);
        let fail = |what: &str| reject(format!("box [{:?},{:?}]: {what}", b.lo, b.hi));
        match (cert.claim, b.method) {
            (ClaimId::Subadditivity, Method::IntervalPositive) => {
                let x = x?;
                if !x.is_positive() || !an.subadditivity_gap(&x)?.is_positive() {
                    return Err(fail("1 + t^p - (1+t)^p not positive"));
                }
            }
            (ClaimId::Subadditivity, Method::AnalyticReduction) => {
                let premise = small_t_premise(&an, b.hi)?;
                if b.lo != 0.0 || !(&Interval::from_int(prec, 1) - &premise).is_positive() {
                    return Err(fail("small-t premise p t^(1-p) < 1 fails"));
                }
            }
            (ClaimId::GammaReduction, Method::AnalyticReduction) => {
                let x = x?;
                if !x.is_positive() {
                    return Err(fail("box must lie in x > 0"));
                }
                let r = an.r(&x)?;
                if !r.is_positive() || !(&Interval::from_int(prec, 1) - &r).is_positive() {
                    return Err(fail("r(x) not inside (0,1)"));
                }
            }
            (ClaimId::F0, Method::AnalyticReduction) => {
                // f0(0) = 0 and f0 increasing; premise: f0 > 0 at the right end
                let edge = an.f0(&Interval::from_f64(prec, b.hi))?;
                if b.lo != 0.0 || !edge.is_positive() {
                    return Err(fail("f0 not positive at the end of the analytic box"));
                }
            }
            (ClaimId::F0, Method::IntervalPositive) => {
                let x = x?;
                if !x.is_positive() || !an.f0_prime(&x)?.is_positive() {
                    return Err(fail("f0' not positive"));
                }
            }
            (ClaimId::F1, Method::IntervalPositive) => {
                let x = x?;
                if !x.is_positive() || !an.f1(&x)?.is_positive() {
                    return Err(fail("f1 not positive"));
                }
            }
            (ClaimId::F1, Method::TaylorExclusion) => {
                let x = x?;
                let m = third_derivative_bound(prec);
                if !x.is_positive() || !(&m - &an.f1_third(&x)?.abs()).is_positive() {
                    return Err(fail("|f1'''| not below 1/10"));
                }
                taylor.push(b);
            }
            (ClaimId::DomainReduction, Method::AnalyticReduction) => {}
            (claim, method) => {
                return Err(fail(&format!("method {} not valid for claim {claim}", method.name())))
            }
        }
    }

    match cert.claim {
        ClaimId::GammaReduction => {
            if !an.lin(1, -1).is_negative() {
                return Err(reject("p - 1 < 0 fails"));
            }
        }
        ClaimId::F0 => {
            // f0 > 0 where the derivative boxes start
            let start = cert
                .boxes
                .iter()
                .filter(|b| b.method == Method::IntervalPositive)
                .map(|b| b.lo)
                .fold(f64::INFINITY, f64::min);
            if start.is_finite() && !an.f0(&Interval::from_f64(prec, start))?.is_positive() {
                return Err(reject("f0 not positive where the monotone part starts"));
            }
        }
        ClaimId::F1 => {
            if !taylor.is_empty() {
                let lo = taylor.iter().map(|b| b.lo).fold(f64::INFINITY, f64::min);
                let hi = taylor.iter().map(|b| b.hi).fold(f64::NEG_INFINITY, f64::max);
                let mut joined: Vec<&&CertBox> = taylor.iter().collect();
                joined.sort_by(|a, b| a.lo.total_cmp(&b.lo));
                if joined.windows(2).any(|w| w[1].lo > w[0].hi) || !(lo <= 1.0 && 1.0 <= hi) {
                    return Err(reject("Taylor boxes must form one interval around 1"));
                }
                let u = Interval::from_f64(prec, (1.0 - lo).max(hi - 1.0));
                let radius = taylor_radius(&an)?;
                if !(&radius - &u).is_positive() {
                    return Err(reject("Taylor zone exceeds 6 c2 / M"));
                }
                if !an.taylor_coefficient()?.is_positive() {
                    return Err(reject("quadratic Taylor coefficient not positive"));
                }
            }
        }
        ClaimId::DomainReduction => {
            if !domain_margin(&an)?.is_positive() {
                return Err(reject("1 + 10^p > 12^p fails"));
            }
            let one = Interval::from_int(prec, 1);
            if !super::check_subadditivity(&one, &one)? {
                return Err(reject("instance 1^p + 1^p > 2^p fails"));
            }
        }
        ClaimId::Subadditivity => {}
    }
    Ok(Validation { claim: cert.claim, boxes_checked: cert.boxes.len(), facts_checked })
}
