//! Rigorous checks of the analytic inequalities behind the local bound.
//!
//! Every claim is certified by interval arithmetic over a cover of its
//! domain by `f64`-bounded boxes. Boxes that do not resolve are bisected;
//! boxes that still do not resolve at the bisection floor are re-evaluated
//! at doubled precision up to [`MAX_PRECISION`] bits. Anything left over is
//! recorded as a gap and the certificate is marked failed, never dropped.

mod analytic;
mod certificate;
mod grid;

use std::fmt::Write as _;

use rayon::prelude::*;

pub use analytic::Analytic;
pub use certificate::{
    validate_certificate, CertBox, Certificate, ClaimId, Fact, Method, Status, Validation,
};
pub use grid::{check_tight_inequality_grid, tight_cell, tight_sides, CellOutcome, GridReport};

use crate::interval::{Interval, DEFAULT_PRECISION};
use crate::{Error, Result};
use certificate::{domain_margin, fact_enclosure, small_t_premise, taylor_radius, third_derivative_bound};

/// Precision ceiling (bits) for box re-evaluation.
pub const MAX_PRECISION: u32 = 512;
/// Bisection floor; a box this deep is escalated in precision instead.
pub const MAX_DEPTH: u32 = 48;
/// Left end of the `f1` domain: the largest `f64` not above `1/10`.
pub const F1_DOMAIN_LO: f64 = 0.09999999999999999;
pub const F1_DOMAIN_HI: f64 = 10.0;
/// Taylor zone around `x = 1`.
pub const TAYLOR_ZONE: (f64, f64) = (0.6, 2.0);
/// `f0 >= 0` on `[0, F0_ANALYTIC_EDGE]` follows from `f0(0) = 0` and monotonicity.
pub const F0_ANALYTIC_EDGE: f64 = 1e-3;
/// Below this ratio, subadditivity follows from `(1+t)^p <= 1 + p t`.
pub const SUBADDITIVITY_EDGE: f64 = 1e-6;
/// Initial uniform split of each region, before adaptive bisection.
const INITIAL_PIECES: usize = 32;

/// Enclosure of `f(x, gamma) = x^p + x^{2p} + gamma^p - (x+1)^p (x+gamma)^p`.
pub fn eval_f(x: &Interval, gamma: &Interval) -> Result<Interval> {
    let prec = x.prec().max(gamma.prec()).max(DEFAULT_PRECISION);
    Analytic::new(prec).f(x, gamma)
}

/// Proves `a^p + b^p > (a+b)^p` over the boxes `a` and `b`.
///
/// Returns `Ok(false)` only if point inputs give an enclosure strictly on
/// the wrong side; an unresolved box is [`Error::Inconclusive`].
pub fn check_subadditivity(a: &Interval, b: &Interval) -> Result<bool> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::Invalid("subadditivity needs a > 0 and b > 0".into()));
    }
    let base = a.prec().max(b.prec()).max(DEFAULT_PRECISION);
    let mut stack = vec![(a.clone(), b.clone(), 0u32, base)];
    while let Some((a, b, depth, prec)) = stack.pop() {
        let an = Analytic::new(prec);
        let (a, b) = (a.to_prec(prec), b.to_prec(prec));
        let lhs = &a.pow(an.p())? + &b.pow(an.p())?;
        let rhs = (&a + &b).pow(an.p())?;
        if *lhs.lo() > *rhs.hi() {
            continue;
        }
        if *lhs.hi() < *rhs.lo() && a.is_point() && b.is_point() {
            return Ok(false);
        }
        let first_a = a.width() >= b.width();
        let halves = |on_a: bool| if on_a { a.bisect() } else { b.bisect() }.map(|h| (on_a, h));
        match halves(first_a).or_else(|| halves(!first_a)) {
            Some((on_a, (l, r))) if depth < MAX_DEPTH => {
                if on_a {
                    stack.push((l, b.clone(), depth + 1, prec));
                    stack.push((r, b, depth + 1, prec));
                } else {
                    stack.push((a.clone(), l, depth + 1, prec));
                    stack.push((a, r, depth + 1, prec));
                }
            }
            _ if prec < MAX_PRECISION => stack.push((a, b, depth, prec * 2)),
            _ => {
                return Err(Error::Inconclusive(format!(
                    "subadditivity unresolved on a={a} b={b} at {prec} bits"
                )))
            }
        }
    }
    Ok(true)
}

/// Result of certifying one box, possibly after bisection.
struct Piece {
    boxes: Vec<CertBox>,
    gaps: Vec<(f64, f64)>,
    depth: u32,
    precision: u32,
}

/// Adaptive bisection of `[lo, hi]` until `test` accepts every piece.
///
/// `test(analytic, box)` returns `Some((lb, aux))` when the box is certified.
fn cover<F>(lo: f64, hi: f64, method: Method, test: &F) -> Piece
where
    F: Fn(&Analytic, f64, f64) -> Option<(f64, Option<f64>)> + Sync,
{
    let mut out = Piece { boxes: Vec::new(), gaps: Vec::new(), depth: 0, precision: DEFAULT_PRECISION };
    let mut stack = vec![(lo, hi, 0u32)];
    let mut analytics = vec![Analytic::new(DEFAULT_PRECISION)];
    while let Some((a, b, depth)) = stack.pop() {
        out.depth = out.depth.max(depth);
        if let Some((lb, aux)) = test(&analytics[0], a, b) {
            out.boxes.push(CertBox { lo: a, hi: b, method, lb, aux });
            continue;
        }
        let mid = a + (b - a) / 2.0;
        if depth < MAX_DEPTH && a < mid && mid < b {
            // right half first so the left half is popped next
            stack.push((mid, b, depth + 1));
            stack.push((a, mid, depth + 1));
            continue;
        }
        // bisection floor: escalate precision
        let mut prec = DEFAULT_PRECISION;
        let mut done = false;
        for level in 1.. {
            prec *= 2;
            if prec > MAX_PRECISION {
                break;
            }
            if analytics.len() <= level {
                analytics.push(Analytic::new(prec));
            }
            if let Some((lb, aux)) = test(&analytics[level], a, b) {
                out.boxes.push(CertBox { lo: a, hi: b, method, lb, aux });
                out.precision = out.precision.max(prec);
                done = true;
                break;
            }
        }
        if !done {
            out.gaps.push((a, b));
        }
    }
    out
}

/// Uniform pre-split of `[lo, hi]`, covered in parallel and merged by left end.
fn cover_parallel<F>(lo: f64, hi: f64, method: Method, test: &F) -> Piece
where
    F: Fn(&Analytic, f64, f64) -> Option<(f64, Option<f64>)> + Sync,
{
    let n = INITIAL_PIECES;
    let cuts: Vec<f64> = (0..=n)
        .map(|i| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 })
        .collect();
    let pieces: Vec<Piece> = cuts
        .par_windows(2)
        .map(|w| cover(w[0], w[1], method, test))
        .collect();
    let mut out = Piece { boxes: Vec::new(), gaps: Vec::new(), depth: 0, precision: DEFAULT_PRECISION };
    for p in pieces {
        out.boxes.extend(p.boxes);
        out.gaps.extend(p.gaps);
        out.depth = out.depth.max(p.depth);
        out.precision = out.precision.max(p.precision);
    }
    out
}

fn positive_lb(e: Result<Interval>) -> Option<(f64, Option<f64>)> {
    match e {
        Ok(v) if v.is_positive() => Some((v.lo_f64(), None)),
        _ => None,
    }
}

fn assemble(claim: ClaimId, facts: Vec<Fact>, pieces: Vec<Piece>) -> Certificate {
    let mut boxes = Vec::new();
    let mut gaps = Vec::new();
    let (mut depth, mut precision) = (0, DEFAULT_PRECISION);
    for p in pieces {
        boxes.extend(p.boxes);
        gaps.extend(p.gaps);
        depth = depth.max(p.depth);
        precision = precision.max(p.precision);
    }
    boxes.sort_by(|a: &CertBox, b: &CertBox| a.lo.total_cmp(&b.lo));
    gaps.sort_by(|a: &(f64, f64), b: &(f64, f64)| a.0.total_cmp(&b.0));
    Certificate {
        claim,
        status: if gaps.is_empty() { Status::Verified } else { Status::Failed },
        precision,
        max_depth: depth,
        facts,
        boxes,
        gaps,
    }
}

fn single(lo: f64, hi: f64, method: Method, lb: f64) -> Piece {
    Piece {
        boxes: vec![CertBox { lo, hi, method, lb, aux: None }],
        gaps: Vec::new(),
        depth: 0,
        precision: DEFAULT_PRECISION,
    }
}

fn failed(lo: f64, hi: f64) -> Piece {
    Piece { boxes: Vec::new(), gaps: vec![(lo, hi)], depth: 0, precision: DEFAULT_PRECISION }
}

fn facts(an: &Analytic, names: &[&str]) -> Result<Vec<Fact>> {
    let mut out = Vec::new();
    for name in names {
        let e = fact_enclosure(an, name)?.expect("known fact name");
        out.push(Fact::new(name, &e));
    }
    Ok(out)
}

/// `1 + t^p > (1+t)^p` for `t` in `(0, 1]`; by homogeneity this is
/// `a^p + b^p > (a+b)^p` for all positive `a >= b`.
pub fn certify_subadditivity() -> Result<Certificate> {
    let an = Analytic::new(DEFAULT_PRECISION);
    let premise = small_t_premise(&an, SUBADDITIVITY_EDGE)?;
    let near_zero = if (&Interval::from_int(DEFAULT_PRECISION, 1) - &premise).is_positive() {
        single(0.0, SUBADDITIVITY_EDGE, Method::AnalyticReduction, 0.0)
    } else {
        failed(0.0, SUBADDITIVITY_EDGE)
    };
    let test = |an: &Analytic, lo: f64, hi: f64| {
        positive_lb(an.span(lo, hi).and_then(|t| an.subadditivity_gap(&t)))
    };
    let rest = cover_parallel(SUBADDITIVITY_EDGE, 1.0, Method::IntervalPositive, &test);
    Ok(assemble(ClaimId::Subadditivity, facts(&an, &["p", "two_minus_two_p"])?, vec![near_zero, rest]))
}

/// `0 < r(x) < 1` on a cover of `[1/10, 10]`, which together with `p - 1 < 0`
/// supports reducing `gamma` to the endpoint cases 0 and 1.
pub fn certify_gamma_reduction() -> Result<Certificate> {
    let an = Analytic::new(DEFAULT_PRECISION);
    let test = |an: &Analytic, lo: f64, hi: f64| {
        let one = Interval::from_int(an.prec(), 1);
        match an.span(lo, hi).and_then(|x| an.r(&x)) {
            Ok(r) if r.is_positive() && (&one - &r).is_positive() => Some((r.lo_f64(), Some(r.hi_f64()))),
            _ => None,
        }
    };
    let mut cert_facts = facts(&an, &["p_minus_1", "p_over_p_minus_1", "r_at_1"])?;
    let piece = if an.lin(1, -1).is_negative() {
        cover_parallel(F1_DOMAIN_LO, F1_DOMAIN_HI, Method::AnalyticReduction, &test)
    } else {
        failed(F1_DOMAIN_LO, F1_DOMAIN_HI)
    };
    cert_facts.retain(|f| f.name != "p");
    Ok(assemble(ClaimId::GammaReduction, cert_facts, vec![piece]))
}

/// `f0 >= 0` on `[0, 10]`: analytic on `[0, 1e-3]`, then `f0' > 0` on boxes
/// covering `[1e-3, 10]` starting from `f0(1e-3) > 0`.
pub fn certify_f0_nonneg() -> Result<Certificate> {
    let an = Analytic::new(DEFAULT_PRECISION);
    let edge = an.f0(&an.point(F0_ANALYTIC_EDGE))?;
    let head = if edge.is_positive() {
        single(0.0, F0_ANALYTIC_EDGE, Method::AnalyticReduction, 0.0)
    } else {
        failed(0.0, F0_ANALYTIC_EDGE)
    };
    let test = |an: &Analytic, lo: f64, hi: f64| positive_lb(an.span(lo, hi).and_then(|x| an.f0_prime(&x)));
    let body = cover_parallel(F0_ANALYTIC_EDGE, F1_DOMAIN_HI, Method::IntervalPositive, &test);
    let names = ["f0_at_edge", "f0_at_1", "f0_prime_at_1"];
    Ok(assemble(ClaimId::F0, facts(&an, &names)?, vec![head, body]))
}

/// `f1 >= 0` on `[1/10, 10]` with equality only at 1: direct positivity
/// away from 1, a third-derivative bound plus the Taylor remainder argument
/// on the zone around 1.
pub fn certify_f1_nonneg() -> Result<Certificate> {
    let an = Analytic::new(DEFAULT_PRECISION);
    let direct = |an: &Analytic, lo: f64, hi: f64| positive_lb(an.span(lo, hi).and_then(|x| an.f1(&x)));
    let left = cover_parallel(F1_DOMAIN_LO, TAYLOR_ZONE.0, Method::IntervalPositive, &direct);
    let right = cover_parallel(TAYLOR_ZONE.1, F1_DOMAIN_HI, Method::IntervalPositive, &direct);

    let c2 = an.taylor_coefficient()?;
    let third = |an: &Analytic, lo: f64, hi: f64| {
        let m = third_derivative_bound(an.prec());
        let x = an.span(lo, hi).ok()?;
        let d3 = an.f1_third(&x).ok()?.abs();
        if !(&m - &d3).is_positive() {
            return None;
        }
        // c2 u^2 - (M/6) u^3 is increasing for u < 4 c2 / M, so its value at
        // the smallest |x - 1| bounds it on the box
        let u_min = if lo <= 1.0 && 1.0 <= hi { 0.0 } else { (lo - 1.0).abs().min((hi - 1.0).abs()) };
        let u = Interval::from_f64(an.prec(), u_min);
        let c2 = an.taylor_coefficient().ok()?;
        let m6 = m.div(&Interval::from_int(an.prec(), 6)).ok()?;
        let lb = &(&c2 * &u.sqr()) - &(&m6 * &(&u.sqr() * &u));
        Some((lb.lo_f64().max(0.0), Some(d3.hi_f64())))
    };
    let zone = cover_parallel(TAYLOR_ZONE.0, TAYLOR_ZONE.1, Method::TaylorExclusion, &third);

    let radius = taylor_radius(&an)?;
    let u_max = Interval::from_f64(DEFAULT_PRECISION, (1.0 - TAYLOR_ZONE.0).max(TAYLOR_ZONE.1 - 1.0));
    let zone = if (&radius - &u_max).is_positive() && c2.is_positive() {
        zone
    } else {
        failed(TAYLOR_ZONE.0, TAYLOR_ZONE.1)
    };
    let d3_max = zone.boxes.iter().filter_map(|b| b.aux).fold(0.0, f64::max);

    let mut cert_facts = facts(
        &an,
        &["f1_at_1", "f1_prime_at_1", "f1_second_at_1", "taylor_c2", "taylor_radius"],
    )?;
    cert_facts.push(Fact { name: "third_derivative_max".into(), lo: 0.0, hi: d3_max });
    Ok(assemble(ClaimId::F1, cert_facts, vec![left, zone, right]))
}

/// Zeros of `f1` need not be sought outside `(1/10, 10)`: the endpoint
/// arguments reduce to `1 + 10^p > 12^p` (and its mirror image) together
/// with instances of subadditivity.
pub fn certify_domain_reduction() -> Result<Certificate> {
    let an = Analytic::new(DEFAULT_PRECISION);
    let margin = domain_margin(&an)?;
    let one = Interval::from_int(DEFAULT_PRECISION, 1);
    let instance = check_subadditivity(&one, &one)?;
    let ok = margin.is_positive() && instance;
    let piece = |lo: f64, hi: f64| {
        if ok {
            single(lo, hi, Method::AnalyticReduction, margin.lo_f64())
        } else {
            failed(lo, hi)
        }
    };
    // 0.1f64 lies just above 1/10
    let pieces = vec![piece(0.0, 0.1), piece(10.0, f64::INFINITY)];
    let names = ["one_plus_ten_p", "twelve_p", "margin", "two_minus_two_p"];
    Ok(assemble(ClaimId::DomainReduction, facts(&an, &names)?, pieces))
}

pub fn certify(claim: ClaimId) -> Result<Certificate> {
    match claim {
        ClaimId::Subadditivity => certify_subadditivity(),
        ClaimId::GammaReduction => certify_gamma_reduction(),
        ClaimId::F0 => certify_f0_nonneg(),
        ClaimId::F1 => certify_f1_nonneg(),
        ClaimId::DomainReduction => certify_domain_reduction(),
    }
}

/// Human-readable summary: facts, box counts per method and any gaps.
pub fn summarize(cert: &Certificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "claim {}: {}", cert.claim, cert.status.name());
    for f in &cert.facts {
        let _ = writeln!(out, "  {} in [{:?},{:?}]", f.name, f.lo, f.hi);
    }
    for m in [Method::IntervalPositive, Method::TaylorExclusion, Method::AnalyticReduction] {
        let n = cert.count(m);
        if n > 0 {
            let _ = writeln!(out, "  {} boxes: {n}", m.name());
        }
    }
    let _ = writeln!(out, "  max_depth {} precision {} bits", cert.max_depth, cert.precision);
    for (lo, hi) in &cert.gaps {
        let _ = writeln!(out, "  gap [{lo:?},{hi:?}]");
    }
    out
}
