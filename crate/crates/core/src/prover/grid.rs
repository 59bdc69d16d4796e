//! Exhaustive check of `(ac)^p + (ad)^p + (bc)^p >= ((a+b)(c+d))^p` on a grid.

use std::cmp::Ordering;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::powers::{PowerEvaluator, PowerSum};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellOutcome {
    Strict,
    /// Both sides agree exactly (e.g. via `4^p = 3`).
    Equal,
    Violated,
    /// Sign undecided at the precision cap.
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GridReport {
    pub max_val: u64,
    /// Cells with `ac >= bd`, `a + b >= 1`, `c + d >= 1`.
    pub admissible: u64,
    pub strict: u64,
    pub equalities: u64,
    pub violations: Vec<[u64; 4]>,
    pub unresolved: Vec<[u64; 4]>,
}

impl GridReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.unresolved.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "tight-grid max={}", self.max_val);
        let _ = writeln!(out, "admissible {}", self.admissible);
        let _ = writeln!(out, "strict {}", self.strict);
        let _ = writeln!(out, "equalities {}", self.equalities);
        let _ = writeln!(out, "violations {}", self.violations.len());
        let _ = writeln!(out, "unresolved {}", self.unresolved.len());
        for [a, b, c, d] in &self.violations {
            let _ = writeln!(out, "violation a={a} b={b} c={c} d={d}");
        }
        for [a, b, c, d] in &self.unresolved {
            let _ = writeln!(out, "unresolved a={a} b={b} c={c} d={d}");
        }
        out
    }
}

/// Both sides of the inequality as formal power sums.
pub fn tight_sides(a: u64, b: u64, c: u64, d: u64) -> (PowerSum, PowerSum) {
    let mut lhs = PowerSum::new();
    lhs.add_power(a * c).add_power(a * d).add_power(b * c);
    (lhs, PowerSum::power((a + b) * (c + d)))
}

/// Decides one cell; assumes `ac >= bd`.
pub fn tight_cell(ev: &mut PowerEvaluator, a: u64, b: u64, c: u64, d: u64) -> CellOutcome {
    let (lhs, rhs) = tight_sides(a, b, c, d);
    match ev.compare(&lhs, &rhs) {
        Ok(Ordering::Greater) => CellOutcome::Strict,
        Ok(Ordering::Equal) => CellOutcome::Equal,
        Ok(Ordering::Less) => CellOutcome::Violated,
        Err(_) => CellOutcome::Unresolved,
    }
}

/// Checks every admissible cell with `0 <= a, b, c, d <= max_val`.
pub fn check_tight_inequality_grid(max_val: u64) -> Result<GridReport> {
    if max_val == 0 {
        return Err(Error::Invalid("grid needs max_val >= 1".into()));
    }
    if max_val > 1 << 14 {
        return Err(Error::Invalid(format!("grid max_val {max_val} too large")));
    }
    let partial = (0..=max_val)
        .into_par_iter()
        .map_init(PowerEvaluator::new, |ev, a| {
            let mut r = GridReport::default();
            for b in 0..=max_val {
                if a + b == 0 {
                    continue;
                }
                for c in 0..=max_val {
                    for d in 0..=max_val {
                        if c + d == 0 || a * c < b * d {
                            continue;
                        }
                        r.admissible += 1;
                        match tight_cell(ev, a, b, c, d) {
                            CellOutcome::Strict => r.strict += 1,
                            CellOutcome::Equal => r.equalities += 1,
                            CellOutcome::Violated => r.violations.push([a, b, c, d]),
                            CellOutcome::Unresolved => r.unresolved.push([a, b, c, d]),
                        }
                    }
                }
            }
            r
        })
        .collect::<Vec<_>>();
    let mut out = GridReport { max_val, ..GridReport::default() };
    for r in partial {
        out.admissible += r.admissible;
        out.strict += r.strict;
        out.equalities += r.equalities;
        out.violations.extend(r.violations);
        out.unresolved.extend(r.unresolved);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_cells() {
        let mut ev = PowerEvaluator::new();
        assert_eq!(tight_cell(&mut ev, 1, 0, 1, 0), CellOutcome::Equal);
        assert_eq!(tight_cell(&mut ev, 1, 1, 1, 1), CellOutcome::Equal);
        // 4^p + 2^p + 2^p = 3 + 2 sqrt 3 > 9^p
        assert_eq!(tight_cell(&mut ev, 2, 1, 2, 1), CellOutcome::Strict);
        // b = 0 reduces to subadditivity
        assert_eq!(tight_cell(&mut ev, 1, 0, 1, 1), CellOutcome::Strict);
    }

    #[test]
    fn false_variant_is_caught() {
        // dropping (bc)^p breaks the inequality at a = b = c = d = 1
        let mut ev = PowerEvaluator::new();
        let mut lhs = PowerSum::new();
        lhs.add_power(1).add_power(1);
        assert_eq!(ev.compare(&lhs, &PowerSum::power(4)).unwrap(), Ordering::Less);
    }

    /// Cell count by brute force.
    fn admissible(max: u64) -> u64 {
        let mut n = 0;
        for a in 0..=max {
            for b in 0..=max {
                for c in 0..=max {
                    for d in 0..=max {
                        n += u64::from(a + b >= 1 && c + d >= 1 && a * c >= b * d);
                    }
                }
            }
        }
        n
    }

    #[test]
    fn small_grids_are_clean() {
        for max in 1..=6 {
            let r = check_tight_inequality_grid(max).unwrap();
            assert!(r.is_clean(), "{}", r.to_text());
            assert_eq!(r.admissible, admissible(max));
            assert_eq!(r.admissible, r.strict + r.equalities);
        }
        assert!(check_tight_inequality_grid(0).is_err());
    }
}
