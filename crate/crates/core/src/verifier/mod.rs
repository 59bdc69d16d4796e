//! Checking the local property: every `k`-subset `Q` of the set spans at
//! least `k^{log2 3}` distinct differences.

mod bnb;
mod exhaustive;
mod trace;

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::model::{exact_threshold, threshold_enclosure, SubsetMask};
use crate::{Error, Result};

pub use bnb::{
    min_subset_bnb, min_subset_bnb_parallel, BnbSearch, BnbState, CHECKPOINT_INTERVAL,
    DEFAULT_BUDGET,
};
pub use exhaustive::{colex_masks, verify_all_k, verify_exhaustive, EXHAUSTIVE_CAP};
pub use trace::{trace_decomposition, trace_decomposition_with, DecompositionTrace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    BranchAndBound,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::BranchAndBound => "branch_and_bound",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "bnb" | "branch_and_bound" | "branch-and-bound" => Ok(Mode::BranchAndBound),
            other => Err(Error::Invalid(format!("unknown mode {other:?}"))),
        }
    }
}

/// `k^{log2 3}` as printed in reports: both endpoints of a 64-bit
/// enclosure, rounded outward to `f64`; exact when `k` is a power of two.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdBound {
    pub k: u64,
    pub exact: Option<u64>,
    pub lo: f64,
    pub hi: f64,
}

impl ThresholdBound {
    pub fn new(k: u64) -> Self {
        let e = threshold_enclosure(k, 64);
        ThresholdBound {
            k,
            exact: exact_threshold(k),
            lo: e.lo_f64(),
            hi: e.hi_f64(),
        }
    }
}

impl fmt::Display for ThresholdBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(v) => write!(f, "{}^log2(3) = {v} exactly", self.k),
            None => write!(f, "{}^log2(3) in [{},{}]", self.k, self.lo, self.hi),
        }
    }
}

/// Outcome of checking one subset size.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalReport {
    pub k: usize,
    /// Smallest `|Q - Q|` found over `k`-subsets.
    pub min_diff: u64,
    pub witness: SubsetMask,
    pub bound: ThresholdBound,
    /// `min_diff >= k^{log2 3}`, decided by `threshold_holds`.
    pub holds: bool,
    /// Subsets enumerated (exhaustive) or search nodes expanded (bnb).
    pub subsets_checked: u64,
    pub mode: Mode,
    /// False when a branch-and-bound budget ran out; `min_diff` is then
    /// only an upper bound on the true minimum.
    pub complete: bool,
}

pub const CSV_HEADER: &str = "k,min_diff,bound_lo,bound_hi,holds,mode,subsets_checked";

#[derive(Serialize)]
struct ReportRow<'a> {
    k: usize,
    min_diff: u64,
    bound_lo: f64,
    bound_hi: f64,
    holds: bool,
    mode: &'a str,
    subsets_checked: u64,
}

impl LocalReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.k,
            self.min_diff,
            self.bound.lo,
            self.bound.hi,
            self.holds,
            self.mode.name(),
            self.subsets_checked
        )
    }

    pub fn json_row(&self) -> String {
        serde_json::to_string(&ReportRow {
            k: self.k,
            min_diff: self.min_diff,
            bound_lo: self.bound.lo,
            bound_hi: self.bound.hi,
            holds: self.holds,
            mode: self.mode.name(),
            subsets_checked: self.subsets_checked,
        })
        .expect("plain row serializes")
    }

    /// Key-value block, one `key = value` per line, terminated by a blank line.
    pub fn text_block(&self) -> String {
        let mut out = String::from("[report]\n");
        let _ = writeln!(out, "k = {}", self.k);
        let _ = writeln!(out, "min_diff = {}", self.min_diff);
        let _ = writeln!(out, "witness = {}", self.witness);
        let _ = writeln!(out, "bound = {}", self.bound);
        let _ = writeln!(out, "bound_lo = {}", self.bound.lo);
        let _ = writeln!(out, "bound_hi = {}", self.bound.hi);
        let _ = writeln!(out, "holds = {}", self.holds);
        let _ = writeln!(out, "mode = {}", self.mode.name());
        let _ = writeln!(out, "subsets_checked = {}", self.subsets_checked);
        let _ = writeln!(out, "complete = {}", self.complete);
        out.push('\n');
        out
    }
}
