//! Branch-and-bound search for the `k`-subset with the fewest differences.
//!
//! Elements are decided in canonical order, include before exclude. The
//! number of distinct differences of the chosen prefix never decreases as
//! elements are added, so a prefix that already reaches the incumbent can
//! be discarded. The search is an explicit loop over a `(chosen, next)`
//! cursor, which makes it resumable from any [`BnbState`].

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;

use super::{LocalReport, Mode, ThresholdBound};
use crate::construction::GroundSet;
use crate::diffset::DENSE_LIMIT;
use crate::model::{threshold_holds, SubsetMask};
use crate::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const CHECKPOINT_INTERVAL: u64 = 1_000_000;

/// Multiset of pairwise differences of the chosen prefix.
#[derive(Debug, Clone)]
enum DiffMultiset {
    Dense { span: i64, counts: Vec<u32> },
    Sparse(HashMap<i64, u32>),
}

impl DiffMultiset {
    fn for_values(values: &[i64]) -> Self {
        let span = match (values.iter().min(), values.iter().max()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        };
        if (2 * span as u128 + 1) <= DENSE_LIMIT as u128 {
            DiffMultiset::Dense { span, counts: vec![0; 2 * span as usize + 1] }
        } else {
            DiffMultiset::Sparse(HashMap::new())
        }
    }

    /// Adds `d`; returns true if it was not present before.
    fn inc(&mut self, d: i64) -> bool {
        match self {
            DiffMultiset::Dense { span, counts } => {
                let c = &mut counts[(d + *span) as usize];
                *c += 1;
                *c == 1
            }
            DiffMultiset::Sparse(map) => {
                let c = map.entry(d).or_insert(0);
                *c += 1;
                *c == 1
            }
        }
    }

    /// Removes one copy of `d`; returns true if none remain.
    fn dec(&mut self, d: i64) -> bool {
        match self {
            DiffMultiset::Dense { span, counts } => {
                let c = &mut counts[(d + *span) as usize];
                *c -= 1;
                *c == 0
            }
            DiffMultiset::Sparse(map) => {
                let c = map.get_mut(&d).expect("difference present");
                *c -= 1;
                if *c == 0 {
                    map.remove(&d);
                    true
                } else {
                    false
                }
            }
        }
    }
}

/// A resumable snapshot of the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BnbState {
    /// Indices currently included, increasing.
    pub chosen: Vec<usize>,
    /// Next index to decide.
    pub next: usize,
    /// Incumbent `(|Q - Q|, indices)`.
    pub best: Option<(u64, Vec<usize>)>,
    /// Inclusion attempts so far.
    pub nodes: u64,
    pub done: bool,
    /// Leading entries of `chosen` that are fixed for this search.
    pub fixed: usize,
}

pub struct BnbSearch<'a> {
    values: &'a [i64],
    k: usize,
    state: BnbState,
    diffs: DiffMultiset,
    distinct: u64,
    shared: Option<&'a AtomicU64>,
}

impl<'a> BnbSearch<'a> {
    pub fn new(values: &'a [i64], k: usize) -> Result<Self> {
        Self::with_prefix(values, k, Vec::new())
    }

    /// Search restricted to subsets that start with `prefix`.
    pub fn with_prefix(values: &'a [i64], k: usize, prefix: Vec<usize>) -> Result<Self> {
        let next = prefix.last().map_or(0, |&i| i + 1);
        let fixed = prefix.len();
        Self::resume(
            values,
            k,
            BnbState { chosen: prefix, next, best: None, nodes: 0, done: false, fixed },
        )
    }

    /// Continues a search from a checkpoint.
    pub fn resume(values: &'a [i64], k: usize, state: BnbState) -> Result<Self> {
        let n = values.len();
        if k == 0 || k > n {
            return Err(Error::Invalid(format!("k = {k} outside 1..={n}")));
        }
        if state.chosen.windows(2).any(|w| w[0] >= w[1])
            || state.chosen.iter().any(|&i| i >= n)
            || state.chosen.len() > k
            || state.fixed > state.chosen.len()
        {
            return Err(Error::Invalid("inconsistent branch-and-bound state".into()));
        }
        let mut search = BnbSearch {
            values,
            k,
            diffs: DiffMultiset::for_values(values),
            distinct: 0,
            shared: None,
            state: BnbState { chosen: Vec::new(), ..state.clone() },
        };
        for &i in &state.chosen {
            search.add(i);
            search.state.chosen.push(i);
        }
        Ok(search)
    }

    /// Shares the incumbent value with sibling searches. Only strictly
    /// larger prefixes are cut on the shared value, so a stale or racing
    /// update changes how much is pruned, never the result.
    pub fn share_bound(&mut self, shared: &'a AtomicU64) {
        self.shared = Some(shared);
    }

    pub fn checkpoint(&self) -> BnbState {
        self.state.clone()
    }

    pub fn best(&self) -> Option<&(u64, Vec<usize>)> {
        self.state.best.as_ref()
    }

    pub fn is_done(&self) -> bool {
        self.state.done
    }

    pub fn nodes(&self) -> u64 {
        self.state.nodes
    }

    /// Distinct differences of the current prefix.
    pub fn prefix_count(&self) -> u64 {
        self.distinct
    }

    fn add(&mut self, i: usize) {
        let x = self.values[i];
        if self.diffs.inc(0) {
            self.distinct += 1;
        }
        for &j in &self.state.chosen {
            let y = self.values[j];
            if self.diffs.inc(x - y) {
                self.distinct += 1;
            }
            if self.diffs.inc(y - x) {
                self.distinct += 1;
            }
        }
    }

    fn remove(&mut self, i: usize) {
        let x = self.values[i];
        if self.diffs.dec(0) {
            self.distinct -= 1;
        }
        for &j in &self.state.chosen {
            let y = self.values[j];
            if self.diffs.dec(x - y) {
                self.distinct -= 1;
            }
            if self.diffs.dec(y - x) {
                self.distinct -= 1;
            }
        }
    }

    fn pruned(&self) -> bool {
        if let Some((best, _)) = &self.state.best {
            if self.distinct >= *best {
                return true;
            }
        }
        match self.shared {
            Some(s) => self.distinct > s.load(AtomicOrdering::Relaxed),
            None => false,
        }
    }

    fn backtrack(&mut self) {
        if self.state.chosen.len() <= self.state.fixed {
            self.state.done = true;
            return;
        }
        let i = self.state.chosen.pop().expect("non-empty");
        self.remove(i);
        self.state.next = i + 1;
    }

    /// Runs for at most `budget` further nodes; true once the search is complete.
    pub fn run(&mut self, budget: u64) -> bool {
        let n = self.values.len();
        let stop = self.state.nodes.saturating_add(budget);
        while !self.state.done {
            if self.state.chosen.len() == self.k {
                let better = self
                    .state
                    .best
                    .as_ref()
                    .is_none_or(|(b, _)| self.distinct < *b);
                if better {
                    self.state.best = Some((self.distinct, self.state.chosen.clone()));
                    if let Some(s) = self.shared {
                        s.fetch_min(self.distinct, AtomicOrdering::Relaxed);
                    }
                }
                self.backtrack();
                continue;
            }
            let need = self.k - self.state.chosen.len();
            if self.state.next >= n || n - self.state.next < need {
                self.backtrack();
                continue;
            }
            if self.state.nodes >= stop {
                return false;
            }
            let i = self.state.next;
            self.state.nodes += 1;
            self.add(i);
            if self.pruned() {
                self.remove(i);
                self.state.next = i + 1;
            } else {
                self.state.chosen.push(i);
                self.state.next = i + 1;
            }
        }
        true
    }

    /// Like [`run`](Self::run), handing a snapshot to `on_checkpoint`
    /// every `every` nodes.
    pub fn run_with_checkpoints(
        &mut self,
        budget: u64,
        every: u64,
        mut on_checkpoint: impl FnMut(&BnbState),
    ) -> bool {
        let mut left = budget;
        while left > 0 {
            let slice = left.min(every.max(1));
            let before = self.state.nodes;
            if self.run(slice) {
                return true;
            }
            left -= self.state.nodes - before;
            on_checkpoint(&self.state);
        }
        self.state.done
    }
}

fn report_from(
    n: usize,
    k: usize,
    best: Option<(u64, Vec<usize>)>,
    nodes: u64,
    complete: bool,
) -> Result<LocalReport> {
    let (min_diff, idx) =
        best.ok_or_else(|| Error::Inconclusive(format!("budget exhausted before any {k}-subset was reached")))?;
    Ok(LocalReport {
        k,
        min_diff,
        witness: SubsetMask::from_indices(n, idx)?,
        bound: ThresholdBound::new(k as u64),
        holds: threshold_holds(min_diff, k as u64)?,
        subsets_checked: nodes,
        mode: Mode::BranchAndBound,
        complete,
    })
}

/// Minimum of `|Q - Q|` over `k`-subsets by branch-and-bound.
///
/// If the node budget runs out the report is marked incomplete and its
/// `min_diff` is the best value found so far.
pub fn min_subset_bnb<S: GroundSet + ?Sized>(set: &S, k: usize, budget: u64) -> Result<LocalReport> {
    let mut search = BnbSearch::new(set.values(), k)?;
    let complete = search.run(budget);
    let st = search.checkpoint();
    report_from(set.len(), k, st.best, st.nodes, complete)
}

/// Parallel variant: one subtree per smallest chosen index, sharing the
/// incumbent through an atomic. Returns the same minimum and witness as
/// [`min_subset_bnb`] whenever the search completes.
pub fn min_subset_bnb_parallel<S: GroundSet + Sync + ?Sized>(
    set: &S,
    k: usize,
    budget: u64,
) -> Result<LocalReport> {
    let values = set.values();
    let n = values.len();
    if k == 0 || k > n {
        return Err(Error::Invalid(format!("k = {k} outside 1..={n}")));
    }
    let shared = AtomicU64::new(u64::MAX);
    let spent = AtomicU64::new(0);
    const SLICE: u64 = 1 << 16;
    // (best, nodes, complete) for one first-element branch
    type PieceOutcome = (Option<(u64, Vec<usize>)>, u64, bool);
    let results = (0..=n - k)
        .into_par_iter()
        .map(|first| -> Result<PieceOutcome> {
            let mut search = BnbSearch::with_prefix(values, k, vec![first])?;
            search.share_bound(&shared);
            let mut done = false;
            while !done && spent.load(AtomicOrdering::Relaxed) < budget {
                let before = search.nodes();
                done = search.run(SLICE);
                spent.fetch_add(search.nodes() - before, AtomicOrdering::Relaxed);
            }
            let st = search.checkpoint();
            // the root node for `first` is the fixed prefix itself
            Ok((st.best, st.nodes + 1, done))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut nodes = 0;
    let mut complete = true;
    for (b, nd, done) in results {
        nodes += nd;
        complete &= done;
        if let Some((v, idx)) = b {
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                best = Some((v, idx));
            }
        }
    }
    report_from(n, k, best, nodes, complete)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_baseline, build_pn, BaselineKind, IntegerSet};
    use crate::diffset::DiffScratch;
    use crate::verifier::verify_exhaustive;
    use rand::{Rng, SeedableRng};

    #[test]
    fn full_set_and_agreement_on_p4() {
        let p4 = build_pn(4).unwrap();
        let r = min_subset_bnb(&p4, 16, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.min_diff, 81);
        for k in 1..=16 {
            let e = verify_exhaustive(&p4, k).unwrap();
            let b = min_subset_bnb(&p4, k, DEFAULT_BUDGET).unwrap();
            let bp = min_subset_bnb_parallel(&p4, k, DEFAULT_BUDGET).unwrap();
            assert!(b.complete && bp.complete);
            assert_eq!(e.min_diff, b.min_diff, "k={k}");
            assert_eq!(b.min_diff, bp.min_diff);
            assert_eq!(b.witness, bp.witness);
            assert_eq!(b.witness.popcount(), k);
        }
    }

    #[test]
    fn p6_k4_completes() {
        let p6 = build_pn(6).unwrap();
        let r = min_subset_bnb(&p6, 4, DEFAULT_BUDGET).unwrap();
        assert!(r.complete);
        assert_eq!(r.min_diff, 9);
        assert!(r.holds);
        // random 4-subsets never beat the exact minimum
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let mut scratch = DiffScratch::for_values(p6.values());
        for _ in 0..2000 {
            let mut idx: Vec<usize> = Vec::new();
            while idx.len() < 4 {
                let i = rng.gen_range(0..64);
                if !idx.contains(&i) {
                    idx.push(i);
                }
            }
            let vals: Vec<i64> = idx.iter().map(|&i| p6.values()[i]).collect();
            assert!(scratch.count(&vals) >= r.min_diff);
        }
    }

    #[test]
    fn budget_exhaustion_and_resume() {
        let ap = build_baseline(BaselineKind::RandomIntegers, 18, 9).unwrap();
        let full = min_subset_bnb(&ap, 6, DEFAULT_BUDGET).unwrap();
        let partial = min_subset_bnb(&ap, 6, 10).unwrap();
        assert!(!partial.complete);
        assert!(partial.min_diff >= full.min_diff);

        let mut search = BnbSearch::new(ap.values(), 6).unwrap();
        let mut snapshots = Vec::new();
        assert!(!search.run_with_checkpoints(40, 7, |s| snapshots.push(s.clone())));
        assert!(!snapshots.is_empty());
        let mut resumed = BnbSearch::resume(ap.values(), 6, search.checkpoint()).unwrap();
        assert!(resumed.run(u64::MAX));
        assert_eq!(resumed.best().unwrap().0, full.min_diff);
        assert_eq!(
            SubsetMask::from_indices(18, resumed.best().unwrap().1.clone()).unwrap(),
            full.witness
        );
    }

    #[test]
    fn budget_too_small_for_any_leaf() {
        let p4 = build_pn(4).unwrap();
        assert!(matches!(min_subset_bnb(&p4, 8, 3), Err(Error::Inconclusive(_))));
    }

    #[test]
    fn prefix_count_is_monotone() {
        let set = IntegerSet::new(vec![0, 3, 7, 8, 15, 22, 23]).unwrap();
        let mut s = BnbSearch::new(set.values(), 7).unwrap();
        let mut last = 0;
        // with k = |P| nothing is pruned before the first leaf
        while s.best().is_none() {
            s.run(1);
            if s.best().is_some() {
                break;
            }
            assert!(s.prefix_count() >= last);
            last = s.prefix_count();
        }
    }

    #[test]
    fn invalid_states_rejected() {
        let v = [0i64, 1, 2];
        assert!(BnbSearch::new(&v, 0).is_err());
        assert!(BnbSearch::new(&v, 4).is_err());
        let bad = BnbState { chosen: vec![2, 1], next: 3, best: None, nodes: 0, done: false, fixed: 0 };
        assert!(BnbSearch::resume(&v, 2, bad).is_err());
    }
}
