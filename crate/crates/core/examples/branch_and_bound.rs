//! Exact minimum `|Q - Q|` over `k`-subsets of `P_6` (64 points), beyond the
//! reach of plain enumeration, plus a budgeted search resumed from a
//! checkpoint.

use local_diffsets::verifier::{min_subset_bnb, min_subset_bnb_parallel, BnbSearch};
use local_diffsets::{build_pn, GroundSet, Result};

pub fn run() -> Result<String> {
    let p6 = build_pn(6)?;
    let mut out = String::new();
    for k in 2..=5 {
        let r = min_subset_bnb_parallel(&p6, k, 50_000_000)?;
        assert!(r.complete && r.holds);
        out.push_str(&format!(
            "k={k} min |Q-Q| = {} vs {} after {} nodes\n",
            r.min_diff, r.bound, r.subsets_checked
        ));
    }

    // interrupt after 1000 nodes, then resume from the snapshot
    let values = p6.values();
    let mut search = BnbSearch::new(values, 4)?;
    assert!(!search.run(1000));
    let snapshot = search.checkpoint();
    let mut resumed = BnbSearch::resume(values, 4, snapshot)?;
    while !resumed.run(100_000) {}
    let (best, witness) = resumed.best().cloned().expect("search reached a leaf");
    let direct = min_subset_bnb(&p6, 4, u64::MAX)?;
    assert_eq!(best, direct.min_diff);
    out.push_str(&format!("resumed search: {best} at indices {witness:?}\n"));
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
