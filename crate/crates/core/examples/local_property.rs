//! Every `k`-subset of `P_4` spans at least `k^{log2 3}` differences.
//!
//! The exhaustive check walks all 2^16 subsets; an arithmetic progression of
//! the same size fails already at `k = 4`.

use local_diffsets::construction::BaselineKind;
use local_diffsets::verifier::{verify_all_k, verify_exhaustive, CSV_HEADER};
use local_diffsets::{build_baseline, build_pn, Result};

pub fn run() -> Result<String> {
    let p4 = build_pn(4)?;
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in verify_all_k(&p4)? {
        assert!(r.holds);
        out.push_str(&r.csv_row());
        out.push('\n');
    }

    let ap = build_baseline(BaselineKind::ArithmeticProgression, 16, 0)?;
    let r = verify_exhaustive(&ap, 4)?;
    assert!(!r.holds);
    out.push_str(&format!(
        "\nAP of length 16, k = 4: min |Q-Q| = {} below {} (witness {})\n",
        r.min_diff, r.bound, r.witness
    ));
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
