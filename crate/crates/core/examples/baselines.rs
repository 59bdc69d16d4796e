//! The construction against classical comparison sets of the same size:
//! arithmetic progressions have few differences but fail locally, Sidon
//! sets pass locally but have quadratically many differences.

use local_diffsets::construction::BaselineKind;
use local_diffsets::verifier::min_subset_bnb_parallel;
use local_diffsets::{build_baseline, build_pn, diff_count, distance_count, GroundSet, Result};

fn row<S: GroundSet + Sync>(name: &str, set: &S) -> Result<String> {
    let r = min_subset_bnb_parallel(set, 4, u64::MAX)?;
    Ok(format!(
        "{name:<10} n={:<3} |A-A|={:<5} distances={:<4} min k=4: {} ({})\n",
        set.len(),
        diff_count(set),
        distance_count(set),
        r.min_diff,
        if r.holds { "holds" } else { "fails" }
    ))
}

pub fn run() -> Result<String> {
    let mut out = String::new();
    out.push_str(&row("P_5", &build_pn(5)?)?);
    out.push_str(&row("AP", &build_baseline(BaselineKind::ArithmeticProgression, 32, 0)?)?);
    out.push_str(&row("Sidon", &build_baseline(BaselineKind::Sidon, 32, 0)?)?);
    out.push_str(&row("random", &build_baseline(BaselineKind::RandomIntegers, 32, 7)?)?);
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
