//! Build projected hypercubes and count their differences exactly.
//!
//! `|P_n - P_n| = 3^n` while `|P_n| = 2^n`, so the difference set grows like
//! `|P|^{log2 3}` instead of quadratically.

use local_diffsets::diffset::profile_csv;
use local_diffsets::model::pow3;
use local_diffsets::{build_pn, build_truncated, diff_count, diff_profile, distance_count, Result};

pub fn run() -> Result<String> {
    let mut out = String::new();
    out.push_str("n  |P|   |P-P|   3^n    distances\n");
    for n in 0..=10 {
        let p = build_pn(n)?;
        let d = diff_count(&p);
        assert_eq!(d as i64, pow3(n));
        out.push_str(&format!(
            "{n:<2} {:<5} {d:<7} {:<6} {}\n",
            p.elements().len(),
            pow3(n),
            distance_count(&p)
        ));
    }

    // every difference of P_2 appears; the profile is keyed by canonical code
    let p2 = build_pn(2)?;
    out.push_str("\nprofile of P_2\n");
    out.push_str(&profile_csv(&diff_profile(&p2)));

    // truncations keep the small-doubling behaviour for any size
    out.push_str("\ntruncated sets\n");
    for n in [3usize, 5, 100, 1000] {
        let t = build_truncated(n)?;
        out.push_str(&format!("n={n} |A-A|={}\n", diff_count(&t)));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
