//! Walk the inductive proof of the local bound on a concrete subset,
//! printing the split sizes and both sides of each inequality per node.

use local_diffsets::model::SubsetMask;
use local_diffsets::verifier::trace_decomposition;
use local_diffsets::{build_pn, Result};

pub fn run() -> Result<String> {
    let mut out = String::new();
    let p2 = build_pn(2)?;
    let q = SubsetMask::from_indices(4, [0, 1, 2])?;
    for node in trace_decomposition(&p2, &q)? {
        out.push_str(&format!(
            "{}: (a,b,c,d)=({},{},{},{}) |Q1-Q2|={} three-term sum {} >= {}\n",
            node.node_label(),
            node.a,
            node.b,
            node.c,
            node.d,
            node.cross,
            node.three_terms,
            node.product_power
        ));
    }

    // a scattered 10-point subset of P_5
    let p5 = build_pn(5)?;
    let q = SubsetMask::from_indices(32, [0, 3, 5, 6, 9, 14, 17, 22, 28, 31])?;
    let nodes = trace_decomposition(&p5, &q)?;
    let deepest = nodes.iter().map(|n| n.level).min().unwrap_or(0);
    out.push_str(&format!(
        "\n10-point subset of P_5: {} internal nodes checked, down to level {deepest}\n",
        nodes.len()
    ));
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
