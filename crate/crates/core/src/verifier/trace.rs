//! Node-by-node instrumentation of the inductive proof of the local bound.
//!
//! A node pairs two parts `Q1 ⊆ t1 + P_l` and `Q2 ⊆ t2 + P_l`, where the
//! translations are patterns over generators `l+1..n`. Splitting each part
//! on generator `l` gives `A, B` (from `Q1`) and `C, D` (from `Q2`). At
//! every internal node this module checks:
//!
//! 1. the trit at position `l` is 0 on `(A-C) ∪ (B-D)`, -1 on `A-D` and
//!    +1 on `B-C`, and the three difference sets are pairwise disjoint;
//! 2. `|Q1-Q2| >= |A-D| + |B-C| + max(|A-C|, |B-D|)`;
//! 3. `|Q1-Q2| >= (ad)^p + (bc)^p + max(ac, bd)^p`;
//! 4. `(ad)^p + (bc)^p + max(ac, bd)^p >= ((a+b)(c+d))^p`;
//! 5. `|Q1-Q2| >= (|Q1| |Q2|)^p`,
//!
//! and at every leaf (`l = 0`) that `|Q1-Q2| = 1`. Any failure is returned
//! as [`Error::ProofViolation`] naming the node.

use std::collections::HashSet;

use crate::construction::PointSet;
use crate::diffset::DiffScratch;
use crate::interval::{Interval, DEFAULT_PRECISION};
use crate::model::{balanced_trit, SubsetMask};
use crate::powers::{PowerEvaluator, PowerSum};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionTrace {
    /// `l`: the parts live in translates of `P_l`; the split is on generator `l`.
    pub level: usize,
    /// Translation patterns (bits `>= l`) of the two parts.
    pub t1: u64,
    pub t2: u64,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    /// `|Q1 - Q2|`.
    pub cross: u64,
    /// `|A-C|, |B-D|, |A-D|, |B-C|`.
    pub class_counts: [u64; 4],
    /// Enclosure of `(ad)^p + (bc)^p + max(ac, bd)^p`.
    pub three_terms: Interval,
    /// Enclosure of `((a+b)(c+d))^p`.
    pub product_power: Interval,
}

impl DecompositionTrace {
    pub fn node_label(&self) -> String {
        format!("level={} t1={:#b} t2={:#b}", self.level, self.t1, self.t2)
    }
}

struct Part {
    bits: Vec<u64>,
    values: Vec<i64>,
}

impl Part {
    fn split(&self, j: usize) -> (Part, Part) {
        let mut lo = Part { bits: Vec::new(), values: Vec::new() };
        let mut hi = Part { bits: Vec::new(), values: Vec::new() };
        for (&b, &v) in self.bits.iter().zip(&self.values) {
            let dst = if b >> j & 1 == 0 { &mut lo } else { &mut hi };
            dst.bits.push(b);
            dst.values.push(v);
        }
        (lo, hi)
    }

    fn len(&self) -> usize {
        self.bits.len()
    }
}

fn violation(level: usize, t1: u64, t2: u64, msg: impl Into<String>) -> Error {
    Error::ProofViolation {
        node: format!("level={level} t1={t1:#b} t2={t2:#b}"),
        msg: msg.into(),
    }
}

fn differences(a: &[i64], b: &[i64]) -> HashSet<i64> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x - y)).collect()
}

/// Runs the proof instrumentation on the subset `mask` of `set`.
pub fn trace_decomposition(set: &PointSet, mask: &SubsetMask) -> Result<Vec<DecompositionTrace>> {
    trace_decomposition_with(&mut PowerEvaluator::new(), set, mask)
}

/// As [`trace_decomposition`], reusing an evaluator's cache of `r^p` values.
pub fn trace_decomposition_with(
    ev: &mut PowerEvaluator,
    set: &PointSet,
    mask: &SubsetMask,
) -> Result<Vec<DecompositionTrace>> {
    let q = set.subset(mask)?;
    let root = Part {
        bits: q.elements().iter().map(|e| e.bits()).collect(),
        values: crate::construction::GroundSet::values(&q).to_vec(),
    };
    let mut scratch = DiffScratch::for_values(&root.values);
    let mut out = Vec::new();
    if root.len() == 0 {
        return Ok(out);
    }
    let root2 = Part { bits: root.bits.clone(), values: root.values.clone() };
    let mut stack = vec![(set.levels(), 0u64, 0u64, root, root2)];
    while let Some((level, t1, t2, q1, q2)) = stack.pop() {
        let cross = scratch.count_cross(&q1.values, &q2.values);
        if level == 0 {
            if cross != 1 || q1.len() != 1 || q2.len() != 1 {
                return Err(violation(level, t1, t2, format!("leaf has |Q1-Q2| = {cross}")));
            }
            continue;
        }
        let j = level - 1;
        let (a, b) = q1.split(j);
        let (c, d) = q2.split(j);

        for (x, y, want) in [(&a, &c, 0i8), (&b, &d, 0), (&a, &d, -1), (&b, &c, 1)] {
            for &u in &x.values {
                for &v in &y.values {
                    let got = balanced_trit(u - v, j);
                    if got != want {
                        return Err(violation(
                            level,
                            t1,
                            t2,
                            format!("difference {} has trit {got} at generator {level}, expected {want}", u - v),
                        ));
                    }
                }
            }
        }
        let mut same = differences(&a.values, &c.values);
        same.extend(differences(&b.values, &d.values));
        let minus = differences(&a.values, &d.values);
        let plus = differences(&b.values, &c.values);
        if !same.is_disjoint(&minus) || !same.is_disjoint(&plus) || !minus.is_disjoint(&plus) {
            return Err(violation(level, t1, t2, "difference classes overlap"));
        }

        let counts = [
            scratch.count_cross(&a.values, &c.values),
            scratch.count_cross(&b.values, &d.values),
            scratch.count_cross(&a.values, &d.values),
            scratch.count_cross(&b.values, &c.values),
        ];
        let class_sum = counts[2] + counts[3] + counts[0].max(counts[1]);
        if cross < class_sum {
            return Err(violation(
                level,
                t1,
                t2,
                format!("|Q1-Q2| = {cross} below class sum {class_sum}"),
            ));
        }

        let (na, nb, nc, nd) = (a.len() as u64, b.len() as u64, c.len() as u64, d.len() as u64);
        let mut three = PowerSum::new();
        three
            .add_power(na * nd)
            .add_power(nb * nc)
            .add_power((na * nc).max(nb * nd));
        let product = PowerSum::power((na + nb) * (nc + nd));
        let count = PowerSum::integer(cross as i128);
        if !ev.at_least(&count, &three)? {
            return Err(violation(level, t1, t2, format!("|Q1-Q2| = {cross} below (ad)^p+(bc)^p+max(ac,bd)^p")));
        }
        if !ev.at_least(&three, &product)? {
            return Err(violation(
                level,
                t1,
                t2,
                format!("(ad)^p+(bc)^p+max(ac,bd)^p < ((a+b)(c+d))^p at a={na} b={nb} c={nc} d={nd}"),
            ));
        }
        if !ev.at_least(&count, &product)? {
            return Err(violation(level, t1, t2, format!("|Q1-Q2| = {cross} below (|Q1||Q2|)^p")));
        }

        out.push(DecompositionTrace {
            level,
            t1,
            t2,
            a: a.len(),
            b: b.len(),
            c: c.len(),
            d: d.len(),
            cross,
            class_counts: counts,
            three_terms: ev.enclose(&three, DEFAULT_PRECISION),
            product_power: ev.enclose(&product, DEFAULT_PRECISION),
        });

        let bit = 1u64 << j;
        // pushed in reverse so the stack visits (A,C), (A,D), (B,C), (B,D)
        let children = [
            (b.len() > 0 && d.len() > 0, t1 | bit, t2 | bit, &b, &d),
            (b.len() > 0 && c.len() > 0, t1 | bit, t2, &b, &c),
            (a.len() > 0 && d.len() > 0, t1, t2 | bit, &a, &d),
            (a.len() > 0 && c.len() > 0, t1, t2, &a, &c),
        ];
        for (live, s1, s2, x, y) in children {
            if live {
                stack.push((
                    j,
                    s1,
                    s2,
                    Part { bits: x.bits.clone(), values: x.values.clone() },
                    Part { bits: y.bits.clone(), values: y.values.clone() },
                ));
            }
        }
    }
    Ok(out)
}
