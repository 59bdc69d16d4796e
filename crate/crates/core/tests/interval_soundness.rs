//! Interval operations enclose the exact image: random points inside the
//! input boxes, evaluated at 340 bits (~100 digits), must land inside the
//! 64-bit enclosures.

use proptest::prelude::*;
use rug::ops::Pow;
use rug::Float;

use local_diffsets::powers::p_enclosure;
use local_diffsets::Interval;

const ORACLE_BITS: u32 = 340;

fn boxed(lo: f64, w: f64) -> Interval {
    Interval::from_f64_bounds(64, lo, lo + w).unwrap()
}

fn inside(lo: f64, w: f64, t: f64) -> Float {
    Float::with_val(ORACLE_BITS, lo) + Float::with_val(ORACLE_BITS, w) * t
}

fn p_oracle() -> Float {
    Float::with_val(ORACLE_BITS, 3).ln() / Float::with_val(ORACLE_BITS, 4).ln()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20_000))]

    #[test]
    fn arithmetic_encloses(a in -50.0f64..50.0, wa in 0.0f64..2.0, b in -50.0f64..50.0, wb in 0.0f64..2.0,
                           s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let (x, y) = (boxed(a, wa), boxed(b, wb));
        let (px, py) = (inside(a, wa, s), inside(b, wb, t));
        prop_assert!((&x + &y).contains(&Float::with_val(ORACLE_BITS, &px + &py)));
        prop_assert!((&x - &y).contains(&Float::with_val(ORACLE_BITS, &px - &py)));
        prop_assert!((&x * &y).contains(&Float::with_val(ORACLE_BITS, &px * &py)));
        prop_assert!(x.sqr().contains(&Float::with_val(ORACLE_BITS, px.square_ref())));
        prop_assert!(x.abs().contains(&Float::with_val(ORACLE_BITS, px.abs_ref())));
        if !y.contains_zero() {
            prop_assert!(x.div(&y).unwrap().contains(&Float::with_val(ORACLE_BITS, &px / &py)));
        }
    }

    #[test]
    fn transcendental_encloses(a in 1e-3f64..40.0, wa in 0.0f64..1.0, s in 0.0f64..=1.0,
                               e in -3.0f64..3.0, we in 0.0f64..0.5, t in 0.0f64..=1.0) {
        let x = boxed(a, wa);
        let px = inside(a, wa, s);
        prop_assert!(x.ln().unwrap().contains(&Float::with_val(ORACLE_BITS, px.ln_ref())));
        let small = boxed(a / 10.0, wa / 10.0);
        let ps = inside(a / 10.0, wa / 10.0, s);
        prop_assert!(small.exp().contains(&Float::with_val(ORACLE_BITS, ps.exp_ref())));
        let ex = boxed(e, we);
        let pe = inside(e, we, t);
        let exact = Float::with_val(ORACLE_BITS, (&px).pow(&pe));
        prop_assert!(x.pow(&ex).unwrap().contains(&exact));
    }

    #[test]
    fn irrational_exponent_powers_enclose(a in 1e-3f64..100.0, wa in 0.0f64..1.0, s in 0.0f64..=1.0, k in -3i64..3) {
        let p = p_enclosure(64);
        let e = &p.scale(2) + &Interval::from_int(64, k);
        let x = boxed(a, wa);
        let px = inside(a, wa, s);
        let exact = Float::with_val(ORACLE_BITS, (&px).pow(&Float::with_val(ORACLE_BITS, p_oracle() * 2u32 + k)));
        prop_assert!(x.pow(&e).unwrap().contains(&exact));
    }
}
