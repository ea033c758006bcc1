use altbase::{greedy_expand_cantor, AlternateBase, CantorBaseStream, DigitWord, StatePoint};
use proptest::prelude::*;

fn bases() -> impl Strategy<Value = AlternateBase> {
    prop::collection::vec(1.01f64..4.5, 1..=4).prop_map(|b| AlternateBase::new(b).unwrap())
}

fn base_and_unit() -> impl Strategy<Value = (AlternateBase, f64)> {
    (bases(), 0.0f64..1.0)
}

proptest! {
    #[test]
    fn greedy_partial_sum_sandwich((b, u) in base_and_unit(), n in 0usize..30) {
        let x = u * b.xmax(0);
        let w = b.greedy_expand(x, n).unwrap();
        let v = b.evaluate(&w, false).unwrap();
        let tail = b.xmax(n) / b.partial_product(0, n);
        prop_assert!(v <= x + 1e-12);
        prop_assert!(x < v + tail + 1e-12);
    }

    #[test]
    fn lazy_partial_sum_sandwich((b, u) in base_and_unit(), n in 0usize..30) {
        let x = (1.0 - u) * b.xmax(0);
        let w = b.lazy_expand(x, n).unwrap();
        prop_assert!(b.evaluate(&w, false).unwrap() <= x + 1e-12);
        prop_assert!(x <= b.evaluate(&w, true).unwrap() + 1e-12);
    }

    #[test]
    fn orbits_stay_in_domain((b, u) in base_and_unit()) {
        let mut g = StatePoint::new(0, u * b.xmax(0));
        let mut l = StatePoint::new(0, (1.0 - u) * b.xmax(0));
        for _ in 0..2000 {
            let (ng, dg) = b.greedy_step(g).unwrap();
            let (nl, dl) = b.lazy_step(l).unwrap();
            prop_assert!(ng.value >= 0.0 && ng.value < b.xmax(ng.slot));
            prop_assert!(nl.value > 0.0 && nl.value <= b.xmax(nl.slot));
            prop_assert!(dg <= b.alphabet(g.slot) && dl <= b.alphabet(l.slot));
            g = ng;
            l = nl;
        }
    }

    #[test]
    fn recurrence_identity(b in bases()) {
        for i in 0..b.len() {
            let r = b.xmax(i) * b.beta(i) - b.alphabet(i) as f64 - b.xmax(i + 1);
            prop_assert!(r.abs() < 1e-12);
            prop_assert!(b.xmax(i) >= 1.0);
        }
    }

    #[test]
    fn shift_is_cyclic(b in bases(), n in -6i64..6) {
        let p = b.len() as i64;
        prop_assert_eq!(b.shift(p), b.clone());
        prop_assert_eq!(b.shift(0), b.clone());
        prop_assert_eq!(b.shift(n).shift(-n), b.clone());
        prop_assert_eq!(b.shift(n).beta(0), b.beta(n.rem_euclid(p) as usize));
    }

    #[test]
    fn phi_is_an_involution((b, u) in base_and_unit()) {
        let s = StatePoint::new(0, u * b.xmax(0));
        let back = b.phi(b.phi(s).unwrap()).unwrap();
        prop_assert!((back.value - s.value).abs() < 1e-12);
    }

    #[test]
    fn single_base_matches_classical_map(beta in 1.01f64..6.0, x in 0.0f64..1.0) {
        let b = AlternateBase::new(vec![beta]).unwrap();
        let w = b.greedy_expand(x, 20).unwrap();
        let mut y = x;
        for (k, &d) in w.digits.iter().enumerate() {
            let by = beta * y;
            let classical = by.floor();
            // Digits can only differ when beta * y is within rounding of an integer.
            if (by - by.round()).abs() > 1e-9 {
                prop_assert_eq!(d as f64, classical, "position {}", k);
            }
            y = by - d as f64;
        }
    }

    #[test]
    fn cantor_periodic_stream_reduces((b, x) in base_and_unit(), n in 0usize..20) {
        let mut stream = CantorBaseStream::periodic(&b);
        prop_assert_eq!(greedy_expand_cantor(&mut stream, x, n).unwrap(), b.greedy_expand(x, n).unwrap());
    }

    #[test]
    fn alphabet_violations_are_reported(b in bases(), k in 0usize..4) {
        let mut digits = vec![0u32; 4];
        digits[k] = b.alphabet(k) + 1;
        prop_assert!(b.evaluate(&DigitWord::new(digits, 0), false).is_err());
    }
}

#[test]
fn long_orbits_stay_in_domain() {
    let r = 13f64.sqrt();
    let b = AlternateBase::new(vec![(1.0 + r) / 2.0, (5.0 + r) / 6.0]).unwrap();
    for &u in &[0.123, 0.5, 0.987] {
        let mut g = StatePoint::new(0, u * b.xmax(0));
        let mut l = StatePoint::new(0, u * b.xmax(0));
        for _ in 0..1_000_000 {
            g = b.greedy_step(g).unwrap().0;
            l = b.lazy_step(l).unwrap().0;
            assert!(g.value >= 0.0 && g.value < b.xmax(g.slot));
            assert!(l.value > 0.0 && l.value <= b.xmax(l.slot));
        }
    }
}

#[test]
fn single_precision_agrees_on_the_figure_example() {
    let r = 13f32.sqrt();
    let b = AlternateBase::<f32>::new(vec![(1.0 + r) / 2.0, (5.0 + r) / 6.0]).unwrap();
    let x = (1.0 + 5f32.sqrt()) / 5.0;
    assert_eq!(b.greedy_expand(x, 5).unwrap().to_string(), "10102");
    assert_eq!(b.lazy_expand(x, 5).unwrap().to_string(), "01112");
}
