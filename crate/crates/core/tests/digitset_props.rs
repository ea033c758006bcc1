use altbase::digitset::{
    compare_transforms, composed_greedy, composed_lazy, delta_set, f_beta,
    nondecreasing_bruteforce, nondecreasing_by_criterion, DigitSet,
};
use altbase::measure::compose_extended_map;
use altbase::AlternateBase;
use proptest::prelude::*;

fn bases() -> impl Strategy<Value = AlternateBase> {
    prop::collection::vec(1.01f64..5.0, 1..=4).prop_map(|b| AlternateBase::new(b).unwrap())
}

/// Breakpoints of both greedy maps compared by the decision procedure.
fn breakpoints(b: &AlternateBase, ds: &DigitSet) -> Vec<f64> {
    let mut v: Vec<f64> = ds.digits().iter().map(|d| d / ds.beta()).collect();
    v.extend_from_slice(compose_extended_map(b).breakpoints());
    v
}

fn away_from(points: &[f64], x: f64, eps: f64) -> bool {
    points.iter().all(|&p| (p - x).abs() > eps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn delta_set_is_allowable_and_symmetric(b in bases()) {
        let ds = delta_set(&b).unwrap();
        prop_assert!(ds.is_allowable());
        prop_assert_eq!(ds.digits()[0], 0.0);
        prop_assert_eq!(ds.digits()[1], 1.0);
        let top: Vec<u32> = b.alphabets().to_vec();
        prop_assert!((ds.max_digit() - f_beta(&b, &top).unwrap()).abs() < 1e-9);
        prop_assert!((ds.xmax() - b.xmax(0)).abs() < 1e-10);
        let t = ds.tilde();
        prop_assert_eq!(t.digits().len(), ds.digits().len());
        for (a, c) in t.digits().iter().zip(ds.digits()) {
            prop_assert!((a - c).abs() < 1e-9 * ds.max_digit().max(1.0));
        }
    }

    #[test]
    fn tilde_is_an_involution(mut digits in prop::collection::vec(0.01f64..20.0, 1..8), beta in 1.1f64..6.0) {
        digits.push(0.0);
        let ds = DigitSet::new(digits, beta).unwrap();
        let back = ds.tilde().tilde();
        prop_assert_eq!(back.digits().len(), ds.digits().len());
        for (a, c) in back.digits().iter().zip(ds.digits()) {
            prop_assert!((a - c).abs() < 1e-12);
        }
    }

    #[test]
    fn criterion_matches_bruteforce(b in bases()) {
        prop_assert_eq!(nondecreasing_by_criterion(&b), nondecreasing_bruteforce(&b).unwrap());
    }

    #[test]
    fn nondecreasing_bases_coincide(b in bases()) {
        if nondecreasing_by_criterion(&b) || b.len() <= 2 {
            prop_assert!(compare_transforms(&b).unwrap().is_empty());
        }
    }

    #[test]
    fn greedy_delta_map_never_exceeds_composed_map(b in bases()) {
        let ds = delta_set(&b).unwrap();
        let cuts = breakpoints(&b, &ds);
        let top = ds.xmax();
        for k in 0..1000 {
            let x = top * (k as f64 + 0.5) / 1000.0;
            if !away_from(&cuts, x, 1e-9) {
                continue;
            }
            let lhs = ds.greedy_step(x).unwrap().0;
            let rhs = composed_greedy(&b, x).unwrap();
            prop_assert!(lhs <= rhs + 1e-9, "x = {}: {} > {}", x, lhs, rhs);
            let y = top - x;
            let lazy_lhs = ds.lazy_step(y).unwrap().0;
            let lazy_rhs = composed_lazy(&b, y).unwrap();
            prop_assert!(lazy_lhs >= lazy_rhs - 1e-9, "y = {}: {} < {}", y, lazy_lhs, lazy_rhs);
        }
    }

    #[test]
    fn report_matches_sampled_maps(b in bases()) {
        let ds = delta_set(&b).unwrap();
        let report = compare_transforms(&b).unwrap();
        let cuts = breakpoints(&b, &ds);
        let top = ds.xmax();
        let inside = |x: f64| report.intervals.iter().any(|i| i.start <= x && x < i.end);
        let inside_lazy = |y: f64| report.lazy_intervals.iter().any(|&(s, e)| s < y && y <= e);
        for k in 0..500 {
            let x = top * (k as f64 + 0.5) / 500.0;
            if !away_from(&cuts, x, 1e-7) {
                continue;
            }
            let differ = (ds.greedy_step(x).unwrap().0 - composed_greedy(&b, x).unwrap()).abs() > 1e-7;
            prop_assert_eq!(differ, inside(x), "greedy at x = {}", x);
            // The lazy side is sampled directly, independently of the conjugation.
            let y = top - x;
            let lazy_differ = (ds.lazy_step(y).unwrap().0 - composed_lazy(&b, y).unwrap()).abs() > 1e-7;
            prop_assert_eq!(lazy_differ, inside_lazy(y), "lazy at y = {}", y);
        }
        for i in &report.intervals {
            prop_assert!(i.delta_image < i.composed_image);
        }
    }

    #[test]
    fn delta_steps_are_conjugate(b in bases(), u in 0.0f64..1.0) {
        let ds = delta_set(&b).unwrap();
        let t = ds.tilde();
        let top = ds.xmax();
        let x = u * top;
        let cuts: Vec<f64> = ds.digits().iter().map(|d| d / ds.beta()).collect();
        if away_from(&cuts, x, 1e-9) && x > 0.0 {
            let lhs = t.lazy_step(top - x).unwrap().0;
            let rhs = top - ds.greedy_step(x).unwrap().0;
            prop_assert!((lhs - rhs).abs() < 1e-9 * top.max(1.0));
        }
    }
}

#[test]
fn mirrored_golden_set() {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let ds = DigitSet::new(vec![0.0, 1.0, phi + 1.0 / phi, phi * phi], phi).unwrap();
    let t = ds.tilde();
    assert!((t.digits()[1] - (1.0 - 1.0 / phi)).abs() < 1e-14);
    let top = ds.xmax();
    let lhs = t.lazy_step(top - 0.3).unwrap().0;
    assert!((lhs - (top - ds.greedy_step(0.3).unwrap().0)).abs() < 1e-12);
    assert_eq!(ds.lazy_step(top).unwrap(), (top, phi * phi));
}

#[test]
fn sqrt13_delta_set() {
    let r = 13f64.sqrt();
    let b = AlternateBase::new(vec![(1.0 + r) / 2.0, (5.0 + r) / 6.0]).unwrap();
    let b1 = b.beta(1);
    let ds = delta_set(&b).unwrap();
    let expected = [0.0, 1.0, b1, b1 + 1.0, 2.0 * b1, 2.0 * b1 + 1.0];
    assert_eq!(ds.digits().len(), expected.len());
    for (a, e) in ds.digits().iter().zip(expected) {
        assert!((a - e).abs() < 1e-12);
    }
}

#[test]
fn roots_base_is_not_monotone() {
    let b = AlternateBase::new(vec![5f64.sqrt() / 2.0, 6f64.sqrt() / 2.0, 7f64.sqrt() / 2.0]).unwrap();
    assert!(!nondecreasing_bruteforce(&b).unwrap());
    assert!(f_beta(&b, &[0, 1, 1]).unwrap() > f_beta(&b, &[1, 0, 0]).unwrap());
    let report = compare_transforms(&b).unwrap();
    assert!(report.intervals.iter().all(|i| i.start >= 1.0));
}
