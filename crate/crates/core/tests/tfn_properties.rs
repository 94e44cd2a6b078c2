use proptest::prelude::*;
use qoseval_core::fuzzy::{degree_of_possibility, Tfn};

fn tfn() -> impl Strategy<Value = Tfn> {
    (0.01f64..10.0, 0.0f64..5.0, 0.0f64..5.0)
        .prop_map(|(l, a, b)| Tfn::new(l, l + a, l + a + b).unwrap())
}

fn valid(t: &Tfn) -> bool {
    let [l, m, u] = t.components();
    0.0 < l && l <= m && m <= u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn add_mean_reciprocal_stay_valid(a in tfn(), b in tfn(), c in tfn()) {
        prop_assert!(valid(&a.add(&b)));
        prop_assert!(valid(&a.reciprocal()));
        prop_assert!(valid(&Tfn::mean(&[a, b, c]).unwrap()));
    }

    #[test]
    fn reciprocal_is_an_involution(a in tfn()) {
        prop_assert!(a.reciprocal().reciprocal().approx_eq(&a, 1e-12));
    }

    #[test]
    fn add_is_commutative_and_associative(a in tfn(), b in tfn(), c in tfn()) {
        prop_assert!(a.add(&b).approx_eq(&b.add(&a), 1e-12));
        prop_assert!(a.add(&b).add(&c).approx_eq(&a.add(&b.add(&c)), 1e-12));
    }

    #[test]
    fn possibility_is_bounded_and_one_side_certain(a in tfn(), b in tfn()) {
        let (ab, ba) = (degree_of_possibility(&a, &b), degree_of_possibility(&b, &a));
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((0.0..=1.0).contains(&ba));
        prop_assert_eq!(ab.max(ba), 1.0);
    }
}

/// `sup_{x >= y} min(mu_b(x), mu_a(y))` on a uniform grid. Sweeping `x`
/// upward, the best `y <= x` is the running maximum of `mu_a`.
fn grid_possibility(b: &Tfn, a: &Tfn, points: usize) -> f64 {
    let lo = a.lower().min(b.lower());
    let hi = a.upper().max(b.upper());
    let step = (hi - lo) / (points - 1) as f64;
    let mut best_a: f64 = 0.0;
    let mut sup: f64 = 0.0;
    for k in 0..points {
        let x = lo + step * k as f64;
        best_a = best_a.max(a.membership(x));
        sup = sup.max(b.membership(x).min(best_a));
    }
    sup
}

fn spread_tfn() -> impl Strategy<Value = Tfn> {
    (0.1f64..10.0, 0.2f64..5.0, 0.2f64..5.0)
        .prop_map(|(l, a, b)| Tfn::new(l, l + a, l + a + b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closed_form_matches_grid_oracle(a in spread_tfn(), b in spread_tfn()) {
        let closed = degree_of_possibility(&b, &a);
        let oracle = grid_possibility(&b, &a, 100_001);
        prop_assert!((closed - oracle).abs() < 1e-3, "closed {closed} oracle {oracle} for {b} >= {a}");
    }
}
