//! Property tests for sequence, norm and singular-value invariants.

use ciflab_core::lemmalab::{holder_sample, product_slack, TrialConfig, PRODUCT_SLACK};
use ciflab_core::orlicz::{orlicz2_norm, orlicz_norm, young, QuadratureGrid, TorusFunction};
use ciflab_core::seq::{direct_sum_mu, mu_from_eigs, tensor_mu, weak_quasinorm, SingularValueSeq};
use ciflab_core::Exec;
use proptest::prelude::*;

fn spectrum() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1e3..1e3f64, 0..60)
}

fn grid_values(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0..50.0f64, n)
}

const RES: usize = 32;

fn custom(values: Vec<f64>) -> TorusFunction {
    TorusFunction::custom_grid(1, RES, values).unwrap()
}

fn grid() -> QuadratureGrid {
    QuadratureGrid::uniform(1, RES).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mu_is_nonincreasing_and_idempotent(eigs in spectrum()) {
        let mu = mu_from_eigs(&eigs);
        prop_assert!(mu.values().windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(mu_from_eigs(mu.values()), mu);
    }

    #[test]
    fn weak_quasinorm_is_homogeneous(eigs in spectrum(), c in 0.0..100.0f64, p in 0.5..4.0f64) {
        let mu = mu_from_eigs(&eigs);
        let lhs = weak_quasinorm(&mu.scaled(c).unwrap(), p).unwrap();
        let rhs = c * weak_quasinorm(&mu, p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
    }

    #[test]
    fn direct_sum_quasi_triangle(a in spectrum(), b in spectrum()) {
        let (a, b) = (mu_from_eigs(&a), mu_from_eigs(&b));
        let sum = direct_sum_mu(&[a.clone(), b.clone()]);
        let lhs = weak_quasinorm(&sum, 2.0).unwrap();
        let rhs = 2.0 * (weak_quasinorm(&a, 2.0).unwrap() + weak_quasinorm(&b, 2.0).unwrap());
        prop_assert!(lhs <= rhs * (1.0 + 1e-14));
    }

    #[test]
    fn tensor_bound_and_upward_convergence(alpha in prop::collection::vec(0.01..10.0f64, 1..5)) {
        let l1: f64 = alpha.iter().sum();
        let long = tensor_mu(&alpha, 4096).unwrap();
        for (n, v) in long.values().iter().enumerate() {
            prop_assert!((n + 1) as f64 * v <= l1 + 1e-12);
        }
        // Running maxima of (n+1)μ(n) over dyadic lengths increase toward Σα.
        let best = |len: usize| {
            long.values()[..len].iter().enumerate().map(|(n, v)| (n + 1) as f64 * v).fold(0.0, f64::max)
        };
        let (a, b) = (best(256), best(4096));
        prop_assert!(a <= b && b <= l1 + 1e-12);
        prop_assert!(l1 - b <= 2.0 * alpha.len() as f64 * l1 / 4096.0 + 1e-12);
    }

    #[test]
    fn product_inequality_on_seeded_pairs(seed in any::<u64>(), n in 2usize..24) {
        let cfg = TrialConfig::new(seed, 1, vec![n]);
        let mut rng = cfg.rng(0, 0);
        let t = cfg.sample(n, &mut rng).unwrap();
        let s = cfg.sample(n, &mut rng).unwrap();
        prop_assert!(product_slack(t.as_ref(), s.as_ref()).unwrap() <= PRODUCT_SLACK);
    }

    #[test]
    fn holder_ratio_is_scale_invariant(seed in any::<u64>(), c in 0.1..10.0f64) {
        let cfg = TrialConfig::new(seed, 1, vec![12]);
        let mut rng = cfg.rng(0, 0);
        let t = cfg.sample(12, &mut rng).unwrap();
        let s = cfg.sample(12, &mut rng).unwrap();
        let k = faer::Scale(faer::c64::new(c, 0.0));
        let a = holder_sample(t.as_ref(), s.as_ref()).unwrap().ratio;
        let b = holder_sample((&t * k).as_ref(), (&s * k).as_ref()).unwrap().ratio;
        prop_assert!((a - b).abs() <= 1e-8 * a.max(1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orlicz_norms_are_homogeneous(v in grid_values(RES), c in 0.01..100.0f64) {
        prop_assume!(v.iter().any(|x| *x != 0.0));
        let f = custom(v);
        let g = f.scaled(c).unwrap();
        let (a, b) = (orlicz_norm(&f, &grid()).unwrap(), orlicz_norm(&g, &grid()).unwrap());
        prop_assert!((b - c * a).abs() <= 1e-8 * c * a);
        let (a, b) = (orlicz2_norm(&f, &grid()).unwrap(), orlicz2_norm(&g, &grid()).unwrap());
        prop_assert!((b - c * a).abs() <= 1e-8 * c * a);
    }

    #[test]
    fn orlicz_norm_is_monotone(v in grid_values(RES), extra in prop::collection::vec(0.0..20.0f64, RES)) {
        let bigger: Vec<f64> = v.iter().zip(&extra).map(|(x, e)| x.abs() + e).collect();
        let (f, g) = (custom(v), custom(bigger));
        prop_assert!(orlicz_norm(&f, &grid()).unwrap() <= orlicz_norm(&g, &grid()).unwrap() + 1e-10);
    }

    #[test]
    fn luxemburg_constraint_saturates(v in grid_values(RES)) {
        prop_assume!(v.iter().any(|x| *x != 0.0));
        let f = custom(v);
        let lambda = orlicz_norm(&f, &grid()).unwrap();
        let disc = grid().discretize_abs(&f).unwrap();
        let total = disc.integrate(Exec::Sequential, |x| young(x / lambda));
        prop_assert!((total - 1.0).abs() <= 1e-8, "{}", total);
    }

    #[test]
    fn convexified_norm_is_norm_of_square(v in grid_values(RES)) {
        let sq: Vec<f64> = v.iter().map(|x| x * x).collect();
        let (f, f2) = (custom(v), custom(sq));
        let a = orlicz2_norm(&f, &grid()).unwrap().powi(2);
        let b = orlicz_norm(&f2, &grid()).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
    }

    #[test]
    fn sequences_round_trip_through_json(eigs in spectrum()) {
        let mu = mu_from_eigs(&eigs);
        prop_assert_eq!(SingularValueSeq::from_json(&mu.to_json()).unwrap(), mu);
    }
}

/// `|f|` must be smooth too: sign changes put kinks in `M(|f|)`.
#[test]
fn smooth_norms_are_grid_stable() {
    for f in [
        TorusFunction::shifted_cosine(1, 2.0).unwrap(),
        TorusFunction::shifted_cosine(2, 1.5).unwrap(),
        TorusFunction::constant(3, 1.5).unwrap(),
    ] {
        let d = f.dim();
        let n = if d == 3 { 32 } else { 128 };
        let a = orlicz_norm(&f, &QuadratureGrid::uniform(d, n).unwrap()).unwrap();
        let b = orlicz_norm(&f, &QuadratureGrid::uniform(d, 2 * n).unwrap()).unwrap();
        assert!((a - b).abs() < 1e-6 * a, "{} {a} {b}", f.label());
    }
}
