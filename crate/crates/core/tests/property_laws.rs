//! Property tests over randomized structures.

use proptest::prelude::*;

use normquot::metric::{pair_count, FiniteMetric};
use normquot::norms::{estimate_distance, DomainKind, Norm, NormSpec, SampleDomain};

/// Distances uniform in [1, 2] always satisfy the triangle inequality.
fn arb_metric(n: usize) -> impl Strategy<Value = FiniteMetric> {
    proptest::collection::vec(1.0f64..2.0, pair_count(n)).prop_map(move |d| {
        let entries: Vec<(usize, usize, f64)> = normquot::metric::pairs(n)
            .zip(d)
            .map(|((i, j), v)| (i, j, v))
            .collect();
        FiniteMetric::from_pairs(n, &entries).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distortion_is_a_pseudometric(
        a in arb_metric(5),
        b in arb_metric(5),
        c in arb_metric(5),
    ) {
        let dab = a.log_distortion(&b).unwrap();
        let dba = b.log_distortion(&a).unwrap();
        let dbc = b.log_distortion(&c).unwrap();
        let dac = a.log_distortion(&c).unwrap();
        prop_assert!(dab >= 0.0);
        prop_assert!((dab - dba).abs() <= 1e-15);
        prop_assert!(dac <= dab + dbc + 1e-12);
    }

    #[test]
    fn distortion_ignores_scaling(a in arb_metric(4), alpha in 0.01f64..100.0) {
        prop_assert!(a.log_distortion(&a.scale(alpha)).unwrap() <= 1e-12);
        prop_assert!(a.are_proportional(&a.scale(alpha)).unwrap().is_some());
    }

    #[test]
    fn apex_is_isometric(a in arb_metric(4), b in arb_metric(4)) {
        let before = a.log_distortion(&b).unwrap();
        let after = a.apex_extend().log_distortion(&b.apex_extend()).unwrap();
        prop_assert!((before - after).abs() <= 1e-12);
    }

    #[test]
    fn metric_json_roundtrips(a in arb_metric(5)) {
        let s = serde_json::to_string(&a).unwrap();
        let back: FiniteMetric = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(a, back);
    }

    #[test]
    fn estimate_is_symmetric_and_scale_free(
        p in 1.0f64..6.0,
        q in 1.0f64..6.0,
        c in 0.01f64..50.0,
        seed in any::<u64>(),
    ) {
        let domain = SampleDomain::sample(
            DomainKind::NormSphere {
                reference: NormSpec::pnorm(2.0).unwrap(),
                radius: 1.0,
            },
            16,
            seed,
            3,
        )
        .unwrap();
        let a = Norm::new(NormSpec::pnorm(p).unwrap(), 3).unwrap();
        let b = Norm::new(NormSpec::pnorm(q).unwrap(), 3).unwrap();
        let ab = estimate_distance(&a, &b, &domain, 8).unwrap();
        let ba = estimate_distance(&b, &a, &domain, 8).unwrap();
        prop_assert_eq!(ab.lower_bound, ba.lower_bound);
        prop_assert_eq!(ab.refined, ba.refined);
        let bs = Norm::new(NormSpec::scaled(c, b.spec().clone()), 3).unwrap();
        let abs = estimate_distance(&a, &bs, &domain, 8).unwrap();
        prop_assert_eq!(ab.lower_bound, abs.lower_bound);
        prop_assert_eq!(ab.refined, abs.refined);
    }
}
