//! Cross-module agreement checks: the same quantity computed through
//! independent code paths must coincide.

use normquot::diamnorm::{diameter_seminorm, BoundedFunction};
use normquot::embed::{vector_diameter, PsiPoint};
use normquot::metric::random_metric;
use normquot::norms::{
    distance_closed_form, estimate_distance, log_restriction, DomainKind, Norm, NormSpec,
    SampleDomain,
};
use normquot::rng::Xoshiro256;

/// Log-distortion via metric-core equals the diameter seminorm of the
/// log-coordinate difference via diamnorm, exactly.
#[test]
fn psi_conjugation_agrees_across_modules() {
    let mut rng = Xoshiro256::new(103);
    for _ in 0..100 {
        let n = 3 + rng.index(5);
        let m1 = random_metric(n, &mut rng);
        let m2 = random_metric(n, &mut rng);
        let direct = m1.log_distortion(&m2).unwrap();

        let p1 = PsiPoint::from_metric(&m1);
        let p2 = PsiPoint::from_metric(&m2);
        let f1 = BoundedFunction::from_values(p1.values().to_vec()).unwrap();
        let f2 = BoundedFunction::from_values(p2.values().to_vec()).unwrap();
        let via_diamnorm = diameter_seminorm(&f1.sub(&f2).unwrap());
        assert_eq!(direct, via_diamnorm);

        let via_vector = vector_diameter(&p1.diff(&p2).unwrap());
        assert_eq!(direct, via_vector);
    }
}

/// The log-restriction of a norm pair reproduces the sampled distance as
/// a diameter seminorm.
#[test]
fn log_restriction_matches_estimator_lower_bound() {
    let mut rng = Xoshiro256::new(107);
    let kinds: Vec<NormSpec> = vec![
        NormSpec::pnorm(1.0).unwrap(),
        NormSpec::pnorm(2.0).unwrap(),
        NormSpec::pnorm_inf(),
        NormSpec::sum(NormSpec::pnorm(1.0).unwrap(), NormSpec::pnorm_inf()),
        NormSpec::Perturbed {
            p: normquot::norms::PValue::new(2.0).unwrap(),
            q: 1.5,
            axis: 0,
        },
    ];
    for _ in 0..20 {
        let k = 2 + rng.index(3);
        let domain = SampleDomain::sample(
            DomainKind::NormSphere {
                reference: NormSpec::pnorm(2.0).unwrap(),
                radius: 1.0,
            },
            50,
            rng.next_u64(),
            k,
        )
        .unwrap();
        let a = Norm::new(kinds[rng.index(kinds.len())].clone(), k).unwrap();
        let b = Norm::new(kinds[rng.index(kinds.len())].clone(), k).unwrap();
        let fa = log_restriction(&a, &domain).unwrap();
        let fb = log_restriction(&b, &domain).unwrap();
        let diff = fa.base().sub(fb.base()).unwrap();
        let est = estimate_distance(&a, &b, &domain, 0).unwrap();
        assert!(
            (diameter_seminorm(&diff) - est.lower_bound).abs() <= 1e-12,
            "k={k}: {} vs {}",
            diameter_seminorm(&diff),
            est.lower_bound
        );
    }
}

/// Refined estimates on a shared domain satisfy the triangle inequality
/// once the refinement witnesses are pooled back into one point set (the
/// shared-point spread computation is exactly triangle-safe).
#[test]
fn refined_triangle_inequality_with_pooled_witnesses() {
    use normquot::norms::spread_on_points;
    let mut rng = Xoshiro256::new(109);
    let random_spec = |rng: &mut Xoshiro256| -> NormSpec {
        match rng.index(4) {
            0 => NormSpec::pnorm(rng.range(1.0, 4.0)).unwrap(),
            1 => NormSpec::pnorm_inf(),
            2 => NormSpec::sum(
                NormSpec::pnorm(rng.range(1.0, 3.0)).unwrap(),
                NormSpec::pnorm_inf(),
            ),
            _ => NormSpec::scaled(
                rng.range(0.2, 5.0),
                NormSpec::pnorm(rng.range(1.0, 4.0)).unwrap(),
            ),
        }
    };
    for trial in 0..30 {
        let k = 2 + rng.index(3);
        let domain = SampleDomain::sample(
            DomainKind::NormSphere {
                reference: NormSpec::pnorm(2.0).unwrap(),
                radius: 1.0,
            },
            40,
            rng.next_u64(),
            k,
        )
        .unwrap();
        let a = Norm::new(random_spec(&mut rng), k).unwrap();
        let b = Norm::new(random_spec(&mut rng), k).unwrap();
        let c = Norm::new(random_spec(&mut rng), k).unwrap();
        let mut points = domain.points().to_vec();
        for (x, y) in [(&a, &b), (&b, &c), (&a, &c)] {
            let est = estimate_distance(x, y, &domain, 32).unwrap();
            points.push(est.arg_max);
            points.push(est.arg_min);
        }
        let dab = spread_on_points(&a, &b, &points).unwrap();
        let dbc = spread_on_points(&b, &c, &points).unwrap();
        let dac = spread_on_points(&a, &c, &points).unwrap();
        assert!(
            dac <= dab + dbc + 1e-12,
            "trial {trial}: {dac} > {dab} + {dbc}"
        );
    }
}

/// Sampled distances between sampled duals of p-norms recover the primal
/// closed form (conjugate exponents have the same recip gap).
#[test]
fn dual_pnorm_distances_match_primal() {
    use normquot::norms::dual_norm_eval;
    for k in [2usize, 3, 4] {
        let x_domain = SampleDomain::sample(
            DomainKind::NormSphere {
                reference: NormSpec::pnorm(2.0).unwrap(),
                radius: 1.0,
            },
            10_000,
            1234,
            k,
        )
        .unwrap();
        let y_domain = SampleDomain::sample(
            DomainKind::NormSphere {
                reference: NormSpec::pnorm(2.0).unwrap(),
                radius: 1.0,
            },
            64,
            4321,
            k,
        )
        .unwrap();
        for (p, q) in [(1.0, 2.0), (1.5, 3.0), (1.0, 4.0)] {
            let a = Norm::new(NormSpec::pnorm(p).unwrap(), k).unwrap();
            let b = Norm::new(NormSpec::pnorm(q).unwrap(), k).unwrap();
            let truth = distance_closed_form(&a, &b).unwrap();
            let mut hi = f64::NEG_INFINITY;
            let mut lo = f64::INFINITY;
            for y in y_domain.points() {
                let da = dual_norm_eval(&a, y, &x_domain).unwrap();
                let db = dual_norm_eval(&b, y, &x_domain).unwrap();
                let r = db.ln() - da.ln();
                hi = hi.max(r);
                lo = lo.min(r);
            }
            let est = hi - lo;
            assert!(
                (est - truth).abs() <= 0.05 * truth,
                "k={k} p={p} q={q}: dual estimate {est} vs {truth}"
            );
        }
    }
}
