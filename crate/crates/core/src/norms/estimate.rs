//! Sampled lower bounds for the dilation distance between two norms, plus
//! the log-restriction map into the diameter-norm quotient, precomposition
//! invariance checks, and sampled dual-norm values.

use serde::Serialize;

use super::domain::SampleDomain;
use super::spec::{eval_spec, Norm, NormSpec};
use super::NormError;
use crate::diamnorm::{kuratowski_section, BoundedFunction, QuotientFunction};
use crate::linalg;

/// Options for [`estimate_distance_opts`].
#[derive(Clone, Copy, Debug)]
pub struct EstimateOptions {
    /// Hill-climbing iterations per witness (0 disables refinement).
    pub refine_iters: usize,
    /// Worker threads for the sample evaluation pass.
    pub threads: usize,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            refine_iters: 64,
            threads: 1,
        }
    }
}

/// Certified lower bound for the dilation distance between two norms.
///
/// Every reported number is the spread of `ln(b/a)` over genuine points of
/// the sample sphere, so `lower_bound <= refined <= true distance`.
#[derive(Clone, Debug, Serialize)]
pub struct NormDistanceEstimate {
    /// Spread of the log-ratio over the sample points alone.
    pub lower_bound: f64,
    /// Spread after hill-climbing both witnesses along the sphere.
    pub refined: f64,
    /// Point attaining the refined maximum of `ln(b/a)`.
    pub arg_max: Vec<f64>,
    /// Point attaining the refined minimum of `ln(b/a)`.
    pub arg_min: Vec<f64>,
    pub samples_used: usize,
    pub seed: u64,
}

/// Log-ratios `ln(b(x)) - ln(a(x))` over a point set, with top-level scale
/// factors stripped (they shift every ratio equally and cancel in the
/// spread). `threads > 1` splits the evaluation; the reduction order is
/// fixed, so results are identical for any thread count.
pub fn log_ratios(a: &Norm, b: &Norm, points: &[Vec<f64>], threads: usize) -> Vec<f64> {
    let (_, sa) = a.spec().strip_scaled();
    let (_, sb) = b.spec().strip_scaled();
    let ratio = |x: &Vec<f64>| eval_spec(sb, x).ln() - eval_spec(sa, x).ln();
    if threads <= 1 || points.len() < 2 * threads {
        return points.iter().map(ratio).collect();
    }
    let chunk = points.len().div_ceil(threads);
    let mut out = vec![0.0; points.len()];
    std::thread::scope(|scope| {
        for (slot, part) in out.chunks_mut(chunk).zip(points.chunks(chunk)) {
            scope.spawn(move || {
                for (o, p) in slot.iter_mut().zip(part) {
                    *o = ratio(p);
                }
            });
        }
    });
    out
}

/// Spread (max minus min) of the log-ratio over an explicit point list.
/// This is the shared-domain distance computation; on a fixed point set it
/// is symmetric and satisfies the triangle inequality by construction.
pub fn spread_on_points(a: &Norm, b: &Norm, points: &[Vec<f64>]) -> Result<f64, NormError> {
    check_dims(a, b)?;
    if points.is_empty() {
        return Err(NormError::EmptyDomain);
    }
    let ratios = log_ratios(a, b, points, 1);
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(hi - lo)
}

fn check_dims(a: &Norm, b: &Norm) -> Result<(), NormError> {
    if a.k() != b.k() {
        return Err(NormError::DimensionMismatch {
            expected: a.k(),
            got: b.k(),
        });
    }
    Ok(())
}

/// Estimate the dilation distance on a sample domain with the default
/// refinement budget. See [`estimate_distance_opts`].
pub fn estimate_distance(
    a: &Norm,
    b: &Norm,
    domain: &SampleDomain,
    refine_iters: usize,
) -> Result<NormDistanceEstimate, NormError> {
    estimate_distance_opts(
        a,
        b,
        domain,
        EstimateOptions {
            refine_iters,
            threads: 1,
        },
    )
}

/// Sample pass plus projected coordinate-wise hill climbing from both
/// witnesses. Steps halve on a failed sweep down to a floor of 1e-10;
/// every candidate is reprojected onto the sphere before evaluation, so
/// refinement can only raise the maximum and lower the minimum while
/// remaining a lower bound of the true distance.
pub fn estimate_distance_opts(
    a: &Norm,
    b: &Norm,
    domain: &SampleDomain,
    opts: EstimateOptions,
) -> Result<NormDistanceEstimate, NormError> {
    check_dims(a, b)?;
    if a.k() != domain.k() {
        return Err(NormError::DimensionMismatch {
            expected: a.k(),
            got: domain.k(),
        });
    }
    let points = domain.points();
    if points.is_empty() {
        return Err(NormError::EmptyDomain);
    }
    let ratios = log_ratios(a, b, points, opts.threads);
    let (mut hi_idx, mut lo_idx) = (0, 0);
    for (i, r) in ratios.iter().enumerate() {
        if *r > ratios[hi_idx] {
            hi_idx = i;
        }
        if *r < ratios[lo_idx] {
            lo_idx = i;
        }
    }
    let lower_bound = ratios[hi_idx] - ratios[lo_idx];

    let projector = domain.projector()?;
    let (_, sa) = a.spec().strip_scaled();
    let (_, sb) = b.spec().strip_scaled();
    let ratio = |x: &[f64]| eval_spec(sb, x).ln() - eval_spec(sa, x).ln();
    let climb = |start: &[f64], start_val: f64, maximize: bool| {
        let mut x = start.to_vec();
        let mut best = start_val;
        let mut step = 0.5;
        for _ in 0..opts.refine_iters {
            let mut improved = false;
            let scale = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            for j in 0..x.len() {
                for sign in [1.0, -1.0] {
                    let mut y = x.clone();
                    y[j] += sign * step * scale;
                    if let Some(yp) = projector.project(&y) {
                        let r = ratio(&yp);
                        if (maximize && r > best) || (!maximize && r < best) {
                            x = yp;
                            best = r;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
                if step < 1e-10 {
                    break;
                }
            }
        }
        (x, best)
    };
    let (arg_max, hi) = climb(&points[hi_idx], ratios[hi_idx], true);
    let (arg_min, lo) = climb(&points[lo_idx], ratios[lo_idx], false);

    Ok(NormDistanceEstimate {
        lower_bound,
        refined: hi - lo,
        arg_max,
        arg_min,
        samples_used: points.len(),
        seed: domain.seed(),
    })
}

/// Restriction of `ln N` to the domain points, anchored at the first
/// point's label. Two restrictions differ by the pointwise log-ratio, so
/// the diameter seminorm of their difference is the sampled distance.
pub fn log_restriction(a: &Norm, domain: &SampleDomain) -> Result<QuotientFunction, NormError> {
    if a.k() != domain.k() {
        return Err(NormError::DimensionMismatch {
            expected: a.k(),
            got: domain.k(),
        });
    }
    if domain.points().len() < 2 {
        return Err(NormError::EmptyDomain);
    }
    let values: Vec<f64> = domain.points().iter().map(|p| a.eval_raw(p).ln()).collect();
    let f = BoundedFunction::from_values(values).expect("at least two points");
    Ok(kuratowski_section(&f, "0").expect("anchor 0 exists"))
}

/// Outcome of a precomposition invariance check: the sampled distance of
/// `(a, b)` on the original points against the sampled distance of
/// `(a∘A, b∘A)` on the pulled-back points `A^{-1} x`.
#[derive(Clone, Debug, Serialize)]
pub struct PrecomposeReport {
    pub original: f64,
    pub precomposed: f64,
    /// Largest pointwise gap between the two log-ratio lists.
    pub max_pointwise_gap: f64,
    pub pulled_points: Vec<Vec<f64>>,
}

impl PrecomposeReport {
    pub fn bounds_agree(&self, tol: f64) -> bool {
        (self.original - self.precomposed).abs() <= tol
    }
}

/// Evaluate the invariance of the sampled distance under precomposition by
/// an invertible matrix. The pulled-back point set turns the precomposed
/// pair's ratios into the original pair's ratios point by point.
pub fn precompose_invariance_check(
    a: &Norm,
    b: &Norm,
    matrix: &[Vec<f64>],
    domain: &SampleDomain,
) -> Result<PrecomposeReport, NormError> {
    check_dims(a, b)?;
    let k = a.k();
    if matrix.len() != k || matrix.iter().any(|r| r.len() != k) {
        return Err(NormError::DimensionMismatch {
            expected: k,
            got: matrix.len(),
        });
    }
    if linalg::is_singular(matrix, super::SINGULARITY_TOL) {
        return Err(NormError::SingularMatrix);
    }
    if domain.points().is_empty() {
        return Err(NormError::EmptyDomain);
    }
    let pulled: Vec<Vec<f64>> = domain
        .points()
        .iter()
        .map(|x| linalg::solve(matrix, x).ok_or(NormError::SingularMatrix))
        .collect::<Result<_, _>>()?;
    let pa = Norm::new(
        NormSpec::precomposed(matrix.to_vec(), a.spec().clone()),
        k,
    )?;
    let pb = Norm::new(
        NormSpec::precomposed(matrix.to_vec(), b.spec().clone()),
        k,
    )?;
    let orig_ratios = log_ratios(a, b, domain.points(), 1);
    let pre_ratios = log_ratios(&pa, &pb, &pulled, 1);
    let spread = |rs: &[f64]| {
        rs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - rs.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let max_pointwise_gap = orig_ratios
        .iter()
        .zip(&pre_ratios)
        .map(|(u, v)| (u - v).abs())
        .fold(0.0, f64::max);
    Ok(PrecomposeReport {
        original: spread(&orig_ratios),
        precomposed: spread(&pre_ratios),
        max_pointwise_gap,
        pulled_points: pulled,
    })
}

/// Sampled lower bound for the dual norm `N*(y) = sup <x,y>/N(x)`; exact
/// whenever a maximizing direction is among the domain points.
pub fn dual_norm_eval(a: &Norm, y: &[f64], domain: &SampleDomain) -> Result<f64, NormError> {
    if a.k() != domain.k() {
        return Err(NormError::DimensionMismatch {
            expected: a.k(),
            got: domain.k(),
        });
    }
    if y.len() != a.k() {
        return Err(NormError::DimensionMismatch {
            expected: a.k(),
            got: y.len(),
        });
    }
    if domain.points().is_empty() {
        return Err(NormError::EmptyDomain);
    }
    Ok(domain
        .points()
        .iter()
        .map(|x| {
            let dot: f64 = x.iter().zip(y).map(|(u, v)| u * v).sum();
            dot / a.eval_raw(x)
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diamnorm::diameter_seminorm;
    use crate::norms::{distance_closed_form, DomainKind};

    fn l2_domain(k: usize, count: usize, seed: u64) -> SampleDomain {
        SampleDomain::sample(
            DomainKind::NormSphere {
                reference: NormSpec::pnorm(2.0).unwrap(),
                radius: 1.0,
            },
            count,
            seed,
            k,
        )
        .unwrap()
    }

    fn pnorm(p: f64, k: usize) -> Norm {
        Norm::new(NormSpec::pnorm(p).unwrap(), k).unwrap()
    }

    fn pnorm_inf(k: usize) -> Norm {
        Norm::new(NormSpec::pnorm_inf(), k).unwrap()
    }

    #[test]
    fn canonical_points_give_exact_pnorm_distance() {
        let d = l2_domain(2, 0, 1);
        let est = estimate_distance(&pnorm(1.0, 2), &pnorm_inf(2), &d, 64).unwrap();
        assert!((est.refined - 2.0f64.ln()).abs() <= 1e-12, "{}", est.refined);
        assert!(est.lower_bound <= est.refined + 1e-15);
        let d3 = l2_domain(3, 0, 1);
        let est = estimate_distance(&pnorm(1.0, 3), &pnorm(2.0, 3), &d3, 64).unwrap();
        assert!((est.refined - 0.5 * 3.0f64.ln()).abs() <= 1e-9);
    }

    #[test]
    fn scaled_pair_is_zero_exactly() {
        let d = l2_domain(3, 100, 5);
        let a = pnorm(1.5, 3);
        let b = Norm::new(NormSpec::scaled(2.5, a.spec().clone()), 3).unwrap();
        let est = estimate_distance(&a, &b, &d, 64).unwrap();
        assert_eq!(est.lower_bound, 0.0);
        assert_eq!(est.refined, 0.0);
    }

    #[test]
    fn scale_quotient_and_symmetry_are_exact() {
        let d = l2_domain(3, 64, 17);
        let a = pnorm(1.0, 3);
        let b = Norm::new(
            NormSpec::sum(NormSpec::pnorm(2.0).unwrap(), NormSpec::pnorm_inf()),
            3,
        )
        .unwrap();
        let plain = estimate_distance(&a, &b, &d, 16).unwrap();
        let scaled_b = Norm::new(NormSpec::scaled(0.37, b.spec().clone()), 3).unwrap();
        let scaled = estimate_distance(&a, &scaled_b, &d, 16).unwrap();
        assert_eq!(plain.lower_bound, scaled.lower_bound);
        assert_eq!(plain.refined, scaled.refined);
        let swapped = estimate_distance(&b, &a, &d, 16).unwrap();
        assert_eq!(plain.lower_bound, swapped.lower_bound);
        assert_eq!(plain.refined, swapped.refined);
    }

    #[test]
    fn monotone_in_sample_count() {
        let a = pnorm(1.0, 3);
        let b = pnorm(3.0, 3);
        let small = estimate_distance(&a, &b, &l2_domain(3, 50, 23), 0).unwrap();
        let large = estimate_distance(&a, &b, &l2_domain(3, 200, 23), 0).unwrap();
        assert!(large.lower_bound >= small.lower_bound);
    }

    #[test]
    fn refinement_closes_on_closed_form_from_poor_samples() {
        // no canonical points: an off-center sphere forces the climber to walk
        let a = pnorm(1.0, 2);
        let b = pnorm_inf(2);
        let domain = SampleDomain::sample(
            DomainKind::OffCenterSphere {
                center: vec![0.4, -0.2],
            },
            40,
            3,
            2,
        )
        .unwrap();
        let est = estimate_distance(&a, &b, &domain, 64).unwrap();
        let truth = distance_closed_form(&a, &b).unwrap();
        assert!(est.refined >= est.lower_bound - 1e-15);
        assert!(est.refined <= truth + 1e-12);
        assert!(truth - est.refined <= 1e-6, "refined {} vs {truth}", est.refined);
    }

    #[test]
    fn estimator_stays_below_closed_form() {
        let d = l2_domain(4, 200, 31);
        for (pa, pb) in [(1.0, 2.0), (1.5, 3.0), (2.0, f64::INFINITY)] {
            let a = pnorm(pa, 4);
            let b = if pb.is_infinite() {
                pnorm_inf(4)
            } else {
                pnorm(pb, 4)
            };
            let est = estimate_distance(&a, &b, &d, 64).unwrap();
            let truth = distance_closed_form(&a, &b).unwrap();
            assert!(est.lower_bound <= est.refined + 1e-15);
            assert!(est.refined <= truth + 1e-12);
            assert!((est.refined - truth).abs() <= 1e-9);
        }
    }

    #[test]
    fn log_restriction_examples() {
        let d = l2_domain(2, 0, 1);
        // the domain's own reference norm restricts to a constant class
        let f = log_restriction(&pnorm(2.0, 2), &d).unwrap();
        assert!(f.diameter() <= 1e-12);
        let f1 = log_restriction(&pnorm(1.0, 2), &d).unwrap();
        let f2 = log_restriction(&pnorm(2.0, 2), &d).unwrap();
        let diff = f1.base().sub(f2.base()).unwrap();
        let want = 0.5 * 2.0f64.ln();
        assert!((diameter_seminorm(&diff) - want).abs() <= 1e-12);
        // diameter of the difference is the sampled distance
        let est = estimate_distance(&pnorm(1.0, 2), &pnorm(2.0, 2), &d, 0).unwrap();
        assert!((diameter_seminorm(&diff) - est.lower_bound).abs() <= 1e-12);
        // off-center domains see every norm as a nonconstant class
        let off = SampleDomain::sample(
            DomainKind::OffCenterSphere {
                center: vec![0.5, 0.1],
            },
            30,
            9,
            2,
        )
        .unwrap();
        let g = log_restriction(&pnorm(2.0, 2), &off).unwrap();
        assert!(g.diameter() > 0.1);
    }

    #[test]
    fn precompose_invariance_examples() {
        let d = l2_domain(2, 50, 43);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let rot = vec![vec![r, -r], vec![r, r]];
        let p2 = pnorm(2.0, 2);
        let rep = precompose_invariance_check(&p2, &p2, &rot, &d).unwrap();
        assert!(rep.original.abs() <= 1e-12);
        assert!(rep.precomposed.abs() <= 1e-12);
        assert!(rep.bounds_agree(1e-12));

        let signed = vec![vec![0.0, -1.0], vec![1.0, 0.0]];
        for p in [1.0, 1.5, 3.0] {
            let n = pnorm(p, 2);
            let rep = precompose_invariance_check(&n, &n, &signed, &d).unwrap();
            assert!(rep.original.abs() <= 1e-12 && rep.precomposed.abs() <= 1e-12);
        }

        // d(linf∘diag(1,2), linf) = ln 2, witnessed at the axes
        let diag = vec![vec![1.0, 0.0], vec![0.0, 2.0]];
        let a = Norm::new(
            NormSpec::precomposed(diag.clone(), NormSpec::pnorm_inf()),
            2,
        )
        .unwrap();
        let est = estimate_distance(&a, &pnorm_inf(2), &d, 0).unwrap();
        assert!((est.lower_bound - 2.0f64.ln()).abs() <= 1e-12);
        let rep = precompose_invariance_check(&a, &pnorm_inf(2), &diag, &d).unwrap();
        assert!(rep.bounds_agree(1e-12));
        assert!(rep.max_pointwise_gap <= 1e-12);

        let singular = vec![vec![1.0, 1.0], vec![2.0, 2.0]];
        assert!(matches!(
            precompose_invariance_check(&p2, &p2, &singular, &d),
            Err(NormError::SingularMatrix)
        ));
    }

    #[test]
    fn dual_norm_examples() {
        let mut d = l2_domain(2, 200, 47);
        // duality pairing of l1 against (1,1) peaks at a basis direction
        let v = dual_norm_eval(&pnorm(1.0, 2), &[1.0, 1.0], &d).unwrap();
        assert!((v - 1.0).abs() <= 1e-12);
        // self-dual l2 needs the maximizing ray in the domain
        d.add_direction(&[3.0, 4.0]).unwrap();
        let v = dual_norm_eval(&pnorm(2.0, 2), &[3.0, 4.0], &d).unwrap();
        assert!((v - 5.0).abs() <= 1e-12);
    }

    #[test]
    fn threads_do_not_change_ratios() {
        let d = l2_domain(3, 500, 51);
        let a = pnorm(1.0, 3);
        let b = pnorm(2.5, 3);
        let seq = log_ratios(&a, &b, d.points(), 1);
        for threads in [2, 3, 8] {
            assert_eq!(seq, log_ratios(&a, &b, d.points(), threads));
        }
    }
}
