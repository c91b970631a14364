//! Reproducible verification suites. Each suite exercises one family of
//! identities or laws, reporting failures with enough witness data to
//! replay them. Streams are derived from the run seed and the suite name,
//! so `verify all --seed S` is deterministic end to end.

use std::time::Instant;

use normquot::diamnorm::{
    diameter_seminorm, hom_distance_lower_bound, kuratowski_section, pair_pseudometric,
    sup_distance, translation_invariance_residual, BoundedFunction, MetricGroup, SampleCarrier,
    Z3,
};
use normquot::embed::{embed_into_sn, euclidean_embed};
use normquot::metric::{
    pair_count, pairs, random_metric, rho_distance_closed_form, FiniteMetric,
};
use normquot::norms::{
    check_norm_axioms, distance_closed_form, estimate_distance, estimate_distance_opts,
    precompose_invariance_check, DomainKind, EstimateOptions, MixtureAtom, Norm, NormSpec,
    PValue, SampleDomain, WeightedTerm,
};
use normquot::rng::Xoshiro256;

use crate::report::{SuiteResult, VerifyReport};
use crate::RunConfig;

pub const SUITES: &[&str] = &[
    "plp",
    "pskp",
    "mixture",
    "rs1n",
    "apex",
    "diamnorm",
    "schoenberg",
    "isometries",
    "pipeline",
];

/// Run one suite by name, or `None` for an unknown name.
pub fn run_suite(name: &str, cfg: &RunConfig) -> Option<SuiteResult> {
    let start = Instant::now();
    let mut ctx = SuiteCtx::new(name, cfg);
    match name {
        "plp" => suite_plp(&mut ctx),
        "pskp" => suite_pskp(&mut ctx),
        "mixture" => suite_mixture(&mut ctx),
        "rs1n" => suite_rs1n(&mut ctx),
        "apex" => suite_apex(&mut ctx),
        "diamnorm" => suite_diamnorm(&mut ctx),
        "schoenberg" => suite_schoenberg(&mut ctx),
        "isometries" => suite_isometries(&mut ctx),
        "pipeline" => suite_pipeline(&mut ctx),
        _ => return None,
    }
    Some(ctx.finish(start))
}

/// Run every suite and aggregate.
pub fn run_all(cfg: &RunConfig) -> VerifyReport {
    let suites: Vec<SuiteResult> = SUITES
        .iter()
        .map(|name| run_suite(name, cfg).expect("registered suite"))
        .collect();
    aggregate(cfg, suites)
}

pub fn aggregate(cfg: &RunConfig, suites: Vec<SuiteResult>) -> VerifyReport {
    let total_cases = suites.iter().map(|s| s.cases).sum();
    let total_failures = suites.iter().map(|s| s.failures.len()).sum();
    VerifyReport {
        seed: cfg.seed,
        samples: cfg.samples,
        refine_iters: cfg.refine_iters,
        tol: cfg.tol,
        suites,
        total_cases,
        total_failures,
    }
}

struct SuiteCtx {
    name: String,
    rng: Xoshiro256,
    cfg: RunConfig,
    cases: usize,
    failures: Vec<String>,
}

impl SuiteCtx {
    fn new(name: &str, cfg: &RunConfig) -> SuiteCtx {
        SuiteCtx {
            name: name.to_string(),
            rng: Xoshiro256::new(cfg.seed ^ fnv1a(name)),
            cfg: *cfg,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(witness());
        }
    }

    fn finish(self, start: Instant) -> SuiteResult {
        SuiteResult {
            suite: self.name,
            cases: self.cases,
            failures: self.failures,
            wall: start.elapsed(),
        }
    }

    /// Unit sphere of the reference 2-norm with capped random augmentation;
    /// the canonical points carry the extremal witnesses.
    fn l2_domain(&mut self, k: usize, cap: usize) -> SampleDomain {
        SampleDomain::sample(
            DomainKind::NormSphere {
                reference: NormSpec::pnorm(2.0).unwrap(),
                radius: 1.0,
            },
            self.cfg.samples.min(cap),
            self.rng.next_u64(),
            k,
        )
        .expect("valid domain")
    }
}

fn fnv1a(s: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    h
}

const P_GRID: [f64; 5] = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];

fn pnorm_spec(p: f64) -> NormSpec {
    if p.is_infinite() {
        NormSpec::pnorm_inf()
    } else {
        NormSpec::pnorm(p).unwrap()
    }
}

/// p-norm grid: refined sampled distances against `|1/p - 1/q| ln k`,
/// plus the randomized norm-axiom sweep over the whole grammar.
fn suite_plp(ctx: &mut SuiteCtx) {
    for k in [2usize, 3, 4, 8] {
        let domain = ctx.l2_domain(k, 256);
        for p in P_GRID {
            for q in P_GRID {
                let a = Norm::new(pnorm_spec(p), k).unwrap();
                let b = Norm::new(pnorm_spec(q), k).unwrap();
                let est = estimate_distance_opts(
                    &a,
                    &b,
                    &domain,
                    EstimateOptions {
                        refine_iters: ctx.cfg.refine_iters,
                        threads: ctx.cfg.threads,
                    },
                )
                .unwrap();
                let want = distance_closed_form(&a, &b).unwrap();
                ctx.check((est.refined - want).abs() <= 1e-9, || {
                    format!(
                        "pnorm pair p={p} q={q} k={k}: refined {} vs closed {want}",
                        est.refined
                    )
                });
            }
        }
    }

    // axiom closure across the grammar, 1e4 samples each
    let constructible: Vec<(&str, NormSpec, usize)> = vec![
        ("pnorm", NormSpec::pnorm(1.7).unwrap(), 3),
        (
            "weighted_abs",
            NormSpec::WeightedAbs {
                terms: vec![
                    WeightedTerm { w: 1.0, a: vec![1.0, 0.0, 0.0] },
                    WeightedTerm { w: 2.0, a: vec![0.0, 1.0, 0.0] },
                    WeightedTerm { w: 3.0, a: vec![1.0, 1.0, 1.0] },
                ],
            },
            3,
        ),
        (
            "perturbed",
            NormSpec::Perturbed {
                p: PValue::new(2.0).unwrap(),
                q: 1.5,
                axis: 1,
            },
            3,
        ),
        (
            "mixture",
            NormSpec::Mixture {
                atoms: vec![
                    MixtureAtom { p: 1.0, m: 0.5 },
                    MixtureAtom { p: 2.5, m: 1.5 },
                ],
            },
            3,
        ),
        (
            "precomposed",
            NormSpec::precomposed(
                vec![
                    vec![1.0, 1.0, 0.0],
                    vec![0.0, 1.0, 0.0],
                    vec![0.0, 0.0, 2.0],
                ],
                NormSpec::pnorm(3.0).unwrap(),
            ),
            3,
        ),
        (
            "scaled",
            NormSpec::scaled(0.25, NormSpec::pnorm_inf()),
            3,
        ),
        (
            "sum",
            NormSpec::sum(NormSpec::pnorm(1.0).unwrap(), NormSpec::pnorm_inf()),
            3,
        ),
    ];
    for (label, spec, k) in constructible {
        let norm = Norm::new(spec, k).unwrap();
        let report = check_norm_axioms(&norm, 10_000, ctx.rng.next_u64());
        ctx.check(report.passed(), || {
            format!(
                "axioms: {label} failed {} homogeneity / {} subadditivity trials",
                report.homogeneity_failures.len(),
                report.subadditivity_failures.len()
            )
        });
    }
}

/// Axis-perturbed family: sampled distances against
/// `ln(1+q) + ln(1+q')` (distinct axes) or `|ln(1+q') - ln(1+q)|`.
fn suite_pskp(ctx: &mut SuiteCtx) {
    let domains: Vec<SampleDomain> = [2usize, 3, 4]
        .iter()
        .map(|&k| ctx.l2_domain(k, 256))
        .collect();
    for _ in 0..100 {
        let ki = ctx.rng.index(3);
        let k = ki + 2;
        let p = P_GRID[ctx.rng.index(P_GRID.len())];
        let q = ctx.rng.range(0.0, 5.0);
        let qp = ctx.rng.range(0.0, 5.0);
        let axis = ctx.rng.index(k);
        let axis2 = ctx.rng.index(k);
        let pv = PValue::new(p).unwrap();
        let a = Norm::new(NormSpec::Perturbed { p: pv, q, axis }, k).unwrap();
        let b = Norm::new(
            NormSpec::Perturbed {
                p: pv,
                q: qp,
                axis: axis2,
            },
            k,
        )
        .unwrap();
        let est = estimate_distance(&a, &b, &domains[ki], ctx.cfg.refine_iters).unwrap();
        let want = distance_closed_form(&a, &b).unwrap();
        ctx.check((est.refined - want).abs() <= 1e-9, || {
            format!(
                "perturbed p={p} q={q} axis={axis} q'={qp} axis'={axis2} k={k}: refined {} vs closed {want}",
                est.refined
            )
        });
    }
}

/// Discrete mixtures against a dominating p-norm.
fn suite_mixture(ctx: &mut SuiteCtx) {
    let ks = [2usize, 3, 4, 8];
    for _ in 0..50 {
        let k = ks[ctx.rng.index(ks.len())];
        let domain = ctx.l2_domain(k, 128);
        let q = ctx.rng.range(1.3, 6.0);
        let n_atoms = 1 + ctx.rng.index(4);
        let atoms: Vec<MixtureAtom> = (0..n_atoms)
            .map(|_| MixtureAtom {
                p: ctx.rng.range(1.0, q - 0.1),
                m: ctx.rng.range(0.1, 2.0),
            })
            .collect();
        let a = Norm::new(NormSpec::Mixture { atoms: atoms.clone() }, k).unwrap();
        let b = Norm::new(NormSpec::pnorm(q).unwrap(), k).unwrap();
        let est = estimate_distance(&a, &b, &domain, ctx.cfg.refine_iters).unwrap();
        let want = distance_closed_form(&a, &b).unwrap();
        ctx.check((est.refined - want).abs() <= 1e-9, || {
            format!(
                "mixture {atoms:?} vs pnorm q={q} k={k}: refined {} vs closed {want}",
                est.refined
            )
        });
    }
}

/// Single-edge metrics, the unbounded line witness, and the isometric
/// non-proportional pair.
fn suite_rs1n(ctx: &mut SuiteCtx) {
    for _ in 0..200 {
        let n = 3 + ctx.rng.index(4); // 3..=6
        let edges = pair_count(n);
        let j = ctx.rng.index(edges);
        let jp = ctx.rng.index(edges);
        let a = ctx.rng.range(1e-3, 2.0);
        let ap = ctx.rng.range(1e-3, 2.0);
        let r1 = FiniteMetric::rho_family(n, j, a).unwrap();
        let r2 = FiniteMetric::rho_family(n, jp, ap).unwrap();
        let got = r1.log_distortion(&r2).unwrap();
        let want = rho_distance_closed_form(j, a, jp, ap).unwrap();
        ctx.check((got - want).abs() <= 1e-12, || {
            format!("rho n={n} j={j} a={a} j'={jp} a'={ap}: {got} vs {want}")
        });
    }

    for n in [3usize, 4, 5] {
        let disc = FiniteMetric::discrete(n).unwrap();
        for m in 1..=20usize {
            let line = FiniteMetric::line_witness(n, m).unwrap();
            let got = disc.log_distortion(&line).unwrap();
            let want = ((n + m) as f64).ln();
            ctx.check(got == want, || {
                format!("line witness n={n} m={m}: {got} vs {want}")
            });
        }
    }

    // isometric yet distance ln 4 apart and not proportional
    let (g1, g2) = FiniteMetric::gh_pair(4, (0, 1), (2, 3)).unwrap();
    let sigma = g1.brute_force_isometry(&g2).unwrap();
    ctx.check(sigma.is_some(), || "gh pair: no isometry found".into());
    if let Some(sigma) = sigma {
        let ok = pairs(4).all(|(i, j)| g1.dist(i, j) == g2.dist(sigma[i], sigma[j]));
        ctx.check(ok, || format!("gh pair: {sigma:?} is not distance-preserving"));
    }
    let d = g1.log_distortion(&g2).unwrap();
    ctx.check((d - 4.0f64.ln()).abs() <= 1e-12, || {
        format!("gh pair distance {d} vs ln 4")
    });
    ctx.check(
        g1.are_proportional(&g2).unwrap().is_none(),
        || "gh pair unexpectedly proportional".into(),
    );
}

/// Adjoining an apex point preserves log-distortion exactly.
fn suite_apex(ctx: &mut SuiteCtx) {
    for _ in 0..200 {
        let n = 3 + ctx.rng.index(5); // 3..=7
        let a = random_metric(n, &mut ctx.rng);
        let b = random_metric(n, &mut ctx.rng);
        let before = a.log_distortion(&b).unwrap();
        let after = a.apex_extend().log_distortion(&b.apex_extend()).unwrap();
        ctx.check((before - after).abs() <= 1e-12, || {
            format!("apex n={n}: {before} vs {after}")
        });
    }
}

fn diamnorm_trials<M: SampleCarrier + MetricGroup>(ctx: &mut SuiteCtx, carrier: &str) {
    for _ in 0..500 {
        let n = 2 + ctx.rng.index(5);
        let draw = |rng: &mut Xoshiro256| {
            BoundedFunction::from_values((0..n).map(|_| M::sample(rng)).collect()).unwrap()
        };
        let f = draw(&mut ctx.rng);
        let g = draw(&mut ctx.rng);
        let h = draw(&mut ctx.rng);

        let dfg = pair_pseudometric(&f, &g).unwrap();
        let dgh = pair_pseudometric(&g, &h).unwrap();
        let dfh = pair_pseudometric(&f, &h).unwrap();
        ctx.check(dfh <= dfg + dgh, || {
            format!("{carrier} triangle: {dfh} > {dfg} + {dgh}")
        });

        let (x, y, z) = (
            M::sample(&mut ctx.rng),
            M::sample(&mut ctx.rng),
            M::sample(&mut ctx.rng),
        );
        let resid = translation_invariance_residual(&x, &y, &z);
        ctx.check(resid == 0.0, || {
            format!("{carrier} translation invariance residual {resid}")
        });

        let sup = sup_distance(&f, &g).unwrap();
        ctx.check(dfg <= 2.0 * sup, || {
            format!("{carrier} lipschitz-2: {dfg} > 2 * {sup}")
        });

        let sf = f.section_at(&f.labels()[0].clone()).unwrap();
        let sg = g.section_at(&g.labels()[0].clone()).unwrap();
        let section_sup = sup_distance(&sf, &sg).unwrap();
        ctx.check(section_sup <= dfg, || {
            format!("{carrier} kuratowski: {section_sup} > {dfg}")
        });
    }
}

/// Diameter-norm laws in both carriers, plus the operator-distance
/// examples.
fn suite_diamnorm(ctx: &mut SuiteCtx) {
    diamnorm_trials::<f64>(ctx, "reals");
    diamnorm_trials::<Z3>(ctx, "z3");

    // real-valued identity d(f, g) = diam(f - g) and section anchoring
    for _ in 0..100 {
        let n = 2 + ctx.rng.index(5);
        let f = BoundedFunction::from_values(
            (0..n).map(|_| f64::sample(&mut ctx.rng)).collect(),
        )
        .unwrap();
        let g = BoundedFunction::from_values(
            (0..n).map(|_| f64::sample(&mut ctx.rng)).collect(),
        )
        .unwrap();
        let direct = pair_pseudometric(&f, &g).unwrap();
        let via_diff = diameter_seminorm(&f.sub(&g).unwrap());
        ctx.check(direct == via_diff, || {
            format!("diameter identity: {direct} vs {via_diff}")
        });
        let q = kuratowski_section(&f, "0").unwrap();
        ctx.check(q.base().values()[0] == 0.0, || {
            "section does not vanish at its anchor".into()
        });
    }

    let samples = vec![(1.0f64, 2.0f64), (0.5, -4.0), (64.0, 0.0)];
    let d = hom_distance_lower_bound(|x: &f64| 2.0 * x, |x: &f64| 2.0 * x, &samples).unwrap();
    ctx.check(d == 0.0, || format!("hom distance of equal maps: {d}"));
    let d = hom_distance_lower_bound(|x: &f64| 2.0 * x, |x: &f64| 3.0 * x, &samples).unwrap();
    ctx.check((d - 1.0).abs() <= 1e-12, || {
        format!("hom distance of scalings 2,3: {d} vs 1")
    });
}

/// Euclidean embeddability: fixed verdicts, realization roundtrips, and
/// base independence.
fn suite_schoenberg(ctx: &mut SuiteCtx) {
    let equilateral = FiniteMetric::discrete(3).unwrap();
    let rep = euclidean_embed(&equilateral, 0, ctx.cfg.tol).unwrap();
    ctx.check(
        rep.embeddable && rep.rank == 2,
        || format!("equilateral: embeddable={} rank={}", rep.embeddable, rep.rank),
    );
    ctx.check(
        (rep.eigenvalues[0] - 3.0).abs() <= 1e-12 && (rep.eigenvalues[1] - 1.0).abs() <= 1e-12,
        || format!("equilateral eigenvalues {:?}", rep.eigenvalues),
    );

    let line = FiniteMetric::from_matrix(&[
        vec![0.0, 1.0, 2.0],
        vec![1.0, 0.0, 1.0],
        vec![2.0, 1.0, 0.0],
    ])
    .unwrap();
    let rep = euclidean_embed(&line, 0, ctx.cfg.tol).unwrap();
    ctx.check(rep.embeddable && rep.rank == 1, || {
        format!("line 0-1-2: embeddable={} rank={}", rep.embeddable, rep.rank)
    });

    let star = FiniteMetric::from_matrix(&[
        vec![0.0, 1.0, 1.0, 1.0],
        vec![1.0, 0.0, 2.0, 2.0],
        vec![1.0, 2.0, 0.0, 2.0],
        vec![1.0, 2.0, 2.0, 0.0],
    ])
    .unwrap();
    for base in 0..4 {
        let rep = euclidean_embed(&star, base, ctx.cfg.tol).unwrap();
        ctx.check(!rep.embeddable, || {
            format!("star base {base}: unexpectedly embeddable")
        });
        if base == 0 {
            let w = rep.negative_witness.as_ref();
            ctx.check(
                w.is_some_and(|w| (w.eigenvalue + 2.0).abs() <= 1e-12),
                || format!("star witness {:?}", rep.negative_witness),
            );
        }
    }

    // metrics realized from actual point sets embed back within tolerance
    let mut done = 0;
    while done < 20 {
        let n = 3 + ctx.rng.index(4);
        let dim = 1 + ctx.rng.index(3);
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| ctx.rng.range(-2.0, 2.0)).collect())
            .collect();
        let mut table = vec![vec![0.0; n]; n];
        for (i, j) in pairs(n) {
            let d: f64 = pts[i]
                .iter()
                .zip(&pts[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            table[i][j] = d;
            table[j][i] = d;
        }
        let Ok(m) = FiniteMetric::from_matrix(&table) else {
            continue; // coincident points
        };
        done += 1;
        let rep = euclidean_embed(&m, 0, ctx.cfg.tol).unwrap();
        ctx.check(
            rep.embeddable && rep.residual <= 1e-9 * m.diam(),
            || {
                format!(
                    "realization n={n} dim={dim}: embeddable={} residual={}",
                    rep.embeddable, rep.residual
                )
            },
        );
    }

    // verdicts must not depend on the base point
    for _ in 0..20 {
        let n = 3 + ctx.rng.index(4);
        let m = random_metric(n, &mut ctx.rng);
        let verdicts: Vec<bool> = (0..n)
            .map(|b| euclidean_embed(&m, b, ctx.cfg.tol).unwrap().embeddable)
            .collect();
        ctx.check(verdicts.iter().all(|&v| v == verdicts[0]), || {
            format!("base-dependent verdicts {verdicts:?}")
        });
    }
}

/// Isometry spot checks: signed permutations fix p-norm classes, a
/// diagonal stretch moves the sup-norm by ln 2, precomposition leaves the
/// sampled distance invariant, and the two separating norms are moved by
/// a nontrivial signed permutation.
fn suite_isometries(ctx: &mut SuiteCtx) {
    let k = 3;
    let domain = ctx.l2_domain(k, 512);
    let signed_perms: Vec<Vec<Vec<f64>>> = vec![
        // swap of the first two axes
        vec![
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ],
        // cyclic rotation with one sign flip
        vec![
            vec![0.0, 0.0, -1.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ],
        // pure sign flip
        vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![0.0, 0.0, -1.0],
        ],
    ];
    for p in P_GRID {
        let n = Norm::new(pnorm_spec(p), k).unwrap();
        for (ai, a) in signed_perms.iter().enumerate() {
            let pre = Norm::new(NormSpec::precomposed(a.clone(), n.spec().clone()), k).unwrap();
            let est = estimate_distance(&pre, &n, &domain, 8).unwrap();
            ctx.check(est.refined <= 1e-12, || {
                format!("signed perm {ai} moves pnorm p={p}: {}", est.refined)
            });
        }
    }

    // diag(1,2) against the sup-norm: exactly ln 2
    let domain2 = ctx.l2_domain(2, 512);
    let diag = vec![vec![1.0, 0.0], vec![0.0, 2.0]];
    let linf = Norm::new(NormSpec::pnorm_inf(), 2).unwrap();
    let stretched = Norm::new(NormSpec::precomposed(diag.clone(), NormSpec::pnorm_inf()), 2).unwrap();
    let est = estimate_distance(&stretched, &linf, &domain2, ctx.cfg.refine_iters).unwrap();
    ctx.check((est.refined - 2.0f64.ln()).abs() <= 1e-12, || {
        format!("diag(1,2) vs sup-norm: {} vs ln 2", est.refined)
    });

    // precomposition invariance with pulled-back domains
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let gl_cases: Vec<Vec<Vec<f64>>> = vec![
        vec![vec![r, -r], vec![r, r]],
        diag.clone(),
        vec![vec![1.0, 1.0], vec![0.0, 1.0]],
    ];
    let l1 = Norm::new(NormSpec::pnorm(1.0).unwrap(), 2).unwrap();
    for (mi, m) in gl_cases.iter().enumerate() {
        let rep = precompose_invariance_check(&l1, &linf, m, &domain2).unwrap();
        ctx.check(rep.bounds_agree(1e-12), || {
            format!(
                "precompose case {mi}: {} vs {}",
                rep.original, rep.precomposed
            )
        });
    }

    // separating norms: moved by any nontrivial signed permutation class
    let graded = Norm::new(
        NormSpec::WeightedAbs {
            terms: (0..k)
                .map(|j| {
                    let mut a = vec![0.0; k];
                    a[j] = 1.0;
                    WeightedTerm { w: (j + 1) as f64, a }
                })
                .collect(),
        },
        k,
    )
    .unwrap();
    for (ai, a) in signed_perms[..2].iter().enumerate() {
        let moved = Norm::new(NormSpec::precomposed(a.clone(), graded.spec().clone()), k).unwrap();
        let est = estimate_distance(&moved, &graded, &domain, 8).unwrap();
        ctx.check(est.refined > 0.01, || {
            format!("graded weights not separated by perm {ai}: {}", est.refined)
        });
    }
    // |x|_1 + |x_0 + x_1| as one spanning family of absolute functionals
    let coupled = Norm::new(
        NormSpec::WeightedAbs {
            terms: vec![
                WeightedTerm { w: 1.0, a: vec![1.0, 0.0, 0.0] },
                WeightedTerm { w: 1.0, a: vec![0.0, 1.0, 0.0] },
                WeightedTerm { w: 1.0, a: vec![0.0, 0.0, 1.0] },
                WeightedTerm { w: 1.0, a: vec![1.0, 1.0, 0.0] },
            ],
        },
        k,
    )
    .unwrap();
    let flip = vec![
        vec![1.0, 0.0, 0.0],
        vec![0.0, -1.0, 0.0],
        vec![0.0, 0.0, 1.0],
    ];
    let moved = Norm::new(NormSpec::precomposed(flip, coupled.spec().clone()), k).unwrap();
    let est = estimate_distance(&moved, &coupled, &domain, 8).unwrap();
    ctx.check(est.refined > 0.01, || {
        format!("sign flip not separated by coupled norm: {}", est.refined)
    });

    // dual pairing spot check: l1 against the all-ones functional peaks at 1
    let v = normquot::norms::dual_norm_eval(&l1, &[1.0, 1.0], &domain2).unwrap();
    ctx.check((v - 1.0).abs() <= 1e-12, || {
        format!("dual of l1 at (1,1): {v} vs 1")
    });
}

/// Composite embedding audit: membership always holds after the rescale,
/// ratios stay within [1, 2], and the three-point counterexample to exact
/// isometry is reproduced (the expected outcome).
fn suite_pipeline(ctx: &mut SuiteCtx) {
    for _ in 0..100 {
        let n = 3 + ctx.rng.index(4); // 3..=6
        let cap = pair_count(n);
        let m = 2 + ctx.rng.index(cap - 1); // 2..=cap
        let x = random_metric(m, &mut ctx.rng);
        match embed_into_sn(&x, n) {
            Ok(rep) => {
                ctx.check(rep.membership_ok, || {
                    format!("pipeline n={n} m={m}: membership failed")
                });
                ctx.check(
                    rep.min_ratio >= 1.0 - 1e-12 && rep.max_ratio <= 2.0 + 1e-12,
                    || {
                        format!(
                            "pipeline n={n} m={m}: ratios [{}, {}]",
                            rep.min_ratio, rep.max_ratio
                        )
                    },
                );
            }
            Err(e) => ctx.check(false, || format!("pipeline n={n} m={m}: {e}")),
        }
    }

    // the equilateral triangle pins the ratio ceiling at exactly 2
    let tri = FiniteMetric::discrete(3).unwrap().scale(std::f64::consts::LN_2);
    match embed_into_sn(&tri, 3) {
        Ok(rep) => {
            ctx.check(rep.membership_ok, || "counterexample: membership failed".into());
            ctx.check(
                (rep.max_ratio - 2.0).abs() <= 1e-12 && (rep.min_ratio - 1.0).abs() <= 1e-12,
                || {
                    format!(
                        "counterexample ratios [{}, {}], expected [1, 2]",
                        rep.min_ratio, rep.max_ratio
                    )
                },
            );
        }
        Err(e) => ctx.check(false, || format!("counterexample: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_at_defaults() {
        let cfg = RunConfig::default();
        let report = run_all(&cfg);
        for s in &report.suites {
            assert!(
                s.passed(),
                "suite {} failed: {:?}",
                s.suite,
                &s.failures[..s.failures.len().min(3)]
            );
        }
        assert!(report.total_cases > 900);
    }

    #[test]
    fn reports_are_seed_deterministic() {
        let cfg = RunConfig {
            seed: 7,
            ..RunConfig::default()
        };
        let a = serde_json::to_string(&run_all(&cfg)).unwrap();
        let b = serde_json::to_string(&run_all(&cfg)).unwrap();
        assert_eq!(a, b);
        let other = RunConfig {
            seed: 8,
            ..RunConfig::default()
        };
        let c = serde_json::to_string(&run_all(&other)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn unknown_suite_is_none() {
        assert!(run_suite("nope", &RunConfig::default()).is_none());
    }
}
