//! `normquot`: distances, representatives, and embeddings in the
//! dilation-quotient spaces of norms on `R^k` and metrics on finite sets.
//!
//! Exit codes: 0 success, 1 verification-property failure, 2 usage or
//! validation error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use normquot::embed::{embed_into_sn, euclidean_embed, frechet_embed, sup_norm_dist, PsiPoint};
use normquot::metric::pairs;
use normquot::norms::{
    distance_closed_form, estimate_distance_opts, DomainKind, EstimateOptions, Norm, NormSpec,
    SampleDomain,
};
use normquot_cli::{io, suites, RunConfig};

#[derive(Parser)]
#[command(name = "normquot", version, about = "Distances and embeddings in dilation-quotient spaces of norms and finite metrics")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Seed for every randomized draw (prints with the output for replay)
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Random sample count for domain construction
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Hill-climbing iterations for distance refinement
    #[arg(long, default_value_t = 64)]
    refine_iters: usize,
    /// Relative tolerance for embeddability verdicts
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Worker threads for sample evaluation
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            seed: self.seed,
            samples: self.samples,
            refine_iters: self.refine_iters,
            tol: self.tol,
            threads: self.threads,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Write to a file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format (csv only for coordinate- or point-valued results)
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Clone)]
struct DomainArgs {
    /// Dimension k of the ambient space
    #[arg(long)]
    dim: usize,
    /// Radius of the reference-norm sphere
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// JSON file with the reference norm (default: the 2-norm)
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Comma-separated center; selects the off-center unit-gap sphere
    /// instead of a reference-norm sphere
    #[arg(long)]
    center: Option<String>,
}

impl DomainArgs {
    fn kind(&self) -> Result<DomainKind, String> {
        if let Some(center) = &self.center {
            let center: Result<Vec<f64>, _> =
                center.split(',').map(|t| t.trim().parse::<f64>()).collect();
            let center = center.map_err(|e| format!("bad --center: {e}"))?;
            if center.len() != self.dim {
                return Err(format!(
                    "--center has {} coordinates, --dim is {}",
                    center.len(),
                    self.dim
                ));
            }
            return Ok(DomainKind::OffCenterSphere { center });
        }
        let reference = match &self.reference {
            Some(path) => io::read_norm_spec(path)?,
            None => NormSpec::pnorm(2.0).expect("2 is a valid exponent"),
        };
        Ok(DomainKind::NormSphere {
            reference,
            radius: self.radius,
        })
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Estimate the dilation distance between two norms given as JSON specs
    NormDist {
        spec_a: PathBuf,
        spec_b: PathBuf,
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Log-distortion between two metrics, with proportionality verdict
    MetricDist {
        m1: PathBuf,
        m2: PathBuf,
        /// Also search for a distance-preserving bijection (n <= 9)
        #[arg(long)]
        isometry: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Embedding commands
    Embed {
        #[command(subcommand)]
        which: EmbedCmd,
    },
    /// Draw a sample domain and print it
    SampleDomain {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run verification suites (`all` or one of the registered names)
    Verify {
        /// `all` or one of: plp, pskp, mixture, rs1n, apex, diamnorm,
        /// schoenberg, isometries, pipeline
        suite: String,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand)]
enum EmbedCmd {
    /// Distance-profile coordinates with an exactness check appended
    Frechet {
        input: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Euclidean embeddability verdict with realized coordinates
    Schoenberg {
        input: PathBuf,
        /// Base point index
        #[arg(long, default_value_t = 0)]
        base: usize,
        /// Relative eigenvalue tolerance
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Composite embedding into the space of metrics on `[n]` mod dilation
    Sn {
        input: PathBuf,
        /// Target point count n (requires |X| <= n(n-1)/2)
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Log-coordinates of a metric
    Psi {
        input: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Serialize)]
struct NormDistOutput {
    lower_bound: f64,
    refined: f64,
    closed_form: Option<f64>,
    arg_max: Vec<f64>,
    arg_min: Vec<f64>,
    samples_used: usize,
    seed: u64,
}

#[derive(Serialize)]
struct IsometryOutput {
    found: bool,
    permutation: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct MetricDistOutput {
    n: usize,
    distance: f64,
    proportional_scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    isometry: Option<IsometryOutput>,
}

#[derive(Serialize)]
struct FrechetOutput {
    coordinates: Vec<Vec<f64>>,
    /// Largest deviation of realized sup-norm distances from the input.
    sup_check_max_error: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn csv_unsupported(out: &OutArgs) -> Result<(), String> {
    if out.format == Format::Csv {
        return Err("csv output applies to coordinate- or point-valued results only".into());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::NormDist {
            spec_a,
            spec_b,
            domain,
            run,
            out,
        } => {
            csv_unsupported(&out)?;
            let cfg = run.config();
            cfg.validate()?;
            let a = Norm::new(io::read_norm_spec(&spec_a)?, domain.dim)
                .map_err(|e| format!("{}: {e}", spec_a.display()))?;
            let b = Norm::new(io::read_norm_spec(&spec_b)?, domain.dim)
                .map_err(|e| format!("{}: {e}", spec_b.display()))?;
            let sphere = SampleDomain::sample(domain.kind()?, cfg.samples, cfg.seed, domain.dim)
                .map_err(|e| e.to_string())?;
            let est = estimate_distance_opts(
                &a,
                &b,
                &sphere,
                EstimateOptions {
                    refine_iters: cfg.refine_iters,
                    threads: cfg.threads,
                },
            )
            .map_err(|e| e.to_string())?;
            let output = NormDistOutput {
                lower_bound: est.lower_bound,
                refined: est.refined,
                closed_form: distance_closed_form(&a, &b),
                arg_max: est.arg_max,
                arg_min: est.arg_min,
                samples_used: est.samples_used,
                seed: est.seed,
            };
            io::write_json(&output, out.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::MetricDist {
            m1,
            m2,
            isometry,
            out,
        } => {
            csv_unsupported(&out)?;
            let a = io::read_metric(&m1)?;
            let b = io::read_metric(&m2)?;
            let distance = a.log_distortion(&b).map_err(|e| e.to_string())?;
            let proportional_scale = a.are_proportional(&b).map_err(|e| e.to_string())?;
            let isometry = if isometry {
                let perm = a.brute_force_isometry(&b).map_err(|e| e.to_string())?;
                Some(IsometryOutput {
                    found: perm.is_some(),
                    permutation: perm,
                })
            } else {
                None
            };
            let output = MetricDistOutput {
                n: a.n(),
                distance,
                proportional_scale,
                isometry,
            };
            io::write_json(&output, out.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Embed { which } => run_embed(which),
        Cmd::SampleDomain { domain, run, out } => {
            let cfg = run.config();
            cfg.validate()?;
            let sphere = SampleDomain::sample(domain.kind()?, cfg.samples, cfg.seed, domain.dim)
                .map_err(|e| e.to_string())?;
            match out.format {
                Format::Json => io::write_json(&sphere, out.output.as_deref())?,
                Format::Csv => io::write_csv_rows(sphere.points(), out.output.as_deref())?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { suite, run, out } => {
            csv_unsupported(&out)?;
            let cfg = run.config();
            cfg.validate()?;
            let report = if suite == "all" {
                suites::run_all(&cfg)
            } else {
                let result = suites::run_suite(&suite, &cfg).ok_or_else(|| {
                    format!(
                        "unknown suite {suite:?}; expected all or one of {}",
                        suites::SUITES.join(", ")
                    )
                })?;
                suites::aggregate(&cfg, vec![result])
            };
            eprintln!("verify: seed {} (replay with --seed)", cfg.seed);
            for s in &report.suites {
                eprintln!(
                    "suite {}: {} cases, {} failures ({} ms)",
                    s.suite,
                    s.cases,
                    s.failures.len(),
                    s.wall.as_millis()
                );
            }
            io::write_json(&report, out.output.as_deref())?;
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn run_embed(which: EmbedCmd) -> Result<ExitCode, String> {
    match which {
        EmbedCmd::Frechet { input, out } => {
            let m = io::read_metric(&input)?;
            let coordinates = frechet_embed(&m);
            match out.format {
                Format::Csv => io::write_csv_rows(&coordinates, out.output.as_deref())?,
                Format::Json => {
                    let mut err = 0.0f64;
                    for (i, j) in pairs(m.n()) {
                        let realized = sup_norm_dist(&coordinates[i], &coordinates[j]);
                        err = err.max((realized - m.dist(i, j)).abs());
                    }
                    let output = FrechetOutput {
                        coordinates,
                        sup_check_max_error: err,
                    };
                    io::write_json(&output, out.output.as_deref())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        EmbedCmd::Schoenberg {
            input,
            base,
            tol,
            out,
        } => {
            if !tol.is_finite() || tol <= 0.0 {
                return Err(format!("tol must be positive, got {tol}"));
            }
            let m = io::read_metric(&input)?;
            let report = euclidean_embed(&m, base, tol).map_err(|e| e.to_string())?;
            match out.format {
                Format::Csv => io::write_csv_rows(&report.coords, out.output.as_deref())?,
                Format::Json => io::write_json(&report, out.output.as_deref())?,
            }
            Ok(ExitCode::SUCCESS)
        }
        EmbedCmd::Sn { input, n, out } => {
            csv_unsupported(&out)?;
            let m = io::read_metric(&input)?;
            let report = embed_into_sn(&m, n).map_err(|e| e.to_string())?;
            io::write_json(&report, out.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        EmbedCmd::Psi { input, out } => {
            csv_unsupported(&out)?;
            let m = io::read_metric(&input)?;
            let psi = PsiPoint::from_metric(&m);
            io::write_json(&psi, out.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
