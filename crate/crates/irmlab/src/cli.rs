use crate::config::{ExperimentConfig, Scenario};
use crate::output::{samples_csv, write_outputs, RunMeta};
use crate::presets::{list_presets, presets_table};
use crate::scenarios::exact::{fixed_spike, lazy_sigma, rank_one, sample_wigner_h, sample_wishart_h, uniform_sigma};
use crate::scenarios::{EdgePlan, Runner, SamplePair};
use crate::svg::emit_svg;
use crate::{CliError, Result, EXIT_CONFIG};
use clap::{Parser, Subcommand, ValueEnum};
use irm_chebyshev::{orthogonality_check, product_identity_holds, q_u_max_error, rat, un_pn_identity, IdentityReport};
use irm_edgestats::{spectrum, universality_test, EdgeConfig, EdgeSide};
use irm_ensembles::{Beta, Ensemble, EnsembleSpec, Matrix};
use irm_markov::{bipartite_check_mixing, check_mixing, check_mixing_fourier, MixingStatus};
use irm_nonbacktracking::{verify_wigner_path_expansion, verify_wishart_path_expansion};
use irm_profiles::{generalized_wigner_profile, wishart_profile, BandDensity, ProfileKind, ProfileSpec, VarianceProfile, WishartBuilder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

#[derive(Debug, Parser)]
#[command(name = "irmlab", version, about = "Inhomogeneous random matrix experiments")]
pub struct Cli {
    /// Master seed; overrides the config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for replica-parallel work.
    #[arg(long, global = true, env = "IRMLAB_THREADS")]
    pub threads: Option<usize>,
    /// Output directory (run, sample) or report file (other subcommands).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario from a JSON or TOML config.
    Run {
        config: PathBuf,
        /// Also write SVG histograms.
        #[arg(long)]
        svg: bool,
    },
    /// List the scenario presets, or print one as a config.
    Presets {
        #[arg(long)]
        show: Option<String>,
    },
    /// Draw matrices (or spectra) from an ensemble spec.
    Sample {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        replicas: u64,
        #[arg(long)]
        eigs_only: bool,
    },
    Mixing {
        #[command(subcommand)]
        command: MixingCommand,
    },
    Cheb {
        #[command(subcommand)]
        command: ChebCommand,
    },
    Diagrams {
        #[command(subcommand)]
        command: DiagramsCommand,
    },
    Nbpath {
        #[command(subcommand)]
        command: NbpathCommand,
    },
    Edge {
        #[command(subcommand)]
        command: EdgeCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum MixingCommand {
    /// Check B1/B2 (or D1/D2 for bipartite profiles).
    Check {
        /// Profile document or profile spec (JSON).
        #[arg(long, conflicts_with = "profile_preset")]
        profile: Option<PathBuf>,
        #[arg(long)]
        profile_preset: Option<String>,
        /// Size for presets.
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        fourier: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Suite {
    Orthogonality,
    Product,
    WishartPoly,
}

#[derive(Debug, Subcommand)]
pub enum ChebCommand {
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        max: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProfileChoice {
    Uniform,
    Lazy,
}

#[derive(Debug, Subcommand)]
pub enum DiagramsCommand {
    /// Ribbon, Chebyshev and cumulant expansions against the Wick oracle.
    Verify {
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Orders, one per trace, or a single order repeated `s` times.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long = "N")]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        beta: u8,
        #[arg(long)]
        spike: Option<f64>,
        #[arg(long, value_enum, default_value = "uniform")]
        profile: ProfileChoice,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathModelArg {
    Wigner,
    Wishart,
}

#[derive(Debug, Subcommand)]
pub enum NbpathCommand {
    Verify {
        #[arg(long, value_enum)]
        model: PathModelArg,
        #[arg(long)]
        n: usize,
        /// Dimension (Wigner) or number of columns (Wishart).
        #[arg(long = "N")]
        dim: usize,
        /// Rows for Wishart; defaults to ⌈N/2⌉.
        #[arg(long = "M")]
        rows: Option<usize>,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, default_value_t = 1)]
        beta: u8,
        #[arg(long)]
        spike: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum EdgeCommand {
    /// KS comparison of the extreme eigenvalues of two ensembles.
    Compare {
        /// Ensemble spec file, or the tag of a statistical scenario.
        #[arg(long)]
        test: String,
        #[arg(long)]
        baseline: String,
        /// Size passed to scenario tags.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        replicas: usize,
        #[arg(long, default_value_t = 0.01)]
        level: f64,
        #[arg(long, default_value = "upper")]
        side: String,
        /// Histogram overlay; `hist.svg` becomes `hist-k1.svg`, `hist-k2.svg`, ...
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Raw samples; defaults to the report path with a `.csv` extension.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 40)]
        bins: usize,
    },
}

fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Prints JSON to stdout, or writes it to `--out` when given.
fn emit_json(out: Option<&Path>, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))? + "\n";
    match out {
        Some(p) => write_file(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn beta(b: u8) -> Result<Beta> {
    Beta::try_from(b).map_err(CliError::Config)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn parse_spec(path: &Path) -> Result<EnsembleSpec> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "toml") {
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    } else {
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// A spec file, or the test ensemble of a statistical scenario preset.
fn spec_or_preset(arg: &str, n: Option<usize>) -> Result<EnsembleSpec> {
    let path = Path::new(arg);
    if path.exists() {
        return parse_spec(path);
    }
    let tag = if arg == "goe" { "goe-baseline" } else { arg };
    match Scenario::from_tag(tag).filter(|s| s.is_statistical()) {
        Some(s) => {
            let mut cfg = ExperimentConfig::new(s);
            cfg.params.n = n;
            Ok(EdgePlan::resolve(&cfg)?.test)
        }
        None => Err(CliError::Config(format!("`{arg}` is neither a spec file nor a statistical scenario"))),
    }
}

/// Named profiles for `--profile-preset`.
pub fn profile_preset(name: &str, size: Option<usize>, seed: u64) -> Result<ProfileSpec> {
    let n = size.unwrap_or(64);
    Ok(match name {
        "uniform" => ProfileSpec::Uniform { n },
        "band" => ProfileSpec::Band { d: 1, l: n, w: 8.0, density: BandDensity::Gaussian },
        "gw" => ProfileSpec::GeneralizedWigner { n, c: 0.5, cap: 2.0, seed },
        "sparse" => ProfileSpec::SparseHomogeneous { n, theta: 4.0 },
        "block" => ProfileSpec::BlockWegner { blocks: 4, m: (n / 4).max(1), lambda: 0.5 },
        "regular" => ProfileSpec::RandomRegular { n, degree: 4, seed },
        "wishart" => ProfileSpec::Wishart { m: n.div_ceil(2), n, width: Some(0.3) },
        _ => {
            return Err(CliError::Config(format!(
                "unknown profile preset `{name}` (uniform, band, gw, sparse, block, regular, wishart)"
            )))
        }
    })
}

fn load_profile(path: &Path) -> Result<VarianceProfile> {
    let text = read(path)?;
    if let Ok(p) = VarianceProfile::from_json(&text) {
        return Ok(p);
    }
    let spec: ProfileSpec = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(spec.build()?)
}

fn matrix_csv(m: &Matrix) -> String {
    let mut s = String::new();
    let (rows, cols) = m.shape();
    for i in 0..rows {
        let line: Vec<String> = (0..cols)
            .map(|j| match m {
                Matrix::Real(a) => format!("{:e}", a[(i, j)]),
                Matrix::Complex(a) => format!("{:e},{:e}", a[(i, j)].re, a[(i, j)].im),
            })
            .collect();
        let _ = writeln!(s, "{}", line.join(","));
    }
    s
}

fn setup_threads(threads: Option<usize>) -> Result<usize> {
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        // A second initialization in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    Ok(rayon::current_num_threads())
}

fn run_command(cli: Cli) -> Result<i32> {
    let threads = setup_threads(cli.threads)?;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Run { config, svg } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            cfg.format.svg |= svg;
            let dir = out.map(Path::to_path_buf).or_else(|| cfg.output.clone()).unwrap_or_else(|| PathBuf::from("irmlab-out").join(cfg.scenario.tag()));
            let started = now();
            let clock = Instant::now();
            let outcome = Runner::new().run(&cfg)?;
            let meta = RunMeta {
                started_unix: started,
                finished_unix: now(),
                elapsed_seconds: clock.elapsed().as_secs_f64(),
                threads,
                version: env!("CARGO_PKG_VERSION").into(),
            };
            write_outputs(&outcome, &dir, &cfg.format, &meta)?;
            let r = &outcome.report;
            let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).take(5).collect();
            println!("{}: {:?} ({}) -> {}", cfg.scenario.tag(), r.status, r.message, dir.display());
            for f in failed {
                println!("  failed: {f}");
            }
            Ok(r.exit_code())
        }
        Command::Presets { show } => {
            match show {
                None => print!("{}", presets_table()),
                Some(tag) => {
                    let p = list_presets()
                        .into_iter()
                        .find(|p| p.scenario.tag() == tag)
                        .ok_or_else(|| CliError::Config(format!("unknown scenario `{tag}`")))?;
                    emit_json(out, &p.config)?;
                }
            }
            Ok(0)
        }
        Command::Sample { spec, replicas, eigs_only } => {
            let mut spec = parse_spec(&spec)?;
            if let Some(s) = cli.seed {
                spec.seed = s;
            }
            let ens = Ensemble::new(spec.clone())?;
            let dir = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("irmlab-samples"));
            write_file(&dir.join("spec.json"), &(serde_json::to_string_pretty(&spec).unwrap_or_default() + "\n"))?;
            let mut spectra = String::new();
            for r in 0..replicas {
                let x = ens.sample(r)?.matrix;
                if eigs_only {
                    let ev = spectrum(&x)?;
                    let line: Vec<String> = ev.iter().map(|v| format!("{v:e}")).collect();
                    let _ = writeln!(spectra, "{}", line.join(","));
                } else {
                    write_file(&dir.join(format!("replica-{r}.csv")), &matrix_csv(&x))?;
                }
            }
            if eigs_only {
                write_file(&dir.join("spectrum.csv"), &spectra)?;
            }
            println!("wrote {replicas} replica(s) to {}", dir.display());
            Ok(0)
        }
        Command::Mixing { command: MixingCommand::Check { profile, profile_preset: preset, size, t, gamma, delta, horizon, fourier } } => {
            let p = match (profile, preset) {
                (Some(path), _) => load_profile(&path)?,
                (None, Some(name)) => profile_preset(&name, size, cli.seed.unwrap_or(0))?.build()?,
                (None, None) => return Err(CliError::Config("give --profile or --profile-preset".into())),
            };
            let r = if p.kind() == ProfileKind::Bipartite {
                bipartite_check_mixing(&p, t, gamma, delta, horizon)?
            } else if fourier {
                check_mixing_fourier(&p, t, gamma, delta, horizon)?
            } else {
                check_mixing(&p, t, gamma, delta, horizon)?
            };
            emit_json(out, &r)?;
            Ok(match r.status {
                MixingStatus::Pass => 0,
                MixingStatus::Fail => 2,
                MixingStatus::HorizonLimited => 3,
            })
        }
        Command::Cheb { command: ChebCommand::Verify { suite, max } } => {
            let (report, worst) = cheb_suite(suite, max, cli.seed.unwrap_or(0));
            let passed = report.passed() && worst.is_none_or(|w| w <= 1e-10);
            emit_json(out, &json!({ "suite": format!("{suite:?}"), "max": max, "passed": passed, "report": report, "worst_error": worst }))?;
            Ok(if passed { 0 } else { 2 })
        }
        Command::Diagrams { command: DiagramsCommand::Verify { s, n, dim, beta: b, spike, profile } } => {
            let orders = match n.len() {
                1 => vec![n[0]; s],
                k if k == s => n,
                _ => return Err(CliError::Config(format!("--n needs 1 or {s} orders, got {}", n.len()))),
            };
            if dim < 2 && matches!(profile, ProfileChoice::Lazy) {
                return Err(CliError::Config("the lazy profile needs N ≥ 2".into()));
            }
            let beta = beta(b)?;
            let s2 = match profile {
                ProfileChoice::Uniform => uniform_sigma(dim),
                ProfileChoice::Lazy => lazy_sigma(dim),
            };
            let a = spike.map(|t| fixed_spike(dim, beta, t));
            let r = irm_diagrams::verify_expansions(&orders, &s2, a.as_ref(), beta)?;
            emit_json(out, &json!({ "orders": orders, "N": dim, "beta": b, "spike": spike, "wick_oracle": r.checks[0].lhs, "report": r }))?;
            Ok(if r.passed { 0 } else { 2 })
        }
        Command::Nbpath { command: NbpathCommand::Verify { model, n, dim, rows, seeds, beta: b, spike } } => {
            let beta = beta(b)?;
            let base = cli.seed.unwrap_or(0);
            let mut checks = vec![];
            for s in 0..seeds {
                let seed = base.wrapping_add(s);
                let r = match model {
                    PathModelArg::Wigner => {
                        let s2 = generalized_wigner_profile(dim, 0.4, 3.0, seed)?.dense();
                        let h = sample_wigner_h(&s2, beta, seed)?;
                        let a = spike.map(|t| rank_one(dim, dim, beta, t, seed ^ 0xa));
                        verify_wigner_path_expansion(&h, a.as_ref(), &s2, n)?
                    }
                    PathModelArg::Wishart => {
                        let m = rows.unwrap_or(dim.div_ceil(2));
                        let prof = wishart_profile(m, dim, WishartBuilder::Banded { width: 0.3 })?;
                        let s2 = prof.dense();
                        let h = sample_wishart_h(&s2, beta, seed)?;
                        let a = spike.map(|t| rank_one(m, dim, beta, t, seed ^ 0xb));
                        verify_wishart_path_expansion(&h, a.as_ref(), &s2, n, prof.alpha())?
                    }
                };
                checks.push(r);
            }
            let passed = checks.iter().all(|c| c.passed);
            let worst = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
            emit_json(out, &json!({ "passed": passed, "worst_residual": worst, "checks": checks }))?;
            Ok(if passed { 0 } else { 2 })
        }
        Command::Edge { command: EdgeCommand::Compare { test, baseline, n, k, replicas, level, side, svg, csv, bins } } => {
            let side = match side.as_str() {
                "upper" => EdgeSide::Upper,
                "lower" => EdgeSide::Lower,
                o => return Err(CliError::Config(format!("side must be upper or lower, got {o}"))),
            };
            let (t, b) = (spec_or_preset(&test, n)?, spec_or_preset(&baseline, n)?);
            let cfg = EdgeConfig { k, replicas, seed: cli.seed.unwrap_or(0), level, side };
            let r = universality_test(&t, &b, &cfg)?;
            let report_path = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("edge-report.json"));
            let summary = json!({
                "test": { "spec": r.test.spec, "digest": r.test.digest, "edge": r.test.edge, "scale": r.test.scale },
                "baseline": { "spec": r.baseline.spec, "digest": r.baseline.digest },
                "k": k,
                "replicas": replicas,
                "level": r.level,
                "coordinate_level": r.coordinate_level,
                "coordinates": r.coordinates,
                "gap": r.gap,
                "min_p": r.min_p,
                "reject": r.reject,
            });
            emit_json(Some(&report_path), &summary)?;
            let pair = SamplePair { label: "compare".into(), test: r.test.clone(), baseline: r.baseline.clone() };
            let csv_path = csv.unwrap_or_else(|| report_path.with_extension("csv"));
            write_file(&csv_path, &samples_csv(std::slice::from_ref(&pair)))?;
            if let Some(svg) = svg {
                let stem = svg.file_stem().map_or("hist".into(), |s| s.to_string_lossy().into_owned());
                for i in 0..k {
                    let path = svg.with_file_name(format!("{stem}-k{}.svg", i + 1));
                    emit_svg(&r.test.coordinate(i), &r.baseline.coordinate(i), bins, &format!("λ_{} rescaled", i + 1), &path)?;
                }
            }
            println!(
                "{}: min p = {:.4e} at level {} (per coordinate {}) -> {}",
                if r.reject { "rejected" } else { "not rejected" },
                r.min_p,
                r.level,
                r.coordinate_level,
                report_path.display()
            );
            Ok(if r.reject { 2 } else { 0 })
        }
    }
}

/// Runs one exact Chebyshev suite; the second value is the worst
/// floating-point error where one applies.
pub fn cheb_suite(suite: Suite, max: usize, seed: u64) -> (IdentityReport, Option<f64>) {
    match suite {
        Suite::Orthogonality => (orthogonality_check(max), None),
        Suite::Product => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut r = IdentityReport::new("product coefficients at x = 1");
            for _ in 0..200 {
                let len = rng.random_range(1..=4);
                let list: Vec<usize> = (0..len).map(|_| rng.random_range(0..=max)).collect();
                r.record(product_identity_holds(&list), || format!("{list:?}"));
            }
            (r, None)
        }
        Suite::WishartPoly => {
            let mut r = IdentityReport::new("Q_n in Chebyshev form, and U_n ↔ P_n in rational mode");
            let mut worst: f64 = 0.0;
            for alpha in [0.25, 0.5, 1.0] {
                for n in 0..=max {
                    let e = q_u_max_error(n, alpha, 201);
                    worst = worst.max(e);
                    r.record(e <= 1e-10, || format!("α={alpha} n={n}: {e:e}"));
                }
            }
            for s in [rat(1, 2), rat(1, 1)] {
                let u = un_pn_identity(&s, max.min(12));
                r.cases += u.corrected.cases;
                r.failure_count += u.corrected.failure_count;
                r.failures.extend(u.corrected.failures);
            }
            (r, Some(worst))
        }
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_command(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("irmlab: {e}");
            e.exit_code()
        }
    }
}
