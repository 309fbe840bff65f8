//! `framelab` command-line interface.
//!
//! Exit codes: 0 success, 2 input error, 3 precondition violation,
//! 4 verification failure under `--strict`.

mod error;
mod experiments;
mod output;
mod spec;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use framelab::exec::Mode;
use framelab::frames::{
    analyze, gaussian_frame, harmonic_frame, random_onb, random_parseval, simplex_etf, standard_onb, Frame,
};
use framelab::gleason::{
    degree_ladder_experiment, fit_quadratic, homogeneity_check, verify_onb_gleason, verify_parseval_gleason, FitClass,
    Sampling,
};
use framelab::linalg::Field;
use framelab::povm::{frame_from_povm, povm_from_frame, povm_from_frame_grouped, random_density, Povm};
use framelab::rng::seeded;
use framelab::waveforms::{ambiguity, bjorck, gabor_coherence, gabor_frame, is_cazac, quadratic_phase, Sequence};
use serde::Serialize;
use serde_json::{json, Value};

use error::CliError;
use output::canonical_json;
use spec::{parse_field, SpecContext};

#[derive(Parser)]
#[command(
    name = "framelab",
    version,
    about = "Finite frames, POVMs, Gleason functions and CAZAC waveforms"
)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Numerical tolerance.
    #[arg(long, global = true, env = "FRAMELAB_TOL", default_value_t = 1e-10)]
    tol: f64,
    /// Exit with code 4 when a verification fails.
    #[arg(long, global = true)]
    strict: bool,
    /// Run independent trials in parallel.
    #[arg(long, global = true)]
    parallel: bool,
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a frame, sequence or density operator.
    Gen(GenArgs),
    /// Report bounds, tightness, coherence and potential of a frame.
    Analyze { file: PathBuf },
    /// Convert between Parseval frames and POVMs.
    Convert {
        #[arg(long, value_enum)]
        to: Target,
        file: PathBuf,
    },
    /// Gleason function verification and fitting.
    Gleason {
        #[command(subcommand)]
        command: GleasonCommand,
    },
    /// CAZAC sequences, ambiguity tables and Gabor frames.
    Cazac {
        #[command(subcommand)]
        command: CazacCommand,
    },
    /// Run a named reproducible experiment.
    Experiment {
        #[arg(value_enum)]
        name: experiments::Experiment,
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Povm,
    Frame,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Simplex,
    Harmonic,
    Onb,
    RandomOnb,
    Parseval,
    Gaussian,
    Bjorck,
    QuadraticPhase,
    Constant,
    Density,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// One-based frequency selector for harmonic frames, e.g. `1,2`.
    #[arg(long)]
    sel: Option<String>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    length: Option<usize>,
    #[arg(long, default_value = "C")]
    field: String,
}

#[derive(Args)]
struct GleasonArgs {
    /// Shorthand (`cos2d:6`, `expnorm`, `epsilon1d:0.2`, `rational-indicator`,
    /// `periodic-sin2:W`, `quadratic`, `quadratic+const`), inline JSON or a file.
    #[arg(long)]
    spec: String,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value = "C")]
    field: String,
    /// Constant added by `quadratic+const`.
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
}

#[derive(Subcommand)]
enum GleasonCommand {
    VerifyOnb(GleasonArgs),
    VerifyParseval {
        #[command(flatten)]
        args: GleasonArgs,
        #[arg(long)]
        n: usize,
    },
    Fit(GleasonArgs),
    Ladder {
        #[command(flatten)]
        args: GleasonArgs,
        #[arg(long)]
        n0: usize,
        #[arg(long)]
        n1: usize,
    },
    Homogeneity {
        #[command(flatten)]
        args: GleasonArgs,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Basis verification, Parseval verification at N = d + 1, fit and homogeneity.
    Counterexample(GleasonArgs),
}

#[derive(Subcommand)]
enum CazacCommand {
    Test {
        file: PathBuf,
    },
    /// Ambiguity magnitudes as CSV, row m and column n.
    Ambiguity {
        file: PathBuf,
    },
    Gabor {
        file: PathBuf,
    },
}

/// What a command produced: the file contents, a one-line summary and whether
/// its verification passed.
struct Outcome {
    body: String,
    summary: String,
    passed: bool,
}

impl Outcome {
    fn json<T: Serialize>(value: &T, summary: String, passed: bool) -> Result<Self, CliError> {
        Ok(Outcome {
            body: canonical_json(value)?,
            summary,
            passed,
        })
    }
}

fn mode(cli: &Cli) -> Mode {
    if cli.parallel {
        Mode::Parallel
    } else {
        Mode::Sequential
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Input(format!("missing --{flag}")))
}

fn pass_fail(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Adds `seed` and `mode` to an object report.
fn stamped<T: Serialize>(report: &T, seed: u64, mode: Mode) -> Result<Value, CliError> {
    let mut v = serde_json::to_value(report)?;
    if let Some(obj) = v.as_object_mut() {
        obj.insert("seed".into(), json!(seed));
        obj.insert("mode".into(), serde_json::to_value(mode)?);
    }
    Ok(v)
}

fn gen(cli: &Cli, a: &GenArgs) -> Result<Outcome, CliError> {
    let field = parse_field(&a.field)?;
    let frame_outcome = |f: Frame, what: &str| {
        let summary = format!("{what}: {} vectors in {}^{}", f.len(), field_name(f.field()), f.dim());
        Outcome::json(&f, summary, true)
    };
    let seq_outcome = |u: Sequence, what: &str| {
        let summary = format!("{what}: length {}", u.len());
        Outcome::json(&u, summary, true)
    };
    match a.kind {
        GenKind::Simplex => frame_outcome(simplex_etf(need(a.dim, "dim")?)?, "simplex frame"),
        GenKind::Harmonic => {
            let d = need(a.dim, "dim")?;
            let sel = match &a.sel {
                Some(s) => s
                    .split(',')
                    .map(|t| t.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| CliError::Input(format!("bad --sel '{s}'")))?,
                None => (1..=d).collect(),
            };
            frame_outcome(harmonic_frame(d, need(a.n, "n")?, &sel)?, "harmonic frame")
        }
        GenKind::Onb => frame_outcome(standard_onb(need(a.dim, "dim")?, field), "standard basis"),
        GenKind::RandomOnb => frame_outcome(random_onb(need(a.dim, "dim")?, field, cli.seed), "random basis"),
        GenKind::Parseval => frame_outcome(
            random_parseval(need(a.dim, "dim")?, need(a.n, "n")?, field, cli.seed)?,
            "random Parseval frame",
        ),
        GenKind::Gaussian => frame_outcome(
            gaussian_frame(&mut seeded(cli.seed), need(a.dim, "dim")?, need(a.n, "n")?, field),
            "Gaussian frame",
        ),
        GenKind::Bjorck => seq_outcome(bjorck(need(a.p, "p")?)?, "Bjorck sequence"),
        GenKind::QuadraticPhase => {
            let d = need(a.length, "length")?;
            if d % 2 == 0 {
                return Err(CliError::Input("quadratic-phase needs an odd --length".into()));
            }
            seq_outcome(quadratic_phase(d)?, "quadratic-phase sequence")
        }
        GenKind::Constant => seq_outcome(Sequence::constant(need(a.length, "length")?)?, "constant sequence"),
        GenKind::Density => {
            let d = need(a.dim, "dim")?;
            if d == 0 {
                return Err(CliError::Input("--dim must be positive".into()));
            }
            let rho = random_density(&mut seeded(cli.seed), d, field);
            Outcome::json(&rho, format!("random density operator of dimension {d}"), true)
        }
    }
}

fn field_name(f: Field) -> &'static str {
    match f {
        Field::Real => "R",
        Field::Complex => "C",
    }
}

fn convert(cli: &Cli, to: Target, file: &Path) -> Result<Outcome, CliError> {
    match to {
        Target::Povm => {
            let raw: Value = read_json(file)?;
            let partition: Option<Vec<Vec<usize>>> = match raw.get("partition") {
                Some(p) => Some(serde_json::from_value(p.clone())?),
                None => None,
            };
            let frame: Frame = serde_json::from_value(raw)?;
            let povm = match &partition {
                Some(p) => povm_from_frame_grouped(&frame, p, cli.tol)?,
                None => povm_from_frame(&frame, cli.tol)?,
            };
            let summary = format!("POVM with {} effects on dimension {}", povm.len(), povm.dim());
            Outcome::json(&povm, summary, true)
        }
        Target::Frame => {
            let povm: Povm = read_json(file)?;
            let grouped = frame_from_povm(&povm, cli.tol, false)?;
            let summary = format!(
                "Parseval frame with {} vectors from {} effects",
                grouped.frame.len(),
                povm.len()
            );
            if povm.partition().is_some() {
                Outcome::json(&grouped, summary, true)
            } else {
                Outcome::json(&grouped.frame, summary, true)
            }
        }
    }
}

fn gleason(cli: &Cli, cmd: &GleasonCommand) -> Result<Outcome, CliError> {
    let args = match cmd {
        GleasonCommand::VerifyOnb(a) | GleasonCommand::Fit(a) | GleasonCommand::Counterexample(a) => a,
        GleasonCommand::VerifyParseval { args, .. }
        | GleasonCommand::Ladder { args, .. }
        | GleasonCommand::Homogeneity { args, .. } => args,
    };
    let ctx = SpecContext {
        dim: args.dim,
        field: parse_field(&args.field)?,
        constant: args.c,
        seed: cli.seed,
    };
    let (spec, g) = spec::build(&args.spec, &ctx)?;
    let sampling = Sampling {
        trials: args.trials,
        seed: cli.seed,
        tol: cli.tol,
        mode: mode(cli),
    };
    let with_spec = |mut v: Value| -> Result<Value, CliError> {
        v.as_object_mut()
            .expect("object report")
            .insert("spec".into(), serde_json::to_value(&spec)?);
        Ok(v)
    };
    match cmd {
        GleasonCommand::VerifyOnb(_) => {
            let r = verify_onb_gleason(&g, &sampling);
            let summary = format!(
                "verify-onb: {} (max deviation {:e})",
                pass_fail(r.passed),
                r.max_deviation
            );
            Outcome::json(&with_spec(stamped(&r, cli.seed, sampling.mode)?)?, summary, r.passed)
        }
        GleasonCommand::VerifyParseval { n, .. } => {
            let r = verify_parseval_gleason(&g, *n, &sampling)?;
            let summary = format!(
                "verify-parseval N={n}: {} (max deviation {:e})",
                pass_fail(r.passed),
                r.max_deviation
            );
            Outcome::json(&with_spec(stamped(&r, cli.seed, sampling.mode)?)?, summary, r.passed)
        }
        GleasonCommand::Fit(_) => {
            let r = fit_quadratic(&g, cli.seed);
            let passed = r.classification == FitClass::Quadratic;
            let summary = format!("fit: {:?} (residual {:e})", r.classification, r.residual);
            Outcome::json(&with_spec(stamped(&r, cli.seed, sampling.mode)?)?, summary, passed)
        }
        GleasonCommand::Ladder { n0, n1, .. } => {
            let r = degree_ladder_experiment(&g, *n0, *n1, &sampling)?;
            let summary = format!("ladder N={n0}..{n1}: {}", pass_fail(r.passed));
            Outcome::json(&with_spec(stamped(&r, cli.seed, sampling.mode)?)?, summary, r.passed)
        }
        GleasonCommand::Homogeneity { samples, .. } => {
            let r = homogeneity_check(&g, *samples, cli.seed, cli.tol);
            let summary = format!(
                "homogeneity: {} (max deviation {:e})",
                pass_fail(r.passed),
                r.max_deviation
            );
            Outcome::json(&with_spec(stamped(&r, cli.seed, sampling.mode)?)?, summary, r.passed)
        }
        GleasonCommand::Counterexample(_) => {
            let onb = verify_onb_gleason(&g, &sampling);
            let parseval = verify_parseval_gleason(&g, g.dim() + 1, &sampling)?;
            let fit = fit_quadratic(&g, cli.seed);
            let homogeneity = homogeneity_check(&g, 500, cli.seed, cli.tol);
            // Gleason for bases yet not given by a single quadratic form on Parseval frames
            let separates = onb.passed && (!parseval.passed || fit.classification == FitClass::NotQuadratic);
            let summary = format!(
                "counterexample: bases {}, Parseval N={} {}, fit {:?}",
                pass_fail(onb.passed),
                g.dim() + 1,
                pass_fail(parseval.passed),
                fit.classification
            );
            let report = json!({
                "onb": onb,
                "parseval": parseval,
                "fit": fit,
                "homogeneity": homogeneity,
                "separates": separates,
            });
            Outcome::json(
                &with_spec(stamped(&report, cli.seed, sampling.mode)?)?,
                summary,
                separates,
            )
        }
    }
}

fn cazac(cli: &Cli, cmd: &CazacCommand) -> Result<Outcome, CliError> {
    match cmd {
        CazacCommand::Test { file } => {
            let u: Sequence = read_json(file)?;
            let r = is_cazac(&u, cli.tol);
            let summary = format!(
                "cazac: {} (CA deviation {:e}, ZAC residual {:e})",
                pass_fail(r.passed),
                r.ca_deviation,
                r.zac_residual
            );
            Outcome::json(&r, summary, r.passed)
        }
        CazacCommand::Ambiguity { file } => {
            let u: Sequence = read_json(file)?;
            let table = ambiguity(&u);
            Ok(Outcome {
                body: table.to_csv(),
                summary: format!("ambiguity table {0}x{0}", u.len()),
                passed: true,
            })
        }
        CazacCommand::Gabor { file } => {
            let u: Sequence = read_json(file)?;
            let frame = gabor_frame(&u)?;
            let report = gabor_coherence(&u);
            let summary = format!(
                "gabor: {} vectors, coherence {:.6} in [{:.6}, {:.6}]: {}",
                frame.len(),
                report.coherence,
                report.lower,
                report.upper,
                pass_fail(report.within)
            );
            let within = report.within;
            Outcome::json(
                &json!({"frame": frame, "coherence": report, "tight_bound": u.len()}),
                summary,
                within,
            )
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Gen(a) => gen(cli, a),
        Command::Analyze { file } => {
            let frame: Frame = read_json(file)?;
            let r = analyze(&frame, cli.tol)?;
            let summary = format!(
                "{} vectors in {}^{}: bounds [{:.6}, {:.6}]",
                r.count,
                field_name(frame.field()),
                r.dim,
                r.lower_bound,
                r.upper_bound
            );
            Outcome::json(&r, summary, true)
        }
        Command::Convert { to, file } => convert(cli, *to, file),
        Command::Gleason { command } => gleason(cli, command),
        Command::Cazac { command } => cazac(cli, command),
        Command::Experiment { name, trials } => {
            let settings = experiments::Settings {
                seed: cli.seed,
                trials: *trials,
                mode: mode(cli),
            };
            let report = experiments::run(*name, &settings)?;
            let passed = report["passed"].as_bool().unwrap_or(false);
            Outcome::json(&report, format!("{}: {}", name.name(), pass_fail(passed)), passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        match &cli.output {
            Some(path) => {
                std::fs::write(path, &out.body).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                println!("{} -> {}", out.summary, path.display());
            }
            None => {
                print!("{}", out.body);
                eprintln!("{}", out.summary);
            }
        }
        if cli.strict && !out.passed {
            return Err(CliError::Failed(format!("verification failed: {}", out.summary)));
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
