//! Batch verification driver: each subcommand runs one experiment against
//! the core library, grades it with the configured tolerances, and writes a
//! machine-readable report. Exit codes: 0 pass, 1 check failure, 2 bad
//! configuration, 3 test-function class violation, 4 numerical divergence,
//! 5 I/O failure.

mod config;
mod experiments;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::{
    parse_complex, parse_form, ComplexParam, Experiment, ExperimentConfig, ModelKind,
    ScheduleConfig, TestFunctionSpec,
};
use report::{Format, VerificationReport, SCHEMA_VERSION};

#[derive(Parser)]
#[command(
    name = "singres",
    version,
    about = "Verification experiments for resolutions of identity near a spectral singularity"
)]
struct Cli {
    /// TOML experiment configuration; omitted fields fall back to the
    /// subcommand's stock run
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory reports are written into
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for grid fan-out (defaults to all cores)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Omit wall-clock times so identical configs give byte-identical reports
    #[arg(long, global = true)]
    reproducible: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArgs {
    /// Model family
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// Coupling, written like "2i"
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Width of the smooth family
    #[arg(long)]
    alpha: Option<f64>,
}

impl ModelArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<(), String> {
        if let Some(kind) = self.model {
            cfg.model.kind = kind;
            if kind == ModelKind::Delta {
                cfg.model.alpha = None;
            }
        }
        if let Some(z) = &self.z {
            cfg.model.z = ComplexParam(parse_complex(z)?);
        }
        if let Some(a) = self.alpha {
            cfg.model.alpha = Some(a);
        }
        Ok(())
    }
}

fn set_z(cfg: &mut ExperimentConfig, z: &Option<String>) -> Result<(), String> {
    if let Some(s) = z {
        cfg.model.z = ComplexParam(parse_complex(s)?);
    }
    Ok(())
}

fn ensure_schedule(cfg: &mut ExperimentConfig, exp: Experiment) -> &mut ScheduleConfig {
    if cfg.schedule.is_none() {
        cfg.schedule = exp.default_config().schedule.or(Some(ScheduleConfig {
            a_values: Vec::new(),
            eps_values: Vec::new(),
            x_truncation: 25.0,
            order: "a-then-eps".into(),
        }));
    }
    cfg.schedule.as_mut().unwrap()
}

#[derive(Args)]
struct VerifyIdentityArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Resolution form (label, or a shorthand: contour, pv, eps-split)
    #[arg(long)]
    form: Option<String>,
    /// Test-function family with stock parameters
    #[arg(long)]
    phi: Option<String>,
    /// Truncation ladder
    #[arg(long = "A", value_delimiter = ',', value_name = "LIST")]
    a_values: Option<Vec<f64>>,
    /// Excision ladder for the split forms
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    eps_values: Option<Vec<f64>>,
    /// Evaluation points x'
    #[arg(
        long,
        value_delimiter = ',',
        value_name = "LIST",
        allow_hyphen_values = true
    )]
    x_grid: Option<Vec<f64>>,
    /// Per-point tolerance
    #[arg(long)]
    tol: Option<f64>,
}

impl VerifyIdentityArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<(), String> {
        self.model.apply(cfg)?;
        if let Some(f) = &self.form {
            cfg.experiment.form = Some(parse_form(f)?.label().to_string());
        }
        if let Some(name) = &self.phi {
            let k0 = 0.5 * cfg.model.z.0.im;
            cfg.experiment.test_function = Some(TestFunctionSpec::from_name(name, k0)?);
        }
        if let Some(g) = &self.x_grid {
            cfg.experiment.x_grid = Some(g.clone());
        }
        if self.a_values.is_some() || self.eps_values.is_some() {
            let sched = ensure_schedule(cfg, Experiment::VerifyIdentity);
            if let Some(a) = &self.a_values {
                sched.a_values = a.clone();
            }
            if let Some(e) = &self.eps_values {
                sched.eps_values = e.clone();
            }
        }
        if let Some(t) = self.tol {
            cfg.tolerances.insert("point".into(), t);
        }
        Ok(())
    }
}

#[derive(Args)]
struct BiorthogonalityArgs {
    /// Coupling, written like "2i"
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Spectral momenta the weighted values are recovered at
    #[arg(
        long = "k-prime",
        value_delimiter = ',',
        value_name = "LIST",
        allow_hyphen_values = true
    )]
    k_prime: Option<Vec<f64>>,
    /// Truncation
    #[arg(long)]
    a: Option<f64>,
}

#[derive(Args)]
struct Example1Args {
    /// Coupling, written like "2i"
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Damping values of the smoothed state
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    alpha: Option<Vec<f64>>,
    /// Evaluation point
    #[arg(long, allow_hyphen_values = true)]
    x_prime: Option<f64>,
}

#[derive(Args)]
struct HalfMassArgs {
    /// Coupling, written like "2i"
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Evaluation points x'
    #[arg(
        long,
        value_delimiter = ',',
        value_name = "LIST",
        allow_hyphen_values = true
    )]
    x_grid: Option<Vec<f64>>,
}

#[derive(Args)]
struct ResidueArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Truncation
    #[arg(long)]
    a: Option<f64>,
    /// Excision half-width
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Args)]
struct SmoothLimitArgs {
    /// Coupling, written like "2i"
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Width ladder, each entry ideally doubling the last
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    alphas: Option<Vec<f64>>,
    /// Probe momentum
    #[arg(long)]
    k: Option<f64>,
}

#[derive(Args)]
struct ReflectionlessArgs {
    /// Width of the smooth family
    #[arg(long)]
    alpha: Option<f64>,
    /// Coupling; transparency sits at z = 2 alpha n
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Probe momenta
    #[arg(long = "k", value_delimiter = ',', value_name = "LIST")]
    k_grid: Option<Vec<f64>>,
    /// Relative coupling detuning that must revive the reflection
    #[arg(long)]
    detune: Option<f64>,
}

#[derive(Args)]
struct SusyCheckArgs {
    /// Coupling, written like "2i"
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Width of the smooth family
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct LemmaBoundsArgs {
    /// Certificate grid (default or dense)
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Args)]
struct KernelXcheckArgs {
    /// Coupling, written like "2i"
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Seed for the evaluation-point draws
    #[arg(long)]
    seed: Option<u64>,
    /// Number of draws
    #[arg(long)]
    draws: Option<usize>,
    /// Truncations checked per draw
    #[arg(long = "A", value_delimiter = ',', value_name = "LIST")]
    a_values: Option<Vec<f64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a resolution form to a test function over a grid and grade the
    /// reproduction
    VerifyIdentity(VerifyIdentityArgs),
    /// Recover weighted point values of a spectral test function
    Biorthogonality(BiorthogonalityArgs),
    /// Expand the damped singular state and compare with the closed forms
    Example1(Example1Args),
    /// Halve the singular state with the principal-value form and recover
    /// the other half from the window terms
    HalfMass(HalfMassArgs),
    /// Extract the singular dyad from the detour arc and excision window
    Residue(ResidueArgs),
    /// Track how fast the smooth states approach the point-model states
    SmoothLimit(SmoothLimitArgs),
    /// Verify transparency at the tuned coupling and its loss under detuning
    Reflectionless(ReflectionlessArgs),
    /// Check the superpotential factorization and its zero mode
    SusyCheck(SusyCheckArgs),
    /// Certify the truncation and window inequalities with margin
    LemmaBounds(LemmaBoundsArgs),
    /// Cross-check the closed truncated kernel against direct quadrature
    KernelXcheck(KernelXcheckArgs),
}

impl Command {
    fn experiment(&self) -> Experiment {
        match self {
            Self::VerifyIdentity(_) => Experiment::VerifyIdentity,
            Self::Biorthogonality(_) => Experiment::Biorthogonality,
            Self::Example1(_) => Experiment::Example1,
            Self::HalfMass(_) => Experiment::HalfMass,
            Self::Residue(_) => Experiment::Residue,
            Self::SmoothLimit(_) => Experiment::SmoothLimit,
            Self::Reflectionless(_) => Experiment::Reflectionless,
            Self::SusyCheck(_) => Experiment::SusyCheck,
            Self::LemmaBounds(_) => Experiment::LemmaBounds,
            Self::KernelXcheck(_) => Experiment::KernelXcheck,
        }
    }

    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<(), String> {
        match self {
            Self::VerifyIdentity(a) => a.apply(cfg)?,
            Self::Biorthogonality(a) => {
                set_z(cfg, &a.z)?;
                if let Some(k) = &a.k_prime {
                    cfg.experiment.k_grid = Some(k.clone());
                }
                if let Some(v) = a.a {
                    cfg.experiment.a = Some(v);
                }
            }
            Self::Example1(a) => {
                set_z(cfg, &a.z)?;
                if let Some(v) = &a.alpha {
                    cfg.experiment.alphas = Some(v.clone());
                }
                if let Some(v) = a.x_prime {
                    cfg.experiment.x_prime = Some(v);
                }
            }
            Self::HalfMass(a) => {
                set_z(cfg, &a.z)?;
                if let Some(g) = &a.x_grid {
                    cfg.experiment.x_grid = Some(g.clone());
                }
            }
            Self::Residue(a) => {
                a.model.apply(cfg)?;
                if let Some(v) = a.a {
                    cfg.experiment.a = Some(v);
                }
                if let Some(v) = a.eps {
                    cfg.experiment.eps = Some(v);
                }
            }
            Self::SmoothLimit(a) => {
                set_z(cfg, &a.z)?;
                if let Some(v) = &a.alphas {
                    cfg.experiment.alphas = Some(v.clone());
                }
                if let Some(v) = a.k {
                    cfg.experiment.k = Some(v);
                }
            }
            Self::Reflectionless(a) => {
                set_z(cfg, &a.z)?;
                if let Some(v) = a.alpha {
                    cfg.model.alpha = Some(v);
                }
                if let Some(v) = &a.k_grid {
                    cfg.experiment.k_grid = Some(v.clone());
                }
                if let Some(v) = a.detune {
                    cfg.experiment.detune = Some(v);
                }
            }
            Self::SusyCheck(a) => {
                set_z(cfg, &a.z)?;
                if let Some(v) = a.alpha {
                    cfg.model.alpha = Some(v);
                }
            }
            Self::LemmaBounds(a) => {
                if let Some(g) = &a.grid {
                    cfg.experiment.grid = Some(g.clone());
                }
            }
            Self::KernelXcheck(a) => {
                set_z(cfg, &a.z)?;
                if let Some(v) = a.seed {
                    cfg.experiment.seed = Some(v);
                }
                if let Some(v) = a.draws {
                    cfg.experiment.draws = Some(v);
                }
                if let Some(v) = &a.a_values {
                    ensure_schedule(cfg, Experiment::KernelXcheck).a_values = v.clone();
                }
            }
        }
        Ok(())
    }
}

fn execute(cli: Cli) -> u8 {
    let Cli {
        config,
        out,
        format,
        threads,
        reproducible,
        command,
    } = cli;

    if let Some(n) = threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return 2;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            log::debug!("thread pool already initialized: {e}");
        }
    }

    let exp = command.experiment();
    let mut cfg = match &config {
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: reading config {}: {e}", path.display());
                    return 2;
                }
            };
            match toml::from_str::<ExperimentConfig>(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: config {}: {e}", path.display());
                    return 2;
                }
            }
        }
        None => exp.default_config(),
    };
    if let Err(e) = command.apply(&mut cfg) {
        eprintln!("error: {e}");
        return 2;
    }
    if let Err(e) = config::normalize(exp, &mut cfg) {
        eprintln!("error: {e}");
        return 2;
    }

    let t0 = Instant::now();
    let run = match experiments::run(exp, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return e.exit_code();
        }
    };

    let report = VerificationReport {
        schema_version: SCHEMA_VERSION,
        experiment: exp.name().to_string(),
        config: cfg,
        points: run.points,
        convergence: run.convergence,
        notes: run.notes,
        pass: run.pass,
        wall_time_ms: (!reproducible).then(|| t0.elapsed().as_secs_f64() * 1e3),
    };
    let files = match report::emit(&report, format, &out) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: writing report into {}: {e}", out.display());
            return 5;
        }
    };
    let listed: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
    println!(
        "{}: {} - {}; wrote {}",
        exp.name(),
        if report.pass { "PASS" } else { "FAIL" },
        run.summary,
        listed.join(", ")
    );
    if let Some(d) = run.diverged {
        eprintln!("divergence: {d}");
        return 4;
    }
    if report.pass {
        0
    } else {
        1
    }
}

fn main() -> ExitCode {
    let env = env_logger::Env::new().filter_or("SINGRES_LOG", "warn");
    let _ = env_logger::Builder::from_env(env)
        .format_timestamp(None)
        .try_init();
    ExitCode::from(execute(Cli::parse()))
}
