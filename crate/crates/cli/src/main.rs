use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use udw_core::{
    emit_csv, figure_preset, run_sweep, run_verify, Figure, ModelParams, SweepSpec, Vary,
    VerifyConfig,
};

/// Two delta-switched Unruh-DeWitt detectors: correlators, state, coherence
/// and negativity. All quantities are in units of the smearing width.
#[derive(Parser)]
#[command(name = "udw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one parameter point and print a JSON report.
    #[command(allow_negative_numbers = true)]
    Point {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Sweep one parameter and write CSV.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        /// l, dtau, lambda or omega-b
        #[arg(long)]
        vary: Option<String>,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the CSV files behind one figure (fig1, fig2, fig3-top,
    /// fig3-bottom, fig4).
    #[command(allow_negative_numbers = true)]
    Figures {
        which: String,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run the oracle and invariant checks.
    #[command(allow_negative_numbers = true)]
    Verify {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Args, Default)]
struct ParamArgs {
    #[arg(long)]
    theta: Option<f64>,
    /// Sets both couplings.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    lambda_a: Option<f64>,
    #[arg(long)]
    lambda_b: Option<f64>,
    /// Switching weight eta/sigma of both detectors [default: 1]
    #[arg(long)]
    eta: Option<f64>,
    /// [default: 1]
    #[arg(long)]
    omega_a: Option<f64>,
    /// [default: 1]
    #[arg(long)]
    omega_b: Option<f64>,
    /// Separation L/sigma.
    #[arg(long)]
    l: Option<f64>,
    /// Switching delay (tau_B0 - tau_A0)/sigma.
    #[arg(long)]
    dtau: Option<f64>,
    /// [default: 0]
    #[arg(long)]
    tau_a0: Option<f64>,
    /// TOML file of defaults, keys named like the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Defaults read from `--config`; flags win.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ConfigFile {
    theta: Option<f64>,
    lambda: Option<f64>,
    lambda_a: Option<f64>,
    lambda_b: Option<f64>,
    eta: Option<f64>,
    omega_a: Option<f64>,
    omega_b: Option<f64>,
    l: Option<f64>,
    dtau: Option<f64>,
    tau_a0: Option<f64>,
    vary: Option<String>,
    from: Option<f64>,
    to: Option<f64>,
    steps: Option<usize>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    points: Option<usize>,
}

enum Failure {
    /// Bad flags or configuration: exit 2.
    Usage(String),
    /// The computation itself failed: exit 1.
    Compute(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(e.into())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn load_config(path: Option<&Path>) -> CliResult<ConfigFile> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("bad config {}: {e}", path.display())))
}

fn require(value: Option<f64>, flag: &str) -> CliResult<f64> {
    value.ok_or_else(|| usage(format!("missing required flag --{flag}")))
}

/// Merges flags over config and checks that every parameter the command
/// needs is present. The swept parameter (if any) gets a placeholder.
fn model_params(args: &ParamArgs, cfg: &ConfigFile, vary: Option<Vary>) -> CliResult<ModelParams> {
    let pick = |flag: Option<f64>, file: Option<f64>| flag.or(file);
    let lambda = pick(args.lambda, cfg.lambda);
    let lambda_a = pick(args.lambda_a, cfg.lambda_a).or(lambda);
    let lambda_b = pick(args.lambda_b, cfg.lambda_b).or(lambda);
    let swept = |v: Vary| vary == Some(v);

    let (lambda_a, lambda_b) = if swept(Vary::Coupling) {
        (0.0, 0.0)
    } else {
        match (lambda_a, lambda_b) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(usage(
                    "missing required flag --lambda (or --lambda-a and --lambda-b)",
                ))
            }
        }
    };
    let separation = if swept(Vary::Separation) {
        0.0
    } else {
        require(pick(args.l, cfg.l), "l")?
    };
    let delay = if swept(Vary::Delay) {
        0.0
    } else {
        require(pick(args.dtau, cfg.dtau), "dtau")?
    };
    let eta = pick(args.eta, cfg.eta).unwrap_or(1.0);
    let p = ModelParams {
        theta: require(pick(args.theta, cfg.theta), "theta")?,
        lambda_a,
        lambda_b,
        eta_a: eta,
        eta_b: eta,
        omega_a: pick(args.omega_a, cfg.omega_a).unwrap_or(1.0),
        omega_b: pick(args.omega_b, cfg.omega_b).unwrap_or(1.0),
        separation,
        delay,
        tau_a0: pick(args.tau_a0, cfg.tau_a0).unwrap_or(0.0),
    };
    p.validate().map_err(|e| usage(e.to_string()))?;
    Ok(p)
}

#[derive(Serialize)]
struct PointReport {
    parameters: ParameterEcho,
    correlators: CorrelatorEcho,
    density_matrix: EntriesEcho,
    spectrum: [f64; 4],
    measures: MeasureEcho,
}

#[derive(Serialize)]
struct ParameterEcho {
    theta: f64,
    lambda_a: f64,
    lambda_b: f64,
    eta_a: f64,
    eta_b: f64,
    omega_a: f64,
    omega_b: f64,
    l: f64,
    dtau: f64,
    tau_a0: f64,
}

#[derive(Serialize)]
struct CorrelatorEcho {
    f_a: f64,
    f_b: f64,
    kappa: f64,
    omega: f64,
    gamma: f64,
}

#[derive(Serialize)]
struct EntriesEcho {
    rho11: f64,
    rho22: f64,
    rho33: f64,
    rho44: f64,
    rho14: [f64; 2],
    rho23: [f64; 2],
}

#[derive(Serialize)]
struct MeasureEcho {
    c_l1: f64,
    c_rec: f64,
    negativity: f64,
}

fn cmd_point(args: ParamArgs) -> CliResult<()> {
    let cfg = load_config(args.config.as_deref())?;
    let p = model_params(&args, &cfg, None)?;
    let r = p.evaluate().context("evaluating point")?;
    let (c, s, m) = (r.correlators, r.state, r.measures);
    let report = PointReport {
        parameters: ParameterEcho {
            theta: p.theta,
            lambda_a: p.lambda_a,
            lambda_b: p.lambda_b,
            eta_a: p.eta_a,
            eta_b: p.eta_b,
            omega_a: p.omega_a,
            omega_b: p.omega_b,
            l: p.separation,
            dtau: p.delay,
            tau_a0: p.tau_a0,
        },
        correlators: CorrelatorEcho {
            f_a: c.f_a,
            f_b: c.f_b,
            kappa: c.kappa,
            omega: c.omega,
            gamma: c.gamma,
        },
        density_matrix: EntriesEcho {
            rho11: s.rho11(),
            rho22: s.rho22(),
            rho33: s.rho33(),
            rho44: s.rho44(),
            rho14: [s.rho14().re, s.rho14().im],
            rho23: [s.rho23().re, s.rho23().im],
        },
        spectrum: r.spectrum.values,
        measures: MeasureEcho {
            c_l1: m.c_l1,
            c_rec: m.c_rec,
            negativity: m.negativity,
        },
    };
    let text = serde_json::to_string_pretty(&report).context("serializing report")?;
    println!("{text}");
    Ok(())
}

fn write_rows(spec: &SweepSpec, out: Option<&Path>) -> CliResult<()> {
    let rows = run_sweep(spec).context("running sweep")?;
    match out {
        Some(path) => {
            let file =
                fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            emit_csv(&rows, io::BufWriter::new(file))
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            emit_csv(&rows, io::stdout().lock()).context("writing CSV")?;
        }
    }
    Ok(())
}

fn cmd_sweep(
    params: ParamArgs,
    vary: Option<String>,
    from: Option<f64>,
    to: Option<f64>,
    steps: Option<usize>,
    out: Option<PathBuf>,
) -> CliResult<()> {
    let cfg = load_config(params.config.as_deref())?;
    let vary: Vary = vary
        .or_else(|| cfg.vary.clone())
        .ok_or_else(|| usage("missing required flag --vary"))?
        .parse()
        .map_err(|e: udw_core::Error| usage(e.to_string()))?;
    let spec = SweepSpec {
        vary,
        from: require(from.or(cfg.from), "from")?,
        to: require(to.or(cfg.to), "to")?,
        steps: steps.or(cfg.steps).unwrap_or(udw_core::sweep::PRESET_STEPS),
        fixed: model_params(&params, &cfg, Some(vary))?,
    };
    spec.validate().map_err(|e| usage(e.to_string()))?;
    write_rows(&spec, out.or(cfg.out).as_deref())
}

fn cmd_figures(which: String, out: Option<PathBuf>, config: Option<PathBuf>) -> CliResult<()> {
    let cfg = load_config(config.as_deref())?;
    let figure: Figure = which
        .parse()
        .map_err(|e: udw_core::Error| usage(e.to_string()))?;
    let dir = out.or(cfg.out).unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    for curve in figure_preset(figure) {
        let path = dir.join(format!("{}.csv", curve.file_stem));
        write_rows(&curve.spec, Some(&path))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_verify(
    seed: Option<u64>,
    points: Option<usize>,
    config: Option<PathBuf>,
) -> CliResult<bool> {
    let cfg = load_config(config.as_deref())?;
    let defaults = VerifyConfig::default();
    let config = VerifyConfig {
        seed: seed.or(cfg.seed).unwrap_or(defaults.seed),
        points: points.or(cfg.points).unwrap_or(defaults.points),
    };
    if config.points == 0 {
        return Err(usage("--points must be at least 1"));
    }
    let report = run_verify(config).context("running verification")?;
    println!("{report}");
    Ok(report.passed())
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Point { params } => cmd_point(params).map(|()| true),
        Command::Sweep {
            params,
            vary,
            from,
            to,
            steps,
            out,
        } => cmd_sweep(params, vary, from, to, steps, out).map(|()| true),
        Command::Figures { which, out, config } => cmd_figures(which, out, config).map(|()| true),
        Command::Verify {
            seed,
            points,
            config,
        } => cmd_verify(seed, points, config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli);
    let _ = io::stdout().flush();
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `udw --help` for usage");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
