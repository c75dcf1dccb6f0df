use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use convexwave::forward::Profile;
use convexwave::io;
use convexwave::pipeline::{
    cmd_experimental, cmd_invert, cmd_pipeline, cmd_recover, cmd_simulate, double_gaussian_profile,
    single_gaussian_profile, PipelineConfig,
};
use convexwave::recover::EpsilonMode;
use convexwave::selftest::run_selftest;
use convexwave::{Error, Result};

/// Reconstruct a depth profile c(y) of c(y) u_tt = u_yy from backscattered data.
#[derive(Parser)]
#[command(name = "convexwave", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON configuration file; CONVEXWAVE_* variables override it, flags override both.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, short, global = true)]
    output_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Multiplicative noise level.
    #[arg(long, global = true)]
    noise: Option<f64>,
    #[arg(long, global = true)]
    cbar: Option<f64>,
    #[arg(long, global = true)]
    lambda: Option<f64>,
    #[arg(long, global = true)]
    gamma: Option<f64>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Args)]
struct ModelArg {
    /// `single`, `double`, or a JSON file holding a profile.
    #[arg(long)]
    model: Option<String>,
}

#[derive(Args)]
struct RecoveryArgs {
    /// Fixed ρ for every weighted fit instead of the ρ*(l) schedule.
    #[arg(long)]
    rho: Option<f64>,
    /// Background dielectric interval as `lo,hi`.
    #[arg(long, value_parser = parse_pair)]
    background: Option<(f64, f64)>,
    #[arg(long)]
    polarity_mode: Option<EpsilonMode>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate backscattered traces for a model.
    Simulate {
        #[command(flatten)]
        model: ModelArg,
        /// Also write the full wave field u(y, t) to `u.csv`.
        #[arg(long)]
        wavefield: bool,
    },
    /// Invert traces (t,g0,g1) or derived data (t,s0,s1) for r(x).
    Invert { input: PathBuf },
    /// Recover c(y) from r(x).
    Recover {
        input: PathBuf,
        #[command(flatten)]
        recovery: RecoveryArgs,
    },
    /// Simulate, invert and recover, with errors against the model.
    Pipeline {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        recovery: RecoveryArgs,
    },
    /// Estimate the dielectric constant of a target from a radar trace.
    Experimental {
        trace: PathBuf,
        #[command(flatten)]
        recovery: RecoveryArgs,
    },
    /// Run the invariant checks.
    Selftest,
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected `lo,hi`")?;
    let a: f64 = a.trim().parse().map_err(|_| format!("not a number: `{a}`"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("not a number: `{b}`"))?;
    Ok((a, b))
}

fn model_profile(spec: &str) -> Result<Profile> {
    match spec {
        "single" => Ok(single_gaussian_profile()),
        "double" => Ok(double_gaussian_profile()),
        path => io::read_json(std::path::Path::new(path)).map_err(|e| Error::Config(format!("--model: {e}"))),
    }
}

fn build_config(common: &Common) -> Result<PipelineConfig> {
    let mut cfg = PipelineConfig::load(common.config.as_deref())?;
    if let Some(v) = &common.output_dir {
        cfg.output_dir = v.clone();
    }
    if let Some(v) = common.seed {
        cfg.noise.seed = v;
    }
    if let Some(v) = common.noise {
        cfg.noise.level = v;
    }
    if let Some(v) = common.cbar {
        cfg.cbar = v;
    }
    if let Some(v) = common.lambda {
        cfg.carleman.lambda = v;
    }
    if let Some(v) = common.gamma {
        cfg.carleman.gamma = v;
    }
    if let Some(v) = common.max_iter {
        cfg.inversion.stopping.max_iterations = v;
    }
    Ok(cfg)
}

fn apply_recovery(cfg: &mut PipelineConfig, args: &RecoveryArgs) {
    if let Some(rho) = args.rho {
        cfg.recovery.algorithm.rho_override = Some(rho);
    }
    if let Some(bg) = args.background {
        cfg.recovery.background = bg;
    }
    if let Some(mode) = args.polarity_mode {
        cfg.recovery.polarity_mode = mode;
    }
}

fn apply_model(cfg: &mut PipelineConfig, args: &ModelArg) -> Result<()> {
    if let Some(spec) = &args.model {
        cfg.model = Some(model_profile(spec)?);
    }
    Ok(())
}

fn json(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).unwrap_or_default()
}

/// Print to stdout, ignoring a closed pipe.
fn emit(text: impl std::fmt::Display) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn run(cli: Cli) -> Result<bool> {
    let mut cfg = build_config(&cli.common)?;
    match &cli.command {
        Command::Simulate { model, wavefield } => {
            apply_model(&mut cfg, model)?;
            for path in cmd_simulate(&cfg, *wavefield)? {
                emit(format_args!("wrote {}", path.display()));
            }
        }
        Command::Invert { input } => emit(json(&cmd_invert(&cfg, input)?)),
        Command::Recover { input, recovery } => {
            apply_recovery(&mut cfg, recovery);
            emit(json(&cmd_recover(&cfg, input)?));
        }
        Command::Pipeline { model, recovery } => {
            apply_model(&mut cfg, model)?;
            apply_recovery(&mut cfg, recovery);
            emit(json(&cmd_pipeline(&cfg)?));
        }
        Command::Experimental { trace, recovery } => {
            apply_recovery(&mut cfg, recovery);
            emit(json(&cmd_experimental(&cfg, trace)?));
        }
        Command::Selftest => {
            let outcomes = run_selftest();
            for o in &outcomes {
                emit(o);
            }
            return Ok(outcomes.iter().all(|o| o.passed));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.common.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
