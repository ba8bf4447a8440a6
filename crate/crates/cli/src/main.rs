use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use itqsl_cli::config::{load_raw, RawConfig, ScenarioConfig};
use itqsl_cli::sweep::{parse_values, run_sweep, SWEEP_FILE};
use itqsl_cli::{exit, run, CliResult, RunOptions};

/// Imaginary-time evolution and its geometric speed limit.
#[derive(Parser)]
#[command(name = "itqsl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Override the number of time steps (even, at least 2).
    #[arg(long, global = true, value_name = "N")]
    steps: Option<usize>,
    /// Directory for relative output paths.
    #[arg(long, global = true, value_name = "PATH")]
    out_dir: Option<PathBuf>,
    /// Print nothing on success.
    #[arg(long, global = true)]
    quiet: bool,
    /// Record wall-clock time in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its trajectory CSV and report JSON.
    Run { config: PathBuf },
    /// Run the scenario once per value of a parameter and write sweep.csv.
    Sweep {
        config: PathBuf,
        /// theta0, energy, dimension, e_perp or horizon.
        #[arg(long)]
        param: String,
        /// Comma-separated values; may be empty.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
    /// Validate a scenario file without running it.
    Check { config: PathBuf },
}

fn load(path: &Path, steps: Option<usize>) -> CliResult<RawConfig> {
    let mut raw = load_raw(path)?;
    if let Some(n) = steps {
        itqsl_cli::config::check_num_steps(n)?;
        raw.num_steps = Some(n);
    }
    Ok(raw)
}

fn execute(cli: &Cli) -> CliResult<()> {
    let out_dir = cli.out_dir.as_deref();
    match &cli.command {
        Command::Run { config } => {
            let cfg = ScenarioConfig::from_raw(&load(config, cli.steps)?)?;
            let opts = RunOptions {
                record_timing: cli.timing,
            };
            let eval = run::run(&cfg, out_dir, opts)?;
            if !cli.quiet {
                let q = &eval.report.qsl;
                let outputs = cfg.outputs.resolved(out_dir);
                println!(
                    "theta_T={} path_length={} slack={:.3e} saturated={} bound_time={}",
                    q.theta_t, q.path_length, q.slack, q.saturated, q.bound_time
                );
                if let Some(g) = &eval.report.grover {
                    match g.measured_crossing_time {
                        Some(t) => println!("crossing_time={t} runtime_bound_exact={}", g.runtime_bound_exact),
                        None => println!("no crossing before the horizon; runtime_bound_exact={}", g.runtime_bound_exact),
                    }
                }
                println!(
                    "wrote {} and {}",
                    outputs.trajectory_csv.display(),
                    outputs.report_json.display()
                );
            }
        }
        Command::Sweep { config, param, values } => {
            let values = parse_values(values)?;
            let raw = load(config, cli.steps)?;
            let rows = run_sweep(&raw, param, &values, out_dir)?;
            let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
            for row in rows.iter().filter(|r| r.outcome.is_err()) {
                eprintln!("{param}={}: {}", row.value, row.outcome.as_ref().unwrap_err());
            }
            if !cli.quiet {
                let path = out_dir.map_or_else(|| PathBuf::from(SWEEP_FILE), |d| d.join(SWEEP_FILE));
                println!("{} runs ({failed} failed); wrote {}", rows.len(), path.display());
            }
        }
        Command::Check { config } => {
            let cfg = ScenarioConfig::from_raw(&load(config, cli.steps)?)?;
            if !cli.quiet {
                println!(
                    "ok: kind={} dimension={} horizon={} num_steps={}",
                    cfg.kind().name(),
                    cfg.dimension(),
                    cfg.horizon,
                    cfg.num_steps
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
