mod config;
mod csv;
mod svg;
mod tasks;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Experiment runner: capacities, Green fields, potentials, Bergman data,
/// density indices and the verification suite, from JSON domain specs.
#[derive(Parser)]
#[command(name = "planpot", version, about)]
struct Cli {
    /// Experiment configuration (JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSV/SVG artifacts
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,

    /// Override the grid spacing
    #[arg(long, global = true)]
    grid: Option<f64>,

    /// Worker threads (defaults to the core count)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Logarithmic capacities of the configured obstacles
    Cap,
    /// Green function field and decay plot
    Green,
    /// Capacity potential and Dirichlet capacity routes
    Potential,
    /// Bergman kernel/metric/distance along a ray
    Bergman,
    /// Capacity-density profiles and regularity sums
    Density,
    /// Run the acceptance checks (use --config params.full=true for the
    /// pinned fine grids)
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            eprintln!("warning: thread pool already initialized");
        }
    }
    let task_name = match cli.command {
        Command::Cap => "cap",
        Command::Green => "green",
        Command::Potential => "potential",
        Command::Bergman => "bergman",
        Command::Density => "density",
        Command::Verify => "verify",
    };
    let cfg = match &cli.config {
        Some(path) => match config::parse_config(path) {
            Ok(mut c) => {
                // the subcommand wins over the config's task field
                if let Some(t) = config::Task::parse(task_name) {
                    c.task = t;
                }
                c
            }
            Err(msg) => {
                eprintln!("{msg}");
                return ExitCode::from(2);
            }
        },
        None => {
            // default: the unit disk
            let value = serde_json::json!({
                "domain": {
                    "ambient": {"type": "disk", "center": [0.0, 0.0], "radius": 1.0},
                    "obstacles": [],
                    "base_point": [-0.5, 0.0]
                },
                "task": task_name,
                "params": {},
                "seed": 1
            });
            match config::parse_config_value(&value) {
                Ok(c) => c,
                Err(msg) => {
                    eprintln!("{msg}");
                    return ExitCode::from(2);
                }
            }
        }
    };
    if let Err(e) = tasks::bail_on_invalid(&cfg) {
        eprintln!("{e}");
        return ExitCode::from(2);
    }
    match tasks::run(&cfg, &cli.out_dir, cli.grid) {
        Ok(report) => {
            tasks::print_report(&report);
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
