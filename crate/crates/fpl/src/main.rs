use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fpl::error::FplError;
use fpl::scenario::{run_scenario, ScenarioConfig};

#[derive(Parser)]
#[command(name = "fpl", version, about = "Frequency-principle experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one or more scenario configs and emit result artifacts.
    Run {
        /// Scenario config files (JSON).
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        /// Output directory root; each run writes to <out>/<scenario>-<seed>.
        #[arg(long, default_value = "runs")]
        out: PathBuf,
        /// Override the seed of every config.
        #[arg(long)]
        seed: Option<u64>,
        /// Use publication-scale network widths instead of desk-scale.
        #[arg(long)]
        paper_scale: bool,
        /// Run this many configs concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Parse and validate a scenario config without running it.
    Validate {
        config: PathBuf,
    },
    /// Print a default config for the given scenario id to stdout.
    Init {
        /// One of: fig1_two_tone, fig3_splines, fig4_xor, parity,
        /// scaling_law, custom.
        scenario: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn exit_code_for(err: &FplError) -> u8 {
    match err {
        FplError::Config(_) | FplError::InvalidSpec(_) | FplError::Json(_) => 2,
        _ => 3,
    }
}

fn run_one(
    path: &PathBuf,
    out: &PathBuf,
    seed: Option<u64>,
    paper_scale: bool,
) -> Result<(), FplError> {
    let mut config = ScenarioConfig::from_path(path)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    let dir = out.join(format!("{}-{}", config.scenario.id(), config.seed));
    let manifest = run_scenario(&config, &dir, paper_scale)?;
    println!(
        "{}: {} artifacts in {} ({:.1}s)",
        manifest.scenario,
        manifest.files.len(),
        dir.display(),
        manifest.wall_clock_secs
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { config } => match ScenarioConfig::from_path(&config) {
            Ok(cfg) => {
                println!("ok: scenario '{}', seed {}", cfg.scenario.id(), cfg.seed);
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("invalid config: {e}");
                ExitCode::from(2)
            }
        },
        Command::Init { scenario, seed } => match ScenarioConfig::default_for(&scenario, seed) {
            Ok(cfg) => {
                println!("{}", serde_json::to_string_pretty(&cfg).expect("serializable config"));
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(2)
            }
        },
        Command::Run { configs, out, seed, paper_scale, jobs } => {
            let jobs = jobs.max(1).min(configs.len().max(1));
            let mut worst: u8 = 0;
            if jobs == 1 {
                for path in &configs {
                    if let Err(e) = run_one(path, &out, seed, paper_scale) {
                        eprintln!("{}: {e}", path.display());
                        worst = worst.max(exit_code_for(&e));
                    }
                }
            } else {
                let results = std::thread::scope(|scope| {
                    let mut handles = Vec::new();
                    for chunk in configs.chunks(configs.len().div_ceil(jobs)) {
                        let (out, seed) = (&out, seed);
                        handles.push(scope.spawn(move || {
                            let mut worst: u8 = 0;
                            for path in chunk {
                                if let Err(e) = run_one(path, out, seed, paper_scale) {
                                    eprintln!("{}: {e}", path.display());
                                    worst = worst.max(exit_code_for(&e));
                                }
                            }
                            worst
                        }));
                    }
                    handles.into_iter().map(|h| h.join().expect("worker panicked")).collect::<Vec<_>>()
                });
                worst = results.into_iter().max().unwrap_or(0);
            }
            if worst == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(worst)
            }
        }
    }
}
