//! `frontlab` command line: linear spreading analysis, traveling-wave
//! solving, weighted spectra, invasion simulations, experiments and sweeps.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 criterion failure.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use frontlab::error::Error;
use frontlab::harness::pipeline;
use frontlab::harness::{parse_config, run_sweep};

#[derive(Parser)]
#[command(
    name = "frontlab",
    about = "Invasion fronts in 1D reaction-diffusion systems: spreading speeds, profiles, spectra, simulations and experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Double roots of the dispersion relation over a range of frame speeds.
    Droots {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (defaults to the config's output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Linear spreading speed, decay rate and effective diffusivity.
    Speed {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Traveling-wave profile (BVP or phase-plane shooting).
    Profile {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weighted essential/point spectra and the marginal-stability checklist.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invasion simulation with front tracking.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named experiment pipeline (`frontlab experiment list` to list).
    Experiment {
        name: String,
        /// Parameter overrides as key=value.
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, f64)>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Cartesian parameter sweep of simulation runs.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merge experiment records under a directory into report.json/report.md.
    Report {
        #[arg(long)]
        dir: PathBuf,
    },
}

fn parse_kv(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v.parse().map_err(|e| format!("bad value in `{s}`: {e}"))?;
    Ok((k.to_string(), v))
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch() -> Result<ExitCode, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Droots { config, out } => {
            let cfg = parse_config(&config)?;
            let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
            pipeline::droots_run(&cfg, &dir)?;
            println!("double_roots.csv and spreading.csv written to {}", dir.display());
        }
        Command::Speed { config, out } => {
            let cfg = parse_config(&config)?;
            let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
            std::fs::create_dir_all(&dir)?;
            pipeline::speed_run(&cfg, &dir)?;
            println!("spreading.csv written to {}", dir.display());
        }
        Command::Profile { config, out } => {
            let cfg = parse_config(&config)?;
            let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
            pipeline::profile_run(&cfg, &dir)?;
            println!("profile.csv and profile_meta.json written to {}", dir.display());
        }
        Command::Spectrum { config, out } => {
            let cfg = parse_config(&config)?;
            let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
            pipeline::spectrum_run(&cfg, &dir)?;
            println!(
                "essential.csv, point_eigs.csv, checklist.json written to {}",
                dir.display()
            );
        }
        Command::Simulate { config, out } => {
            let cfg = parse_config(&config)?;
            let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
            let summary = pipeline::simulate_run(&cfg, &dir)?;
            println!(
                "run complete: fitted speed {:.6}, sublinear {}, wake {:?}",
                summary.fitted_speed, summary.sublinear, summary.wake_state
            );
        }
        Command::Experiment { name, params, out } => {
            if name == "list" {
                for n in frontlab::experiments::EXPERIMENT_NAMES {
                    println!("{n}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let params: BTreeMap<String, f64> = params.into_iter().collect();
            let record = pipeline::experiment_run(&name, &params, &out)?;
            for c in &record.criteria {
                println!(
                    "[{}] {}: {} (measured {:.6}, expected {})",
                    if c.pass { "PASS" } else { "FAIL" },
                    record.name,
                    c.name,
                    c.measured,
                    c.expected
                );
            }
            if !record.passed {
                return Ok(ExitCode::from(4));
            }
        }
        Command::Sweep { config, out } => {
            let cfg = parse_config(&config)?;
            let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
            run_sweep(&cfg, &dir)?;
            println!("sweep.csv written to {}", dir.display());
        }
        Command::Report { dir } => {
            let (passed, total) = pipeline::report_run(&dir)?;
            println!("report.json and report.md written: {passed}/{total} criteria passed");
            if passed != total {
                return Ok(ExitCode::from(4));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
