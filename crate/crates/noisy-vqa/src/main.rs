//! Thin command-line front end over the library's runner module.
//!
//! Four subcommands, one config file each: `run` (train the configured
//! stepping cost on every seed), `compare` (paired runs against the
//! baseline cost), `survey` (gradient magnitudes at random parameters),
//! and `bounds-check` (numerical verification of the package's
//! quantitative claims). Exit codes: 0 success, 1 configuration problem,
//! 2 runtime failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use noisy_vqa::config;
use noisy_vqa::error::Result;
use noisy_vqa::runner::{self, Overrides};

#[derive(Parser)]
#[command(
    name = "noisy-vqa",
    version,
    about = "Noisy variational-circuit training with truncated-subspace costs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Validate the config (including referenced files), print the resolved
    /// plan, and exit without simulating or writing anything.
    #[arg(long, global = true)]
    dry_run: bool,
    /// Output directory, overriding the config's `output.dir`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Comma-separated seed list, overriding the config's `output.seeds`.
    #[arg(long, global = true, value_name = "LIST", value_delimiter = ',')]
    seed: Option<Vec<u64>>,
    /// Worker threads for the per-seed (or per-claim) fan-out.
    #[arg(long, global = true, value_name = "K")]
    parallel: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Train the configured stepping cost on every seed.
    Run { config: PathBuf },
    /// Train stepping and baseline costs per seed under identical budgets.
    Compare { config: PathBuf },
    /// Survey gradient magnitudes of both cost quotients at random angles.
    Survey {
        config: PathBuf,
        /// Number of random parameter draws, overriding `survey.samples`.
        #[arg(long, value_name = "N")]
        samples: Option<usize>,
    },
    /// Check decay, amplification, and structure claims numerically.
    #[command(name = "bounds-check")]
    BoundsCheck {
        config: PathBuf,
        /// Check a single claim instead of all of them.
        #[arg(long, value_name = "ID")]
        claim: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let overrides = Overrides { out: cli.out, seeds: cli.seed, parallel: cli.parallel };
    let path = match &cli.command {
        Command::Run { config }
        | Command::Compare { config }
        | Command::Survey { config, .. }
        | Command::BoundsCheck { config, .. } => config.clone(),
    };
    let loaded = config::load(&path)?;
    if cli.dry_run {
        println!("{}", runner::plan_description(&loaded, &overrides)?);
        return Ok(());
    }
    match cli.command {
        Command::Run { .. } => {
            let artifacts = runner::run(&loaded, &overrides)?;
            let s = &artifacts.summary;
            println!("benchmark {} ({}, {})", s.benchmark, s.benchmark_kind, s.metric_name);
            println!("cost      {}", s.cost);
            for seed in &s.seeds {
                let status = seed.aborted.as_deref().unwrap_or("ok");
                println!(
                    "seed {:>4}  {} {:.6}  parameter_quality {:.6}  ({} iterations, {})",
                    seed.seed,
                    s.metric_name,
                    seed.final_metric,
                    seed.parameter_quality,
                    seed.iterations_completed,
                    status,
                );
            }
            println!(
                "mean       {} {:.6}  parameter_quality {:.6}",
                s.metric_name, s.mean.mean_final_metric, s.mean.mean_parameter_quality
            );
            report_files(&artifacts.files);
        }
        Command::Compare { .. } => {
            let artifacts = runner::compare(&loaded, &overrides)?;
            let s = &artifacts.summary;
            println!("benchmark {} ({}, {})", s.benchmark, s.benchmark_kind, s.metric_name);
            println!("primary   {}   baseline {}", s.primary.cost, s.baseline.cost);
            for row in &s.rows {
                println!(
                    "seed {:>4}  primary {:.6} / quality {:.6}   baseline {:.6} / quality {:.6}",
                    row.seed,
                    row.primary.final_metric,
                    row.primary.parameter_quality,
                    row.baseline.final_metric,
                    row.baseline.parameter_quality,
                );
            }
            print!(
                "mean       primary {:.6} / quality {:.6}   baseline {:.6} / quality {:.6}",
                s.primary.mean_final_metric,
                s.primary.mean_parameter_quality,
                s.baseline.mean_final_metric,
                s.baseline.mean_parameter_quality,
            );
            match s.improvement_ratio {
                Some(r) => println!("   ratio {r:.3}"),
                None => println!(),
            }
            if let (Some(sp), Some(sb)) = (s.primary.std_final_metric, s.baseline.std_final_metric)
            {
                println!("std        primary {sp:.6}   baseline {sb:.6}");
            }
            report_files(&artifacts.files);
        }
        Command::Survey { samples, .. } => {
            let artifacts = runner::survey(&loaded, &overrides, samples)?;
            let s = &artifacts.summary;
            let r = &s.report;
            if !r.applicable {
                println!(
                    "survey inapplicable on {}: the denominator observable vanishes after truncation",
                    s.benchmark
                );
            } else {
                println!(
                    "benchmark {}  samples {} (skipped {} singular)",
                    s.benchmark,
                    r.samples.len(),
                    r.skipped_singular
                );
                println!("mean |grad c2reg| / |grad c1| ratio: {:.4}", r.mean_ratio);
            }
            report_files(&artifacts.files);
        }
        Command::BoundsCheck { claim, .. } => {
            let artifacts = runner::bounds_check(&loaded, &overrides, claim.as_deref())?;
            for output in &artifacts.summary {
                let r = &output.report;
                let verdict = if output.passing { "PASS" } else { "VIOLATED" };
                println!(
                    "{:<24} {}  ({} applicable / {} inapplicable draws, {} instances, {} violations, min slack {:.3e})",
                    output.claim,
                    verdict,
                    r.applicable,
                    r.inapplicable,
                    r.instances_tested,
                    r.violations,
                    r.min_slack,
                );
            }
            report_files(&artifacts.files);
        }
    }
    Ok(())
}

fn report_files(files: &[PathBuf]) {
    match files.len() {
        0 => {}
        1 => println!("wrote {}", files[0].display()),
        k => {
            let dir = files[0].parent().map(|p| p.display().to_string()).unwrap_or_default();
            println!("wrote {k} files to {dir}");
        }
    }
}
