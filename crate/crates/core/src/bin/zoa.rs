//! `zoa`: run experiment grids and verification suites from the command line.
//!
//! Exit codes: 0 success, 1 validation error, 2 property violation,
//! 3 divergence.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use zeroth_additive::harness::{
    certify_objective, emit_csv, fit_rate, load_csv, run_grid, verify_kernel, verify_lemmas, ExperimentConfig,
    LemmaConfig,
};
use zeroth_additive::objectives::{CurvatureKind, ObjectiveId};
use zeroth_additive::optimizer::{FeasibleSet, ScStepRule};
use zeroth_additive::Error;

#[derive(Parser)]
#[command(name = "zoa", version, about = "Zeroth-order optimization of additive objectives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment grid and write one CSV row per cell.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        replications: Option<usize>,
        /// Comma-separated horizons.
        #[arg(long, value_delimiter = ',')]
        horizons: Option<Vec<usize>>,
        #[arg(long)]
        h_multiplier: Option<f64>,
        #[arg(long, value_enum)]
        sc_step: Option<StepArg>,
    },
    /// Fit the convergence rate of a CSV produced by `run`.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        beta: f64,
    },
    /// Check the kernel moment conditions and constants.
    VerifyKernel {
        #[arg(long)]
        beta: f64,
    },
    /// Monte Carlo check of the bias and second-moment bounds.
    VerifyLemmas {
        /// Lemma grid; the shipped objective zoo when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Print and verify the certificate of an objective.
    Certify {
        #[arg(long)]
        objective: String,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        /// Defaults to `sc` for convex objectives and `pl` otherwise.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        /// Radius of the centered ball used for `sc` certificates.
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StepArg {
    Constant,
    Anytime,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Pl,
    Sc,
}

enum Failure {
    Error(Error),
    Violation,
    Diverged,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn print_json<T: Serialize>(value: &T) {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    // a closed pipe (e.g. `| head`) is not an error
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn verdict(pass: bool) -> Result<(), Failure> {
    if pass {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            replications,
            horizons,
            h_multiplier,
            sc_step,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(r) = replications {
                cfg.replications = r;
            }
            if let Some(h) = horizons {
                cfg.horizons = h;
            }
            if let Some(m) = h_multiplier {
                cfg.h_multiplier = m;
            }
            if let Some(s) = sc_step {
                cfg.sc_step = match s {
                    StepArg::Constant => ScStepRule::Constant,
                    StepArg::Anytime => ScStepRule::Anytime,
                };
            }
            cfg.validate()?;
            let records = run_grid(&cfg)?;
            emit_csv(&records, &out)?;
            let aborted = records.iter().filter(|r| r.aborted).count();
            eprintln!("wrote {} records to {}", records.len(), out.display());
            if aborted > 0 {
                eprintln!("{aborted} runs diverged");
                return Err(Failure::Diverged);
            }
            Ok(())
        }
        Command::Fit { input, beta } => {
            let fit = fit_rate(&load_csv(input)?, beta)?;
            if fit.clamped {
                eprintln!("warning: some median errors were clamped to the floor before the fit");
            }
            print_json(&fit);
            Ok(())
        }
        Command::VerifyKernel { beta } => {
            let report = verify_kernel(beta)?;
            print_json(&report);
            verdict(report.pass)
        }
        Command::VerifyLemmas { config, samples } => {
            let mut cfg = match config {
                Some(p) => LemmaConfig::load(p)?,
                None => LemmaConfig::default(),
            };
            if let Some(n) = samples {
                cfg.samples = n;
            }
            let report = verify_lemmas(&cfg)?;
            print_json(&report);
            verdict(report.pass)
        }
        Command::Certify {
            objective,
            d,
            beta,
            kind,
            radius,
        } => {
            let id: ObjectiveId = objective.parse()?;
            let kind = match kind {
                Some(KindArg::Pl) => CurvatureKind::Pl,
                Some(KindArg::Sc) => CurvatureKind::StronglyConvex,
                None if id.component().is_convex() && id.component().curvature_lower_bound().is_some() => {
                    CurvatureKind::StronglyConvex
                }
                None => CurvatureKind::Pl,
            };
            let set = match kind {
                CurvatureKind::Pl => FeasibleSet::WholeSpace,
                CurvatureKind::StronglyConvex => FeasibleSet::Ball {
                    center: vec![0.0; d],
                    radius,
                },
            };
            let report = certify_objective(&id, d, beta, kind, &set)?;
            print_json(&report);
            verdict(report.pass)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Error(Error::Diverged { round, norm })) => {
            eprintln!("error: diverged at round {round} (norm {norm:e})");
            ExitCode::from(3)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Violation) => {
            eprintln!("property check failed");
            ExitCode::from(2)
        }
        Err(Failure::Diverged) => ExitCode::from(3),
    }
}
