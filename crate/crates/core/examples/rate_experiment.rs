//! Run a shipped experiment grid, write its CSV and fit the rate.
//!
//! `cargo run --release --example rate_experiment -- [config] [out.csv]`

use zeroth_additive::harness::{emit_csv, fit_rate, run_grid, ExperimentConfig};

fn main() -> zeroth_additive::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/sc_quadratic_ball.json").to_string());
    let out = args.next().unwrap_or_else(|| "rate_experiment.csv".to_string());
    let cfg = ExperimentConfig::load(&config)?;
    let records = run_grid(&cfg)?;
    emit_csv(&records, &out)?;
    let fit = fit_rate(&records, cfg.beta)?;
    for p in &fit.points {
        println!(
            "T = {:>6}  median error {:.3e}  ({} runs, {} aborted)",
            p.horizon, p.median, p.runs, p.aborted
        );
    }
    println!(
        "slope {:.3} (target {:.3}), r^2 {:.3}; rows written to {out}",
        fit.slope, fit.target, fit.r2
    );
    Ok(())
}
