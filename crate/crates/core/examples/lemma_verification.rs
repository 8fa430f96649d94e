//! Run the Monte Carlo bias and second-moment checks on the default grid.

use zeroth_additive::harness::{verify_lemmas, LemmaConfig};

fn main() -> zeroth_additive::Result<()> {
    let cfg = LemmaConfig {
        samples: 50_000,
        ..LemmaConfig::default()
    };
    let report = verify_lemmas(&cfg)?;
    println!(
        "{} bias cells, {} halving checks, {} variance cells",
        report.bias.len(),
        report.halving.len(),
        report.variance.len()
    );
    for c in report.bias.iter().take(6) {
        println!("{}", serde_json::to_string(c).unwrap());
    }
    for c in report.variance.iter().take(4) {
        println!("{}", serde_json::to_string(c).unwrap());
    }
    println!("all within bounds: {}", report.pass);
    Ok(())
}
