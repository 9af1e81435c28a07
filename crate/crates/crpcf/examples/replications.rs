//! Replicated simulation at the default point: 20 independent seeds, then
//! mean/std/min/max per metric and the relative error against the model.
//!
//! Run with: cargo run --release -p crpcf --example replications

use crpcf::{crpcf_throughput, run_replications, SimConfig};

fn main() {
    let config = SimConfig::default();
    let summary = run_replications(&config, 20);
    println!("{summary}");

    let model = crpcf_throughput(&config.params, &config.pu);
    let s_err = (summary.throughput.mean - model.throughput).abs() / model.throughput;
    let o_err = (summary.switch_count.mean - model.switch_count.unwrap()).abs()
        / model.switch_count.unwrap();
    let r_err = (summary.rounds_executed.mean - model.expected_rounds.unwrap()).abs()
        / model.expected_rounds.unwrap();
    println!("throughput vs model : {:.3}% off", 100.0 * s_err);
    println!("switches vs model   : {:.3}% off", 100.0 * o_err);
    println!("rounds vs model     : {:.3}% off", 100.0 * r_err);
    println!(
        "spread across seeds : {:.3}% of mean",
        100.0 * summary.throughput.stddev / summary.throughput.mean
    );
}
