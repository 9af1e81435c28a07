//! One seeded simulation of each protocol against its model prediction.
//!
//! Run with: cargo run --release -p crpcf --example simulate_once [seed]

use crpcf::{crpcf_throughput, pcf_throughput, simulate, Protocol, SimConfig};

fn main() {
    let seed = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("seed must be a u64"))
        .unwrap_or(1);

    let pcf = SimConfig {
        protocol: Protocol::Pcf,
        seed,
        ..SimConfig::default()
    };
    println!("== pcf, seed {seed} ==");
    println!("{}", simulate(&pcf));
    println!(
        "model completion time matches exactly: {}",
        simulate(&pcf).total_time == pcf_throughput(&pcf.params).t_total
    );

    let crpcf = SimConfig {
        protocol: Protocol::Crpcf,
        seed,
        ..SimConfig::default()
    };
    let run = simulate(&crpcf);
    let model = crpcf_throughput(&crpcf.params, &crpcf.pu);
    println!();
    println!("== crpcf, seed {seed} ==");
    println!("{run}");
    println!(
        "model predicts S = {:.4}, rounds = {:.1}, O = {:.0}",
        model.throughput,
        model.expected_rounds.unwrap(),
        model.switch_count.unwrap()
    );
    println!(
        "throughput within {:.2}% of the model on this seed",
        100.0 * (run.throughput - model.throughput).abs() / model.throughput
    );
}
