//! Closed-form throughput reports for both protocols at the default
//! parameter set: 600 meters x 15 packets of 1024 B at 1 Mbps, 15
//! supplementary channels with a 25/33 long-run free fraction.
//!
//! Run with: cargo run --release -p crpcf --example analytic_baseline

use crpcf::{crpcf_throughput, pcf_throughput, ProtocolParams, PuTrafficModel};

fn main() {
    let params = ProtocolParams::default();
    let pu = PuTrafficModel::default();

    println!("== sequential polling (pcf) ==");
    println!("{}", pcf_throughput(&params));

    println!();
    println!("== parallel polling (crpcf) ==");
    println!("gamma           : {:.6}", pu.gamma());
    println!(
        "window survival : {:.6} over y = {} us",
        pu.off_survival_prob(params.exposure_window()),
        params.exposure_window()
    );
    println!("{}", crpcf_throughput(&params, &pu));

    let gain = crpcf_throughput(&params, &pu).throughput / pcf_throughput(&params).throughput;
    println!();
    println!("parallel channels deliver a {gain:.2}x throughput gain at this point");
}
