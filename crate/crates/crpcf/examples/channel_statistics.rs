//! The ON-OFF channel model against renewal theory: long-run free
//! fraction, residual idle time at sensing instants, and survival of the
//! default exposure window.
//!
//! Run with: cargo run --release -p crpcf --example channel_statistics

use crpcf::channel::ChannelProcess;
use crpcf::{ProtocolParams, PuTrafficModel};

fn main() {
    let pu = PuTrafficModel::default();
    let window = ProtocolParams::default().exposure_window();
    let spacing = pu.z_on + pu.z_off;
    let probes = 200_000u32;

    let mut ch = ChannelProcess::supplementary(1, pu, 2024);
    let mut free = 0u32;
    let mut survived = 0u32;
    let mut residual_sum = 0.0;
    for k in 0..probes {
        let t = f64::from(k) * spacing;
        if let Some(residual) = ch.free_time_remaining(t) {
            free += 1;
            residual_sum += residual;
            if residual >= window {
                survived += 1;
            }
        }
    }

    let fraction = f64::from(free) / f64::from(probes);
    let survival = f64::from(survived) / f64::from(free);
    let residual_mean = residual_sum / f64::from(free);

    println!("probes                  : {probes} (one per ON-OFF cycle length)");
    println!(
        "free fraction           : {fraction:.4}   theory gamma = {:.4}",
        pu.gamma()
    );
    println!(
        "mean residual idle time : {residual_mean:.0} us theory Z_off = {:.0} us (memorylessness)",
        pu.z_off
    );
    println!(
        "survival of y = {window} us : {survival:.4}   theory e^(-y/Z_off) = {:.4}",
        pu.off_survival_prob(window)
    );
}
