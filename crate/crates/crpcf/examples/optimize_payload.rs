//! Payload-length trade-off: longer payloads amortize per-round overhead
//! but risk interruption for longer, so crpcf throughput peaks at a finite
//! payload. Prints the curve on a doubling grid and the exact optimum.
//!
//! Run with: cargo run --release -p crpcf --example optimize_payload

use crpcf::{crpcf_throughput, optimal_payload, pcf_throughput, ProtocolParams, PuTrafficModel};

fn main() {
    let base = ProtocolParams::default();
    let pu = PuTrafficModel::default();

    println!("payload B   pcf S      crpcf S");
    for k in 7..=14 {
        let x = 1u32 << k;
        let params = ProtocolParams {
            payload_len: x,
            ..base
        };
        println!(
            "{x:>9}   {:.5}    {:.5}",
            pcf_throughput(&params).throughput,
            crpcf_throughput(&params, &pu).throughput
        );
    }

    println!();
    let best = optimal_payload(&base, &pu, 64..=65536);
    println!("{best}");

    // with interruptions effectively gone, longer is always better and the
    // search reports the range edge
    let quiet = PuTrafficModel {
        z_on: pu.z_on,
        z_off: 1e15,
    };
    let edge = optimal_payload(&base, &quiet, 64..=65536);
    println!("near-zero interruption rate: {edge}");
}
