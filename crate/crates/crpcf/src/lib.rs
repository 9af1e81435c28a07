//! Throughput lab for polling MAC protocols in dense smart-meter networks.
//!
//! A local collector polls hundreds of meters for fixed-size report
//! packets. Two protocols are modeled side by side:
//!
//! - **pcf** — sequential polling on one dedicated channel: one poll, one
//!   packet, repeat, `L·M` times.
//! - **crpcf** — the cognitive-radio variant: each round the collector
//!   senses `N` supplementary channels, allocates the free ones to the
//!   least-completed meters, and receives up to `N + 1` packets in
//!   parallel, losing any transmission whose channel a primary user
//!   reclaims mid-round.
//!
//! Each protocol has a closed-form throughput model ([`analytic`]) and a
//! seeded round-synchronous simulator ([`sim`]); the [`harness`] runs
//! sweeps that cross-validate the two and writes CSV plus gnuplot scripts.
//!
//! ## Examples
//!
//! One runnable example per capability:
//!
//! - **`analytic_baseline`** — closed-form reports for both protocols at
//!   the default parameter set
//! - **`simulate_once`** — a single seeded simulation vs. its model
//!   prediction
//! - **`replications`** — 20-seed replication summary with agreement
//!   checks
//! - **`channel_statistics`** — the ON-OFF channel model vs. renewal
//!   theory (free fraction, residual distribution, survival rate)
//! - **`optimize_payload`** — payload-length search and the
//!   throughput-vs-payload trade-off
//! - **`figure_sweep`** — a full preset sweep written to CSV + plot script
//!
//! ```bash
//! cargo run --release -p crpcf --example analytic_baseline
//! cargo run --release -p crpcf --example simulate_once
//! cargo run --release -p crpcf --example replications
//! cargo run --release -p crpcf --example channel_statistics
//! cargo run --release -p crpcf --example optimize_payload
//! cargo run --release -p crpcf --example figure_sweep -- 10
//! ```
//!
//! The same functionality is scriptable through the `crpcf` binary
//! (`analytic`, `simulate`, `sweep`, `optimize-x` subcommands).
//!
//! ## Quick start
//!
//! ```
//! use crpcf::{crpcf_throughput, simulate, SimConfig};
//!
//! let config = SimConfig::default();
//! let model = crpcf_throughput(&config.params, &config.pu);
//! let run = simulate(&config);
//! let rel = (run.throughput - model.throughput).abs() / model.throughput;
//! assert!(rel < 0.10);
//! ```

pub mod analytic;
pub mod channel;
pub mod harness;
pub mod params;
pub mod scheduler;
pub mod sim;

pub use analytic::{crpcf_throughput, optimal_payload, pcf_throughput, AnalyticReport};
pub use params::{ProtocolParams, PuTrafficModel};
pub use sim::{run_replications, simulate, Protocol, SimConfig, SimReport};
