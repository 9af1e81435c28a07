//! Runs one preset sweep end to end and writes its CSV and gnuplot script.
//! Presets: 8 meters M, 9 packets L, 10 channels N, 11 payload X,
//! 12 availability gamma.
//!
//! Run with: cargo run --release -p crpcf --example figure_sweep -- [8-12]

use std::path::PathBuf;

use crpcf::harness::{emit_plot_script, figure_preset, run_sweep, write_csv};
use crpcf::SimConfig;

fn main() {
    let figure: u8 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("preset must be 8-12"))
        .unwrap_or(10);

    let spec = figure_preset(figure, SimConfig::default(), 20).expect("preset must be 8-12");
    println!(
        "sweeping {} over {:?} with {} seeds per point...",
        spec.variable, spec.values, spec.num_seeds
    );
    let table = run_sweep(&spec);
    for (value, error) in table.failures() {
        eprintln!("point {value}: {error}");
    }

    for row in &table.rows {
        if let Ok(m) = &row.metrics {
            println!(
                "{:>9} | pcf {:.4} | crpcf analytic {:.4} sim {:.4} +/- {:.4} | switches {:.0}",
                row.sweep_value,
                m.pcf_s_analytic,
                m.crpcf_s_analytic,
                m.crpcf_s_sim_mean,
                m.crpcf_s_sim_std,
                m.switch_sim_mean
            );
        }
    }

    let csv = PathBuf::from(format!("fig{figure}.csv"));
    write_csv(&table, &csv).expect("write CSV");
    let script = emit_plot_script(&table, figure, &csv).expect("write plot script");
    println!("wrote {} and {}", csv.display(), script.display());
    println!("render with: gnuplot {}", script.display());
}
