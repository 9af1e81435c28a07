//! Command-line front end. Exit codes: 0 success, 1 configuration error,
//! 2 runtime (I/O) error.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use crate::analytic::{crpcf_throughput, optimal_payload, pcf_throughput};
use crate::sim::{run_replications, simulate, Protocol, SimConfig};

use super::config::parse_config;
use super::output::{emit_plot_script, write_csv, PlotError};
use super::{figure_preset, run_sweep, SweepSpec, DEFAULT_NUM_SEEDS};

const EXIT_CONFIG: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

/// Throughput lab for polling MAC protocols: closed-form models and a
/// stochastic simulator for sequential polling (pcf) and its parallel
/// cognitive-radio variant (crpcf).
#[derive(Parser)]
#[command(name = "crpcf", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Config file (flat key=value; defaults used when omitted)
    #[arg(long)]
    config: Option<PathBuf>,

    /// Protocol override: pcf or crpcf
    #[arg(long, value_parser = parse_protocol)]
    protocol: Option<Protocol>,

    /// Master seed override
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the closed-form throughput report for a config
    Analytic {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run one simulation and print its report
    Simulate {
        #[command(flatten)]
        common: CommonOpts,
        /// Replications; > 1 prints an aggregate summary
        #[arg(long, default_value_t = 1)]
        seeds: usize,
    },
    /// Run a parameter sweep and write CSV plus a gnuplot script
    Sweep {
        #[command(flatten)]
        common: CommonOpts,
        /// Preset sweep to run (8: meters M, 9: packets L, 10: channels N,
        /// 11: payload X, 12: availability gamma); omit to use the config's
        /// sweep block
        #[arg(long)]
        figure: Option<u8>,
        /// Replications per sweep point
        #[arg(long)]
        seeds: Option<usize>,
        /// Output CSV path (plot script lands next to it)
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
    },
    /// Search the payload length maximizing crpcf throughput
    OptimizeX {
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn parse_protocol(s: &str) -> Result<Protocol, String> {
    match s {
        "pcf" => Ok(Protocol::Pcf),
        "crpcf" => Ok(Protocol::Crpcf),
        other => Err(format!("`{other}` is neither `pcf` nor `crpcf`")),
    }
}

struct Loaded {
    sim: SimConfig,
    sweep: Option<super::config::SweepBlock>,
}

fn load(common: &CommonOpts) -> Result<Loaded, (u8, String)> {
    let parsed = match &common.config {
        None => Loaded {
            sim: SimConfig::default(),
            sweep: None,
        },
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| (EXIT_RUNTIME, format!("reading {}: {e}", path.display())))?;
            let parsed = parse_config(&text).map_err(|e| (EXIT_CONFIG, e.to_string()))?;
            Loaded {
                sim: parsed.sim,
                sweep: parsed.sweep,
            }
        }
    };
    let mut loaded = parsed;
    if let Some(p) = common.protocol {
        loaded.sim.protocol = p;
    }
    if let Some(s) = common.seed {
        loaded.sim.seed = s;
    }
    Ok(loaded)
}

fn cmd_analytic(common: &CommonOpts) -> Result<(), (u8, String)> {
    let loaded = load(common)?;
    loaded
        .sim
        .params
        .validate()
        .map_err(|e| (EXIT_CONFIG, e.to_string()))?;
    let report = match loaded.sim.protocol {
        Protocol::Pcf => pcf_throughput(&loaded.sim.params),
        Protocol::Crpcf => crpcf_throughput(&loaded.sim.params, &loaded.sim.pu),
    };
    println!("protocol        : {}", loaded.sim.protocol);
    println!("{report}");
    Ok(())
}

fn cmd_simulate(common: &CommonOpts, seeds: usize) -> Result<(), (u8, String)> {
    if seeds == 0 {
        return Err((EXIT_CONFIG, "--seeds must be at least 1".to_string()));
    }
    let loaded = load(common)?;
    loaded
        .sim
        .params
        .validate()
        .map_err(|e| (EXIT_CONFIG, e.to_string()))?;
    println!("protocol        : {}", loaded.sim.protocol);
    if seeds == 1 {
        println!("{}", simulate(&loaded.sim));
    } else {
        println!("{}", run_replications(&loaded.sim, seeds));
    }
    Ok(())
}

fn cmd_sweep(
    common: &CommonOpts,
    figure: Option<u8>,
    seeds: Option<usize>,
    out: &std::path::Path,
) -> Result<(), (u8, String)> {
    let loaded = load(common)?;
    let spec = match figure {
        Some(fig) => {
            let num_seeds = seeds
                .or(loaded.sweep.as_ref().map(|s| s.num_seeds))
                .unwrap_or(DEFAULT_NUM_SEEDS);
            figure_preset(fig, loaded.sim, num_seeds).map_err(|e| (EXIT_CONFIG, e.to_string()))?
        }
        None => {
            let block = loaded.sweep.ok_or((
                EXIT_CONFIG,
                "no --figure given and the config has no sweep block".to_string(),
            ))?;
            let num_seeds = seeds.unwrap_or(block.num_seeds);
            SweepSpec::new(block.variable, block.values, loaded.sim, num_seeds)
                .map_err(|e| (EXIT_CONFIG, e.to_string()))?
        }
    };

    let table = run_sweep(&spec);
    for (value, error) in table.failures() {
        eprintln!("point {value}: {error}");
    }
    write_csv(&table, out)
        .map_err(|e| (EXIT_RUNTIME, format!("writing {}: {e}", out.display())))?;
    println!("wrote {}", out.display());

    // a preset sweep also gets its plot script; config-driven sweeps map to
    // the preset with the same variable when one exists
    let fig = match figure {
        Some(f) => Some(f),
        None => [8u8, 9, 10, 11, 12]
            .into_iter()
            .find(|&f| super::figure_variable(f).unwrap() == spec.variable),
    };
    if let Some(fig) = fig {
        let script = emit_plot_script(&table, fig, out).map_err(|e| match e {
            PlotError::Harness(h) => (EXIT_CONFIG, h.to_string()),
            PlotError::Io(io) => (EXIT_RUNTIME, format!("writing plot script: {io}")),
        })?;
        println!("wrote {}", script.display());
    }
    Ok(())
}

fn cmd_optimize_x(common: &CommonOpts) -> Result<(), (u8, String)> {
    let loaded = load(common)?;
    loaded
        .sim
        .params
        .validate()
        .map_err(|e| (EXIT_CONFIG, e.to_string()))?;
    let best = optimal_payload(&loaded.sim.params, &loaded.sim.pu, 64..=65536);
    println!("{best}");
    Ok(())
}

/// Parses `std::env::args` and runs the selected command.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analytic { common } => cmd_analytic(common),
        Command::Simulate { common, seeds } => cmd_simulate(common, *seeds),
        Command::Sweep {
            common,
            figure,
            seeds,
            out,
        } => cmd_sweep(common, *figure, *seeds, out),
        Command::OptimizeX { common } => cmd_optimize_x(common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
