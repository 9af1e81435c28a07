//! Experiment harness: parameter sweeps, CSV emission, plot-script
//! generation and the command-line front end.
//!
//! A sweep varies one quantity — meter population M, packets per meter L,
//! supplementary channel count N, payload length X, or the long-run free
//! fraction γ — around a base configuration, and records analytic and
//! simulated metrics for both protocols at every point. γ sweeps move the
//! mean idle time `z_off` (holding `z_on` fixed): that is the regime in
//! which higher availability shortens runs *and* reduces total channel
//! switches, the behavior the sweep exists to show.

pub mod cli;
pub mod config;
pub mod output;

use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

use crate::analytic::{crpcf_throughput, pcf_throughput};
use crate::params::PuTrafficModel;
use crate::sim::{run_replications, simulate_pcf, Protocol, SimConfig};

pub use config::{parse_config, render_config, ConfigError, ParsedConfig, SweepBlock};
pub use output::{emit_plot_script, plot_script_string, write_csv};

/// Replications per sweep point unless a config says otherwise.
pub const DEFAULT_NUM_SEEDS: usize = 20;

/// The quantity a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Meter population M.
    NumSm,
    /// Packets per meter L.
    PacketsPerSm,
    /// Supplementary channel count N.
    NumChannels,
    /// Payload length X, bytes.
    PayloadLen,
    /// Long-run free fraction γ, varied through `z_off`.
    Gamma,
}

impl SweepVariable {
    /// Short config/CSV token: M, L, N, X or gamma.
    pub fn token(&self) -> &'static str {
        match self {
            SweepVariable::NumSm => "M",
            SweepVariable::PacketsPerSm => "L",
            SweepVariable::NumChannels => "N",
            SweepVariable::PayloadLen => "X",
            SweepVariable::Gamma => "gamma",
        }
    }

    /// Axis label for plots.
    pub fn axis_label(&self) -> &'static str {
        match self {
            SweepVariable::NumSm => "Number of SM M",
            SweepVariable::PacketsPerSm => "Number of Packets per SM L",
            SweepVariable::NumChannels => "Number of Channels N",
            SweepVariable::PayloadLen => "Length of Payload X (bytes)",
            SweepVariable::Gamma => "Long-run Proportion of Channel Off gamma",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

impl FromStr for SweepVariable {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "M" => Ok(SweepVariable::NumSm),
            "L" => Ok(SweepVariable::PacketsPerSm),
            "N" => Ok(SweepVariable::NumChannels),
            "X" => Ok(SweepVariable::PayloadLen),
            "gamma" => Ok(SweepVariable::Gamma),
            _ => Err(()),
        }
    }
}

/// One sweep: the varied quantity, its grid, the base configuration and the
/// replication count per point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    pub base: SimConfig,
    pub num_seeds: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum HarnessError {
    EmptySweep,
    NotIncreasing {
        value: f64,
    },
    BadSweepValue {
        variable: SweepVariable,
        value: f64,
        expected: &'static str,
    },
    UnknownFigure(u8),
    FigureVariableMismatch {
        figure: u8,
        expected: SweepVariable,
        actual: SweepVariable,
    },
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::EmptySweep => write!(f, "sweep_values must be non-empty"),
            HarnessError::NotIncreasing { value } => {
                write!(f, "sweep_values must be strictly increasing (at {value})")
            }
            HarnessError::BadSweepValue {
                variable,
                value,
                expected,
            } => {
                write!(f, "sweep value {value} for {variable} must be {expected}")
            }
            HarnessError::UnknownFigure(n) => {
                write!(f, "no preset sweep numbered {n} (expected 8-12)")
            }
            HarnessError::FigureVariableMismatch {
                figure,
                expected,
                actual,
            } => write!(
                f,
                "preset {figure} sweeps {expected} but the table sweeps {actual}"
            ),
        }
    }
}

impl std::error::Error for HarnessError {}

impl SweepSpec {
    pub fn new(
        variable: SweepVariable,
        values: Vec<f64>,
        base: SimConfig,
        num_seeds: usize,
    ) -> Result<SweepSpec, HarnessError> {
        if values.is_empty() {
            return Err(HarnessError::EmptySweep);
        }
        for w in values.windows(2) {
            if w[1] <= w[0] {
                return Err(HarnessError::NotIncreasing { value: w[1] });
            }
        }
        for &v in &values {
            match variable {
                SweepVariable::Gamma => {
                    if !(v > 0.0 && v < 1.0) {
                        return Err(HarnessError::BadSweepValue {
                            variable,
                            value: v,
                            expected: "inside (0, 1)",
                        });
                    }
                }
                SweepVariable::NumChannels => {
                    if v < 0.0 || v.fract() != 0.0 || v > f64::from(u32::MAX) {
                        return Err(HarnessError::BadSweepValue {
                            variable,
                            value: v,
                            expected: "a non-negative integer",
                        });
                    }
                }
                _ => {
                    if v < 1.0 || v.fract() != 0.0 || v > f64::from(u32::MAX) {
                        return Err(HarnessError::BadSweepValue {
                            variable,
                            value: v,
                            expected: "a positive integer",
                        });
                    }
                }
            }
        }
        assert!(num_seeds >= 1);
        Ok(SweepSpec {
            variable,
            values,
            base,
            num_seeds,
        })
    }

    /// The base config with the swept quantity set to `value`.
    pub fn config_at(&self, value: f64) -> SimConfig {
        let mut cfg = self.base;
        match self.variable {
            SweepVariable::NumSm => cfg.params.num_sm = value as u32,
            SweepVariable::PacketsPerSm => cfg.params.packets_per_sm = value as u32,
            SweepVariable::NumChannels => cfg.params.num_supp_channels = value as u32,
            SweepVariable::PayloadLen => cfg.params.payload_len = value as u32,
            SweepVariable::Gamma => {
                cfg.pu = PuTrafficModel::with_gamma_fixed_z_on(cfg.pu.z_on, value);
            }
        }
        cfg
    }
}

/// Metrics recorded at one sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowMetrics {
    pub pcf_s_analytic: f64,
    pub pcf_s_sim: f64,
    pub crpcf_s_analytic: f64,
    pub crpcf_s_sim_mean: f64,
    pub crpcf_s_sim_std: f64,
    pub switch_analytic: f64,
    pub switch_sim_mean: f64,
    pub rounds_sim_mean: f64,
    pub retx_sim_mean: f64,
}

/// One sweep point: either its metrics or the failure that produced none.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub metrics: Result<RowMetrics, String>,
}

/// A completed sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub variable: SweepVariable,
    pub base: SimConfig,
    pub num_seeds: usize,
    pub rows: Vec<SweepRow>,
}

fn point_metrics(cfg: &SimConfig, num_seeds: usize) -> Result<RowMetrics, String> {
    cfg.params.validate().map_err(|e| e.to_string())?;
    cfg.pu.validate().map_err(|e| e.to_string())?;

    let pcf_analytic = pcf_throughput(&cfg.params);
    let pcf_sim = simulate_pcf(&SimConfig {
        protocol: Protocol::Pcf,
        ..*cfg
    });
    let crpcf_analytic = crpcf_throughput(&cfg.params, &cfg.pu);
    let crpcf_sim = run_replications(
        &SimConfig {
            protocol: Protocol::Crpcf,
            ..*cfg
        },
        num_seeds,
    );

    Ok(RowMetrics {
        pcf_s_analytic: pcf_analytic.throughput,
        pcf_s_sim: pcf_sim.throughput,
        crpcf_s_analytic: crpcf_analytic.throughput,
        crpcf_s_sim_mean: crpcf_sim.throughput.mean,
        crpcf_s_sim_std: crpcf_sim.throughput.stddev,
        switch_analytic: crpcf_analytic.switch_count.unwrap_or(0.0),
        switch_sim_mean: crpcf_sim.switch_count.mean,
        rounds_sim_mean: crpcf_sim.rounds_executed.mean,
        retx_sim_mean: crpcf_sim.retransmissions.mean,
    })
}

/// Runs every point of the sweep. Points execute concurrently; rows come
/// back in grid order, and a failed point becomes an error row without
/// aborting the rest.
pub fn run_sweep(spec: &SweepSpec) -> SweepTable {
    let rows: Vec<SweepRow> = spec
        .values
        .par_iter()
        .map(|&value| SweepRow {
            sweep_value: value,
            metrics: point_metrics(&spec.config_at(value), spec.num_seeds),
        })
        .collect();
    SweepTable {
        variable: spec.variable,
        base: spec.base,
        num_seeds: spec.num_seeds,
        rows,
    }
}

/// The preset sweep grids, numbered 8-12 after the experiment series they
/// reproduce: 8 varies M, 9 varies L, 10 varies N, 11 varies X on a
/// doubling grid, 12 varies γ through `z_off`.
pub fn figure_preset(
    figure: u8,
    base: SimConfig,
    num_seeds: usize,
) -> Result<SweepSpec, HarnessError> {
    let (variable, values): (SweepVariable, Vec<f64>) = match figure {
        8 => (
            SweepVariable::NumSm,
            (1..=10).map(|k| f64::from(k) * 100.0).collect(),
        ),
        9 => (
            SweepVariable::PacketsPerSm,
            (1..=10).map(|k| f64::from(k) * 5.0).collect(),
        ),
        10 => (
            SweepVariable::NumChannels,
            (1..=25).map(f64::from).collect(),
        ),
        11 => (
            SweepVariable::PayloadLen,
            (7..=14).map(|k| f64::from(1u32 << k)).collect(),
        ),
        12 => (
            SweepVariable::Gamma,
            (3..=9).map(|k| f64::from(k) / 10.0).collect(),
        ),
        other => return Err(HarnessError::UnknownFigure(other)),
    };
    SweepSpec::new(variable, values, base, num_seeds)
}

/// The sweep variable a preset figure varies.
pub fn figure_variable(figure: u8) -> Result<SweepVariable, HarnessError> {
    Ok(match figure {
        8 => SweepVariable::NumSm,
        9 => SweepVariable::PacketsPerSm,
        10 => SweepVariable::NumChannels,
        11 => SweepVariable::PayloadLen,
        12 => SweepVariable::Gamma,
        other => return Err(HarnessError::UnknownFigure(other)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ProtocolParams;

    fn quick_base() -> SimConfig {
        SimConfig {
            params: ProtocolParams {
                num_sm: 20,
                packets_per_sm: 3,
                ..ProtocolParams::default()
            },
            ..SimConfig::default()
        }
    }

    #[test]
    fn spec_rejects_bad_grids() {
        let base = quick_base();
        assert!(matches!(
            SweepSpec::new(SweepVariable::NumSm, vec![], base, 1),
            Err(HarnessError::EmptySweep)
        ));
        assert!(matches!(
            SweepSpec::new(SweepVariable::NumSm, vec![10.0, 10.0], base, 1),
            Err(HarnessError::NotIncreasing { .. })
        ));
        assert!(matches!(
            SweepSpec::new(SweepVariable::Gamma, vec![0.5, 1.0], base, 1),
            Err(HarnessError::BadSweepValue { .. })
        ));
        assert!(matches!(
            SweepSpec::new(SweepVariable::NumSm, vec![1.5], base, 1),
            Err(HarnessError::BadSweepValue { .. })
        ));
    }

    #[test]
    fn channel_sweep_analytic_column_strictly_increases() {
        let spec = SweepSpec::new(
            SweepVariable::NumChannels,
            vec![1.0, 3.0, 5.0, 7.0],
            quick_base(),
            2,
        )
        .unwrap();
        let table = run_sweep(&spec);
        let s: Vec<f64> = table
            .rows
            .iter()
            .map(|r| r.metrics.as_ref().unwrap().crpcf_s_analytic)
            .collect();
        for w in s.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn gamma_point_at_base_value_reproduces_base_metrics() {
        // γ = 25/33 with z_on = 8000 lands back on z_off = 25000
        let base = quick_base();
        let gamma_spec = SweepSpec::new(SweepVariable::Gamma, vec![25.0 / 33.0], base, 3).unwrap();
        let m_spec = SweepSpec::new(
            SweepVariable::NumSm,
            vec![f64::from(base.params.num_sm)],
            base,
            3,
        )
        .unwrap();
        let g = run_sweep(&gamma_spec).rows[0].metrics.clone().unwrap();
        let m = run_sweep(&m_spec).rows[0].metrics.clone().unwrap();
        assert!((g.crpcf_s_analytic - m.crpcf_s_analytic).abs() < 1e-9);
        assert!((g.crpcf_s_sim_mean - m.crpcf_s_sim_mean).abs() < 1e-9);
        assert_eq!(g.pcf_s_analytic, m.pcf_s_analytic);
    }

    #[test]
    fn gamma_sweep_moves_z_off_not_z_on() {
        let spec = SweepSpec::new(SweepVariable::Gamma, vec![0.4, 0.8], quick_base(), 1).unwrap();
        let lo = spec.config_at(0.4);
        let hi = spec.config_at(0.8);
        assert_eq!(lo.pu.z_on, hi.pu.z_on);
        assert!(hi.pu.z_off > lo.pu.z_off);
        assert!((lo.pu.gamma() - 0.4).abs() < 1e-12);
        assert!((hi.pu.gamma() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn presets_cover_the_five_figures() {
        let base = quick_base();
        for (figure, variable, len) in [
            (8u8, SweepVariable::NumSm, 10usize),
            (9, SweepVariable::PacketsPerSm, 10),
            (10, SweepVariable::NumChannels, 25),
            (11, SweepVariable::PayloadLen, 8),
            (12, SweepVariable::Gamma, 7),
        ] {
            let spec = figure_preset(figure, base, 2).unwrap();
            assert_eq!(spec.variable, variable);
            assert_eq!(spec.values.len(), len);
            assert_eq!(figure_variable(figure).unwrap(), variable);
        }
        assert!(matches!(
            figure_preset(13, base, 2),
            Err(HarnessError::UnknownFigure(13))
        ));
    }
}
