//! Round-synchronous stochastic simulation of both polling protocols.
//!
//! The protocols advance in whole periodic durations, so the simulator
//! walks rounds rather than a general event queue. Sequential polling is
//! fully deterministic (the dedicated channel is interference-free); the
//! parallel variant senses every channel at the start of each round,
//! allocates the free ones least-completed-first, and loses a packet
//! whenever a primary user reclaims its channel inside the exposure
//! window.

use rayon::prelude::*;
use std::fmt;

use crate::channel::ChannelProcess;
use crate::params::{ProtocolParams, PuTrafficModel};
use crate::scheduler::{fresh_sms, lcfs_allocate, RoundAllocation, SmState};

/// Which protocol a run simulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    Pcf,
    Crpcf,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Protocol::Pcf => write!(f, "pcf"),
            Protocol::Crpcf => write!(f, "crpcf"),
        }
    }
}

/// Everything one run needs. Runs with equal configs are identical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub params: ProtocolParams,
    pub pu: PuTrafficModel,
    pub seed: u64,
    pub protocol: Protocol,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            params: ProtocolParams::default(),
            pu: PuTrafficModel::default(),
            seed: 1,
            protocol: Protocol::Crpcf,
        }
    }
}

/// Measured outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    /// Simulated completion time, µs.
    pub total_time: f64,
    /// Ideal payload airtime delivered, `L·M·X/C` µs.
    pub payload_time: f64,
    /// `payload_time / total_time`.
    pub throughput: f64,
    /// Periodic durations executed.
    pub rounds_executed: u64,
    /// Total meter channel switches (two per supplementary excursion).
    pub switch_count: u64,
    /// Packets lost to primary-user interruptions (each retransmitted in a
    /// later round).
    pub retransmissions: u64,
    /// `max − min` of per-meter completed packets at each round boundary.
    pub fairness_spread: Vec<u32>,
}

impl SimReport {
    pub fn max_fairness_spread(&self) -> u32 {
        self.fairness_spread.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for SimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "total time      : {:.3} us", self.total_time)?;
        writeln!(f, "payload airtime : {:.3} us", self.payload_time)?;
        writeln!(f, "throughput      : {:.6}", self.throughput)?;
        writeln!(f, "rounds executed : {}", self.rounds_executed)?;
        writeln!(f, "channel switches: {}", self.switch_count)?;
        writeln!(f, "retransmissions : {}", self.retransmissions)?;
        write!(f, "fairness spread : max {}", self.max_fairness_spread())
    }
}

/// What the observer sees just before a round's transmissions happen.
pub struct RoundObservation<'a> {
    pub round_index: u64,
    /// Channels sensed free this round (always includes 0).
    pub free_channels: &'a [usize],
    /// Per-meter completed counts at allocation time.
    pub completed: &'a [u32],
    pub allocation: &'a RoundAllocation,
}

/// Runs whichever protocol the config selects.
pub fn simulate(config: &SimConfig) -> SimReport {
    match config.protocol {
        Protocol::Pcf => simulate_pcf(config),
        Protocol::Crpcf => simulate_crpcf(config),
    }
}

/// Sequential polling on the dedicated channel. Consumes no randomness:
/// every seed produces the same report, and the reported total equals the
/// closed-form completion time exactly.
pub fn simulate_pcf(config: &SimConfig) -> SimReport {
    assert_eq!(
        config.protocol,
        Protocol::Pcf,
        "config built for {}",
        config.protocol
    );
    let params = &config.params;
    params.validate().expect("invalid protocol parameters");

    let l = params.packets_per_sm;
    let mut sms = fresh_sms(params);
    let mut fairness_spread = Vec::new();
    let mut rounds: u64 = 0;
    loop {
        let alloc = lcfs_allocate(&sms, l, &[0], rounds);
        if alloc.is_empty() {
            break;
        }
        let (sm_id, _) = alloc.assignments[0];
        sms[sm_id].packets_completed += 1;
        rounds += 1;
        fairness_spread.push(spread(&sms));
    }

    debug_assert_eq!(
        sms.iter()
            .map(|s| u64::from(s.packets_completed))
            .sum::<u64>(),
        params.total_packets()
    );

    let total_time = params.pcf_completion_time(rounds as f64);
    let payload_time = params.payload_airtime();
    let throughput = payload_time / total_time;
    debug_assert!(throughput > 0.0 && throughput < 1.0);
    SimReport {
        total_time,
        payload_time,
        throughput,
        rounds_executed: rounds,
        switch_count: 0,
        retransmissions: 0,
        fairness_spread,
    }
}

/// Parallel polling with channel sensing. See [`simulate_crpcf_observed`]
/// for the per-round timeline.
pub fn simulate_crpcf(config: &SimConfig) -> SimReport {
    simulate_crpcf_observed(config, |_| {})
}

/// Parallel polling, reporting each round to `observer` before its
/// transmissions are resolved (used by the property checks).
///
/// Round `k` starts at `t_k = Beacon/C + τ_sense + k·T_crpcf`:
/// 1. the coordinator senses all channels over `[t_k, t_k + τ_sense]` and
///    reads the verdict at the window's end;
/// 2. free channels are allocated least-completed-first;
/// 3. one poll-ack on the dedicated channel carries the previous round's
///    acknowledgements and the new allocation;
/// 4. meters bound for supplementary channels switch out (and back later:
///    two switches per excursion);
/// 5. all allocated meters transmit header + payload in parallel; a
///    supplementary transmission survives only if its channel stays free
///    through the remaining `y = T_crpcf − τ_sense` of the round, while the
///    dedicated channel always delivers;
/// 6. failures count as retransmissions and the meter re-enters the pool
///    with unchanged progress.
///
/// The dedicated channel delivers one packet every round, so a run lasts at
/// most `L·M` rounds.
pub fn simulate_crpcf_observed<F>(config: &SimConfig, mut observer: F) -> SimReport
where
    F: FnMut(&RoundObservation<'_>),
{
    assert_eq!(
        config.protocol,
        Protocol::Crpcf,
        "config built for {}",
        config.protocol
    );
    let params = &config.params;
    params.validate().expect("invalid protocol parameters");
    config.pu.validate().expect("invalid traffic model");

    let l = params.packets_per_sm;
    let t_round = params.periodic_duration_crpcf();
    let exposure = params.exposure_window();
    let t_first = params.frame_tx_time(params.beacon_len) + params.tau_sense;

    let mut channels: Vec<ChannelProcess> =
        Vec::with_capacity(params.num_supp_channels as usize + 1);
    channels.push(ChannelProcess::dedicated());
    for id in 1..=params.num_supp_channels as usize {
        channels.push(ChannelProcess::supplementary(id, config.pu, config.seed));
    }

    let mut sms = fresh_sms(params);
    let mut completed_snapshot: Vec<u32> = vec![0; sms.len()];
    let mut fairness_spread = Vec::new();
    let mut rounds: u64 = 0;
    let mut switch_count: u64 = 0;
    let mut retransmissions: u64 = 0;

    loop {
        let sense_at = t_first + rounds as f64 * t_round + params.tau_sense;
        let free: Vec<usize> = channels
            .iter_mut()
            .filter_map(|ch| ch.is_free_at(sense_at).then(|| ch.channel_id()))
            .collect();

        let alloc = lcfs_allocate(&sms, l, &free, rounds);
        if alloc.is_empty() {
            break;
        }

        for (slot, sm) in completed_snapshot.iter_mut().zip(&sms) {
            *slot = sm.packets_completed;
        }
        observer(&RoundObservation {
            round_index: rounds,
            free_channels: &free,
            completed: &completed_snapshot,
            allocation: &alloc,
        });

        for &(sm_id, ch) in &alloc.assignments {
            sms[sm_id].assigned_channel = Some(ch);
            let delivered = if ch == 0 {
                true
            } else {
                sms[sm_id].switch_count += 2;
                switch_count += 2;
                channels[ch].off_survives(sense_at, exposure)
            };
            if delivered {
                sms[sm_id].packets_completed += 1;
            } else {
                retransmissions += 1;
            }
        }
        for &(sm_id, _) in &alloc.assignments {
            sms[sm_id].assigned_channel = None;
        }

        rounds += 1;
        fairness_spread.push(spread(&sms));
    }

    assert_eq!(
        sms.iter()
            .map(|s| u64::from(s.packets_completed))
            .sum::<u64>(),
        params.total_packets(),
        "payload conservation violated"
    );
    debug_assert!(rounds <= params.total_packets());

    let total_time = params.crpcf_completion_time(rounds as f64);
    let payload_time = params.payload_airtime();
    let throughput = payload_time / total_time;
    debug_assert!(throughput > 0.0 && throughput <= f64::from(params.num_supp_channels + 1));
    SimReport {
        total_time,
        payload_time,
        throughput,
        rounds_executed: rounds,
        switch_count,
        retransmissions,
        fairness_spread,
    }
}

fn spread(sms: &[SmState]) -> u32 {
    let mut lo = u32::MAX;
    let mut hi = 0;
    for s in sms {
        lo = lo.min(s.packets_completed);
        hi = hi.max(s.packets_completed);
    }
    hi - lo
}

/// Mean, sample standard deviation and extremes of one metric across
/// replications.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    fn from_samples(samples: &[f64]) -> Stats {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let stddev = if samples.len() < 2 {
            0.0
        } else {
            (samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Stats {
            mean,
            stddev,
            min: samples.iter().copied().fold(f64::INFINITY, f64::min),
            max: samples.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Aggregated metrics over independent replications of one config.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationSummary {
    pub num_seeds: usize,
    pub total_time: Stats,
    pub throughput: Stats,
    pub rounds_executed: Stats,
    pub switch_count: Stats,
    pub retransmissions: Stats,
    pub max_fairness_spread: Stats,
}

impl fmt::Display for ReplicationSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "replications    : {}", self.num_seeds)?;
        for (name, s) in [
            ("throughput", self.throughput),
            ("total time us", self.total_time),
            ("rounds", self.rounds_executed),
            ("switches", self.switch_count),
            ("retransmissions", self.retransmissions),
            ("max spread", self.max_fairness_spread),
        ] {
            writeln!(
                f,
                "{name:<16}: mean {:<14.6} std {:<12.6} min {:<14.6} max {:.6}",
                s.mean, s.stddev, s.min, s.max
            )?;
        }
        Ok(())
    }
}

/// Runs `num_seeds` replications with seeds derived from the config's
/// master seed and aggregates each report field. Replications execute in
/// parallel; aggregation order is fixed, so the summary is deterministic.
pub fn run_replications(config: &SimConfig, num_seeds: usize) -> ReplicationSummary {
    assert!(num_seeds >= 1);
    let reports: Vec<SimReport> = (0..num_seeds)
        .into_par_iter()
        .map(|i| {
            let cfg = SimConfig {
                seed: config.seed.wrapping_add(i as u64),
                ..*config
            };
            simulate(&cfg)
        })
        .collect();

    let field = |f: &dyn Fn(&SimReport) -> f64| {
        Stats::from_samples(&reports.iter().map(f).collect::<Vec<_>>())
    };
    ReplicationSummary {
        num_seeds,
        total_time: field(&|r| r.total_time),
        throughput: field(&|r| r.throughput),
        rounds_executed: field(&|r| r.rounds_executed as f64),
        switch_count: field(&|r| r.switch_count as f64),
        retransmissions: field(&|r| r.retransmissions as f64),
        max_fairness_spread: field(&|r| f64::from(r.max_fairness_spread())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{crpcf_throughput, pcf_throughput};

    #[test]
    fn pcf_default_point_matches_formula_exactly() {
        let config = SimConfig {
            protocol: Protocol::Pcf,
            ..SimConfig::default()
        };
        let r = simulate_pcf(&config);
        assert_eq!(r.total_time, 81_235_216.0);
        assert_eq!(r.total_time, pcf_throughput(&config.params).t_total);
        assert_eq!(r.throughput, pcf_throughput(&config.params).throughput);
        assert_eq!(r.rounds_executed, 9000);
        assert_eq!(r.switch_count, 0);
        assert_eq!(r.retransmissions, 0);
    }

    #[test]
    fn pcf_single_round() {
        let config = SimConfig {
            params: ProtocolParams {
                num_sm: 1,
                packets_per_sm: 1,
                ..ProtocolParams::default()
            },
            protocol: Protocol::Pcf,
            ..SimConfig::default()
        };
        assert_eq!(simulate_pcf(&config).total_time, 10_242.0);
    }

    #[test]
    fn pcf_ignores_seed() {
        let base = SimConfig {
            protocol: Protocol::Pcf,
            params: ProtocolParams {
                num_sm: 40,
                packets_per_sm: 5,
                ..ProtocolParams::default()
            },
            ..SimConfig::default()
        };
        let a = simulate_pcf(&base);
        let b = simulate_pcf(&SimConfig {
            seed: 0xdead_beef,
            ..base
        });
        assert_eq!(a, b);
    }

    #[test]
    fn crpcf_no_supplementary_channels_is_deterministic() {
        let params = ProtocolParams {
            num_supp_channels: 0,
            num_sm: 30,
            packets_per_sm: 4,
            ..ProtocolParams::default()
        };
        let analytic = crpcf_throughput(&params, &PuTrafficModel::default());
        for seed in [1u64, 99, 7777] {
            let config = SimConfig {
                params,
                seed,
                protocol: Protocol::Crpcf,
                ..SimConfig::default()
            };
            let r = simulate_crpcf(&config);
            assert_eq!(r.total_time, analytic.t_total);
            assert_eq!(r.rounds_executed as f64, analytic.expected_rounds.unwrap());
            assert_eq!(r.switch_count, 0);
            assert_eq!(r.retransmissions, 0);
        }
    }

    #[test]
    fn crpcf_all_free_round_count() {
        // 5 meters × 2 packets over 3 always-free channels: the schedule
        // needs ceil(10/3) = 4 rounds (enumerated by hand)
        let config = SimConfig {
            params: ProtocolParams {
                num_sm: 5,
                packets_per_sm: 2,
                num_supp_channels: 2,
                ..ProtocolParams::default()
            },
            pu: PuTrafficModel {
                z_on: 1.0,
                z_off: 1e15,
            },
            seed: 3,
            protocol: Protocol::Crpcf,
        };
        let r = simulate_crpcf(&config);
        assert_eq!(r.rounds_executed, 4);
        assert_eq!(r.retransmissions, 0);
        assert_eq!(r.switch_count, 2 * (2 + 2 + 2)); // 2 supplementary slots in rounds 1-3
    }

    #[test]
    fn crpcf_default_point_tracks_model() {
        let config = SimConfig::default();
        let r = simulate_crpcf(&config);
        let a = crpcf_throughput(&config.params, &config.pu);
        assert!(r.switch_count.is_multiple_of(2));
        assert!(r.rounds_executed <= config.params.total_packets());
        let rel = (r.throughput - a.throughput).abs() / a.throughput;
        assert!(rel < 0.10, "single-seed throughput off by {rel}");
        assert!(r.throughput > 0.0 && r.throughput <= 16.0);
    }

    #[test]
    fn traced_run_preserves_dominance_and_conservation() {
        let config = SimConfig {
            params: ProtocolParams {
                num_sm: 12,
                packets_per_sm: 4,
                num_supp_channels: 5,
                ..ProtocolParams::default()
            },
            seed: 17,
            ..SimConfig::default()
        };
        let l = config.params.packets_per_sm;
        let lm = config.params.total_packets();
        let mut rounds_seen = 0u64;
        simulate_crpcf_observed(&config, |obs| {
            assert_eq!(obs.round_index, rounds_seen);
            rounds_seen += 1;
            let assigned: Vec<usize> = obs.allocation.assignments.iter().map(|&(s, _)| s).collect();
            let hi = assigned.iter().map(|&s| obs.completed[s]).max();
            let lo = (0..obs.completed.len())
                .filter(|i| obs.completed[*i] < l && !assigned.contains(i))
                .map(|i| obs.completed[i])
                .min();
            if let (Some(hi), Some(lo)) = (hi, lo) {
                assert!(hi <= lo, "round {}: {hi} > {lo}", obs.round_index);
            }
            // delivered so far never exceeds the total outstanding
            let delivered: u64 = obs.completed.iter().map(|&c| u64::from(c)).sum();
            assert!(delivered < lm);
            // only sensed-free channels allocated
            for &(_, ch) in &obs.allocation.assignments {
                assert!(obs.free_channels.contains(&ch));
            }
        });
        assert!(rounds_seen > 0);
    }

    #[test]
    fn replications_of_deterministic_protocol_have_zero_spread() {
        let config = SimConfig {
            protocol: Protocol::Pcf,
            params: ProtocolParams {
                num_sm: 25,
                packets_per_sm: 3,
                ..ProtocolParams::default()
            },
            ..SimConfig::default()
        };
        let summary = run_replications(&config, 8);
        assert_eq!(summary.throughput.stddev, 0.0);
        assert_eq!(summary.total_time.stddev, 0.0);
        assert_eq!(summary.switch_count.stddev, 0.0);
        assert_eq!(summary.throughput.min, summary.throughput.max);
    }

    #[test]
    fn single_replication_collapses_stats() {
        let summary = run_replications(&SimConfig::default(), 1);
        assert_eq!(summary.throughput.mean, summary.throughput.min);
        assert_eq!(summary.throughput.mean, summary.throughput.max);
        assert_eq!(summary.throughput.stddev, 0.0);
    }

    #[test]
    fn default_point_replications_concentrate() {
        let summary = run_replications(&SimConfig::default(), 20);
        let cv = summary.throughput.stddev / summary.throughput.mean;
        assert!(cv < 0.02, "coefficient of variation {cv}");
    }
}
