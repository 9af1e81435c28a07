//! Closed-form throughput models for both protocols, plus numerical
//! optimization of the payload length.
//!
//! Quantities are chained exactly as in the derivation the models follow:
//! the expected number of free supplementary channels per round is
//! `n = N·γ`; a transmission started on one survives the exposure window
//! `y = T_crpcf − τ_sense` with probability `e^(−λy)`; so one round delivers
//! `n·e^(−λy) + 1` packets on average (the `+1` is the dedicated channel)
//! and a run lasts about `L·M / (n·e^(−λy) + 1)` rounds. Rounds are kept
//! fractional — the mean-field approximation, not an integer schedule.

use crate::params::{ProtocolParams, PuTrafficModel};
use std::fmt;
use std::ops::RangeInclusive;

/// Model-predicted run metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticReport {
    /// Ideal payload airtime `L·M·X/C`, µs.
    pub t_payload: f64,
    /// Predicted completion time, µs.
    pub t_total: f64,
    /// `t_payload / t_total`; exceeds 1 when parallel channels are in play.
    pub throughput: f64,
    /// Expected polling rounds (parallel protocol only).
    pub expected_rounds: Option<f64>,
    /// Expected total channel switches (parallel protocol only).
    pub switch_count: Option<f64>,
}

impl fmt::Display for AnalyticReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "payload airtime : {:.3} us", self.t_payload)?;
        writeln!(f, "completion time : {:.3} us", self.t_total)?;
        write!(f, "throughput      : {:.6}", self.throughput)?;
        if let Some(r) = self.expected_rounds {
            write!(f, "\nexpected rounds : {r:.3}")?;
        }
        if let Some(o) = self.switch_count {
            write!(f, "\nchannel switches: {o:.1}")?;
        }
        Ok(())
    }
}

/// Sequential polling on the dedicated channel: `L·M` cycles of `T_pcf`
/// bracketed by the beacon and a trailing poll.
pub fn pcf_throughput(params: &ProtocolParams) -> AnalyticReport {
    let t_payload = params.payload_airtime();
    let t_total = params.pcf_completion_time(params.total_packets() as f64);
    AnalyticReport {
        t_payload,
        t_total,
        throughput: t_payload / t_total,
        expected_rounds: None,
        switch_count: None,
    }
}

/// Parallel polling over the free supplementary channels plus the dedicated
/// one.
pub fn crpcf_throughput(params: &ProtocolParams, pu: &PuTrafficModel) -> AnalyticReport {
    let n = f64::from(params.num_supp_channels) * pu.gamma();
    let survival = pu.off_survival_prob(params.exposure_window());
    let rounds = params.total_packets() as f64 / (n * survival + 1.0);
    let switches = rounds * 2.0 * n;
    let t_payload = params.payload_airtime();
    let t_total = params.crpcf_completion_time(rounds);
    AnalyticReport {
        t_payload,
        t_total,
        throughput: t_payload / t_total,
        expected_rounds: Some(rounds),
        switch_count: Some(switches),
    }
}

/// Result of the payload-length search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalPayload {
    /// Maximizing payload length, bytes.
    pub payload_len: u32,
    /// Throughput at that length.
    pub throughput: f64,
    /// True when the maximum sits on an edge of the search range — there is
    /// no interior stationary point to report.
    pub on_boundary: bool,
}

impl fmt::Display for OptimalPayload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "optimal payload : {} bytes (throughput {:.6}){}",
            self.payload_len,
            self.throughput,
            if self.on_boundary {
                " [range boundary — no interior maximum]"
            } else {
                ""
            }
        )
    }
}

fn throughput_at(params: &ProtocolParams, pu: &PuTrafficModel, payload_len: u32) -> f64 {
    let p = ProtocolParams {
        payload_len,
        ..*params
    };
    crpcf_throughput(&p, pu).throughput
}

/// Payload length in `x_range` maximizing the parallel-protocol throughput,
/// at one-byte resolution.
///
/// Longer payloads amortize per-round overhead but sit longer in the
/// interruption window, so the throughput is unimodal in the payload
/// length; a ternary search narrows the range and a final scan of the
/// remaining window picks the exact byte, matching an exhaustive grid
/// argmax (first maximizer on ties).
pub fn optimal_payload(
    params: &ProtocolParams,
    pu: &PuTrafficModel,
    x_range: RangeInclusive<u32>,
) -> OptimalPayload {
    let (x_min, x_max) = (*x_range.start(), *x_range.end());
    assert!(
        x_min >= 1,
        "payload search range must start at 1 byte or more"
    );
    assert!(x_min <= x_max, "empty payload search range");

    let eval = |x: u32| throughput_at(params, pu, x);

    let (mut lo, mut hi) = (x_min, x_max);
    while hi - lo > 32 {
        let third = (hi - lo) / 3;
        let m1 = lo + third;
        let m2 = hi - third;
        if eval(m1) < eval(m2) {
            lo = m1 + 1;
        } else {
            hi = m2;
        }
    }

    let mut best = (lo, eval(lo));
    for x in lo + 1..=hi {
        let s = eval(x);
        if s > best.1 {
            best = (x, s);
        }
    }
    OptimalPayload {
        payload_len: best.0,
        throughput: best.1,
        on_boundary: best.0 == x_min || best.0 == x_max,
    }
}
