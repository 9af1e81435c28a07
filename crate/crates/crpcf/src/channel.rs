//! ON-OFF alternating renewal process for each supplementary channel.
//!
//! The dedicated channel (index 0) carries no primary-user traffic and
//! reports free at every query. Supplementary channels realize one sample
//! path lazily: phases are drawn on demand while queries advance a monotone
//! cursor, so memory stays O(1) per channel for runs of any length.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::params::PuTrafficModel;

/// Occupancy phase of a supplementary channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Primary user transmitting; channel unusable.
    On,
    /// Channel free.
    Off,
}

impl Phase {
    fn flipped(self) -> Phase {
        match self {
            Phase::On => Phase::Off,
            Phase::Off => Phase::On,
        }
    }
}

/// Exponential variate by inverse transform, `−mean·ln(u)` for `u ∈ (0, 1]`.
pub fn exp_inverse_transform(mean: f64, u: f64) -> f64 {
    debug_assert!(u > 0.0 && u <= 1.0, "u must lie in (0, 1]");
    -mean * u.ln()
}

/// Draws one phase duration: `Exp(Z_on)` while busy, `Exp(Z_off)` while free.
pub fn sample_phase<R: Rng + ?Sized>(model: &PuTrafficModel, phase: Phase, rng: &mut R) -> f64 {
    let mean = match phase {
        Phase::On => model.z_on,
        Phase::Off => model.z_off,
    };
    // gen() is [0, 1); flip to (0, 1] so ln never sees zero
    exp_inverse_transform(mean, 1.0 - rng.gen::<f64>())
}

struct PuState {
    model: PuTrafficModel,
    rng: ChaCha8Rng,
    phase: Phase,
    /// End of the current phase; the phase holds on [start, end).
    phase_end: f64,
    last_query: f64,
}

impl PuState {
    fn advance_to(&mut self, t: f64) {
        assert!(
            t >= self.last_query,
            "out-of-order channel query: t = {t} after {}",
            self.last_query
        );
        self.last_query = t;
        while self.phase_end <= t {
            self.phase = self.phase.flipped();
            self.phase_end += sample_phase(&self.model, self.phase, &mut self.rng);
        }
    }
}

/// One channel's realized occupancy path, queryable at non-decreasing times.
pub struct ChannelProcess {
    channel_id: usize,
    pu: Option<PuState>,
}

impl ChannelProcess {
    /// The dedicated channel (index 0): free at every instant.
    pub fn dedicated() -> Self {
        ChannelProcess {
            channel_id: 0,
            pu: None,
        }
    }

    /// A supplementary channel with its own RNG stream derived from
    /// `(master_seed, channel_id)`. The initial phase at t = 0 is drawn from
    /// the stationary distribution (free with probability γ) with a fresh
    /// duration, which memorylessness makes the exact stationary residual.
    pub fn supplementary(channel_id: usize, model: PuTrafficModel, master_seed: u64) -> Self {
        assert!(channel_id >= 1, "channel 0 is the dedicated channel");
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(channel_id as u64);
        let phase = if rng.gen::<f64>() < model.gamma() {
            Phase::Off
        } else {
            Phase::On
        };
        let first = sample_phase(&model, phase, &mut rng);
        ChannelProcess {
            channel_id,
            pu: Some(PuState {
                model,
                rng,
                phase,
                phase_end: first,
                last_query: 0.0,
            }),
        }
    }

    pub fn channel_id(&self) -> usize {
        self.channel_id
    }

    pub fn is_dedicated(&self) -> bool {
        self.pu.is_none()
    }

    /// Whether the channel is free at time `t`.
    ///
    /// Panics if `t` precedes an earlier query on this channel — a
    /// sequencing bug in the caller, not a modeling outcome.
    pub fn is_free_at(&mut self, t: f64) -> bool {
        match &mut self.pu {
            None => true,
            Some(s) => {
                s.advance_to(t);
                s.phase == Phase::Off
            }
        }
    }

    /// Remaining free time at `t`: `Some(residual)` when free, `None` when
    /// busy. The dedicated channel reports an infinite residual.
    pub fn free_time_remaining(&mut self, t: f64) -> Option<f64> {
        match &mut self.pu {
            None => Some(f64::INFINITY),
            Some(s) => {
                s.advance_to(t);
                (s.phase == Phase::Off).then_some(s.phase_end - t)
            }
        }
    }

    /// Whether a channel sensed free at `t_start` stays free through
    /// `[t_start, t_start + window]`.
    pub fn off_survives(&mut self, t_start: f64, window: f64) -> bool {
        assert!(window >= 0.0);
        match &mut self.pu {
            None => true,
            Some(s) => {
                s.advance_to(t_start);
                assert!(
                    s.phase == Phase::Off,
                    "off_survives queried on a channel that was not sensed free"
                );
                s.phase_end >= t_start + window
            }
        }
    }
}
