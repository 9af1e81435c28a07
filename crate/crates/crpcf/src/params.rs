//! Protocol parameters and the deterministic timing arithmetic shared by the
//! closed-form models and the simulator.
//!
//! All durations are in microseconds, all frame sizes in bytes, and the
//! transmission rate in bits per microsecond (1 Mbps = 1 bit/µs), so a frame
//! of `b` bytes occupies `8·b / rate` µs of airtime.

use std::fmt;

/// Airtime of a frame of `len_bytes` bytes at `rate` bits/µs.
pub fn frame_tx_time(len_bytes: u32, rate: f64) -> f64 {
    f64::from(len_bytes) * 8.0 / rate
}

/// Every length, gap and population size of the polling protocols.
///
/// `Default` is the reference parameter set used throughout the tests and
/// the sweep harness: 100 B beacon, 50 B poll and header, 1024 B payload,
/// 16 µs SIFS, 1 µs propagation delay, 300/120 µs sensing/switching gaps,
/// 1 Mbps, 600 meters reporting 15 packets each over 15 supplementary
/// channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    /// Beacon frame size, bytes.
    pub beacon_len: u32,
    /// Poll (poll-ack) frame size, bytes.
    pub poll_len: u32,
    /// Payload size per packet, bytes.
    pub payload_len: u32,
    /// MAC header size, bytes.
    pub header_len: u32,
    /// Short interframe space, µs.
    pub sifs: f64,
    /// One-way propagation delay, µs.
    pub prop_delay: f64,
    /// Channel sensing gap, µs.
    pub tau_sense: f64,
    /// Channel switching gap, µs.
    pub tau_switch: f64,
    /// Transmission rate, bits per µs.
    pub rate: f64,
    /// Number of smart meters (M).
    pub num_sm: u32,
    /// Packets each meter must deliver (L).
    pub packets_per_sm: u32,
    /// Supplementary channels (N), excluding the dedicated channel 0.
    pub num_supp_channels: u32,
}

impl Default for ProtocolParams {
    fn default() -> Self {
        ProtocolParams {
            beacon_len: 100,
            poll_len: 50,
            payload_len: 1024,
            header_len: 50,
            sifs: 16.0,
            prop_delay: 1.0,
            tau_sense: 300.0,
            tau_switch: 120.0,
            rate: 1.0,
            num_sm: 600,
            packets_per_sm: 15,
            num_supp_channels: 15,
        }
    }
}

impl ProtocolParams {
    /// Checks every construction invariant, naming the offending field.
    pub fn validate(&self) -> Result<(), ParamError> {
        for (name, v) in [
            ("beacon_bytes", self.beacon_len),
            ("poll_bytes", self.poll_len),
            ("payload_bytes", self.payload_len),
            ("header_bytes", self.header_len),
        ] {
            if v == 0 {
                return Err(ParamError::NonPositive { field: name });
            }
        }
        for (name, v) in [
            ("sifs_us", self.sifs),
            ("delta_us", self.prop_delay),
            ("tau_sense_us", self.tau_sense),
            ("tau_switch_us", self.tau_switch),
            ("rate_mbps", self.rate),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(ParamError::NonPositive { field: name });
            }
        }
        if self.num_sm == 0 {
            return Err(ParamError::NonPositive { field: "num_sm" });
        }
        if self.packets_per_sm == 0 {
            return Err(ParamError::NonPositive {
                field: "packets_per_sm",
            });
        }
        if self.tau_sense <= self.tau_switch {
            return Err(ParamError::SenseNotAboveSwitch {
                tau_sense: self.tau_sense,
                tau_switch: self.tau_switch,
            });
        }
        Ok(())
    }

    /// Airtime of a frame of `len_bytes` bytes at this parameter set's rate.
    pub fn frame_tx_time(&self, len_bytes: u32) -> f64 {
        frame_tx_time(len_bytes, self.rate)
    }

    /// One poll + payload exchange on the dedicated channel:
    /// `SIFS + Poll/C + δ + SIFS + (X+Header)/C + δ`.
    pub fn periodic_duration_pcf(&self) -> f64 {
        self.sifs
            + self.frame_tx_time(self.poll_len)
            + self.prop_delay
            + self.sifs
            + self.frame_tx_time(self.payload_len + self.header_len)
            + self.prop_delay
    }

    /// One sensing + poll + switch + parallel payload cycle:
    /// `τ_sense + Poll/C + δ + τ_switch + (X+Header)/C + δ`.
    pub fn periodic_duration_crpcf(&self) -> f64 {
        self.tau_sense
            + self.frame_tx_time(self.poll_len)
            + self.prop_delay
            + self.tau_switch
            + self.frame_tx_time(self.payload_len + self.header_len)
            + self.prop_delay
    }

    /// Total packets to deliver over a run, `L·M`.
    pub fn total_packets(&self) -> u64 {
        u64::from(self.num_sm) * u64::from(self.packets_per_sm)
    }

    /// Ideal payload airtime for a complete run, `L·M·X/C`.
    pub fn payload_airtime(&self) -> f64 {
        self.total_packets() as f64 * self.frame_tx_time(self.payload_len)
    }

    /// Completion time for `rounds` polling cycles:
    /// `Beacon/C + SIFS + rounds·T_pcf + Poll/C`.
    ///
    /// Both the closed-form model and the simulator report totals through
    /// this one expression, so a deterministic run and the formula agree
    /// bit for bit.
    pub fn pcf_completion_time(&self, rounds: f64) -> f64 {
        self.frame_tx_time(self.beacon_len)
            + self.sifs
            + rounds * self.periodic_duration_pcf()
            + self.frame_tx_time(self.poll_len)
    }

    /// Completion time for `rounds` sensing/allocation cycles:
    /// `Beacon/C + τ_sense + rounds·T_crpcf + Poll/C`.
    pub fn crpcf_completion_time(&self, rounds: f64) -> f64 {
        self.frame_tx_time(self.beacon_len)
            + self.tau_sense
            + rounds * self.periodic_duration_crpcf()
            + self.frame_tx_time(self.poll_len)
    }

    /// Exposure window a supplementary channel must stay free for a
    /// transmission to complete, `T_crpcf − τ_sense`.
    pub fn exposure_window(&self) -> f64 {
        self.periodic_duration_crpcf() - self.tau_sense
    }
}

/// Mean ON/OFF dwell times of the primary-user traffic on one
/// supplementary channel. Both phases are exponentially distributed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuTrafficModel {
    /// Mean busy (primary user transmitting) duration, µs.
    pub z_on: f64,
    /// Mean idle duration, µs.
    pub z_off: f64,
}

impl Default for PuTrafficModel {
    fn default() -> Self {
        PuTrafficModel {
            z_on: 8000.0,
            z_off: 25000.0,
        }
    }
}

impl PuTrafficModel {
    pub fn validate(&self) -> Result<(), ParamError> {
        for (name, v) in [("z_on_us", self.z_on), ("z_off_us", self.z_off)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(ParamError::NonPositive { field: name });
            }
        }
        Ok(())
    }

    /// Long-run fraction of time the channel is free:
    /// `γ = Z_off / (Z_off + Z_on)`.
    pub fn gamma(&self) -> f64 {
        self.z_off / (self.z_off + self.z_on)
    }

    /// Rate of the idle-phase exponential, `λ = 1/Z_off`.
    pub fn lambda(&self) -> f64 {
        1.0 / self.z_off
    }

    /// Probability that a channel sensed free stays free for `window` µs:
    /// `e^(−λ·window)` by memorylessness of the exponential idle phase.
    pub fn off_survival_prob(&self, window: f64) -> f64 {
        (-self.lambda() * window).exp()
    }

    /// Model with the given free fraction, holding `z_on` fixed.
    pub fn with_gamma_fixed_z_on(z_on: f64, gamma: f64) -> Self {
        PuTrafficModel {
            z_on,
            z_off: z_on * gamma / (1.0 - gamma),
        }
    }

    /// Model with the given free fraction, holding `z_off` (and so λ) fixed.
    pub fn with_gamma_fixed_z_off(z_off: f64, gamma: f64) -> Self {
        PuTrafficModel {
            z_on: z_off * (1.0 - gamma) / gamma,
            z_off,
        }
    }
}

/// Parameter-validation failure. The field names match the config keys
/// accepted by the harness so messages point at the exact input to fix.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamError {
    NonPositive { field: &'static str },
    SenseNotAboveSwitch { tau_sense: f64, tau_switch: f64 },
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::NonPositive { field } => {
                write!(f, "{field} must be strictly positive")
            }
            ParamError::SenseNotAboveSwitch {
                tau_sense,
                tau_switch,
            } => write!(
                f,
                "tau_sense_us ({tau_sense}) must exceed tau_switch_us ({tau_switch}): \
                 meters switch back to the dedicated channel while sensing is in progress"
            ),
        }
    }
}

impl std::error::Error for ParamError {}
