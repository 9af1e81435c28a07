//! Per-round channel allocation under the least-completed-first-served rule.
//!
//! Every sensing round the coordinator assigns the channels found free to
//! the meters with the fewest delivered packets, so no meter group is
//! starved and no free channel idles while work remains.

use crate::params::ProtocolParams;

/// One smart meter's delivery progress.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmState {
    pub sm_id: usize,
    /// Packets delivered so far; never decreases, capped at L.
    pub packets_completed: u32,
    /// Channel held this round, if any. Cleared between rounds and always
    /// `None` once the meter has delivered all L packets.
    pub assigned_channel: Option<usize>,
    /// Running number of channel switches performed (two per excursion off
    /// the dedicated channel).
    pub switch_count: u64,
}

impl SmState {
    pub fn new(sm_id: usize) -> Self {
        SmState {
            sm_id,
            packets_completed: 0,
            assigned_channel: None,
            switch_count: 0,
        }
    }

    pub fn is_finished(&self, packets_per_sm: u32) -> bool {
        self.packets_completed >= packets_per_sm
    }
}

/// Channel-to-meter assignments for one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundAllocation {
    pub round_index: u64,
    /// `(sm_id, channel_id)` pairs; channel ids and meter ids are each
    /// distinct within a round and only sensed-free channels appear.
    pub assignments: Vec<(usize, usize)>,
}

impl RoundAllocation {
    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }
}

/// Fresh meter states for the start of a run.
pub fn fresh_sms(params: &ProtocolParams) -> Vec<SmState> {
    (0..params.num_sm as usize).map(SmState::new).collect()
}

/// Assigns free channels to the least-completed unfinished meters.
///
/// Selects `k = min(free channels, unfinished meters)` meters in ascending
/// `(packets_completed, sm_id)` order and pairs them with the free channels
/// in ascending channel order, so the most-behind meter gets the dedicated
/// channel (index 0, always free, immune to interruption).
///
/// Returns an empty allocation when every meter is finished.
///
/// Panics if `free_channels` does not contain the dedicated channel or
/// `sms` is empty.
pub fn lcfs_allocate(
    sms: &[SmState],
    packets_per_sm: u32,
    free_channels: &[usize],
    round_index: u64,
) -> RoundAllocation {
    assert!(!sms.is_empty(), "no meters to schedule");
    assert!(
        free_channels.contains(&0),
        "the dedicated channel is always free and must be offered"
    );

    let mut candidates: Vec<(u32, usize)> = sms
        .iter()
        .filter(|s| !s.is_finished(packets_per_sm))
        .map(|s| (s.packets_completed, s.sm_id))
        .collect();
    candidates.sort_unstable();

    let mut channels: Vec<usize> = free_channels.to_vec();
    channels.sort_unstable();
    channels.dedup();

    let k = candidates.len().min(channels.len());
    let assignments = candidates[..k]
        .iter()
        .zip(&channels)
        .map(|(&(_, sm_id), &ch)| (sm_id, ch))
        .collect();
    RoundAllocation {
        round_index,
        assignments,
    }
}

/// First allocation of a run: every meter at zero progress, allocated over
/// the channels sensed free at the first sensing instant (the beacon has
/// already been broadcast by this point in the timeline).
pub fn initialize_round(params: &ProtocolParams, free_channels: &[usize]) -> RoundAllocation {
    lcfs_allocate(&fresh_sms(params), params.packets_per_sm, free_channels, 0)
}
