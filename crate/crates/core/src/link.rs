//! One-directional link with netem-style impairments.
//!
//! A packet entering the link is subjected, in order, to queue admission,
//! random loss, corruption marking, duplication, reordering/delay-with-jitter
//! and rate-based serialization. Corrupted packets are delivered with a flag;
//! the transport decides their fate.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::rng::RunRng;
use crate::MTU;

/// Which way a packet travels. `ClientToServer` is "traffic directed at the
/// server" (the scenario files call it `srv`), `ServerToClient` the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    ClientToServer,
    ServerToClient,
}

impl Direction {
    pub fn reverse(self) -> Self {
        match self {
            Direction::ClientToServer => Direction::ServerToClient,
            Direction::ServerToClient => Direction::ClientToServer,
        }
    }
}

/// Link rate: megabits per second or unlimited.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rate {
    Mbps(f64),
    Unlimited,
}

impl Rate {
    fn serialization_us(self, size_bytes: usize) -> u64 {
        match self {
            Rate::Unlimited => 0,
            Rate::Mbps(mbps) => {
                debug_assert!(mbps > 0.0);
                let secs = (size_bytes as f64 * 8.0) / (mbps * 1e6);
                libm::round(secs * 1e6) as u64
            }
        }
    }
}

/// Impairment parameters for one direction, netem attribute semantics.
#[derive(Debug, Clone)]
pub struct LinkProfile {
    pub delay_ms: f64,
    pub jitter_ms: f64,
    pub jitter_correlation: f64,
    pub loss_pct: f64,
    pub corrupt_pct: f64,
    pub duplicate_pct: f64,
    pub reorder_pct: f64,
    pub rate: Rate,
    pub queue_limit_packets: usize,
}

impl Default for LinkProfile {
    fn default() -> Self {
        Self {
            delay_ms: 0.0,
            jitter_ms: 0.0,
            jitter_correlation: 0.25,
            loss_pct: 0.0,
            corrupt_pct: 0.0,
            duplicate_pct: 0.0,
            reorder_pct: 0.0,
            rate: Rate::Unlimited,
            queue_limit_packets: 1000,
        }
    }
}

/// Profile validation failure.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileError {
    PercentageOutOfRange(&'static str, f64),
    NegativeTime(&'static str, f64),
    NonPositiveRate(f64),
    ReorderWithoutDelay,
    ZeroQueueLimit,
}

impl core::fmt::Display for ProfileError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ProfileError::PercentageOutOfRange(name, v) => {
                write!(f, "{name} must be in [0, 100], got {v}")
            }
            ProfileError::NegativeTime(name, v) => write!(f, "{name} must be >= 0, got {v}"),
            ProfileError::NonPositiveRate(v) => write!(f, "rate must be > 0 Mbps, got {v}"),
            ProfileError::ReorderWithoutDelay => {
                write!(f, "reorder requires a nonzero delay (reordering skips the delay)")
            }
            ProfileError::ZeroQueueLimit => write!(f, "queue limit must be > 0 packets"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ProfileError {}

impl LinkProfile {
    pub fn validate(&self) -> Result<(), ProfileError> {
        for (name, v) in [
            ("loss_pct", self.loss_pct),
            ("corrupt_pct", self.corrupt_pct),
            ("duplicate_pct", self.duplicate_pct),
            ("reorder_pct", self.reorder_pct),
            ("jitter_correlation", self.jitter_correlation * 100.0),
        ] {
            if !(0.0..=100.0).contains(&v) {
                return Err(ProfileError::PercentageOutOfRange(name, v));
            }
        }
        for (name, v) in [("delay_ms", self.delay_ms), ("jitter_ms", self.jitter_ms)] {
            if v < 0.0 {
                return Err(ProfileError::NegativeTime(name, v));
            }
        }
        if let Rate::Mbps(m) = self.rate {
            if m <= 0.0 {
                return Err(ProfileError::NonPositiveRate(m));
            }
        }
        if self.reorder_pct > 0.0 && self.delay_ms <= 0.0 {
            return Err(ProfileError::ReorderWithoutDelay);
        }
        if self.queue_limit_packets == 0 {
            return Err(ProfileError::ZeroQueueLimit);
        }
        Ok(())
    }
}

/// A packet in flight. `payload` is opaque to the link.
#[derive(Debug, Clone, PartialEq)]
pub struct Packet<P> {
    pub id: u64,
    pub size_bytes: usize,
    pub direction: Direction,
    pub corrupted: bool,
    pub payload: P,
}

/// Mutable per-link state: the rate serializer backlog and the jitter
/// correlation memory.
#[derive(Debug, Clone, Default)]
pub struct LinkState {
    last_jitter_offset_ms: f64,
    busy_until_us: u64,
    /// Departure times of packets still held by the serializer.
    backlog: VecDeque<u64>,
    next_packet_id: u64,
}

impl LinkState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn next_packet_id(&mut self) -> u64 {
        let id = self.next_packet_id;
        self.next_packet_id += 1;
        id
    }

    pub fn busy_until(&self) -> u64 {
        self.busy_until_us
    }

    fn queued_packets(&mut self, now_us: u64) -> usize {
        while let Some(&front) = self.backlog.front() {
            if front <= now_us {
                self.backlog.pop_front();
            } else {
                break;
            }
        }
        self.backlog.len()
    }
}

/// One scheduled delivery at the far end of the link.
#[derive(Debug, Clone, PartialEq)]
pub struct Delivery<P> {
    pub deliver_at_us: u64,
    pub packet: Packet<P>,
}

/// Why a packet never reached the far end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropReason {
    QueueOverflow,
    RandomLoss,
}

/// Result of pushing one packet through the link.
#[derive(Debug, Clone, PartialEq)]
pub enum TransitOutcome<P> {
    Delivered(Vec<Delivery<P>>),
    Dropped(DropReason),
}

/// Runs one packet through the impairment pipeline.
///
/// Evaluation order: queue admission, loss, corrupt, duplicate, then per copy
/// the reorder-or-delay decision and the rate serializer. Returns zero, one
/// or two deliveries.
pub fn transit<P: Clone>(
    pkt: Packet<P>,
    profile: &LinkProfile,
    state: &mut LinkState,
    rng: &mut RunRng,
    now_us: u64,
) -> TransitOutcome<P> {
    debug_assert!(pkt.size_bytes >= 1 && pkt.size_bytes <= MTU);

    if state.queued_packets(now_us) >= profile.queue_limit_packets {
        return TransitOutcome::Dropped(DropReason::QueueOverflow);
    }
    if rng.percent(profile.loss_pct) {
        return TransitOutcome::Dropped(DropReason::RandomLoss);
    }

    let mut pkt = pkt;
    if rng.percent(profile.corrupt_pct) {
        pkt.corrupted = true;
    }
    let duplicated = rng.percent(profile.duplicate_pct);

    let mut deliveries = Vec::with_capacity(if duplicated { 2 } else { 1 });
    deliveries.push(send_one(pkt.clone(), profile, state, rng, now_us));
    if duplicated {
        deliveries.push(send_one(pkt, profile, state, rng, now_us));
    }
    TransitOutcome::Delivered(deliveries)
}

fn send_one<P>(
    pkt: Packet<P>,
    profile: &LinkProfile,
    state: &mut LinkState,
    rng: &mut RunRng,
    now_us: u64,
) -> Delivery<P> {
    // Reordering is produced by skipping the delay entirely.
    let effective_delay_ms = if rng.percent(profile.reorder_pct) {
        0.0
    } else if profile.jitter_ms > 0.0 {
        let g = rng.normal(0.0, profile.jitter_ms);
        let c = profile.jitter_correlation;
        let j = c * state.last_jitter_offset_ms + (1.0 - c) * g;
        state.last_jitter_offset_ms = j;
        if profile.delay_ms + j < 0.0 {
            0.0
        } else {
            profile.delay_ms + j
        }
    } else {
        profile.delay_ms
    };

    let serialization = profile.rate.serialization_us(pkt.size_bytes);
    let departure = core::cmp::max(now_us, state.busy_until_us) + serialization;
    state.busy_until_us = departure;
    state.backlog.push_back(departure);

    let deliver_at_us = departure + libm::round(effective_delay_ms * 1000.0) as u64;
    Delivery { deliver_at_us, packet: pkt }
}

/// Total link occupancy of `n` packets sent back to back at `rate` packets
/// per second. Feeds the analysis-side model checks, not the event loop.
pub fn sent_bytes_time(n_packets: u64, rate_pps: f64) -> f64 {
    debug_assert!(rate_pps > 0.0);
    n_packets as f64 / rate_pps
}
