//! Reno-style TCP abstraction: MSS segmentation, slow start and congestion
//! avoidance, duplicate-ACK fast retransmit, RTT estimation and the
//! retransmission timer with exponential backoff.
//!
//! This module holds the pure state transitions; the event-driven wiring of
//! two endpoints through the link emulator lives in [`crate::sim`].

use alloc::collections::BTreeMap;

use crate::{HEADER_BYTES, MTU};

/// RTT smoothing gains per the standard estimator.
const ALPHA: f64 = 1.0 / 8.0;
const BETA: f64 = 1.0 / 4.0;

/// Transport configuration.
#[derive(Debug, Clone)]
pub struct TcpConfig {
    pub mss_bytes: usize,
    pub initcwnd_segments: usize,
    pub min_rto_ms: f64,
    pub max_rto_ms: f64,
    /// Retransmission timeout before the first RTT sample.
    pub initial_rto_ms: f64,
    /// Whether the 3-way handshake is part of the measured bracket.
    pub connect_included: bool,
    pub dupack_threshold: u32,
    /// Probability that a corrupted segment slips past the checksum and
    /// reaches the TLS layer (which then aborts). Zero means corrupted
    /// segments behave exactly like lost ones.
    pub corrupt_passthrough_prob: f64,
}

impl Default for TcpConfig {
    fn default() -> Self {
        Self {
            mss_bytes: 1460,
            initcwnd_segments: 10,
            min_rto_ms: 200.0,
            max_rto_ms: 60_000.0,
            initial_rto_ms: 1_000.0,
            connect_included: true,
            dupack_threshold: 3,
            corrupt_passthrough_prob: 0.0,
        }
    }
}

impl TcpConfig {
    pub fn validate(&self) -> Result<(), &'static str> {
        if self.mss_bytes == 0 || self.mss_bytes > MTU - HEADER_BYTES {
            return Err("mss_bytes must be in [1, MTU - 40]");
        }
        if self.initcwnd_segments == 0 {
            return Err("initcwnd_segments must be >= 1");
        }
        if self.min_rto_ms <= 0.0 || self.max_rto_ms < self.min_rto_ms {
            return Err("rto bounds must satisfy 0 < min <= max");
        }
        if !(0.0..=1.0).contains(&self.corrupt_passthrough_prob) {
            return Err("corrupt_passthrough_prob must be in [0, 1]");
        }
        Ok(())
    }
}

/// Number of MSS-sized segments needed for a payload. Zero bytes need none.
pub fn segment_count(payload_bytes: usize, mss: usize) -> usize {
    debug_assert!(mss > 0);
    payload_bytes.div_ceil(mss)
}

/// One unacknowledged segment.
#[derive(Debug, Clone)]
pub struct SegmentRecord {
    pub seq: u64,
    pub size_bytes: usize,
    pub send_time_us: u64,
    pub retransmit_count: u32,
}

/// What loss signal reached the sender.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    Rto,
    FastRetransmit,
}

/// Disposition of a corrupted segment at the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorruptDisposition {
    /// Silently dropped; downstream effect identical to loss.
    Discard,
    /// Escaped the checksum; the TLS layer aborts the handshake.
    PassThrough,
}

/// Decides what happens to a segment that arrives with the corrupt flag set.
pub fn deliver_corrupt(cfg: &TcpConfig, rng: &mut crate::rng::RunRng) -> CorruptDisposition {
    if cfg.corrupt_passthrough_prob <= 0.0 {
        return CorruptDisposition::Discard;
    }
    if rng.uniform() < cfg.corrupt_passthrough_prob {
        CorruptDisposition::PassThrough
    } else {
        CorruptDisposition::Discard
    }
}

/// Sender-plus-receiver state for one direction of a connection.
#[derive(Debug, Clone)]
pub struct TcpState {
    mss: usize,
    pub cwnd_bytes: usize,
    pub ssthresh_bytes: usize,
    pub srtt_ms: f64,
    pub rttvar_ms: f64,
    pub rto_ms: f64,
    has_rtt_sample: bool,
    /// Next sequence number to assign to outgoing payload bytes.
    pub next_seq: u64,
    /// Lowest unacknowledged sequence number.
    pub snd_una: u64,
    /// Unacknowledged segments by starting sequence number.
    pub in_flight: BTreeMap<u64, SegmentRecord>,
    pub dup_ack_count: u32,
    /// Receiver side: next in-order byte expected.
    pub rcv_nxt: u64,
    /// Receiver side: out-of-order byte ranges, keyed by start.
    pub ooo: BTreeMap<u64, u64>,
}

/// Outcome of feeding one cumulative ACK into the sender.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AckSignal {
    /// New data acknowledged.
    Advanced,
    /// Duplicate ACK below the threshold.
    Duplicate,
    /// Duplicate ACK that crossed the threshold: fast retransmit now.
    FastRetransmit,
    /// Old or irrelevant ACK.
    Ignored,
}

impl TcpState {
    pub fn new(cfg: &TcpConfig) -> Self {
        Self {
            mss: cfg.mss_bytes,
            cwnd_bytes: cfg.initcwnd_segments * cfg.mss_bytes,
            ssthresh_bytes: usize::MAX / 2,
            srtt_ms: 0.0,
            rttvar_ms: 0.0,
            rto_ms: cfg.initial_rto_ms,
            has_rtt_sample: false,
            next_seq: 0,
            snd_una: 0,
            in_flight: BTreeMap::new(),
            dup_ack_count: 0,
            rcv_nxt: 0,
            ooo: BTreeMap::new(),
        }
    }

    pub fn bytes_in_flight(&self) -> usize {
        self.in_flight.values().map(|s| s.size_bytes).sum()
    }

    /// Window room left for new segments.
    pub fn can_release(&self, seg_bytes: usize) -> bool {
        self.bytes_in_flight() + seg_bytes <= self.cwnd_bytes
    }

    pub fn has_outstanding(&self) -> bool {
        !self.in_flight.is_empty()
    }

    /// Records a freshly released segment.
    pub fn on_release(&mut self, seg: SegmentRecord) {
        debug_assert!(
            self.bytes_in_flight() + seg.size_bytes <= self.cwnd_bytes,
            "window discipline violated at release"
        );
        self.in_flight.insert(seg.seq, seg);
    }

    /// Feeds a cumulative ACK into the sender; `now_us` is the arrival time
    /// used for RTT sampling.
    pub fn on_ack(&mut self, cfg: &TcpConfig, ack_seq: u64, now_us: u64) -> AckSignal {
        if ack_seq > self.snd_una {
            // RTT sample from the newest segment this ACK covers, skipping
            // retransmitted ones (Karn's rule).
            let mut sample_ms = None;
            let covered: alloc::vec::Vec<u64> = self
                .in_flight
                .range(..ack_seq)
                .map(|(&seq, _)| seq)
                .collect();
            for seq in covered {
                if let Some(rec) = self.in_flight.remove(&seq) {
                    if rec.seq + rec.size_bytes as u64 <= ack_seq {
                        if rec.retransmit_count == 0 {
                            sample_ms = Some((now_us - rec.send_time_us) as f64 / 1000.0);
                        }
                    } else {
                        // Partially covered segment stays in flight.
                        self.in_flight.insert(seq, rec);
                    }
                }
            }
            if let Some(r) = sample_ms {
                self.take_rtt_sample(cfg, r);
            }
            self.snd_una = ack_seq;
            self.dup_ack_count = 0;
            // Window growth per ACK that advances.
            if self.cwnd_bytes < self.ssthresh_bytes {
                self.cwnd_bytes += self.mss;
            } else {
                self.cwnd_bytes += core::cmp::max(1, self.mss * self.mss / self.cwnd_bytes);
            }
            AckSignal::Advanced
        } else if ack_seq == self.snd_una && self.has_outstanding() {
            self.dup_ack_count += 1;
            if self.dup_ack_count == cfg.dupack_threshold {
                self.dup_ack_count = 0;
                AckSignal::FastRetransmit
            } else {
                AckSignal::Duplicate
            }
        } else {
            AckSignal::Ignored
        }
    }

    /// Feeds an RTT sample that is not tied to a tracked data segment
    /// (the SYN / SYN-ACK exchange).
    pub fn rtt_sample(&mut self, cfg: &TcpConfig, r_ms: f64) {
        self.take_rtt_sample(cfg, r_ms);
    }

    fn take_rtt_sample(&mut self, cfg: &TcpConfig, r_ms: f64) {
        if !self.has_rtt_sample {
            self.srtt_ms = r_ms;
            self.rttvar_ms = r_ms / 2.0;
            self.has_rtt_sample = true;
        } else {
            self.rttvar_ms = (1.0 - BETA) * self.rttvar_ms + BETA * libm::fabs(self.srtt_ms - r_ms);
            self.srtt_ms = (1.0 - ALPHA) * self.srtt_ms + ALPHA * r_ms;
        }
        self.rto_ms = clamp(self.srtt_ms + 4.0 * self.rttvar_ms, cfg.min_rto_ms, cfg.max_rto_ms);
    }

    /// Congestion response to a loss signal. The caller retransmits the
    /// oldest unacknowledged segment afterwards.
    pub fn on_loss(&mut self, cfg: &TcpConfig, kind: LossKind) {
        let flight = self.bytes_in_flight();
        self.ssthresh_bytes = core::cmp::max(flight / 2, 2 * self.mss);
        match kind {
            LossKind::FastRetransmit => {
                self.cwnd_bytes = self.ssthresh_bytes;
            }
            LossKind::Rto => {
                self.cwnd_bytes = self.mss;
                self.rto_ms = clamp(self.rto_ms * 2.0, cfg.min_rto_ms, cfg.max_rto_ms);
            }
        }
    }

    /// Oldest unacknowledged segment, the retransmission target.
    pub fn oldest_unacked(&self) -> Option<&SegmentRecord> {
        self.in_flight.values().next()
    }

    pub fn mark_retransmitted(&mut self, seq: u64, now_us: u64) {
        if let Some(rec) = self.in_flight.get_mut(&seq) {
            rec.retransmit_count += 1;
            rec.send_time_us = now_us;
        }
    }

    /// Receiver: ingests a data segment, returns the cumulative ACK to emit.
    pub fn on_data(&mut self, seq: u64, len: usize) -> u64 {
        let end = seq + len as u64;
        if end > self.rcv_nxt {
            let start = core::cmp::max(seq, self.rcv_nxt);
            let cur = self.ooo.get(&start).copied().unwrap_or(0);
            self.ooo.insert(start, core::cmp::max(cur, end));
            // Fold contiguous ranges into rcv_nxt.
            loop {
                let mut advanced = false;
                let reachable: alloc::vec::Vec<u64> = self
                    .ooo
                    .range(..=self.rcv_nxt)
                    .map(|(&s, _)| s)
                    .collect();
                for s in reachable {
                    if let Some(e) = self.ooo.remove(&s) {
                        if e > self.rcv_nxt {
                            self.rcv_nxt = e;
                            advanced = true;
                        }
                    }
                }
                if !advanced {
                    break;
                }
            }
        }
        self.rcv_nxt
    }
}

fn clamp(v: f64, lo: f64, hi: f64) -> f64 {
    if v < lo {
        lo
    } else if v > hi {
        hi
    } else {
        v
    }
}
