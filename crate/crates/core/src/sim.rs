//! Event-driven simulation of one TLS 1.3 handshake between a client and a
//! server connected by two impaired one-directional links.
//!
//! The measured bracket follows the client: it opens when the client
//! initiates (including the TCP connect when configured) and closes the
//! instant the client hands its Finished to the transport, before any server
//! processing of it. The run itself continues until the Finished is
//! delivered so that corrupt-passthrough aborts are observed.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::engine::{EventQueue, SimClock};
use crate::handshake::Transcript;
use crate::kem::OpCosts;
use crate::link::{transit, Delivery, Direction, LinkProfile, LinkState, Packet, TransitOutcome};
use crate::rng::RunRng;
use crate::tcp::{
    deliver_corrupt, AckSignal, CorruptDisposition, LossKind, SegmentRecord, TcpConfig, TcpState,
};
use crate::HEADER_BYTES;

/// Default simulated deadline: 60 s.
pub const DEFAULT_DEADLINE_US: u64 = 60_000_000;

/// Run-level simulation configuration.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub tcp: TcpConfig,
    pub deadline_us: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            tcp: TcpConfig::default(),
            deadline_us: DEFAULT_DEADLINE_US,
        }
    }
}

/// Terminal failure of one simulated handshake.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HandshakeFailure {
    /// The 3-way handshake never completed before the deadline.
    ConnectTimeout,
    /// The handshake ran past the configured deadline.
    HandshakeTimeout,
    /// A corrupted segment escaped the checksum and reached the TLS layer.
    HandshakeCorruptAbort,
}

impl fmt::Display for HandshakeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HandshakeFailure::ConnectTimeout => write!(f, "connect timeout"),
            HandshakeFailure::HandshakeTimeout => write!(f, "handshake timeout"),
            HandshakeFailure::HandshakeCorruptAbort => write!(f, "corrupt abort"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for HandshakeFailure {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Client,
    Server,
}

impl Side {
    fn send_direction(self) -> Direction {
        match self {
            Side::Client => Direction::ClientToServer,
            Side::Server => Direction::ServerToClient,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Side::Client => "cli",
            Side::Server => "srv",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Payload {
    Syn,
    SynAck,
    Data { seq: u64, len: usize },
    Ack { ack_seq: u64 },
}

#[derive(Debug)]
enum Event {
    Deliver(Packet<Payload>),
    Timer { side: Side, generation: u64 },
    OpDone { flight: usize },
}

struct Endpoint {
    tcp: TcpState,
    /// Remaining bytes of queued application messages, head first.
    /// Segments never span two messages.
    pending: VecDeque<usize>,
    timer_generation: u64,
    timer_armed: bool,
}

impl Endpoint {
    fn new(cfg: &TcpConfig) -> Self {
        Self {
            tcp: TcpState::new(cfg),
            pending: VecDeque::new(),
            timer_generation: 0,
            timer_armed: false,
        }
    }
}

/// The whole single-run state. One instance per measurement; nothing is
/// shared across runs.
struct HandshakeSim<'a> {
    cfg: &'a SimConfig,
    clock: SimClock,
    queue: EventQueue<Event>,
    rng: &'a mut RunRng,
    profiles: [&'a LinkProfile; 2],
    links: [LinkState; 2],
    client: Endpoint,
    server: Endpoint,
    // Flight byte counts.
    client_hello_bytes: usize,
    server_flight_bytes: usize,
    finished_bytes: usize,
    op_costs_us: [u64; 3],
    // Connection establishment bookkeeping.
    syn_sent_at: u64,
    syn_retransmitted: bool,
    synack_sent_at: u64,
    synack_retransmitted: bool,
    server_got_syn: bool,
    client_established: bool,
    established_at: u64,
    synack_acked: bool,
    // Handshake progress.
    encaps_scheduled: bool,
    decaps_scheduled: bool,
    finished_emitted_at: Option<u64>,
    complete: bool,
    trace: Option<&'a mut Vec<String>>,
}

fn ms_to_us(ms: f64) -> u64 {
    libm::round(ms * 1000.0) as u64
}

impl<'a> HandshakeSim<'a> {
    fn link_index(direction: Direction) -> usize {
        match direction {
            Direction::ClientToServer => 0,
            Direction::ServerToClient => 1,
        }
    }

    fn endpoint(&mut self, side: Side) -> &mut Endpoint {
        match side {
            Side::Client => &mut self.client,
            Side::Server => &mut self.server,
        }
    }

    fn record(&mut self, line: String) {
        if let Some(trace) = self.trace.as_deref_mut() {
            trace.push(line);
        }
    }

    /// Sends one packet from `side` through its outgoing link.
    fn send_packet(&mut self, side: Side, payload: Payload, payload_bytes: usize) {
        let direction = side.send_direction();
        let idx = Self::link_index(direction);
        let now = self.clock.now();
        let id = self.links[idx].next_packet_id();
        let pkt = Packet {
            id,
            size_bytes: payload_bytes + HEADER_BYTES,
            direction,
            corrupted: false,
            payload,
        };
        let outcome = transit(pkt, self.profiles[idx], &mut self.links[idx], self.rng, now);
        match outcome {
            TransitOutcome::Delivered(deliveries) => {
                for Delivery { deliver_at_us, packet } in deliveries {
                    self.record(alloc::format!(
                        "t={now} {} send {:?} id={} deliver_at={deliver_at_us}",
                        side.label(),
                        packet.payload,
                        packet.id
                    ));
                    self.queue
                        .schedule(&self.clock, deliver_at_us, Event::Deliver(packet))
                        .expect("delivery scheduled in the past");
                }
            }
            TransitOutcome::Dropped(reason) => {
                self.record(alloc::format!(
                    "t={now} {} drop {reason:?} id={id}",
                    side.label()
                ));
            }
        }
    }

    fn arm_timer(&mut self, side: Side, delay_us: u64) {
        let at = self.clock.now() + delay_us;
        let ep = self.endpoint(side);
        ep.timer_generation += 1;
        ep.timer_armed = true;
        let generation = ep.timer_generation;
        self.queue
            .schedule(&self.clock, at, Event::Timer { side, generation })
            .expect("timer scheduled in the past");
    }

    fn cancel_timer(&mut self, side: Side) {
        let ep = self.endpoint(side);
        ep.timer_generation += 1;
        ep.timer_armed = false;
    }

    fn rto_us(&mut self, side: Side) -> u64 {
        ms_to_us(self.endpoint(side).tcp.rto_ms)
    }

    /// Releases as many pending segments as the congestion window allows.
    fn pump(&mut self, side: Side) {
        loop {
            let now = self.clock.now();
            let mss = self.cfg.tcp.mss_bytes;
            let ep = self.endpoint(side);
            let Some(&head) = ep.pending.front() else { break };
            if head == 0 {
                ep.pending.pop_front();
                continue;
            }
            let chunk = core::cmp::min(mss, head);
            if !ep.tcp.can_release(chunk) {
                break;
            }
            let seq = ep.tcp.next_seq;
            ep.tcp.next_seq += chunk as u64;
            *ep.pending.front_mut().expect("head vanished") -= chunk;
            if *ep.pending.front().expect("head vanished") == 0 {
                ep.pending.pop_front();
            }
            ep.tcp.on_release(SegmentRecord {
                seq,
                size_bytes: chunk,
                send_time_us: now,
                retransmit_count: 0,
            });
            let needs_timer = !ep.timer_armed;
            self.send_packet(side, Payload::Data { seq, len: chunk }, chunk);
            if needs_timer {
                let rto = self.rto_us(side);
                self.arm_timer(side, rto);
            }
        }
    }

    fn retransmit_oldest(&mut self, side: Side) {
        let now = self.clock.now();
        let ep = self.endpoint(side);
        let Some(rec) = ep.tcp.oldest_unacked() else { return };
        let (seq, len) = (rec.seq, rec.size_bytes);
        ep.tcp.mark_retransmitted(seq, now);
        self.send_packet(side, Payload::Data { seq, len }, len);
    }

    /// Queues a flight's payload on the sending side.
    fn enqueue_flight(&mut self, side: Side, bytes: usize) {
        self.endpoint(side).pending.push_back(bytes);
        self.pump(side);
    }

    fn total_client_bytes(&self) -> u64 {
        (self.client_hello_bytes + self.finished_bytes) as u64
    }

    fn handle_data(&mut self, receiver: Side, seq: u64, len: usize) {
        let ack_seq = self.endpoint(receiver).tcp.on_data(seq, len);
        self.send_packet(receiver, Payload::Ack { ack_seq }, 0);
        match receiver {
            Side::Server => {
                let rcv = self.server.tcp.rcv_nxt;
                if !self.encaps_scheduled && rcv >= self.client_hello_bytes as u64 {
                    self.encaps_scheduled = true;
                    let at = self.clock.now() + self.op_costs_us[1];
                    self.queue
                        .schedule(&self.clock, at, Event::OpDone { flight: 1 })
                        .expect("op scheduled in the past");
                }
                if rcv >= self.total_client_bytes() {
                    self.complete = true;
                }
            }
            Side::Client => {
                let rcv = self.client.tcp.rcv_nxt;
                if !self.decaps_scheduled && rcv >= self.server_flight_bytes as u64 {
                    self.decaps_scheduled = true;
                    let at = self.clock.now() + self.op_costs_us[2];
                    self.queue
                        .schedule(&self.clock, at, Event::OpDone { flight: 2 })
                        .expect("op scheduled in the past");
                }
            }
        }
    }

    fn handle_ack(&mut self, receiver: Side, ack_seq: u64) {
        let now = self.clock.now();
        let cfg = self.cfg;
        let signal = self.endpoint(receiver).tcp.on_ack(&cfg.tcp, ack_seq, now);
        match signal {
            AckSignal::Advanced => {
                if self.endpoint(receiver).tcp.has_outstanding() {
                    let rto = self.rto_us(receiver);
                    self.arm_timer(receiver, rto);
                } else {
                    self.cancel_timer(receiver);
                }
                self.pump(receiver);
            }
            AckSignal::FastRetransmit => {
                self.record(alloc::format!("t={now} {} fast-retransmit", receiver.label()));
                self.endpoint(receiver).tcp.on_loss(&cfg.tcp, LossKind::FastRetransmit);
                self.retransmit_oldest(receiver);
                let rto = self.rto_us(receiver);
                self.arm_timer(receiver, rto);
            }
            AckSignal::Duplicate | AckSignal::Ignored => {}
        }
    }

    fn handle_delivery(&mut self, pkt: Packet<Payload>) -> Result<(), HandshakeFailure> {
        let receiver = match pkt.direction {
            Direction::ClientToServer => Side::Server,
            Direction::ServerToClient => Side::Client,
        };
        let now = self.clock.now();

        if pkt.corrupted {
            match deliver_corrupt(&self.cfg.tcp, self.rng) {
                CorruptDisposition::Discard => {
                    self.record(alloc::format!(
                        "t={now} {} corrupt-discard id={}",
                        receiver.label(),
                        pkt.id
                    ));
                    return Ok(());
                }
                CorruptDisposition::PassThrough => {
                    if matches!(pkt.payload, Payload::Data { .. }) {
                        self.record(alloc::format!(
                            "t={now} {} corrupt-passthrough id={} -> abort",
                            receiver.label(),
                            pkt.id
                        ));
                        return Err(HandshakeFailure::HandshakeCorruptAbort);
                    }
                    // Control packets carry no TLS data; a slipped-through
                    // bit error still invalidates them.
                    return Ok(());
                }
            }
        }

        // Any client packet reaching the server acknowledges the SYN-ACK.
        if receiver == Side::Server
            && self.server_got_syn
            && !self.synack_acked
            && !matches!(pkt.payload, Payload::Syn)
        {
            self.synack_acked = true;
            if !self.synack_retransmitted {
                let sample = (now - self.synack_sent_at) as f64 / 1000.0;
                self.server.tcp.rtt_sample(&self.cfg.tcp, sample);
            }
            if !self.server.tcp.has_outstanding() {
                self.cancel_timer(Side::Server);
            }
        }

        match pkt.payload {
            Payload::Syn => {
                if receiver == Side::Server {
                    let first = !self.server_got_syn;
                    self.server_got_syn = true;
                    if first {
                        self.synack_sent_at = now;
                    } else {
                        self.synack_retransmitted = true;
                    }
                    // (Re)answer; duplicate SYNs indicate a lost SYN-ACK.
                    if !self.synack_acked {
                        self.send_packet(Side::Server, Payload::SynAck, 0);
                        if first {
                            let rto = self.rto_us(Side::Server);
                            self.arm_timer(Side::Server, rto);
                        }
                    }
                }
                Ok(())
            }
            Payload::SynAck => {
                if receiver == Side::Client && !self.client_established {
                    self.client_established = true;
                    self.established_at = now;
                    self.cancel_timer(Side::Client);
                    if !self.syn_retransmitted {
                        let sample = (now - self.syn_sent_at) as f64 / 1000.0;
                        self.client.tcp.rtt_sample(&self.cfg.tcp, sample);
                    }
                    self.record(alloc::format!("t={now} cli established"));
                    // The final ACK of the 3-way handshake piggybacks on the
                    // first data; key generation starts now.
                    let at = now + self.op_costs_us[0];
                    self.queue
                        .schedule(&self.clock, at, Event::OpDone { flight: 0 })
                        .expect("op scheduled in the past");
                }
                Ok(())
            }
            Payload::Data { seq, len } => {
                self.handle_data(receiver, seq, len);
                Ok(())
            }
            Payload::Ack { ack_seq } => {
                self.handle_ack(receiver, ack_seq);
                Ok(())
            }
        }
    }

    fn handle_timer(&mut self, side: Side, generation: u64) {
        {
            let ep = self.endpoint(side);
            if !ep.timer_armed || ep.timer_generation != generation {
                return;
            }
        }
        let now = self.clock.now();
        let cfg = self.cfg;
        if side == Side::Client && !self.client_established {
            // SYN retransmission with exponential backoff.
            self.syn_retransmitted = true;
            let ep = self.endpoint(Side::Client);
            ep.tcp.rto_ms = (ep.tcp.rto_ms * 2.0).min(cfg.tcp.max_rto_ms);
            self.record(alloc::format!("t={now} cli syn-rto"));
            self.send_packet(Side::Client, Payload::Syn, 0);
            let rto = self.rto_us(Side::Client);
            self.arm_timer(Side::Client, rto);
            return;
        }
        if side == Side::Server && !self.synack_acked && !self.server.tcp.has_outstanding() {
            self.synack_retransmitted = true;
            let ep = self.endpoint(Side::Server);
            ep.tcp.rto_ms = (ep.tcp.rto_ms * 2.0).min(cfg.tcp.max_rto_ms);
            self.record(alloc::format!("t={now} srv synack-rto"));
            self.send_packet(Side::Server, Payload::SynAck, 0);
            let rto = self.rto_us(Side::Server);
            self.arm_timer(Side::Server, rto);
            return;
        }
        if self.endpoint(side).tcp.has_outstanding() {
            self.record(alloc::format!("t={now} {} rto", side.label()));
            self.endpoint(side).tcp.on_loss(&cfg.tcp, LossKind::Rto);
            self.retransmit_oldest(side);
            let rto = self.rto_us(side);
            self.arm_timer(side, rto);
        } else {
            self.endpoint(side).timer_armed = false;
        }
    }

    fn handle_op_done(&mut self, flight: usize) {
        let now = self.clock.now();
        match flight {
            0 => {
                self.record(alloc::format!("t={now} cli keygen-done"));
                let bytes = self.client_hello_bytes;
                self.enqueue_flight(Side::Client, bytes);
            }
            1 => {
                self.record(alloc::format!("t={now} srv encaps-done"));
                let bytes = self.server_flight_bytes;
                self.enqueue_flight(Side::Server, bytes);
            }
            2 => {
                self.record(alloc::format!("t={now} cli decaps-done finished-emitted"));
                self.finished_emitted_at = Some(now);
                let bytes = self.finished_bytes;
                self.enqueue_flight(Side::Client, bytes);
            }
            _ => unreachable!("unknown flight index"),
        }
    }

    fn run(mut self) -> Result<f64, HandshakeFailure> {
        // Bracket opens at t=0 with the SYN.
        self.syn_sent_at = 0;
        self.send_packet(Side::Client, Payload::Syn, 0);
        let rto = self.rto_us(Side::Client);
        self.arm_timer(Side::Client, rto);

        loop {
            match self.queue.peek_time() {
                None => {
                    debug_assert!(false, "event queue drained before completion");
                    return Err(HandshakeFailure::HandshakeTimeout);
                }
                Some(t) if t > self.cfg.deadline_us => {
                    return self.deadline_outcome();
                }
                Some(_) => {
                    let ev = self.queue.pop(&mut self.clock).expect("peeked event vanished");
                    match ev {
                        Event::Deliver(pkt) => self.handle_delivery(pkt)?,
                        Event::Timer { side, generation } => self.handle_timer(side, generation),
                        Event::OpDone { flight } => self.handle_op_done(flight),
                    }
                    if self.complete {
                        let emitted = self
                            .finished_emitted_at
                            .expect("completed without emitting Finished");
                        return Ok((emitted - self.bracket_start()) as f64 / 1000.0);
                    }
                }
            }
        }
    }

    fn bracket_start(&self) -> u64 {
        if self.cfg.tcp.connect_included {
            0
        } else {
            self.established_at
        }
    }

    fn deadline_outcome(&self) -> Result<f64, HandshakeFailure> {
        // A closed bracket still counts if nothing can abort it anymore.
        if let Some(emitted) = self.finished_emitted_at {
            if self.cfg.tcp.corrupt_passthrough_prob == 0.0 {
                return Ok((emitted - self.bracket_start()) as f64 / 1000.0);
            }
        }
        if !self.client_established {
            Err(HandshakeFailure::ConnectTimeout)
        } else {
            Err(HandshakeFailure::HandshakeTimeout)
        }
    }
}

/// Simulates one handshake; returns the client-side bracket duration in
/// milliseconds or the terminal failure.
pub fn simulate_handshake(
    transcript: &Transcript,
    cfg: &SimConfig,
    to_server: &LinkProfile,
    to_client: &LinkProfile,
    rng: &mut RunRng,
) -> Result<f64, HandshakeFailure> {
    simulate_handshake_traced(transcript, cfg, to_server, to_client, rng, None)
}

/// As [`simulate_handshake`], optionally appending a textual event trace.
pub fn simulate_handshake_traced(
    transcript: &Transcript,
    cfg: &SimConfig,
    to_server: &LinkProfile,
    to_client: &LinkProfile,
    rng: &mut RunRng,
    trace: Option<&mut Vec<String>>,
) -> Result<f64, HandshakeFailure> {
    debug_assert!(transcript.flights.len() == 3);
    let op_costs = OpCosts {
        keygen_ms: transcript.flights[0].ops_before_send.iter().map(|(_, c)| c).sum(),
        encaps_ms: transcript.flights[1].ops_before_send.iter().map(|(_, c)| c).sum(),
        decaps_ms: transcript.flights[2].ops_before_send.iter().map(|(_, c)| c).sum(),
    };
    let sim = HandshakeSim {
        cfg,
        clock: SimClock::new(),
        queue: EventQueue::new(),
        rng,
        profiles: [to_server, to_client],
        links: [LinkState::new(), LinkState::new()],
        client: Endpoint::new(&cfg.tcp),
        server: Endpoint::new(&cfg.tcp),
        client_hello_bytes: transcript.flights[0].payload_bytes,
        server_flight_bytes: transcript.flights[1].payload_bytes,
        finished_bytes: transcript.flights[2].payload_bytes,
        op_costs_us: [
            ms_to_us(op_costs.keygen_ms),
            ms_to_us(op_costs.encaps_ms),
            ms_to_us(op_costs.decaps_ms),
        ],
        syn_sent_at: 0,
        syn_retransmitted: false,
        synack_sent_at: 0,
        synack_retransmitted: false,
        server_got_syn: false,
        client_established: false,
        established_at: 0,
        synack_acked: false,
        encaps_scheduled: false,
        decaps_scheduled: false,
        finished_emitted_at: None,
        complete: false,
        trace,
    };
    sim.run()
}
