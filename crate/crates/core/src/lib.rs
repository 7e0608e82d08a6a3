//! Deterministic simulation core for benchmarking TLS 1.3 handshakes that
//! carry post-quantum KEM payloads over an emulated impaired network.
//!
//! The crate is `no_std` (alloc required) and contains only the algorithmic
//! machinery: the event engine and seeded randomness, the netem-style link
//! emulator, the Reno-style transport, the KEM catalog with hybrid
//! composition, the handshake transcript model and its duration simulation,
//! the summary statistics, and the least-squares model fits. File formats,
//! scenario handling and the CLI live in the companion `pqshake` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod engine;
pub mod fit;
pub mod handshake;
pub mod kem;
pub mod link;
pub mod rng;
pub mod sim;
pub mod stats;
pub mod tcp;

pub use engine::{EventQueue, SchedulingInPast, SimClock, StopReason};
pub use handshake::{build_transcript, FlightProfile, Transcript, TranscriptError};
pub use kem::{Catalog, CostModel, Family, KemSpec, OpCosts, Role};
pub use link::{Direction, LinkProfile, LinkState, Packet, Rate, TransitOutcome};
pub use rng::{RunRng, StreamKey};
pub use sim::{simulate_handshake, HandshakeFailure, SimConfig};
pub use stats::SummaryStats;
pub use tcp::TcpConfig;

/// Largest link-layer packet carried by the emulated link, in bytes.
pub const MTU: usize = 1500;

/// IP + TCP header bytes accounted per packet on the wire.
pub const HEADER_BYTES: usize = 40;
