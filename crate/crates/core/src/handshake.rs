//! TLS 1.3 handshake transcript: three flights with byte sizes derived from
//! the chosen KEM, plus the KEM operation placed before or after each flight.
//!
//! Flights are opaque byte blobs; record framing and AEAD overhead are folded
//! into the base constants. The client never authenticates and the group is
//! always guessed correctly, so no HelloRetryRequest appears.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::kem::{CostModel, KemError, KemSpec, OpCosts};
use crate::link::Direction;

/// A key_share entry is capped at 2^16 - 1 bytes.
pub const KEY_SHARE_LIMIT: usize = u16::MAX as usize;

/// Byte sizes of the fixed handshake content around the KEM material.
#[derive(Debug, Clone)]
pub struct FlightProfile {
    /// ClientHello without the key_share value.
    pub client_hello_base_bytes: usize,
    /// ServerHello 128 + EncryptedExtensions 64 + Certificate 1006 +
    /// CertificateVerify 200 + Finished 52, without the key_share value.
    pub server_flight_base_bytes: usize,
    pub client_finished_bytes: usize,
}

impl Default for FlightProfile {
    fn default() -> Self {
        Self {
            client_hello_base_bytes: 250,
            server_flight_base_bytes: 1450,
            client_finished_bytes: 52,
        }
    }
}

impl FlightProfile {
    pub fn validate(&self) -> Result<(), &'static str> {
        if self.client_hello_base_bytes == 0
            || self.server_flight_base_bytes == 0
            || self.client_finished_bytes == 0
        {
            return Err("flight profile sizes must all be > 0");
        }
        Ok(())
    }
}

/// KEM operation attached to a flight boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KemOp {
    KeyGen,
    Encaps,
    Decaps,
}

/// One handshake flight.
#[derive(Debug, Clone)]
pub struct Flight {
    pub direction: Direction,
    pub payload_bytes: usize,
    /// Processing performed by the sender immediately before this flight
    /// is handed to the transport.
    pub ops_before_send: Vec<(KemOp, f64)>,
}

/// Ordered flights of one handshake plus the measured bracket definition:
/// the bracket starts when the client initiates (including the TCP connect
/// when configured) and ends the moment the client emits its Finished,
/// before any server processing of it.
#[derive(Debug, Clone)]
pub struct Transcript {
    pub algorithm_id: String,
    pub flights: Vec<Flight>,
}

impl Transcript {
    pub fn client_hello_bytes(&self) -> usize {
        self.flights[0].payload_bytes
    }

    pub fn server_flight_bytes(&self) -> usize {
        self.flights[1].payload_bytes
    }
}

/// Transcript construction failure.
#[derive(Debug, Clone, PartialEq)]
pub enum TranscriptError {
    /// The (possibly concatenated) key share exceeds 2^16 - 1 bytes.
    KeyShareTooLarge { id: String, pk_bytes: usize },
    Kem(KemError),
}

impl fmt::Display for TranscriptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranscriptError::KeyShareTooLarge { id, pk_bytes } => write!(
                f,
                "{id}: public key of {pk_bytes} bytes exceeds the key_share limit of {KEY_SHARE_LIMIT}"
            ),
            TranscriptError::Kem(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for TranscriptError {}

impl From<KemError> for TranscriptError {
    fn from(e: KemError) -> Self {
        TranscriptError::Kem(e)
    }
}

/// Builds the three-flight transcript for a KEM: ClientHello carries the
/// public key, the server flight carries the ciphertext, the client Finished
/// closes the bracket. KeyGen runs before flight 1 on the client, Encaps
/// before flight 2 on the server, Decaps before flight 3 on the client.
pub fn build_transcript(
    kem: &KemSpec,
    costs: &CostModel,
    fp: &FlightProfile,
) -> Result<Transcript, TranscriptError> {
    if kem.pk_bytes > KEY_SHARE_LIMIT || kem.ct_bytes > KEY_SHARE_LIMIT {
        return Err(TranscriptError::KeyShareTooLarge {
            id: kem.id.clone(),
            pk_bytes: kem.pk_bytes,
        });
    }
    let op_costs: OpCosts = costs.resolve(kem)?;
    let flights = alloc::vec![
        Flight {
            direction: Direction::ClientToServer,
            payload_bytes: fp.client_hello_base_bytes + kem.pk_bytes,
            ops_before_send: alloc::vec![(KemOp::KeyGen, op_costs.keygen_ms)],
        },
        Flight {
            direction: Direction::ServerToClient,
            payload_bytes: fp.server_flight_base_bytes + kem.ct_bytes,
            ops_before_send: alloc::vec![(KemOp::Encaps, op_costs.encaps_ms)],
        },
        Flight {
            direction: Direction::ClientToServer,
            payload_bytes: fp.client_finished_bytes,
            ops_before_send: alloc::vec![(KemOp::Decaps, op_costs.decaps_ms)],
        },
    ];
    Ok(Transcript {
        algorithm_id: kem.id.clone(),
        flights,
    })
}
