//! Seeded, replayable randomness.
//!
//! Every measurement owns an independent stream derived from the master seed
//! and a `(scenario_row, algorithm, measurement)` key through a splitmix-based
//! key expansion into ChaCha. Identical `(master_seed, key)` pairs always
//! yield identical draw sequences; distinct keys yield independent streams,
//! which is what lets measurement cells run on a worker pool without sharing
//! any mutable state.

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

/// Identifies one measurement's random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub scenario_row: u64,
    /// FNV-1a hash of the algorithm id (see [`StreamKey::for_algorithm`]).
    pub algorithm: u64,
    pub measurement: u64,
}

impl StreamKey {
    pub fn new(scenario_row: u64, algorithm_id: &str, measurement: u64) -> Self {
        Self {
            scenario_row,
            algorithm: fnv1a(algorithm_id.as_bytes()),
            measurement,
        }
    }

    /// Alias of [`StreamKey::new`] kept for call-site readability.
    pub fn for_algorithm(scenario_row: u64, algorithm_id: &str, measurement: u64) -> Self {
        Self::new(scenario_row, algorithm_id, measurement)
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-run random stream with uniform and normal draws.
#[derive(Debug, Clone)]
pub struct RunRng {
    inner: ChaCha12Rng,
}

impl RunRng {
    pub fn new(master_seed: u64, key: StreamKey) -> Self {
        // Keyed expansion: absorb the seed and the stream key, then squeeze
        // the 32-byte ChaCha key from the mixed state.
        let mut state = master_seed ^ 0x6a09_e667_f3bc_c908;
        let _ = splitmix64(&mut state);
        state ^= key.scenario_row.wrapping_mul(0x9e37_79b9_7f4a_7c15);
        let _ = splitmix64(&mut state);
        state ^= key.algorithm;
        let _ = splitmix64(&mut state);
        state ^= key.measurement.wrapping_mul(0xc2b2_ae3d_27d4_eb4f);

        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        Self {
            inner: ChaCha12Rng::from_seed(seed),
        }
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        // 53 random mantissa bits.
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// True with probability `pct / 100`. Draws exactly one uniform.
    pub fn percent(&mut self, pct: f64) -> bool {
        self.uniform() * 100.0 < pct
    }

    /// Normal draw with the requested moments (Box-Muller).
    ///
    /// A zero standard deviation returns `mean` exactly and consumes no
    /// stream state.
    pub fn normal(&mut self, mean: f64, stddev: f64) -> f64 {
        debug_assert!(stddev >= 0.0);
        if stddev == 0.0 {
            return mean;
        }
        let u1 = loop {
            let u = self.uniform();
            if u > 0.0 {
                break u;
            }
        };
        let u2 = self.uniform();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let theta = 2.0 * core::f64::consts::PI * u2;
        mean + stddev * r * libm::cos(theta)
    }
}
