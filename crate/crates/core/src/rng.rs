//! Seed lineage.
//!
//! Every random draw in a run comes from a ChaCha8 stream keyed by
//! `(master seed, stream tag, agent id, timestep)`. The key is folded into a
//! 64-bit seed with [`derive_seed`]:
//!
//! ```text
//! h0 = mix64(master ^ 0x9E3779B97F4A7C15)
//! h_{k+1} = mix64(h_k ^ mix64(part_k + (k + 1) * 0x9E3779B97F4A7C15))
//! ```
//!
//! where `mix64` is the SplitMix64 finaliser. Because a stream depends only on
//! its key, citizens can be processed in any order or on any number of threads
//! and still see the same numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut h = mix64(base ^ GOLDEN);
    for (k, &p) in parts.iter().enumerate() {
        let salt = (k as u64 + 1).wrapping_mul(GOLDEN);
        h = mix64(h ^ mix64(p.wrapping_add(salt)));
    }
    h
}

/// Named sub-streams. The discriminants are part of the seed lineage and must
/// never be renumbered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Stream {
    Population = 1,
    Network = 2,
    MediaNews = 3,
    MediaExposure = 4,
    Founding = 5,
    Join = 6,
    EngoSelect = 7,
    EngoSignal = 8,
    SignalExposure = 9,
    ProtestCall = 10,
    ProtestCallExposure = 11,
    ActionProtest = 12,
    DisruptiveCall = 13,
    DisruptiveCallExposure = 14,
    DisruptiveProtest = 15,
    PeerAdjust = 16,
    SeedMembers = 17,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedTree {
    master: u64,
}

impl SeedTree {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    pub fn seed_for(&self, stream: Stream, agent: u64, timestep: u64) -> u64 {
        derive_seed(self.master, &[stream as u64, agent, timestep])
    }

    pub fn stream(&self, stream: Stream, agent: u64, timestep: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed_for(stream, agent, timestep))
    }
}
