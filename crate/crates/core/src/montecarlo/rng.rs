//! Counter-based substreams: every random quantity is addressed by
//! `(seed, trial, purpose, key)` so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Fading = 1,
    Noise0 = 2,
    Noise1 = 3,
    /// Fading draws used to average analytic curves.
    AnalyticFading = 4,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent generator for one `(seed, trial, purpose, key)` address.
pub fn substream(seed: u64, trial: u64, purpose: Purpose, key: u64) -> ChaCha8Rng {
    let mut h = splitmix(seed);
    h = splitmix(h ^ trial);
    h = splitmix(h ^ purpose as u64);
    h = splitmix(h ^ key);
    let mut bytes = [0u8; 32];
    let mut s = h;
    for chunk in bytes.chunks_mut(8) {
        s = splitmix(s);
        chunk.copy_from_slice(&s.to_le_bytes());
    }
    ChaCha8Rng::from_seed(bytes)
}
