use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable hash of `(master_seed, domain, trial_index, agent_index)`.
pub fn stream_seed(master_seed: u64, domain: u64, trial_index: u64, agent_index: u64) -> u64 {
    mix(mix(mix(mix(master_seed) ^ domain) ^ trial_index) ^ agent_index)
}

/// Domain tags keep the protocol and baseline streams apart.
pub const PROTOCOL_DOMAIN: u64 = 0x434F_4143_5449_4F4E;
pub const BASELINE_DOMAIN: u64 = 0x4241_5345_4C49_4E45;

pub fn agent_rng(master_seed: u64, domain: u64, trial_index: u64, agent_index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(master_seed, domain, trial_index, agent_index))
}
