//! Counter-based sub-seed derivation.

/// SplitMix64 finalizer; a bijection on u64.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Sub-seed for `(run_index, channel_index)` under `master_seed`.
///
/// For a fixed master seed the map is injective over all run and channel
/// indices below 2^32: the pair is packed into one word and passed through a
/// keyed bijection.
pub fn seed_stream(master_seed: u64, run_index: u32, channel_index: u32) -> u64 {
    let counter = (run_index as u64) << 32 | channel_index as u64;
    let key = mix(master_seed ^ 0x9e37_79b9_7f4a_7c15);
    mix(mix(counter).wrapping_add(key) ^ key.rotate_left(17))
}
