//! Seed derivation helpers.
//!
//! Every random stream in the crate is keyed from a single master seed.
//! Sub-seeds are derived with the SplitMix64 finalizer so that neighbouring
//! indices produce unrelated streams.

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from a parent seed and a sequence of indices.
pub fn derive(parent: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(parent), |acc, &i| {
        splitmix64(acc ^ splitmix64(i))
    })
}
