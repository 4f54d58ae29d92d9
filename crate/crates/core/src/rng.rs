//! Counter-based random draws.
//!
//! Every draw is a pure function of `(seed, key)`, so results do not depend
//! on evaluation order, thread count or platform. The mixing function is the
//! SplitMix64 finalizer; changing it changes every materialized drop set and
//! duplicate index, hence the version tag.

/// Name and version of the generator, recorded in model files.
pub const GENERATOR: &str = "splitmix64-keyed/v1";

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Key domains keep independent uses of one seed apart.
pub(crate) const DOMAIN_DROP_SET: u64 = 1;
pub(crate) const DOMAIN_DUPLICATE: u64 = 2;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes `seed` and `key` into 64 uniformly distributed bits.
pub fn keyed_u64(seed: u64, key: &[u64]) -> u64 {
    let mut h = mix(seed.wrapping_add(GOLDEN));
    for &k in key {
        h = mix(h ^ mix(k.wrapping_add(GOLDEN)).wrapping_add(GOLDEN));
    }
    h
}

/// Uniform draw from `0..n` keyed on `(seed, key)`, by rejection so there is
/// no modulo bias.
pub fn keyed_below(seed: u64, key: &[u64], n: u64) -> u64 {
    assert!(n > 0, "empty range");
    let zone = u64::MAX - (u64::MAX % n);
    let mut buf = Vec::with_capacity(key.len() + 1);
    buf.extend_from_slice(key);
    buf.push(0);
    for attempt in 0u64.. {
        *buf.last_mut().unwrap() = attempt;
        let v = keyed_u64(seed, &buf);
        if v < zone {
            return v % n;
        }
    }
    unreachable!()
}

/// Draws `k` items from `pool` uniformly without replacement (partial
/// Fisher-Yates over the pool order).
pub fn sample_without_replacement<T: Clone>(
    seed: u64,
    domain: u64,
    pool: &[T],
    k: usize,
) -> Vec<T> {
    assert!(k <= pool.len());
    let mut items = pool.to_vec();
    for i in 0..k {
        let j = i + keyed_below(seed, &[domain, i as u64], (items.len() - i) as u64) as usize;
        items.swap(i, j);
    }
    items.truncate(k);
    items
}
