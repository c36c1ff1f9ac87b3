//! Seeded even division of index sets.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Derives an independent stream seed for `(seed, a, b)`.
pub(crate) fn stream_seed(seed: u64, a: u64, b: u64) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix(splitmix(splitmix(seed) ^ a) ^ b)
}

/// Shuffles `items` with `seed` and deals them into `parts` contiguous blocks
/// whose sizes differ by at most one, larger blocks first. Each block is
/// returned sorted.
pub(crate) fn deal(mut items: Vec<usize>, parts: usize, seed: u64) -> Vec<Vec<usize>> {
    debug_assert!(parts >= 1 && parts <= items.len().max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    items.shuffle(&mut rng);
    let (base, extra) = (items.len() / parts, items.len() % parts);
    let mut out = Vec::with_capacity(parts);
    let mut rest = items.as_slice();
    for p in 0..parts {
        let take = base + usize::from(p < extra);
        let (head, tail) = rest.split_at(take);
        let mut block = head.to_vec();
        block.sort_unstable();
        out.push(block);
        rest = tail;
    }
    out
}

/// Seeded even division of `0..n` into `p0` subsets of size `ceil(n/p0)` or
/// `floor(n/p0)`.
pub fn initial_partition(n: usize, p0: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if p0 == 0 || p0 > n {
        return Err(Error::invalid(format!("cannot divide {n} objects into {p0} subsets")));
    }
    Ok(deal((0..n).collect(), p0, stream_seed(seed, 0, 0)))
}

/// Splits every subset larger than `beta` into `ceil(s / beta)` even parts.
/// Smaller subsets pass through untouched and keep their position.
pub fn split(subsets: Vec<Vec<usize>>, beta: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if beta < 2 {
        return Err(Error::invalid(format!("occupancy cap must be at least 2, got {beta}")));
    }
    let mut out = Vec::with_capacity(subsets.len());
    for (p, subset) in subsets.into_iter().enumerate() {
        let s = subset.len();
        if s <= beta {
            out.push(subset);
            continue;
        }
        let parts = s.div_ceil(beta);
        out.extend(deal(subset, parts, stream_seed(seed, 1, p as u64)));
    }
    Ok(out)
}
