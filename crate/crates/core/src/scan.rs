//! Prefix sums and integer sorting.

use crate::error::{contract, Error, Result};
use crate::par;
use crate::work::WorkCounter;

const SCAN_BLOCK: usize = 8192;

/// Inclusive prefix sum: `out[i] = values[0] + ... + values[i]`.
///
/// Blocked two-pass scan. Block totals are combined sequentially, so the
/// result is the same at any thread count.
pub fn prefix_sum(values: &[u64]) -> Result<Vec<u64>> {
    let blocks = values.len().div_ceil(SCAN_BLOCK);
    let totals: Vec<Option<u64>> = par::map_range(blocks, |b| {
        let lo = b * SCAN_BLOCK;
        let hi = (lo + SCAN_BLOCK).min(values.len());
        values[lo..hi]
            .iter()
            .try_fold(0u64, |acc, &x| acc.checked_add(x))
    });
    let mut base = Vec::with_capacity(blocks);
    let mut run = 0u64;
    for t in totals {
        let t = t.ok_or(Error::Overflow("prefix_sum"))?;
        base.push(run);
        run = run.checked_add(t).ok_or(Error::Overflow("prefix_sum"))?;
    }
    let mut out = vec![0u64; values.len()];
    let mut chunks: Vec<&mut [u64]> = out.chunks_mut(SCAN_BLOCK).collect();
    par::for_each_mut(&mut chunks, |b, chunk| {
        let mut acc = base[b];
        let lo = b * SCAN_BLOCK;
        for (j, slot) in chunk.iter_mut().enumerate() {
            acc += values[lo + j];
            *slot = acc;
        }
    });
    Ok(out)
}

/// Exclusive offsets from counts: length `counts.len() + 1`, starting at 0.
pub fn offsets_from_counts(counts: &[u64], work: &WorkCounter) -> Result<Vec<usize>> {
    work.charge("prefix_sum", counts.len() as u64);
    let inc = prefix_sum(counts)?;
    let mut out = Vec::with_capacity(counts.len() + 1);
    out.push(0usize);
    for x in inc {
        out.push(usize::try_from(x).map_err(|_| Error::Overflow("offsets"))?);
    }
    Ok(out)
}

pub(crate) fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Largest admissible key for bound `n`: `ceil(log2 n)`, at least 1.
pub fn small_key_limit(n: u64) -> u32 {
    ceil_log2(n).max(1)
}

/// Stable sort of keys in `[1, ceil(log2 n)]` by binary digits.
///
/// Each pass is a stable split on one bit: entries with a zero bit keep their
/// relative order and go first, entries with a one bit go after them at the
/// offset given by their rank among the ones. Ranks come from prefix sums.
/// The number of passes is the bit length of the largest admissible key.
pub fn radix_sort_small_keys<P: Clone + Send + Sync>(
    keys: &[u32],
    payloads: &[P],
    n: u64,
    work: &WorkCounter,
) -> Result<Vec<(u32, P)>> {
    if keys.len() != payloads.len() {
        return Err(contract("keys and payloads differ in length"));
    }
    let limit = small_key_limit(n);
    if let Some(&bad) = keys.iter().find(|&&k| k < 1 || k > limit) {
        return Err(contract(format!("key {bad} outside [1, {limit}]")));
    }
    let passes = 32 - limit.leading_zeros();
    let mut cur: Vec<(u32, P)> = keys.iter().copied().zip(payloads.iter().cloned()).collect();
    for bit in 0..passes {
        let ones: Vec<u64> = par::map_slice(&cur, |(k, _)| ((k >> bit) & 1) as u64);
        let rank = prefix_sum(&ones)?;
        work.charge("sort", 2 * cur.len() as u64);
        let total_ones = rank.last().copied().unwrap_or(0) as usize;
        let zeros = cur.len() - total_ones;
        let dest: Vec<usize> = par::map_range(cur.len(), |i| {
            let r = rank[i] as usize;
            if ones[i] == 1 {
                zeros + r - 1
            } else {
                i - r
            }
        });
        let mut next: Vec<Option<(u32, P)>> = vec![None; cur.len()];
        for (i, item) in cur.into_iter().enumerate() {
            next[dest[i]] = Some(item);
        }
        cur = next.into_iter().map(|x| x.unwrap()).collect();
    }
    Ok(cur)
}

const DIGIT_BITS: u32 = 11;

/// Stable LSD radix sort of `(key, payload)` pairs by a 64-bit key.
pub fn radix_sort_u64<P: Copy + Send + Sync + Default>(
    items: &mut Vec<(u64, P)>,
    work: &WorkCounter,
) {
    let max = items.iter().map(|x| x.0).max().unwrap_or(0);
    let bits = 64 - max.leading_zeros();
    let passes = bits.div_ceil(DIGIT_BITS);
    let buckets = 1usize << DIGIT_BITS;
    let mut buf = vec![(0u64, P::default()); items.len()];
    for pass in 0..passes {
        let shift = pass * DIGIT_BITS;
        let mut count = vec![0usize; buckets + 1];
        for &(k, _) in items.iter() {
            count[((k >> shift) as usize & (buckets - 1)) + 1] += 1;
        }
        for i in 0..buckets {
            count[i + 1] += count[i];
        }
        for &item in items.iter() {
            let d = (item.0 >> shift) as usize & (buckets - 1);
            buf[count[d]] = item;
            count[d] += 1;
        }
        std::mem::swap(items, &mut buf);
        work.charge("sort", items.len() as u64);
    }
}
