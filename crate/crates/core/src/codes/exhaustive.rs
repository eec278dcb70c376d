use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hash_families::{
    hash_eval_unchecked, message_at, message_space_size, HashFamilyDescriptor, Message,
    ENUMERATION_LIMIT,
};

use super::rs::{rs_encode_systematic, SystematicRSCode};
use super::{encode_unchecked, Codeword, ReceivedWord};

/// Largest message space [`min_distance_exhaustive`] will enumerate.
pub const DISTANCE_ENUMERATION_LIMIT: u64 = 100_000;

/// Disagreements between a codeword and a received word; erased positions
/// count as disagreements.
pub fn hamming_distance(c: &Codeword, z: &ReceivedWord) -> usize {
    debug_assert_eq!(c.len(), z.len());
    c.0.iter().zip(&z.0).filter(|(a, b)| Some(**a) != **b).count()
}

/// Minimum distance of `H`, by enumerating nonzero differences. Both
/// families are translation invariant (see
/// [`collision_probability_exact`](crate::hash_families::collision_probability_exact)),
/// so this is the minimum weight of `H(d)` over `d != 0`.
pub fn min_distance_exhaustive(fam: &HashFamilyDescriptor) -> Result<usize> {
    let size = message_space_size(fam, DISTANCE_ENUMERATION_LIMIT)?;
    let n = fam.n();
    Ok((1..size)
        .into_par_iter()
        .map(|idx| {
            let d = message_at(fam, idx);
            (1..=n).filter(|&i| hash_eval_unchecked(fam, &d, i).value() != 0).count()
        })
        .min()
        .unwrap_or(n))
}

/// Minimum distance of a systematic RS code (linear, so minimum nonzero weight).
pub fn rs_min_distance_exhaustive(code: &SystematicRSCode) -> Result<usize> {
    let q = code.field().get();
    let m = code.message_len() as u32;
    let size = q
        .checked_pow(m)
        .filter(|&s| s <= DISTANCE_ENUMERATION_LIMIT)
        .ok_or_else(|| Error::Capacity("RS message space exceeds the enumeration limit".into()))?;
    let mut best = code.block_len();
    for idx in 1..size {
        let v: Vec<u64> = (0..m).map(|j| idx / q.pow(j) % q).collect();
        let cw = rs_encode_systematic(code, &v)?;
        best = best.min(cw.0.iter().filter(|&&s| s != 0).count());
    }
    Ok(best)
}

/// Largest error count `e` with `e <= (1 - sqrt(1 - d/n)) n`, computed in
/// integers: `(n - e)^2 >= n (n - d)`.
pub fn johnson_radius(n: usize, d: usize) -> usize {
    assert!(d <= n, "distance {d} exceeds block length {n}");
    let (n, d) = (n as u128, d as u128);
    let target = n * (n - d);
    // Smallest s = n - e with s^2 >= target.
    let mut s = (target as f64).sqrt() as u128;
    while s * s < target {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= target {
        s -= 1;
    }
    (n - s) as usize
}

/// List-size bound `2 * sum q_i` certified at the Johnson radius.
pub fn johnson_list_bound(fam: &HashFamilyDescriptor) -> u64 {
    2 * fam.alphabet_sum()
}

/// All messages whose codeword lies within Hamming distance `radius` of `z`,
/// in lexicographic message order.
pub fn brute_force_list_decode(
    fam: &HashFamilyDescriptor,
    z: &ReceivedWord,
    radius: usize,
) -> Result<Vec<Message>> {
    if z.len() != fam.n() {
        return Err(Error::Usage(format!("received {} symbols, family has n = {}", z.len(), fam.n())));
    }
    let size = message_space_size(fam, ENUMERATION_LIMIT)?;
    Ok((0..size)
        .into_par_iter()
        .filter_map(|idx| {
            let x = message_at(fam, idx);
            (hamming_distance(&encode_unchecked(fam, &x), z) <= radius).then_some(x)
        })
        .collect())
}
