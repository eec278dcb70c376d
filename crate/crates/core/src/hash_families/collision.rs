use num_rational::Ratio;

use crate::algebra::BigNat;
use crate::error::{Error, Result};

use super::descriptor::{Alphabet, HashFamilyDescriptor, Message};
use super::eval::hash_eval_unchecked;

/// Largest message space the exhaustive routines will enumerate.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

/// Number of messages, if it does not exceed `limit`.
pub(crate) fn message_space_size(fam: &HashFamilyDescriptor, limit: u64) -> Result<u64> {
    let mut size: u64 = 1;
    let factors: Vec<u64> = match fam.alphabet() {
        Alphabet::Field(q) => vec![q.get(); fam.k()],
        Alphabet::Crt(_) => fam.message_primes().expect("crt").iter().map(|p| p.get()).collect(),
    };
    for f in factors {
        size = size.checked_mul(f).filter(|&s| s <= limit).ok_or_else(|| {
            Error::Capacity(format!("message space exceeds the enumeration limit {limit}"))
        })?;
    }
    Ok(size)
}

/// The `index`-th message in lexicographic order. Polynomial messages compare
/// coefficient tuples left to right (`x_0` most significant); Karp-Rabin
/// messages compare as naturals.
pub(crate) fn message_at(fam: &HashFamilyDescriptor, index: u64) -> Message {
    match fam.alphabet() {
        Alphabet::Field(q) => {
            let q = q.get();
            let mut rest = index;
            let mut sym = vec![0u64; fam.k()];
            for slot in sym.iter_mut().rev() {
                *slot = rest % q;
                rest /= q;
            }
            Message::Symbols(sym)
        }
        Alphabet::Crt(_) => Message::Natural(BigNat::from_u64(index)),
    }
}

/// Every message of a small family in lexicographic order.
pub fn enumerate_messages(
    fam: &HashFamilyDescriptor,
    limit: u64,
) -> Result<impl Iterator<Item = Message> + '_> {
    let size = message_space_size(fam, limit)?;
    Ok((0..size).map(move |idx| message_at(fam, idx)))
}

/// Exact `max_{x != y} |{i : h_i(x) = h_i(y)}| / n` for a small family.
///
/// Both families are translation invariant: polynomial hashes are linear, and
/// `x = y mod p` iff `p` divides `|x - y|`. The maximum over pairs therefore
/// equals the maximum over nonzero differences of the number of coordinates
/// where the difference hashes to zero.
pub fn collision_probability_exact(fam: &HashFamilyDescriptor) -> Result<Ratio<u64>> {
    let size = message_space_size(fam, ENUMERATION_LIMIT)?;
    let n = fam.n();
    let max_agree = (1..size)
        .map(|idx| {
            let d = message_at(fam, idx);
            (1..=n).filter(|&i| hash_eval_unchecked(fam, &d, i).value() == 0).count()
        })
        .max()
        .unwrap_or(0);
    Ok(Ratio::new(max_agree as u64, n as u64))
}
