use std::cmp::Ordering;

use crate::error::{Error, Result};

use super::field::{FieldElement, PrimeModulus};

/// Width of one streamed digit; the digit base is `2^DIGIT_BITS`.
pub const DIGIT_BITS: u32 = 32;

/// Arbitrary-precision natural number, little-endian `u32` limbs with no
/// trailing zero limb. Zero is the empty limb vector.
///
/// Only the operations the CRT message space needs are provided.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BigNat {
    limbs: Vec<u32>,
}

impl BigNat {
    pub fn zero() -> Self {
        BigNat { limbs: Vec::new() }
    }

    pub fn from_u64(v: u64) -> Self {
        BigNat::from_limbs(vec![v as u32, (v >> 32) as u32])
    }

    pub fn from_limbs(mut limbs: Vec<u32>) -> Self {
        while limbs.last() == Some(&0) {
            limbs.pop();
        }
        BigNat { limbs }
    }

    /// Parses a big-endian byte string.
    pub fn from_be_bytes(bytes: &[u8]) -> Self {
        let limbs = bytes
            .rchunks(4)
            .map(|chunk| chunk.iter().fold(0u32, |acc, &b| (acc << 8) | b as u32))
            .collect();
        BigNat::from_limbs(limbs)
    }

    /// Minimal big-endian encoding; zero encodes as the empty string.
    pub fn to_be_bytes(&self) -> Vec<u8> {
        let mut out: Vec<u8> = self.limbs.iter().rev().flat_map(|l| l.to_be_bytes()).collect();
        let lead = out.iter().take_while(|&&b| b == 0).count();
        out.drain(..lead);
        out
    }

    pub fn limbs(&self) -> &[u32] {
        &self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0] as u64),
            2 => Some(self.limbs[0] as u64 | (self.limbs[1] as u64) << 32),
            _ => None,
        }
    }

    pub fn bit_len(&self) -> u64 {
        match self.limbs.last() {
            None => 0,
            Some(&top) => (self.limbs.len() as u64 - 1) * 32 + (32 - top.leading_zeros()) as u64,
        }
    }

    pub fn bit(&self, i: u64) -> bool {
        self.limbs
            .get((i / 32) as usize)
            .is_some_and(|l| (l >> (i % 32)) & 1 == 1)
    }

    /// Base-2^32 digits, most significant first, as consumed by
    /// [`bignat_mod_stream`].
    pub fn digits_msd_first(&self) -> impl Iterator<Item = u64> + '_ {
        self.limbs.iter().rev().map(|&l| l as u64)
    }

    /// `self * m + a` in place.
    pub fn mul_add_small(&mut self, m: u64, a: u64) {
        let mut carry = a as u128;
        for limb in self.limbs.iter_mut() {
            let t = *limb as u128 * m as u128 + carry;
            *limb = t as u32;
            carry = t >> 32;
        }
        while carry > 0 {
            self.limbs.push(carry as u32);
            carry >>= 32;
        }
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    /// `self mod m` for a word-sized modulus.
    pub fn rem_small(&self, m: u64) -> u64 {
        debug_assert!(m > 0);
        self.limbs
            .iter()
            .rev()
            .fold(0u128, |acc, &l| ((acc << 32) | l as u128) % m as u128) as u64
    }

    /// Product of the given moduli.
    pub fn product<I: IntoIterator<Item = u64>>(factors: I) -> Self {
        let mut acc = BigNat::from_u64(1);
        for f in factors {
            acc.mul_add_small(f, 0);
        }
        acc
    }
}

impl PartialOrd for BigNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigNat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

/// Reduces `x` modulo `p` from its base-2^32 digits, most significant first,
/// holding a single residue of state.
pub fn bignat_mod_stream<I>(digits: I, p: PrimeModulus) -> Result<FieldElement>
where
    I: IntoIterator<Item = u64>,
{
    let base = (1u64 << DIGIT_BITS) % p.get();
    let mut acc = 0u64;
    for d in digits {
        if d >> DIGIT_BITS != 0 {
            return Err(Error::Malformed(format!("digit {d} is not below 2^32")));
        }
        acc = p.add(p.mul(acc, base), d % p.get());
    }
    Ok(p.element(acc))
}

/// Smallest natural congruent to `residues[i]` modulo `moduli[i]` for all `i`
/// (Garner's mixed-radix reconstruction). Moduli must be pairwise coprime.
pub fn crt_reconstruct(residues: &[u64], moduli: &[PrimeModulus]) -> Result<BigNat> {
    if residues.len() != moduli.len() {
        return Err(Error::Usage(format!(
            "{} residues for {} moduli",
            residues.len(),
            moduli.len()
        )));
    }
    // Mixed-radix digits: x = c0 + c1 p0 + c2 p0 p1 + ...
    let mut digits: Vec<u64> = Vec::with_capacity(moduli.len());
    for (i, (&r, &p)) in residues.iter().zip(moduli).enumerate() {
        if r >= p.get() {
            return Err(Error::Malformed(format!("{r} is not a residue modulo {p}")));
        }
        // Value of the partial sum modulo p, and the running radix modulo p.
        let mut partial = 0u64;
        let mut radix = 1 % p.get();
        for (j, &c) in digits.iter().enumerate() {
            partial = p.add(partial, p.mul(c % p.get(), radix));
            radix = p.mul(radix, moduli[j].get() % p.get());
        }
        let inv = p
            .inv(radix)
            .map_err(|_| Error::Usage(format!("modulus {p} repeats at position {i}")))?;
        digits.push(p.mul(p.sub(r, partial), inv));
    }
    let mut x = BigNat::zero();
    for (c, p) in digits.iter().zip(moduli).rev() {
        x.mul_add_small(p.get(), *c);
    }
    Ok(x)
}
