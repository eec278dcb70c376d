use std::fmt;

use crate::error::{Error, Result};

use super::prime::is_prime;

/// Exclusive upper bound on supported moduli. Products of two residues fit in
/// a `u128` with room to spare.
pub const MODULUS_LIMIT: u64 = 1 << 62;

/// A prime `p` with `2 <= p < 2^62`, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MODULUS_LIMIT {
            return Err(Error::Usage(format!("modulus {p} is not below 2^62")));
        }
        if !is_prime(p) {
            return Err(Error::Usage(format!("modulus {p} is not prime")));
        }
        Ok(PrimeModulus(p))
    }

    /// Wraps a value already known to be a prime below the limit.
    pub(crate) fn new_unchecked(p: u64) -> Self {
        debug_assert!(p < MODULUS_LIMIT && is_prime(p));
        PrimeModulus(p)
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Number of bits needed to write any residue, `ceil(log2 p)`.
    pub fn symbol_bits(self) -> u32 {
        crate::bits::ceil_log2(self.0)
    }

    pub fn element(self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.0,
            modulus: self,
        }
    }

    pub fn zero(self) -> FieldElement {
        FieldElement { value: 0, modulus: self }
    }

    pub fn one(self) -> FieldElement {
        FieldElement {
            value: 1 % self.0,
            modulus: self,
        }
    }

    // Raw arithmetic on canonical residues. Used on hot paths where both
    // operands are already known to live in this field.

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.0 && b < self.0);
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.0 && b < self.0);
        if a >= b {
            a - b
        } else {
            self.0 - (b - a)
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn pow(self, base: u64, mut exp: u64) -> u64 {
        let mut base = base % self.0;
        let mut acc = 1 % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u64) -> Result<u64> {
        if a % self.0 == 0 {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(self.pow(a, self.0 - 2))
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A canonical residue modulo a [`PrimeModulus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: PrimeModulus,
}

impl FieldElement {
    /// Builds an element, rejecting non-canonical values.
    pub fn new(value: u64, modulus: PrimeModulus) -> Result<Self> {
        if value >= modulus.get() {
            return Err(Error::Malformed(format!(
                "{value} is not a residue modulo {modulus}"
            )));
        }
        Ok(FieldElement { value, modulus })
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: FieldElement) -> Result<PrimeModulus> {
        if self.modulus != other.modulus {
            return Err(Error::Usage(format!(
                "modulus mismatch: {} vs {}",
                self.modulus, other.modulus
            )));
        }
        Ok(self.modulus)
    }

    pub fn add(self, rhs: FieldElement) -> Result<FieldElement> {
        let p = self.same_field(rhs)?;
        Ok(FieldElement { value: p.add(self.value, rhs.value), modulus: p })
    }

    pub fn sub(self, rhs: FieldElement) -> Result<FieldElement> {
        let p = self.same_field(rhs)?;
        Ok(FieldElement { value: p.sub(self.value, rhs.value), modulus: p })
    }

    pub fn mul(self, rhs: FieldElement) -> Result<FieldElement> {
        let p = self.same_field(rhs)?;
        Ok(FieldElement { value: p.mul(self.value, rhs.value), modulus: p })
    }

    pub fn neg(self) -> FieldElement {
        FieldElement { value: self.modulus.neg(self.value), modulus: self.modulus }
    }

    pub fn pow(self, exp: u64) -> FieldElement {
        FieldElement { value: self.modulus.pow(self.value, exp), modulus: self.modulus }
    }

    pub fn inv(self) -> Result<FieldElement> {
        Ok(FieldElement { value: self.modulus.inv(self.value)?, modulus: self.modulus })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}
