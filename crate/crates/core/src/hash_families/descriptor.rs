use std::fmt;

use num_rational::Ratio;
use sha2::{Digest as _, Sha256};

use crate::algebra::{first_n_primes, next_prime_at_least, BigNat, FieldElement, PrimeModulus};
use crate::error::{Error, Result};

pub const DESCRIPTOR_TAG_POLYNOMIAL: u8 = 0x01;
pub const DESCRIPTOR_TAG_KARP_RABIN: u8 = 0x02;

/// Descriptor encoding length: tag, k, n, and one parameter word.
const ENCODED_LEN: usize = 1 + 8 + 8 + 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Polynomial,
    KarpRabin,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Polynomial => "polynomial",
            FamilyKind::KarpRabin => "karp-rabin",
        }
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "polynomial" | "rs" | "reed-solomon" => Ok(FamilyKind::Polynomial),
            "karp-rabin" | "karprabin" | "crt" => Ok(FamilyKind::KarpRabin),
            other => Err(Error::Usage(format!("unknown family kind `{other}`"))),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-coordinate alphabet of the family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// Every hash value lives in one field `F_q`.
    Field(PrimeModulus),
    /// Coordinate `i` is a residue modulo the `i`-th prime.
    Crt(Vec<PrimeModulus>),
}

/// SHA-256 of the canonical descriptor encoding.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilyFingerprint(pub [u8; 32]);

impl fmt::Display for FamilyFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|b| write!(f, "{b:02x}"))
    }
}

impl fmt::Debug for FamilyFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FamilyFingerprint(")?;
        for b in &self.0[..6] {
            write!(f, "{b:02x}")?;
        }
        write!(f, "..)")
    }
}

/// Fully determines a family `{h_1, ..., h_n}`; verifier and prover must agree
/// on it before any challenge is meaningful.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HashFamilyDescriptor {
    kind: FamilyKind,
    k: usize,
    n: usize,
    alphabet: Alphabet,
}

impl HashFamilyDescriptor {
    /// Polynomial family: messages in `F_q^k`, `h_i` evaluates at the field
    /// element `i - 1`.
    pub fn polynomial(k: usize, n: usize, q: PrimeModulus) -> Result<Self> {
        check_dims(k, n)?;
        if n as u64 > q.get() {
            return Err(Error::Parameter(format!(
                "{n} distinct evaluation points do not fit in F_{q}"
            )));
        }
        Ok(HashFamilyDescriptor { kind: FamilyKind::Polynomial, k, n, alphabet: Alphabet::Field(q) })
    }

    /// Karp-Rabin family over the first `n` primes; messages are naturals
    /// below the product of the first `k`.
    pub fn karp_rabin(k: usize, n: usize) -> Result<Self> {
        check_dims(k, n)?;
        let primes = first_n_primes(n)?;
        Ok(HashFamilyDescriptor { kind: FamilyKind::KarpRabin, k, n, alphabet: Alphabet::Crt(primes) })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Field modulus of the polynomial family.
    pub fn field(&self) -> Option<PrimeModulus> {
        match &self.alphabet {
            Alphabet::Field(q) => Some(*q),
            Alphabet::Crt(_) => None,
        }
    }

    /// The `n` CRT moduli of the Karp-Rabin family.
    pub fn primes(&self) -> Option<&[PrimeModulus]> {
        match &self.alphabet {
            Alphabet::Field(_) => None,
            Alphabet::Crt(p) => Some(p),
        }
    }

    /// The first `k` primes, whose product bounds the message space.
    pub fn message_primes(&self) -> Option<&[PrimeModulus]> {
        self.primes().map(|p| &p[..self.k])
    }

    /// Modulus of coordinate `i` (1-based).
    pub fn coordinate_modulus(&self, i: usize) -> Result<PrimeModulus> {
        self.check_index(i)?;
        Ok(match &self.alphabet {
            Alphabet::Field(q) => *q,
            Alphabet::Crt(p) => p[i - 1],
        })
    }

    /// Largest coordinate alphabet size (`q`, or `p_n` for Karp-Rabin).
    pub fn max_alphabet(&self) -> u64 {
        match &self.alphabet {
            Alphabet::Field(q) => q.get(),
            Alphabet::Crt(p) => p[self.n - 1].get(),
        }
    }

    /// Bits per stored hash value: `ceil(log2 q)` with `q` the largest alphabet.
    pub fn symbol_bits(&self) -> u32 {
        crate::bits::ceil_log2(self.max_alphabet())
    }

    /// Sum of coordinate alphabet sizes, the `sum q_i` of the Johnson list bound.
    pub fn alphabet_sum(&self) -> u64 {
        match &self.alphabet {
            Alphabet::Field(q) => q.get() * self.n as u64,
            Alphabet::Crt(p) => p.iter().map(|p| p.get()).sum(),
        }
    }

    /// Achieved collision bound `(k - 1) / n`.
    pub fn epsilon_actual(&self) -> Ratio<u64> {
        Ratio::new(self.k as u64 - 1, self.n as u64)
    }

    /// Same kind and coordinates, messages of length `k / s`.
    pub fn chunk_family(&self, s: usize) -> Result<Self> {
        if s == 0 || self.k % s != 0 {
            return Err(Error::Usage(format!("{s} provers do not divide k = {}", self.k)));
        }
        Ok(HashFamilyDescriptor { k: self.k / s, ..self.clone() })
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::Usage(format!("hash index {i} outside 1..={}", self.n)));
        }
        Ok(())
    }

    /// Canonical encoding: kind tag, `k`, `n`, then `q` (polynomial) or the
    /// prime count (Karp-Rabin), all integers as 8-byte little-endian.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(ENCODED_LEN);
        let (tag, param) = match &self.alphabet {
            Alphabet::Field(q) => (DESCRIPTOR_TAG_POLYNOMIAL, q.get()),
            Alphabet::Crt(p) => (DESCRIPTOR_TAG_KARP_RABIN, p.len() as u64),
        };
        out.push(tag);
        out.extend_from_slice(&(self.k as u64).to_le_bytes());
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        out.extend_from_slice(&param.to_le_bytes());
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() != ENCODED_LEN {
            return Err(Error::Malformed(format!(
                "descriptor is {} bytes, expected {ENCODED_LEN}",
                bytes.len()
            )));
        }
        let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"));
        let (k, n, param) = (word(1), word(9), word(17));
        let k = usize::try_from(k).map_err(|_| Error::Malformed("k too large".into()))?;
        let n = usize::try_from(n).map_err(|_| Error::Malformed("n too large".into()))?;
        match bytes[0] {
            DESCRIPTOR_TAG_POLYNOMIAL => {
                let q = PrimeModulus::new(param).map_err(|e| Error::Malformed(e.to_string()))?;
                Self::polynomial(k, n, q)
            }
            DESCRIPTOR_TAG_KARP_RABIN => {
                if param != n as u64 {
                    return Err(Error::Malformed(format!("prime count {param} differs from n = {n}")));
                }
                Self::karp_rabin(k, n)
            }
            tag => Err(Error::Malformed(format!("unknown family tag {tag:#04x}"))),
        }
    }

    pub fn fingerprint(&self) -> FamilyFingerprint {
        FamilyFingerprint(Sha256::digest(self.encode()).into())
    }

    /// Checks that `x` belongs to this family's message space.
    pub fn check_message(&self, x: &Message) -> Result<()> {
        match (&self.alphabet, x) {
            (Alphabet::Field(q), Message::Symbols(sym)) => {
                if sym.len() != self.k {
                    return Err(Error::Usage(format!(
                        "message has {} symbols, family expects {}",
                        sym.len(),
                        self.k
                    )));
                }
                if let Some(bad) = sym.iter().find(|&&v| v >= q.get()) {
                    return Err(Error::Usage(format!("symbol {bad} is not in F_{q}")));
                }
                Ok(())
            }
            (Alphabet::Crt(p), Message::Natural(v)) => {
                let bound = BigNat::product(p[..self.k].iter().map(|p| p.get()));
                if *v >= bound {
                    return Err(Error::Usage("message exceeds the product of the first k primes".into()));
                }
                Ok(())
            }
            _ => Err(Error::Usage(format!("message shape does not match a {} family", self.kind))),
        }
    }

    /// Builds a polynomial-family message from field elements.
    pub fn message_from_elements(&self, elems: &[FieldElement]) -> Result<Message> {
        let q = self
            .field()
            .ok_or_else(|| Error::Usage("field elements given to a karp-rabin family".into()))?;
        if let Some(e) = elems.iter().find(|e| e.modulus() != q) {
            return Err(Error::Usage(format!("element over F_{} given to F_{q} family", e.modulus())));
        }
        let x = Message::Symbols(elems.iter().map(|e| e.value()).collect());
        self.check_message(&x)?;
        Ok(x)
    }

    /// The all-zero message.
    pub fn zero_message(&self) -> Message {
        match self.kind {
            FamilyKind::Polynomial => Message::Symbols(vec![0; self.k]),
            FamilyKind::KarpRabin => Message::Natural(BigNat::zero()),
        }
    }
}

fn check_dims(k: usize, n: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Usage("message length k must be positive".into()));
    }
    if n < k {
        return Err(Error::Usage(format!("family size n = {n} is below k = {k}")));
    }
    Ok(())
}

/// A message of either family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Message {
    /// Polynomial coefficients `x_0 .. x_{k-1}` as canonical residues.
    Symbols(Vec<u64>),
    /// Karp-Rabin message `x < prod_{i<=k} p_i`.
    Natural(BigNat),
}

impl Message {
    pub fn symbols(&self) -> Option<&[u64]> {
        match self {
            Message::Symbols(s) => Some(s),
            Message::Natural(_) => None,
        }
    }

    pub fn natural(&self) -> Option<&BigNat> {
        match self {
            Message::Natural(v) => Some(v),
            Message::Symbols(_) => None,
        }
    }
}

/// `n = ceil(k / epsilon^2)`; polynomial families take the smallest prime
/// `q >= n`, Karp-Rabin families the first `n` primes.
pub fn derive_family(kind: FamilyKind, k: usize, epsilon: f64) -> Result<HashFamilyDescriptor> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Usage(format!("epsilon {epsilon} is not in (0, 1)")));
    }
    if k == 0 {
        return Err(Error::Usage("message length k must be positive".into()));
    }
    let raw = k as f64 / (epsilon * epsilon);
    // Absorb rounding noise such as 1 / 0.1^2 = 100.00000000000001.
    let n = if (raw - raw.round()).abs() < 1e-9 { raw.round() } else { raw.ceil() };
    if !(n.is_finite() && n <= (1u64 << 40) as f64) {
        return Err(Error::Usage(format!("family size {n} is too large")));
    }
    let n = n as usize;
    match kind {
        FamilyKind::Polynomial => HashFamilyDescriptor::polynomial(k, n, next_prime_at_least(n as u64)?),
        FamilyKind::KarpRabin => HashFamilyDescriptor::karp_rabin(k, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_examples() {
        let f = derive_family(FamilyKind::Polynomial, 2, 0.8).unwrap();
        assert_eq!((f.n(), f.field().unwrap().get()), (4, 5));
        assert_eq!(f.epsilon_actual(), Ratio::new(1, 4));

        let f = derive_family(FamilyKind::KarpRabin, 2, 0.75).unwrap();
        let primes: Vec<u64> = f.primes().unwrap().iter().map(|p| p.get()).collect();
        assert_eq!(primes, vec![2, 3, 5, 7]);
        assert_eq!(f.message_primes().unwrap().len(), 2);

        let f = derive_family(FamilyKind::Polynomial, 1, 0.9).unwrap();
        assert_eq!(f.epsilon_actual(), Ratio::new(0, 1));

        let f = derive_family(FamilyKind::Polynomial, 64, 0.25).unwrap();
        assert_eq!((f.n(), f.field().unwrap().get()), (1024, 1031));

        assert_eq!(derive_family(FamilyKind::Polynomial, 1, 0.1).unwrap().n(), 100);
    }

    #[test]
    fn epsilon_actual_below_target_squared() {
        for k in 1..20 {
            for eps in [0.3, 0.5, 0.71, 0.9, 0.99] {
                let f = derive_family(FamilyKind::Polynomial, k, eps).unwrap();
                let actual = *f.epsilon_actual().numer() as f64 / *f.epsilon_actual().denom() as f64;
                assert!(actual <= eps * eps + 1e-12);
            }
        }
    }

    #[test]
    fn derive_rejects_bad_epsilon() {
        for eps in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(matches!(derive_family(FamilyKind::Polynomial, 2, eps), Err(Error::Usage(_))));
        }
    }

    #[test]
    fn invariants_enforced() {
        let q5 = PrimeModulus::new(5).unwrap();
        assert!(HashFamilyDescriptor::polynomial(2, 6, q5).is_err());
        assert!(HashFamilyDescriptor::polynomial(3, 2, q5).is_err());
        assert!(HashFamilyDescriptor::polynomial(0, 2, q5).is_err());
        assert!(HashFamilyDescriptor::karp_rabin(3, 2).is_err());
    }

    #[test]
    fn encoding_roundtrip_and_layout() {
        let f = HashFamilyDescriptor::polynomial(2, 5, PrimeModulus::new(5).unwrap()).unwrap();
        let bytes = f.encode();
        assert_eq!(bytes[0], DESCRIPTOR_TAG_POLYNOMIAL);
        assert_eq!(&bytes[1..9], &2u64.to_le_bytes());
        assert_eq!(&bytes[9..17], &5u64.to_le_bytes());
        assert_eq!(&bytes[17..25], &5u64.to_le_bytes());
        assert_eq!(HashFamilyDescriptor::decode(&bytes).unwrap(), f);

        let g = HashFamilyDescriptor::karp_rabin(2, 4).unwrap();
        assert_eq!(HashFamilyDescriptor::decode(&g.encode()).unwrap(), g);
        assert_ne!(f.fingerprint(), g.fingerprint());

        let mut bad = g.encode();
        bad[0] = 9;
        assert!(HashFamilyDescriptor::decode(&bad).is_err());
        assert!(HashFamilyDescriptor::decode(&bad[..10]).is_err());
    }

    #[test]
    fn message_checks() {
        let f = HashFamilyDescriptor::polynomial(2, 5, PrimeModulus::new(5).unwrap()).unwrap();
        assert!(f.check_message(&Message::Symbols(vec![1, 2])).is_ok());
        assert!(f.check_message(&Message::Symbols(vec![1, 5])).is_err());
        assert!(f.check_message(&Message::Symbols(vec![1])).is_err());
        assert!(f.check_message(&Message::Natural(BigNat::zero())).is_err());

        let g = HashFamilyDescriptor::karp_rabin(2, 4).unwrap();
        assert!(g.check_message(&Message::Natural(BigNat::from_u64(5))).is_ok());
        assert!(g.check_message(&Message::Natural(BigNat::from_u64(6))).is_err());
    }

    #[test]
    fn chunk_family_divides() {
        let f = HashFamilyDescriptor::polynomial(4, 7, PrimeModulus::new(7).unwrap()).unwrap();
        assert_eq!(f.chunk_family(2).unwrap().k(), 2);
        assert!(matches!(f.chunk_family(3), Err(Error::Usage(_))));
    }
}
