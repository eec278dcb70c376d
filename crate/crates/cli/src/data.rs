//! Reading raw data files as messages.
//!
//! Polynomial family: the file is `k` symbols, each big-endian in the fewest
//! bytes that hold a residue mod q; symbols `>= q` are rejected. Karp-Rabin:
//! the whole file is one big-endian natural, which must lie below the
//! product of the first `k` primes.

use storen_core::protocol::{split_message, ChunkPlan};
use storen_core::{BigNat, Error, FamilyKind, HashFamilyDescriptor, Message, Result, Variant};

pub fn symbol_bytes(q: u64) -> usize {
    let bits = 64 - (q - 1).leading_zeros() as usize;
    bits.div_ceil(8).max(1)
}

pub fn parse_message(fam: &HashFamilyDescriptor, bytes: &[u8]) -> Result<Message> {
    if bytes.is_empty() {
        return Err(Error::Usage("data file is empty".into()));
    }
    let x = match fam.kind() {
        FamilyKind::Polynomial => {
            let q = fam.field().expect("polynomial family has a field").get();
            let width = symbol_bytes(q);
            if bytes.len() != fam.k() * width {
                return Err(Error::Usage(format!(
                    "data file has {} bytes; k = {} symbols of {width} bytes need {}",
                    bytes.len(),
                    fam.k(),
                    fam.k() * width
                )));
            }
            let symbols: Vec<u64> = bytes
                .chunks_exact(width)
                .map(|c| c.iter().fold(0u64, |acc, &b| acc << 8 | b as u64))
                .collect();
            if let Some((pos, bad)) = symbols.iter().enumerate().find(|(_, &v)| v >= q) {
                return Err(Error::Usage(format!("symbol {} is {bad}, not below q = {q}", pos + 1)));
            }
            Message::Symbols(symbols)
        }
        FamilyKind::KarpRabin => Message::Natural(BigNat::from_be_bytes(bytes)),
    };
    fam.check_message(&x).map_err(|e| Error::Usage(format!("data does not fit the family: {e}")))?;
    Ok(x)
}

#[cfg(test)]
pub fn encode_message(fam: &HashFamilyDescriptor, x: &Message) -> Vec<u8> {
    match x {
        Message::Symbols(s) => {
            let width = symbol_bytes(fam.field().expect("polynomial family has a field").get());
            s.iter().flat_map(|v| v.to_be_bytes()[8 - width..].to_vec()).collect()
        }
        Message::Natural(v) => v.to_be_bytes(),
    }
}

/// What prover `i` (1-based) holds and the family it answers in.
pub struct Assignment {
    pub family: HashFamilyDescriptor,
    pub message: Message,
}

/// The audited data as the verifier sees it, split for `variant`.
pub enum Prepared {
    Whole(Message),
    /// Trivial variant: chunk family and the `s` chunks.
    Chunks(HashFamilyDescriptor, Vec<Message>),
}

pub fn prepare(fam: &HashFamilyDescriptor, bytes: &[u8], variant: Variant, s: usize) -> Result<Prepared> {
    let plan = ChunkPlan::new(fam.k(), s)?;
    if variant == Variant::Single && s != 1 {
        return Err(Error::Usage("the single variant has exactly one prover".into()));
    }
    if variant != Variant::Trivial {
        return Ok(Prepared::Whole(parse_message(fam, bytes)?));
    }
    let chunk_family = fam.chunk_family(s)?;
    let chunks = match fam.kind() {
        FamilyKind::Polynomial => split_message(fam, &parse_message(fam, bytes)?, &plan)?,
        FamilyKind::KarpRabin => {
            if bytes.is_empty() || bytes.len() % s != 0 {
                return Err(Error::Usage(format!("{} data bytes do not split into {s} equal runs", bytes.len())));
            }
            bytes
                .chunks_exact(bytes.len() / s)
                .map(|run| parse_message(&chunk_family, run))
                .collect::<Result<_>>()?
        }
    };
    Ok(Prepared::Chunks(chunk_family, chunks))
}

pub fn assignment(fam: &HashFamilyDescriptor, bytes: &[u8], variant: Variant, s: usize, prover: usize) -> Result<Assignment> {
    if prover == 0 || prover > s {
        return Err(Error::Usage(format!("prover {prover} outside 1..={s}")));
    }
    match prepare(fam, bytes, variant, s)? {
        Prepared::Chunks(family, chunks) => Ok(Assignment { family, message: chunks[prover - 1].clone() }),
        Prepared::Whole(x) if variant == Variant::Single => Ok(Assignment { family: fam.clone(), message: x }),
        Prepared::Whole(x) => {
            let plan = ChunkPlan::new(fam.k(), s)?;
            let message = storen_core::protocol::zero_extended_chunk(fam, &x, &plan, prover)?;
            Ok(Assignment { family: fam.clone(), message })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use storen_core::PrimeModulus;

    fn poly(k: usize, n: usize, q: u64) -> HashFamilyDescriptor {
        HashFamilyDescriptor::polynomial(k, n, PrimeModulus::new(q).unwrap()).unwrap()
    }

    #[test]
    fn symbol_widths() {
        assert_eq!(symbol_bytes(2), 1);
        assert_eq!(symbol_bytes(251), 1);
        assert_eq!(symbol_bytes(257), 2);
        assert_eq!(symbol_bytes(65_537), 3);
        assert_eq!(symbol_bytes((1 << 61) - 1), 8);
    }

    #[test]
    fn polynomial_files() {
        let f = poly(3, 300, 307);
        let x = parse_message(&f, &[0, 5, 1, 0x32, 0, 0]).unwrap();
        assert_eq!(x, Message::Symbols(vec![5, 306, 0]));
        assert_eq!(encode_message(&f, &x), [0, 5, 1, 0x32, 0, 0]);
        assert!(matches!(parse_message(&f, &[0, 5, 1, 0x33, 0, 0]), Err(Error::Usage(_))));
        assert!(matches!(parse_message(&f, &[0, 5]), Err(Error::Usage(_))));
        assert!(matches!(parse_message(&f, &[]), Err(Error::Usage(_))));
    }

    #[test]
    fn karp_rabin_files() {
        // First three primes: the bound is 30.
        let f = HashFamilyDescriptor::karp_rabin(3, 10).unwrap();
        assert_eq!(parse_message(&f, &[0, 29]).unwrap(), Message::Natural(BigNat::from_u64(29)));
        assert!(parse_message(&f, &[30]).is_err());
        let Prepared::Chunks(cf, chunks) = prepare(&HashFamilyDescriptor::karp_rabin(4, 10).unwrap(), &[1, 5], Variant::Trivial, 2).unwrap() else {
            panic!()
        };
        assert_eq!(cf.k(), 2);
        assert_eq!(chunks, vec![Message::Natural(BigNat::from_u64(1)), Message::Natural(BigNat::from_u64(5))]);
        assert!(prepare(&HashFamilyDescriptor::karp_rabin(4, 10).unwrap(), &[1, 5, 3], Variant::Trivial, 2).is_err());
    }

    #[test]
    fn assignments() {
        let f = poly(4, 11, 11);
        let bytes = [1, 2, 3, 4];
        let a = assignment(&f, &bytes, Variant::RsParity, 2, 2).unwrap();
        assert_eq!(a.message, Message::Symbols(vec![0, 0, 3, 4]));
        let t = assignment(&f, &bytes, Variant::Trivial, 2, 1).unwrap();
        assert_eq!((t.family.k(), t.message), (2, Message::Symbols(vec![1, 2])));
        assert!(assignment(&f, &bytes, Variant::Trivial, 3, 1).is_err());
        assert!(assignment(&f, &bytes, Variant::Linear, 2, 3).is_err());
    }
}
