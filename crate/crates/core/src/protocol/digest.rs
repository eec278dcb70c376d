use crate::bits::{ceil_log2, BitReader, BitWriter};
use crate::error::{Error, Result};
use crate::hash_families::{FamilyFingerprint, HashFamilyDescriptor};

use super::Variant;

pub const DIGEST_MAGIC: [u8; 4] = *b"SENF";
pub const DIGEST_FORMAT_VERSION: u16 = 1;
/// Magic, version, variant tag, fingerprint, beta, gamma count.
pub const DIGEST_HEADER_BYTES: usize = 4 + 2 + 1 + 32 + 8 + 4;
/// Fixed overhead of the packed form: variant tag (8 bits), gamma count
/// (32 bits), family fingerprint (256 bits).
pub const PACKED_HEADER_BITS: u64 = 8 + 32 + 256;

/// The verifier's entire retained state for one audit: the challenge index
/// and the expected answer(s). Single use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digest {
    pub variant: Variant,
    pub fingerprint: FamilyFingerprint,
    /// Challenge index, 1-based.
    pub beta: u64,
    /// Expected values: one per chunk (trivial), one sum (single, linear),
    /// or the `2r + e` RS parity symbols (rs-parity).
    pub gammas: Vec<u64>,
}

/// Bit-packed digest: `ceil(log2 n)` bits for `beta - 1` and
/// `ceil(log2 q)` bits per expected value after a fixed header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedDigest {
    pub bytes: Vec<u8>,
    pub total_bits: u64,
}

impl PackedDigest {
    pub fn payload_bits(&self) -> u64 {
        self.total_bits - PACKED_HEADER_BITS
    }
}

impl Digest {
    /// Versioned binary file form. All integers little-endian.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(DIGEST_HEADER_BYTES + 8 * self.gammas.len());
        out.extend_from_slice(&DIGEST_MAGIC);
        out.extend_from_slice(&DIGEST_FORMAT_VERSION.to_le_bytes());
        out.push(self.variant.tag());
        out.extend_from_slice(&self.fingerprint.0);
        out.extend_from_slice(&self.beta.to_le_bytes());
        out.extend_from_slice(&(self.gammas.len() as u32).to_le_bytes());
        for g in &self.gammas {
            out.extend_from_slice(&g.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < DIGEST_HEADER_BYTES {
            return Err(Error::Malformed(format!("digest is only {} bytes", bytes.len())));
        }
        if bytes[..4] != DIGEST_MAGIC {
            return Err(Error::Malformed("bad digest magic".into()));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != DIGEST_FORMAT_VERSION {
            return Err(Error::Malformed(format!("unsupported digest version {version}")));
        }
        let variant = Variant::from_tag(bytes[6])?;
        let fingerprint = FamilyFingerprint(bytes[7..39].try_into().expect("32 bytes"));
        let beta = u64::from_le_bytes(bytes[39..47].try_into().expect("8 bytes"));
        let count = u32::from_le_bytes(bytes[47..51].try_into().expect("4 bytes")) as usize;
        let body = &bytes[DIGEST_HEADER_BYTES..];
        if body.len() != count * 8 {
            return Err(Error::Malformed(format!(
                "digest declares {count} values but carries {} bytes",
                body.len()
            )));
        }
        let gammas = body
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        Ok(Digest { variant, fingerprint, beta, gammas })
    }

    /// Packs against `fam`, the family whose fingerprint the digest carries.
    pub fn pack(&self, fam: &HashFamilyDescriptor) -> Result<PackedDigest> {
        super::check_fingerprint(fam.fingerprint(), self.fingerprint)?;
        let width = fam.symbol_bits();
        let mut w = BitWriter::new();
        w.write(self.variant.tag() as u64, 8);
        w.write(self.gammas.len() as u64, 32);
        for b in self.fingerprint.0 {
            w.write(b as u64, 8);
        }
        w.write(self.beta - 1, ceil_log2(fam.n() as u64));
        for &g in &self.gammas {
            w.write(g, width);
        }
        let total_bits = w.bit_len();
        Ok(PackedDigest { bytes: w.into_bytes(), total_bits })
    }

    pub fn unpack(bytes: &[u8], fam: &HashFamilyDescriptor) -> Result<Self> {
        let short = || Error::Malformed("packed digest truncated".into());
        let mut r = BitReader::new(bytes);
        let variant = Variant::from_tag(r.read(8).ok_or_else(short)? as u8)?;
        let count = r.read(32).ok_or_else(short)? as usize;
        let mut fp = [0u8; 32];
        for b in fp.iter_mut() {
            *b = r.read(8).ok_or_else(short)? as u8;
        }
        let fingerprint = FamilyFingerprint(fp);
        super::check_fingerprint(fam.fingerprint(), fingerprint)?;
        let beta = r.read(ceil_log2(fam.n() as u64)).ok_or_else(short)? + 1;
        let gammas = (0..count)
            .map(|_| r.read(fam.symbol_bits()).ok_or_else(short))
            .collect::<Result<_>>()?;
        Ok(Digest { variant, fingerprint, beta, gammas })
    }
}

/// Verifier storage payload, in bits, from the resource bounds:
/// `ceil(log2 n) + c * ceil(log2 q)` where `c` is 1 (single, linear),
/// `s` (trivial) or `2r + e` (rs-parity).
pub fn resource_bound_bits(
    variant: Variant,
    fam: &HashFamilyDescriptor,
    s: usize,
    r: usize,
    e: usize,
) -> u64 {
    let count = match variant {
        Variant::Single | Variant::Linear => 1,
        Variant::Trivial => s,
        Variant::RsParity => 2 * r + e,
    };
    ceil_log2(fam.n() as u64) as u64 + count as u64 * fam.symbol_bits() as u64
}
