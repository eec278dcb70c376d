//! Challenge-response audits: single prover, multi-prover with per-chunk
//! hashes, multi-prover linear (one summed hash), and multi-prover with RS
//! parity that identifies cheaters and tolerates silent servers.
//!
//! Conventions: the challenge index `beta` and prover numbers are 1-based,
//! matching `[n]` and `[s]`; code positions inside `codes` are 0-based.

mod digest;
mod multi;
mod retrieve;
mod single;
mod slack;

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::hash_families::{FamilyFingerprint, HashFamilyDescriptor, Message};

pub use digest::{
    resource_bound_bits, Digest, PackedDigest, DIGEST_FORMAT_VERSION, DIGEST_HEADER_BYTES,
    DIGEST_MAGIC, PACKED_HEADER_BITS,
};
pub use multi::{
    honest_linear_answer, multi_linear_preprocess, multi_linear_verify, multi_rs_preprocess,
    multi_rs_verify, multi_trivial_preprocess, multi_trivial_verify, split_message,
    zero_extended_chunk,
};
pub use retrieve::retrievability_extract;
pub use single::{single_preprocess, single_verify};
pub use slack::{storage_bound_slack, SlackParams, SlackReport};

/// Which protocol a digest belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Single,
    Trivial,
    Linear,
    RsParity,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Single, Variant::Trivial, Variant::Linear, Variant::RsParity];

    pub fn tag(self) -> u8 {
        match self {
            Variant::Single => 0,
            Variant::Trivial => 1,
            Variant::Linear => 2,
            Variant::RsParity => 3,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.tag() == tag)
            .ok_or_else(|| Error::Malformed(format!("unknown variant tag {tag}")))
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Single => "single",
            Variant::Trivial => "trivial",
            Variant::Linear => "linear",
            Variant::RsParity => "rs-parity",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(Variant::Single),
            "trivial" => Ok(Variant::Trivial),
            "linear" => Ok(Variant::Linear),
            "rs-parity" | "rs" => Ok(Variant::RsParity),
            other => Err(Error::Usage(format!("unknown variant `{other}`"))),
        }
    }
}

/// A prover's reply to one challenge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Response {
    Value(u64),
    NoResponse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Accepted,
    Rejected,
    /// RS decoding budget exceeded; no guarantee applies.
    Undecidable,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Accepted => "accepted",
            Outcome::Rejected => "rejected",
            Outcome::Undecidable => "undecidable",
        }
    }
}

/// Result of one audit. `accused` and `erased` hold 1-based prover numbers
/// and never intersect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub accused: BTreeSet<usize>,
    pub erased: BTreeSet<usize>,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        self.outcome == Outcome::Accepted
    }

    pub(crate) fn new(outcome: Outcome, accused: BTreeSet<usize>, erased: BTreeSet<usize>) -> Self {
        debug_assert!(accused.is_disjoint(&erased));
        Verdict { outcome, accused, erased }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |set: &BTreeSet<usize>| {
            set.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        };
        write!(
            f,
            "{{\"verdict\":\"{}\",\"accepted\":{},\"accused\":[{}],\"erased\":[{}]}}",
            self.outcome.name(),
            self.accepted(),
            list(&self.accused),
            list(&self.erased)
        )
    }
}

/// Partition of `[k]` into `s` equal contiguous runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChunkPlan {
    k: usize,
    s: usize,
}

impl ChunkPlan {
    pub fn new(k: usize, s: usize) -> Result<Self> {
        if s == 0 || k % s != 0 {
            return Err(Error::Usage(format!("{s} provers do not evenly divide k = {k}")));
        }
        Ok(ChunkPlan { k, s })
    }

    pub fn provers(&self) -> usize {
        self.s
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn chunk_len(&self) -> usize {
        self.k / self.s
    }

    /// 0-based symbol range owned by 1-based prover `i`.
    pub fn range(&self, i: usize) -> std::ops::Range<usize> {
        assert!((1..=self.s).contains(&i), "prover {i} outside 1..={}", self.s);
        let len = self.chunk_len();
        (i - 1) * len..i * len
    }
}

/// Draws the challenge index, uniform over `1..=n`.
pub(crate) fn draw_beta(fam: &HashFamilyDescriptor, seed: u64) -> u64 {
    crate::rng::seeded(seed).gen_range(1..=fam.n() as u64)
}

pub(crate) fn check_digest(
    fam: &HashFamilyDescriptor,
    digest: &Digest,
    variant: Variant,
) -> Result<()> {
    check_fingerprint(fam.fingerprint(), digest.fingerprint)?;
    if digest.variant != variant {
        return Err(Error::Usage(format!(
            "{} digest passed to the {variant} verifier",
            digest.variant
        )));
    }
    if digest.beta == 0 || digest.beta > fam.n() as u64 {
        return Err(Error::Malformed(format!("challenge {} outside 1..={}", digest.beta, fam.n())));
    }
    Ok(())
}

pub(crate) fn check_fingerprint(expected: FamilyFingerprint, got: FamilyFingerprint) -> Result<()> {
    if expected != got {
        return Err(Error::Protocol("family fingerprint mismatch".into()));
    }
    Ok(())
}

/// Runs the verifier matching the digest's variant. `fam` is the family
/// the digest was made under (the chunk family for the trivial variant).
pub fn verify(fam: &HashFamilyDescriptor, digest: &Digest, responses: &[Response]) -> Result<Verdict> {
    match digest.variant {
        Variant::Single => match responses {
            [r] => single_verify(fam, digest, *r),
            _ => Err(Error::Usage(format!("single-prover digest with {} responses", responses.len()))),
        },
        Variant::Trivial => multi_trivial_verify(fam, digest, responses),
        Variant::Linear => multi_linear_verify(fam, digest, responses),
        Variant::RsParity => multi_rs_verify(fam, digest, responses),
    }
}

/// The honest answer for a prover holding `x` under `fam`.
pub fn honest_answer(fam: &HashFamilyDescriptor, x: &Message, beta: u64) -> Result<u64> {
    Ok(crate::hash_families::hash_eval(fam, x, beta as usize)?.value())
}
