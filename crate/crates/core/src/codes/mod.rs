//! The code view of the hash families: `H(x) = (h_i(x))_i`, systematic
//! Reed-Solomon with error-and-erasure decoding, and exhaustive small-instance
//! tools (distance, list decoding) that certify the combinatorial bounds.

mod exhaustive;
mod linalg;
mod rs;

pub use exhaustive::{
    brute_force_list_decode, hamming_distance, johnson_list_bound, johnson_radius,
    min_distance_exhaustive, rs_min_distance_exhaustive, DISTANCE_ENUMERATION_LIMIT,
};
pub use rs::{rs_decode_errors_erasures, rs_encode_systematic, Decoded, SystematicRSCode};

use crate::error::Result;
use crate::hash_families::{hash_eval_unchecked, HashFamilyDescriptor, Message};

/// `H(x)`: coordinate `i` (0-based here) holds `h_{i+1}(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codeword(pub Vec<u64>);

impl Codeword {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u64] {
        &self.0
    }

    /// The same symbols as an unerased received word.
    pub fn to_received(&self) -> ReceivedWord {
        ReceivedWord(self.0.iter().copied().map(Some).collect())
    }
}

/// A word as seen by a decoder; `None` marks an erasure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReceivedWord(pub Vec<Option<u64>>);

impl ReceivedWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn erasures(&self) -> usize {
        self.0.iter().filter(|s| s.is_none()).count()
    }
}

pub fn encode(fam: &HashFamilyDescriptor, x: &Message) -> Result<Codeword> {
    fam.check_message(x)?;
    Ok(encode_unchecked(fam, x))
}

pub(crate) fn encode_unchecked(fam: &HashFamilyDescriptor, x: &Message) -> Codeword {
    Codeword((1..=fam.n()).map(|i| hash_eval_unchecked(fam, x, i).value()).collect())
}
