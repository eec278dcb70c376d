//! Storage-enforcement audits: challenge-response protocols over
//! almost-universal hash families, with exhaustive certification tools and an
//! adversary simulation harness.

pub mod adversary;
pub mod algebra;
pub mod bits;
pub mod certify;
pub mod codes;
pub mod error;
pub mod hash_families;
pub mod protocol;
pub mod rng;
pub mod transport;

pub use algebra::{BigNat, FieldElement, PrimeModulus};
pub use error::{Error, Result};
pub use hash_families::{derive_family, FamilyKind, HashFamilyDescriptor, Message};
pub use protocol::{Digest, Outcome, Response, Variant, Verdict};
