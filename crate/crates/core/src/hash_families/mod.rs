//! The two almost-universal families: polynomial (Reed-Solomon) hashing over
//! a prime field and Karp-Rabin hashing modulo the first `n` primes.

mod collision;
mod descriptor;
mod eval;

pub use collision::{collision_probability_exact, enumerate_messages, ENUMERATION_LIMIT};
pub(crate) use collision::{message_at, message_space_size};
pub(crate) use eval::hash_eval_unchecked;
pub use descriptor::{
    derive_family, Alphabet, FamilyFingerprint, FamilyKind, HashFamilyDescriptor, Message,
    DESCRIPTOR_TAG_KARP_RABIN, DESCRIPTOR_TAG_POLYNOMIAL,
};
pub use eval::{hash_eval, hash_eval_stream};
