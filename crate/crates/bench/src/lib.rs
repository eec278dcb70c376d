//! Shared fixtures for the criterion benchmarks.

use storen_core::{derive_family, FamilyKind, HashFamilyDescriptor, Message};

/// Polynomial family for `k` symbols at epsilon 0.25, with a fixed message.
pub fn polynomial_fixture(k: usize) -> (HashFamilyDescriptor, Message) {
    let fam = derive_family(FamilyKind::Polynomial, k, 0.25).expect("valid parameters");
    let q = fam.max_alphabet();
    let x = Message::Symbols((0..k as u64).map(|j| (j * 2_654_435_761) % q).collect());
    (fam, x)
}
