use crate::codes::{brute_force_list_decode, johnson_radius, ReceivedWord};
use crate::error::Result;
use crate::hash_families::{hash_eval_unchecked, HashFamilyDescriptor, Message};

use super::{check_digest, Digest, Variant};

/// Recovers `x` from a prover's answer vector: list decode at the Johnson
/// radius of the MDS distance `n - k + 1`, then keep the candidates that
/// reproduce the digest's stored hash. Returns every survivor, in
/// lexicographic order; a singleton means unique recovery.
pub fn retrievability_extract(
    fam: &HashFamilyDescriptor,
    answers: &ReceivedWord,
    digest: &Digest,
) -> Result<Vec<Message>> {
    check_digest(fam, digest, Variant::Single)?;
    let radius = johnson_radius(fam.n(), fam.n() - fam.k() + 1);
    let list = brute_force_list_decode(fam, answers, radius)?;
    let beta = digest.beta as usize;
    Ok(list
        .into_iter()
        .filter(|u| hash_eval_unchecked(fam, u, beta).value() == digest.gammas[0])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeModulus;
    use crate::codes::encode;
    use crate::protocol::single_preprocess;

    #[test]
    fn honest_answers_recover_x() {
        let f = HashFamilyDescriptor::polynomial(2, 5, PrimeModulus::new(5).unwrap()).unwrap();
        let x = Message::Symbols(vec![3, 1]);
        let d = single_preprocess(&f, &x, 11).unwrap();
        let z = encode(&f, &x).unwrap().to_received();
        assert_eq!(retrievability_extract(&f, &z, &d).unwrap(), vec![x]);
    }

    #[test]
    fn one_error_keeps_x_in_list() {
        let f = HashFamilyDescriptor::polynomial(2, 5, PrimeModulus::new(5).unwrap()).unwrap();
        let x = Message::Symbols(vec![1, 2]);
        let mut z = encode(&f, &x).unwrap().to_received();
        z.0[2] = Some(4);
        for seed in 0..10 {
            let d = single_preprocess(&f, &x, seed).unwrap();
            assert!(retrievability_extract(&f, &z, &d).unwrap().contains(&x));
        }
    }
}
