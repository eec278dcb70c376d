use std::collections::BTreeSet;

use crate::error::Result;
use crate::hash_families::{hash_eval, HashFamilyDescriptor, Message};

use super::{check_digest, draw_beta, Digest, Outcome, Response, Variant, Verdict};

/// Picks `beta` uniformly from `[n]` and stores `(beta, h_beta(x))`.
pub fn single_preprocess(fam: &HashFamilyDescriptor, x: &Message, seed: u64) -> Result<Digest> {
    fam.check_message(x)?;
    let beta = draw_beta(fam, seed);
    let gamma = hash_eval(fam, x, beta as usize)?.value();
    Ok(Digest { variant: Variant::Single, fingerprint: fam.fingerprint(), beta, gammas: vec![gamma] })
}

/// Accepts iff the answer equals the stored hash. Silence is a rejection.
pub fn single_verify(fam: &HashFamilyDescriptor, digest: &Digest, response: Response) -> Result<Verdict> {
    check_digest(fam, digest, Variant::Single)?;
    let gamma = digest.gammas[0];
    Ok(match response {
        Response::Value(a) if a == gamma => Verdict::new(Outcome::Accepted, BTreeSet::new(), BTreeSet::new()),
        Response::Value(_) => Verdict::new(Outcome::Rejected, [1].into(), BTreeSet::new()),
        Response::NoResponse => Verdict::new(Outcome::Rejected, BTreeSet::new(), [1].into()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeModulus;
    use crate::codes::encode;
    use crate::error::Error;

    fn fam() -> HashFamilyDescriptor {
        HashFamilyDescriptor::polynomial(2, 5, PrimeModulus::new(5).unwrap()).unwrap()
    }

    #[test]
    fn preprocess_is_definitional_and_deterministic() {
        let f = fam();
        let x = Message::Symbols(vec![1, 2]);
        let cw = encode(&f, &x).unwrap();
        for seed in 0..50 {
            let d = single_preprocess(&f, &x, seed).unwrap();
            assert!((1..=5).contains(&d.beta));
            assert_eq!(d.gammas, vec![cw.0[d.beta as usize - 1]]);
            assert_eq!(d, single_preprocess(&f, &x, seed).unwrap());
        }
        // beta = 4 -> gamma = 2 on codeword (1,3,0,2,4)
        assert_eq!(cw.0[3], 2);
        let zero = f.zero_message();
        for seed in 0..20 {
            assert_eq!(single_preprocess(&f, &zero, seed).unwrap().gammas, vec![0]);
        }
    }

    #[test]
    fn verify_cases() {
        let f = fam();
        let d = single_preprocess(&f, &Message::Symbols(vec![1, 2]), 0).unwrap();
        let g = d.gammas[0];
        assert!(single_verify(&f, &d, Response::Value(g)).unwrap().accepted());
        let wrong = single_verify(&f, &d, Response::Value((g + 1) % 5)).unwrap();
        assert_eq!(wrong.outcome, Outcome::Rejected);
        let silent = single_verify(&f, &d, Response::NoResponse).unwrap();
        assert_eq!(silent.outcome, Outcome::Rejected);
        assert_eq!(silent.erased, [1].into());
        let other = HashFamilyDescriptor::polynomial(2, 5, PrimeModulus::new(7).unwrap()).unwrap();
        assert!(matches!(single_verify(&other, &d, Response::Value(g)), Err(Error::Protocol(_))));
    }
}
