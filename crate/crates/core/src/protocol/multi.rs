use std::collections::BTreeSet;

use crate::algebra::PrimeModulus;
use crate::codes::{rs_decode_errors_erasures, rs_encode_systematic, ReceivedWord, SystematicRSCode};
use crate::error::{Error, Result};
use crate::hash_families::{hash_eval_unchecked, FamilyKind, HashFamilyDescriptor, Message};

use super::{check_digest, draw_beta, ChunkPlan, Digest, Outcome, Response, Variant, Verdict};

/// Splits a polynomial-family message into its `s` contiguous chunks.
pub fn split_message(fam: &HashFamilyDescriptor, x: &Message, plan: &ChunkPlan) -> Result<Vec<Message>> {
    fam.check_message(x)?;
    let sym = x
        .symbols()
        .ok_or_else(|| Error::UnsupportedVariant("karp-rabin messages are not split by symbol".into()))?;
    check_plan(fam, plan)?;
    Ok((1..=plan.provers()).map(|i| Message::Symbols(sym[plan.range(i)].to_vec())).collect())
}

/// `x` with every symbol outside prover `i`'s chunk zeroed.
pub fn zero_extended_chunk(
    fam: &HashFamilyDescriptor,
    x: &Message,
    plan: &ChunkPlan,
    i: usize,
) -> Result<Message> {
    linear_field(fam)?;
    fam.check_message(x)?;
    check_plan(fam, plan)?;
    if i == 0 || i > plan.provers() {
        return Err(Error::Usage(format!("prover {i} outside 1..={}", plan.provers())));
    }
    let sym = x.symbols().expect("polynomial message");
    let range = plan.range(i);
    Ok(Message::Symbols(
        sym.iter()
            .enumerate()
            .map(|(j, &v)| if range.contains(&j) { v } else { 0 })
            .collect(),
    ))
}

/// Honest answer of prover `i` in the linear and rs-parity variants:
/// `H(x_hat_i)_beta`.
pub fn honest_linear_answer(
    fam: &HashFamilyDescriptor,
    x: &Message,
    plan: &ChunkPlan,
    i: usize,
    beta: u64,
) -> Result<u64> {
    fam.check_index(beta as usize)?;
    let xi = zero_extended_chunk(fam, x, plan, i)?;
    Ok(hash_eval_unchecked(fam, &xi, beta as usize).value())
}

fn check_plan(fam: &HashFamilyDescriptor, plan: &ChunkPlan) -> Result<()> {
    if plan.k() != fam.k() {
        return Err(Error::Usage(format!("plan covers k = {}, family has k = {}", plan.k(), fam.k())));
    }
    Ok(())
}

fn linear_field(fam: &HashFamilyDescriptor) -> Result<PrimeModulus> {
    match fam.kind() {
        FamilyKind::Polynomial => Ok(fam.field().expect("polynomial family")),
        FamilyKind::KarpRabin => Err(Error::UnsupportedVariant(
            "summing answers needs a linear code; karp-rabin is not linear over one field".into(),
        )),
    }
}

/// One shared `beta`; `gamma_i = H(x_i)_beta` for every chunk. `fam_chunk`
/// is the family over chunks of length `k / s`.
pub fn multi_trivial_preprocess(
    fam_chunk: &HashFamilyDescriptor,
    chunks: &[Message],
    plan: &ChunkPlan,
    seed: u64,
) -> Result<Digest> {
    if chunks.len() != plan.provers() {
        return Err(Error::Usage(format!("{} chunks for {} provers", chunks.len(), plan.provers())));
    }
    if fam_chunk.k() != plan.chunk_len() {
        return Err(Error::Usage(format!(
            "chunk family has k = {}, plan chunks have length {}",
            fam_chunk.k(),
            plan.chunk_len()
        )));
    }
    for c in chunks {
        fam_chunk.check_message(c)?;
    }
    let beta = draw_beta(fam_chunk, seed);
    let gammas = chunks.iter().map(|c| hash_eval_unchecked(fam_chunk, c, beta as usize).value()).collect();
    Ok(Digest { variant: Variant::Trivial, fingerprint: fam_chunk.fingerprint(), beta, gammas })
}

/// Each answer is checked against its own stored hash, so every wrong
/// answer is attributed to its prover.
pub fn multi_trivial_verify(
    fam_chunk: &HashFamilyDescriptor,
    digest: &Digest,
    responses: &[Response],
) -> Result<Verdict> {
    check_digest(fam_chunk, digest, Variant::Trivial)?;
    check_count(digest, responses.len())?;
    let mut accused = BTreeSet::new();
    let mut erased = BTreeSet::new();
    for (idx, (resp, &gamma)) in responses.iter().zip(&digest.gammas).enumerate() {
        match resp {
            Response::Value(a) if *a == gamma => {}
            Response::Value(_) => {
                accused.insert(idx + 1);
            }
            Response::NoResponse => {
                erased.insert(idx + 1);
            }
        }
    }
    let outcome = if accused.is_empty() && erased.is_empty() { Outcome::Accepted } else { Outcome::Rejected };
    Ok(Verdict::new(outcome, accused, erased))
}

fn check_count(digest: &Digest, got: usize) -> Result<()> {
    if digest.gammas.len() != got {
        return Err(Error::Usage(format!("{got} responses for {} expected values", digest.gammas.len())));
    }
    Ok(())
}

/// Stores `(beta, H(x)_beta)`; prover `i` later answers `H(x_hat_i)_beta`.
pub fn multi_linear_preprocess(
    fam: &HashFamilyDescriptor,
    x: &Message,
    plan: &ChunkPlan,
    seed: u64,
) -> Result<Digest> {
    linear_field(fam)?;
    fam.check_message(x)?;
    check_plan(fam, plan)?;
    let beta = draw_beta(fam, seed);
    let gamma = hash_eval_unchecked(fam, x, beta as usize).value();
    Ok(Digest { variant: Variant::Linear, fingerprint: fam.fingerprint(), beta, gammas: vec![gamma] })
}

/// Accepts iff the answers sum to `gamma` in `F_q`. Cannot attribute a
/// failure to a prover, and every prover must answer.
pub fn multi_linear_verify(fam: &HashFamilyDescriptor, digest: &Digest, responses: &[Response]) -> Result<Verdict> {
    let q = linear_field(fam)?;
    check_digest(fam, digest, Variant::Linear)?;
    if responses.is_empty() {
        return Err(Error::Usage("no provers".into()));
    }
    let erased: BTreeSet<usize> = responses
        .iter()
        .enumerate()
        .filter(|(_, r)| matches!(r, Response::NoResponse))
        .map(|(i, _)| i + 1)
        .collect();
    if !erased.is_empty() {
        return Ok(Verdict::new(Outcome::Rejected, BTreeSet::new(), erased));
    }
    let mut sum = 0u64;
    for r in responses {
        let Response::Value(a) = *r else { unreachable!("silence handled above") };
        if a >= q.get() {
            return Ok(Verdict::new(Outcome::Rejected, BTreeSet::new(), BTreeSet::new()));
        }
        sum = q.add(sum, a);
    }
    let outcome = if sum == digest.gammas[0] { Outcome::Accepted } else { Outcome::Rejected };
    Ok(Verdict::new(outcome, BTreeSet::new(), BTreeSet::new()))
}

/// Computes `v = (H(x_hat_i)_beta)_i`, encodes it with a systematic RS code
/// of length `2r + e + s` and stores `beta` with the `2r + e` parity symbols.
pub fn multi_rs_preprocess(
    fam: &HashFamilyDescriptor,
    x: &Message,
    plan: &ChunkPlan,
    r: usize,
    e: usize,
    seed: u64,
) -> Result<Digest> {
    let q = linear_field(fam)?;
    fam.check_message(x)?;
    check_plan(fam, plan)?;
    let s = plan.provers();
    if r > s || e > s {
        return Err(Error::Usage(format!("r = {r} and e = {e} must not exceed s = {s}")));
    }
    let code = SystematicRSCode::new(s, 2 * r + e + s, q)?;
    let beta = draw_beta(fam, seed);
    let v: Vec<u64> = (1..=s)
        .map(|i| honest_linear_answer(fam, x, plan, i, beta))
        .collect::<Result<_>>()?;
    let cw = rs_encode_systematic(&code, &v)?;
    Ok(Digest {
        variant: Variant::RsParity,
        fingerprint: fam.fingerprint(),
        beta,
        gammas: cw.0[s..].to_vec(),
    })
}

/// Decodes the answers (silent provers as erasures) together with the stored
/// parity symbols. Wrong answers are the decoder's error locations.
///
/// Answers outside `F_q` are wrong by construction: the prover is accused and
/// the position is decoded as an erasure. More silences than the parity
/// budget, or a failed decode, give an undecidable verdict.
pub fn multi_rs_verify(fam: &HashFamilyDescriptor, digest: &Digest, responses: &[Response]) -> Result<Verdict> {
    let q = linear_field(fam)?;
    check_digest(fam, digest, Variant::RsParity)?;
    let s = responses.len();
    if s == 0 {
        return Err(Error::Usage("no provers".into()));
    }
    let code = SystematicRSCode::new(s, s + digest.gammas.len(), q)?;
    if let Some(bad) = digest.gammas.iter().find(|&&g| g >= q.get()) {
        return Err(Error::Malformed(format!("parity symbol {bad} is not in F_{q}")));
    }
    let mut accused = BTreeSet::new();
    let mut erased = BTreeSet::new();
    let mut z = Vec::with_capacity(code.block_len());
    for (idx, resp) in responses.iter().enumerate() {
        z.push(match *resp {
            Response::Value(a) if a < q.get() => Some(a),
            Response::Value(_) => {
                accused.insert(idx + 1);
                None
            }
            Response::NoResponse => {
                erased.insert(idx + 1);
                None
            }
        });
    }
    z.extend(digest.gammas.iter().copied().map(Some));
    if erased.len() > code.budget() {
        return Ok(Verdict::new(Outcome::Undecidable, accused, erased));
    }
    match rs_decode_errors_erasures(&code, &ReceivedWord(z)) {
        Ok(decoded) => {
            let parity_error = decoded.error_positions.iter().any(|&p| p >= s);
            accused.extend(decoded.error_positions.iter().filter(|&&p| p < s).map(|p| p + 1));
            let outcome = if accused.is_empty() && !parity_error { Outcome::Accepted } else { Outcome::Rejected };
            Ok(Verdict::new(outcome, accused, erased))
        }
        Err(Error::DecodeFailure) => Ok(Verdict::new(Outcome::Undecidable, accused, erased)),
        Err(other) => Err(other),
    }
}
