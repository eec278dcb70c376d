use crate::algebra::{bignat_mod_stream, poly_eval_raw, FieldElement, DIGIT_BITS};
use crate::error::{Error, Result};

use super::descriptor::{Alphabet, HashFamilyDescriptor, Message};

/// `h_i(x)` for 1-based `i`. Polynomial: `P_x(i - 1)` in `F_q`.
/// Karp-Rabin: `x mod p_i`.
pub fn hash_eval(fam: &HashFamilyDescriptor, x: &Message, i: usize) -> Result<FieldElement> {
    fam.check_index(i)?;
    fam.check_message(x)?;
    Ok(hash_eval_unchecked(fam, x, i))
}

/// [`hash_eval`] without re-validating `x`; callers guarantee conformance.
pub(crate) fn hash_eval_unchecked(fam: &HashFamilyDescriptor, x: &Message, i: usize) -> FieldElement {
    match (fam.alphabet(), x) {
        (Alphabet::Field(q), Message::Symbols(sym)) => {
            q.element(poly_eval_raw(*q, sym, (i - 1) as u64))
        }
        (Alphabet::Crt(primes), Message::Natural(v)) => {
            let p = primes[i - 1];
            p.element(v.rem_small(p.get()))
        }
        _ => unreachable!("message validated against family"),
    }
}

/// One-pass evaluation of `h_i(x)` from a symbol stream, holding a constant
/// number of residues.
///
/// Polynomial streams yield `x_0` first. Horner needs the highest coefficient
/// first, so the stream is folded at `a^{-1}` and the result scaled by
/// `a^{k-1}`, keeping one add and one multiply per symbol. Karp-Rabin streams
/// yield base-2^32 digits, most significant first; only the digit count is
/// checked against the message space, not the full `x < prod p_i` bound.
pub fn hash_eval_stream<I>(fam: &HashFamilyDescriptor, stream: I, i: usize) -> Result<FieldElement>
where
    I: IntoIterator<Item = u64>,
{
    fam.check_index(i)?;
    match fam.alphabet() {
        Alphabet::Field(q) => {
            let q = *q;
            let k = fam.k();
            let point = (i - 1) as u64;
            // At the point 0 only x_0 matters.
            let step = if point == 0 { 0 } else { q.inv(point)? };
            let mut acc = 0u64;
            let mut first = 0u64;
            let mut count = 0usize;
            for sym in stream {
                if sym >= q.get() {
                    return Err(Error::Malformed(format!("symbol {sym} is not in F_{q}")));
                }
                if count == 0 {
                    first = sym;
                }
                count += 1;
                if count > k {
                    return Err(Error::Malformed(format!("stream longer than k = {k}")));
                }
                acc = q.add(q.mul(acc, step), sym);
            }
            if count != k {
                return Err(Error::Malformed(format!("stream has {count} symbols, expected {k}")));
            }
            let value = if point == 0 { first } else { q.mul(acc, q.pow(point, k as u64 - 1)) };
            Ok(q.element(value))
        }
        Alphabet::Crt(primes) => {
            let p = primes[i - 1];
            let max_digits = max_crt_digits(fam);
            let mut count = 0usize;
            let mut err = None;
            let counted = stream.into_iter().map_while(|d| {
                count += 1;
                if count > max_digits {
                    err = Some(Error::Malformed(format!(
                        "stream longer than the {max_digits} digits of the message space"
                    )));
                    None
                } else {
                    Some(d)
                }
            });
            let value = bignat_mod_stream(counted, p)?;
            match err {
                Some(e) => Err(e),
                None => Ok(value),
            }
        }
    }
}

/// Digits of the largest Karp-Rabin message, `prod_{i<=k} p_i - 1`. Leading
/// zero digits are tolerated up to this count.
fn max_crt_digits(fam: &HashFamilyDescriptor) -> usize {
    // log2(prod p_i) <= sum ceil(log2 p_i)
    let bits: u64 = fam
        .message_primes()
        .expect("karp-rabin family")
        .iter()
        .map(|p| p.symbol_bits() as u64)
        .sum();
    bits.div_ceil(DIGIT_BITS as u64).max(1) as usize
}
