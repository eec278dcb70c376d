use crate::algebra::{poly_eval_raw, PrimeModulus};
use crate::error::{Error, Result};

use super::linalg::{poly_divmod, solve};
use super::{Codeword, ReceivedWord};

/// Systematic Reed-Solomon code `F_q^m -> F_q^len`, evaluation points
/// `0, 1, ..., len - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystematicRSCode {
    m: usize,
    len: usize,
    q: PrimeModulus,
}

impl SystematicRSCode {
    pub fn new(m: usize, len: usize, q: PrimeModulus) -> Result<Self> {
        if m == 0 || m > len {
            return Err(Error::Parameter(format!("need 1 <= m <= len, got m = {m}, len = {len}")));
        }
        if len as u64 > q.get() {
            return Err(Error::Parameter(format!("block length {len} exceeds field size {q}")));
        }
        Ok(SystematicRSCode { m, len, q })
    }

    pub fn message_len(&self) -> usize {
        self.m
    }

    pub fn block_len(&self) -> usize {
        self.len
    }

    pub fn field(&self) -> PrimeModulus {
        self.q
    }

    /// Redundancy `len - m`: any `r` errors and `e` erasures with
    /// `2r + e <= len - m` are correctable.
    pub fn budget(&self) -> usize {
        self.len - self.m
    }
}

/// Outcome of a successful error-and-erasure decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub message: Vec<u64>,
    /// 0-based positions, ascending, where the received symbol was wrong.
    pub error_positions: Vec<usize>,
}

/// Coefficients (lowest first) of the degree `< m` polynomial through
/// `(j, v_j)` for `j < m`.
fn interpolate_prefix(q: PrimeModulus, v: &[u64]) -> Vec<u64> {
    let m = v.len();
    let mut coeffs = vec![0u64; m];
    for (j, &vj) in v.iter().enumerate() {
        if vj == 0 {
            continue;
        }
        // basis_j(Y) = prod_{t != j} (Y - t) / (j - t)
        let mut basis = vec![1u64];
        let mut denom = 1u64;
        for t in (0..m).filter(|&t| t != j) {
            let mut next = vec![0u64; basis.len() + 1];
            for (d, &b) in basis.iter().enumerate() {
                next[d + 1] = q.add(next[d + 1], b);
                next[d] = q.sub(next[d], q.mul(b, t as u64 % q.get()));
            }
            basis = next;
            denom = q.mul(denom, q.sub(j as u64 % q.get(), t as u64 % q.get()));
        }
        let scale = q.mul(vj, q.inv(denom).expect("distinct points"));
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c = q.add(*c, q.mul(scale, *b));
        }
    }
    coeffs
}

pub fn rs_encode_systematic(code: &SystematicRSCode, v: &[u64]) -> Result<Codeword> {
    let q = code.q;
    if v.len() != code.m {
        return Err(Error::Usage(format!("message has {} symbols, code expects {}", v.len(), code.m)));
    }
    if let Some(bad) = v.iter().find(|&&s| s >= q.get()) {
        return Err(Error::Usage(format!("symbol {bad} is not in F_{q}")));
    }
    let coeffs = interpolate_prefix(q, v);
    Ok(Codeword((0..code.len as u64).map(|a| poly_eval_raw(q, &coeffs, a)).collect()))
}

/// Berlekamp-Welch decoding over the unerased positions.
///
/// With `N` unerased positions, the shortened code has redundancy `N - m`, so
/// up to `t = (N - m) / 2` errors are located: find monic `E` of degree `t`
/// and `Q` of degree `< m + t` with `Q(a_j) = z_j E(a_j)` on every unerased
/// `a_j`, then `P = Q / E`. Fails when erasures alone exceed the redundancy,
/// when no such pair exists, or when `E` does not divide `Q`.
pub fn rs_decode_errors_erasures(code: &SystematicRSCode, z: &ReceivedWord) -> Result<Decoded> {
    let q = code.q;
    if z.len() != code.len {
        return Err(Error::Usage(format!("received {} symbols, block length is {}", z.len(), code.len)));
    }
    if let Some(bad) = z.0.iter().flatten().find(|&&s| s >= q.get()) {
        return Err(Error::Usage(format!("symbol {bad} is not in F_{q}")));
    }
    let erased = z.erasures();
    if erased > code.budget() {
        return Err(Error::DecodeFailure);
    }
    let known: Vec<(u64, u64)> = z
        .0
        .iter()
        .enumerate()
        .filter_map(|(j, s)| s.map(|s| (j as u64, s)))
        .collect();
    let t = (known.len() - code.m) / 2;
    let q_terms = code.m + t;
    let unknowns = q_terms + t;

    let rows: Vec<Vec<u64>> = known
        .iter()
        .map(|&(a, y)| {
            let mut row = Vec::with_capacity(unknowns + 1);
            let mut pw = 1u64;
            let mut powers = Vec::with_capacity(q_terms + 1);
            for _ in 0..=q_terms {
                powers.push(pw);
                pw = q.mul(pw, a);
            }
            row.extend_from_slice(&powers[..q_terms]);
            row.extend(powers[..t].iter().map(|&p| q.neg(q.mul(y, p))));
            row.push(q.mul(y, powers[t]));
            row
        })
        .collect();

    let sol = solve(q, rows, unknowns).ok_or(Error::DecodeFailure)?;
    let q_poly = &sol[..q_terms];
    let mut e_poly = sol[q_terms..].to_vec();
    e_poly.push(1);
    let (p_poly, rem) = poly_divmod(q, q_poly, &e_poly);
    if rem.iter().any(|&c| c != 0) {
        return Err(Error::DecodeFailure);
    }
    let error_positions: Vec<usize> = known
        .iter()
        .filter(|&&(a, y)| poly_eval_raw(q, &p_poly, a) != y)
        .map(|&(a, _)| a as usize)
        .collect();
    if 2 * error_positions.len() + erased > code.budget() {
        return Err(Error::DecodeFailure);
    }
    let message = (0..code.m as u64).map(|a| poly_eval_raw(q, &p_poly, a)).collect();
    Ok(Decoded { message, error_positions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn code(m: usize, len: usize, q: u64) -> SystematicRSCode {
        SystematicRSCode::new(m, len, PrimeModulus::new(q).unwrap()).unwrap()
    }

    fn rw(v: &[Option<u64>]) -> ReceivedWord {
        ReceivedWord(v.to_vec())
    }

    #[test]
    fn encode_examples() {
        let c = code(2, 4, 5);
        assert_eq!(rs_encode_systematic(&c, &[0, 0]).unwrap().0, vec![0, 0, 0, 0]);
        assert_eq!(rs_encode_systematic(&c, &[1, 2]).unwrap().0, vec![1, 2, 3, 4]);
        assert_eq!(rs_encode_systematic(&code(1, 3, 5), &[3]).unwrap().0, vec![3, 3, 3]);
        assert!(matches!(SystematicRSCode::new(2, 6, PrimeModulus::new(5).unwrap()), Err(Error::Parameter(_))));
        assert!(rs_encode_systematic(&c, &[1]).is_err());
    }

    #[test]
    fn decode_examples() {
        let c = code(2, 4, 5);
        let clean = rs_decode_errors_erasures(&c, &rw(&[Some(1), Some(2), Some(3), Some(4)])).unwrap();
        assert_eq!(clean, Decoded { message: vec![1, 2], error_positions: vec![] });

        let one = rs_decode_errors_erasures(&c, &rw(&[Some(1), Some(2), Some(3), Some(0)])).unwrap();
        assert_eq!(one, Decoded { message: vec![1, 2], error_positions: vec![3] });

        let erased = rs_decode_errors_erasures(&c, &rw(&[Some(1), Some(2), None, None])).unwrap();
        assert_eq!(erased, Decoded { message: vec![1, 2], error_positions: vec![] });
    }

    #[test]
    fn decode_example_agrees_with_enumeration() {
        // Unique codeword within distance 1 of (1,2,3,0), by enumerating F_5^2.
        let c = code(2, 4, 5);
        let z = [1u64, 2, 3, 0];
        let mut near = Vec::new();
        for a in 0..5 {
            for b in 0..5 {
                let cw = rs_encode_systematic(&c, &[a, b]).unwrap();
                if cw.0.iter().zip(&z).filter(|(u, v)| u != v).count() <= 1 {
                    near.push((a, b));
                }
            }
        }
        assert_eq!(near, vec![(1, 2)]);
    }

    #[test]
    fn decode_failures() {
        let c = code(2, 4, 5);
        assert_eq!(rs_decode_errors_erasures(&c, &rw(&[Some(1), None, None, None])), Err(Error::DecodeFailure));
        // Two errors against budget 2: (1,2,3,4) -> (1,2,0,0). Either fails or
        // lands on another codeword within distance 1; never the original.
        match rs_decode_errors_erasures(&c, &rw(&[Some(1), Some(2), Some(0), Some(0)])) {
            Err(Error::DecodeFailure) => {}
            Ok(d) => assert!(d.error_positions.len() <= 1 && d.message != vec![1, 2]),
            Err(e) => panic!("{e}"),
        }
        assert!(matches!(rs_decode_errors_erasures(&c, &rw(&[Some(1)])), Err(Error::Usage(_))));
    }

    #[test]
    fn no_redundancy_accepts_anything() {
        let c = code(3, 3, 7);
        let d = rs_decode_errors_erasures(&c, &rw(&[Some(4), Some(0), Some(6)])).unwrap();
        assert_eq!(d.message, vec![4, 0, 6]);
        assert!(d.error_positions.is_empty());
    }

    fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|mask| mask.count_ones() as usize <= max)
            .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
            .collect()
    }

    #[test]
    fn roundtrip_exhaustive_small() {
        for (q, m, len) in [(5u64, 1usize, 3usize), (5, 2, 5), (7, 2, 6), (7, 3, 6), (7, 1, 4)] {
            let c = code(m, len, q);
            let budget = len - m;
            for idx in 0..q.pow(m as u32) {
                let v: Vec<u64> = (0..m).map(|j| idx / q.pow(j as u32) % q).collect();
                let cw = rs_encode_systematic(&c, &v).unwrap();
                assert_eq!(&cw.0[..m], &v[..]);
                for errs in subsets(len, budget / 2) {
                    let rest: Vec<usize> = (0..len).filter(|p| !errs.contains(p)).collect();
                    for erase in subsets(rest.len(), budget - 2 * errs.len()) {
                        let erase: Vec<usize> = erase.iter().map(|&i| rest[i]).collect();
                        // One representative error offset per pattern keeps
                        // this fast; the acceptance suite sweeps all values.
                        for offset in [1u64, q - 1] {
                            let mut z: Vec<Option<u64>> = cw.0.iter().copied().map(Some).collect();
                            for &p in &errs {
                                z[p] = Some((cw.0[p] + offset) % q);
                            }
                            for &p in &erase {
                                z[p] = None;
                            }
                            let d = rs_decode_errors_erasures(&c, &ReceivedWord(z)).unwrap();
                            assert_eq!(d.message, v);
                            assert_eq!(d.error_positions, errs);
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn roundtrip_random_large_field(seed_v in proptest::collection::vec(any::<u64>(), 3),
                                        err_pos in 0usize..8, err_val in 1u64..1000,
                                        erase_a in 0usize..8, erase_b in 0usize..8) {
            // q = 2^31 - 1, m = 3, len = 8: budget 5 covers 1 error + 2 erasures.
            let q = 2_147_483_647u64;
            let c = code(3, 8, q);
            let v: Vec<u64> = seed_v.iter().map(|s| s % q).collect();
            let cw = rs_encode_systematic(&c, &v).unwrap();
            let mut z: Vec<Option<u64>> = cw.0.iter().copied().map(Some).collect();
            z[err_pos] = Some((cw.0[err_pos] + err_val) % q);
            let mut expected_err = vec![err_pos];
            for p in [erase_a, erase_b] {
                if p == err_pos { expected_err.clear(); }
                z[p] = None;
            }
            let d = rs_decode_errors_erasures(&c, &ReceivedWord(z)).unwrap();
            prop_assert_eq!(d.message, v);
            prop_assert_eq!(d.error_positions, expected_err);
        }
    }
}
