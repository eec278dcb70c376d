use crate::error::{Error, Result};

use super::field::{FieldElement, PrimeModulus};

/// Evaluates `sum coeffs[i] * point^i` by Horner's rule.
pub fn poly_eval_horner(coeffs: &[FieldElement], point: FieldElement) -> Result<FieldElement> {
    if coeffs.is_empty() {
        return Err(Error::Usage("empty coefficient sequence".into()));
    }
    let p = point.modulus();
    if let Some(c) = coeffs.iter().find(|c| c.modulus() != p) {
        return Err(Error::Usage(format!(
            "coefficient modulus {} differs from point modulus {p}",
            c.modulus()
        )));
    }
    let mut acc = 0;
    for c in coeffs.iter().rev() {
        acc = p.add(p.mul(acc, point.value()), c.value());
    }
    Ok(p.element(acc))
}

/// Horner evaluation over raw canonical residues, lowest degree first.
#[inline]
pub fn poly_eval_raw(p: PrimeModulus, coeffs: &[u64], point: u64) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0, |acc, &c| p.add(p.mul(acc, point), c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(p: u64, coeffs: &[u64], point: u64) -> u64 {
        let mut sum = 0u64;
        for (i, &c) in coeffs.iter().enumerate() {
            let mut term = c;
            for _ in 0..i {
                term = term * point % p;
            }
            sum = (sum + term) % p;
        }
        sum
    }

    fn elems(p: PrimeModulus, v: &[u64]) -> Vec<FieldElement> {
        v.iter().map(|&x| p.element(x)).collect()
    }

    #[test]
    fn examples() {
        let p5 = PrimeModulus::new(5).unwrap();
        let p7 = PrimeModulus::new(7).unwrap();
        let x = elems(p5, &[1, 2]);
        assert_eq!(poly_eval_horner(&x, p5.element(3)).unwrap().value(), 2);
        assert_eq!(poly_eval_horner(&x, p5.element(0)).unwrap().value(), 1);
        assert_eq!(poly_eval_horner(&elems(p7, &[0, 0, 0]), p7.element(4)).unwrap().value(), 0);
    }

    #[test]
    fn errors() {
        let p5 = PrimeModulus::new(5).unwrap();
        let p7 = PrimeModulus::new(7).unwrap();
        assert!(matches!(poly_eval_horner(&[], p5.element(1)), Err(Error::Usage(_))));
        assert!(matches!(
            poly_eval_horner(&elems(p7, &[1]), p5.element(1)),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn matches_naive_exhaustive_p5() {
        let p = PrimeModulus::new(5).unwrap();
        for k in 1..=3u32 {
            for idx in 0..5u64.pow(k) {
                let coeffs: Vec<u64> = (0..k).map(|j| idx / 5u64.pow(j) % 5).collect();
                for point in 0..5 {
                    let expected = naive(5, &coeffs, point);
                    assert_eq!(poly_eval_raw(p, &coeffs, point), expected);
                    let got = poly_eval_horner(&elems(p, &coeffs), p.element(point)).unwrap();
                    assert_eq!(got.value(), expected);
                }
            }
        }
    }
}
