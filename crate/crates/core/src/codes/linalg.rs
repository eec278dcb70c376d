use crate::algebra::PrimeModulus;

/// Solves `A x = b` over `F_p` by Gauss-Jordan elimination. `rows` holds the
/// augmented matrix `[A | b]`. Free variables are set to zero; `None` when
/// the system is inconsistent.
pub(crate) fn solve(p: PrimeModulus, mut rows: Vec<Vec<u64>>, unknowns: usize) -> Option<Vec<u64>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..unknowns {
        let Some(found) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let inv = p.inv(rows[r][c]).expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v = p.mul(*v, inv);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c] == 0 {
                continue;
            }
            let factor = rows[i][c];
            for j in c..=unknowns {
                let sub = p.mul(factor, rows[r][j]);
                rows[i][j] = p.sub(rows[i][j], sub);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rows[r..].iter().any(|row| row[unknowns] != 0) {
        return None;
    }
    let mut x = vec![0; unknowns];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][unknowns];
    }
    Some(x)
}

/// Quotient and remainder of `num / den`, coefficients lowest degree first.
pub(crate) fn poly_divmod(p: PrimeModulus, num: &[u64], den: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let den_deg = den.iter().rposition(|&c| c != 0).expect("nonzero divisor");
    let lead_inv = p.inv(den[den_deg]).expect("nonzero lead");
    let mut rem = num.to_vec();
    if rem.len() <= den_deg {
        return (vec![], rem);
    }
    let mut quot = vec![0; rem.len() - den_deg];
    for shift in (0..quot.len()).rev() {
        let coef = p.mul(rem[shift + den_deg], lead_inv);
        quot[shift] = coef;
        if coef == 0 {
            continue;
        }
        for (j, &d) in den[..=den_deg].iter().enumerate() {
            rem[shift + j] = p.sub(rem[shift + j], p.mul(coef, d));
        }
    }
    rem.truncate(den_deg);
    (quot, rem)
}
