//! Exhaustive certification of small instances: code distance, list size at
//! the Johnson radius, exact collision probability and error-and-erasure
//! decoding. Each check yields one pass/fail row.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::algebra::PrimeModulus;
use crate::codes::{
    brute_force_list_decode, johnson_list_bound, johnson_radius, min_distance_exhaustive, rs_decode_errors_erasures,
    rs_encode_systematic, ReceivedWord, SystematicRSCode,
};
use crate::error::Result;
use crate::hash_families::{collision_probability_exact, HashFamilyDescriptor};

#[derive(Debug, Clone, PartialEq)]
pub struct CertRow {
    pub suite: &'static str,
    pub instance: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
    pub elapsed: Duration,
}

impl fmt::Display for CertRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<10} {:<22} expected {:<14} observed {:<14} {:>8.3}s",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.instance,
            self.expected,
            self.observed,
            self.elapsed.as_secs_f64()
        )
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, Duration)> {
    let start = Instant::now();
    let v = f()?;
    Ok((v, start.elapsed()))
}

fn poly(k: usize, n: usize, q: u64) -> HashFamilyDescriptor {
    HashFamilyDescriptor::polynomial(k, n, PrimeModulus::new(q).expect("prime")).expect("valid family")
}

fn label(fam: &HashFamilyDescriptor) -> String {
    match fam.field() {
        Some(q) => format!("poly q={q} k={} n={}", fam.k(), fam.n()),
        None => format!("crt k={} n={}", fam.k(), fam.n()),
    }
}

/// The small families every suite runs on.
pub fn certification_families() -> Vec<HashFamilyDescriptor> {
    vec![poly(2, 5, 5), poly(3, 7, 7), HashFamilyDescriptor::karp_rabin(2, 4).expect("valid family")]
}

/// Minimum distance equals `n - k + 1`.
pub fn distance_suite() -> Result<Vec<CertRow>> {
    certification_families()
        .iter()
        .map(|fam| {
            let (d, elapsed) = timed(|| min_distance_exhaustive(fam))?;
            let want = fam.n() - fam.k() + 1;
            Ok(CertRow {
                suite: "distance",
                instance: label(fam),
                expected: want.to_string(),
                observed: d.to_string(),
                passed: d == want,
                elapsed,
            })
        })
        .collect()
}

/// Largest list over every received word at the Johnson radius, against
/// the bound `2 * sum of alphabet sizes`.
pub fn johnson_suite() -> Result<CertRow> {
    let fam = poly(2, 5, 5);
    let q = 5u64;
    let n = fam.n();
    let radius = johnson_radius(n, n - fam.k() + 1);
    let bound = johnson_list_bound(&fam);
    let (max, elapsed) = timed(|| {
        (0..q.pow(n as u32))
            .into_par_iter()
            .map(|idx| {
                let z = ReceivedWord((0..n).map(|j| Some(idx / q.pow(j as u32) % q)).collect());
                brute_force_list_decode(&fam, &z, radius).map(|l| l.len() as u64)
            })
            .try_reduce(|| 0, |a, b| Ok(a.max(b)))
    })?;
    Ok(CertRow {
        suite: "johnson",
        instance: format!("{} radius={radius}", label(&fam)),
        expected: format!("<= {bound}"),
        observed: max.to_string(),
        passed: max <= bound,
        elapsed,
    })
}

/// Exact collision probability is at most `(k - 1) / n`.
pub fn collision_suite() -> Result<Vec<CertRow>> {
    certification_families()
        .iter()
        .map(|fam| {
            let (p, elapsed) = timed(|| collision_probability_exact(fam))?;
            let eps = fam.epsilon_actual();
            Ok(CertRow {
                suite: "collision",
                instance: label(fam),
                expected: format!("<= {eps}"),
                observed: p.to_string(),
                passed: p <= eps,
                elapsed,
            })
        })
        .collect()
}

/// Every message, every single error (position and value) and every erasure
/// set of size at most 2 with `2r' + e' <= 4`, for the systematic code
/// q = 7, m = 2, length 6. Counts decodes that return the true message and
/// exact error set. `sabotage` pushes one case past the budget so the row
/// must fail.
pub fn rs_soundness_suite(sabotage: bool) -> Result<CertRow> {
    let q = PrimeModulus::new(7)?;
    let code = SystematicRSCode::new(2, 6, q)?;
    let len = code.block_len();
    let budget = code.budget();
    // (optional error as position and offset, erased positions)
    type Pattern = (Option<(usize, u64)>, Vec<usize>);
    let mut patterns: Vec<Pattern> = Vec::new();
    let erasure_sets: Vec<Vec<usize>> = std::iter::once(vec![])
        .chain((0..len).map(|a| vec![a]))
        .chain((0..len).flat_map(|a| (a + 1..len).map(move |b| vec![a, b])))
        .collect();
    for erased in &erasure_sets {
        patterns.push((None, erased.clone()));
        if 2 + erased.len() > budget {
            continue;
        }
        for pos in (0..len).filter(|p| !erased.contains(p)) {
            for delta in 1..q.get() {
                patterns.push((Some((pos, delta)), erased.clone()));
            }
        }
    }
    let messages: Vec<[u64; 2]> = (0..q.get()).flat_map(|a| (0..q.get()).map(move |b| [a, b])).collect();
    let total = (messages.len() * patterns.len()) as u64;

    let (good, elapsed) = timed(|| {
        messages
            .par_iter()
            .enumerate()
            .map(|(mi, v)| {
                let c = rs_encode_systematic(&code, v)?;
                let mut good = 0u64;
                for (pi, (error, erased)) in patterns.iter().enumerate() {
                    let mut z = c.to_received();
                    let mut want_errors = vec![];
                    if let Some((pos, delta)) = *error {
                        z.0[pos] = Some(q.add(c.0[pos], delta));
                        want_errors.push(pos);
                    }
                    for &e in erased {
                        z.0[e] = None;
                    }
                    if sabotage && mi == 0 && pi == 0 {
                        // Three errors: past what any decoder can correct here.
                        for p in [0, 2, 4] {
                            z.0[p] = Some(q.add(c.0[p], 1));
                        }
                    }
                    if let Ok(d) = rs_decode_errors_erasures(&code, &z) {
                        good += (d.message == v[..] && d.error_positions == want_errors) as u64;
                    }
                }
                Ok(good)
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))
    })?;
    Ok(CertRow {
        suite: "rs-decode",
        instance: format!("q=7 m=2 len=6 r=1 e=2 ({} cases)", total),
        expected: format!("{total}/{total}"),
        observed: format!("{good}/{total}"),
        passed: good == total,
        elapsed,
    })
}

/// Every suite, in a fixed order.
pub fn certify_all(sabotage: bool) -> Result<Vec<CertRow>> {
    let mut rows = distance_suite()?;
    rows.push(johnson_suite()?);
    rows.extend(collision_suite()?);
    rows.push(rs_soundness_suite(sabotage)?);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_green_and_sabotage_flips_a_row() {
        let rows = certify_all(false).unwrap();
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| r.passed), "{rows:#?}");
        let broken = rs_soundness_suite(true).unwrap();
        assert!(!broken.passed);
    }

    #[test]
    fn rs_case_count() {
        // Per message: 22 erasure-only patterns, plus a single error
        // (6 values) under 0, 1 or 2 erasures elsewhere: 6*6 + 6*5*6 + 15*4*6.
        let row = rs_soundness_suite(false).unwrap();
        assert!(row.instance.contains(&format!("({} cases)", 49 * (22 + 36 + 180 + 360))), "{}", row.instance);
    }
}
