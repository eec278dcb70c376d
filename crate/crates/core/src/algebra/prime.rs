use crate::error::{Error, Result};

use super::field::{PrimeModulus, MODULUS_LIMIT};

// Deterministic for every n < 2^64.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Upper limit on `first_n_primes` so the sieve stays in memory.
const MAX_PRIME_COUNT: usize = 2_000_000;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Miller-Rabin with a fixed witness set that is exact below 2^64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime_at_least(n: u64) -> Result<PrimeModulus> {
    let mut candidate = n.max(2);
    while candidate < MODULUS_LIMIT {
        if is_prime(candidate) {
            return Ok(PrimeModulus::new_unchecked(candidate));
        }
        candidate += 1;
    }
    Err(Error::Usage(format!("no prime in [{n}, 2^62)")))
}

/// The first `n` primes in increasing order, by a sieve of Eratosthenes.
pub fn first_n_primes(n: usize) -> Result<Vec<PrimeModulus>> {
    if n == 0 {
        return Err(Error::Usage("need at least one prime".into()));
    }
    if n > MAX_PRIME_COUNT {
        return Err(Error::Capacity(format!(
            "{n} primes requested, at most {MAX_PRIME_COUNT} supported"
        )));
    }
    // Rosser: p_n < n (ln n + ln ln n) for n >= 6.
    let bound = if n < 6 {
        15
    } else {
        let x = n as f64;
        (x * (x.ln() + x.ln().ln())).ceil() as usize + 1
    };
    let mut composite = vec![false; bound + 1];
    let mut primes = Vec::with_capacity(n);
    for i in 2..=bound {
        if composite[i] {
            continue;
        }
        primes.push(PrimeModulus::new_unchecked(i as u64));
        if primes.len() == n {
            break;
        }
        let mut j = i * i;
        while j <= bound {
            composite[j] = true;
            j += i;
        }
    }
    debug_assert_eq!(primes.len(), n);
    Ok(primes)
}
