//! Prime-field arithmetic, prime generation and streaming big-natural
//! reduction: the numeric substrate shared by both hash families.

mod bignat;
mod field;
mod poly;
mod prime;

pub use bignat::{bignat_mod_stream, crt_reconstruct, BigNat, DIGIT_BITS};
pub use field::{FieldElement, PrimeModulus, MODULUS_LIMIT};
pub use poly::{poly_eval_horner, poly_eval_raw};
pub use prime::{first_n_primes, is_prime, next_prime_at_least};
