use rand::Rng as _;

use crate::algebra::{crt_reconstruct, BigNat};
use crate::bits::BitWriter;
use crate::codes::encode_unchecked;
use crate::error::{Error, Result};
use crate::hash_families::{hash_eval_unchecked, HashFamilyDescriptor, Message};
use crate::protocol::Response;
use crate::rng::Rng;

use super::ProverStrategy;

/// Overhead of a non-empty store: strategy tag (8 bits) and symbol count
/// (32 bits). An empty store serializes to nothing.
pub const STORE_HEADER_BITS: u64 = 8 + 32;

/// How an unresponsive prover stays quiet on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SilenceMode {
    /// Sends an explicit NO_RESPONSE frame.
    Explicit,
    /// Sends nothing and lets the verifier time out.
    Timeout,
}

/// Size and provenance of what a prover retained.
#[derive(Debug, Clone, PartialEq)]
pub struct StoreReport {
    pub retained_bits: u64,
    pub strategy: ProverStrategy,
}

#[derive(Debug, Clone)]
enum Kept {
    Full(Message),
    CodewordPrefix(Vec<u64>),
    /// The message rebuilt from the kept symbols, zeros (or the CRT lift)
    /// elsewhere.
    RawPrefix(Message),
    Nothing,
}

/// A prover's retained string `y` plus the answer rule that reads it.
#[derive(Debug, Clone)]
pub struct ProverStore {
    fam: HashFamilyDescriptor,
    strategy: ProverStrategy,
    kept: Kept,
    y: Vec<u8>,
    retained_bits: u64,
}

/// Builds the store for a single prover.
pub fn build_store(strategy: &ProverStrategy, fam: &HashFamilyDescriptor, x: &Message) -> Result<ProverStore> {
    build_store_for(strategy, 1, fam, x)
}

/// Builds the store prover `i` (1-based) keeps for `x` under `fam`.
pub fn build_store_for(
    strategy: &ProverStrategy,
    i: usize,
    fam: &HashFamilyDescriptor,
    x: &Message,
) -> Result<ProverStore> {
    fam.check_message(x)?;
    let strategy = strategy.for_prover(i).clone();
    let mut w = BitWriter::new();
    let mut header = |w: &mut BitWriter, tag: u64, count: usize| {
        w.write(tag, 8);
        w.write(count as u64, 32);
    };
    let kept = match &strategy {
        ProverStrategy::Honest | ProverStrategy::Unresponsive { .. } => {
            write_message(&mut header, &mut w, fam, x);
            Kept::Full(x.clone())
        }
        ProverStrategy::PartialCodeword(t) => {
            let t = *t;
            if t > fam.n() {
                return Err(Error::Usage(format!("cannot keep {t} of {} codeword symbols", fam.n())));
            }
            let prefix = encode_unchecked(fam, x).0[..t].to_vec();
            if t > 0 {
                header(&mut w, 1, t);
                for (j, &sym) in prefix.iter().enumerate() {
                    w.write(sym, coordinate_bits(fam, j + 1));
                }
            }
            Kept::CodewordPrefix(prefix)
        }
        ProverStrategy::PartialRaw(t) => {
            let t = *t;
            if t > fam.k() {
                return Err(Error::Usage(format!("cannot keep {t} of {} message symbols", fam.k())));
            }
            let partial = match x {
                Message::Symbols(sym) => {
                    if t > 0 {
                        header(&mut w, 2, t);
                        let width = fam.symbol_bits();
                        for &v in &sym[..t] {
                            w.write(v, width);
                        }
                    }
                    let mut kept = vec![0u64; fam.k()];
                    kept[..t].copy_from_slice(&sym[..t]);
                    Message::Symbols(kept)
                }
                Message::Natural(v) => {
                    let primes = &fam.message_primes().expect("karp-rabin")[..t];
                    let residues: Vec<u64> = primes.iter().map(|p| v.rem_small(p.get())).collect();
                    if t > 0 {
                        header(&mut w, 2, t);
                        for (r, p) in residues.iter().zip(primes) {
                            w.write(*r, p.symbol_bits());
                        }
                    }
                    Message::Natural(crt_reconstruct(&residues, primes)?)
                }
            };
            Kept::RawPrefix(partial)
        }
        ProverStrategy::UniformGuesser | ProverStrategy::ZeroAnswerer => Kept::Nothing,
        ProverStrategy::Colluding { .. } => unreachable!("resolved by for_prover"),
    };
    let retained_bits = w.bit_len();
    Ok(ProverStore { fam: fam.clone(), strategy, kept, y: w.into_bytes(), retained_bits })
}

fn coordinate_bits(fam: &HashFamilyDescriptor, i: usize) -> u32 {
    fam.coordinate_modulus(i).expect("index in range").symbol_bits()
}

fn write_message(
    header: &mut impl FnMut(&mut BitWriter, u64, usize),
    w: &mut BitWriter,
    fam: &HashFamilyDescriptor,
    x: &Message,
) {
    match x {
        Message::Symbols(sym) => {
            header(w, 0, sym.len());
            let width = fam.symbol_bits();
            for &v in sym {
                w.write(v, width);
            }
        }
        Message::Natural(v) => {
            // Fixed width: enough bits for the largest message prod p_i - 1.
            let bound = BigNat::product(fam.message_primes().expect("karp-rabin").iter().map(|p| p.get()));
            let width = if bound == BigNat::from_u64(2) { 1 } else { bound.bit_len() };
            header(w, 0, fam.k());
            for b in (0..width).rev() {
                w.write(v.bit(b) as u64, 1);
            }
        }
    }
}

impl ProverStore {
    pub fn family(&self) -> &HashFamilyDescriptor {
        &self.fam
    }

    pub fn strategy(&self) -> &ProverStrategy {
        &self.strategy
    }

    /// Canonical serialization of what the prover kept.
    pub fn y(&self) -> &[u8] {
        &self.y
    }

    pub fn retained_bits(&self) -> u64 {
        self.retained_bits
    }

    pub fn report(&self) -> StoreReport {
        StoreReport { retained_bits: self.retained_bits, strategy: self.strategy.clone() }
    }

    pub fn silence_mode(&self) -> Option<SilenceMode> {
        match self.strategy {
            ProverStrategy::Unresponsive { mode, .. } => Some(mode),
            _ => None,
        }
    }

    /// The prover's reply to challenge `beta` (1-based). Randomness comes only
    /// from `rng`, so a trial replays from its seed.
    pub fn answer(&self, beta: u64, rng: &mut Rng) -> Response {
        let i = beta as usize;
        if i == 0 || i > self.fam.n() {
            return Response::Value(0);
        }
        let guess = |rng: &mut Rng| {
            let q = self.fam.coordinate_modulus(i).expect("index checked").get();
            rng.gen_range(0..q)
        };
        match (&self.strategy, &self.kept) {
            (ProverStrategy::Unresponsive { probability, .. }, Kept::Full(x)) => {
                if *probability > 0.0 && rng.gen_bool(probability.min(1.0)) {
                    Response::NoResponse
                } else {
                    Response::Value(hash_eval_unchecked(&self.fam, x, i).value())
                }
            }
            (_, Kept::Full(x)) => Response::Value(hash_eval_unchecked(&self.fam, x, i).value()),
            (_, Kept::CodewordPrefix(prefix)) => match prefix.get(i - 1) {
                Some(&v) => Response::Value(v),
                None => Response::Value(guess(rng)),
            },
            (_, Kept::RawPrefix(partial)) => Response::Value(hash_eval_unchecked(&self.fam, partial, i).value()),
            (ProverStrategy::ZeroAnswerer, Kept::Nothing) => Response::Value(0),
            (_, Kept::Nothing) => Response::Value(guess(rng)),
        }
    }

    /// Closed-form single-check pass probability over a uniform `beta`, where
    /// the strategy admits one.
    pub fn analytic_pass_rate(&self) -> Option<f64> {
        let n = self.fam.n();
        let guess_rate = |from: usize| -> f64 {
            (from + 1..=n)
                .map(|i| 1.0 / self.fam.coordinate_modulus(i).expect("in range").get() as f64)
                .sum()
        };
        match &self.strategy {
            ProverStrategy::Honest => Some(1.0),
            ProverStrategy::PartialCodeword(t) => Some((*t as f64 + guess_rate(*t)) / n as f64),
            ProverStrategy::UniformGuesser => Some(guess_rate(0) / n as f64),
            ProverStrategy::Unresponsive { probability, .. } => Some(1.0 - probability),
            _ => None,
        }
    }
}
