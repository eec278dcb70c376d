//! Simulated provers, honest and cheating, and the seeded Monte-Carlo engine
//! that measures pass probability against retained storage.

mod config;
mod experiment;
mod store;

pub use config::{ExperimentSpec, MessageChoice};
pub use experiment::{
    run_experiment, sweep, ExperimentConfig, ExperimentReport, MessageSource, SweepRow, CSV_HEADER,
};
pub use store::{build_store, build_store_for, ProverStore, SilenceMode, StoreReport, STORE_HEADER_BITS};

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// What a prover keeps and how it answers.
#[derive(Debug, Clone, PartialEq)]
pub enum ProverStrategy {
    /// Keeps its data; answers truthfully.
    Honest,
    /// Keeps the first `t` codeword symbols; guesses uniformly elsewhere.
    PartialCodeword(usize),
    /// Keeps the first `t` message symbols (Karp-Rabin: residues modulo the
    /// first `t` primes) and answers from that, zeros elsewhere.
    PartialRaw(usize),
    /// Keeps nothing; answers a uniform residue.
    UniformGuesser,
    /// Keeps nothing; always answers 0.
    ZeroAnswerer,
    /// Provers in `members` (1-based) follow `inner`; the rest are honest.
    Colluding { members: BTreeSet<usize>, inner: Box<ProverStrategy> },
    /// Keeps its data but stays silent with the given probability.
    Unresponsive { mode: SilenceMode, probability: f64 },
}

impl ProverStrategy {
    /// The strategy prover `i` (1-based) actually runs.
    pub fn for_prover(&self, i: usize) -> &ProverStrategy {
        match self {
            ProverStrategy::Colluding { members, inner } if members.contains(&i) => inner.for_prover(i),
            ProverStrategy::Colluding { .. } => &ProverStrategy::Honest,
            other => other,
        }
    }

    pub fn is_honest(&self) -> bool {
        matches!(self, ProverStrategy::Honest)
    }

    /// Parses `honest`, `partial:T`, `raw:T`, `uniform`, `zero`, `silent`,
    /// `no-response`, `flaky:P` (explicit no-response with probability P).
    pub fn parse(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let count = |a: Option<&str>| -> Result<usize> {
            a.ok_or_else(|| Error::Usage(format!("strategy `{name}` needs `:t`")))?
                .parse()
                .map_err(|_| Error::Usage(format!("bad count in strategy `{s}`")))
        };
        match name {
            "honest" => Ok(ProverStrategy::Honest),
            "partial" | "partial-codeword" => Ok(ProverStrategy::PartialCodeword(count(arg)?)),
            "raw" | "partial-raw" => Ok(ProverStrategy::PartialRaw(count(arg)?)),
            "uniform" => Ok(ProverStrategy::UniformGuesser),
            "zero" => Ok(ProverStrategy::ZeroAnswerer),
            "silent" => Ok(ProverStrategy::Unresponsive { mode: SilenceMode::Timeout, probability: 1.0 }),
            "no-response" => Ok(ProverStrategy::Unresponsive { mode: SilenceMode::Explicit, probability: 1.0 }),
            "flaky" => {
                let p: f64 = arg
                    .ok_or_else(|| Error::Usage("strategy `flaky` needs `:p`".into()))?
                    .parse()
                    .map_err(|_| Error::Usage(format!("bad probability in `{s}`")))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Usage(format!("probability {p} outside [0, 1]")));
                }
                Ok(ProverStrategy::Unresponsive { mode: SilenceMode::Explicit, probability: p })
            }
            other => Err(Error::Usage(format!("unknown strategy `{other}`"))),
        }
    }
}

impl fmt::Display for ProverStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProverStrategy::Honest => write!(f, "honest"),
            ProverStrategy::PartialCodeword(t) => write!(f, "partial:{t}"),
            ProverStrategy::PartialRaw(t) => write!(f, "raw:{t}"),
            ProverStrategy::UniformGuesser => write!(f, "uniform"),
            ProverStrategy::ZeroAnswerer => write!(f, "zero"),
            ProverStrategy::Colluding { members, inner } => {
                let m: Vec<String> = members.iter().map(|i| i.to_string()).collect();
                write!(f, "colluding[{}]:{inner}", m.join(","))
            }
            ProverStrategy::Unresponsive { mode: SilenceMode::Timeout, probability } if *probability >= 1.0 => {
                write!(f, "silent")
            }
            ProverStrategy::Unresponsive { probability, .. } if *probability >= 1.0 => write!(f, "no-response"),
            ProverStrategy::Unresponsive { probability, .. } => write!(f, "flaky:{probability}"),
        }
    }
}
