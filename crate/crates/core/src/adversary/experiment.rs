use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_rational::Ratio;
use rand::Rng as _;
use rayon::prelude::*;

use crate::algebra::BigNat;
use crate::error::{Error, Result};
use crate::hash_families::{hash_eval_unchecked, FamilyKind, HashFamilyDescriptor, Message};
use crate::protocol::{
    multi_linear_preprocess, multi_linear_verify, multi_rs_preprocess, multi_rs_verify,
    multi_trivial_preprocess, multi_trivial_verify, single_preprocess, single_verify, split_message,
    zero_extended_chunk, ChunkPlan, Digest, Outcome, Response, Variant, Verdict,
};
use crate::rng::{seeded, trial_rng, Rng, PRNG_ALGORITHM};

use super::store::{build_store_for, ProverStore};
use super::ProverStrategy;

pub const CSV_HEADER: &str = "t,retained_bits,trials,passes,empirical_rate,analytic_rate";

/// Where the audited data comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum MessageSource {
    Fixed(Message),
    /// Karp-Rabin trivial variant: the `s` chunk messages themselves.
    Chunks(Vec<Message>),
    Zero,
    /// One uniform message drawn from the experiment seed.
    Random,
    /// A fresh uniform message every trial.
    RandomPerTrial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// The full family over messages of length `k`.
    pub family: HashFamilyDescriptor,
    pub variant: Variant,
    pub s: usize,
    pub r: usize,
    pub e: usize,
    /// One strategy per prover, or a single entry applied to every prover
    /// (resolved per prover, so `Colluding` works either way).
    pub strategies: Vec<ProverStrategy>,
    pub message: MessageSource,
    pub trials: u64,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Single-prover configuration.
    pub fn single(family: HashFamilyDescriptor, strategy: ProverStrategy, message: MessageSource, trials: u64, seed: u64) -> Self {
        ExperimentConfig { family, variant: Variant::Single, s: 1, r: 0, e: 0, strategies: vec![strategy], message, trials, seed }
    }

    fn strategy(&self, i: usize) -> &ProverStrategy {
        if self.strategies.len() == 1 {
            &self.strategies[0]
        } else {
            &self.strategies[i - 1]
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Usage("trials must be at least 1".into()));
        }
        if self.variant == Variant::Single && self.s != 1 {
            return Err(Error::Usage("the single variant has exactly one prover".into()));
        }
        if self.strategies.len() != 1 && self.strategies.len() != self.s {
            return Err(Error::Usage(format!("{} strategies for {} provers", self.strategies.len(), self.s)));
        }
        ChunkPlan::new(self.family.k(), self.s)?;
        if matches!(self.variant, Variant::Linear | Variant::RsParity) && self.family.kind() == FamilyKind::KarpRabin {
            return Err(Error::UnsupportedVariant(format!("{} needs the polynomial family", self.variant)));
        }
        Ok(())
    }

    fn describe(&self) -> String {
        let strategies: Vec<String> = self.strategies.iter().map(|s| s.to_string()).collect();
        format!(
            "kind={} k={} n={} q={} variant={} s={} r={} e={} strategy={} trials={} seed={}",
            self.family.kind(),
            self.family.k(),
            self.family.n(),
            self.family.max_alphabet(),
            self.variant,
            self.s,
            self.r,
            self.e,
            strategies.join(";"),
            self.trials,
            self.seed
        )
    }
}

/// Counts from trials in which every wrong answer fits the decoding budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IdentificationTally {
    pub within_budget: u64,
    /// Of those, trials where accused and erased equal the true wrong and
    /// silent sets.
    pub exact: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub trials: u64,
    pub passes: u64,
    pub undecidable: u64,
    pub empirical_rate: Ratio<u64>,
    /// Closed-form pass probability (single variant, strategies with one).
    pub analytic_rate: Option<f64>,
    /// Sum over provers.
    pub retained_bits: u64,
    /// Present for variants that attribute failures (trivial, rs-parity).
    pub identification: Option<IdentificationTally>,
    pub config: String,
    pub seed: u64,
    pub prng: &'static str,
}

impl ExperimentReport {
    pub fn empirical_f64(&self) -> f64 {
        *self.empirical_rate.numer() as f64 / *self.empirical_rate.denom() as f64
    }
}

/// Everything a trial needs once the message is fixed.
struct Instance {
    x: Option<Message>,
    chunk_family: Option<HashFamilyDescriptor>,
    chunks: Vec<Message>,
    /// What each prover honestly holds, under the family it answers in.
    assignments: Vec<(HashFamilyDescriptor, Message)>,
    stores: Vec<ProverStore>,
}

fn random_message(fam: &HashFamilyDescriptor, rng: &mut Rng) -> Message {
    match fam.kind() {
        FamilyKind::Polynomial => {
            let q = fam.field().expect("polynomial").get();
            Message::Symbols((0..fam.k()).map(|_| rng.gen_range(0..q)).collect())
        }
        FamilyKind::KarpRabin => {
            let bound = BigNat::product(fam.message_primes().expect("crt").iter().map(|p| p.get()));
            let bits = bound.bit_len();
            loop {
                let limbs: Vec<u32> = (0..bits.div_ceil(32))
                    .map(|j| {
                        let word: u32 = rng.gen();
                        let have = bits - 32 * j;
                        if have >= 32 { word } else { word & ((1u32 << have) - 1) }
                    })
                    .collect();
                let v = BigNat::from_limbs(limbs);
                if v < bound {
                    return Message::Natural(v);
                }
            }
        }
    }
}

fn build_instance(cfg: &ExperimentConfig, rng: &mut Rng) -> Result<Instance> {
    let fam = &cfg.family;
    let plan = ChunkPlan::new(fam.k(), cfg.s)?;
    let kr_trivial = cfg.variant == Variant::Trivial && fam.kind() == FamilyKind::KarpRabin;
    let chunk_family = (cfg.variant == Variant::Trivial).then(|| fam.chunk_family(cfg.s)).transpose()?;

    let (x, chunks) = if kr_trivial {
        let fc = chunk_family.as_ref().expect("trivial");
        let chunks = match &cfg.message {
            MessageSource::Chunks(c) => c.clone(),
            MessageSource::Zero => vec![fc.zero_message(); cfg.s],
            MessageSource::Random | MessageSource::RandomPerTrial => {
                (0..cfg.s).map(|_| random_message(fc, rng)).collect()
            }
            MessageSource::Fixed(_) => {
                return Err(Error::Usage("karp-rabin trivial experiments take chunk messages".into()))
            }
        };
        (None, chunks)
    } else {
        let x = match &cfg.message {
            MessageSource::Fixed(x) => x.clone(),
            MessageSource::Zero => fam.zero_message(),
            MessageSource::Random | MessageSource::RandomPerTrial => random_message(fam, rng),
            MessageSource::Chunks(_) => return Err(Error::Usage("chunk messages only apply to karp-rabin trivial".into())),
        };
        fam.check_message(&x)?;
        let chunks = if cfg.variant == Variant::Trivial { split_message(fam, &x, &plan)? } else { Vec::new() };
        (Some(x), chunks)
    };

    let assignments: Vec<(HashFamilyDescriptor, Message)> = match cfg.variant {
        Variant::Single => vec![(fam.clone(), x.clone().expect("single has x"))],
        Variant::Trivial => {
            let fc = chunk_family.clone().expect("trivial");
            chunks.iter().map(|c| (fc.clone(), c.clone())).collect()
        }
        Variant::Linear | Variant::RsParity => {
            let x = x.as_ref().expect("linear has x");
            (1..=cfg.s)
                .map(|i| Ok((fam.clone(), zero_extended_chunk(fam, x, &plan, i)?)))
                .collect::<Result<_>>()?
        }
    };
    let stores = assignments
        .iter()
        .enumerate()
        .map(|(idx, (f, m))| build_store_for(cfg.strategy(idx + 1), idx + 1, f, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(Instance { x, chunk_family, chunks, assignments, stores })
}

fn preprocess(cfg: &ExperimentConfig, inst: &Instance, seed: u64) -> Result<Digest> {
    let plan = ChunkPlan::new(cfg.family.k(), cfg.s)?;
    match cfg.variant {
        Variant::Single => single_preprocess(&cfg.family, inst.x.as_ref().expect("x"), seed),
        Variant::Trivial => {
            multi_trivial_preprocess(inst.chunk_family.as_ref().expect("chunk family"), &inst.chunks, &plan, seed)
        }
        Variant::Linear => multi_linear_preprocess(&cfg.family, inst.x.as_ref().expect("x"), &plan, seed),
        Variant::RsParity => multi_rs_preprocess(&cfg.family, inst.x.as_ref().expect("x"), &plan, cfg.r, cfg.e, seed),
    }
}

fn verify(cfg: &ExperimentConfig, inst: &Instance, digest: &Digest, responses: &[Response]) -> Result<Verdict> {
    match cfg.variant {
        Variant::Single => single_verify(&cfg.family, digest, responses[0]),
        Variant::Trivial => multi_trivial_verify(inst.chunk_family.as_ref().expect("chunk family"), digest, responses),
        Variant::Linear => multi_linear_verify(&cfg.family, digest, responses),
        Variant::RsParity => multi_rs_verify(&cfg.family, digest, responses),
    }
}

#[derive(Default, Clone, Copy)]
struct Tally {
    passes: u64,
    undecidable: u64,
    id: IdentificationTally,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally {
            passes: self.passes + o.passes,
            undecidable: self.undecidable + o.undecidable,
            id: IdentificationTally {
                within_budget: self.id.within_budget + o.id.within_budget,
                exact: self.id.exact + o.id.exact,
            },
        }
    }
}

fn run_trial(cfg: &ExperimentConfig, shared: Option<&Instance>, trial: u64) -> Result<Tally> {
    let mut rng = trial_rng(cfg.seed, trial);
    let fresh;
    let inst = match shared {
        Some(i) => i,
        None => {
            fresh = build_instance(cfg, &mut rng)?;
            &fresh
        }
    };
    let digest_seed: u64 = rng.gen();
    let digest = preprocess(cfg, inst, digest_seed)?;
    let responses: Vec<Response> = inst.stores.iter().map(|s| s.answer(digest.beta, &mut rng)).collect();
    let verdict = verify(cfg, inst, &digest, &responses)?;

    let mut wrong = BTreeSet::new();
    let mut silent = BTreeSet::new();
    for (idx, (resp, (f, m))) in responses.iter().zip(&inst.assignments).enumerate() {
        match resp {
            Response::NoResponse => {
                silent.insert(idx + 1);
            }
            Response::Value(a) if *a != hash_eval_unchecked(f, m, digest.beta as usize).value() => {
                wrong.insert(idx + 1);
            }
            Response::Value(_) => {}
        }
    }
    let within_budget = match cfg.variant {
        Variant::Trivial => true,
        Variant::RsParity => silent.len() <= cfg.e && wrong.len() <= cfg.r,
        _ => false,
    };
    let exact = within_budget && verdict.accused == wrong && verdict.erased == silent;
    Ok(Tally {
        passes: verdict.accepted() as u64,
        undecidable: (verdict.outcome == Outcome::Undecidable) as u64,
        id: IdentificationTally { within_budget: within_budget as u64, exact: exact as u64 },
    })
}

/// Runs `trials` independent audits, each with a fresh challenge drawn from
/// the trial's own stream `(seed, trial)`. Trials run in parallel; the report
/// depends only on the configuration.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let shared = match cfg.message {
        MessageSource::RandomPerTrial => None,
        _ => Some(build_instance(cfg, &mut seeded(cfg.seed))?),
    };
    let tally = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, shared.as_ref(), t))
        .try_reduce(Tally::default, |a, b| Ok(a + b))?;

    // Store sizes and analytic rates from a representative instance.
    let built;
    let probe = match &shared {
        Some(i) => i,
        None => {
            built = build_instance(cfg, &mut seeded(cfg.seed))?;
            &built
        }
    };
    let retained_bits = probe.stores.iter().map(|s| s.retained_bits()).sum();
    let analytic_rate = match cfg.variant {
        Variant::Single => probe.stores[0].analytic_pass_rate(),
        _ if probe.stores.iter().all(|s| s.strategy().is_honest()) => Some(1.0),
        _ => None,
    };
    let identification = matches!(cfg.variant, Variant::Trivial | Variant::RsParity).then_some(tally.id);
    Ok(ExperimentReport {
        trials: cfg.trials,
        passes: tally.passes,
        undecidable: tally.undecidable,
        empirical_rate: Ratio::new(tally.passes, cfg.trials),
        analytic_rate,
        retained_bits,
        identification,
        config: cfg.describe(),
        seed: cfg.seed,
        prng: PRNG_ALGORITHM,
    })
}

/// One point of the storage versus pass-probability curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Empty for a single run of a fixed strategy.
    pub t: Option<usize>,
    pub retained_bits: u64,
    pub trials: u64,
    pub passes: u64,
    pub empirical_rate: f64,
    pub analytic_rate: Option<f64>,
}

impl SweepRow {
    pub fn from_report(t: Option<usize>, r: &ExperimentReport) -> Self {
        SweepRow {
            t,
            retained_bits: r.retained_bits,
            trials: r.trials,
            passes: r.passes,
            empirical_rate: r.empirical_f64(),
            analytic_rate: r.analytic_rate,
        }
    }

    pub fn csv_line(&self) -> String {
        let t = self.t.map(|t| t.to_string()).unwrap_or_default();
        let mut line = format!("{t},{},{},{},{:.6},", self.retained_bits, self.trials, self.passes, self.empirical_rate);
        if let Some(a) = self.analytic_rate {
            let _ = write!(line, "{a:.6}");
        }
        line
    }

    pub fn to_csv(rows: &[SweepRow]) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in rows {
            out.push_str(&r.csv_line());
            out.push('\n');
        }
        out
    }
}

/// Runs the experiment once per `t`, every prover keeping `t` codeword symbols.
pub fn sweep(cfg: &ExperimentConfig, t_values: &[usize]) -> Result<Vec<SweepRow>> {
    t_values
        .iter()
        .map(|&t| {
            let mut c = cfg.clone();
            c.strategies = vec![ProverStrategy::PartialCodeword(t)];
            Ok(SweepRow::from_report(Some(t), &run_experiment(&c)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeModulus;

    fn fam(k: usize, n: usize, q: u64) -> HashFamilyDescriptor {
        HashFamilyDescriptor::polynomial(k, n, PrimeModulus::new(q).unwrap()).unwrap()
    }

    fn within_3_sigma(empirical: f64, p: f64, trials: u64) -> bool {
        (empirical - p).abs() <= 3.0 * (p * (1.0 - p) / trials as f64).sqrt() + 1e-12
    }

    #[test]
    fn honest_passes_every_variant() {
        let f = fam(6, 11, 11);
        for (variant, s) in [(Variant::Single, 1), (Variant::Trivial, 3), (Variant::Linear, 2), (Variant::RsParity, 3)] {
            let cfg = ExperimentConfig {
                family: f.clone(),
                variant,
                s,
                r: 1,
                e: 1,
                strategies: vec![ProverStrategy::Honest],
                message: MessageSource::RandomPerTrial,
                trials: 300,
                seed: 9,
            };
            let r = run_experiment(&cfg).unwrap();
            assert_eq!(r.passes, 300, "{variant}");
            assert_eq!(r.analytic_rate, Some(1.0));
        }
        let kr = HashFamilyDescriptor::karp_rabin(4, 9).unwrap();
        for (variant, s) in [(Variant::Single, 1), (Variant::Trivial, 2)] {
            let cfg = ExperimentConfig {
                family: kr.clone(),
                variant,
                s,
                r: 0,
                e: 0,
                strategies: vec![ProverStrategy::Honest],
                message: MessageSource::RandomPerTrial,
                trials: 200,
                seed: 3,
            };
            assert_eq!(run_experiment(&cfg).unwrap().passes, 200);
        }
    }

    #[test]
    fn partial_codeword_rate_matches_analytic() {
        let f = fam(4, 64, 67);
        for t in [0, 16, 32, 48, 64] {
            let cfg = ExperimentConfig::single(f.clone(), ProverStrategy::PartialCodeword(t), MessageSource::Random, 20_000, 7);
            let r = run_experiment(&cfg).unwrap();
            let p = r.analytic_rate.unwrap();
            let expected = t as f64 / 64.0 + (1.0 - t as f64 / 64.0) / 67.0;
            assert!((p - expected).abs() < 1e-12);
            assert!(within_3_sigma(r.empirical_f64(), p, r.trials), "t={t}: {} vs {p}", r.empirical_f64());
        }
    }

    #[test]
    fn zero_message_defeats_enforcement() {
        let cfg = ExperimentConfig::single(fam(8, 17, 17), ProverStrategy::ZeroAnswerer, MessageSource::Zero, 1_000, 1);
        let r = run_experiment(&cfg).unwrap();
        assert_eq!((r.passes, r.retained_bits), (1_000, 0));
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = ExperimentConfig::single(fam(4, 16, 17), ProverStrategy::UniformGuesser, MessageSource::RandomPerTrial, 5_000, 42);
        assert_eq!(run_experiment(&cfg).unwrap(), run_experiment(&cfg).unwrap());
        let mut other = cfg.clone();
        other.seed = 43;
        assert_ne!(run_experiment(&cfg).unwrap().passes, run_experiment(&other).unwrap().passes);
    }

    #[test]
    fn colluding_cheaters_identified_within_budget() {
        let f = fam(6, 13, 13);
        let cfg = ExperimentConfig {
            family: f,
            variant: Variant::RsParity,
            s: 3,
            r: 1,
            e: 1,
            strategies: vec![ProverStrategy::Colluding { members: [2].into(), inner: Box::new(ProverStrategy::UniformGuesser) }],
            message: MessageSource::RandomPerTrial,
            trials: 2_000,
            seed: 5,
        };
        let r = run_experiment(&cfg).unwrap();
        let id = r.identification.unwrap();
        assert_eq!(id.within_budget, 2_000);
        assert_eq!(id.exact, id.within_budget);
    }

    #[test]
    fn sweep_endpoints_and_monotone() {
        let f = fam(4, 20, 23);
        let cfg = ExperimentConfig::single(f, ProverStrategy::Honest, MessageSource::Random, 2_000, 11);
        let rows = sweep(&cfg, &[0, 5, 10, 15, 20]).unwrap();
        assert!((rows[0].analytic_rate.unwrap() - 1.0 / 23.0).abs() < 1e-12);
        assert_eq!(rows[4].analytic_rate, Some(1.0));
        assert_eq!(rows[4].passes, 2_000);
        assert!(rows.windows(2).all(|w| w[0].analytic_rate <= w[1].analytic_rate));
        assert!(rows.windows(2).all(|w| w[0].retained_bits < w[1].retained_bits));

        let uniform = run_experiment(&ExperimentConfig { strategies: vec![ProverStrategy::UniformGuesser], ..cfg.clone() }).unwrap();
        assert_eq!(uniform.analytic_rate, rows[0].analytic_rate);

        let csv = SweepRow::to_csv(&rows);
        assert!(csv.starts_with("t,retained_bits,trials,passes,empirical_rate,analytic_rate\n0,0,2000,"));
    }

    #[test]
    fn config_errors() {
        let f = fam(4, 11, 11);
        let mut cfg = ExperimentConfig::single(f.clone(), ProverStrategy::Honest, MessageSource::Random, 0, 1);
        assert!(matches!(run_experiment(&cfg), Err(Error::Usage(_))));
        cfg.trials = 1;
        cfg.s = 3;
        cfg.variant = Variant::Trivial;
        assert!(matches!(run_experiment(&cfg), Err(Error::Usage(_))));
        let kr = HashFamilyDescriptor::karp_rabin(2, 5).unwrap();
        let bad = ExperimentConfig { family: kr, variant: Variant::Linear, s: 2, ..cfg };
        assert!(matches!(run_experiment(&bad), Err(Error::UnsupportedVariant(_))));
    }
}
