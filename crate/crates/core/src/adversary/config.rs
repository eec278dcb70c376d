use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hash_families::{derive_family, FamilyKind};
use crate::protocol::Variant;

use super::experiment::{run_experiment, sweep, ExperimentConfig, MessageSource, SweepRow};
use super::ProverStrategy;

/// How the experiment picks the audited data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MessageChoice {
    Random,
    RandomPerTrial,
    Zero,
}

impl MessageChoice {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(MessageChoice::Random),
            "random-per-trial" | "fresh" => Ok(MessageChoice::RandomPerTrial),
            "zero" => Ok(MessageChoice::Zero),
            _ => Err(Error::Usage(format!("unknown message choice {s:?}"))),
        }
    }
}

/// A parsed experiment file.
///
/// Plain `key=value` lines; `#` starts a comment. Keys: `kind`, `k`,
/// `epsilon`, `variant`, `strategy`, `t` (comma list, sweeps partial-codeword
/// provers), `trials`, `seed`, `s`, `r`, `e`, `message`
/// (`random`, `random-per-trial`, `zero`) and `members` (comma list of
/// colluding provers running `strategy`).
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: FamilyKind,
    pub k: usize,
    pub epsilon: f64,
    pub variant: Variant,
    pub strategy: ProverStrategy,
    pub t: Option<Vec<usize>>,
    pub trials: u64,
    pub seed: u64,
    pub s: usize,
    pub r: usize,
    pub e: usize,
    pub message: MessageChoice,
    pub members: Option<BTreeSet<usize>>,
}

fn number<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Usage(format!("{key}: cannot parse {v:?}")))
}

fn list(key: &str, v: &str) -> Result<Vec<usize>> {
    v.split(',').map(|x| number(key, x.trim())).collect()
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut kind = None;
        let mut k = None;
        let mut epsilon = None;
        let mut spec = ExperimentSpec {
            kind: FamilyKind::Polynomial,
            k: 0,
            epsilon: 0.0,
            variant: Variant::Single,
            strategy: ProverStrategy::Honest,
            t: None,
            trials: 1000,
            seed: 0,
            s: 1,
            r: 0,
            e: 0,
            message: MessageChoice::Random,
            members: None,
        };
        let mut strategy_given = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("line {}: expected key=value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "kind" => kind = Some(value.parse::<FamilyKind>()?),
                "k" => k = Some(number(key, value)?),
                "epsilon" => epsilon = Some(number(key, value)?),
                "variant" => spec.variant = value.parse()?,
                "strategy" => {
                    spec.strategy = ProverStrategy::parse(value)?;
                    strategy_given = true;
                }
                "t" => spec.t = Some(list(key, value)?),
                "trials" => spec.trials = number(key, value)?,
                "seed" => spec.seed = number(key, value)?,
                "s" => spec.s = number(key, value)?,
                "r" => spec.r = number(key, value)?,
                "e" => spec.e = number(key, value)?,
                "message" => spec.message = MessageChoice::parse(value)?,
                "members" => spec.members = Some(list(key, value)?.into_iter().collect()),
                _ => return Err(Error::Usage(format!("line {}: unknown key {key:?}", lineno + 1))),
            }
        }
        spec.kind = kind.ok_or_else(|| Error::Usage("missing key kind".into()))?;
        spec.k = k.ok_or_else(|| Error::Usage("missing key k".into()))?;
        spec.epsilon = epsilon.ok_or_else(|| Error::Usage("missing key epsilon".into()))?;
        if spec.t.is_some() && strategy_given && !matches!(spec.strategy, ProverStrategy::PartialCodeword(_)) {
            return Err(Error::Usage("t sweeps partial-codeword provers; drop the strategy key".into()));
        }
        Ok(spec)
    }

    pub fn to_config(&self) -> Result<ExperimentConfig> {
        let family = derive_family(self.kind, self.k, self.epsilon)?;
        let strategy = match &self.members {
            Some(m) => ProverStrategy::Colluding { members: m.clone(), inner: Box::new(self.strategy.clone()) },
            None => self.strategy.clone(),
        };
        let message = match self.message {
            MessageChoice::Random => MessageSource::Random,
            MessageChoice::RandomPerTrial => MessageSource::RandomPerTrial,
            MessageChoice::Zero => MessageSource::Zero,
        };
        Ok(ExperimentConfig {
            family,
            variant: self.variant,
            s: self.s,
            r: self.r,
            e: self.e,
            strategies: vec![strategy],
            message,
            trials: self.trials,
            seed: self.seed,
        })
    }

    /// Runs the sweep over `t`, or one experiment if no `t` is given.
    pub fn run(&self) -> Result<Vec<SweepRow>> {
        let cfg = self.to_config()?;
        match &self.t {
            Some(ts) => sweep(&cfg, ts),
            None => Ok(vec![SweepRow::from_report(None, &run_experiment(&cfg)?)]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_keys() {
        let text = "# curve\nkind=polynomial\nk=4\nepsilon=0.5\nvariant=single\nt=0,8,16\ntrials=500\nseed=3\n";
        let spec = ExperimentSpec::parse(text).unwrap();
        assert_eq!(spec.t, Some(vec![0, 8, 16]));
        let rows = spec.run().unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[2].passes, 500);
    }

    #[test]
    fn colluding_members() {
        let text = "kind=rs\nk=6\nepsilon=0.7\nvariant=rs\ns=3\nr=1\ne=0\nstrategy=uniform\nmembers=2\ntrials=50";
        let cfg = ExperimentSpec::parse(text).unwrap().to_config().unwrap();
        assert!(matches!(&cfg.strategies[0], ProverStrategy::Colluding { members, .. } if members.contains(&2)));
    }

    #[test]
    fn rejects_bad_files() {
        for text in ["k=4\nepsilon=0.5", "kind=rs\nk=4\nepsilon=0.5\nbogus=1", "kind=rs\nk=x\nepsilon=0.5", "kind=rs k=4"] {
            assert!(matches!(ExperimentSpec::parse(text), Err(Error::Usage(_))), "{text}");
        }
        let t_and_strategy = "kind=rs\nk=4\nepsilon=0.5\nt=1\nstrategy=zero";
        assert!(ExperimentSpec::parse(t_and_strategy).is_err());
    }
}
