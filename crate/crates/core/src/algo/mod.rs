//! The four optimizers behind one dispatch point.

pub mod de;
pub mod iasa;
pub mod rasa;
pub mod sade;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{EvaluationBudget, Evaluator, Problem, RunRecord};
use crate::rng::RngStream;

pub use de::DeConfig;
pub use iasa::{IasaConfig, IasaPrecision, IntegerCodec};
pub use rasa::{Operator, Precision, RasaConfig};
pub use sade::SadeConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmKind {
    De,
    Sade,
    Rasa,
    Iasa,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 4] = [Self::De, Self::Sade, Self::Rasa, Self::Iasa];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::De => "de",
            Self::Sade => "sade",
            Self::Rasa => "rasa",
            Self::Iasa => "iasa",
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "de" => Ok(Self::De),
            "sade" => Ok(Self::Sade),
            "rasa" => Ok(Self::Rasa),
            "iasa" => Ok(Self::Iasa),
            _ => Err(Error::UnknownAlgorithm(s.to_string())),
        }
    }
}

/// A fully resolved configuration for one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "lowercase")]
pub enum AlgorithmConfig {
    De(DeConfig),
    Sade(SadeConfig),
    Rasa(RasaConfig),
    Iasa(IasaConfig),
}

impl AlgorithmConfig {
    pub fn kind(&self) -> AlgorithmKind {
        match self {
            Self::De(_) => AlgorithmKind::De,
            Self::Sade(_) => AlgorithmKind::Sade,
            Self::Rasa(_) => AlgorithmKind::Rasa,
            Self::Iasa(_) => AlgorithmKind::Iasa,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::De(c) => c.validate(),
            Self::Sade(c) => c.validate(),
            Self::Rasa(c) => c.validate(),
            Self::Iasa(c) => c.validate(),
        }
    }

    /// Drives the optimizer until the evaluator halts it.
    pub fn optimize(&self, ev: &mut Evaluator<'_>, rng: &mut RngStream) -> Result<()> {
        match self {
            Self::De(c) => de::optimize(c, ev, rng),
            Self::Sade(c) => sade::optimize(c, ev, rng),
            Self::Rasa(c) => rasa::optimize(c, ev, rng),
            Self::Iasa(c) => iasa::optimize(c, ev, rng),
        }
    }
}

/// One complete run: fresh budget, success at `value < threshold`.
pub fn run(
    problem: &dyn Problem,
    cfg: &AlgorithmConfig,
    max_calls: u64,
    threshold: f64,
    rng: &mut RngStream,
) -> Result<RunRecord> {
    let mut ev = Evaluator::new(problem, EvaluationBudget::new(max_calls), threshold);
    cfg.optimize(&mut ev, rng)?;
    Ok(ev.into_record(rng.seed()))
}
