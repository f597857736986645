//! Benchmark objectives.

pub mod beam;
pub mod chebyshev;
pub mod puc;
pub mod type0;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use beam::{BeamParams, BeamProblem};
pub use chebyshev::ChebyshevProblem;
pub use puc::{ripley_k, PucProblem};
pub use type0::Type0Problem;

/// Identifier of one of the four benchmark problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Chebyshev,
    Type0,
    Beam,
    Puc,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] = [Self::Chebyshev, Self::Type0, Self::Beam, Self::Puc];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Chebyshev => "chebyshev",
            Self::Type0 => "type0",
            Self::Beam => "beam",
            Self::Puc => "puc",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "chebyshev" | "chebychev" | "t8" => Ok(Self::Chebyshev),
            "type0" | "type-0" => Ok(Self::Type0),
            "beam" => Ok(Self::Beam),
            "puc" => Ok(Self::Puc),
            _ => Err(Error::UnknownProblem(s.to_string())),
        }
    }
}
