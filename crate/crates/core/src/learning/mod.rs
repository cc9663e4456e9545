//! Per-SBS learners: the echo-state transfer agent and the tabular baselines.

pub mod actions;
pub mod esn;
pub mod policy;
pub mod qlearn;
mod run;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use actions::{action_space_size, enumerate_actions};
pub use esn::{build_input, EsnAgent, EsnParams, LearningRate, Readout};
pub use policy::{argmax, select_action, Exploration};
pub use qlearn::{q_update, QAgent};
pub use run::{
    convergence_iteration, run_period, Agent, AgentSettings, Learners, PeriodMetrics,
    SbsPeriodMetrics, CONVERGENCE_TOLERANCE, CONVERGENCE_WINDOW,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    EsnTransfer,
    EsnNoCorr,
    QCorr,
    QNoCorr,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::EsnTransfer,
        Algorithm::EsnNoCorr,
        Algorithm::QCorr,
        Algorithm::QNoCorr,
    ];

    pub fn uses_esn(self) -> bool {
        matches!(self, Algorithm::EsnTransfer | Algorithm::EsnNoCorr)
    }

    pub fn correlation_aware(self) -> bool {
        matches!(self, Algorithm::EsnTransfer | Algorithm::QCorr)
    }

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::EsnTransfer => "esn-transfer",
            Algorithm::EsnNoCorr => "esn-nocorr",
            Algorithm::QCorr => "q-corr",
            Algorithm::QNoCorr => "q-nocorr",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match norm.as_str() {
            "esntransfer" | "esn" => Ok(Algorithm::EsnTransfer),
            "esnnocorr" => Ok(Algorithm::EsnNoCorr),
            "qcorr" | "q" => Ok(Algorithm::QCorr),
            "qnocorr" => Ok(Algorithm::QNoCorr),
            _ => Err(Error::config(
                "algorithm",
                format!("unknown algorithm `{s}` (esn-transfer, esn-nocorr, q-corr, q-nocorr)"),
            )),
        }
    }
}
