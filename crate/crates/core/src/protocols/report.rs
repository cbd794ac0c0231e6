use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::register::{Register, RegisterBranch};
use crate::error::Result;
use crate::qmath::{BellOutcome, MeasureMode};

/// Output fidelity counted as success.
pub const SUCCESS_FIDELITY: f64 = 1.0 - 1e-10;

/// How branches are selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RunMode {
    /// Every possible outcome sequence.
    Enumerate,
    /// One outcome sequence drawn with a seeded ChaCha8 generator.
    Sample { seed: u64 },
}

impl RunMode {
    pub fn seed(&self) -> Option<u64> {
        match self {
            RunMode::Enumerate => None,
            RunMode::Sample { seed } => Some(*seed),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            RunMode::Enumerate => "enumerate",
            RunMode::Sample { .. } => "sample",
        }
    }
}

/// One outcome sequence of a protocol run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchRecord {
    /// Bell outcomes in measurement order.
    pub outcomes: Vec<BellOutcome>,
    pub probability: f64,
    /// Correction applied by the receivers, e.g. `"D:Z"`.
    pub correction: String,
    pub fidelity: f64,
    /// Smallest partial-transpose eigenvalue of the output pair, where one is tracked.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub min_pt_eigenvalue: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolReport {
    pub protocol: String,
    pub mode: String,
    pub seed: Option<u64>,
    pub branches: Vec<BranchRecord>,
    pub probability_sum: f64,
    /// Probability-weighted mean fidelity.
    pub mean_fidelity: f64,
    pub min_fidelity: f64,
    /// Two bits per Bell measurement in one run.
    pub classical_bits: usize,
    /// `min_fidelity ≥ 1 − 1e-10`.
    pub success: bool,
}

impl ProtocolReport {
    pub(crate) fn build(
        protocol: &str,
        mode: RunMode,
        measurements: usize,
        branches: Vec<BranchRecord>,
    ) -> Self {
        let probability_sum: f64 = branches.iter().map(|b| b.probability).sum();
        let weighted: f64 = branches.iter().map(|b| b.probability * b.fidelity).sum();
        let mean_fidelity = if probability_sum > 0.0 {
            weighted / probability_sum
        } else {
            0.0
        };
        let min_fidelity = branches
            .iter()
            .map(|b| b.fidelity)
            .fold(f64::INFINITY, f64::min);
        ProtocolReport {
            protocol: protocol.to_string(),
            mode: mode.label().to_string(),
            seed: mode.seed(),
            probability_sum,
            mean_fidelity,
            min_fidelity,
            classical_bits: 2 * measurements,
            success: min_fidelity >= SUCCESS_FIDELITY,
            branches,
        }
    }
}

/// A register together with the outcomes and probability that led to it.
#[derive(Debug, Clone)]
pub(crate) struct Leaf {
    pub outcomes: Vec<BellOutcome>,
    pub probability: f64,
    pub register: Register,
}

/// Expands leaves through successive Bell measurements.
pub(crate) struct Walker {
    rng: Option<ChaCha8Rng>,
}

impl Walker {
    pub fn new(mode: RunMode) -> Self {
        Walker {
            rng: mode.seed().map(ChaCha8Rng::seed_from_u64),
        }
    }

    pub fn start(register: Register) -> Vec<Leaf> {
        vec![Leaf {
            outcomes: Vec::new(),
            probability: 1.0,
            register,
        }]
    }

    /// Measures `(first, second)` on every leaf, dropping impossible branches.
    pub fn measure(&mut self, leaves: Vec<Leaf>, first: &str, second: &str) -> Result<Vec<Leaf>> {
        let mut out = Vec::with_capacity(leaves.len() * 4);
        for leaf in leaves {
            let mode = match self.rng.as_mut() {
                Some(rng) => MeasureMode::Sample(rng),
                None => MeasureMode::Enumerate,
            };
            for RegisterBranch {
                outcome,
                probability,
                register,
            } in leaf.register.bell_measure(first, second, mode)?
            {
                if let Some(register) = register {
                    let mut outcomes = leaf.outcomes.clone();
                    outcomes.push(outcome);
                    out.push(Leaf {
                        outcomes,
                        probability: probability * leaf.probability,
                        register,
                    });
                }
            }
        }
        Ok(out)
    }
}
