use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{
    apply_unitary, measure_bell, partial_trace, tensor, BellOutcome, CMatrix, DensityMatrix,
    MeasureMode, PureState,
};

/// Holder of a qubit. `Reference` marks purifying ancillas that no party may touch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Party {
    Alice,
    Bob,
    Charlie,
    David,
    Elizabeth,
    Fred,
    George,
    Distributor,
    Reference,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub party: Party,
    pub label: String,
}

/// A pure state whose qubits are labelled and owned by parties.
///
/// Joint operations are only possible through [`Register::bell_measure`],
/// which requires both qubits to belong to the same party.
#[derive(Debug, Clone)]
pub struct Register {
    state: PureState,
    slots: Vec<Slot>,
}

/// One branch of a Bell measurement on a register.
#[derive(Debug, Clone)]
pub struct RegisterBranch {
    pub outcome: BellOutcome,
    pub probability: f64,
    pub register: Option<Register>,
}

impl Register {
    pub fn new(state: PureState, slots: &[(Party, &str)]) -> Result<Self> {
        if slots.len() != state.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: state.n_qubits(),
                found: slots.len(),
            });
        }
        let slots: Vec<Slot> = slots
            .iter()
            .map(|&(party, label)| Slot {
                party,
                label: label.to_string(),
            })
            .collect();
        let reg = Register { state, slots };
        reg.check_labels()?;
        Ok(reg)
    }

    fn check_labels(&self) -> Result<()> {
        for (i, s) in self.slots.iter().enumerate() {
            if self.slots[..i].iter().any(|o| o.label == s.label) {
                return Err(Error::InvalidSubset(format!(
                    "duplicate qubit label {}",
                    s.label
                )));
            }
        }
        Ok(())
    }

    /// Appends `other`'s qubits after this register's.
    pub fn join(&self, other: &Register) -> Result<Register> {
        let mut slots = self.slots.clone();
        slots.extend(other.slots.iter().cloned());
        let reg = Register {
            state: tensor(&self.state, &other.state),
            slots,
        };
        reg.check_labels()?;
        Ok(reg)
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.slots
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownQubit(label.to_string()))
    }

    fn owner(&self, label: &str) -> Result<(usize, Party)> {
        let pos = self.position(label)?;
        Ok((pos, self.slots[pos].party))
    }

    /// Bell measurement of two qubits held by one party.
    pub fn bell_measure(
        &self,
        first: &str,
        second: &str,
        mode: MeasureMode<'_>,
    ) -> Result<Vec<RegisterBranch>> {
        let (p1, party1) = self.owner(first)?;
        let (p2, party2) = self.owner(second)?;
        if party1 != party2 || party1 == Party::Reference {
            return Err(Error::NonLocalOperation(
                format!("{first} ({party1})"),
                format!("{second} ({party2})"),
            ));
        }
        let remaining: Vec<Slot> = self
            .slots
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != p1 && *i != p2)
            .map(|(_, s)| s.clone())
            .collect();
        Ok(measure_bell(&self.state, p1, p2, mode)?
            .into_iter()
            .map(|b| RegisterBranch {
                outcome: b.outcome,
                probability: b.probability,
                register: b.state.map(|state| Register {
                    state,
                    slots: remaining.clone(),
                }),
            })
            .collect())
    }

    /// Applies a single-qubit unitary held by its owner.
    pub fn apply_local(&self, label: &str, u: &CMatrix) -> Result<Register> {
        let (pos, party) = self.owner(label)?;
        if party == Party::Reference {
            return Err(Error::NonLocalOperation(
                label.to_string(),
                "reference system".into(),
            ));
        }
        Ok(Register {
            state: apply_unitary(&self.state, u, &[pos])?,
            slots: self.slots.clone(),
        })
    }

    /// Reduced state of the labelled qubits, in the order given.
    pub fn reduced(&self, labels: &[&str]) -> Result<DensityMatrix> {
        let keep = labels
            .iter()
            .map(|l| self.position(l))
            .collect::<Result<Vec<_>>>()?;
        partial_trace(&self.state, &keep)
    }

    /// Pure state of `labels` when they are exactly the register's qubits, reordered.
    pub fn pure_state_of(&self, labels: &[&str]) -> Result<PureState> {
        if labels.len() != self.slots.len() {
            return Err(Error::DimensionMismatch {
                expected: self.slots.len(),
                found: labels.len(),
            });
        }
        let order = labels
            .iter()
            .map(|l| self.position(l))
            .collect::<Result<Vec<_>>>()?;
        let n = order.len();
        let amps = (0..self.state.dim())
            .map(|k| {
                // bit `pos` of the new index carries old qubit order[pos]
                let old = order.iter().enumerate().fold(0, |acc, (pos, &q)| {
                    acc | (((k >> (n - 1 - pos)) & 1) << (n - 1 - q))
                });
                self.state.amp(old)
            })
            .collect();
        PureState::new(amps)
    }
}
