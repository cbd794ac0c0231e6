//! LOCC protocol engines.
//!
//! Every engine builds a [`Register`] whose qubits are owned by named parties
//! and only ever acts on it through same-party Bell measurements and
//! single-qubit corrections. Mixed channels are carried as purifications
//! whose extra qubits belong to [`Party::Reference`] and are never touched.

mod concentrate;
mod register;
mod report;
mod roundtrip;

pub use concentrate::{
    concentrate, concentrate_ec, concentrate_with_rule, concentration_reference, remote_apply,
    ConcentrationChannel, CorrectionRule, RemoteApplyRun,
};
pub use register::{Party, Register, RegisterBranch, Slot};
pub use report::{BranchRecord, ProtocolReport, RunMode, SUCCESS_FIDELITY};
pub use roundtrip::{
    classical_control_run, roundtrip_george, roundtrip_with_channel, RoundTripRun,
};

use crate::clifford::PauliKind;
use crate::error::{Error, Result};
use crate::qmath::{fidelity, BellOutcome, PureState};
use crate::states::{bell, optimal_clone_state, telecloning_channel};
use report::Walker;

fn require_qubits(s: &PureState, n: usize) -> Result<()> {
    if s.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            found: s.dim(),
        });
    }
    Ok(())
}

/// Standard teleportation of `phi` from Alice to David over `|Φ0⟩`.
pub fn teleport(phi: &PureState, mode: RunMode) -> Result<ProtocolReport> {
    require_qubits(phi, 1)?;
    let input = Register::new(phi.clone(), &[(Party::Alice, "phi")])?;
    let channel = Register::new(
        bell(BellOutcome::ALL[0]),
        &[(Party::Alice, "port"), (Party::David, "out")],
    )?;
    let mut walker = Walker::new(mode);
    let leaves = walker.measure(Walker::start(input.join(&channel)?), "phi", "port")?;

    let branches = leaves
        .into_iter()
        .map(|leaf| {
            let kind = PauliKind::from_outcome(leaf.outcomes[0]);
            let reg = leaf.register.apply_local("out", &kind.matrix())?;
            Ok(BranchRecord {
                fidelity: fidelity(reg.state(), phi)?,
                outcomes: leaf.outcomes,
                probability: leaf.probability,
                correction: format!("D:{kind}"),
                min_pt_eigenvalue: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProtocolReport::build("teleport", mode, 1, branches))
}

/// Telecloning output: report plus the corrected (ancilla, clone, clone) state per branch.
#[derive(Debug, Clone)]
pub struct TelecloneRun {
    pub report: ProtocolReport,
    pub outputs: Vec<PureState>,
}

/// 1→2 telecloning: the distributor Bell-measures `phi` with the input port,
/// and each receiver applies `σ_i` for outcome `Φ^i`.
///
/// Receivers: Alice holds the ancilla, Bob and Charlie the clones.
pub fn teleclone(phi: &PureState, mode: RunMode) -> Result<TelecloneRun> {
    require_qubits(phi, 1)?;
    let target = optimal_clone_state(phi.amp(0), phi.amp(1))?;
    let input = Register::new(phi.clone(), &[(Party::Distributor, "phi")])?;
    let channel = Register::new(
        telecloning_channel(),
        &[
            (Party::Distributor, "port"),
            (Party::Alice, "ancilla"),
            (Party::Bob, "clone1"),
            (Party::Charlie, "clone2"),
        ],
    )?;
    let mut walker = Walker::new(mode);
    let leaves = walker.measure(Walker::start(input.join(&channel)?), "phi", "port")?;

    let mut branches = Vec::with_capacity(leaves.len());
    let mut outputs = Vec::with_capacity(leaves.len());
    for leaf in leaves {
        let kind = PauliKind::from_outcome(leaf.outcomes[0]);
        let mut reg = leaf.register;
        for label in ["ancilla", "clone1", "clone2"] {
            reg = reg.apply_local(label, &kind.matrix())?;
        }
        let out = reg.pure_state_of(&["ancilla", "clone1", "clone2"])?;
        branches.push(BranchRecord {
            fidelity: fidelity(&out, &target)?,
            outcomes: leaf.outcomes,
            probability: leaf.probability,
            correction: format!("A:{kind} B:{kind} C:{kind}"),
            min_pt_eigenvalue: None,
        });
        outputs.push(out);
    }
    Ok(TelecloneRun {
        report: ProtocolReport::build("teleclone", mode, 1, branches),
        outputs,
    })
}
