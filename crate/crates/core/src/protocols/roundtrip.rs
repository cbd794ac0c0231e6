use super::concentrate::{last_triple, senders_measure, ConcentrationChannel, CorrectionRule};
use super::register::{Party, Register};
use super::report::{BranchRecord, Leaf, ProtocolReport, RunMode, Walker};
use crate::clifford::PauliKind;
use crate::error::Result;
use crate::qmath::{fidelity, min_eigenvalue, partial_transpose, BellOutcome, DensityMatrix};
use crate::states::{bell, telecloning_channel};

/// Telecloning followed by concentration: report plus George–David's state per branch.
#[derive(Debug, Clone)]
pub struct RoundTripRun {
    pub report: ProtocolReport,
    /// Two-qubit states in (George, David) order, aligned with `report.branches`.
    pub pair_states: Vec<DensityMatrix>,
}

impl RoundTripRun {
    /// Smallest partial-transpose eigenvalue over all branches.
    pub fn min_pt_eigenvalue(&self) -> f64 {
        self.report
            .branches
            .iter()
            .filter_map(|b| b.min_pt_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }
}

/// George keeps half of `|Φ0⟩`; the other half is telecloned to Alice, Bob
/// and Charlie, who then concentrate it to David through `channel`.
/// Each branch records fidelity of George–David with `|Φ0⟩`.
pub fn roundtrip_with_channel(
    protocol: &str,
    channel: &ConcentrationChannel,
    mode: RunMode,
) -> Result<RoundTripRun> {
    let phi0 = bell(BellOutcome::ALL[0]);
    let source = Register::new(
        phi0.clone(),
        &[(Party::George, "g"), (Party::Distributor, "x")],
    )?;
    let clones = Register::new(
        telecloning_channel(),
        &[
            (Party::Distributor, "port"),
            (Party::Alice, "a"),
            (Party::Bob, "b"),
            (Party::Charlie, "c"),
        ],
    )?;
    let mut walker = Walker::new(mode);
    let leaves = walker.measure(Walker::start(source.join(&clones)?), "x", "port")?;

    let mut joined = Vec::with_capacity(leaves.len());
    for leaf in leaves {
        let kind = PauliKind::from_outcome(leaf.outcomes[0]);
        let mut reg = leaf.register;
        for label in ["a", "b", "c"] {
            reg = reg.apply_local(label, &kind.matrix())?;
        }
        joined.push(Leaf {
            register: reg.join(&channel.register()?)?,
            ..leaf
        });
    }
    let leaves = senders_measure(&mut walker, joined)?;

    let mut branches = Vec::with_capacity(leaves.len());
    let mut pair_states = Vec::with_capacity(leaves.len());
    for leaf in leaves {
        let first = PauliKind::from_outcome(leaf.outcomes[0]);
        let p = CorrectionRule::Product.correction(last_triple(&leaf.outcomes));
        let reg = leaf.register.apply_local("D", &p.kind.matrix())?;
        let pair = reg.reduced(&["g", "D"])?;
        branches.push(BranchRecord {
            fidelity: fidelity(&pair, &phi0)?,
            min_pt_eigenvalue: Some(min_eigenvalue(&partial_transpose(&pair, &[1])?)?),
            outcomes: leaf.outcomes,
            probability: leaf.probability,
            correction: format!("ABC:{first} D:{}", p.kind),
        });
        pair_states.push(pair);
    }
    Ok(RoundTripRun {
        report: ProtocolReport::build(protocol, mode, 4, branches),
        pair_states,
    })
}

/// Round trip through the Smolin channel.
pub fn roundtrip_george(mode: RunMode) -> Result<RoundTripRun> {
    roundtrip_with_channel("roundtrip", &ConcentrationChannel::smolin(), mode)
}

/// Round trip through the dephased, separable version of the Smolin channel.
pub fn classical_control_run(mode: RunMode) -> Result<RoundTripRun> {
    roundtrip_with_channel(
        "classical_control",
        &ConcentrationChannel::classical(),
        mode,
    )
}
