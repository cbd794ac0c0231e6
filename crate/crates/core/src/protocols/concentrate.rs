use super::register::{Party, Register};
use super::report::{BranchRecord, Leaf, ProtocolReport, RunMode, Walker};
use crate::clifford::{
    correction_for_outcomes, ec_correction_for_outcomes, is_clifford, propagate_pauli,
    remote_op_channel, OutcomeTriple, PauliOp, PauliString,
};
use crate::error::{Error, Result};
use crate::qmath::{
    apply_unitary, c, dephase, fidelity, hermitian_eigen, tol, CMatrix, DensityMatrix, PureState,
    C64,
};
use crate::states::{rc_channel, smolin_state};

/// A four-qubit channel shared by Alice, Bob, Charlie (input ports) and David
/// (output port), stored as a purification. Qubits 0..4 are A, B, C, D; any
/// further qubits are reference systems.
#[derive(Debug, Clone)]
pub struct ConcentrationChannel {
    name: String,
    purification: PureState,
}

impl ConcentrationChannel {
    /// The Smolin state, purified by the reverse-cloning channel with E, F as reference.
    pub fn smolin() -> Self {
        ConcentrationChannel {
            name: "smolin".into(),
            purification: rc_channel(),
        }
    }

    /// The Smolin state fully dephased in the computational basis: a
    /// classically correlated (separable) state.
    pub fn classical() -> Self {
        let diag = dephase(&smolin_state(), &[0, 1, 2, 3]).expect("four valid qubits");
        let support: Vec<(usize, f64)> = (0..16)
            .map(|x| (x, diag.get(x, x).re))
            .filter(|&(_, p)| p > tol::ZERO_EIGENVALUE)
            .collect();
        let k = reference_qubits(support.len());
        let mut amps = vec![C64::default(); 16 << k];
        for (r, &(x, p)) in support.iter().enumerate() {
            amps[(x << k) | r] = c(p.sqrt(), 0.0);
        }
        ConcentrationChannel {
            name: "classical".into(),
            purification: PureState::new(amps).expect("weights sum to one"),
        }
    }

    /// Purifies an arbitrary four-qubit density matrix through its eigendecomposition.
    pub fn from_density(name: &str, rho: &DensityMatrix) -> Result<Self> {
        if rho.n_qubits() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 16,
                found: rho.dim(),
            });
        }
        let (values, vectors) = hermitian_eigen(rho.matrix());
        let support: Vec<usize> = (0..16)
            .filter(|&j| values[j] > tol::ZERO_EIGENVALUE)
            .collect();
        let k = reference_qubits(support.len());
        let mut amps = vec![C64::default(); 16 << k];
        for (r, &j) in support.iter().enumerate() {
            let w = values[j].sqrt();
            for x in 0..16 {
                amps[(x << k) | r] = vectors[(x, j)] * w;
            }
        }
        Ok(ConcentrationChannel {
            name: name.to_string(),
            purification: PureState::normalized(amps)?,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_reference(&self) -> usize {
        self.purification.n_qubits() - 4
    }

    pub fn purification(&self) -> &PureState {
        &self.purification
    }

    /// The shared four-qubit state.
    pub fn density(&self) -> DensityMatrix {
        crate::qmath::partial_trace(&self.purification, &[0, 1, 2, 3]).expect("four valid qubits")
    }

    pub(crate) fn register(&self) -> Result<Register> {
        let refs: Vec<String> = (0..self.n_reference()).map(|i| format!("R{i}")).collect();
        let mut slots = vec![
            (Party::Alice, "A"),
            (Party::Bob, "B"),
            (Party::Charlie, "C"),
            (Party::David, "D"),
        ];
        slots.extend(refs.iter().map(|r| (Party::Reference, r.as_str())));
        Register::new(self.purification.clone(), &slots)
    }
}

fn reference_qubits(rank: usize) -> usize {
    rank.max(1).next_power_of_two().trailing_zeros() as usize
}

/// Which outcome→Pauli map David uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionRule {
    /// `σ_a σ_b σ_c`.
    Product,
    /// The product with an extra `σ_x` when exactly one of Bob's and
    /// Charlie's outcomes is `Φ0` or `Φ1`.
    ErrorCorrecting,
}

impl CorrectionRule {
    pub fn correction(self, o: OutcomeTriple) -> PauliOp {
        match self {
            CorrectionRule::Product => correction_for_outcomes(o),
            CorrectionRule::ErrorCorrecting => ec_correction_for_outcomes(o),
        }
    }
}

/// The qubit `α|0⟩ + β|1⟩` that a three-qubit input encodes, read from its
/// `|000⟩` and `|111⟩` amplitudes. Exact for both the cloning and the
/// repetition-code families.
pub fn concentration_reference(psi: &PureState) -> Result<PureState> {
    super::require_qubits(psi, 3)?;
    PureState::normalized(vec![psi.amp(0b000), psi.amp(0b111)])
        .map_err(|_| Error::NoReference("zero amplitude on both |000⟩ and |111⟩".into()))
}

fn input_register(psi: &PureState) -> Result<Register> {
    Register::new(
        psi.clone(),
        &[
            (Party::Alice, "a"),
            (Party::Bob, "b"),
            (Party::Charlie, "c"),
        ],
    )
}

/// Alice, Bob and Charlie each Bell-measure their input qubit with their channel port.
pub(crate) fn senders_measure(walker: &mut Walker, leaves: Vec<Leaf>) -> Result<Vec<Leaf>> {
    let leaves = walker.measure(leaves, "a", "A")?;
    let leaves = walker.measure(leaves, "b", "B")?;
    walker.measure(leaves, "c", "C")
}

pub(crate) fn last_triple(outcomes: &[crate::qmath::BellOutcome]) -> OutcomeTriple {
    let n = outcomes.len();
    OutcomeTriple::new(outcomes[n - 3], outcomes[n - 2], outcomes[n - 1])
}

/// Concentration of `psi` (held by Alice, Bob, Charlie) into David's qubit,
/// scored against `target`.
pub fn concentrate_with_rule(
    protocol: &str,
    psi: &PureState,
    target: &PureState,
    channel: &ConcentrationChannel,
    rule: CorrectionRule,
    mode: RunMode,
) -> Result<ProtocolReport> {
    super::require_qubits(psi, 3)?;
    super::require_qubits(target, 1)?;
    let reg = input_register(psi)?.join(&channel.register()?)?;
    let mut walker = Walker::new(mode);
    let leaves = senders_measure(&mut walker, Walker::start(reg))?;

    let branches = leaves
        .into_iter()
        .map(|leaf| {
            let p = rule.correction(last_triple(&leaf.outcomes));
            let reg = leaf.register.apply_local("D", &p.kind.matrix())?;
            Ok(BranchRecord {
                fidelity: fidelity(&reg.reduced(&["D"])?, target)?,
                outcomes: leaf.outcomes,
                probability: leaf.probability,
                correction: format!("D:{}", p.kind),
                min_pt_eigenvalue: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProtocolReport::build(protocol, mode, 3, branches))
}

/// Remote information concentration with the product correction rule.
///
/// Inputs outside the cloning family are not rejected; their reports simply
/// show fidelity below one.
pub fn concentrate(
    psi: &PureState,
    channel: &ConcentrationChannel,
    mode: RunMode,
) -> Result<ProtocolReport> {
    let target = concentration_reference(psi)?;
    concentrate_with_rule(
        "concentrate",
        psi,
        &target,
        channel,
        CorrectionRule::Product,
        mode,
    )
}

/// Concentration of `α|000⟩ + β|111⟩` through the Smolin channel with the
/// error-correcting rule.
pub fn concentrate_ec(psi_e: &PureState, mode: RunMode) -> Result<ProtocolReport> {
    let target = concentration_reference(psi_e)?;
    concentrate_with_rule(
        "concentrate_ec",
        psi_e,
        &target,
        &ConcentrationChannel::smolin(),
        CorrectionRule::ErrorCorrecting,
        mode,
    )
}

/// Remote application output: report plus David–Elizabeth–Fred's state per branch.
#[derive(Debug, Clone)]
pub struct RemoteApplyRun {
    pub report: ProtocolReport,
    pub outputs: Vec<PureState>,
}

/// Applies the three-qubit Clifford `u` to `psi` held by Alice, Bob and
/// Charlie, delivering `u|ψ⟩` to David, Elizabeth and Fred.
pub fn remote_apply(u: &CMatrix, psi: &PureState, mode: RunMode) -> Result<RemoteApplyRun> {
    super::require_qubits(psi, 3)?;
    if u.nrows() != 8 || u.ncols() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: u.nrows(),
        });
    }
    if !is_clifford(u)? {
        return Err(Error::NotClifford);
    }
    let expected = apply_unitary(psi, u, &[0, 1, 2])?;
    let channel = Register::new(
        remote_op_channel(u)?,
        &[
            (Party::Alice, "A"),
            (Party::Bob, "B"),
            (Party::Charlie, "C"),
            (Party::David, "D"),
            (Party::Elizabeth, "E"),
            (Party::Fred, "F"),
        ],
    )?;
    let reg = input_register(psi)?.join(&channel)?;
    let mut walker = Walker::new(mode);
    let leaves = senders_measure(&mut walker, Walker::start(reg))?;

    let mut branches = Vec::with_capacity(leaves.len());
    let mut outputs = Vec::with_capacity(leaves.len());
    for leaf in leaves {
        let triple = last_triple(&leaf.outcomes);
        let frame = propagate_pauli(u, &PauliString::from_outcomes(&triple.as_array()))?;
        let mut reg = leaf.register;
        for (label, kind) in ["D", "E", "F"].iter().zip(&frame.kinds) {
            reg = reg.apply_local(label, &kind.matrix())?;
        }
        let out = reg.pure_state_of(&["D", "E", "F"])?;
        branches.push(BranchRecord {
            fidelity: fidelity(&out, &expected)?,
            outcomes: leaf.outcomes,
            probability: leaf.probability,
            correction: format!(
                "D:{} E:{} F:{}",
                frame.kinds[0], frame.kinds[1], frame.kinds[2]
            ),
            min_pt_eigenvalue: None,
        });
        outputs.push(out);
    }
    Ok(RemoteApplyRun {
        report: ProtocolReport::build("remote_apply", mode, 3, branches),
        outputs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{u_reverse_clone, Cnot, CnotCircuit};
    use crate::qmath::{partial_trace, tensor};
    use crate::states::{ec_state, optimal_clone_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_pair(rng: &mut ChaCha8Rng) -> (C64, C64) {
        let q = PureState::random(rng, 1);
        (q.amp(0), q.amp(1))
    }

    #[test]
    fn channels_reduce_to_their_four_qubit_states() {
        let smolin = ConcentrationChannel::smolin();
        assert!(smolin.density().max_abs_diff(&smolin_state()) < 1e-12);
        let classical = ConcentrationChannel::classical();
        assert_eq!(classical.n_reference(), 3);
        let dephased = dephase(&smolin_state(), &[0, 1, 2, 3]).unwrap();
        assert!(classical.density().max_abs_diff(&dephased) < 1e-12);
        let purified = ConcentrationChannel::from_density("smolin-eig", &smolin_state()).unwrap();
        assert_eq!(purified.n_reference(), 2);
        assert!(purified.density().max_abs_diff(&smolin_state()) < 1e-12);
    }

    #[test]
    fn concentrate_basis_input() {
        let psi = optimal_clone_state(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let r = concentrate(&psi, &ConcentrationChannel::smolin(), RunMode::Enumerate).unwrap();
        assert_eq!(r.branches.len(), 64);
        assert_eq!(r.classical_bits, 6);
        assert!(r.success);
        assert!((r.probability_sum - 1.0).abs() < 1e-10);
    }

    #[test]
    fn concentrate_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            let (a, b) = random_pair(&mut rng);
            let psi = optimal_clone_state(a, b).unwrap();
            let r = concentrate(&psi, &ConcentrationChannel::smolin(), RunMode::Enumerate).unwrap();
            assert!(r.min_fidelity > 1.0 - 1e-10, "{}", r.min_fidelity);
        }
    }

    #[test]
    fn invalid_input_is_reported_not_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let psi = PureState::random(&mut rng, 3);
        let r = concentrate(&psi, &ConcentrationChannel::smolin(), RunMode::Enumerate).unwrap();
        assert!(!r.success);
        assert!(matches!(
            concentrate(
                &PureState::basis(3, 0b010),
                &ConcentrationChannel::smolin(),
                RunMode::Enumerate
            ),
            Err(Error::NoReference(_))
        ));
    }

    #[test]
    fn ec_input_with_product_rule_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (a, b) = random_pair(&mut rng);
        let psi = ec_state(a, b).unwrap();
        let target = PureState::qubit(a, b).unwrap();
        let r = concentrate_with_rule(
            "ec_product",
            &psi,
            &target,
            &ConcentrationChannel::smolin(),
            CorrectionRule::Product,
            RunMode::Enumerate,
        )
        .unwrap();
        assert!(r.success);
    }

    /// David's marginal is the same whether the Smolin channel is carried as
    /// its pure reverse-cloning purification or as an eigen-purification of
    /// the reduced mixed state.
    #[test]
    fn david_marginal_is_purification_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let (a, b) = random_pair(&mut rng);
        let psi = optimal_clone_state(a, b).unwrap();
        let pure = ConcentrationChannel::smolin();
        let mixed = ConcentrationChannel::from_density("eig", &smolin_state()).unwrap();
        let run = |ch: &ConcentrationChannel| {
            let reg = input_register(&psi)
                .unwrap()
                .join(&ch.register().unwrap())
                .unwrap();
            let mut w = Walker::new(RunMode::Enumerate);
            senders_measure(&mut w, Walker::start(reg)).unwrap()
        };
        for (l1, l2) in run(&pure).into_iter().zip(run(&mixed)) {
            assert_eq!(l1.outcomes, l2.outcomes);
            assert!((l1.probability - l2.probability).abs() < 1e-12);
            let d1 = l1.register.reduced(&["D"]).unwrap();
            let d2 = l2.register.reduced(&["D"]).unwrap();
            assert!(d1.max_abs_diff(&d2) < 1e-12);
        }
    }

    #[test]
    fn remote_identity_is_parallel_teleportation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi = PureState::random(&mut rng, 3);
        let run = remote_apply(&CMatrix::identity(8, 8), &psi, RunMode::Enumerate).unwrap();
        assert!(run.report.success);
        for out in &run.outputs {
            assert!((fidelity(out, &psi).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn remote_reverse_cloning() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let (a, b) = random_pair(&mut rng);
        let psi = optimal_clone_state(a, b).unwrap();
        let run = remote_apply(&u_reverse_clone(), &psi, RunMode::Enumerate).unwrap();
        let r = (2.0f64 / 3.0).sqrt();
        let anc = PureState::new(vec![
            c(r, 0.0),
            c(r / 2.0, 0.0),
            c(r / 2.0, 0.0),
            c(0.0, 0.0),
        ])
        .unwrap();
        let expected = tensor(&PureState::qubit(a, b).unwrap(), &anc);
        assert!(run.report.success);
        for out in &run.outputs {
            assert!((fidelity(out, &expected).unwrap() - 1.0).abs() < 1e-10);
            // David's qubit alone is |φ⟩
            let d = partial_trace(out, &[0]).unwrap();
            assert!((fidelity(&d, &PureState::qubit(a, b).unwrap()).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn remote_cnot() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let psi = PureState::random(&mut rng, 3);
        let u = CnotCircuit::new(
            3,
            vec![Cnot {
                control: 0,
                target: 1,
            }],
        )
        .unwrap()
        .matrix();
        let direct = apply_unitary(&psi, &u, &[0, 1, 2]).unwrap();
        let run = remote_apply(&u, &psi, RunMode::Enumerate).unwrap();
        for out in &run.outputs {
            assert!((fidelity(out, &direct).unwrap() - 1.0).abs() < 1e-10);
        }
        let mut t = CMatrix::identity(8, 8);
        t[(7, 7)] = C64::from_polar(1.0, 0.7);
        assert_eq!(
            remote_apply(&t, &psi, RunMode::Enumerate).unwrap_err(),
            Error::NotClifford
        );
    }
}
