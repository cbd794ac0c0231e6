//! Entanglement diagnostics: PPT tests across cuts, negativity, unlockability
//! of the Smolin state and a relative-entropy witness.
//!
//! Negativity is the sum of absolute values of the negative partial-transpose
//! eigenvalues, so a Bell pair has negativity 1/2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{
    dephase, fidelity, measure_bell, partial_trace, partial_transpose, relative_entropy,
    von_neumann_entropy, BellOutcome, DensityMatrix, MeasureMode, QubitSubset, StateRef, C64,
};
use crate::states::{bell, optimal_clone_state, rc_channel, smolin_state};

/// Partial-transpose eigenvalues below this count as negative.
pub const NPT_THRESHOLD: f64 = -1e-10;

/// A bipartition of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSpec {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl CutSpec {
    /// `left` and its complement; both sides must be non-empty.
    pub fn new(left: &[usize], n_qubits: usize) -> Result<Self> {
        let left = QubitSubset::new(left.to_vec(), n_qubits)?;
        let right = left.complement(n_qubits);
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidSubset(
                "a cut needs qubits on both sides".into(),
            ));
        }
        let mut l = left.indices().to_vec();
        l.sort_unstable();
        Ok(CutSpec {
            left: l,
            right: right.indices().to_vec(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// Every cut once, with qubit 0 on the left.
    pub fn all_bipartitions(n_qubits: usize) -> Vec<CutSpec> {
        let full = (1usize << n_qubits) - 1;
        (0..1usize << (n_qubits.saturating_sub(1)))
            .map(|rest| (1 << (n_qubits - 1)) | rest)
            .filter(|&mask| mask != full)
            .map(|mask| {
                let left: Vec<usize> = (0..n_qubits)
                    .filter(|q| mask >> (n_qubits - 1 - q) & 1 == 1)
                    .collect();
                CutSpec::new(&left, n_qubits).expect("non-trivial cut")
            })
            .collect()
    }

    /// Letter notation, e.g. `AB:CD`.
    pub fn label(&self) -> String {
        let side = |s: &[usize]| {
            s.iter()
                .map(|&q| (b'A' + q as u8) as char)
                .collect::<String>()
        };
        format!("{}:{}", side(&self.left), side(&self.right))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Ppt,
    Npt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutReport {
    pub cut: CutSpec,
    pub label: String,
    pub min_pt_eigenvalue: f64,
    pub negativity: f64,
    /// Entropy of one side's reduction, for pure states only.
    pub entropy: Option<f64>,
    pub verdict: Verdict,
}

/// PPT test, negativity and (for pure states) entanglement entropy across `cut`.
pub fn cut_diagnose<'a>(state: impl Into<StateRef<'a>>, cut: &CutSpec) -> Result<CutReport> {
    let state = state.into();
    if state.n_qubits() != cut.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: cut.n_qubits(),
            found: state.n_qubits(),
        });
    }
    let entropy = match state {
        StateRef::Pure(p) => Some(von_neumann_entropy(&partial_trace(p, &cut.left)?)),
        StateRef::Mixed(_) => None,
    };
    let rho = state.to_density();
    let side = if cut.left.len() <= cut.right.len() {
        &cut.left
    } else {
        &cut.right
    };
    let pt = partial_transpose(&rho, side)?;
    let (values, _) = crate::qmath::hermitian_eigen(&pt);
    let min_pt_eigenvalue = values[0];
    let negativity = values.iter().filter(|&&v| v < 0.0).map(|v| -v).sum();
    Ok(CutReport {
        label: cut.label(),
        cut: cut.clone(),
        min_pt_eigenvalue,
        negativity,
        entropy,
        verdict: if min_pt_eigenvalue < NPT_THRESHOLD {
            Verdict::Npt
        } else {
            Verdict::Ppt
        },
    })
}

/// Minimum PT eigenvalue of the ancilla–clone reduction of the cloning state of `α|0⟩ + β|1⟩`.
/// `clone` selects which clone (1 or 2) is kept with the ancilla.
pub fn clone_pair_min_pt(alpha: C64, beta: C64, clone: usize) -> Result<f64> {
    if !(1..=2).contains(&clone) {
        return Err(Error::InvalidSubset(format!("clone index {clone}")));
    }
    let psi = optimal_clone_state(alpha, beta)?;
    let pair = partial_trace(&psi, &[0, clone])?;
    crate::qmath::min_eigenvalue(&partial_transpose(&pair, &[1])?)
}

/// Minimum PT eigenvalue of the ancilla–clone reduction, evaluated at `|0⟩`.
pub fn clone_ancilla_check() -> f64 {
    clone_pair_min_pt(C64::new(1.0, 0.0), C64::default(), 1).expect("valid input")
}

/// One outcome of Bell-measuring two qubits of the Smolin state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnlockOutcome {
    pub outcome: BellOutcome,
    pub probability: f64,
    /// Bell state closest to the remaining pair.
    pub bell: BellOutcome,
    pub fidelity: f64,
}

/// Bell-measures qubits `pair` of the Smolin state and reports the remaining pair.
pub fn unlock_check(pair: (usize, usize)) -> Result<Vec<UnlockOutcome>> {
    let (p, q) = pair;
    if p >= 4 || q >= 4 || p == q {
        return Err(Error::InvalidSubset(format!(
            "pair ({p}, {q}) of a four-qubit state"
        )));
    }
    let branches = measure_bell(&rc_channel(), p, q, MeasureMode::Enumerate)?;
    branches
        .into_iter()
        .map(|b| {
            let state = b.state.ok_or(Error::InconsistentOutcome {
                outcome: b.outcome.index() as u8,
                probability: b.probability,
            })?;
            // the two unmeasured Smolin qubits lead, the ancillas follow
            let rest = partial_trace(&state, &[0, 1])?;
            let (bell_state, fidelity) = BellOutcome::ALL
                .iter()
                .map(|&i| Ok((i, fidelity(&rest, &bell(i))?)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold((BellOutcome::ALL[0], f64::NEG_INFINITY), |acc, x| {
                    if x.1 > acc.1 {
                        x
                    } else {
                        acc
                    }
                });
            Ok(UnlockOutcome {
                outcome: b.outcome,
                probability: b.probability,
                bell: bell_state,
                fidelity,
            })
        })
        .collect()
}

/// `|abc⟩⟨abc| ⊗ |d⟩⟨d|` with a weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductTerm {
    pub weight: f64,
    pub abc: usize,
    pub d: usize,
}

#[derive(Debug, Clone)]
pub struct ReeWitness {
    /// `S(ρ_ub ‖ σ*)`.
    pub value: f64,
    /// `σ*`: the Smolin state dephased on D.
    pub sigma: DensityMatrix,
    pub terms: Vec<ProductTerm>,
    /// `σ*` equals the sum of `terms`, which are mutually orthogonal.
    pub product_verified: bool,
}

/// Relative entropy from the Smolin state to its D-dephased version, an
/// explicit separable state across ABC:D.
pub fn ree_witness() -> Result<ReeWitness> {
    let rho = smolin_state();
    let sigma = dephase(&rho, &[3])?;
    let terms: Vec<ProductTerm> = (0..16)
        .map(|x| (x, sigma.get(x, x).re))
        .filter(|&(_, w)| w > crate::qmath::tol::ZERO_EIGENVALUE)
        .map(|(x, weight)| ProductTerm {
            weight,
            abc: x >> 1,
            d: x & 1,
        })
        .collect();
    let rebuilt = DensityMatrix::mixture(
        &terms
            .iter()
            .map(|t| {
                (
                    t.weight,
                    crate::qmath::PureState::basis(4, (t.abc << 1) | t.d),
                )
            })
            .collect::<Vec<_>>(),
    )?;
    let orthogonal = terms
        .iter()
        .enumerate()
        .all(|(i, t)| terms[..i].iter().all(|o| o.abc != t.abc));
    Ok(ReeWitness {
        value: relative_entropy(&rho, &sigma)?,
        product_verified: orthogonal && rebuilt.max_abs_diff(&sigma) < 1e-12,
        sigma,
        terms,
    })
}
