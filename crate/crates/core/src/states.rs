//! Constructors for the named states of the concentration scheme.
//!
//! Qubit orderings:
//! - [`optimal_clone_state`]: ancilla, clone, clone.
//! - [`telecloning_channel`]: input port, ancilla port, clone port, clone port.
//! - [`smolin_state`]: A, B, C, D.
//! - [`rc_channel`]: A, B, C, D, then the ancillas E, F.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{bell_amplitudes, c, tensor, tol, BellOutcome, DensityMatrix, PureState, C64};

/// `|Φ^i⟩`.
pub fn bell(i: BellOutcome) -> PureState {
    PureState::from_raw(2, bell_amplitudes(i).to_vec())
}

fn check_amplitudes(alpha: C64, beta: C64) -> Result<()> {
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if (norm_sqr - 1.0).abs() > tol::NORM {
        return Err(Error::NotNormalized(norm_sqr));
    }
    Ok(())
}

/// Optimal 1→2 cloning state of `α|0⟩ + β|1⟩`:
///
/// `√(2/3) α (|000⟩ + ½|1⟩(|01⟩+|10⟩)) + √(2/3) β (|111⟩ + ½|0⟩(|01⟩+|10⟩))`
pub fn optimal_clone_state(alpha: C64, beta: C64) -> Result<PureState> {
    check_amplitudes(alpha, beta)?;
    let r = (2.0f64 / 3.0).sqrt();
    let mut amps = vec![C64::default(); 8];
    amps[0b000] = alpha * r;
    amps[0b101] = alpha * (r / 2.0);
    amps[0b110] = alpha * (r / 2.0);
    amps[0b111] = beta * r;
    amps[0b001] = beta * (r / 2.0);
    amps[0b010] = beta * (r / 2.0);
    Ok(PureState::from_raw(3, amps))
}

/// The 1→2 telecloning channel
/// `(1/√3)(|00⟩|00⟩ + |11⟩|11⟩ + ½(|01⟩+|10⟩)(|01⟩+|10⟩))`.
pub fn telecloning_channel() -> PureState {
    let s = 1.0 / 3.0f64.sqrt();
    let mut amps = vec![C64::default(); 16];
    amps[0b0000] = c(s, 0.0);
    amps[0b1111] = c(s, 0.0);
    for left in [0b01, 0b10] {
        for right in [0b01, 0b10] {
            amps[(left << 2) | right] = c(s / 2.0, 0.0);
        }
    }
    PureState::from_raw(4, amps)
}

/// `ρ_ub = ¼ Σ_i |Φ^i⟩⟨Φ^i| ⊗ |Φ^i⟩⟨Φ^i|`.
pub fn smolin_state() -> DensityMatrix {
    let terms: Vec<(f64, PureState)> = BellOutcome::ALL
        .iter()
        .map(|&i| (0.25, tensor(&bell(i), &bell(i))))
        .collect();
    DensityMatrix::mixture(&terms).expect("Bell products form a valid mixture")
}

/// Purification of the Smolin state carrying the reverse-cloning unitary:
///
/// `(1/2√2){(|0000⟩+|1111⟩)|00⟩ + (|0101⟩+|1010⟩)|01⟩ + (|0011⟩+|1100⟩)|10⟩ + (|0110⟩+|1001⟩)|11⟩}`
pub fn rc_channel() -> PureState {
    const TERMS: [([usize; 2], usize); 4] = [
        ([0b0000, 0b1111], 0b00),
        ([0b0101, 0b1010], 0b01),
        ([0b0011, 0b1100], 0b10),
        ([0b0110, 0b1001], 0b11),
    ];
    let w = 1.0 / (2.0 * 2.0f64.sqrt());
    let mut amps = vec![C64::default(); 64];
    for (abcd, ef) in TERMS {
        for x in abcd {
            amps[(x << 2) | ef] = c(w, 0.0);
        }
    }
    PureState::from_raw(6, amps)
}

/// Three-qubit repetition code `α|000⟩ + β|111⟩`.
pub fn ec_state(alpha: C64, beta: C64) -> Result<PureState> {
    check_amplitudes(alpha, beta)?;
    let mut amps = vec![C64::default(); 8];
    amps[0] = alpha;
    amps[7] = beta;
    Ok(PureState::from_raw(3, amps))
}

/// Catalogue entry for a named state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum NamedState {
    Bell { index: BellOutcome },
    Cloning { alpha: [f64; 2], beta: [f64; 2] },
    TelecloningChannel,
    Smolin,
    RcChannel,
    EcState { alpha: [f64; 2], beta: [f64; 2] },
}

/// A constructed named state.
#[derive(Debug, Clone)]
pub enum StateValue {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl StateValue {
    pub fn as_ref(&self) -> crate::qmath::StateRef<'_> {
        match self {
            StateValue::Pure(s) => s.into(),
            StateValue::Mixed(r) => r.into(),
        }
    }
}

impl NamedState {
    pub fn build(&self) -> Result<StateValue> {
        let pair = |z: [f64; 2]| c(z[0], z[1]);
        Ok(match *self {
            NamedState::Bell { index } => StateValue::Pure(bell(index)),
            NamedState::Cloning { alpha, beta } => {
                StateValue::Pure(optimal_clone_state(pair(alpha), pair(beta))?)
            }
            NamedState::TelecloningChannel => StateValue::Pure(telecloning_channel()),
            NamedState::Smolin => StateValue::Mixed(smolin_state()),
            NamedState::RcChannel => StateValue::Pure(rc_channel()),
            NamedState::EcState { alpha, beta } => {
                StateValue::Pure(ec_state(pair(alpha), pair(beta))?)
            }
        })
    }
}
