use rand::{Rng, RngCore};

use super::ops::spread;
use super::{c, tol, BellOutcome, PureState, QubitSubset, C64};
use crate::error::{Error, Result};

/// Amplitudes of `|Φ^i⟩` over `|00⟩, |01⟩, |10⟩, |11⟩`.
///
/// `Φ0 = (|00⟩+|11⟩)/√2`, `Φ1 = (|00⟩−|11⟩)/√2`, `Φ2 = (|01⟩+|10⟩)/√2`,
/// `Φ3 = (|01⟩−|10⟩)/√2`.
pub fn bell_amplitudes(i: BellOutcome) -> [C64; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    match i.index() {
        0 => [c(h, 0.0), z, z, c(h, 0.0)],
        1 => [c(h, 0.0), z, z, c(-h, 0.0)],
        2 => [z, c(h, 0.0), c(h, 0.0), z],
        _ => [z, c(h, 0.0), c(-h, 0.0), z],
    }
}

/// How a Bell measurement picks its branch.
pub enum MeasureMode<'a> {
    /// All four branches.
    Enumerate,
    /// Force one outcome; fails if it is impossible.
    Branch(BellOutcome),
    /// Draw one outcome from the given generator.
    Sample(&'a mut dyn RngCore),
}

/// One outcome of a Bell measurement.
#[derive(Debug, Clone)]
pub struct BellBranch {
    pub outcome: BellOutcome,
    pub probability: f64,
    /// Normalized post-measurement state with the two measured qubits removed.
    /// `None` when the branch is impossible.
    pub state: Option<PureState>,
}

/// Projects qubits `(q1, q2)` onto the Bell basis and removes them from the register.
/// The remaining qubits keep their relative order.
pub fn measure_bell(
    s: &PureState,
    q1: usize,
    q2: usize,
    mode: MeasureMode<'_>,
) -> Result<Vec<BellBranch>> {
    let n = s.n_qubits();
    if q1 == q2 {
        return Err(Error::InvalidSubset(format!(
            "Bell measurement needs two distinct qubits, got {q1} twice"
        )));
    }
    let pair = QubitSubset::new(vec![q1, q2], n)?;
    let rest = pair.complement(n);
    let rest_dim = 1usize << rest.len();
    let pair_off: [usize; 4] = std::array::from_fn(|b| spread(n, pair.indices(), b));
    let amps = s.amps();

    let project = |outcome: BellOutcome| -> BellBranch {
        let bell = bell_amplitudes(outcome);
        let projected: Vec<C64> = (0..rest_dim)
            .map(|r| {
                let base = spread(n, rest.indices(), r);
                (0..4)
                    .map(|b| bell[b].conj() * amps[base | pair_off[b]])
                    .sum()
            })
            .collect();
        let probability: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
        let state = (probability >= tol::ZERO_PROBABILITY).then(|| {
            let norm = probability.sqrt();
            PureState::from_raw(
                rest.len(),
                projected.into_iter().map(|a| a / norm).collect(),
            )
        });
        BellBranch {
            outcome,
            probability,
            state,
        }
    };

    match mode {
        MeasureMode::Enumerate => Ok(BellOutcome::ALL.iter().map(|&o| project(o)).collect()),
        MeasureMode::Branch(o) => {
            let b = project(o);
            if b.state.is_none() {
                return Err(Error::InconsistentOutcome {
                    outcome: o.index() as u8,
                    probability: b.probability,
                });
            }
            Ok(vec![b])
        }
        MeasureMode::Sample(rng) => {
            let branches: Vec<BellBranch> = BellOutcome::ALL.iter().map(|&o| project(o)).collect();
            let total: f64 = branches.iter().map(|b| b.probability).sum();
            let draw = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut last = None;
            for b in branches.into_iter().filter(|b| b.state.is_some()) {
                acc += b.probability;
                if draw < acc {
                    return Ok(vec![b]);
                }
                last = Some(b);
            }
            // rounding can leave `draw` just above the accumulated total
            Ok(vec![last.expect(
                "a normalized state has at least one possible branch",
            )])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{fidelity, tensor, CMatrix};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bell(i: usize) -> PureState {
        PureState::new(bell_amplitudes(BellOutcome::new(i).unwrap()).to_vec()).unwrap()
    }

    #[test]
    fn bell_states_measure_to_themselves() {
        for i in 0..4 {
            let branches = measure_bell(&bell(i), 0, 1, MeasureMode::Enumerate).unwrap();
            for b in branches {
                let expected = if b.outcome.index() == i { 1.0 } else { 0.0 };
                assert!((b.probability - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn forcing_impossible_branch_fails() {
        let err = measure_bell(
            &bell(0),
            0,
            1,
            MeasureMode::Branch(BellOutcome::new(2).unwrap()),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InconsistentOutcome { outcome: 2, .. }));
        assert!(measure_bell(&bell(0), 1, 1, MeasureMode::Enumerate).is_err());
    }

    /// `|φ⟩ ⊗ |Φ0⟩` expanded in the Bell basis of the first two qubits.
    #[test]
    fn teleportation_configuration() {
        let phi = PureState::qubit(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let s = tensor(&phi, &bell(0));
        let (z, o) = (c(0.0, 0.0), c(1.0, 0.0));
        let sx = CMatrix::from_row_slice(2, 2, &[z, o, o, z]);
        let sz = CMatrix::from_row_slice(2, 2, &[o, z, z, -o]);
        let expected_ops = [CMatrix::identity(2, 2), sz.clone(), sx.clone(), &sx * &sz];
        let branches = measure_bell(&s, 0, 1, MeasureMode::Enumerate).unwrap();
        for (b, op) in branches.iter().zip(expected_ops) {
            assert!((b.probability - 0.25).abs() < 1e-14);
            let rotated = PureState::new((op * phi.to_vector()).iter().copied().collect()).unwrap();
            let f = fidelity(b.state.as_ref().unwrap(), &rotated).unwrap();
            assert!((f - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = PureState::random(&mut rng, 4);
        let draw = |seed| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            measure_bell(&s, 2, 0, MeasureMode::Sample(&mut r)).unwrap()[0].outcome
        };
        assert_eq!(draw(42), draw(42));
    }

    #[test]
    fn probabilities_sum_to_one_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..100 {
            let s = PureState::random(&mut rng, 4);
            let total: f64 = measure_bell(&s, 1, 3, MeasureMode::Enumerate)
                .unwrap()
                .iter()
                .map(|b| b.probability)
                .sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn post_states_are_normalized(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = PureState::random(&mut rng, 5);
            for b in measure_bell(&s, 4, 1, MeasureMode::Enumerate).unwrap() {
                if let Some(post) = b.state {
                    prop_assert_eq!(post.n_qubits(), 3);
                    prop_assert!((post.norm_sqr() - 1.0).abs() < 1e-10);
                }
            }
        }
    }
}
