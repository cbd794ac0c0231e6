//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64 as C;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use reconc_core::clifford::{decompose_to_cnots, remote_op_channel, u_reverse_clone};
use reconc_core::entanglement::{
    clone_pair_min_pt, cut_diagnose, ree_witness, unlock_check, CutSpec,
};
use reconc_core::protocols::{
    classical_control_run, concentrate, concentrate_ec, concentrate_with_rule, roundtrip_george,
    teleclone, ConcentrationChannel, CorrectionRule, RunMode,
};
use reconc_core::qmath::{
    apply_unitary, fidelity, kron, partial_trace, von_neumann_entropy, BellOutcome, CMatrix,
    DensityMatrix, PureState,
};
use reconc_core::states::{bell, ec_state, optimal_clone_state, rc_channel, smolin_state};
use reconc_core::Result;

const SEED: u64 = 0x5eed;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn random_inputs(n: usize) -> Vec<(C, C)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..n)
        .map(|_| {
            let q = PureState::random(&mut rng, 1);
            (q.amp(0), q.amp(1))
        })
        .collect()
}

fn bloch_grid() -> Vec<(C, C)> {
    (0..5)
        .flat_map(|i| {
            let theta = PI * (i as f64 + 0.5) / 5.0;
            (0..4).map(move |j| {
                let phi = PI * j as f64 / 2.0;
                (
                    c((theta / 2.0).cos(), 0.0),
                    C::from_polar((theta / 2.0).sin(), phi),
                )
            })
        })
        .collect()
}

/// Cloning state written out term by term.
fn clone_oracle(a: C, b: C) -> PureState {
    let r = (2.0f64 / 3.0).sqrt();
    let h = r / 2.0;
    let mut v = vec![c(0.0, 0.0); 8];
    v[0b000] = a * r;
    v[0b101] = a * h;
    v[0b110] = a * h;
    v[0b111] = b * r;
    v[0b001] = b * h;
    v[0b010] = b * h;
    PureState::new(v).unwrap()
}

/// `(I + XXXX + YYYY + ZZZZ)/16`.
fn smolin_oracle() -> CMatrix {
    let x = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
    let y = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
    let z = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
    let four = |p: &CMatrix| kron(&kron(p, p), &kron(p, p));
    (CMatrix::identity(16, 16) + four(&x) + four(&y) + four(&z)) * c(1.0 / 16.0, 0.0)
}

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

type Verdict = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Verdict);

fn ac1() -> Verdict {
    let mut worst = f64::INFINITY;
    let mut prob_err: f64 = 0.0;
    for (a, b) in random_inputs(25) {
        let r = concentrate(
            &optimal_clone_state(a, b)?,
            &ConcentrationChannel::smolin(),
            RunMode::Enumerate,
        )?;
        if r.branches.len() != 64 {
            return Ok((false, format!("{} branches", r.branches.len())));
        }
        worst = worst.min(r.min_fidelity);
        for br in &r.branches {
            prob_err = prob_err.max((br.probability - 1.0 / 64.0).abs());
        }
    }
    Ok((
        worst >= 1.0 - 1e-10 && prob_err < 1e-10,
        format!("25 inputs x 64 branches, min fidelity {worst:.15}, max |p - 1/64| {prob_err:.1e}"),
    ))
}

fn ac2() -> Verdict {
    let reduced = partial_trace(&rc_channel(), &[0, 1, 2, 3])?;
    let d = reduced.max_abs_diff(&smolin_state());
    let d_oracle = max_diff(reduced.matrix(), &smolin_oracle());
    Ok((
        d <= 1e-12 && d_oracle <= 1e-12,
        format!("max diff {d:.1e}, against Pauli form {d_oracle:.1e}"),
    ))
}

fn ac3() -> Verdict {
    let expected = (1.0 - 17f64.sqrt()) / 12.0;
    let mut values = Vec::new();
    for (a, b) in bloch_grid() {
        values.push(clone_pair_min_pt(a, b, 1)?);
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let err = values
        .iter()
        .map(|v| (v - expected).abs())
        .fold(0.0, f64::max);
    Ok((
        err <= 1e-9 && hi - lo < 1e-9,
        format!(
            "{} grid points, value {lo:.12}, expected {expected:.12}, spread {:.1e}",
            values.len(),
            hi - lo
        ),
    ))
}

fn ac4() -> Verdict {
    let xi = remote_op_channel(&u_reverse_clone())?;
    let r = cut_diagnose(&xi, &CutSpec::new(&[0, 1, 2], 6)?)?;
    let e = r.entropy.unwrap_or(f64::NAN);
    let half = partial_trace(&xi, &[0, 1, 2])?;
    let mixed = max_diff(half.matrix(), &(CMatrix::identity(8, 8) * c(0.125, 0.0)));
    Ok((
        (e - 3.0).abs() <= 1e-9 && mixed < 1e-12,
        format!("entropy {e:.12}, distance of reduction from I/8 {mixed:.1e}"),
    ))
}

fn ac5() -> Verdict {
    let w = ree_witness()?;
    // σ* = (1/8) Σ_k |k⟩⟨k| ⊗ |parity(k)⟩⟨parity(k)|
    let mut expected_terms: Vec<(usize, usize)> = (0..8)
        .map(|k: usize| (k, (k.count_ones() & 1) as usize))
        .collect();
    let mut got: Vec<(usize, usize)> = w.terms.iter().map(|t| (t.abc, t.d)).collect();
    expected_terms.sort_unstable();
    got.sort_unstable();
    let weights_ok = w.terms.iter().all(|t| (t.weight - 0.125).abs() < 1e-12);
    let oracle = DensityMatrix::mixture(
        &expected_terms
            .iter()
            .map(|&(k, d)| (0.125, PureState::basis(4, (k << 1) | d)))
            .collect::<Vec<_>>(),
    )?;
    let sigma_ok = w.sigma.max_abs_diff(&oracle) < 1e-12;
    let s_rho = von_neumann_entropy(&smolin_state());
    Ok((
        (w.value - 1.0).abs() <= 1e-9
            && w.product_verified
            && got == expected_terms
            && weights_ok
            && sigma_ok,
        format!(
            "S(rho||sigma*) = {:.12}, {} orthogonal product terms, S(rho) = {s_rho:.12}",
            w.value,
            w.terms.len()
        ),
    ))
}

fn ac6() -> Verdict {
    let rho = smolin_state();
    let mut ok = true;
    let mut parts = Vec::new();
    for cut in CutSpec::all_bipartitions(4) {
        let r = cut_diagnose(&rho, &cut)?;
        ok &= if cut.left.len() == 2 {
            r.min_pt_eigenvalue >= -1e-10
        } else {
            r.min_pt_eigenvalue < -1e-6 && (r.min_pt_eigenvalue + 0.125).abs() < 1e-10
        };
        parts.push(format!("{} {:+.3}", r.label, r.min_pt_eigenvalue));
    }
    Ok((ok, parts.join(", ")))
}

fn ac7() -> Verdict {
    let mut worst = f64::INFINITY;
    let mut n = 0;
    let mut ab_matches = true;
    for p in 0..4 {
        for q in p + 1..4 {
            for o in unlock_check((p, q))? {
                worst = worst.min(o.fidelity);
                n += 1;
                if (p, q) == (0, 1) {
                    ab_matches &= o.bell == o.outcome;
                }
            }
        }
    }
    Ok((
        n == 24 && worst >= 1.0 - 1e-10 && ab_matches,
        format!("{n} pair/outcome entries, min Bell fidelity {worst:.15}"),
    ))
}

fn ac8() -> Verdict {
    let u = u_reverse_clone();
    let image = [0usize, 6, 5, 3, 7, 1, 2, 4];
    let mut perm = CMatrix::zeros(8, 8);
    for (k, &j) in image.iter().enumerate() {
        perm[(j, k)] = c(1.0, 0.0);
    }
    let r = (2.0f64 / 3.0).sqrt();
    let anc = PureState::new(vec![
        c(r, 0.0),
        c(r / 2.0, 0.0),
        c(r / 2.0, 0.0),
        c(0.0, 0.0),
    ])?;
    let mut worst = f64::INFINITY;
    for (a, b) in bloch_grid() {
        let out = apply_unitary(&clone_oracle(a, b), &u, &[0, 1, 2])?;
        let target = reconc_core::qmath::tensor(&PureState::qubit(a, b)?, &anc);
        worst = worst.min(fidelity(&out, &target)?);
    }
    let circuit = decompose_to_cnots(&u)?;
    let exact = circuit.matrix() == u && u == perm;
    Ok((
        worst >= 1.0 - 1e-10 && exact,
        format!(
            "min fidelity {worst:.15} on 20 grid points, {} CNOTs, gate product exact: {exact}",
            circuit.gates.len()
        ),
    ))
}

fn ac9() -> Verdict {
    let mut ec_worst = f64::INFINITY;
    let mut plain_worst = f64::INFINITY;
    for (a, b) in random_inputs(25) {
        let psi = ec_state(a, b)?;
        ec_worst = ec_worst.min(concentrate_ec(&psi, RunMode::Enumerate)?.min_fidelity);
        let plain = concentrate_with_rule(
            "plain",
            &psi,
            &PureState::qubit(a, b)?,
            &ConcentrationChannel::smolin(),
            CorrectionRule::Product,
            RunMode::Enumerate,
        )?;
        plain_worst = plain_worst.min(plain.min_fidelity);
    }
    Ok((
        ec_worst >= 1.0 - 1e-10 && plain_worst < 0.999,
        format!("with extra sigma_2 rule min fidelity {ec_worst:.6}; without it min fidelity {plain_worst:.6}"),
    ))
}

fn ac10() -> Verdict {
    let mut clone_err: f64 = 0.0;
    let mut worst = f64::INFINITY;
    for (a, b) in bloch_grid() {
        let phi = PureState::qubit(a, b)?;
        let run = teleclone(&phi, RunMode::Enumerate)?;
        for out in &run.outputs {
            worst = worst.min(fidelity(out, &clone_oracle(a, b))?);
            for k in [1, 2] {
                clone_err =
                    clone_err.max((fidelity(&partial_trace(out, &[k])?, &phi)? - 5.0 / 6.0).abs());
            }
        }
    }
    Ok((
        clone_err <= 1e-10 && worst >= 1.0 - 1e-10,
        format!("max |F_clone - 5/6| {clone_err:.1e}, min output fidelity {worst:.15}"),
    ))
}

fn ac11() -> Verdict {
    let start = Instant::now();
    let run = roundtrip_george(RunMode::Enumerate)?;
    let secs = start.elapsed().as_secs_f64();
    let phi0 = bell(BellOutcome::new(0)?);
    let mut worst = f64::INFINITY;
    for pair in &run.pair_states {
        worst = worst.min(fidelity(pair, &phi0)?);
    }
    let n = run.pair_states.len();
    Ok((
        n == 256 && worst >= 1.0 - 1e-10 && secs < 10.0,
        format!("{n} branches, min Bell fidelity {worst:.15}, {secs:.2} s"),
    ))
}

fn ac12() -> Verdict {
    let run = classical_control_run(RunMode::Enumerate)?;
    let min_pt = run.min_pt_eigenvalue();
    let mean = run.report.mean_fidelity;
    let every = run
        .report
        .branches
        .iter()
        .all(|b| b.min_pt_eigenvalue.is_some_and(|v| v >= -1e-10));
    Ok((
        every && mean <= 2.0 / 3.0 + 1e-10,
        format!(
            "{} branches, min PT eigenvalue {min_pt:+.3e}, mean fidelity {mean:.12}",
            run.report.branches.len()
        ),
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("concentration exactness", ac1),
        ("channel reduction identity", ac2),
        ("ancilla-clone partial transpose value", ac3),
        ("cut entropy of the reverse-cloning channel", ac4),
        ("relative entropy witness", ac5),
        ("Smolin cut structure", ac6),
        ("unlockability", ac7),
        ("reverse-cloning unitary and CNOT circuit", ac8),
        ("error-correcting variant", ac9),
        ("telecloning", ac10),
        ("round trip with George", ac11),
        ("classical channel control", ac12),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = i + 1;
        let (passed, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        println!(
            "{} AC{id:02} {name}: {detail}",
            if passed { "PASS" } else { "FAIL" }
        );
        if !passed {
            failed.push(id);
        }
    }
    println!(
        "acceptance: {} passed, {} failed",
        criteria.len() - failed.len(),
        failed.len()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
