use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use reconc_core::entanglement::{
    clone_pair_min_pt, cut_diagnose, ree_witness, unlock_check, CutSpec, Verdict,
};
use reconc_core::protocols::{
    concentrate, concentrate_with_rule, concentration_reference, remote_apply, teleclone,
    ConcentrationChannel, CorrectionRule, RunMode, SUCCESS_FIDELITY,
};
use reconc_core::qmath::{fidelity, partial_trace, PureState};
use reconc_core::states::{
    ec_state, optimal_clone_state, rc_channel, smolin_state, telecloning_channel, StateValue,
};

use crate::output::Envelope;
use crate::parse::{circuit_unitary, normalize, parse_circuit, parse_complex, parse_state, Gate};
use crate::verify::run_suite;

/// Tolerance for the entanglement diagnostics.
const DIAGNOSE_TOL: f64 = 1e-9;
/// Fidelity tolerance of protocol runs.
const PROTOCOL_TOL: f64 = 1e-10;

#[derive(Debug)]
pub enum Failure {
    /// Bad flags or unreadable input files.
    Usage(String),
    /// The simulation itself reported an error.
    Run(String),
}

impl From<reconc_core::Error> for Failure {
    fn from(e: reconc_core::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "reconc",
    version,
    about = "Remote information concentration simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the acceptance and invariant suite.
    Verify {
        /// Override every check's tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Seed for the random inputs.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Concentrate a cloning state (or, with --ec, a repetition-code state) into David's qubit.
    Concentrate {
        #[command(flatten)]
        input: Amplitudes,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Channel::Smolin)]
        channel: Channel,
        /// Encode as α|000⟩ + β|111⟩ and use the error-correcting rule.
        #[arg(long)]
        ec: bool,
    },
    /// Teleclone α|0⟩ + β|1⟩ to two receivers.
    Teleclone {
        #[command(flatten)]
        input: Amplitudes,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Apply a three-qubit Clifford circuit remotely.
    RemoteOp {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Entanglement diagnostics of a named state.
    Diagnose {
        #[arg(long, value_enum)]
        state: DiagState,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        alpha: Option<Complex64>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        beta: Option<Complex64>,
        /// `all`, or comma-separated cuts in letter notation such as `AB:CD,A:BCD`.
        #[arg(long, default_value = "all")]
        cuts: String,
    },
}

#[derive(Debug, Args)]
pub struct Amplitudes {
    /// Amplitude of |0⟩ as `re,im`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    alpha: Complex64,
    /// Amplitude of |1⟩ as `re,im`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    beta: Complex64,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value_t = Mode::Enumerate)]
    mode: Mode,
    /// Seed for `--mode sample`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Enumerate,
    Sample,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Channel {
    Smolin,
    Classical,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DiagState {
    Smolin,
    Cloning,
    RcChannel,
    Telecloning,
}

fn pair_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

impl RunArgs {
    fn mode(&self, warnings: &mut Vec<String>) -> Result<RunMode, Failure> {
        match (self.mode, self.seed) {
            (Mode::Enumerate, Some(_)) => {
                warnings.push("--seed is ignored in enumerate mode".into());
                Ok(RunMode::Enumerate)
            }
            (Mode::Enumerate, None) => Ok(RunMode::Enumerate),
            (Mode::Sample, Some(seed)) => Ok(RunMode::Sample { seed }),
            (Mode::Sample, None) => Err(Failure::Usage("--mode sample requires --seed".into())),
        }
    }
}

impl Amplitudes {
    fn normalized(&self, warnings: &mut Vec<String>) -> Result<(Complex64, Complex64), Failure> {
        let n = normalize(vec![self.alpha, self.beta], "(alpha, beta)")
            .map_err(|e| Failure::Usage(e.to_string()))?;
        warnings.extend(n.warning);
        Ok((n.amps[0], n.amps[1]))
    }
}

fn envelope(
    command: &str,
    parameters: Value,
    mode: RunMode,
    results: Value,
    all_passed: bool,
    warnings: Vec<String>,
) -> Envelope {
    Envelope {
        command: command.into(),
        parameters,
        seed: mode.seed(),
        tolerance: PROTOCOL_TOL,
        results,
        all_passed,
        warnings,
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serialises")
}

pub fn execute(command: Command) -> Result<Envelope, Failure> {
    match command {
        Command::Verify { tol, seed } => verify(tol, seed),
        Command::Concentrate {
            input,
            run,
            channel,
            ec,
        } => run_concentrate(&input, &run, channel, ec),
        Command::Teleclone { input, run } => run_teleclone(&input, &run),
        Command::RemoteOp {
            circuit,
            state,
            run,
        } => run_remote_op(&circuit, &state, &run),
        Command::Diagnose {
            state,
            alpha,
            beta,
            cuts,
        } => diagnose(state, alpha, beta, &cuts),
    }
}

fn verify(tol: Option<f64>, seed: u64) -> Result<Envelope, Failure> {
    if let Some(t) = tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Failure::Usage(format!(
                "--tol must be a non-negative number, got {t}"
            )));
        }
    }
    let checks = run_suite(tol, seed);
    let passed = checks.iter().filter(|c| c.passed).count();
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.id.as_str())
        .collect();
    for c in &checks {
        eprintln!(
            "{} {} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.name
        );
    }
    Ok(Envelope {
        command: "verify".into(),
        parameters: json!({ "tol": tol }),
        seed: Some(seed),
        tolerance: tol.unwrap_or(1e-10),
        all_passed: failed.is_empty(),
        results: json!({ "passed": passed, "failed": failed, "checks": checks }),
        warnings: Vec::new(),
    })
}

fn run_concentrate(
    input: &Amplitudes,
    run: &RunArgs,
    channel: Channel,
    ec: bool,
) -> Result<Envelope, Failure> {
    let mut warnings = Vec::new();
    let mode = run.mode(&mut warnings)?;
    let (a, b) = input.normalized(&mut warnings)?;
    let ch = match channel {
        Channel::Smolin => ConcentrationChannel::smolin(),
        Channel::Classical => ConcentrationChannel::classical(),
    };
    let report = if ec {
        let psi = ec_state(a, b)?;
        let target = concentration_reference(&psi)?;
        concentrate_with_rule(
            "concentrate_ec",
            &psi,
            &target,
            &ch,
            CorrectionRule::ErrorCorrecting,
            mode,
        )?
    } else {
        concentrate(&optimal_clone_state(a, b)?, &ch, mode)?
    };
    let parameters = json!({
        "alpha": pair_json(a),
        "beta": pair_json(b),
        "mode": mode.label(),
        "channel": ch.name(),
        "ec": ec,
    });
    Ok(envelope(
        "concentrate",
        parameters,
        mode,
        to_json(&report),
        report.success,
        warnings,
    ))
}

fn run_teleclone(input: &Amplitudes, run: &RunArgs) -> Result<Envelope, Failure> {
    let mut warnings = Vec::new();
    let mode = run.mode(&mut warnings)?;
    let (a, b) = input.normalized(&mut warnings)?;
    let phi = PureState::qubit(a, b)?;
    let out = teleclone(&phi, mode)?;
    let mut clone_fidelities = Vec::new();
    for state in &out.outputs {
        for k in [1, 2] {
            clone_fidelities.push(fidelity(&partial_trace(state, &[k])?, &phi)?);
        }
    }
    let expected = 5.0 / 6.0;
    let max_error = clone_fidelities
        .iter()
        .map(|f| (f - expected).abs())
        .fold(0.0, f64::max);
    let results = json!({
        "report": to_json(&out.report),
        "clone_fidelity_expected": expected,
        "clone_fidelities": clone_fidelities,
        "clone_fidelity_max_error": max_error,
    });
    let parameters = json!({ "alpha": pair_json(a), "beta": pair_json(b), "mode": mode.label() });
    let ok = out.report.success && max_error <= PROTOCOL_TOL;
    Ok(envelope(
        "teleclone",
        parameters,
        mode,
        results,
        ok,
        warnings,
    ))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn gate_text(g: &Gate) -> String {
    match *g {
        Gate::Cnot { control, target } => format!("CNOT {control} {target}"),
        Gate::H(q) => format!("H {q}"),
        Gate::X(q) => format!("X {q}"),
        Gate::Y(q) => format!("Y {q}"),
        Gate::Z(q) => format!("Z {q}"),
    }
}

fn run_remote_op(circuit: &Path, state: &Path, run: &RunArgs) -> Result<Envelope, Failure> {
    let mut warnings = Vec::new();
    let mode = run.mode(&mut warnings)?;
    let usage = |e: crate::parse::ParseError, path: &Path| {
        Failure::Usage(format!("{}: {e}", path.display()))
    };
    let parsed = parse_state(&read(state)?).map_err(|e| usage(e, state))?;
    warnings.extend(parsed.warning);
    let psi = PureState::new(parsed.amps)?;
    if psi.n_qubits() != 3 {
        return Err(Failure::Usage(format!(
            "{}: remote-op needs a 3-qubit state, got {} qubits",
            state.display(),
            psi.n_qubits()
        )));
    }
    let gates = parse_circuit(&read(circuit)?, 3).map_err(|e| usage(e, circuit))?;
    let u = circuit_unitary(&gates, 3)?;
    let out = remote_apply(&u, &psi, mode)?;
    let parameters = json!({
        "circuit": gates.iter().map(gate_text).collect::<Vec<_>>(),
        "state": psi.amps().iter().map(|z| pair_json(*z)).collect::<Vec<_>>(),
        "mode": mode.label(),
    });
    let results = to_json(&out.report);
    Ok(envelope(
        "remote-op",
        parameters,
        mode,
        results,
        out.report.success,
        warnings,
    ))
}

fn parse_cuts(spec: &str, n: usize) -> Result<Vec<CutSpec>, Failure> {
    if spec.trim() == "all" {
        return Ok(CutSpec::all_bipartitions(n));
    }
    let side = |s: &str| -> Result<Vec<usize>, Failure> {
        s.chars()
            .map(|ch| {
                let q = (ch.to_ascii_uppercase() as usize).wrapping_sub('A' as usize);
                if q < n {
                    Ok(q)
                } else {
                    Err(Failure::Usage(format!(
                        "qubit {ch:?} not in a {n}-qubit state"
                    )))
                }
            })
            .collect()
    };
    spec.split(',')
        .map(|cut| {
            let (l, r) = cut
                .trim()
                .split_once(':')
                .ok_or_else(|| Failure::Usage(format!("cut {cut:?} is not of the form AB:CD")))?;
            let c = CutSpec::new(&side(l)?, n).map_err(|e| Failure::Usage(e.to_string()))?;
            let mut right = side(r)?;
            right.sort_unstable();
            if right != c.right {
                return Err(Failure::Usage(format!(
                    "cut {cut:?} does not partition all {n} qubits"
                )));
            }
            Ok(c)
        })
        .collect()
}

fn diagnose(
    which: DiagState,
    alpha: Option<Complex64>,
    beta: Option<Complex64>,
    cuts: &str,
) -> Result<Envelope, Failure> {
    let mut warnings = Vec::new();
    let needs_input = matches!(which, DiagState::Cloning);
    if !needs_input && (alpha.is_some() || beta.is_some()) {
        warnings.push("--alpha/--beta only apply to --state cloning".into());
    }
    let (a, b) = match (alpha, beta) {
        (None, None) => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        (Some(a), Some(b)) => {
            let n = normalize(vec![a, b], "(alpha, beta)")
                .map_err(|e| Failure::Usage(e.to_string()))?;
            warnings.extend(n.warning);
            (n.amps[0], n.amps[1])
        }
        _ => return Err(Failure::Usage("give both --alpha and --beta".into())),
    };
    let (name, state) = match which {
        DiagState::Smolin => ("smolin", StateValue::Mixed(smolin_state())),
        DiagState::Cloning => ("cloning", StateValue::Pure(optimal_clone_state(a, b)?)),
        DiagState::RcChannel => ("rc-channel", StateValue::Pure(rc_channel())),
        DiagState::Telecloning => ("telecloning", StateValue::Pure(telecloning_channel())),
    };
    let n = state.as_ref().n_qubits();
    let reports = parse_cuts(cuts, n)?
        .iter()
        .map(|c| cut_diagnose(state.as_ref(), c))
        .collect::<reconc_core::Result<Vec<_>>>()?;
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    let mut results = json!({
        "state": name,
        "n_qubits": n,
        "negativity_convention": "sum of |negative partial-transpose eigenvalues|",
        "ppt_cuts": count(Verdict::Ppt),
        "npt_cuts": count(Verdict::Npt),
        "cuts": to_json(&reports),
    });
    let mut ok = true;
    match which {
        DiagState::Smolin => {
            let w = ree_witness()?;
            ok &= (w.value - 1.0).abs() <= DIAGNOSE_TOL && w.product_verified;
            results["ree_witness"] = json!({
                "value": w.value,
                "product_verified": w.product_verified,
                "terms": to_json(&w.terms),
            });
            let mut pairs = Vec::new();
            for p in 0..4 {
                for q in p + 1..4 {
                    let outcomes = unlock_check((p, q))?;
                    ok &= outcomes.iter().all(|o| o.fidelity >= SUCCESS_FIDELITY);
                    let label: String = [p, q].iter().map(|&i| (b'A' + i as u8) as char).collect();
                    pairs.push(json!({ "pair": label, "outcomes": to_json(&outcomes) }));
                }
            }
            results["unlock_check"] = Value::Array(pairs);
        }
        DiagState::Cloning => {
            let expected = (1.0 - 17f64.sqrt()) / 12.0;
            let v1 = clone_pair_min_pt(a, b, 1)?;
            let v2 = clone_pair_min_pt(a, b, 2)?;
            ok &= (v1 - expected).abs() <= DIAGNOSE_TOL && (v2 - expected).abs() <= DIAGNOSE_TOL;
            results["clone_ancilla_check"] =
                json!({ "expected": expected, "ancilla_clone1": v1, "ancilla_clone2": v2 });
        }
        DiagState::RcChannel | DiagState::Telecloning => {}
    }
    let parameters = json!({
        "state": name,
        "alpha": needs_input.then(|| pair_json(a)),
        "beta": needs_input.then(|| pair_json(b)),
        "cuts": cuts,
    });
    Ok(Envelope {
        command: "diagnose".into(),
        parameters,
        seed: None,
        tolerance: DIAGNOSE_TOL,
        results,
        all_passed: ok,
        warnings,
    })
}
