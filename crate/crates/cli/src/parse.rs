//! Circuit files, state files and complex-number flags.

use num_complex::Complex64;
use reconc_core::qmath::{apply_unitary, CMatrix, PureState};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("{message}, line {line}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn at(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Cnot { control: usize, target: usize },
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
}

impl Gate {
    fn apply(&self, s: &PureState) -> reconc_core::Result<PureState> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m = |v: [(f64, f64); 4]| {
            CMatrix::from_row_slice(2, 2, &v.map(|(re, im)| Complex64::new(re, im)))
        };
        match *self {
            Gate::Cnot { control, target } => {
                let mut u = CMatrix::identity(4, 4);
                u.swap_rows(2, 3);
                apply_unitary(s, &u, &[control, target])
            }
            Gate::H(q) => apply_unitary(s, &m([(h, 0.0), (h, 0.0), (h, 0.0), (-h, 0.0)]), &[q]),
            Gate::X(q) => apply_unitary(
                s,
                &m([(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]),
                &[q],
            ),
            Gate::Y(q) => apply_unitary(
                s,
                &m([(0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)]),
                &[q],
            ),
            Gate::Z(q) => apply_unitary(
                s,
                &m([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)]),
                &[q],
            ),
        }
    }
}

fn content(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

/// One gate per line: `CNOT c t`, `H q`, `X q`, `Y q`, `Z q`; `#` comments.
pub fn parse_circuit(text: &str, n_qubits: usize) -> Result<Vec<Gate>, ParseError> {
    let mut gates = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let words: Vec<&str> = content(raw).split_whitespace().collect();
        let Some((&name, args)) = words.split_first() else {
            continue;
        };
        let arity = if name.eq_ignore_ascii_case("CNOT") {
            2
        } else {
            1
        };
        let idx = args
            .iter()
            .map(|a| {
                let q: usize = a
                    .parse()
                    .map_err(|_| at(line, format!("bad qubit index {a:?}")))?;
                if q >= n_qubits {
                    return Err(at(
                        line,
                        format!("qubit {q} out of range for {n_qubits} qubits"),
                    ));
                }
                Ok(q)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let gate = match name.to_ascii_uppercase().as_str() {
            "CNOT" | "H" | "X" | "Y" | "Z" if idx.len() != arity => {
                return Err(at(
                    line,
                    format!("{name} takes {arity} qubit(s), got {}", idx.len()),
                ))
            }
            "CNOT" if idx[0] == idx[1] => return Err(at(line, "control equals target")),
            "CNOT" => Gate::Cnot {
                control: idx[0],
                target: idx[1],
            },
            "H" => Gate::H(idx[0]),
            "X" => Gate::X(idx[0]),
            "Y" => Gate::Y(idx[0]),
            "Z" => Gate::Z(idx[0]),
            _ => return Err(at(line, format!("unknown gate {name:?}"))),
        };
        gates.push(gate);
    }
    Ok(gates)
}

/// Unitary of a gate list; the first gate is applied first.
pub fn circuit_unitary(gates: &[Gate], n_qubits: usize) -> reconc_core::Result<CMatrix> {
    let dim = 1 << n_qubits;
    let mut u = CMatrix::zeros(dim, dim);
    for k in 0..dim {
        let mut s = PureState::basis(n_qubits, k);
        for g in gates {
            s = g.apply(&s)?;
        }
        for (j, a) in s.amps().iter().enumerate() {
            u[(j, k)] = *a;
        }
    }
    Ok(u)
}

/// Amplitudes normalised to one, with a warning when the input was off by more than 1e-6.
#[derive(Debug)]
pub struct Normalized {
    pub amps: Vec<Complex64>,
    pub warning: Option<String>,
}

pub fn normalize(amps: Vec<Complex64>, what: &str) -> Result<Normalized, ParseError> {
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || norm < 1e-12 {
        return Err(ParseError::Invalid(format!("{what} has zero norm")));
    }
    let warning =
        ((norm - 1.0).abs() > 1e-6).then(|| format!("{what} had norm {norm}; normalized"));
    Ok(Normalized {
        amps: amps.into_iter().map(|a| a / norm).collect(),
        warning,
    })
}

/// Lines of `bitstring re im`; `#` comments; unlisted amplitudes are zero.
pub fn parse_state(text: &str) -> Result<Normalized, ParseError> {
    let mut entries: Vec<(usize, Complex64)> = Vec::new();
    let mut width = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let words: Vec<&str> = content(raw).split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        let [bits, re, im] = words[..] else {
            return Err(at(line, "expected `bitstring re im`"));
        };
        if bits.is_empty() || !bits.chars().all(|ch| ch == '0' || ch == '1') {
            return Err(at(line, format!("bad bitstring {bits:?}")));
        }
        if *width.get_or_insert(bits.len()) != bits.len() {
            return Err(at(line, "bitstrings differ in length"));
        }
        if bits.len() > 16 {
            return Err(at(line, "more than 16 qubits"));
        }
        let num = |w: &str| {
            w.parse::<f64>()
                .map_err(|_| at(line, format!("bad number {w:?}")))
        };
        let index = usize::from_str_radix(bits, 2).expect("checked binary");
        if entries.iter().any(|e| e.0 == index) {
            return Err(at(line, format!("duplicate bitstring {bits}")));
        }
        entries.push((index, Complex64::new(num(re)?, num(im)?)));
    }
    let width = width.ok_or_else(|| ParseError::Invalid("state file has no amplitudes".into()))?;
    let mut amps = vec![Complex64::default(); 1 << width];
    for (index, a) in entries {
        amps[index] = a;
    }
    normalize(amps, "state file")
}

/// `re,im` or a bare real part.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let mut parts = s.split(',').map(str::trim);
    let num = |p: Option<&str>| -> Result<f64, String> {
        p.ok_or_else(|| format!("expected re,im, got {s:?}"))?
            .parse::<f64>()
            .map_err(|_| format!("expected re,im, got {s:?}"))
            .and_then(|v| {
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(format!("non-finite value in {s:?}"))
                }
            })
    };
    let re = num(parts.next())?;
    let im = match parts.next() {
        Some(p) => num(Some(p))?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(format!("expected re,im, got {s:?}"));
    }
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cnot() {
        assert_eq!(
            parse_circuit("CNOT 0 1", 3).unwrap(),
            vec![Gate::Cnot {
                control: 0,
                target: 1
            }]
        );
    }

    #[test]
    fn comments_and_blank_lines() {
        assert_eq!(
            parse_circuit("# comment\n\nH 2  # trailing\n", 3).unwrap(),
            vec![Gate::H(2)]
        );
    }

    #[test]
    fn circuit_errors_carry_line_numbers() {
        assert_eq!(
            parse_circuit("CNOT 0 0", 3).unwrap_err().to_string(),
            "control equals target, line 1"
        );
        assert!(parse_circuit("H 0\nT 1", 3)
            .unwrap_err()
            .to_string()
            .ends_with("line 2"));
        assert!(parse_circuit("CNOT 0", 3)
            .unwrap_err()
            .to_string()
            .contains("takes 2"));
        assert!(parse_circuit("X 3", 3)
            .unwrap_err()
            .to_string()
            .contains("out of range"));
        assert!(parse_circuit("X a", 3).is_err());
    }

    #[test]
    fn unitary_of_cnot_and_y() {
        let u = circuit_unitary(&parse_circuit("CNOT 0 1", 2).unwrap(), 2).unwrap();
        assert_eq!(u[(3, 2)], Complex64::new(1.0, 0.0));
        assert_eq!(u[(2, 3)], Complex64::new(1.0, 0.0));
        let y = circuit_unitary(&[Gate::Y(0)], 1).unwrap();
        assert_eq!(y[(1, 0)], Complex64::new(0.0, 1.0));
        // first gate first: X then Z is ZX
        let zx = circuit_unitary(&[Gate::X(0), Gate::Z(0)], 1).unwrap();
        assert_eq!(zx[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(zx[(1, 0)], Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn state_file() {
        let s =
            parse_state("# ghz\n000 0.70710678118654752 0\n111 0.70710678118654752 0\n").unwrap();
        assert_eq!(s.amps.len(), 8);
        assert!(s.warning.is_none());
        let s = parse_state("0 1 0\n1 1 0").unwrap();
        assert!(s.warning.is_some());
        assert!((s.amps[1].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(parse_state("00 1 0\n1 0 0")
            .unwrap_err()
            .to_string()
            .contains("line 2"));
        assert!(parse_state("00 1 0\n00 0 0").is_err());
        assert!(parse_state("0 0 0").is_err());
        assert!(parse_state("").is_err());
    }

    #[test]
    fn complex_flags() {
        assert_eq!(parse_complex("1,0").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(
            parse_complex("-0.5, 0.25").unwrap(),
            Complex64::new(-0.5, 0.25)
        );
        assert_eq!(parse_complex("0.6").unwrap(), Complex64::new(0.6, 0.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
        assert!(parse_complex("nan,0").is_err());
    }
}
