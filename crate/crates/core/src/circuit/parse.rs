//! Text circuit format: one gate per line, case-insensitive, `#` comments.
//!
//! ```text
//! # Bell pair
//! H 0
//! CX 0 1
//! P 0 0.7853981633974483
//! ```
//!
//! An optional `WIDTH n` line fixes the width; otherwise it is the larger of
//! 2 and one past the highest qubit index used. `U q` takes eight numbers, the
//! real and imaginary parts of a row-major 2×2 unitary.

use super::{Gate, GateCircuit, MAX_WIDTH};
use crate::error::{Error, Result};
use crate::linalg::{c, Mat2};

pub fn parse_circuit(text: &str) -> Result<GateCircuit> {
    let mut gates = Vec::new();
    let mut width = None;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let op = tokens.next().expect("non-empty line").to_ascii_uppercase();
        let args: Vec<&str> = tokens.collect();
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        if op == "WIDTH" {
            if width.is_some() || !gates.is_empty() {
                return Err(err("WIDTH must appear once, before any gate".into()));
            }
            let [w] = args[..] else {
                return Err(err("WIDTH takes one argument".into()));
            };
            let w: usize = w.parse().map_err(|_| err(format!("invalid width {w:?}")))?;
            width = Some(w);
            continue;
        }
        gates.push(parse_gate(&op, &args).map_err(err)?);
    }

    let used = gates
        .iter()
        .flat_map(|g| g.qubits())
        .max()
        .map_or(0, |q| q + 1);
    let width = width.unwrap_or(used.max(2));
    if width > MAX_WIDTH || used > width {
        return Err(Error::InvalidGate(format!(
            "circuit needs {} qubits; at most {MAX_WIDTH} supported (declared width {width})",
            used.max(width)
        )));
    }
    GateCircuit::new(width, gates)
}

fn parse_gate(op: &str, args: &[&str]) -> std::result::Result<Gate, String> {
    let expect = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(format!("{op} takes {n} arguments, got {}", args.len()))
        }
    };
    let qubit = |i: usize| -> std::result::Result<usize, String> {
        args[i]
            .parse()
            .map_err(|_| format!("invalid qubit index {:?}", args[i]))
    };
    let num = |i: usize| -> std::result::Result<f64, String> {
        args[i]
            .parse()
            .map_err(|_| format!("invalid number {:?}", args[i]))
    };
    let gate = match op {
        "H" | "X" | "Z" | "SDG" => {
            expect(1)?;
            let q = qubit(0)?;
            match op {
                "H" => Gate::H(q),
                "X" => Gate::X(q),
                "Z" => Gate::Z(q),
                _ => Gate::Sdg(q),
            }
        }
        "P" | "RY" | "RX" | "RZ" => {
            expect(2)?;
            let (q, t) = (qubit(0)?, num(1)?);
            match op {
                "P" => Gate::P(q, t),
                "RY" => Gate::RY(q, t),
                "RX" => Gate::RX(q, t),
                _ => Gate::RZ(q, t),
            }
        }
        "CX" | "CNOT" | "CZ" | "SWAP" => {
            expect(2)?;
            let (a, b) = (qubit(0)?, qubit(1)?);
            match op {
                "CZ" => Gate::CZ {
                    control: a,
                    target: b,
                },
                "SWAP" => Gate::Swap(a, b),
                _ => Gate::CX {
                    control: a,
                    target: b,
                },
            }
        }
        "CP" => {
            expect(3)?;
            Gate::CP {
                control: qubit(0)?,
                target: qubit(1)?,
                theta: num(2)?,
            }
        }
        "U" => {
            expect(9)?;
            let q = qubit(0)?;
            let mut v = [c(0.0, 0.0); 4];
            for (k, z) in v.iter_mut().enumerate() {
                *z = c(num(1 + 2 * k)?, num(2 + 2 * k)?);
            }
            Gate::U(q, Mat2::from_vectorized(v))
        }
        _ => return Err(format!("unknown gate {op:?}")),
    };
    Ok(gate)
}
