//! A small state-vector simulator for 2 and 3 qubit circuits.
//!
//! Qubit 0 is the top wire and the most significant bit of the amplitude
//! index, so on three qubits `|q0 q1 q2⟩` sits at index `4·q0 + 2·q1 + q2`.

mod catalog;
mod parse;
mod verify;

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, cis, re, Mat2, StateVec, I, ONE};

pub use catalog::{
    bell_teleport_circuit, catalog, catalog_entries, catalog_entry, teleport_circuit, CatalogEntry,
    CatalogKind, CircuitParams, TeleportFamily,
};
pub use parse::parse_circuit;
pub use verify::{
    bob_density, classify, teleport_fidelity, verify, verify_all, verify_with_payload,
    EquivalenceReport, TeleportCheck, Verdict, EQUIVALENCE_TOL,
};

/// Maximum circuit width supported by the simulator.
pub const MAX_WIDTH: usize = 3;

/// A gate with its qubit operands. Angles are in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    Sdg(usize),
    /// `diag(1, e^{iθ})`
    P(usize, f64),
    /// `[[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`
    RY(usize, f64),
    /// `[[cos θ/2, −i sin θ/2], [−i sin θ/2, cos θ/2]]`
    RX(usize, f64),
    /// `diag(e^{−iθ/2}, e^{iθ/2})`
    RZ(usize, f64),
    CX {
        control: usize,
        target: usize,
    },
    CZ {
        control: usize,
        target: usize,
    },
    CP {
        control: usize,
        target: usize,
        theta: f64,
    },
    Swap(usize, usize),
    /// Arbitrary single-qubit unitary.
    U(usize, Mat2),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::X(_) => "X",
            Gate::Z(_) => "Z",
            Gate::Sdg(_) => "SDG",
            Gate::P(..) => "P",
            Gate::RY(..) => "RY",
            Gate::RX(..) => "RX",
            Gate::RZ(..) => "RZ",
            Gate::CX { .. } => "CX",
            Gate::CZ { .. } => "CZ",
            Gate::CP { .. } => "CP",
            Gate::Swap(..) => "SWAP",
            Gate::U(..) => "U",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q)
            | Gate::X(q)
            | Gate::Z(q)
            | Gate::Sdg(q)
            | Gate::P(q, _)
            | Gate::RY(q, _)
            | Gate::RX(q, _)
            | Gate::RZ(q, _)
            | Gate::U(q, _) => vec![q],
            Gate::CX { control, target }
            | Gate::CZ { control, target }
            | Gate::CP {
                control, target, ..
            } => vec![control, target],
            Gate::Swap(a, b) => vec![a, b],
        }
    }

    /// The 2×2 matrix acting on the target: the whole gate for single-qubit
    /// gates, the controlled block for controlled ones. `None` for SWAP.
    pub fn target_matrix(&self) -> Option<Mat2> {
        let m = match *self {
            Gate::H(_) => Mat2::from_real([[1.0, 1.0], [1.0, -1.0]]).scale_real(FRAC_1_SQRT_2),
            Gate::X(_) | Gate::CX { .. } => Mat2::from_real([[0.0, 1.0], [1.0, 0.0]]),
            Gate::Z(_) | Gate::CZ { .. } => Mat2::from_real([[1.0, 0.0], [0.0, -1.0]]),
            Gate::Sdg(_) => Mat2::diag(ONE, -I),
            Gate::P(_, t) | Gate::CP { theta: t, .. } => Mat2::diag(ONE, cis(t)),
            Gate::RY(_, t) => {
                let (s, co) = (t / 2.0).sin_cos();
                Mat2::from_real([[co, -s], [s, co]])
            }
            Gate::RX(_, t) => {
                let (s, co) = (t / 2.0).sin_cos();
                Mat2::new(re(co), c(0.0, -s), c(0.0, -s), re(co))
            }
            Gate::RZ(_, t) => Mat2::diag(cis(-t / 2.0), cis(t / 2.0)),
            Gate::U(_, m) => m,
            Gate::Swap(..) => return None,
        };
        Some(m)
    }

    /// Checks operands against the circuit width and, for `U`, unitarity.
    pub fn validate(&self, width: usize) -> Result<()> {
        let qs = self.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= width) {
            return Err(Error::InvalidGate(format!(
                "{} acts on qubit {q} but the circuit has width {width}",
                self.name()
            )));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::InvalidGate(format!(
                "{} needs two distinct qubits, got {} twice",
                self.name(),
                qs[0]
            )));
        }
        let finite = match *self {
            Gate::P(_, t) | Gate::RY(_, t) | Gate::RX(_, t) | Gate::RZ(_, t) => t.is_finite(),
            Gate::CP { theta, .. } => theta.is_finite(),
            Gate::U(_, m) => m.is_finite(),
            _ => true,
        };
        if !finite {
            return Err(Error::InvalidGate(format!(
                "{} has a non-finite parameter",
                self.name()
            )));
        }
        if let Gate::U(_, m) = self {
            let dev = m.unitarity_deviation();
            if dev > 1e-9 {
                return Err(Error::InvalidGate(format!(
                    "U matrix is not unitary (max |U·U† − I| = {dev:e})"
                )));
            }
        }
        Ok(())
    }

    fn apply_in_place(&self, width: usize, amps: &mut [C]) {
        let bit = |q: usize| 1usize << (width - 1 - q);
        match *self {
            Gate::Swap(a, b) => {
                let (ba, bb) = (bit(a), bit(b));
                for idx in 0..amps.len() {
                    if idx & ba != 0 && idx & bb == 0 {
                        amps.swap(idx, idx ^ ba ^ bb);
                    }
                }
            }
            Gate::CX { control, target }
            | Gate::CZ { control, target }
            | Gate::CP {
                control, target, ..
            } => {
                let m = self.target_matrix().expect("controlled gate");
                apply_mat2(amps, bit(target), Some(bit(control)), &m);
            }
            Gate::H(q)
            | Gate::X(q)
            | Gate::Z(q)
            | Gate::Sdg(q)
            | Gate::P(q, _)
            | Gate::RY(q, _)
            | Gate::RX(q, _)
            | Gate::RZ(q, _)
            | Gate::U(q, _) => {
                let m = self.target_matrix().expect("single-qubit gate");
                apply_mat2(amps, bit(q), None, &m);
            }
        }
    }
}

type C = crate::linalg::C64;

fn apply_mat2(amps: &mut [C], target_bit: usize, control_bit: Option<usize>, m: &Mat2) {
    let [[a, b], [c2, d]] = m.0;
    for i0 in 0..amps.len() {
        if i0 & target_bit != 0 {
            continue;
        }
        if let Some(cb) = control_bit {
            if i0 & cb == 0 {
                continue;
            }
        }
        let i1 = i0 | target_bit;
        let (x, y) = (amps[i0], amps[i1]);
        amps[i0] = a * x + b * y;
        amps[i1] = c2 * x + d * y;
    }
}

impl fmt::Display for Gate {
    /// Formats the gate in the text circuit format, e.g. `CP 0 1 0.785`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name();
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) | Gate::Sdg(q) => write!(f, "{name} {q}"),
            Gate::P(q, t) | Gate::RY(q, t) | Gate::RX(q, t) | Gate::RZ(q, t) => {
                write!(f, "{name} {q} {t:?}")
            }
            Gate::CX { control, target } | Gate::CZ { control, target } => {
                write!(f, "{name} {control} {target}")
            }
            Gate::CP {
                control,
                target,
                theta,
            } => write!(f, "{name} {control} {target} {theta:?}"),
            Gate::Swap(a, b) => write!(f, "{name} {a} {b}"),
            Gate::U(q, m) => {
                write!(f, "{name} {q}")?;
                for z in m.vectorize() {
                    write!(f, " {:?} {:?}", z.re, z.im)?;
                }
                Ok(())
            }
        }
    }
}

/// An ordered gate list on 2 or 3 qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateCircuit {
    pub width: usize,
    pub gates: Vec<Gate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
}

impl GateCircuit {
    pub fn new(width: usize, gates: Vec<Gate>) -> Result<Self> {
        if !(1..=MAX_WIDTH).contains(&width) {
            return Err(Error::InvalidGate(format!(
                "circuit width {width} is outside 1..={MAX_WIDTH}"
            )));
        }
        for g in &gates {
            g.validate(width)?;
        }
        Ok(GateCircuit {
            width,
            gates,
            id: None,
        })
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn dim(&self) -> usize {
        1 << self.width
    }

    /// Runs the circuit on `input`, whose dimension must be `2^width`.
    pub fn apply(&self, input: &StateVec) -> Result<StateVec> {
        if input.dim() != self.dim() {
            return Err(Error::WidthMismatch {
                width: self.width,
                expected: self.dim(),
                got: input.dim(),
            });
        }
        let mut out = input.clone();
        for g in &self.gates {
            g.apply_in_place(self.width, out.amps_mut());
        }
        Ok(out)
    }

    /// Runs the circuit on `|0…0⟩`.
    pub fn run(&self) -> Result<StateVec> {
        self.apply(&StateVec::zero_state(self.width)?)
    }

    /// The text form accepted by [`parse_circuit`].
    pub fn to_text(&self) -> String {
        let mut s = format!("WIDTH {}\n", self.width);
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }
}
