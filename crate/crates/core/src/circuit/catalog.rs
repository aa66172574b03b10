//! Catalog of state-preparation and teleportation circuits for the built-in
//! families.
//!
//! Circuits are transcribed as drawn, including ones that do not prepare the
//! state they are meant to; [`super::verify`] reports how each one behaves.
//! Angles stay symbolic in θ and λ and are bound from [`CircuitParams`] when
//! a circuit is built.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use super::{Gate, GateCircuit};
use crate::basis::{builtin_basis, state_from_matrix, Family, QubitState, TwoQubitState};
use crate::error::{Error, Result};
use crate::linalg::{Mat2, ONE};

/// Which family the shared hyperbolic/scale teleport circuit draws its
/// correction block from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TeleportFamily {
    Hyperbolic,
    Scale,
}

impl std::str::FromStr for TeleportFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hyperbolic" => Ok(TeleportFamily::Hyperbolic),
            "scale" => Ok(TeleportFamily::Scale),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

/// Bindings for the symbolic circuit parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub theta: f64,
    pub lambda: f64,
    /// Basis matrix index used by the teleport circuits.
    pub matrix_index: usize,
    pub family: TeleportFamily,
}

impl Default for CircuitParams {
    fn default() -> Self {
        CircuitParams {
            theta: FRAC_PI_4,
            lambda: 2.0,
            matrix_index: 0,
            family: TeleportFamily::Hyperbolic,
        }
    }
}

impl CircuitParams {
    fn check(&self) -> Result<()> {
        for (name, v) in [("theta", self.theta), ("lambda", self.lambda)] {
            if !v.is_finite() {
                return Err(Error::ParamOutOfRange {
                    name,
                    value: v,
                    reason: "must be finite",
                });
            }
        }
        if self.matrix_index >= 4 {
            return Err(Error::IndexOutOfRange {
                index: self.matrix_index,
                bound: 4,
            });
        }
        Ok(())
    }

    /// The basis a teleport circuit is checked against.
    pub fn teleport_family(&self, id: &str) -> Option<Family> {
        match id {
            "telExpI" => Some(Family::Phase { theta: self.theta }),
            "telRot" => Some(Family::Rotation { theta: self.theta }),
            "telHyperScale" => Some(match self.family {
                TeleportFamily::Hyperbolic => Family::Hyperbolic { theta: self.theta },
                TeleportFamily::Scale => Family::Scale {
                    lambda: self.lambda,
                },
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogKind {
    StatePrep,
    Teleport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub kind: CatalogKind,
    pub description: &'static str,
    /// Known disagreement between the circuit and its claimed state, if any.
    pub discrepancy: Option<&'static str>,
    /// An alternative transcription of the same circuit, kept for reference.
    pub variant: Option<&'static str>,
}

impl CatalogEntry {
    pub fn has_documented_discrepancy(&self) -> bool {
        self.discrepancy.is_some()
    }
}

const ENTRIES: [CatalogEntry; 15] = [
    CatalogEntry {
        id: "fig1",
        kind: CatalogKind::StatePrep,
        description: "H q0, CX(0,1) prepares (|00⟩+|11⟩)/√2",
        discrepancy: None,
        variant: None,
    },
    CatalogEntry {
        id: "fig2",
        kind: CatalogKind::StatePrep,
        description: "X q0, H q0, CX(0,1) prepares (|00⟩−|11⟩)/√2",
        discrepancy: None,
        variant: None,
    },
    CatalogEntry {
        id: "fig3",
        kind: CatalogKind::StatePrep,
        description: "H q0, X q1, CX(0,1) prepares (|01⟩+|10⟩)/√2",
        discrepancy: None,
        variant: None,
    },
    CatalogEntry {
        id: "fig4",
        kind: CatalogKind::StatePrep,
        description: "H q0, Z q0, X q1, Z q1, CX(0,1) prepares (|01⟩−|10⟩)/√2 up to a sign",
        discrepancy: None,
        variant: None,
    },
    CatalogEntry {
        id: "figExpI1",
        kind: CatalogKind::StatePrep,
        description: "H q0, CX(0,1), P(θ) q0 for phase state 0: (e^{iθ}|00⟩+|11⟩)/√2",
        discrepancy: Some("circuit puts e^{iθ} on |11⟩, not |00⟩; equal up to global phase only when θ ≡ 0 (mod π)"),
        variant: Some("H q0, CX(0,1), P(π/4) q0, SWAP(0,1)"),
    },
    CatalogEntry {
        id: "figExpI2",
        kind: CatalogKind::StatePrep,
        description: "H q0, Sdg q1, CX(0,1), P(−θ) q1 for phase state 1: (|00⟩−e^{−iθ}|11⟩)/√2",
        discrepancy: Some("the Sdg acts on |0⟩ and does nothing; the circuit yields (|00⟩+e^{−iθ}|11⟩)/√2, orthogonal to the claim"),
        variant: Some("H q0, Sdg q1, CX(0,1), P(−π/4) q1, SWAP(0,1)"),
    },
    CatalogEntry {
        id: "figRot1",
        kind: CatalogKind::StatePrep,
        description: "RY(2θ) q0, CX(0,1), RY(2θ) q1 for rotation state 0",
        discrepancy: Some("the second rotation mixes |00⟩ with |01⟩ and |10⟩ with |11⟩; does not give (cos θ, −sin θ, sin θ, cos θ)/√2"),
        variant: None,
    },
    CatalogEntry {
        id: "figRot2",
        kind: CatalogKind::StatePrep,
        description: "RY(2θ) q0, CX(0,1), RY(2θ) q1, Z q0, Z q1 for rotation state 1",
        discrepancy: Some("same structure as figRot1 with Z on both wires; does not give (−sin θ, −cos θ, cos θ, −sin θ)/√2"),
        variant: None,
    },
    CatalogEntry {
        id: "figHyper1",
        kind: CatalogKind::StatePrep,
        description: "RY(x′) q0, CX(0,1), RY(y′) q1 with x′ = 2·atan2(sinh θ, cosh θ), y′ = 2·asin(√(sinh²θ/(cosh²θ+sinh²θ)))",
        discrepancy: Some("the angle pair does not reproduce (cosh θ, sinh θ, sinh θ, cosh θ)/√(2cosh 2θ)"),
        variant: None,
    },
    CatalogEntry {
        id: "figHyper2",
        kind: CatalogKind::StatePrep,
        description: "RY(x₂) q0, CX(0,1), X q0, Z q0, RY(y₂) q1, Z q1 with x₂ = 2·asin(sinh θ/√(2cosh 2θ)), y₂ = 2·asin(sin θ/√(2cosh 2θ))",
        discrepancy: Some("does not reproduce (sinh θ, −cosh θ, −cosh θ, sinh θ)/√(2cosh 2θ); y₂ uses sin where sinh is expected"),
        variant: Some("y₂ written with sinh instead of sin"),
    },
    CatalogEntry {
        id: "figEscale1",
        kind: CatalogKind::StatePrep,
        description: "H q0, RY(2·atan(1/λ)) q0, CX(0,1) for scale state 0: (λ|00⟩+|11⟩)/√(1+λ²)",
        discrepancy: Some("the leading H shifts the rotation; the circuit gives weights (1, 3) at λ = 2 instead of (λ, 1)"),
        variant: Some("H q0, RY(2·atan(1/λ)) q0, CX(0,1), SWAP(0,1)"),
    },
    CatalogEntry {
        id: "figEscale2",
        kind: CatalogKind::StatePrep,
        description: "H q0, CX(0,1), CZ(0,1), H q0 for scale state 1: (|00⟩−λ|11⟩)/√(1+λ²)",
        discrepancy: Some("no gate depends on λ; the output is a uniform-magnitude state"),
        variant: Some("CZ written with control and target exchanged (same gate)"),
    },
    CatalogEntry {
        id: "telExpI",
        kind: CatalogKind::Teleport,
        description: "H q1, CX(1,2); CX(0,1), H q0, CP(θ)(0,1), CP(−θ)(0,1); deferred CX(1,2), CZ(0,2). Payload H|0⟩",
        discrepancy: None,
        variant: Some("payload X|0⟩; second phase gate written CP(−θ)(1,0)"),
    },
    CatalogEntry {
        id: "telRot",
        kind: CatalogKind::Teleport,
        description: "H q1, CX(1,2); CX(0,1), RX(θ) q0, RZ(−θ) q1; deferred CX(1,2), CZ(0,2). Payload H|0⟩",
        discrepancy: Some("the RX/RZ stage is not undone by the CX/CZ corrections; Bob's state generally differs from the payload"),
        variant: Some("payload X|0⟩; RX(2θ) q0 and RZ(2θ) q1"),
    },
    CatalogEntry {
        id: "telHyperScale",
        kind: CatalogKind::Teleport,
        description: "H q1, CX(1,2); M q0, M q1, CX(0,1), H q0; deferred CX(1,2), CZ(0,2). M is the polar unitary of basis matrix `matrix_index`. Payload X|0⟩",
        discrepancy: None,
        variant: Some("M applied once as a block spanning q0 and q1"),
    },
];

pub fn catalog_entries() -> &'static [CatalogEntry] {
    &ENTRIES
}

pub fn catalog_entry(id: &str) -> Result<&'static CatalogEntry> {
    ENTRIES
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownCircuit(id.to_string()))
}

fn family_state(family: Family, index: usize) -> Result<TwoQubitState> {
    Ok(state_from_matrix(&family.matrices()[index]))
}

/// Builds a state-preparation circuit and the state it is meant to produce.
pub fn catalog(id: &str, params: &CircuitParams) -> Result<(GateCircuit, TwoQubitState)> {
    params.check()?;
    let entry = catalog_entry(id)?;
    if entry.kind != CatalogKind::StatePrep {
        return Err(Error::UnknownCircuit(format!(
            "{id} is a teleport circuit; use teleport_circuit"
        )));
    }
    let (theta, lambda) = (params.theta, params.lambda);
    let cx = Gate::CX {
        control: 0,
        target: 1,
    };
    let (gates, claimed) = match id {
        "fig1" => (vec![Gate::H(0), cx], family_state(Family::Bell, 0)?),
        "fig2" => (
            vec![Gate::X(0), Gate::H(0), cx],
            family_state(Family::Bell, 1)?,
        ),
        "fig3" => (
            vec![Gate::H(0), Gate::X(1), cx],
            family_state(Family::Bell, 2)?,
        ),
        "fig4" => (
            vec![Gate::H(0), Gate::Z(0), Gate::X(1), Gate::Z(1), cx],
            family_state(Family::Bell, 3)?,
        ),
        "figExpI1" => (
            vec![Gate::H(0), cx, Gate::P(0, theta)],
            family_state(Family::Phase { theta }, 0)?,
        ),
        "figExpI2" => (
            vec![Gate::H(0), Gate::Sdg(1), cx, Gate::P(1, -theta)],
            family_state(Family::Phase { theta }, 1)?,
        ),
        "figRot1" => (
            vec![Gate::RY(0, 2.0 * theta), cx, Gate::RY(1, 2.0 * theta)],
            family_state(Family::Rotation { theta }, 0)?,
        ),
        "figRot2" => (
            vec![
                Gate::RY(0, 2.0 * theta),
                cx,
                Gate::RY(1, 2.0 * theta),
                Gate::Z(0),
                Gate::Z(1),
            ],
            family_state(Family::Rotation { theta }, 1)?,
        ),
        "figHyper1" => {
            let (ch, sh) = (theta.cosh(), theta.sinh());
            let x = 2.0 * sh.atan2(ch);
            let y = 2.0 * (sh * sh / (ch * ch + sh * sh)).sqrt().asin();
            (
                vec![Gate::RY(0, x), cx, Gate::RY(1, y)],
                family_state(Family::Hyperbolic { theta }, 0)?,
            )
        }
        "figHyper2" => {
            let n = (2.0 * (2.0 * theta).cosh()).sqrt();
            let x = 2.0 * (theta.sinh() / n).asin();
            let y = 2.0 * (theta.sin() / n).asin();
            (
                vec![
                    Gate::RY(0, x),
                    cx,
                    Gate::X(0),
                    Gate::Z(0),
                    Gate::RY(1, y),
                    Gate::Z(1),
                ],
                family_state(Family::Hyperbolic { theta }, 1)?,
            )
        }
        "figEscale1" => (
            vec![Gate::H(0), Gate::RY(0, 2.0 * (1.0 / lambda).atan()), cx],
            family_state(Family::Scale { lambda }, 0)?,
        ),
        "figEscale2" => (
            vec![
                Gate::H(0),
                cx,
                Gate::CZ {
                    control: 0,
                    target: 1,
                },
                Gate::H(0),
            ],
            family_state(Family::Scale { lambda }, 1)?,
        ),
        _ => unreachable!("catalog entry without a builder: {id}"),
    };
    Ok((GateCircuit::new(2, gates)?.with_id(id), claimed))
}

fn entangle_and_correct(middle: Vec<Gate>) -> Vec<Gate> {
    let mut gates = vec![
        Gate::H(1),
        Gate::CX {
            control: 1,
            target: 2,
        },
    ];
    gates.extend(middle);
    gates.push(Gate::CX {
        control: 1,
        target: 2,
    });
    gates.push(Gate::CZ {
        control: 0,
        target: 2,
    });
    gates
}

/// Builds a 3-qubit teleport circuit. Classically controlled corrections are
/// replaced by controlled gates; the payload is not part of the circuit and
/// is supplied as the initial state of qubit 0.
pub fn teleport_circuit(id: &str, params: &CircuitParams) -> Result<GateCircuit> {
    params.check()?;
    let entry = catalog_entry(id)?;
    if entry.kind != CatalogKind::Teleport {
        return Err(Error::UnknownCircuit(format!(
            "{id} is a state-preparation circuit; use catalog"
        )));
    }
    let theta = params.theta;
    let middle = match id {
        "telExpI" => vec![
            Gate::CX {
                control: 0,
                target: 1,
            },
            Gate::H(0),
            Gate::CP {
                control: 0,
                target: 1,
                theta,
            },
            Gate::CP {
                control: 0,
                target: 1,
                theta: -theta,
            },
        ],
        "telRot" => vec![
            Gate::CX {
                control: 0,
                target: 1,
            },
            Gate::RX(0, theta),
            Gate::RZ(1, -theta),
        ],
        "telHyperScale" => {
            let family = params.teleport_family(id).expect("teleport id");
            let basis = builtin_basis(&family)?;
            let m: Mat2 = basis.matrix(params.matrix_index)?.polar_unitary()?;
            vec![
                Gate::U(0, m),
                Gate::U(1, m),
                Gate::CX {
                    control: 0,
                    target: 1,
                },
                Gate::H(0),
            ]
        }
        _ => unreachable!("catalog entry without a builder: {id}"),
    };
    Ok(GateCircuit::new(3, entangle_and_correct(middle))?.with_id(id))
}

/// The payload each teleport circuit is drawn with.
pub(crate) fn default_payload(id: &str) -> QubitState {
    match id {
        "telHyperScale" => QubitState::ONE,
        _ => QubitState::normalized(ONE, ONE).expect("nonzero"),
    }
}

/// The textbook Bell-basis teleport circuit with deferred corrections.
pub fn bell_teleport_circuit() -> GateCircuit {
    GateCircuit::new(
        3,
        entangle_and_correct(vec![
            Gate::CX {
                control: 0,
                target: 1,
            },
            Gate::H(0),
        ]),
    )
    .expect("valid circuit")
    .with_id("bell")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_builds() {
        let p = CircuitParams::default();
        for e in catalog_entries() {
            match e.kind {
                CatalogKind::StatePrep => {
                    let (c0, claimed) = catalog(e.id, &p).unwrap();
                    assert_eq!(c0.width, 2);
                    assert!(claimed.is_normalized());
                    assert_eq!(c0.id.as_deref(), Some(e.id));
                }
                CatalogKind::Teleport => {
                    assert_eq!(teleport_circuit(e.id, &p).unwrap().width, 3);
                }
            }
        }
    }

    #[test]
    fn documented_shapes() {
        let p = CircuitParams::default();
        let (c1, _) = catalog("fig1", &p).unwrap();
        assert_eq!(
            c1.gates,
            vec![
                Gate::H(0),
                Gate::CX {
                    control: 0,
                    target: 1
                }
            ]
        );
        let (c4, _) = catalog("fig4", &p).unwrap();
        assert_eq!(c4.gates.len(), 5);
        let (e1, _) = catalog("figExpI1", &p).unwrap();
        assert_eq!(e1.gates[2], Gate::P(0, FRAC_PI_4));
    }

    #[test]
    fn unknown_and_misrouted_ids() {
        let p = CircuitParams::default();
        assert!(matches!(catalog("fig9", &p), Err(Error::UnknownCircuit(_))));
        assert!(matches!(
            catalog("telRot", &p),
            Err(Error::UnknownCircuit(_))
        ));
        assert!(matches!(
            teleport_circuit("fig1", &p),
            Err(Error::UnknownCircuit(_))
        ));
        let bad = CircuitParams {
            matrix_index: 4,
            ..p
        };
        assert!(teleport_circuit("telHyperScale", &bad).is_err());
    }

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = catalog_entries().iter().map(|e| e.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), ENTRIES.len());
    }
}
