use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{validate_basis, EntangledBasis};
use crate::error::{Error, Result};
use crate::linalg::{cis, re, Mat2, ONE, ZERO};

/// `cosh(2θ)` must stay comfortably inside double range.
pub const HYPERBOLIC_THETA_LIMIT: f64 = 20.0;

/// The built-in basis families. Matrix order within each family is fixed and
/// indexed 0..3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// The standard Bell basis `Φ+, Φ−, Ψ+, Ψ−`.
    Bell,
    /// `diag(e^{iθ}, 1)/√2`, `diag(1, −e^{−iθ})/√2`, `[[0,1],[−1,0]]/√2`, `[[0,1],[1,0]]/√2`.
    Phase { theta: f64 },
    /// Two real rotations by θ plus `Z/√2` and `X/√2`.
    Rotation { theta: f64 },
    /// Symmetric cosh/sinh pair normalized by `1/√(2cosh 2θ)` plus `Z/√2`
    /// and `[[0,1],[−1,0]]/√2`. Not scaled unitaries for θ ≠ 0.
    Hyperbolic { theta: f64 },
    /// `diag(λ, 1)/√(1+λ²)`, `diag(1, −λ)/√(1+λ²)` plus the two off-diagonal
    /// Bell matrices. Not scaled unitaries for |λ| ≠ 1.
    Scale { lambda: f64 },
}

impl Family {
    pub const NAMES: [&'static str; 5] = ["bell", "phase", "rotation", "hyperbolic", "scale"];

    /// Builds a family from its (case-insensitive) name, taking whichever
    /// parameter the family needs.
    pub fn from_name(name: &str, theta: Option<f64>, lambda: Option<f64>) -> Result<Family> {
        let need_theta = || theta.ok_or(Error::MissingParam("theta"));
        match name.to_ascii_lowercase().as_str() {
            "bell" => Ok(Family::Bell),
            "phase" => Ok(Family::Phase {
                theta: need_theta()?,
            }),
            "rotation" => Ok(Family::Rotation {
                theta: need_theta()?,
            }),
            "hyperbolic" => Ok(Family::Hyperbolic {
                theta: need_theta()?,
            }),
            "scale" => Ok(Family::Scale {
                lambda: lambda.ok_or(Error::MissingParam("lambda"))?,
            }),
            _ => Err(Error::UnknownFamily(name.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Bell => "bell",
            Family::Phase { .. } => "phase",
            Family::Rotation { .. } => "rotation",
            Family::Hyperbolic { .. } => "hyperbolic",
            Family::Scale { .. } => "scale",
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut p = BTreeMap::new();
        match *self {
            Family::Bell => {}
            Family::Phase { theta } | Family::Rotation { theta } | Family::Hyperbolic { theta } => {
                p.insert("theta".to_string(), theta);
            }
            Family::Scale { lambda } => {
                p.insert("lambda".to_string(), lambda);
            }
        }
        p
    }

    /// The four generating matrices, without validation.
    pub fn matrices(&self) -> [Mat2; 4] {
        let h = FRAC_1_SQRT_2;
        let bell_i = Mat2::IDENTITY.scale_real(h);
        let bell_z = Mat2::from_real([[1.0, 0.0], [0.0, -1.0]]).scale_real(h);
        let bell_x = Mat2::from_real([[0.0, 1.0], [1.0, 0.0]]).scale_real(h);
        let bell_xz = Mat2::from_real([[0.0, 1.0], [-1.0, 0.0]]).scale_real(h);
        match *self {
            Family::Bell => [bell_i, bell_z, bell_x, bell_xz],
            Family::Phase { theta } => [
                Mat2::diag(cis(theta), ONE).scale_real(h),
                Mat2::diag(ONE, -cis(-theta)).scale_real(h),
                bell_xz,
                bell_x,
            ],
            Family::Rotation { theta } => {
                let (s, c) = theta.sin_cos();
                [
                    Mat2::from_real([[c, -s], [s, c]]).scale_real(h),
                    Mat2::from_real([[-s, -c], [c, -s]]).scale_real(h),
                    bell_z,
                    bell_x,
                ]
            }
            Family::Hyperbolic { theta } => {
                let (c, s) = (theta.cosh(), theta.sinh());
                let n = 1.0 / (2.0 * (2.0 * theta).cosh()).sqrt();
                [
                    Mat2::from_real([[c, s], [s, c]]).scale_real(n),
                    Mat2::from_real([[s, -c], [-c, s]]).scale_real(n),
                    bell_z,
                    bell_xz,
                ]
            }
            Family::Scale { lambda } => {
                let n = 1.0 / (1.0 + lambda * lambda).sqrt();
                [
                    Mat2::new(re(lambda), ZERO, ZERO, ONE).scale_real(n),
                    Mat2::new(ONE, ZERO, ZERO, re(-lambda)).scale_real(n),
                    bell_xz,
                    bell_x,
                ]
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Bell => write!(f, "bell"),
            Family::Phase { theta } => write!(f, "phase(theta={theta})"),
            Family::Rotation { theta } => write!(f, "rotation(theta={theta})"),
            Family::Hyperbolic { theta } => write!(f, "hyperbolic(theta={theta})"),
            Family::Scale { lambda } => write!(f, "scale(lambda={lambda})"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts `bell`, `phase:0.5`, `scale:2`, ... (case-insensitive name).
    fn from_str(s: &str) -> Result<Family> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => {
                let v: f64 = a.trim().parse().map_err(|_| Error::Parse {
                    line: 0,
                    message: format!("invalid family parameter {a:?}"),
                })?;
                (n.trim(), Some(v))
            }
            None => (s.trim(), None),
        };
        Family::from_name(name, arg, arg)
    }
}

/// Rejects non-finite parameters and hyperbolic angles beyond
/// [`HYPERBOLIC_THETA_LIMIT`]. Does not validate the generated matrices.
pub fn check_family_params(family: &Family) -> Result<()> {
    match *family {
        Family::Bell => {}
        Family::Phase { theta } | Family::Rotation { theta } => check_finite("theta", theta)?,
        Family::Hyperbolic { theta } => {
            check_finite("theta", theta)?;
            if theta.abs() > HYPERBOLIC_THETA_LIMIT {
                return Err(Error::ParamOutOfRange {
                    name: "theta",
                    value: theta,
                    reason: "hyperbolic family requires |theta| <= 20",
                });
            }
        }
        Family::Scale { lambda } => check_finite("lambda", lambda)?,
    }
    Ok(())
}

/// Builds and validates a built-in family.
pub fn builtin_basis(family: &Family) -> Result<EntangledBasis> {
    check_family_params(family)?;
    let matrices = family.matrices();
    if !validate_basis(&matrices).pass {
        let (name, value) = match *family {
            Family::Scale { lambda } => ("lambda", lambda),
            Family::Phase { theta } | Family::Rotation { theta } | Family::Hyperbolic { theta } => {
                ("theta", theta)
            }
            Family::Bell => ("none", f64::NAN),
        };
        return Err(Error::ParamOutOfRange {
            name,
            value,
            reason: "generated matrices are singular or not orthonormal",
        });
    }
    EntangledBasis::new(family.name(), family.params(), matrices)
}

fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            name,
            value,
            reason: "must be finite",
        })
    }
}
