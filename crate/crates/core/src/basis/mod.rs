//! Entangled two-qubit bases generated by four 2×2 matrices.
//!
//! A matrix `A` with entries `a0 a1 / a2 a3` defines the two-qubit state
//! `a0|00⟩ + a1|01⟩ + a2|10⟩ + a3|11⟩`. That state is a product state iff
//! `det A = 0`, and four such states are orthonormal iff the Gram matrix
//! `Tr(A_i† A_j)` is the identity. When both hold, stacking the row-major
//! vectorized matrices gives a unitary transform `T` with `|V_i⟩ = T_ij |C_j⟩`.

mod family;
mod file;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Mat4, StateVec, C64, SINGULAR_TOL, ZERO};

pub use family::{builtin_basis, check_family_params, Family, HYPERBOLIC_THETA_LIMIT};
pub use file::{load_basis_file, parse_basis_json, BasisFile};

/// Tolerance on `max |Gram − I|` for accepting a basis.
pub const GRAM_TOL: f64 = 1e-9;

/// Tolerance on `|norm² − 1|` for states treated as normalized.
pub const NORM_TOL: f64 = 1e-12;

/// A single-qubit pure state `γ1|0⟩ + γ2|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    pub gamma1: C64,
    pub gamma2: C64,
}

impl QubitState {
    pub const ZERO: QubitState = QubitState {
        gamma1: crate::linalg::ONE,
        gamma2: ZERO,
    };
    pub const ONE: QubitState = QubitState {
        gamma1: ZERO,
        gamma2: crate::linalg::ONE,
    };

    /// Builds a state, requiring `|γ1|² + |γ2|² = 1` within [`NORM_TOL`].
    pub fn new(gamma1: C64, gamma2: C64) -> Result<Self> {
        let s = QubitState { gamma1, gamma2 };
        let norm_sqr = s.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL || !norm_sqr.is_finite() {
            return Err(Error::UnnormalizedInput { norm_sqr });
        }
        Ok(s)
    }

    /// Scales the amplitudes to unit norm.
    pub fn normalized(gamma1: C64, gamma2: C64) -> Result<Self> {
        let norm_sqr = gamma1.norm_sqr() + gamma2.norm_sqr();
        if norm_sqr <= f64::MIN_POSITIVE || !norm_sqr.is_finite() {
            return Err(Error::UnnormalizedInput { norm_sqr });
        }
        let n = norm_sqr.sqrt();
        Ok(QubitState {
            gamma1: gamma1 / n,
            gamma2: gamma2 / n,
        })
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        [self.gamma1, self.gamma2]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.gamma1.norm_sqr() + self.gamma2.norm_sqr()
    }

    pub fn to_state_vec(&self) -> StateVec {
        StateVec::new(vec![self.gamma1, self.gamma2]).expect("dimension 2")
    }
}

/// Amplitudes `c1..c4` over `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitState {
    pub c: [C64; 4],
}

impl TwoQubitState {
    pub fn new(c: [C64; 4]) -> Self {
        TwoQubitState { c }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|x| x.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm_sqr = self.norm_sqr();
        if norm_sqr <= f64::MIN_POSITIVE || !norm_sqr.is_finite() {
            return Err(Error::UnnormalizedInput { norm_sqr });
        }
        let n = norm_sqr.sqrt();
        Ok(TwoQubitState::new(self.c.map(|x| x / n)))
    }

    /// The 2×2 coefficient matrix `[[c1, c2], [c3, c4]]`.
    pub fn coefficient_matrix(&self) -> Mat2 {
        Mat2::from_vectorized(self.c)
    }

    pub fn to_state_vec(&self) -> StateVec {
        StateVec::new(self.c.to_vec()).expect("dimension 4")
    }
}

/// Reads `m` row-major as the amplitudes of a two-qubit state.
pub fn state_from_matrix(m: &Mat2) -> TwoQubitState {
    TwoQubitState::new(m.vectorize())
}

/// `det [[c1, c2], [c3, c4]]`; zero exactly for product states.
pub fn entanglement_determinant(s: &TwoQubitState) -> C64 {
    s.coefficient_matrix().det()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeterminantCheck {
    pub det: C64,
    pub abs_det: f64,
    pub pass: bool,
}

/// Outcome of checking four matrices for the entangled-basis conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub determinants: [DeterminantCheck; 4],
    /// `gram[i][j] = Tr(A_i† A_j)`
    pub gram: [[C64; 4]; 4],
    pub gram_max_deviation: f64,
    /// Position of the largest Gram deviation.
    pub gram_worst_entry: (usize, usize),
    pub determinants_pass: bool,
    pub gram_pass: bool,
    pub pass: bool,
}

impl ValidationReport {
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        for (i, d) in self.determinants.iter().enumerate() {
            if !d.pass {
                parts.push(format!("|det A_{i}| = {:e}", d.abs_det));
            }
        }
        if !self.gram_pass {
            let (r, col) = self.gram_worst_entry;
            parts.push(format!(
                "Gram deviation {:e} at [{r}][{col}] (value {})",
                self.gram_max_deviation,
                fmt_c64(self.gram[r][col])
            ));
        }
        if parts.is_empty() {
            "pass".to_string()
        } else {
            parts.join("; ")
        }
    }
}

/// Formats `z` as `re`, `re+imi` or `re-imi`.
pub fn fmt_c64(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Checks `|det A_i| > 1e-12` for every matrix and `Tr(A_i† A_j) = δ_ij`
/// within [`GRAM_TOL`]. Failures are reported, never raised.
pub fn validate_basis(matrices: &[Mat2; 4]) -> ValidationReport {
    let determinants = matrices.map(|m| {
        let det = m.det();
        let abs_det = det.norm();
        DeterminantCheck {
            det,
            abs_det,
            pass: abs_det > SINGULAR_TOL && abs_det.is_finite(),
        }
    });

    let mut gram = [[ZERO; 4]; 4];
    let mut worst = 0.0;
    let mut worst_entry = (0, 0);
    for i in 0..4 {
        for j in 0..4 {
            gram[i][j] = matrices[i].frobenius_inner(&matrices[j]);
            let target = if i == j { 1.0 } else { 0.0 };
            let dev = (gram[i][j] - target).norm();
            // NaN compares false, so route it through explicitly.
            if dev > worst || dev.is_nan() {
                worst = if dev.is_nan() { f64::INFINITY } else { dev };
                worst_entry = (i, j);
            }
        }
    }
    let determinants_pass = determinants.iter().all(|d| d.pass);
    let gram_pass = worst < GRAM_TOL;
    ValidationReport {
        determinants,
        gram,
        gram_max_deviation: worst,
        gram_worst_entry: worst_entry,
        determinants_pass,
        gram_pass,
        pass: determinants_pass && gram_pass,
    }
}

/// Four matrices that passed [`validate_basis`], with a name and the real
/// parameters they were generated from.
#[derive(Debug, Clone, PartialEq)]
pub struct EntangledBasis {
    name: String,
    params: BTreeMap<String, f64>,
    matrices: [Mat2; 4],
}

impl EntangledBasis {
    pub fn new(
        name: impl Into<String>,
        params: BTreeMap<String, f64>,
        matrices: [Mat2; 4],
    ) -> Result<Self> {
        let report = validate_basis(&matrices);
        if !report.pass {
            return Err(Error::InvalidBasis(Box::new(report)));
        }
        Ok(EntangledBasis {
            name: name.into(),
            params,
            matrices,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn matrices(&self) -> &[Mat2; 4] {
        &self.matrices
    }

    pub fn matrix(&self, index: usize) -> Result<&Mat2> {
        self.matrices
            .get(index)
            .ok_or(Error::IndexOutOfRange { index, bound: 4 })
    }

    /// `|V_index⟩`
    pub fn state(&self, index: usize) -> Result<TwoQubitState> {
        self.matrix(index).map(state_from_matrix)
    }

    pub fn validation(&self) -> ValidationReport {
        validate_basis(&self.matrices)
    }

    /// True when every matrix satisfies `A†A ∝ I`, i.e. each is a scalar
    /// multiple of a unitary.
    pub fn is_scaled_unitary(&self, tol: f64) -> bool {
        self.matrices.iter().all(|m| {
            let g = m.adjoint() * *m;
            let s = 0.5 * g.trace().re;
            g.max_abs_diff(&Mat2::IDENTITY.scale_real(s)) <= tol
        })
    }
}

impl fmt::Display for EntangledBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            write!(f, "({})", ps.join(", "))?;
        }
        Ok(())
    }
}

/// The 4×4 change of basis and its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisTransform {
    pub t: Mat4,
    pub t_inv: Mat4,
}

/// Tolerance on `max |T·T† − I|` asserted by [`assemble_transform`].
pub const TRANSFORM_UNITARY_TOL: f64 = 1e-9;

/// Stacks the vectorized matrices as the rows of `T`; `T⁻¹ = T†`.
pub fn assemble_transform(basis: &EntangledBasis) -> Result<BasisTransform> {
    let t = Mat4::from_rows(basis.matrices.map(|m| m.vectorize()));
    if t.unitarity_deviation() >= TRANSFORM_UNITARY_TOL {
        return Err(Error::InvalidBasis(Box::new(basis.validation())));
    }
    Ok(BasisTransform {
        t,
        t_inv: t.adjoint(),
    })
}

/// Coefficients of `|C_j⟩` over `|V_0⟩..|V_3⟩`: `(a_{0j}*, a_{1j}*, a_{2j}*, a_{3j}*)`.
pub fn expand_computational(j: usize, basis: &EntangledBasis) -> Result<[C64; 4]> {
    if j >= 4 {
        return Err(Error::IndexOutOfRange { index: j, bound: 4 });
    }
    Ok(basis.matrices.map(|m| m.vectorize()[j].conj()))
}

/// `Σ_k coeffs[k] · |V_k⟩`
pub fn combine_basis_states(coeffs: &[C64; 4], basis: &EntangledBasis) -> [C64; 4] {
    let mut out = [ZERO; 4];
    for (coef, m) in coeffs.iter().zip(basis.matrices.iter()) {
        for (o, a) in out.iter_mut().zip(m.vectorize()) {
            *o += coef * a;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cis, re, ONE};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bell() -> EntangledBasis {
        builtin_basis(&Family::Bell).unwrap()
    }

    #[test]
    fn bell_states_from_matrices() {
        let b = bell();
        let h = FRAC_1_SQRT_2;
        let s1 = state_from_matrix(&b.matrices()[0]);
        assert_eq!(s1.c, [re(h), ZERO, ZERO, re(h)]);
        let s4 = state_from_matrix(&b.matrices()[3]);
        assert_eq!(s4.c, [ZERO, re(h), re(-h), ZERO]);
        assert!(s1.is_normalized());
    }

    #[test]
    fn identity_matrix_gives_unnormalized_state() {
        let s = state_from_matrix(&Mat2::IDENTITY);
        assert_eq!(s.c, [ONE, ZERO, ZERO, ONE]);
        assert!(!s.is_normalized());
    }

    #[test]
    fn determinant_examples() {
        let h = FRAC_1_SQRT_2;
        let bell00 = TwoQubitState::new([re(h), ZERO, ZERO, re(h)]);
        assert!((entanglement_determinant(&bell00) - re(0.5)).norm() < 1e-15);
        let ket01 = TwoQubitState::new([ZERO, ONE, ZERO, ZERO]);
        assert_eq!(entanglement_determinant(&ket01), ZERO);
        let plus_plus = TwoQubitState::new([re(0.5); 4]);
        assert_eq!(entanglement_determinant(&plus_plus), ZERO);
    }

    #[test]
    fn bell_validates_with_identity_gram() {
        let report = validate_basis(bell().matrices());
        assert!(report.pass);
        assert!(report.gram_max_deviation < 1e-15);
    }

    #[test]
    fn repeated_matrix_fails_gram() {
        let m = *bell().matrices();
        let report = validate_basis(&[m[0], m[1], m[2], m[2]]);
        assert!(!report.pass);
        assert!(report.determinants_pass);
        assert!(!report.gram_pass);
        assert!((report.gram[2][3] - ONE).norm() < 1e-15);
        assert!((report.gram_max_deviation - 1.0).abs() < 1e-15);
        let err =
            EntangledBasis::new("dup", BTreeMap::new(), [m[0], m[1], m[2], m[2]]).unwrap_err();
        assert!(matches!(err, Error::InvalidBasis(_)));
    }

    #[test]
    fn singular_matrix_fails_determinant() {
        // An orthonormal product basis: computational basis states.
        let e = |r: usize, col: usize| {
            let mut m = Mat2::ZERO;
            m.0[r][col] = ONE;
            m
        };
        let report = validate_basis(&[e(0, 0), e(0, 1), e(1, 0), e(1, 1)]);
        assert!(report.gram_pass);
        assert!(!report.determinants_pass);
        assert!(!report.pass);
        assert!(report.summary().contains("det A_0"));
    }

    #[test]
    fn nan_entries_fail_validation() {
        let mut m = *bell().matrices();
        m[1].0[0][0] = c(f64::NAN, 0.0);
        assert!(!validate_basis(&m).pass);
    }

    #[test]
    fn bell_transform_rows() {
        let t = assemble_transform(&bell()).unwrap();
        let h = FRAC_1_SQRT_2;
        let rows = [
            [h, 0.0, 0.0, h],
            [h, 0.0, 0.0, -h],
            [0.0, h, h, 0.0],
            [0.0, h, -h, 0.0],
        ];
        for (r, row) in rows.iter().enumerate() {
            for (col, x) in row.iter().enumerate() {
                assert_eq!(t.t.0[r][col], re(*x));
            }
        }
        assert!((t.t * t.t_inv).max_abs_diff(&Mat4::IDENTITY) < 1e-15);
    }

    #[test]
    fn phase_transform_first_row() {
        let theta = 0.83;
        let b = builtin_basis(&Family::Phase { theta }).unwrap();
        let t = assemble_transform(&b).unwrap();
        let h = FRAC_1_SQRT_2;
        let expected = [cis(theta) * h, ZERO, ZERO, re(h)];
        for (x, e) in t.t.0[0].iter().zip(expected) {
            assert!((x - e).norm() < 1e-15);
        }
    }

    #[test]
    fn expand_computational_examples() {
        let h = FRAC_1_SQRT_2;
        let coeffs = expand_computational(0, &bell()).unwrap();
        assert_eq!(coeffs, [re(h), re(h), ZERO, ZERO]);
        // Σ_k coeff_k |V_k⟩ = |00⟩
        let rebuilt = combine_basis_states(&coeffs, &bell());
        let target = [ONE, ZERO, ZERO, ZERO];
        for (x, t) in rebuilt.iter().zip(target) {
            assert!((x - t).norm() < 1e-15);
        }

        let theta = 0.4;
        let b = builtin_basis(&Family::Phase { theta }).unwrap();
        let coeffs = expand_computational(0, &b).unwrap();
        let expected = [cis(-theta) * h, re(h), ZERO, ZERO];
        for (x, e) in coeffs.iter().zip(expected) {
            assert!((x - e).norm() < 1e-15);
        }

        let lambda: f64 = 3.0;
        let n = (1.0 + lambda * lambda).sqrt();
        let b = builtin_basis(&Family::Scale { lambda }).unwrap();
        let coeffs = expand_computational(3, &b).unwrap();
        let expected = [re(1.0 / n), re(-lambda / n), ZERO, ZERO];
        for (x, e) in coeffs.iter().zip(expected) {
            assert!((x - e).norm() < 1e-15);
        }

        assert!(matches!(
            expand_computational(4, &bell()),
            Err(Error::IndexOutOfRange { index: 4, .. })
        ));
    }

    #[test]
    fn scaled_unitary_detection() {
        assert!(bell().is_scaled_unitary(1e-12));
        assert!(builtin_basis(&Family::Scale { lambda: 1.0 })
            .unwrap()
            .is_scaled_unitary(1e-12));
        assert!(!builtin_basis(&Family::Scale { lambda: 2.0 })
            .unwrap()
            .is_scaled_unitary(1e-12));
        assert!(!builtin_basis(&Family::Hyperbolic { theta: 1.0 })
            .unwrap()
            .is_scaled_unitary(1e-12));
        assert!(builtin_basis(&Family::Hyperbolic { theta: 0.0 })
            .unwrap()
            .is_scaled_unitary(1e-12));
    }

    #[test]
    fn qubit_state_normalization() {
        assert!(QubitState::new(re(1.0), re(1.0)).is_err());
        let s = QubitState::normalized(re(3.0), c(0.0, 4.0)).unwrap();
        assert!((s.gamma1 - re(0.6)).norm() < 1e-15);
        assert!((s.gamma2 - c(0.0, 0.8)).norm() < 1e-15);
        assert!(QubitState::normalized(ZERO, ZERO).is_err());
    }
}
