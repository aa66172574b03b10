//! Fixed-size complex linear algebra for one and two qubits.
//!
//! Everything here is stack allocated and `Copy` except [`StateVec`], which
//! holds 2, 4 or 8 amplitudes. Matrices are row-major; `m.0[r][c]` is the
//! entry in row `r`, column `c`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// `|det|` at or below this value is treated as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `e^{iθ}`
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mat2(pub [[C64; 2]; 2]);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mat4(pub [[C64; 4]; 4]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO; 2]; 2]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn from_real(rows: [[f64; 2]; 2]) -> Self {
        Mat2(rows.map(|r| r.map(re)))
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Mat2::new(a, ZERO, ZERO, d)
    }

    pub fn scale(&self, s: C64) -> Self {
        Mat2(self.0.map(|r| r.map(|x| x * s)))
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Mat2(self.0.map(|r| r.map(|x| x * s)))
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    /// Elementwise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Mat2(self.0.map(|r| r.map(|x| x.conj())))
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.norm() <= SINGULAR_TOL {
            return Err(Error::SingularMatrix {
                abs_det: det.norm(),
                tolerance: SINGULAR_TOL,
            });
        }
        let m = &self.0;
        let inv = ONE / det;
        Ok(Mat2([
            [m[1][1] * inv, -m[0][1] * inv],
            [-m[1][0] * inv, m[0][0] * inv],
        ]))
    }

    /// `Tr(self† · other)`.
    pub fn frobenius_inner(&self, other: &Mat2) -> C64 {
        let mut acc = ZERO;
        for r in 0..2 {
            for col in 0..2 {
                acc += self.0[r][col].conj() * other.0[r][col];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|x| x.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M·M† − I|`
    pub fn unitarity_deviation(&self) -> f64 {
        (*self * self.adjoint()).max_abs_diff(&Mat2::IDENTITY)
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Kronecker product `self ⊗ other`, with `self` on the high index bit.
    pub fn kron(&self, other: &Mat2) -> Mat4 {
        let mut out = [[ZERO; 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (col, x) in row.iter_mut().enumerate() {
                *x = self.0[r / 2][col / 2] * other.0[r % 2][col % 2];
            }
        }
        Mat4(out)
    }

    /// Row-major flattening `(m00, m01, m10, m11)`.
    pub fn vectorize(&self) -> [C64; 4] {
        [self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]]
    }

    pub fn from_vectorized(v: [C64; 4]) -> Self {
        Mat2::new(v[0], v[1], v[2], v[3])
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|x| x.re.is_finite() && x.im.is_finite())
    }

    /// Singular value decomposition `self = W · diag(σ) · Vh` with
    /// `σ[0] ≥ σ[1] ≥ 0`.
    ///
    /// The right singular vectors come from the closed-form eigensystem of
    /// the Hermitian matrix `self† · self`.
    pub fn svd(&self) -> Svd2 {
        let h = self.adjoint() * *self;
        let a = h.0[0][0].re;
        let d = h.0[1][1].re;
        let b = h.0[0][1];
        let half = 0.5 * (a - d);
        let r = half.hypot(b.norm());
        let mean = 0.5 * (a + d);
        let lambda_hi = mean + r;
        let lambda_lo = (mean - r).max(0.0);

        // Eigenvector of the larger eigenvalue, picking the row of (H − λI)
        // that avoids cancellation.
        let v1 = if r == 0.0 {
            [ONE, ZERO]
        } else if a >= d {
            normalize2([re(half + r), b.conj()])
        } else {
            normalize2([b, re(-half + r)])
        };
        let v2 = [-v1[1].conj(), v1[0].conj()];
        let sigma = [lambda_hi.sqrt(), lambda_lo.sqrt()];

        let u1 = self.apply(v1);
        let w1 = if sigma[0] > 0.0 {
            [u1[0] / sigma[0], u1[1] / sigma[0]]
        } else {
            [ONE, ZERO]
        };
        let w2 = if sigma[1] > SINGULAR_TOL * sigma[0].max(1.0) {
            let u2 = self.apply(v2);
            [u2[0] / sigma[1], u2[1] / sigma[1]]
        } else {
            [-w1[1].conj(), w1[0].conj()]
        };

        Svd2 {
            w: Mat2([[w1[0], w2[0]], [w1[1], w2[1]]]),
            sigma,
            vh: Mat2([[v1[0].conj(), v1[1].conj()], [v2[0].conj(), v2[1].conj()]]),
        }
    }

    /// Unitary factor of the polar decomposition, `M·(M†M)^{-1/2}`.
    ///
    /// This equals `W·Vh` for any SVD `M = W·Σ·Vh` and is the unitary closest
    /// to `M` in Frobenius norm. No global-phase normalization is applied.
    pub fn polar_unitary(&self) -> Result<Self> {
        let abs_det = self.det().norm();
        if abs_det <= SINGULAR_TOL {
            return Err(Error::SingularMatrix {
                abs_det,
                tolerance: SINGULAR_TOL,
            });
        }
        // For a 2×2 positive definite H with s = √det H:
        //   √H = (H + s·I) / √(tr H + 2s)
        let h = self.adjoint() * *self;
        let s = abs_det;
        let t = (h.trace().re + 2.0 * s).sqrt();
        let shifted = h + Mat2::IDENTITY.scale_real(s);
        let sqrt_inv = shifted.inverse()?.scale_real(t);
        let u = *self * sqrt_inv;
        // One Newton step U ← (U + U^{-†})/2 brings unitarity to rounding level.
        let u_inv_adj = u.inverse()?.adjoint();
        Ok((u + u_inv_adj).scale_real(0.5))
    }
}

fn normalize2(v: [C64; 2]) -> [C64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self.0;
        for r in 0..2 {
            for col in 0..2 {
                out[r][col] += rhs.0[r][col];
            }
        }
        Mat2(out)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2(self.0.map(|r| r.map(|x| -x)))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (col, x) in row.iter_mut().enumerate() {
                *x = a[r][0] * b[0][col] + a[r][1] * b[1][col];
            }
        }
        Mat2(out)
    }
}

/// Result of [`Mat2::svd`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Svd2 {
    pub w: Mat2,
    pub sigma: [f64; 2],
    pub vh: Mat2,
}

impl Svd2 {
    pub fn reconstruct(&self) -> Mat2 {
        self.w * Mat2::diag(re(self.sigma[0]), re(self.sigma[1])) * self.vh
    }
}

impl Mat4 {
    pub const IDENTITY: Mat4 = Mat4([
        [ONE, ZERO, ZERO, ZERO],
        [ZERO, ONE, ZERO, ZERO],
        [ZERO, ZERO, ONE, ZERO],
        [ZERO, ZERO, ZERO, ONE],
    ]);

    pub fn from_rows(rows: [[C64; 4]; 4]) -> Self {
        Mat4(rows)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = [[ZERO; 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (col, x) in row.iter_mut().enumerate() {
                *x = self.0[col][r].conj();
            }
        }
        Mat4(out)
    }

    pub fn scale(&self, s: C64) -> Self {
        Mat4(self.0.map(|r| r.map(|x| x * s)))
    }

    pub fn max_abs_diff(&self, other: &Mat4) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M·M† − I|`
    pub fn unitarity_deviation(&self) -> f64 {
        (*self * self.adjoint()).max_abs_diff(&Mat4::IDENTITY)
    }

    pub fn apply(&self, v: [C64; 4]) -> [C64; 4] {
        let mut out = [ZERO; 4];
        for (r, x) in out.iter_mut().enumerate() {
            *x = (0..4).map(|col| self.0[r][col] * v[col]).sum();
        }
        out
    }
}

impl Add for Mat4 {
    type Output = Mat4;
    fn add(self, rhs: Mat4) -> Mat4 {
        let mut out = self.0;
        for r in 0..4 {
            for col in 0..4 {
                out[r][col] += rhs.0[r][col];
            }
        }
        Mat4(out)
    }
}

impl Mul for Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut out = [[ZERO; 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (col, x) in row.iter_mut().enumerate() {
                *x = (0..4).map(|k| self.0[r][k] * rhs.0[k][col]).sum();
            }
        }
        Mat4(out)
    }
}

/// Pure-state amplitudes over 1, 2 or 3 qubits, big-endian (qubit 0 is the
/// most significant index bit).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<C64>", into = "Vec<C64>")]
pub struct StateVec {
    amps: Vec<C64>,
}

impl TryFrom<Vec<C64>> for StateVec {
    type Error = Error;
    fn try_from(amps: Vec<C64>) -> Result<Self> {
        StateVec::new(amps)
    }
}

impl From<StateVec> for Vec<C64> {
    fn from(s: StateVec) -> Self {
        s.amps
    }
}

impl StateVec {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        match amps.len() {
            2 | 4 | 8 => Ok(StateVec { amps }),
            n => Err(Error::InvalidDimension(n)),
        }
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, bound: dim });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        StateVec::new(amps)
    }

    pub fn zero_state(num_qubits: usize) -> Result<Self> {
        StateVec::basis(1 << num_qubits, 0)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= 1e-12
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVec) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn kron(&self, other: &StateVec) -> Result<StateVec> {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVec::new(amps)
    }

    pub fn max_abs_diff(&self, other: &StateVec) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply_mat2(&self, m: &Mat2) -> Result<StateVec> {
        match self.amps[..] {
            [a, b] => StateVec::new(m.apply([a, b]).to_vec()),
            _ => Err(Error::InvalidDimension(self.dim())),
        }
    }

    pub fn apply_mat4(&self, m: &Mat4) -> Result<StateVec> {
        match self.amps[..] {
            [a, b, c2, d] => StateVec::new(m.apply([a, b, c2, d]).to_vec()),
            _ => Err(Error::InvalidDimension(self.dim())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn pauli_x() -> Mat2 {
        Mat2::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    fn pauli_z() -> Mat2 {
        Mat2::from_real([[1.0, 0.0], [0.0, -1.0]])
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(Mat2::IDENTITY.adjoint(), Mat2::IDENTITY);
        let m = Mat2::from_real([[0.0, 1.0], [-1.0, 0.0]]);
        assert_eq!(m.adjoint(), Mat2::from_real([[0.0, -1.0], [1.0, 0.0]]));
        let m = Mat2::diag(I, ONE);
        assert_eq!(m.adjoint(), Mat2::diag(-I, ONE));
        assert_eq!(Mat4::IDENTITY.adjoint(), Mat4::IDENTITY);
    }

    #[test]
    fn det_examples() {
        let b1 = Mat2::IDENTITY.scale_real(FRAC_1_SQRT_2);
        assert!((b1.det() - re(0.5)).norm() < 1e-15);
        assert_eq!(Mat2::from_real([[1.0, 0.0], [0.0, 0.0]]).det(), ZERO);

        let theta = FRAC_PI_4;
        let m = Mat2::diag(cis(theta), ONE).scale_real(FRAC_1_SQRT_2);
        let expected = cis(theta) * 0.5;
        assert!((m.det() - expected).norm() < 1e-15);
        // Product of the diagonal entries computed separately.
        let diag_product = m.0[0][0] * m.0[1][1];
        assert!((m.det() - diag_product).norm() < 1e-15);
    }

    #[test]
    fn kron_identity_is_identity() {
        assert_eq!(Mat2::IDENTITY.kron(&Mat2::IDENTITY), Mat4::IDENTITY);
    }

    #[test]
    fn kron_places_left_factor_on_high_bit() {
        // X ⊗ I maps |00⟩ to |10⟩.
        let m = pauli_x().kron(&Mat2::IDENTITY);
        assert_eq!(m.apply([ONE, ZERO, ZERO, ZERO]), [ZERO, ZERO, ONE, ZERO]);
    }

    #[test]
    fn inverse_of_half_z_is_twice_z() {
        let inv = pauli_z().scale_real(0.5).inverse().unwrap();
        assert!(inv.max_abs_diff(&pauli_z().scale_real(2.0)) < 1e-15);
    }

    #[test]
    fn inverse_rejects_singular() {
        let err = Mat2::from_real([[1.0, 2.0], [2.0, 4.0]])
            .inverse()
            .unwrap_err();
        assert!(matches!(err, Error::SingularMatrix { .. }));
        let tiny = Mat2::IDENTITY.scale_real(1e-7);
        assert!(tiny.inverse().is_err());
    }

    #[test]
    fn pauli_x_swaps_amplitudes() {
        let alpha = c(0.6, 0.1);
        let beta = c(0.2, -0.3);
        assert_eq!(pauli_x().apply([alpha, beta]), [beta, alpha]);
        let v = StateVec::new(vec![alpha, beta]).unwrap();
        assert_eq!(v.apply_mat2(&pauli_x()).unwrap().amps(), &[beta, alpha]);
    }

    #[test]
    fn frobenius_inner_examples() {
        let b1 = Mat2::IDENTITY.scale_real(FRAC_1_SQRT_2);
        let b2 = pauli_z().scale_real(FRAC_1_SQRT_2);
        assert!((b1.frobenius_inner(&b1) - ONE).norm() < 1e-15);
        // Tr(B1† B2) = (1·1 + 1·(−1)) / 2
        assert!(b1.frobenius_inner(&b2).norm() < 1e-15);
        let m = Mat2::from_real([[1.0, 0.0], [0.0, 0.0]]);
        assert_eq!(m.frobenius_inner(&m), ONE);
    }

    #[test]
    fn frobenius_inner_matches_trace_form() {
        let a = Mat2::new(c(0.3, 0.1), c(-0.2, 0.5), c(0.7, 0.0), c(0.1, -0.4));
        let b = Mat2::new(c(0.9, -0.1), c(0.2, 0.2), c(-0.3, 0.6), c(0.0, 1.0));
        let trace = (a.adjoint() * b).trace();
        assert!((a.frobenius_inner(&b) - trace).norm() < 1e-15);
    }

    #[test]
    fn polar_of_positive_diagonal_is_identity() {
        let lambda: f64 = 2.0;
        let m = Mat2::from_real([[lambda, 0.0], [0.0, 1.0]])
            .scale_real(1.0 / (1.0 + lambda * lambda).sqrt());
        let u = m.polar_unitary().unwrap();
        assert!(u.max_abs_diff(&Mat2::IDENTITY) < 1e-12);
    }

    #[test]
    fn polar_of_signed_diagonal_splits_signs() {
        let lambda: f64 = 2.0;
        let norm = 1.0 / (1.0 + lambda * lambda).sqrt();
        let m = Mat2::from_real([[1.0, 0.0], [0.0, -lambda]]).scale_real(norm);
        let u = m.polar_unitary().unwrap();
        assert!(u.max_abs_diff(&pauli_z()) < 1e-12);
        assert!(u.unitarity_deviation() < 1e-12);

        // Grid search over diag(e^{ia}, e^{ib}): the minimum distance is at a = 0, b = π.
        let polar_dist = (m - u).frobenius_norm();
        let steps = 360;
        let mut best = f64::INFINITY;
        for ia in 0..steps {
            for ib in 0..steps {
                let a = ia as f64 * std::f64::consts::TAU / steps as f64;
                let b = ib as f64 * std::f64::consts::TAU / steps as f64;
                let cand = Mat2::diag(cis(a), cis(b));
                best = best.min((m - cand).frobenius_norm());
            }
        }
        assert!(polar_dist <= best + 1e-12);
    }

    #[test]
    fn polar_of_scaled_unitary_is_the_unitary() {
        let theta: f64 = 0.37;
        let u0 = Mat2::new(
            re(theta.cos()),
            c(0.0, -theta.sin()),
            c(0.0, -theta.sin()),
            re(theta.cos()),
        )
        .scale(cis(0.9));
        let u = u0.scale_real(3.25).polar_unitary().unwrap();
        assert!(u.max_abs_diff(&u0) < 1e-12);
    }

    #[test]
    fn polar_rejects_singular() {
        let m = Mat2::from_real([[1.0, 0.0], [0.0, 0.0]]);
        assert!(matches!(
            m.polar_unitary(),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn svd_reconstructs_and_agrees_with_polar() {
        let m = Mat2::new(c(0.3, 0.1), c(-0.2, 0.5), c(0.7, 0.0), c(0.1, -0.4));
        let svd = m.svd();
        assert!(svd.reconstruct().max_abs_diff(&m) < 1e-13);
        assert!(svd.sigma[0] >= svd.sigma[1]);
        assert!(svd.w.unitarity_deviation() < 1e-12);
        assert!(svd.vh.unitarity_deviation() < 1e-12);
        let wv = svd.w * svd.vh;
        assert!(wv.max_abs_diff(&m.polar_unitary().unwrap()) < 1e-12);
    }

    #[test]
    fn svd_of_rank_one_matrix() {
        let m = Mat2::from_real([[1.0, 2.0], [2.0, 4.0]]);
        let svd = m.svd();
        assert!(svd.sigma[1].abs() < 1e-7);
        assert!((svd.sigma[0] - 5.0).abs() < 1e-12);
        assert!(svd.reconstruct().max_abs_diff(&m) < 1e-7);
        assert!(svd.w.unitarity_deviation() < 1e-12);
    }

    #[test]
    fn state_vec_dimensions() {
        assert!(StateVec::new(vec![ONE; 3]).is_err());
        assert_eq!(StateVec::zero_state(3).unwrap().dim(), 8);
        assert_eq!(StateVec::zero_state(3).unwrap().num_qubits(), 3);
        let v = StateVec::basis(2, 1)
            .unwrap()
            .kron(&StateVec::basis(4, 2).unwrap())
            .unwrap();
        assert_eq!(v, StateVec::basis(8, 6).unwrap());
    }

    #[test]
    fn mat2_serializes_as_nested_pairs() {
        let m = Mat2::new(c(1.0, 2.0), ZERO, ZERO, c(0.0, -1.0));
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "[[[1.0,2.0],[0.0,0.0]],[[0.0,0.0],[0.0,-1.0]]]");
        let back: Mat2 = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}
