//! Teleportation of one qubit over an arbitrary entangled basis.
//!
//! Qubit order is (target, Alice, Bob). Alice and Bob share `|V_i⟩` and the
//! target carries `|ψ⟩ = γ1|0⟩ + γ2|1⟩`. Rewriting the target/Alice pair in
//! the basis `{|V_k⟩}` gives
//!
//! ```text
//! |ψ⟩|V_i⟩ = Σ_k |V_k⟩ ⊗ (γ′_1k |0⟩ + γ′_2k |1⟩),   γ′_k = (A_k* A_i)^T γ
//! ```
//!
//! so a projective measurement with outcome `k` leaves Bob holding `γ′_k`,
//! which `((A_k* A_i)^T)^{-1}` maps back to `ψ` up to normalization.

use std::collections::BTreeMap;

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::basis::{EntangledBasis, QubitState, NORM_TOL};
use crate::error::{Error, Result};
use crate::linalg::{Mat2, StateVec, C64, SINGULAR_TOL, ZERO};

/// Outcomes below this probability are never sampled and carry no fidelity.
pub const PROBABILITY_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Bob applies the literal inverse of the branch map.
    Exact,
    /// Bob applies the polar (nearest unitary) factor of that inverse.
    Unitary,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Mode::Exact),
            "unitary" => Ok(Mode::Unitary),
            _ => Err(Error::Parse {
                line: 0,
                message: format!("unknown mode {s:?} (expected exact or unitary)"),
            }),
        }
    }
}

/// Bob's unnormalized conditional state for measurement outcome `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub k: usize,
    pub gamma_prime: [C64; 2],
    pub probability: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectionMap {
    /// `((A_k* A_i)^T)^{-1}`, generally not unitary.
    pub exact: Mat2,
    /// Polar factor of `exact`.
    pub unitary: Mat2,
    /// `‖exact‖_F / √2`; equals `c` when `exact = c·U` for a unitary `U`.
    pub scale: f64,
}

fn check_index(index: usize) -> Result<()> {
    if index < 4 {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, bound: 4 })
    }
}

/// `(A_k* A_sender)^T`, mapping `γ` to the outcome-`k` branch coefficients.
pub fn branch_map(k: usize, sender: usize, basis: &EntangledBasis) -> Result<Mat2> {
    check_index(k)?;
    check_index(sender)?;
    let m = basis.matrices();
    Ok((m[k].conj() * m[sender]).transpose())
}

pub fn decompose(psi: &QubitState, sender: usize, basis: &EntangledBasis) -> Result<[Branch; 4]> {
    check_normalized(psi)?;
    check_index(sender)?;
    let gamma = psi.amplitudes();
    let mut out = [Branch {
        k: 0,
        gamma_prime: [ZERO; 2],
        probability: 0.0,
    }; 4];
    for (k, branch) in out.iter_mut().enumerate() {
        let gp = branch_map(k, sender, basis)?.apply(gamma);
        *branch = Branch {
            k,
            gamma_prime: gp,
            probability: gp[0].norm_sqr() + gp[1].norm_sqr(),
        };
    }
    Ok(out)
}

/// `|ψ⟩ ⊗ |V_sender⟩` as 8 amplitudes.
pub fn input_state(psi: &QubitState, sender: usize, basis: &EntangledBasis) -> Result<StateVec> {
    let v = basis.state(sender)?.to_state_vec();
    psi.to_state_vec().kron(&v)
}

/// `Σ_k |V_k⟩ ⊗ (γ′_1k|0⟩ + γ′_2k|1⟩)` as 8 amplitudes.
pub fn reconstruct(branches: &[Branch; 4], basis: &EntangledBasis) -> StateVec {
    let mut amps = vec![ZERO; 8];
    for b in branches {
        let v = basis.matrices()[b.k].vectorize();
        for (pair, a) in v.iter().enumerate() {
            for (bob, g) in b.gamma_prime.iter().enumerate() {
                amps[2 * pair + bob] += a * g;
            }
        }
    }
    StateVec::new(amps).expect("dimension 8")
}

pub fn correction(k: usize, sender: usize, basis: &EntangledBasis) -> Result<CorrectionMap> {
    let map = branch_map(k, sender, basis)?;
    let abs_det = map.det().norm();
    if abs_det <= SINGULAR_TOL {
        return Err(Error::SingularCorrection { k, sender, abs_det });
    }
    let exact = map.inverse()?;
    let unitary = exact.polar_unitary()?;
    Ok(CorrectionMap {
        exact,
        unitary,
        scale: exact.frobenius_norm() / std::f64::consts::SQRT_2,
    })
}

/// `|⟨a|b⟩|²` for normalized states.
pub fn fidelity(a: &QubitState, b: &QubitState) -> Result<f64> {
    check_normalized(a)?;
    check_normalized(b)?;
    let overlap = a.gamma1.conj() * b.gamma1 + a.gamma2.conj() * b.gamma2;
    Ok(overlap.norm_sqr().min(1.0))
}

fn check_normalized(s: &QubitState) -> Result<()> {
    let norm_sqr = s.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOL || !norm_sqr.is_finite() {
        Err(Error::UnnormalizedInput { norm_sqr })
    } else {
        Ok(())
    }
}

/// Applies a correction to a branch and renormalizes; `None` if the result
/// vanishes.
pub fn recover(correction: &Mat2, branch: &Branch) -> Option<QubitState> {
    let [a, b] = correction.apply(branch.gamma_prime);
    QubitState::normalized(a, b).ok()
}

/// Deterministic outcome sampler: Xoshiro256++ seeded through SplitMix64,
/// uniform doubles from the top 53 bits, inverse-CDF selection in index order.
#[derive(Debug, Clone)]
pub struct OutcomeSampler {
    rng: Xoshiro256PlusPlus,
}

impl OutcomeSampler {
    pub fn new(seed: u64) -> Self {
        OutcomeSampler {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Draws an index with probability proportional to `probs[k]`, skipping
    /// entries below [`PROBABILITY_FLOOR`]. Returns `None` if nothing is
    /// eligible.
    pub fn sample(&mut self, probs: &[f64]) -> Option<usize> {
        let eligible = |p: f64| p >= PROBABILITY_FLOOR;
        let total: f64 = probs.iter().copied().filter(|&p| eligible(p)).sum();
        let last = probs.iter().rposition(|&p| eligible(p))?;
        let target = self.next_uniform() * total;
        let mut cumulative = 0.0;
        for (k, &p) in probs.iter().enumerate() {
            if !eligible(p) {
                continue;
            }
            cumulative += p;
            if target <= cumulative {
                return Some(k);
            }
        }
        Some(last)
    }
}

/// Full result of a teleportation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeleportRun {
    pub basis_name: String,
    pub basis_params: BTreeMap<String, f64>,
    pub sender_index: usize,
    pub input: QubitState,
    pub mode: Mode,
    pub branches: [Branch; 4],
    pub corrections: [CorrectionMap; 4],
    /// `None` for outcomes below [`PROBABILITY_FLOOR`].
    pub fidelity_exact: [Option<f64>; 4],
    pub fidelity_unitary: [Option<f64>; 4],
    /// `Σ_k p_k F_k` for the selected mode.
    pub expected_fidelity: f64,
    pub shots: u64,
    pub seed: u64,
    pub counts: [u64; 4],
    /// Shot-averaged fidelity for the selected mode; `None` when `shots == 0`.
    pub sampled_fidelity: Option<f64>,
}

impl TeleportRun {
    pub fn fidelities(&self, mode: Mode) -> &[Option<f64>; 4] {
        match mode {
            Mode::Exact => &self.fidelity_exact,
            Mode::Unitary => &self.fidelity_unitary,
        }
    }

    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }
}

pub fn run(
    psi: &QubitState,
    sender: usize,
    basis: &EntangledBasis,
    shots: u64,
    seed: u64,
    mode: Mode,
) -> Result<TeleportRun> {
    let branches = decompose(psi, sender, basis)?;
    let mut corrections = [CorrectionMap {
        exact: Mat2::IDENTITY,
        unitary: Mat2::IDENTITY,
        scale: 1.0,
    }; 4];
    for (k, c) in corrections.iter_mut().enumerate() {
        *c = correction(k, sender, basis)?;
    }

    let mut fidelity_exact = [None; 4];
    let mut fidelity_unitary = [None; 4];
    for k in 0..4 {
        if branches[k].probability < PROBABILITY_FLOOR {
            continue;
        }
        fidelity_exact[k] = recover(&corrections[k].exact, &branches[k])
            .map(|r| fidelity(psi, &r))
            .transpose()?;
        fidelity_unitary[k] = recover(&corrections[k].unitary, &branches[k])
            .map(|r| fidelity(psi, &r))
            .transpose()?;
    }

    let selected = match mode {
        Mode::Exact => &fidelity_exact,
        Mode::Unitary => &fidelity_unitary,
    };
    let expected_fidelity = branches
        .iter()
        .zip(selected)
        .map(|(b, f)| f.map_or(0.0, |f| b.probability * f))
        .sum();

    let probs = branches.map(|b| b.probability);
    let mut sampler = OutcomeSampler::new(seed);
    let mut counts = [0u64; 4];
    for _ in 0..shots {
        if let Some(k) = sampler.sample(&probs) {
            counts[k] += 1;
        }
    }
    let sampled_fidelity = (shots > 0).then(|| {
        counts
            .iter()
            .zip(selected)
            .map(|(&n, f)| n as f64 * f.unwrap_or(0.0))
            .sum::<f64>()
            / shots as f64
    });

    Ok(TeleportRun {
        basis_name: basis.name().to_string(),
        basis_params: basis.params().clone(),
        sender_index: sender,
        input: *psi,
        mode,
        branches,
        corrections,
        fidelity_exact,
        fidelity_unitary,
        expected_fidelity,
        shots,
        seed,
        counts,
        sampled_fidelity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{builtin_basis, Family};
    use crate::linalg::{c, cis, re, ONE};

    fn bell() -> EntangledBasis {
        builtin_basis(&Family::Bell).unwrap()
    }

    fn psi() -> QubitState {
        QubitState::normalized(c(0.6, 0.2), c(-0.3, 0.7)).unwrap()
    }

    fn close(a: [C64; 2], b: [C64; 2]) -> bool {
        (a[0] - b[0]).norm() < 1e-15 && (a[1] - b[1]).norm() < 1e-15
    }

    #[test]
    fn bell_branches_match_hand_products() {
        let p = psi();
        let (a, b) = (p.gamma1 * 0.5, p.gamma2 * 0.5);
        let branches = decompose(&p, 0, &bell()).unwrap();
        assert!(close(branches[0].gamma_prime, [a, b]));
        assert!(close(branches[1].gamma_prime, [a, -b]));
        assert!(close(branches[2].gamma_prime, [b, a]));
        assert!(close(branches[3].gamma_prime, [-b, a]));
        for br in &branches {
            assert!((br.probability - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn bell_branches_reconstruct_input() {
        let p = psi();
        let basis = bell();
        let branches = decompose(&p, 0, &basis).unwrap();
        let rebuilt = reconstruct(&branches, &basis);
        let input = input_state(&p, 0, &basis).unwrap();
        assert!(rebuilt.max_abs_diff(&input) < 1e-15);
    }

    #[test]
    fn phase_family_third_branch() {
        let theta = 0.61;
        let basis = builtin_basis(&Family::Phase { theta }).unwrap();
        let p = psi();
        let branches = decompose(&p, 0, &basis).unwrap();
        let expected = [-cis(theta) * p.gamma2 * 0.5, p.gamma1 * 0.5];
        assert!(close(branches[2].gamma_prime, expected));
    }

    #[test]
    fn diagonal_branch_at_reduction_point() {
        let basis = builtin_basis(&Family::Phase { theta: 0.0 }).unwrap();
        let branches = decompose(&QubitState::ZERO, 0, &basis).unwrap();
        assert!(close(branches[0].gamma_prime, [re(0.5), ZERO]));
    }

    #[test]
    fn bell_corrections_are_paulis_times_two() {
        let basis = bell();
        let expected = [
            Mat2::IDENTITY,
            Mat2::from_real([[1.0, 0.0], [0.0, -1.0]]),
            Mat2::from_real([[0.0, 1.0], [1.0, 0.0]]),
            // inverse of [[0,−1],[1,0]]
            Mat2::from_real([[0.0, 1.0], [-1.0, 0.0]]),
        ];
        for (k, e) in expected.iter().enumerate() {
            let corr = correction(k, 0, &basis).unwrap();
            assert!(corr.exact.max_abs_diff(&e.scale_real(2.0)) < 1e-14, "k={k}");
            assert!(corr.unitary.max_abs_diff(e) < 1e-14, "k={k}");
            assert!((corr.scale - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn hyperbolic_diagonal_correction() {
        let theta: f64 = 0.8;
        let basis = builtin_basis(&Family::Hyperbolic { theta }).unwrap();
        let t = (2.0 * theta).tanh();
        let product = Mat2::from_real([[1.0, t], [t, 1.0]]).scale_real(0.5);
        let corr = correction(0, 0, &basis).unwrap();
        assert!(corr.exact.max_abs_diff(&product.inverse().unwrap()) < 1e-12);
        assert!(corr.unitary.max_abs_diff(&Mat2::IDENTITY) < 1e-12);
        assert!(
            (corr.exact * branch_map(0, 0, &basis).unwrap()).max_abs_diff(&Mat2::IDENTITY) < 1e-9
        );
    }

    #[test]
    fn bell_run_is_perfect_and_uniform() {
        let r = run(&psi(), 0, &bell(), 1000, 5, Mode::Exact).unwrap();
        for k in 0..4 {
            assert!((r.branches[k].probability - 0.25).abs() < 1e-12);
            assert!((r.fidelity_exact[k].unwrap() - 1.0).abs() < 1e-12);
            assert!((r.fidelity_unitary[k].unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(r.counts.iter().sum::<u64>(), 1000);
        assert!((r.expected_fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_unitary_mode_loses_fidelity() {
        let theta: f64 = 1.0;
        let basis = builtin_basis(&Family::Hyperbolic { theta }).unwrap();
        let r = run(&QubitState::ZERO, 0, &basis, 0, 0, Mode::Unitary).unwrap();
        // Branch 0 is (1, tanh 2θ)/2 and its unitary correction is I, so the
        // recovered state is (1, t)/√(1+t²).
        let t = (2.0 * theta).tanh();
        let oracle = 1.0 / (1.0 + t * t);
        let got = r.fidelity_unitary[0].unwrap();
        assert!((got - oracle).abs() < 1e-12);
        assert!(got < 1.0 - 1e-6);
        assert!((r.fidelity_exact[0].unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_shots_still_fill_analytics() {
        let r = run(&psi(), 1, &bell(), 0, 9, Mode::Exact).unwrap();
        assert_eq!(r.counts, [0; 4]);
        assert_eq!(r.sampled_fidelity, None);
        assert!(r.fidelity_exact.iter().all(|f| f.is_some()));
    }

    #[test]
    fn branch_probabilities_sum_to_one() {
        for family in [
            Family::Phase { theta: 0.3 },
            Family::Scale { lambda: 3.0 },
            Family::Hyperbolic { theta: 1.5 },
        ] {
            let basis = builtin_basis(&family).unwrap();
            for sender in 0..4 {
                let r = run(&psi(), sender, &basis, 200, 1, Mode::Exact).unwrap();
                assert!(
                    (r.total_probability() - 1.0).abs() < 1e-12,
                    "{family} i={sender}"
                );
                assert_eq!(r.counts.iter().sum::<u64>(), 200);
            }
        }
    }

    #[test]
    fn fidelity_examples() {
        let a = psi();
        assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity(&QubitState::ZERO, &QubitState::ONE).unwrap(), 0.0);
        let plus = QubitState::normalized(ONE, ONE).unwrap();
        assert!((fidelity(&QubitState::ZERO, &plus).unwrap() - 0.5).abs() < 1e-15);
        let bad = QubitState {
            gamma1: re(2.0),
            gamma2: ZERO,
        };
        assert!(matches!(
            fidelity(&bad, &a),
            Err(Error::UnnormalizedInput { .. })
        ));
        assert!(matches!(
            decompose(&bad, 0, &bell()),
            Err(Error::UnnormalizedInput { .. })
        ));
    }

    #[test]
    fn index_bounds() {
        assert!(matches!(
            decompose(&psi(), 4, &bell()),
            Err(Error::IndexOutOfRange { index: 4, .. })
        ));
        assert!(correction(7, 0, &bell()).is_err());
    }

    #[test]
    fn sampler_is_reproducible_and_skips_floor() {
        let mut a = OutcomeSampler::new(42);
        let mut b = OutcomeSampler::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_uniform().to_bits(), b.next_uniform().to_bits());
        }
        let mut s = OutcomeSampler::new(3);
        for _ in 0..1000 {
            let k = s.sample(&[0.0, 0.5, 1e-16, 0.5]).unwrap();
            assert!(k == 1 || k == 3);
        }
        assert_eq!(s.sample(&[0.0; 4]), None);
    }

    #[test]
    fn run_json_round_trips() {
        let r = run(
            &psi(),
            2,
            &builtin_basis(&Family::Scale { lambda: 2.0 }).unwrap(),
            50,
            11,
            Mode::Unitary,
        )
        .unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: TeleportRun = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }
}
