//! Diagonal representations of the Dirichlet-to-Neumann map `A_μ`, the
//! Neumann-to-Neumann map `B_μ` and their shallow-water limits `A₀ = −d²/dx²`
//! (Neumann conditions) and `B₀ = −δ₀`.

use std::f64::consts::{FRAC_2_PI, PI, SQRT_2};

use rayon::prelude::*;

use crate::basis::{basis_at_origin, norm, ModalVector, SobolevScale, SpectralParams};
use crate::error::{Error, Result};
use crate::kernels::{h_tail_bound, one_minus_tanhc, reduced_l_sum};

/// Absolute accuracy demanded of each forcing coefficient by [`ntn_forcing`].
pub const DEFAULT_FORCING_TOLERANCE: f64 = 1e-4;

/// `λ_k = √μ·k·tanh(√μ·k)`, the eigenvalue of `A_μ` on `φ_k`.
pub fn dtn_eigenvalue(params: &SpectralParams, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let x = params.sqrt_mu() * k as f64;
    x * x.tanh()
}

/// `λ_k/μ = k²·tanh(√μk)/(√μk)`, the eigenvalue of `A_μ/μ`.
pub(crate) fn scaled_dtn_eigenvalue(mu: f64, k: usize) -> f64 {
    let kk = (k * k) as f64;
    kk * (1.0 - one_minus_tanhc(mu.sqrt() * k as f64))
}

/// Eigenvalues of `A_μ` for `k = 0..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct DtNSpectrum {
    params: SpectralParams,
    lambda: Vec<f64>,
}

impl DtNSpectrum {
    pub fn new(params: &SpectralParams) -> Self {
        DtNSpectrum {
            params: *params,
            lambda: (0..=params.k_modes()).map(|k| dtn_eigenvalue(params, k)).collect(),
        }
    }

    pub fn params(&self) -> &SpectralParams {
        &self.params
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }
}

/// `A_μ η = Σ λ_k η_k φ_k`.
pub fn apply_dtn(spec: &DtNSpectrum, v: &ModalVector) -> Result<ModalVector> {
    if v.k_modes() != spec.params.k_modes() {
        return Err(Error::Shape {
            expected: spec.params.k_modes(),
            found: v.k_modes(),
        });
    }
    Ok(v.map_modes(|k, c| spec.lambda[k] * c))
}

/// Coefficients `f_k = ⟨(1/μ) B_μ 1, φ_k⟩`, the modal forcing of the
/// water-wave system per unit wave-maker acceleration.
#[derive(Debug, Clone, PartialEq)]
pub struct NtNProjection {
    params: SpectralParams,
    forcing: Vec<f64>,
    tail_bound: f64,
}

impl NtNProjection {
    pub fn params(&self) -> &SpectralParams {
        &self.params
    }

    pub fn forcing(&self) -> &[f64] {
        &self.forcing
    }

    /// Certified bound on `|f_k − f_k^{(L)}|` for every `k ≥ 1` (mode 0 is exact).
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn to_modal(&self) -> ModalVector {
        ModalVector::new(self.forcing.clone()).expect("forcing coefficients are finite")
    }
}

/// Bound on the truncation error of each `f_k`, `k ≥ 1`, when the `l`-series
/// stops at `l_modes`.
pub fn forcing_tail_bound(mu: f64, l_modes: usize) -> f64 {
    2.0 * SQRT_2 / (mu * PI.sqrt()) * h_tail_bound(mu, l_modes)
}

/// Smallest `l_modes` whose [`forcing_tail_bound`] meets `tolerance`.
pub fn required_l_modes(tolerance: f64) -> usize {
    // 8√2 / (π^{5/2} (2L−1)) ≤ tol
    let c = 8.0 * SQRT_2 / PI.powf(2.5);
    (((c / tolerance) + 1.0) / 2.0).ceil().max(1.0) as usize
}

/// [`ntn_forcing_with_tolerance`] at [`DEFAULT_FORCING_TOLERANCE`].
pub fn ntn_forcing(params: &SpectralParams) -> Result<NtNProjection> {
    ntn_forcing_with_tolerance(params, DEFAULT_FORCING_TOLERANCE)
}

/// Forcing coefficients of the water-wave system.
///
/// For `k ≥ 1`, `f_k = −2√2/(μ√π) Σ_{l≤L} H_μ(k,l)`. Mode 0 integrates the
/// series termwise in closed form: with `Σ 1/(2l−1)² = π²/8` it equals
/// `−1/√π` for every `μ`, the same value as the limit operator.
pub fn ntn_forcing_with_tolerance(params: &SpectralParams, tolerance: f64) -> Result<NtNProjection> {
    let mu = params.mu();
    let l_modes = params.l_modes();
    let tail = forcing_tail_bound(mu, l_modes);
    if tail.is_nan() || tail > tolerance {
        return Err(Error::Precision {
            tail,
            tolerance,
            required_l_modes: required_l_modes(tolerance),
        });
    }
    let scale = -8.0 * SQRT_2 / PI.sqrt();
    let mut forcing: Vec<f64> = (0..=params.k_modes())
        .into_par_iter()
        .map(|k| {
            if k == 0 {
                0.0
            } else {
                scale * reduced_l_sum(mu, k, l_modes)
            }
        })
        .collect();
    forcing[0] = -1.0 / PI.sqrt();
    Ok(NtNProjection {
        params: *params,
        forcing,
        tail_bound: tail,
    })
}

/// Eigenvalues of `A₀` and coefficients of `B₀·1 = −δ₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitOperators {
    a0: Vec<f64>,
    b0: Vec<f64>,
}

impl LimitOperators {
    pub fn k_modes(&self) -> usize {
        self.a0.len() - 1
    }

    /// `k²`.
    pub fn a0(&self) -> &[f64] {
        &self.a0
    }

    /// `−φ_k(0)`.
    pub fn b0(&self) -> &[f64] {
        &self.b0
    }

    pub fn forcing_modal(&self) -> ModalVector {
        ModalVector::new(self.b0.clone()).expect("finite")
    }
}

pub fn limit_forcing(k_modes: usize) -> LimitOperators {
    LimitOperators {
        a0: (0..=k_modes).map(|k| (k * k) as f64).collect(),
        b0: (0..=k_modes).map(|k| -basis_at_origin(k)).collect(),
    }
}

/// A nonnegative diagonal operator, identified by its eigenvalues `σ_k`.
pub trait ShiftedSpectrum {
    fn k_modes(&self) -> usize;
    fn sigma(&self, k: usize) -> f64;
}

impl ShiftedSpectrum for DtNSpectrum {
    fn k_modes(&self) -> usize {
        self.params.k_modes()
    }

    /// Eigenvalue of `A_μ/μ`.
    fn sigma(&self, k: usize) -> f64 {
        scaled_dtn_eigenvalue(self.params.mu(), k)
    }
}

impl ShiftedSpectrum for LimitOperators {
    fn k_modes(&self) -> usize {
        LimitOperators::k_modes(self)
    }

    fn sigma(&self, k: usize) -> f64 {
        self.a0[k]
    }
}

fn check_k<S: ShiftedSpectrum + ?Sized>(op: &S, v: &ModalVector) -> Result<()> {
    if v.k_modes() != op.k_modes() {
        return Err(Error::Shape {
            expected: op.k_modes(),
            found: v.k_modes(),
        });
    }
    Ok(())
}

/// `R(−1 : S) v = (I + S)^{-1} v`.
pub fn resolvent_shifted<S: ShiftedSpectrum + ?Sized>(op: &S, v: &ModalVector) -> Result<ModalVector> {
    check_k(op, v)?;
    Ok(v.map_modes(|k, c| c / (1.0 + op.sigma(k))))
}

/// `S^{1/2} v`.
pub fn apply_sqrt<S: ShiftedSpectrum + ?Sized>(op: &S, v: &ModalVector) -> Result<ModalVector> {
    check_k(op, v)?;
    Ok(v.map_modes(|k, c| op.sigma(k).sqrt() * c))
}

/// Distance `‖(1/μ) B_μ 1 − B₀ 1‖` in the dual of `W^{1,2}[0, π]`, realized on
/// modes `0..=K` with weights `(1+k)^{-2}`.
///
/// The truncation has to resolve the boundary layer of `B_μ`: modes with
/// `√μ·k ≫ 1` carry most of the distance, so `K` should reach about `10/√μ`.
pub fn bmu_dual_norm_gap(params: &SpectralParams) -> Result<f64> {
    let f = ntn_forcing(params)?.to_modal();
    let b0 = limit_forcing(params.k_modes()).forcing_modal();
    Ok(norm(&(&f - &b0), SobolevScale::H1_DUAL))
}

/// `√(2/π)`, the magnitude of the limit forcing on every mode `k ≥ 1`.
pub fn limit_forcing_magnitude() -> f64 {
    FRAC_2_PI.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn p(mu: f64, k: usize) -> SpectralParams {
        SpectralParams::new(mu, k, 10_000).unwrap()
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(dtn_eigenvalue(&p(0.37, 4), 0), 0.0);
        assert_relative_eq!(dtn_eigenvalue(&p(1.0, 4), 1), 1f64.tanh(), max_relative = 1e-15);
        assert_relative_eq!(
            dtn_eigenvalue(&p(1.0, 4), 1),
            0.761_594_155_955_764_9,
            max_relative = 1e-14
        );
        let small = p(1e-6, 4);
        let ratio = dtn_eigenvalue(&small, 3) / 1e-6;
        // 9(1 − 9μ/3) to first order
        assert_relative_eq!(ratio, 9.0 * (1.0 - 3e-6), max_relative = 1e-10);
        assert!(ratio < 9.0);
    }

    #[test]
    fn spectrum_invariants() {
        for &mu in &[1.0, 1e-3, 1e-6] {
            let s = DtNSpectrum::new(&p(mu, 500));
            let l = s.lambda();
            assert_eq!(l[0], 0.0);
            for k in 1..l.len() {
                assert!(l[k] > 0.0);
                assert!(l[k] > l[k - 1]);
                assert!(l[k] / mu <= (k * k) as f64 * (1.0 + 1e-15));
            }
        }
    }

    #[test]
    fn apply_dtn_examples() {
        let s = DtNSpectrum::new(&p(0.25, 6));
        assert!(apply_dtn(&s, &ModalVector::zeros(6)).unwrap().iter().all(|&c| c == 0.0));
        let constant = ModalVector::unit(6, 0).unwrap();
        let out = apply_dtn(&s, &(&constant * PI.sqrt())).unwrap();
        assert!(out.iter().all(|&c| c == 0.0));
        let e2 = apply_dtn(&s, &ModalVector::unit(6, 2).unwrap()).unwrap();
        assert_relative_eq!(e2[2], 1f64.tanh(), max_relative = 1e-15);
        assert!(matches!(
            apply_dtn(&s, &ModalVector::zeros(5)),
            Err(Error::Shape { expected: 6, found: 5 })
        ));
    }

    #[test]
    fn forcing_mode_zero_is_closed_form() {
        for &mu in &[1.0, 1e-2, 1e-6] {
            let f = ntn_forcing(&p(mu, 4)).unwrap();
            assert_eq!(f.forcing()[0], -1.0 / PI.sqrt());
        }
    }

    #[test]
    fn forcing_mode_zero_termwise_oracle() {
        // ⟨c_l cosh(a_l(x−π)), φ_0⟩ = −8/((2l−1)²π²√π); sum 10⁶ terms.
        let s: f64 = (1..=1_000_000u64)
            .rev()
            .map(|l| {
                let o = (2 * l - 1) as f64;
                -8.0 / (o * o * PI * PI * PI.sqrt())
            })
            .sum();
        assert_abs_diff_eq!(s, -1.0 / PI.sqrt(), epsilon = 1e-6);
    }

    #[test]
    fn forcing_small_mu_approaches_limit() {
        let f = ntn_forcing(&p(1e-6, 4)).unwrap();
        assert_abs_diff_eq!(f.forcing()[1], -FRAC_2_PI.sqrt(), epsilon = 1e-3);
    }

    #[test]
    fn forcing_matches_closed_form_within_tail_bound() {
        // Σ_l H_μ(k,l) = √μ tanh(√μk)/(2k)  ⇒  f_k = −√(2/π) tanh(√μk)/(√μk).
        for &mu in &[1.0, 1e-1, 1e-3] {
            let f = ntn_forcing(&p(mu, 64)).unwrap();
            for k in 1..=64 {
                let x = mu.sqrt() * k as f64;
                let exact = -FRAC_2_PI.sqrt() * x.tanh() / x;
                let got = f.forcing()[k];
                assert!(got >= exact - 1e-15 && got - exact <= f.tail_bound(), "mu={mu} k={k}");
            }
        }
    }

    #[test]
    fn forcing_rejects_insufficient_l_modes() {
        let params = SpectralParams::new(0.1, 4, 10).unwrap();
        match ntn_forcing(&params) {
            Err(Error::Precision { required_l_modes, .. }) => {
                assert!(forcing_tail_bound(0.1, required_l_modes) <= DEFAULT_FORCING_TOLERANCE);
                assert!(forcing_tail_bound(0.1, required_l_modes - 1) > DEFAULT_FORCING_TOLERANCE);
            }
            other => panic!("expected precision error, got {other:?}"),
        }
    }

    #[test]
    fn zero_input_gives_zero_contribution() {
        let f = ntn_forcing(&p(0.01, 8)).unwrap().to_modal();
        assert!((&f * 0.0).iter().all(|&c| c == 0.0));
    }

    #[test]
    fn limit_forcing_examples() {
        let l = limit_forcing(6);
        assert_abs_diff_eq!(l.b0()[0], -1.0 / PI.sqrt(), epsilon = 1e-16);
        assert_abs_diff_eq!(l.b0()[5], -FRAC_2_PI.sqrt(), epsilon = 1e-16);
        assert_eq!(l.a0()[4], 16.0);
    }

    #[test]
    fn resolvent_examples() {
        let l = limit_forcing(4);
        assert!(resolvent_shifted(&l, &ModalVector::zeros(4))
            .unwrap()
            .iter()
            .all(|&c| c == 0.0));
        let e0 = ModalVector::unit(4, 0).unwrap();
        assert_eq!(resolvent_shifted(&l, &e0).unwrap(), e0);
        let r = resolvent_shifted(&l, &ModalVector::unit(4, 2).unwrap()).unwrap();
        assert_abs_diff_eq!(r[2], 0.2, epsilon = 1e-16);
        let water = DtNSpectrum::new(&p(0.5, 4));
        assert!(resolvent_shifted(&water, &ModalVector::zeros(3)).is_err());
    }

    #[test]
    fn gap_is_nonnegative_and_decreasing() {
        let vals: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&mu| bmu_dual_norm_gap(&SpectralParams::new(mu, 2000, 10_000).unwrap()).unwrap())
            .collect();
        assert!(vals.iter().all(|&g| g >= 0.0));
        assert!(vals[0] > vals[1] && vals[1] > vals[2], "{vals:?}");
    }

    proptest! {
        #[test]
        fn apply_dtn_is_linear(
            a in -5.0f64..5.0, b in -5.0f64..5.0,
            v in prop::collection::vec(-3.0f64..3.0, 17),
            w in prop::collection::vec(-3.0f64..3.0, 17),
            mu in 1e-6f64..1.0,
        ) {
            let s = DtNSpectrum::new(&p(mu, 16));
            let v = ModalVector::new(v).unwrap();
            let w = ModalVector::new(w).unwrap();
            let lhs = apply_dtn(&s, &v.lin_comb(a, &w, b).unwrap()).unwrap();
            let rhs = apply_dtn(&s, &v).unwrap().lin_comb(a, &apply_dtn(&s, &w).unwrap(), b).unwrap();
            for (x, y) in lhs.iter().zip(rhs.iter()) {
                prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
            }
        }
    }
}
