//! Cosine eigenbasis of the Neumann Laplacian on `[0, π]`, modal coefficient
//! vectors and the weighted Sobolev-scale norms used to measure convergence.
//!
//! A function on `[0, π]` is represented by its coefficients against
//!
//! ```text
//! φ_0(x) = 1/√π,    φ_k(x) = √(2/π) cos(kx)   (k ≥ 1),
//! ```
//!
//! which form an orthonormal basis of `L²[0, π]`. The lateral family
//! `ψ_k(y) = √2 cos((2k−1)(π/2)(y+1))`, orthonormal in `L²[−1, 0]`, lives here
//! too because the wave-maker profile is expanded in it.

use std::f64::consts::{FRAC_2_PI, PI};
use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub const DEFAULT_K_MODES: usize = 256;
pub const DEFAULT_L_MODES: usize = 10_000;

/// Shallowness parameter together with the truncations that fix every series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    mu: f64,
    k_modes: usize,
    l_modes: usize,
}

impl SpectralParams {
    pub fn new(mu: f64, k_modes: usize, l_modes: usize) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0 && mu <= 1.0) {
            return Err(Error::parameter("mu", "(0, 1]", mu));
        }
        if k_modes < 1 {
            return Err(Error::parameter("k_modes", "[1, ∞)", k_modes));
        }
        if l_modes < 1 {
            return Err(Error::parameter("l_modes", "[1, ∞)", l_modes));
        }
        Ok(SpectralParams { mu, k_modes, l_modes })
    }

    /// `K = 256`, `L = 10⁴`.
    pub fn with_defaults(mu: f64) -> Result<Self> {
        Self::new(mu, DEFAULT_K_MODES, DEFAULT_L_MODES)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sqrt_mu(&self) -> f64 {
        self.mu.sqrt()
    }

    pub fn k_modes(&self) -> usize {
        self.k_modes
    }

    pub fn l_modes(&self) -> usize {
        self.l_modes
    }
}

/// Exponent `α` of the scale of spaces. Mode `k ≥ 1` is weighted by
/// `(1+k)^{2α}`, mode 0 always by 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevScale(pub f64);

impl SobolevScale {
    /// `L²[0, π]`.
    pub const L2: SobolevScale = SobolevScale(0.0);
    /// Representative of `W^{1/2,2}[0, π]`, the elevation norm of the limit theorem.
    pub const HALF: SobolevScale = SobolevScale(0.5);
    /// Dual of `W^{1/2,2}`.
    pub const HALF_DUAL: SobolevScale = SobolevScale(-0.5);
    /// Representative of `W^{1,2}[0, π]`: weight `(1+k)²`, equivalent to `1+k²`.
    pub const H1: SobolevScale = SobolevScale(1.0);
    /// Dual of `W^{1,2}[0, π]` with pivot `L²`; the space `−δ₀` lives in.
    pub const H1_DUAL: SobolevScale = SobolevScale(-1.0);

    pub fn alpha(&self) -> f64 {
        self.0
    }

    /// Weight multiplying `|v_k|²`.
    pub fn weight(&self, k: usize) -> f64 {
        if k == 0 {
            1.0
        } else {
            (1.0 + k as f64).powf(2.0 * self.0)
        }
    }
}

/// Coefficients `(η_0, …, η_K)` against `φ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalVector {
    coeffs: Vec<f64>,
}

impl ModalVector {
    /// Wraps `K+1` finite coefficients; `K ≥ 0`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Input("a modal vector needs at least one coefficient".into()));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::Input(format!("coefficient {i} is not finite")));
        }
        Ok(ModalVector { coeffs })
    }

    pub fn zeros(k_modes: usize) -> Self {
        ModalVector {
            coeffs: vec![0.0; k_modes + 1],
        }
    }

    /// Unit vector `e_mode`.
    pub fn unit(k_modes: usize, mode: usize) -> Result<Self> {
        if mode > k_modes {
            return Err(Error::Input(format!("mode {mode} exceeds truncation K = {k_modes}")));
        }
        let mut v = Self::zeros(k_modes);
        v.coeffs[mode] = 1.0;
        Ok(v)
    }

    /// `Σ_{1≤k≤min(8,K)} e_k / k²`.
    pub fn smooth8(k_modes: usize) -> Self {
        Self::from_fn(k_modes, |k| {
            if (1..=8).contains(&k) {
                1.0 / (k * k) as f64
            } else {
                0.0
            }
        })
    }

    pub fn from_fn(k_modes: usize, f: impl Fn(usize) -> f64) -> Self {
        ModalVector {
            coeffs: (0..=k_modes).map(f).collect(),
        }
    }

    /// Truncation index `K` (number of nonzero-frequency modes).
    pub fn k_modes(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.coeffs.iter()
    }

    pub fn check_same_k(&self, other: &ModalVector) -> Result<()> {
        if self.k_modes() != other.k_modes() {
            return Err(Error::Shape {
                expected: self.k_modes(),
                found: other.k_modes(),
            });
        }
        Ok(())
    }

    /// Coefficient-wise map `v_k ↦ f(k, v_k)`.
    pub fn map_modes(&self, f: impl Fn(usize, f64) -> f64) -> ModalVector {
        ModalVector {
            coeffs: self.coeffs.iter().enumerate().map(|(k, &c)| f(k, c)).collect(),
        }
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: f64, other: &ModalVector, b: f64) -> Result<ModalVector> {
        self.check_same_k(other)?;
        Ok(ModalVector {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    pub fn norm(&self, scale: SobolevScale) -> f64 {
        norm(self, scale)
    }

    pub fn max_abs_diff(&self, other: &ModalVector) -> Result<f64> {
        self.check_same_k(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max))
    }
}

impl Index<usize> for ModalVector {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.coeffs[k]
    }
}

// Arithmetic operators panic on truncation mismatch; use `lin_comb` for a
// fallible version.
impl Add for &ModalVector {
    type Output = ModalVector;

    fn add(self, rhs: &ModalVector) -> ModalVector {
        self.lin_comb(1.0, rhs, 1.0)
            .expect("truncation mismatch in ModalVector + ModalVector")
    }
}

impl Sub for &ModalVector {
    type Output = ModalVector;

    fn sub(self, rhs: &ModalVector) -> ModalVector {
        self.lin_comb(1.0, rhs, -1.0)
            .expect("truncation mismatch in ModalVector - ModalVector")
    }
}

impl Mul<f64> for &ModalVector {
    type Output = ModalVector;

    fn mul(self, rhs: f64) -> ModalVector {
        self.map_modes(|_, c| c * rhs)
    }
}

impl Neg for &ModalVector {
    type Output = ModalVector;

    fn neg(self) -> ModalVector {
        self * -1.0
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(0.0..=PI).contains(&x) {
        return Err(Error::Domain {
            what: "x",
            value: x,
            range: "[0, π]",
        });
    }
    Ok(())
}

#[inline]
pub(crate) fn basis_unchecked(k: usize, x: f64) -> f64 {
    if k == 0 {
        1.0 / PI.sqrt()
    } else {
        FRAC_2_PI.sqrt() * (k as f64 * x).cos()
    }
}

/// `φ_k(x)`.
pub fn eval_basis(k: usize, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(basis_unchecked(k, x))
}

/// `φ_k(0)`; the wave maker couples to every mode through this value.
pub fn basis_at_origin(k: usize) -> f64 {
    basis_unchecked(k, 0.0)
}

/// `Σ_k v_k φ_k(x)`.
pub fn eval_function(v: &ModalVector, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(v.iter().enumerate().map(|(k, c)| c * basis_unchecked(k, x)).sum())
}

/// `sqrt(|v_0|² + Σ_{k≥1} (1+k)^{2α} |v_k|²)`.
pub fn norm(v: &ModalVector, scale: SobolevScale) -> f64 {
    v.iter()
        .enumerate()
        .map(|(k, c)| scale.weight(k) * c * c)
        .sum::<f64>()
        .sqrt()
}

/// Composite Simpson rule on uniformly spaced samples (odd count, ≥ 3).
pub(crate) fn simpson(samples: &[f64], h: f64) -> f64 {
    debug_assert!(samples.len() >= 3 && samples.len() % 2 == 1);
    let n = samples.len() - 1;
    let mut acc = samples[0] + samples[n];
    for (i, s) in samples.iter().enumerate().take(n).skip(1) {
        acc += if i % 2 == 1 { 4.0 * s } else { 2.0 * s };
    }
    acc * h / 3.0
}

/// Coefficients `⟨f, φ_k⟩`, `k = 0..=K`, by composite Simpson on `4K+1`
/// uniform points.
pub fn project(f: impl Fn(f64) -> f64, params: &SpectralParams) -> Result<ModalVector> {
    let k_modes = params.k_modes();
    project_with_panels(f, k_modes, 4 * k_modes)
}

/// As [`project`], with an explicit (even) number of Simpson panels.
pub fn project_with_panels(f: impl Fn(f64) -> f64, k_modes: usize, panels: usize) -> Result<ModalVector> {
    if panels < 2 || panels % 2 == 1 {
        return Err(Error::parameter("panels", "even integers ≥ 2", panels));
    }
    let h = PI / panels as f64;
    // i·h can round past π on the last node
    let node = |i: usize| (i as f64 * h).min(PI);
    let samples: Vec<f64> = (0..=panels).map(|i| f(node(i))).collect();
    if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
        return Err(Error::Input(format!("f(x) is not finite at x = {}", node(i))));
    }
    let mut weighted = vec![0.0; panels + 1];
    let coeffs = (0..=k_modes)
        .map(|k| {
            for (i, (w, s)) in weighted.iter_mut().zip(&samples).enumerate() {
                *w = s * basis_unchecked(k, node(i));
            }
            simpson(&weighted, h)
        })
        .collect();
    ModalVector::new(coeffs)
}

/// `ψ_k(y) = √2 cos((2k−1)(π/2)(y+1))` for `k ≥ 1`, `y ∈ [−1, 0]`.
pub fn eval_lateral_basis(k: usize, y: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Input("lateral modes are indexed from 1".into()));
    }
    if !(-1.0..=0.0).contains(&y) {
        return Err(Error::Domain {
            what: "y",
            value: y,
            range: "[−1, 0]",
        });
    }
    Ok(lateral_unchecked(k, y))
}

#[inline]
pub(crate) fn lateral_unchecked(k: usize, y: f64) -> f64 {
    std::f64::consts::SQRT_2 * ((2 * k - 1) as f64 * 0.5 * PI * (y + 1.0)).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn basis_values() {
        assert_abs_diff_eq!(eval_basis(0, 1.3).unwrap(), 0.564_189_583_547_756_3, epsilon = 1e-15);
        assert_abs_diff_eq!(eval_basis(1, 0.0).unwrap(), 0.797_884_560_802_865_4, epsilon = 1e-15);
        assert_abs_diff_eq!(eval_basis(2, PI / 2.0).unwrap(), -FRAC_2_PI.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn basis_rejects_points_outside_interval() {
        assert!(matches!(eval_basis(1, -1e-9), Err(Error::Domain { .. })));
        assert!(matches!(eval_basis(1, PI + 1e-9), Err(Error::Domain { .. })));
        assert!(matches!(
            eval_function(&ModalVector::zeros(3), 4.0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn project_examples() {
        let p = SpectralParams::new(0.1, 8, 10).unwrap();
        let zero = project(|_| 0.0, &p).unwrap();
        assert!(zero.iter().all(|&c| c == 0.0));

        let c = project(f64::cos, &p).unwrap();
        assert_abs_diff_eq!(c[1], (PI / 2.0).sqrt(), epsilon = 1e-12);
        for k in [0, 2, 3, 8] {
            assert_abs_diff_eq!(c[k], 0.0, epsilon = 1e-12);
        }

        let one = project(|_| 1.0, &p).unwrap();
        assert_abs_diff_eq!(one[0], PI.sqrt(), epsilon = 1e-12);
        assert!(one.iter().skip(1).all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn project_rejects_non_finite_samples() {
        let p = SpectralParams::new(0.1, 4, 10).unwrap();
        let err = project(|x| if x > 1.0 { f64::NAN } else { 0.0 }, &p).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn norm_examples() {
        let z = ModalVector::zeros(5);
        for a in [-1.0, -0.5, 0.0, 0.5, 2.0] {
            assert_eq!(norm(&z, SobolevScale(a)), 0.0);
        }
        assert_abs_diff_eq!(norm(&ModalVector::unit(5, 1).unwrap(), SobolevScale::L2), 1.0);
        assert_abs_diff_eq!(
            norm(&ModalVector::unit(5, 3).unwrap(), SobolevScale::HALF),
            2.0,
            epsilon = 1e-15
        );
        // mode 0 is weighted by 1 at every exponent
        assert_abs_diff_eq!(norm(&ModalVector::unit(5, 0).unwrap(), SobolevScale(3.0)), 1.0);
    }

    #[test]
    fn eval_function_examples() {
        let z = ModalVector::zeros(4);
        assert_eq!(eval_function(&z, 1.0).unwrap(), 0.0);
        let mut c = vec![0.0; 5];
        c[0] = PI.sqrt();
        let one = ModalVector::new(c).unwrap();
        for x in [0.0, 0.7, PI] {
            assert_abs_diff_eq!(eval_function(&one, x).unwrap(), 1.0, epsilon = 1e-15);
        }
        let e1 = ModalVector::unit(4, 1).unwrap();
        assert_abs_diff_eq!(eval_function(&e1, PI).unwrap(), -FRAC_2_PI.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn orthonormality_under_quadrature() {
        let k_modes = 40;
        let panels = 4 * k_modes;
        let h = PI / panels as f64;
        for k in 0..=k_modes {
            for j in 0..=k_modes {
                let s: Vec<f64> = (0..=panels)
                    .map(|i| {
                        let x = i as f64 * h;
                        basis_unchecked(k, x) * basis_unchecked(j, x)
                    })
                    .collect();
                let expected = if k == j { 1.0 } else { 0.0 };
                assert!((simpson(&s, h) - expected).abs() < 1e-10, "k={k} j={j}");
            }
        }
    }

    #[test]
    fn lateral_basis_orthonormal_and_checked() {
        let n = 400;
        let h = 1.0 / n as f64;
        for k in 1..=6 {
            for j in 1..=6 {
                let s: Vec<f64> = (0..=n)
                    .map(|i| {
                        let y = -1.0 + i as f64 * h;
                        lateral_unchecked(k, y) * lateral_unchecked(j, y)
                    })
                    .collect();
                let expected = if k == j { 1.0 } else { 0.0 };
                assert!((simpson(&s, h) - expected).abs() < 1e-10);
            }
        }
        assert!(eval_lateral_basis(0, -0.5).is_err());
        assert!(eval_lateral_basis(1, 0.1).is_err());
        assert_abs_diff_eq!(eval_lateral_basis(1, -1.0).unwrap(), std::f64::consts::SQRT_2);
    }

    #[test]
    fn params_validation() {
        assert!(SpectralParams::new(0.0, 4, 4).is_err());
        assert!(SpectralParams::new(1.5, 4, 4).is_err());
        assert!(SpectralParams::new(f64::NAN, 4, 4).is_err());
        assert!(SpectralParams::new(1.0, 0, 4).is_err());
        assert!(SpectralParams::new(1.0, 4, 0).is_err());
        let p = SpectralParams::with_defaults(1.0).unwrap();
        assert_eq!((p.k_modes(), p.l_modes()), (256, 10_000));
    }

    #[test]
    fn modal_vector_rejects_bad_input() {
        assert!(ModalVector::new(vec![]).is_err());
        assert!(ModalVector::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(ModalVector::unit(3, 4).is_err());
        let a = ModalVector::zeros(3);
        let b = ModalVector::zeros(4);
        assert!(matches!(
            a.lin_comb(1.0, &b, 1.0),
            Err(Error::Shape { expected: 3, found: 4 })
        ));
    }

    fn modal_strategy(max_k: usize) -> impl Strategy<Value = ModalVector> {
        (1..=max_k)
            .prop_flat_map(|k| prop::collection::vec(-10.0f64..10.0, k + 1).prop_map(|c| ModalVector::new(c).unwrap()))
    }

    proptest! {
        #[test]
        fn project_recovers_synthesized_functions(v in modal_strategy(64)) {
            let p = SpectralParams::new(0.5, v.k_modes(), 1).unwrap();
            let back = project(|x| eval_function(&v, x).unwrap(), &p).unwrap();
            prop_assert!(back.max_abs_diff(&v).unwrap() < 1e-8);
        }

        #[test]
        fn parseval(v in modal_strategy(32)) {
            let panels = 4 * v.k_modes();
            let h = PI / panels as f64;
            let sq: Vec<f64> = (0..=panels)
                .map(|i| eval_function(&v, (i as f64 * h).min(PI)).unwrap().powi(2))
                .collect();
            let quad = simpson(&sq, h);
            let n2 = norm(&v, SobolevScale::L2).powi(2);
            prop_assert!((quad - n2).abs() <= 1e-8 * n2.max(1e-300));
        }

        #[test]
        fn norm_monotone_in_alpha(v in modal_strategy(32), a in -2.0f64..2.0, d in 0.0f64..2.0) {
            prop_assert!(norm(&v, SobolevScale(a)) <= norm(&v, SobolevScale(a + d)) * (1.0 + 1e-14));
        }
    }
}
