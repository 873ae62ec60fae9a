//! Modal time evolution of the water-wave system
//!
//! ```text
//! ζ_μ'' + (1/μ) A_μ ζ_μ = (1/μ) B_μ u
//! ```
//!
//! and of its limit `ζ'' + A₀ ζ = B₀ u`, written in the first-order variables
//! `α = ∂ζ/∂t`, `β = S^{1/2} ζ` with `S = A_μ/μ` or `A₀`. On mode `k ≥ 1` the
//! pair obeys
//!
//! ```text
//! α' = −ω_k β + f_k u,     β' = ω_k α,
//! ```
//!
//! a rotation about the fixed point `(0, f_k u/ω_k)` for constant `u`. The
//! square root annihilates mode 0, so the constant mode of `ζ` is carried
//! alongside as `ζ_0'' = f_0 u`.

use crate::basis::{ModalVector, SobolevScale, SpectralParams};
use crate::error::{Error, Result};
use crate::kernels::one_minus_tanhc;
use crate::operators::{limit_forcing, ntn_forcing_with_tolerance, DEFAULT_FORCING_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemKind {
    /// Water waves at shallowness `mu`.
    Water { mu: f64 },
    /// One-dimensional wave equation with Neumann boundary control.
    Limit,
}

/// `ω_k(μ) = (k tanh(√μk)/√μ)^{1/2}`, the water-wave modal frequency.
pub fn water_frequency(mu: f64, k: usize) -> f64 {
    let kf = k as f64;
    kf * (1.0 - one_minus_tanhc(mu.sqrt() * kf)).sqrt()
}

/// Frequencies and forcing coefficients of one of the two systems.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalSystem {
    kind: SystemKind,
    omega: Vec<f64>,
    forcing: Vec<f64>,
}

impl ModalSystem {
    pub fn water(params: &SpectralParams) -> Result<Self> {
        Self::water_with_tolerance(params, DEFAULT_FORCING_TOLERANCE)
    }

    pub fn water_with_tolerance(params: &SpectralParams, tolerance: f64) -> Result<Self> {
        let mu = params.mu();
        let forcing = ntn_forcing_with_tolerance(params, tolerance)?;
        Ok(ModalSystem {
            kind: SystemKind::Water { mu },
            omega: (0..=params.k_modes()).map(|k| water_frequency(mu, k)).collect(),
            forcing: forcing.forcing().to_vec(),
        })
    }

    pub fn limit(k_modes: usize) -> Self {
        ModalSystem {
            kind: SystemKind::Limit,
            omega: (0..=k_modes).map(|k| k as f64).collect(),
            forcing: limit_forcing(k_modes).b0().to_vec(),
        }
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn k_modes(&self) -> usize {
        self.omega.len() - 1
    }

    /// `ω_k`; `ω_0 = 0`.
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    /// `f_k`, the modal forcing per unit input.
    pub fn forcing(&self) -> &[f64] {
        &self.forcing
    }

    fn check(&self, v: &ModalVector) -> Result<()> {
        if v.k_modes() != self.k_modes() {
            return Err(Error::Shape {
                expected: self.k_modes(),
                found: v.k_modes(),
            });
        }
        Ok(())
    }
}

/// Closed-form input profiles; [`InputSignal::from_shape`] samples them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignalShape {
    Zero,
    Constant(f64),
    /// `amp` on `[start, end)`, zero elsewhere.
    Pulse {
        start: f64,
        end: f64,
        amp: f64,
    },
    /// `amp·sin(freq·t)`.
    Sine {
        amp: f64,
        freq: f64,
    },
}

impl SignalShape {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            SignalShape::Zero => 0.0,
            SignalShape::Constant(a) => a,
            SignalShape::Pulse { start, end, amp } => {
                if t >= start && t < end {
                    amp
                } else {
                    0.0
                }
            }
            SignalShape::Sine { amp, freq } => amp * (freq * t).sin(),
        }
    }
}

/// Piecewise-constant wave-maker acceleration: `u(t) = values[m]` on
/// `[m·dt, (m+1)·dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSignal {
    dt: f64,
    values: Vec<f64>,
}

impl InputSignal {
    pub fn new(dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::parameter("dt", "(0, ∞)", dt));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!("input value {i} is not finite")));
        }
        Ok(InputSignal { dt, values })
    }

    pub fn zero(dt: f64, steps: usize) -> Result<Self> {
        Self::new(dt, vec![0.0; steps])
    }

    /// Samples `shape` at the midpoint of each step on `[0, tau]`; the step
    /// count is `round(tau/dt)`.
    pub fn from_shape(shape: &SignalShape, dt: f64, tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::parameter("tau", "(0, ∞)", tau));
        }
        if !(dt.is_finite() && dt > 0.0 && dt <= tau) {
            return Err(Error::parameter("dt", "(0, tau]", dt));
        }
        let steps = (tau / dt).round() as usize;
        let values = (0..steps).map(|m| shape.eval((m as f64 + 0.5) * dt)).collect();
        Self::new(dt, values)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn steps(&self) -> usize {
        self.values.len()
    }

    pub fn horizon(&self) -> f64 {
        self.values.len() as f64 * self.dt
    }
}

/// First-order state `(α, β)` plus the constant mode of `ζ`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionState {
    alpha: ModalVector,
    beta: ModalVector,
    zeta0: f64,
    t: f64,
}

impl EvolutionState {
    /// `∂ζ/∂t` coefficients, mode 0 included.
    pub fn alpha(&self) -> &ModalVector {
        &self.alpha
    }

    /// `S^{1/2} ζ`; mode 0 is identically zero.
    pub fn beta(&self) -> &ModalVector {
        &self.beta
    }

    /// Mode-0 coefficient of `ζ`.
    pub fn zeta0(&self) -> f64 {
        self.zeta0
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `‖α‖² + ‖β‖²`.
    pub fn energy(&self) -> f64 {
        self.alpha.norm(SobolevScale::L2).powi(2) + self.beta.norm(SobolevScale::L2).powi(2)
    }

    /// Elevation coefficients: `ζ_k = β_k/ω_k` for `k ≥ 1`, mode 0 carried directly.
    pub fn zeta(&self, system: &ModalSystem) -> ModalVector {
        let omega = system.omega();
        self.beta
            .map_modes(|k, b| if k == 0 { self.zeta0 } else { b / omega[k] })
    }
}

/// `w_0 = (ζ_1, S^{1/2} ζ_0)`.
pub fn make_initial(zeta0: &ModalVector, zeta1: &ModalVector, system: &ModalSystem) -> Result<EvolutionState> {
    system.check(zeta0)?;
    system.check(zeta1)?;
    let omega = system.omega();
    Ok(EvolutionState {
        alpha: zeta1.clone(),
        beta: zeta0.map_modes(|k, z| if k == 0 { 0.0 } else { omega[k] * z }),
        zeta0: zeta0[0],
        t: 0.0,
    })
}

/// Exact one-step map for a fixed `dt`, with the per-mode rotations cached.
#[derive(Debug, Clone)]
pub struct Propagator<'a> {
    system: &'a ModalSystem,
    dt: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl<'a> Propagator<'a> {
    pub fn new(system: &'a ModalSystem, dt: f64) -> Self {
        let (cos, sin) = system.omega().iter().map(|w| ((w * dt).cos(), (w * dt).sin())).unzip();
        Propagator { system, dt, cos, sin }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances `state` by `dt` under the constant input `u`.
    pub fn advance(&self, state: &EvolutionState, u: f64) -> EvolutionState {
        let mut next = state.clone();
        self.advance_in_place(&mut next, u);
        next
    }

    fn advance_in_place(&self, state: &mut EvolutionState, u: f64) {
        let omega = self.system.omega();
        let forcing = self.system.forcing();
        let dt = self.dt;
        let mut alpha = std::mem::replace(&mut state.alpha, ModalVector::zeros(0)).into_coeffs();
        let mut beta = std::mem::replace(&mut state.beta, ModalVector::zeros(0)).into_coeffs();

        let a0 = alpha[0];
        let push = forcing[0] * u;
        state.zeta0 += dt * (a0 + 0.5 * push * dt);
        alpha[0] = a0 + push * dt;

        for k in 1..alpha.len() {
            let (c, s) = (self.cos[k], self.sin[k]);
            let centre = forcing[k] * u / omega[k];
            let a = alpha[k];
            let b = beta[k] - centre;
            alpha[k] = a * c - b * s;
            beta[k] = a * s + b * c + centre;
        }

        state.alpha = ModalVector::new(alpha).expect("finite");
        state.beta = ModalVector::new(beta).expect("finite");
        state.t += dt;
    }
}

/// One exact step of length `dt` with constant input `u`.
pub fn step(state: &EvolutionState, u: f64, dt: f64, system: &ModalSystem) -> EvolutionState {
    Propagator::new(system, dt).advance(state, u)
}

/// Samples of `ζ` and `∂ζ/∂t` at `t_i = i·dt`, `i = 0..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub zeta: Vec<ModalVector>,
    pub zeta_t: Vec<ModalVector>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Runs the exact propagator over `signal`, calling `visit(i, t_i, state)` at
/// every sample including `t_0 = 0`.
pub fn evolve_with(
    initial: &EvolutionState,
    signal: &InputSignal,
    system: &ModalSystem,
    mut visit: impl FnMut(usize, f64, &EvolutionState),
) -> Result<()> {
    system.check(&initial.alpha)?;
    let prop = Propagator::new(system, signal.dt());
    let mut state = initial.clone();
    let t_start = state.t;
    visit(0, t_start, &state);
    for (m, &u) in signal.values().iter().enumerate() {
        prop.advance_in_place(&mut state, u);
        // resample the clock from the step index so it does not drift
        state.t = t_start + (m + 1) as f64 * signal.dt();
        visit(m + 1, state.t, &state);
    }
    Ok(())
}

/// Full trajectory of the system driven by `signal` from `initial`.
pub fn evolve(initial: &EvolutionState, signal: &InputSignal, system: &ModalSystem) -> Result<Trajectory> {
    let n = signal.steps() + 1;
    let mut traj = Trajectory {
        times: Vec::with_capacity(n),
        zeta: Vec::with_capacity(n),
        zeta_t: Vec::with_capacity(n),
    };
    evolve_with(initial, signal, system, |_, t, s| {
        traj.times.push(t);
        traj.zeta.push(s.zeta(system));
        traj.zeta_t.push(s.alpha().clone());
    })?;
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn water(mu: f64, k: usize) -> ModalSystem {
        ModalSystem::water(&SpectralParams::new(mu, k, 10_000).unwrap()).unwrap()
    }

    #[test]
    fn initial_state_examples() {
        let lim = ModalSystem::limit(4);
        let z = ModalVector::zeros(4);
        let s = make_initial(&z, &z, &lim).unwrap();
        assert_eq!(s.energy(), 0.0);
        assert_eq!(s.zeta0(), 0.0);

        let e1 = ModalVector::unit(4, 1).unwrap();
        let s = make_initial(&e1, &z, &lim).unwrap();
        assert_eq!(s.beta(), &e1);
        assert_eq!(s.alpha(), &z);

        let w = water(1.0, 4);
        let s = make_initial(&e1, &z, &w).unwrap();
        assert_abs_diff_eq!(s.beta()[1], 1f64.tanh().sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.beta()[1], 0.872_70, epsilon = 1e-5);

        assert!(make_initial(&ModalVector::zeros(3), &z, &lim).is_err());
    }

    #[test]
    fn beta_mode_zero_stays_zero_and_zeta0_is_tracked() {
        let lim = ModalSystem::limit(3);
        let z0 = ModalVector::new(vec![2.0, 1.0, 0.0, 0.5]).unwrap();
        let s = make_initial(&z0, &ModalVector::zeros(3), &lim).unwrap();
        assert_eq!(s.beta()[0], 0.0);
        assert_eq!(s.zeta(&lim), z0);
        let s = step(&s, 1.0, 0.1, &lim);
        assert_eq!(s.beta()[0], 0.0);
    }

    #[test]
    fn full_period_returns_to_start() {
        for sys in [ModalSystem::limit(5), water(0.3, 5)] {
            for k in 1..=5 {
                let e = ModalVector::unit(5, k).unwrap();
                let s0 = make_initial(&e, &ModalVector::zeros(5), &sys).unwrap();
                let period = 2.0 * PI / sys.omega()[k];
                let s1 = step(&s0, 0.0, period, &sys);
                assert!(s1.alpha().max_abs_diff(s0.alpha()).unwrap() < 1e-12);
                assert!(s1.beta().max_abs_diff(s0.beta()).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn limit_single_mode_is_cosine() {
        let lim = ModalSystem::limit(3);
        let s0 = make_initial(&ModalVector::unit(3, 1).unwrap(), &ModalVector::zeros(3), &lim).unwrap();
        let sig = InputSignal::zero(0.01, 700).unwrap();
        let traj = evolve(&s0, &sig, &lim).unwrap();
        for (t, z) in traj.times.iter().zip(&traj.zeta) {
            assert_abs_diff_eq!(z[1], t.cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_input_step_conserves_energy() {
        let sys = water(0.05, 16);
        let z0 = ModalVector::from_fn(16, |k| 1.0 / (1.0 + k as f64));
        let z1 = ModalVector::from_fn(16, |k| (k as f64).sin());
        let mut s = make_initial(&z0, &z1, &sys).unwrap();
        let e0 = s.energy();
        for _ in 0..50 {
            let next = step(&s, 0.0, 0.013, &sys);
            assert!((next.energy() - s.energy()).abs() <= 1e-12 * e0);
            s = next;
        }
    }

    #[test]
    fn constant_forcing_mode_zero_is_quadratic() {
        let lim = ModalSystem::limit(2);
        let z = ModalVector::zeros(2);
        let s0 = make_initial(&z, &z, &lim).unwrap();
        let sig = InputSignal::new(0.01, vec![1.0; 300]).unwrap();
        let traj = evolve(&s0, &sig, &lim).unwrap();
        for (t, z) in traj.times.iter().zip(&traj.zeta) {
            assert_abs_diff_eq!(z[0], -t * t / (2.0 * PI.sqrt()), epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_everything_stays_zero() {
        let sys = water(0.1, 8);
        let z = ModalVector::zeros(8);
        let s0 = make_initial(&z, &z, &sys).unwrap();
        let traj = evolve(&s0, &InputSignal::zero(0.1, 20).unwrap(), &sys).unwrap();
        assert_eq!(traj.len(), 21);
        assert!(traj
            .zeta
            .iter()
            .chain(&traj.zeta_t)
            .all(|v| v.iter().all(|&c| c == 0.0)));
    }

    #[test]
    fn signal_validation_and_sampling() {
        assert!(InputSignal::new(0.0, vec![1.0]).is_err());
        assert!(InputSignal::new(0.1, vec![f64::NAN]).is_err());
        assert!(InputSignal::from_shape(&SignalShape::Zero, 0.1, -1.0).is_err());
        let pulse = SignalShape::Pulse {
            start: 0.0,
            end: 1.0,
            amp: 1.0,
        };
        let sig = InputSignal::from_shape(&pulse, 1e-3, 10.0).unwrap();
        assert_eq!(sig.steps(), 10_000);
        assert_eq!(sig.values().iter().filter(|&&v| v == 1.0).count(), 1000);
        assert_eq!(sig.values()[999], 1.0);
        assert_eq!(sig.values()[1000], 0.0);
    }

    #[test]
    fn water_frequency_tends_to_k_from_below() {
        for k in [1usize, 3, 10] {
            let mut prev = 0.0;
            for mu in [1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-6] {
                let w = water_frequency(mu, k);
                assert!(w < k as f64 && w > prev);
                prev = w;
            }
            assert!((k as f64 - prev) / (k as f64) < 1e-4);
        }
    }

    #[test]
    fn forced_mode_matches_closed_form() {
        // ζ_k'' + ω²ζ_k = f_k u from rest: ζ_k = f_k u (1 − cos ωt)/ω²
        let sys = water(0.2, 4);
        let z = ModalVector::zeros(4);
        let s0 = make_initial(&z, &z, &sys).unwrap();
        let traj = evolve(&s0, &InputSignal::new(0.05, vec![0.7; 200]).unwrap(), &sys).unwrap();
        for (t, zt) in traj.times.iter().zip(&traj.zeta) {
            for k in 1..=4 {
                let w = sys.omega()[k];
                let exact = sys.forcing()[k] * 0.7 * (1.0 - (w * t).cos()) / (w * w);
                assert_abs_diff_eq!(zt[k], exact, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn weak_form_identity() {
        // α_j(t) − α_j(0) = −ω_j² ∫ζ_j + f_j ∫u, trapezoid in time
        let sys = water(0.05, 6);
        let z0 = ModalVector::smooth8(6);
        let z1 = ModalVector::from_fn(6, |k| 0.1 * k as f64);
        let s0 = make_initial(&z0, &z1, &sys).unwrap();
        let pulse = SignalShape::Pulse {
            start: 0.0,
            end: 0.5,
            amp: 1.0,
        };
        let check = |dt: f64| {
            let sig = InputSignal::from_shape(&pulse, dt, 2.0).unwrap();
            let traj = evolve(&s0, &sig, &sys).unwrap();
            let int_u: f64 = sig.values().iter().sum::<f64>() * dt;
            let mut worst: f64 = 0.0;
            for j in 1..=6 {
                let int_z: f64 = traj.zeta.windows(2).map(|w| 0.5 * dt * (w[0][j] + w[1][j])).sum();
                let w2 = sys.omega()[j].powi(2);
                let lhs = traj.zeta_t.last().unwrap()[j] - traj.zeta_t[0][j];
                worst = worst.max((lhs + w2 * int_z - sys.forcing()[j] * int_u).abs());
            }
            worst
        };
        let (coarse, fine) = (check(1e-2), check(5e-3));
        assert!(fine < 1e-3);
        assert!(coarse / fine > 3.5, "{coarse} {fine}");
    }

    #[test]
    fn truncations_agree_on_shared_modes() {
        let (a, b) = (water(0.1, 8), water(0.1, 16));
        let sig = InputSignal::from_shape(&SignalShape::Sine { amp: 1.0, freq: 2.0 }, 1e-2, 3.0).unwrap();
        let run = |sys: &ModalSystem, k: usize| {
            let s0 = make_initial(&ModalVector::smooth8(k), &ModalVector::zeros(k), sys).unwrap();
            evolve(&s0, &sig, sys).unwrap()
        };
        let (ta, tb) = (run(&a, 8), run(&b, 16));
        for (za, zb) in ta.zeta.iter().zip(&tb.zeta) {
            for k in 0..=8 {
                assert_eq!(za[k], zb[k]);
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn superposition(c0 in -2.0f64..2.0, c1 in -2.0f64..2.0, u in -1.0f64..1.0) {
            let sys = water(0.3, 5);
            let za = ModalVector::from_fn(5, |k| c0 / (1.0 + k as f64));
            let zb = ModalVector::from_fn(5, |k| c1 * (k as f64).cos());
            let z = ModalVector::zeros(5);
            let sig_a = InputSignal::new(0.05, vec![u; 40]).unwrap();
            let sig_b = InputSignal::from_shape(&SignalShape::Sine { amp: 1.0, freq: 1.3 }, 0.05, 2.0).unwrap();
            let sum_sig = InputSignal::new(
                0.05,
                sig_a.values().iter().zip(sig_b.values()).map(|(x, y)| x + y).collect(),
            )
            .unwrap();
            let ta = evolve(&make_initial(&za, &z, &sys).unwrap(), &sig_a, &sys).unwrap();
            let tb = evolve(&make_initial(&z, &zb, &sys).unwrap(), &sig_b, &sys).unwrap();
            let ts = evolve(&make_initial(&za, &zb, &sys).unwrap(), &sum_sig, &sys).unwrap();
            for i in 0..ts.len() {
                let sum = &ta.zeta[i] + &tb.zeta[i];
                proptest::prop_assert!(ts.zeta[i].max_abs_diff(&sum).unwrap() < 1e-12);
            }
        }
    }
}
