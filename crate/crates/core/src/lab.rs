//! μ-sweeps of the water system against its shallow-water limit, rate fits,
//! and audits of the scalar kernel bounds.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basis::{ModalVector, SobolevScale, SpectralParams};
use crate::error::{Error, Result};
use crate::evolution::{evolve_with, make_initial, EvolutionState, InputSignal, ModalSystem, SignalShape};
use crate::kernels::{f_kernel, g_kernel, i_kernel, j_kernel, reduced_l_sum};
use crate::operators::{apply_sqrt, bmu_dual_norm_gap, limit_forcing, resolvent_shifted, DtNSpectrum};

/// Seed of the random probes used by the resolvent audits.
pub const PROBE_SEED: u64 = 0x5EED_0001;

/// Relative slack allowed on the proven bounds.
pub const AUDIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mu_list: Vec<f64>,
    pub tau: f64,
    pub dt: f64,
    pub k_modes: usize,
    pub l_modes: usize,
    pub zeta0: ModalVector,
    pub zeta1: ModalVector,
    pub signal: SignalShape,
    /// Leave the largest μ out of the rate fit.
    pub exclude_largest: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mu_list.is_empty() {
            return Err(Error::parameter("mu_list", "a nonempty list", "[]"));
        }
        for &mu in &self.mu_list {
            if !(mu > 0.0 && mu <= 1.0) {
                return Err(Error::parameter("mu", "(0, 1]", mu));
            }
        }
        if self.mu_list.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::parameter(
                "mu_list",
                "a strictly decreasing list",
                format!("{:?}", self.mu_list),
            ));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::parameter("tau", "(0, ∞)", self.tau));
        }
        if !(self.dt.is_finite() && self.dt > 0.0 && self.dt <= self.tau) {
            return Err(Error::parameter("dt", "(0, tau]", self.dt));
        }
        if self.zeta0.k_modes() != self.k_modes || self.zeta1.k_modes() != self.k_modes {
            return Err(Error::Shape {
                expected: self.k_modes,
                found: if self.zeta0.k_modes() != self.k_modes {
                    self.zeta0.k_modes()
                } else {
                    self.zeta1.k_modes()
                },
            });
        }
        Ok(())
    }
}

/// Sup-in-time errors between two trajectories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorPair {
    /// `max_i ‖ζ_a(t_i) − ζ_b(t_i)‖` at `α = 1/2`.
    pub err_half: f64,
    /// `max_i ‖∂_tζ_a(t_i) − ∂_tζ_b(t_i)‖` at `α = 0`.
    pub err_deriv: f64,
    /// `ω_max·dt·A`, with `A` the largest state amplitude seen on either side;
    /// bounds how much `∂_tζ` can move between samples.
    pub sample_bound: f64,
}

fn amplitude(s: &EvolutionState) -> f64 {
    s.energy().sqrt()
}

/// Runs `a` and `b` in lockstep from the same data and input.
pub fn compare_systems(
    a: &ModalSystem,
    b: &ModalSystem,
    zeta0: &ModalVector,
    zeta1: &ModalVector,
    signal: &InputSignal,
) -> Result<ErrorPair> {
    let init_a = make_initial(zeta0, zeta1, a)?;
    let init_b = make_initial(zeta0, zeta1, b)?;

    let mut samples_a: Vec<EvolutionState> = Vec::with_capacity(signal.steps() + 1);
    evolve_with(&init_a, signal, a, |_, _, s| samples_a.push(s.clone()))?;

    let mut err_half: f64 = 0.0;
    let mut err_deriv: f64 = 0.0;
    let mut amp: f64 = 0.0;
    evolve_with(&init_b, signal, b, |i, _, sb| {
        let sa = &samples_a[i];
        let dz = &sa.zeta(a) - &sb.zeta(b);
        let da = sa.alpha() - sb.alpha();
        err_half = err_half.max(dz.norm(SobolevScale::HALF));
        err_deriv = err_deriv.max(da.norm(SobolevScale::L2));
        amp = amp.max(amplitude(sa)).max(amplitude(sb));
    })?;

    let omega_max = a.omega().iter().chain(b.omega()).fold(0.0f64, |m, &w| m.max(w));
    Ok(ErrorPair {
        err_half,
        err_deriv,
        sample_bound: omega_max * signal.dt() * amp,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub mu: f64,
    pub errors: ErrorPair,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub rate_half: Option<f64>,
    pub rate_deriv: Option<f64>,
    pub exclude_largest: bool,
    pub audit: Option<KernelAudit>,
}

impl SweepReport {
    pub fn err_half(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.errors.err_half).collect()
    }

    pub fn err_deriv(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.errors.err_deriv).collect()
    }

    /// `mu,err_half,err_deriv`, one row per μ in sweep order.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("mu,err_half,err_deriv\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:.16e},{:.16e},{:.16e}",
                r.mu, r.errors.err_half, r.errors.err_deriv
            );
        }
        s
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let fmt_rate = |r: Option<f64>| r.map_or("n/a".to_string(), |p| format!("{p:.6}"));
        let _ = writeln!(s, "sweep over {} values of mu", self.rows.len());
        let _ = writeln!(
            s,
            "rate fit err ~ C mu^p ({})",
            if self.exclude_largest {
                "largest mu excluded"
            } else {
                "all mu"
            }
        );
        let _ = writeln!(s, "  p(err_half)  = {}", fmt_rate(self.rate_half));
        let _ = writeln!(s, "  p(err_deriv) = {}", fmt_rate(self.rate_deriv));
        let _ = writeln!(s, "inter-sample bound omega_max*dt*amplitude per mu:");
        for r in &self.rows {
            let _ = writeln!(s, "  mu = {:.3e}: {:.6e}", r.mu, r.errors.sample_bound);
        }
        if let Some(a) = &self.audit {
            s.push_str(&a.to_text());
        }
        s
    }
}

/// Least-squares slope of `log err` against `log μ`. `None` when fewer than
/// two points have positive error.
pub fn fit_rate(mus: &[f64], errs: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = mus
        .iter()
        .zip(errs)
        .filter(|(m, e)| **m > 0.0 && **e > 0.0)
        .map(|(m, e)| (m.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Evolves water and limit systems for every μ and collects sup-in-time errors.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let signal = InputSignal::from_shape(&cfg.signal, cfg.dt, cfg.tau)?;
    let limit = ModalSystem::limit(cfg.k_modes);
    let rows = cfg
        .mu_list
        .par_iter()
        .map(|&mu| {
            let water = ModalSystem::water(&SpectralParams::new(mu, cfg.k_modes, cfg.l_modes)?)?;
            let errors = compare_systems(&water, &limit, &cfg.zeta0, &cfg.zeta1, &signal)?;
            Ok(SweepRow { mu, errors })
        })
        .collect::<Result<Vec<_>>>()?;

    let skip = usize::from(cfg.exclude_largest && rows.len() > 2);
    let fit = &rows[skip..];
    let mus: Vec<f64> = fit.iter().map(|r| r.mu).collect();
    let half: Vec<f64> = fit.iter().map(|r| r.errors.err_half).collect();
    let deriv: Vec<f64> = fit.iter().map(|r| r.errors.err_deriv).collect();
    Ok(SweepReport {
        rate_half: fit_rate(&mus, &half),
        rate_deriv: fit_rate(&mus, &deriv),
        rows,
        exclude_largest: skip == 1,
        audit: None,
    })
}

/// Whether an audited bound is proven (fixed constant) or has a constant to fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Proven,
    Fitted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub kernel: &'static str,
    pub bound: &'static str,
    pub kind: BoundKind,
    /// Largest `|kernel|/bound` over the whole grid; for fitted bounds, the minimal `C`.
    pub max_ratio: f64,
    /// Grid points where the ratio exceeds `1 + AUDIT_TOLERANCE` (proven bounds only).
    pub violations: usize,
    /// Largest ratio per μ, in grid order.
    pub per_mu: Vec<f64>,
}

impl AuditRow {
    pub fn holds(&self) -> bool {
        match self.kind {
            BoundKind::Proven => self.violations == 0,
            BoundKind::Fitted => self.max_ratio.is_finite(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelAudit {
    pub mu_grid: Vec<f64>,
    pub k_max: usize,
    pub l_modes: usize,
    pub rows: Vec<AuditRow>,
}

impl KernelAudit {
    pub fn row(&self, kernel: &str) -> Option<&AuditRow> {
        self.rows.iter().find(|r| r.kernel == kernel)
    }

    pub fn proven_bounds_hold(&self) -> bool {
        self.rows.iter().all(AuditRow::holds)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "kernel audit: {} values of mu in [{:.1e}, {:.1e}], k = 1..={}, l_modes = {}",
            self.mu_grid.len(),
            self.mu_grid.iter().cloned().fold(f64::INFINITY, f64::min),
            self.mu_grid.iter().cloned().fold(0.0, f64::max),
            self.k_max,
            self.l_modes
        );
        let _ = writeln!(
            s,
            "{:<8} {:<32} {:<7} {:>14} {:>10}",
            "kernel", "bound", "kind", "max ratio", "violations"
        );
        for r in &self.rows {
            let kind = match r.kind {
                BoundKind::Proven => "proven",
                BoundKind::Fitted => "fitted",
            };
            let _ = writeln!(
                s,
                "{:<8} {:<32} {:<7} {:>14.6e} {:>10}",
                r.kernel, r.bound, kind, r.max_ratio, r.violations
            );
        }
        let _ = writeln!(
            s,
            "proven bounds hold: {}",
            if self.proven_bounds_hold() { "yes" } else { "NO" }
        );
        s
    }
}

const AUDITED: [(&str, &str, BoundKind); 6] = [
    ("F", "|F(k)| <= sqrt(mu)/k", BoundKind::Proven),
    ("I", "|I(k)| <= sqrt(mu) k", BoundKind::Proven),
    ("H/2", "sum_l H(k,l) <= mu/2", BoundKind::Proven),
    ("H/k", "sum_l H(k,l) <= 2 sqrt(mu)/k", BoundKind::Proven),
    ("G", "|G(k)| <= C min(mu^1/2, mu^1/4/k^1/2)", BoundKind::Fitted),
    ("J", "|J(k)| <= C mu^1/4 k^1/2", BoundKind::Fitted),
];

fn kernel_ratios(mu: f64, k: usize, l_modes: usize) -> [f64; 6] {
    let kf = k as f64;
    let sm = mu.sqrt();
    let qm = sm.sqrt();
    let h = 4.0 * mu * reduced_l_sum(mu, k, l_modes);
    [
        f_kernel(mu, k).abs() / (sm / kf),
        i_kernel(mu, k).abs() / (sm * kf),
        h / (mu / 2.0),
        h / (2.0 * sm / kf),
        g_kernel(mu, k).abs() / sm.min(qm / kf.sqrt()),
        j_kernel(mu, k).abs() / (qm * kf.sqrt()),
    ]
}

/// Ratio of every kernel to its bound over `mu_grid × {1..=k_max}`.
pub fn audit_kernels(mu_grid: &[f64], k_max: usize, l_modes: usize) -> Result<KernelAudit> {
    if mu_grid.is_empty() {
        return Err(Error::parameter("mu_grid", "a nonempty list", "[]"));
    }
    if let Some(&mu) = mu_grid.iter().find(|&&m| !(m > 0.0 && m <= 1.0)) {
        return Err(Error::parameter("mu", "(0, 1]", mu));
    }
    if k_max == 0 {
        return Err(Error::parameter("k_max", "[1, ∞)", k_max));
    }
    if l_modes == 0 {
        return Err(Error::parameter("l_modes", "[1, ∞)", l_modes));
    }
    let limit = 1.0 + AUDIT_TOLERANCE;
    // per μ: (max ratio, violation count) for each kernel
    let per_mu: Vec<[(f64, usize); 6]> = mu_grid
        .iter()
        .map(|&mu| {
            (1..=k_max)
                .into_par_iter()
                .map(|k| kernel_ratios(mu, k, l_modes).map(|r| (r, usize::from(r.is_nan() || r > limit))))
                .reduce(
                    || [(0.0, 0); 6],
                    |a, b| std::array::from_fn(|i| (a[i].0.max(b[i].0), a[i].1 + b[i].1)),
                )
        })
        .collect();

    let rows = AUDITED
        .iter()
        .enumerate()
        .map(|(i, &(kernel, bound, kind))| {
            let ratios: Vec<f64> = per_mu.iter().map(|m| m[i].0).collect();
            AuditRow {
                kernel,
                bound,
                kind,
                max_ratio: ratios.iter().cloned().fold(0.0, f64::max),
                violations: match kind {
                    BoundKind::Proven => per_mu.iter().map(|m| m[i].1).sum(),
                    BoundKind::Fitted => 0,
                },
                per_mu: ratios,
            }
        })
        .collect();
    Ok(KernelAudit {
        mu_grid: mu_grid.to_vec(),
        k_max,
        l_modes,
        rows,
    })
}

/// Resolvent gaps for one probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventGap {
    pub mu: f64,
    pub probe_norm: f64,
    /// `‖R(−1: A_μ/μ)g − R(−1: A₀)g‖`.
    pub gap_f: f64,
    /// `‖R(−1: A_μ/μ)(A_μ/μ)^{1/2}g − R(−1: A₀)A₀^{1/2}g‖`.
    pub gap_g: f64,
}

impl ResolventGap {
    /// `gap_f ≤ √μ‖g‖`, up to the audit tolerance.
    pub fn within_bound(&self) -> bool {
        self.gap_f <= self.mu.sqrt() * self.probe_norm * (1.0 + AUDIT_TOLERANCE)
    }

    /// `gap_g/(√μ‖g‖)`, zero for the zero probe.
    pub fn g_constant(&self) -> f64 {
        if self.probe_norm == 0.0 {
            0.0
        } else {
            self.gap_g / (self.mu.sqrt() * self.probe_norm)
        }
    }
}

pub fn audit_resolvents(mu: f64, probe: &ModalVector) -> Result<ResolventGap> {
    let params = SpectralParams::new(mu, probe.k_modes(), 1)?;
    let water = DtNSpectrum::new(&params);
    let limit = limit_forcing(probe.k_modes());
    let gap_f = (&resolvent_shifted(&water, probe)? - &resolvent_shifted(&limit, probe)?).norm(SobolevScale::L2);
    let gw = resolvent_shifted(&water, &apply_sqrt(&water, probe)?)?;
    let gl = resolvent_shifted(&limit, &apply_sqrt(&limit, probe)?)?;
    Ok(ResolventGap {
        mu,
        probe_norm: probe.norm(SobolevScale::L2),
        gap_f,
        gap_g: (&gw - &gl).norm(SobolevScale::L2),
    })
}

/// `count` unit probes on modes `0..=k_modes`, uniform entries then normalized.
pub fn random_probes(seed: u64, count: usize, k_modes: usize) -> Vec<ModalVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let raw =
                ModalVector::new((0..=k_modes).map(|_| rng.random_range(-1.0..1.0)).collect()).expect("finite draws");
            let n = raw.norm(SobolevScale::L2);
            &raw * (1.0 / n)
        })
        .collect()
}

/// Per-μ summary over a batch of probes.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventAuditRow {
    pub mu: f64,
    pub max_gap_f_ratio: f64,
    pub violations: usize,
    pub g_constant: f64,
}

/// `count` seeded probes per μ; the same probes are reused for every μ.
pub fn audit_resolvent_grid(
    mu_grid: &[f64],
    k_modes: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<ResolventAuditRow>> {
    let probes = random_probes(seed, count, k_modes);
    mu_grid
        .par_iter()
        .map(|&mu| {
            let mut row = ResolventAuditRow {
                mu,
                max_gap_f_ratio: 0.0,
                violations: 0,
                g_constant: 0.0,
            };
            for p in &probes {
                let g = audit_resolvents(mu, p)?;
                row.max_gap_f_ratio = row.max_gap_f_ratio.max(g.gap_f / (mu.sqrt() * g.probe_norm));
                row.violations += usize::from(!g.within_bound());
                row.g_constant = row.g_constant.max(g.g_constant());
            }
            Ok(row)
        })
        .collect()
}

/// `(μ, gap, gap·μ^{−1/4})` for the dual-norm distance between the forcings.
pub fn bmu_gap_table(mu_grid: &[f64], k_modes: usize, l_modes: usize) -> Result<Vec<(f64, f64, f64)>> {
    mu_grid
        .iter()
        .map(|&mu| {
            let gap = bmu_dual_norm_gap(&SpectralParams::new(mu, k_modes, l_modes)?)?;
            Ok((mu, gap, gap * mu.powf(-0.25)))
        })
        .collect()
}
