//! Scalar comparison kernels between the water-wave operators and their
//! shallow-water limits.
//!
//! All of them are functions of `x = √μ·k` through `h(x) = tanh(x)/x`. They
//! are evaluated in factored form so that the small-`x` regime, where each
//! kernel is a difference of nearly equal numbers, keeps full relative
//! accuracy:
//!
//! ```text
//! F_μ(k) = 1/(1+k²) − 1/(1+k²h)          = −k²(1−h) / ((1+k²)(1+k²h))
//! G_μ(k) = k/(1+k²) − k√h/(1+k²h)        =  k(1−s)(1−k²s) / ((1+k²)(1+k²s²)),  s = √h
//! I_μ(k) = √h − 1                         = −(1−s)
//! J_μ(k) = (1+k)/(1+k√h) − 1              =  k(1−s) / (1+ks)
//! ```

use crate::basis::SpectralParams;

/// `1 − tanh(x)/x` for `x ≥ 0`.
pub(crate) fn one_minus_tanhc(x: f64) -> f64 {
    if x < 0.05 {
        // tanh(x)/x = 1 − x²/3 + 2x⁴/15 − 17x⁶/315 + 62x⁸/2835 − 1382x¹⁰/155925 + …
        let x2 = x * x;
        x2 * (1.0 / 3.0 - x2 * (2.0 / 15.0 - x2 * (17.0 / 315.0 - x2 * (62.0 / 2835.0 - x2 * (1382.0 / 155_925.0)))))
    } else {
        1.0 - x.tanh() / x
    }
}

/// `(h, s, 1−s)` with `h = tanh(x)/x`, `s = √h`.
#[inline]
fn tanhc_parts(x: f64) -> (f64, f64, f64) {
    let d = one_minus_tanhc(x);
    let h = 1.0 - d;
    let s = h.sqrt();
    (h, s, d / (1.0 + s))
}

#[inline]
fn scaled(mu: f64, k: usize) -> f64 {
    mu.sqrt() * k as f64
}

pub(crate) fn f_kernel(mu: f64, k: usize) -> f64 {
    let kk = (k * k) as f64;
    let d = one_minus_tanhc(scaled(mu, k));
    let h = 1.0 - d;
    -kk * d / ((1.0 + kk) * (1.0 + kk * h))
}

pub(crate) fn g_kernel(mu: f64, k: usize) -> f64 {
    let kf = k as f64;
    let kk = kf * kf;
    let (h, s, one_minus_s) = tanhc_parts(scaled(mu, k));
    kf * one_minus_s * (1.0 - kk * s) / ((1.0 + kk) * (1.0 + kk * h))
}

pub(crate) fn i_kernel(mu: f64, k: usize) -> f64 {
    -tanhc_parts(scaled(mu, k)).2
}

pub(crate) fn j_kernel(mu: f64, k: usize) -> f64 {
    let kf = k as f64;
    let (_, s, one_minus_s) = tanhc_parts(scaled(mu, k));
    kf * one_minus_s / (1.0 + kf * s)
}

/// Resolvent difference `R(−1: A_μ/μ) − R(−1: A₀)` on mode `k`.
pub fn kernel_f(params: &SpectralParams, k: usize) -> f64 {
    f_kernel(params.mu(), k)
}

/// Resolvent difference composed with the square roots, on mode `k`.
pub fn kernel_g(params: &SpectralParams, k: usize) -> f64 {
    g_kernel(params.mu(), k)
}

/// Relative error of the square-root operator: `(tanh(√μk)/(√μk))^{1/2} − 1`.
pub fn kernel_i(params: &SpectralParams, k: usize) -> f64 {
    i_kernel(params.mu(), k)
}

/// `(1+k)/(1+k(tanh(√μk)/(√μk))^{1/2}) − 1`.
pub fn kernel_j(params: &SpectralParams, k: usize) -> f64 {
    j_kernel(params.mu(), k)
}

/// Truncated sum `Σ_{l≤L} H_μ(k,l)` and a certified bound on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HSum {
    pub value: f64,
    pub tail_bound: f64,
}

/// `Σ_{l=1..L} 1/((2l−1)²π² + 4μk²)`, summed from the smallest term up.
pub(crate) fn reduced_l_sum(mu: f64, k: usize, l_modes: usize) -> f64 {
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let shift = 4.0 * mu * (k * k) as f64;
    (1..=l_modes)
        .rev()
        .map(|l| {
            let odd = (2 * l - 1) as f64;
            1.0 / (odd * odd * pi2 + shift)
        })
        .sum()
}

/// Tail `Σ_{l>L} 4μ/((2l−1)²π²)`, which dominates `Σ_{l>L} H_μ(k,l)` for every `k`.
pub(crate) fn h_tail_bound(mu: f64, l_modes: usize) -> f64 {
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    4.0 * mu / (pi2 * (2 * l_modes - 1) as f64)
}

/// `H_μ(k,l) = 1/(((2l−1)π/(2√μ))² + k²)`, summed over `l = 1..=L_modes`.
pub fn kernel_h_sum(params: &SpectralParams, k: usize) -> HSum {
    let mu = params.mu();
    HSum {
        value: 4.0 * mu * reduced_l_sum(mu, k, params.l_modes()),
        tail_bound: h_tail_bound(mu, params.l_modes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(mu: f64) -> SpectralParams {
        SpectralParams::new(mu, 16, 10_000).unwrap()
    }

    // Literal kernel formulas, evaluated naively; valid where no cancellation occurs.
    fn literal_f(mu: f64, k: f64) -> f64 {
        let w2 = k * (mu.sqrt() * k).tanh() / mu.sqrt();
        1.0 / (1.0 + k * k) - 1.0 / (1.0 + w2)
    }
    fn literal_g(mu: f64, k: f64) -> f64 {
        let w2 = k * (mu.sqrt() * k).tanh() / mu.sqrt();
        k / (1.0 + k * k) - w2.sqrt() / (1.0 + w2)
    }
    fn literal_i(mu: f64, k: f64) -> f64 {
        let x = mu.sqrt() * k;
        (x.tanh() / x).sqrt() - 1.0
    }
    fn literal_j(mu: f64, k: f64) -> f64 {
        let x = mu.sqrt() * k;
        (1.0 + k) / (1.0 + k * (x.tanh() / x).sqrt()) - 1.0
    }

    #[test]
    fn factored_forms_match_literal_formulas() {
        for &mu in &[1.0, 0.3, 1e-1, 1e-2] {
            for k in [1usize, 2, 3, 7, 20, 150, 3000] {
                let kf = k as f64;
                let pr = p(mu);
                assert_relative_eq!(kernel_f(&pr, k), literal_f(mu, kf), max_relative = 1e-9);
                assert_relative_eq!(
                    kernel_g(&pr, k),
                    literal_g(mu, kf),
                    max_relative = 1e-9,
                    epsilon = 1e-15
                );
                assert_relative_eq!(kernel_i(&pr, k), literal_i(mu, kf), max_relative = 1e-9);
                assert_relative_eq!(kernel_j(&pr, k), literal_j(mu, kf), max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn f_example() {
        // 1/2 − 1/(1 + tanh 1)
        let expected = 0.5 - 1.0 / (1.0 + 1f64.tanh());
        assert_relative_eq!(kernel_f(&p(1.0), 1), expected, max_relative = 1e-14);
        assert_relative_eq!(expected, -0.067_667_6, max_relative = 1e-6);
    }

    #[test]
    fn i_small_argument_matches_taylor_oracle() {
        // √(1+a) − 1 = a/2 − a²/8 + a³/16 − …, a = −x²/3 + 2x⁴/15 − 17x⁶/315 + O(x⁸)
        for &(mu, k) in &[(1e-8f64, 1usize), (1e-6, 3), (1e-4, 2)] {
            let x = mu.sqrt() * k as f64;
            let x2 = x * x;
            let a = -x2 / 3.0 + 2.0 * x2 * x2 / 15.0 - 17.0 * x2 * x2 * x2 / 315.0;
            let taylor = a / 2.0 - a * a / 8.0 + a * a * a / 16.0;
            assert_relative_eq!(kernel_i(&p(mu), k), taylor, max_relative = 1e-10);
        }
        assert_relative_eq!(kernel_i(&p(1e-8), 1), -1.666_666_6e-9, max_relative = 1e-7);
    }

    #[test]
    fn one_minus_tanhc_is_continuous_at_switch() {
        let below = one_minus_tanhc(0.05 - 1e-12);
        let above = one_minus_tanhc(0.05 + 1e-12);
        assert_relative_eq!(below, above, max_relative = 1e-10);
        assert_eq!(one_minus_tanhc(0.0), 0.0);
    }

    #[test]
    fn h_sum_matches_closed_form() {
        // Σ_{l≥1} 1/((2l−1)² + b²) = π tanh(πb/2)/(4b) gives Σ_l H_μ(k,l) = √μ tanh(√μk)/(2k).
        for &mu in &[1.0, 1e-2, 1e-4] {
            for k in [1usize, 5, 40, 900] {
                let s = kernel_h_sum(&p(mu), k);
                let x = mu.sqrt() * k as f64;
                let exact = mu.sqrt() * x.tanh() / (2.0 * k as f64);
                assert!(s.value <= exact);
                assert!(exact - s.value <= s.tail_bound, "mu={mu} k={k}");
            }
        }
    }

    #[test]
    fn h_sum_bounds_example() {
        let s = kernel_h_sum(&p(1e-4), 1);
        assert!(s.value <= 1e-4 / 2.0);
        assert!(s.value <= 2.0 * 1e-2);
    }
}
