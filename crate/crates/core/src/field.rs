//! Velocity potential inside the rectangle `[0, π] × [−1, 0]`.
//!
//! The surface part is the harmonic (for `Δ_μ = μ∂²_x + ∂²_y`) extension of a
//! surface trace with a no-flux bottom; the lateral part is the extension of
//! the wave-maker flux with a zero surface trace. Both are cosine series whose
//! hyperbolic ratios are evaluated in exponent-shifted form:
//!
//! ```text
//! cosh(a(y+1))/cosh(a)   = e^{ay} (1 + e^{−2a(y+1)}) / (1 + e^{−2a})
//! cosh(c(x−π))/sinh(cπ)  = e^{−cx} (1 + e^{−2c(π−x)}) / (1 − e^{−2cπ})
//! ```
//!
//! so no intermediate overflows however large `√μ·k` or `1/√μ` get.

use std::f64::consts::{PI, SQRT_2};
use std::io::{self, Write};

use crate::basis::{basis_unchecked, lateral_unchecked, simpson, ModalVector, SpectralParams};
use crate::error::{Error, Result};

/// A scalar field sampled on a uniform boundary-inclusive grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    nx: usize,
    ny: usize,
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Row-major in `y`: `values[j * nx + i]` sits at `(xs[i], ys[j])`.
    values: Vec<f64>,
}

impl FieldGrid {
    /// Samples `f` at `x_i = π·i/(nx−1)`, `y_j = −1 + j/(ny−1)`.
    pub fn sample(nx: usize, ny: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if nx < 2 {
            return Err(Error::parameter("nx", "[2, ∞)", nx));
        }
        if ny < 2 {
            return Err(Error::parameter("ny", "[2, ∞)", ny));
        }
        let xs: Vec<f64> = (0..nx).map(|i| PI * i as f64 / (nx - 1) as f64).collect();
        let ys: Vec<f64> = (0..ny).map(|j| -1.0 + j as f64 / (ny - 1) as f64).collect();
        let mut values = Vec::with_capacity(nx * ny);
        for &y in &ys {
            for &x in &xs {
                values.push(f(x, y));
            }
        }
        if let Some(n) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!(
                "field is not finite at (x, y) = ({}, {})",
                xs[n % nx],
                ys[n / nx]
            )));
        }
        Ok(FieldGrid { nx, ny, xs, ys, values })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// CSV with header `x,y,value`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "x,y,value")?;
        for (j, &y) in self.ys.iter().enumerate() {
            for (i, &x) in self.xs.iter().enumerate() {
                writeln!(w, "{:.16e},{:.16e},{:.16e}", x, y, self.values[j * self.nx + i])?;
            }
        }
        Ok(())
    }
}

/// Coefficients `⟨v, ψ_k⟩`, `k = 1..=L`, of a lateral flux profile on `[−1, 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LateralProfile {
    coeffs: Vec<f64>,
}

impl LateralProfile {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Input("a lateral profile needs at least one mode".into()));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::Input(format!("lateral coefficient {} is not finite", i + 1)));
        }
        Ok(LateralProfile { coeffs })
    }

    /// The wave-maker profile `v ≡ 1`: `⟨1, ψ_k⟩ = 2√2(−1)^{k+1}/((2k−1)π)`.
    pub fn uniform(l_modes: usize) -> Result<Self> {
        Self::new(
            (1..=l_modes)
                .map(|k| {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    sign * 2.0 * SQRT_2 / ((2 * k - 1) as f64 * PI)
                })
                .collect(),
        )
    }

    /// `ψ_mode`.
    pub fn unit(l_modes: usize, mode: usize) -> Result<Self> {
        if mode == 0 || mode > l_modes {
            return Err(Error::Input(format!("lateral mode {mode} outside 1..={l_modes}")));
        }
        let mut c = vec![0.0; l_modes];
        c[mode - 1] = 1.0;
        Self::new(c)
    }

    /// Simpson projection on `panels` (even) subintervals of `[−1, 0]`.
    pub fn project(f: impl Fn(f64) -> f64, l_modes: usize, panels: usize) -> Result<Self> {
        if panels < 2 || panels % 2 == 1 {
            return Err(Error::parameter("panels", "even integers ≥ 2", panels));
        }
        let h = 1.0 / panels as f64;
        let ys: Vec<f64> = (0..=panels).map(|i| -1.0 + i as f64 * h).collect();
        let fs: Vec<f64> = ys.iter().map(|&y| f(y)).collect();
        if fs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("lateral profile is not finite".into()));
        }
        let coeffs = (1..=l_modes)
            .map(|k| {
                let w: Vec<f64> = ys.iter().zip(&fs).map(|(&y, v)| v * lateral_unchecked(k, y)).collect();
                simpson(&w, h)
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn l_modes(&self) -> usize {
        self.coeffs.len()
    }

    /// `⟨v, ψ_k⟩` for `k = 1..=L` (index 0 is `k = 1`).
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `Σ_k v_k ψ_k(y)`.
    pub fn eval(&self, y: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * lateral_unchecked(i + 1, y))
            .sum()
    }
}

/// `cosh(a(y+1))/cosh(a)` for `a ≥ 0`, `y ∈ [−1, 0]` (and slightly beyond).
#[inline]
pub fn dirichlet_ratio(a: f64, y: f64) -> f64 {
    (a * y).exp() * (1.0 + (-2.0 * a * (y + 1.0)).exp()) / (1.0 + (-2.0 * a).exp())
}

/// `cosh(c(x−π))/sinh(cπ)` for `c > 0`, `x ∈ [0, π]` (and slightly beyond).
#[inline]
pub fn neumann_ratio(c: f64, x: f64) -> f64 {
    (-c * x).exp() * (1.0 + (-2.0 * c * (PI - x)).exp()) / -(-2.0 * c * PI).exp_m1()
}

/// `(D_μ η)(x, y) = Σ_k η_k φ_k(x) cosh(√μk(y+1))/cosh(√μk)`.
pub fn dirichlet_value(eta: &ModalVector, mu: f64, x: f64, y: f64) -> f64 {
    let sqrt_mu = mu.sqrt();
    eta.iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(k, c)| c * basis_unchecked(k, x) * dirichlet_ratio(sqrt_mu * k as f64, y))
        .sum()
}

/// `(N_μ v)(x, y) = Σ_k a_k cosh(c_k(x−π)) cos((2k−1)(π/2)(y+1))` with
/// `c_k = (2k−1)π/(2√μ)` and `a_k = 2√(2μ) v_k / ((2k−1)π sinh(c_k π))`.
pub fn neumann_value(v: &LateralProfile, mu: f64, x: f64, y: f64) -> f64 {
    let sqrt_mu = mu.sqrt();
    let mut acc = 0.0;
    for (i, &vk) in v.coeffs.iter().enumerate() {
        let odd = (2 * i + 1) as f64;
        let c = odd * PI / (2.0 * sqrt_mu);
        let ratio = neumann_ratio(c, x);
        if ratio == 0.0 {
            // ratios decrease in k for x > 0; the rest underflows too
            break;
        }
        if vk != 0.0 {
            let a = 2.0 * SQRT_2 * sqrt_mu * vk / (odd * PI);
            acc += a * ratio * (odd * 0.5 * PI * (y + 1.0)).cos();
        }
    }
    acc
}

/// Samples `D_μ η` on an `nx × ny` grid.
pub fn dirichlet_extension(eta: &ModalVector, params: &SpectralParams, nx: usize, ny: usize) -> Result<FieldGrid> {
    let mu = params.mu();
    FieldGrid::sample(nx, ny, |x, y| dirichlet_value(eta, mu, x, y))
}

/// Samples `N_μ v` on an `nx × ny` grid.
pub fn neumann_extension(v: &LateralProfile, params: &SpectralParams, nx: usize, ny: usize) -> Result<FieldGrid> {
    let mu = params.mu();
    FieldGrid::sample(nx, ny, |x, y| neumann_value(v, mu, x, y))
}

/// `nx × ny` points strictly inside the rectangle, uniformly spaced.
pub fn interior_points(nx: usize, ny: usize) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        let y = -((j + 1) as f64) / (ny + 1) as f64;
        for i in 0..nx {
            pts.push((PI * (i + 1) as f64 / (nx + 1) as f64, y));
        }
    }
    pts
}

/// Largest `|μ ∂²_x f + ∂²_y f|` over `points`, by the 5-point stencil with step `h`.
pub fn verify_harmonic(field: impl Fn(f64, f64) -> f64, mu: f64, points: &[(f64, f64)], h: f64) -> Result<f64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::parameter("h", "(0, ∞)", h));
    }
    let mut worst: f64 = 0.0;
    for &(x, y) in points {
        if !(x > 0.0 && x < PI) {
            return Err(Error::Domain {
                what: "x",
                value: x,
                range: "(0, π)",
            });
        }
        if !(y > -1.0 && y < 0.0) {
            return Err(Error::Domain {
                what: "y",
                value: y,
                range: "(−1, 0)",
            });
        }
        let c = field(x, y);
        let dxx = (field(x + h, y) - 2.0 * c + field(x - h, y)) / (h * h);
        let dyy = (field(x, y + h) - 2.0 * c + field(x, y - h)) / (h * h);
        worst = worst.max((mu * dxx + dyy).abs());
    }
    Ok(worst)
}

/// One-sided second-order `∂_y f(x, 0)`.
pub fn surface_flux(field: impl Fn(f64, f64) -> f64, x: f64, h: f64) -> f64 {
    (3.0 * field(x, 0.0) - 4.0 * field(x, -h) + field(x, -2.0 * h)) / (2.0 * h)
}

/// One-sided second-order `∂_y f(x, −1)`.
pub fn bottom_flux(field: impl Fn(f64, f64) -> f64, x: f64, h: f64) -> f64 {
    (-3.0 * field(x, -1.0) + 4.0 * field(x, -1.0 + h) - field(x, -1.0 + 2.0 * h)) / (2.0 * h)
}

/// One-sided second-order `∂_x f(0, y)`.
pub fn left_wall_flux(field: impl Fn(f64, f64) -> f64, y: f64, h: f64) -> f64 {
    (-3.0 * field(0.0, y) + 4.0 * field(h, y) - field(2.0 * h, y)) / (2.0 * h)
}

/// One-sided second-order `∂_x f(π, y)`.
pub fn right_wall_flux(field: impl Fn(f64, f64) -> f64, y: f64, h: f64) -> f64 {
    (3.0 * field(PI, y) - 4.0 * field(PI - h, y) + field(PI - 2.0 * h, y)) / (2.0 * h)
}
