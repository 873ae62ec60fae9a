//! Browser bindings: surface profiles, the potential field and the dispersion
//! and forcing curves, each returned as a flat `Float64Array`.

use shallowwave::basis::{eval_function, ModalVector, SpectralParams};
use shallowwave::evolution::{evolve_with, make_initial, water_frequency, InputSignal, ModalSystem, SignalShape};
use shallowwave::field::{dirichlet_value, neumann_value, FieldGrid, LateralProfile};
use shallowwave::operators::ntn_forcing;
use wasm_bindgen::prelude::*;

pub const DEMO_K_MODES: usize = 64;
pub const DEMO_L_MODES: usize = 10_000;
const DEMO_DT: f64 = 1e-2;

/// Elevation of both systems at `t`, sampled at `n` points of `[0, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profiles {
    pub water: Vec<f64>,
    pub limit: Vec<f64>,
}

/// `smooth8` at rest, unit pulse on `[0, 1]`, evolved to `t` on both systems.
pub fn profiles(mu: f64, t: f64, n: usize) -> shallowwave::Result<Profiles> {
    if !(0.0..=100.0).contains(&t) {
        return Err(shallowwave::Error::Domain {
            what: "t",
            value: t,
            range: "[0, 100]",
        });
    }
    let params = SpectralParams::new(mu, DEMO_K_MODES, DEMO_L_MODES)?;
    let pulse = SignalShape::Pulse {
        start: 0.0,
        end: 1.0,
        amp: 1.0,
    };
    let steps = (t / DEMO_DT).round() as usize;
    let signal = InputSignal::new(
        DEMO_DT,
        (0..steps).map(|m| pulse.eval((m as f64 + 0.5) * DEMO_DT)).collect(),
    )?;
    let zeta0 = ModalVector::smooth8(DEMO_K_MODES);
    let zeta1 = ModalVector::zeros(DEMO_K_MODES);
    let xs: Vec<f64> = (0..n)
        .map(|i| std::f64::consts::PI * i as f64 / (n.max(2) - 1) as f64)
        .collect();

    let sample = |sys: &ModalSystem| -> shallowwave::Result<Vec<f64>> {
        let mut last = None;
        evolve_with(&make_initial(&zeta0, &zeta1, sys)?, &signal, sys, |i, _, s| {
            if i == steps {
                last = Some(s.zeta(sys));
            }
        })?;
        let z = last.expect("final sample visited");
        xs.iter()
            .map(|&x| eval_function(&z, x.min(std::f64::consts::PI)))
            .collect()
    };
    Ok(Profiles {
        water: sample(&ModalSystem::water(&params)?)?,
        limit: sample(&ModalSystem::limit(DEMO_K_MODES))?,
    })
}

/// `D_μ(smooth8) + velocity·N_μ1` on an `nx × ny` grid, row-major from the bottom.
pub fn potential(mu: f64, nx: usize, ny: usize, velocity: f64) -> shallowwave::Result<FieldGrid> {
    SpectralParams::new(mu, DEMO_K_MODES, DEMO_L_MODES)?;
    let eta = ModalVector::smooth8(DEMO_K_MODES);
    let lateral = LateralProfile::uniform(2_000)?;
    FieldGrid::sample(nx, ny, |x, y| {
        dirichlet_value(&eta, mu, x, y) + velocity * neumann_value(&lateral, mu, x, y)
    })
}

/// `ω_k` and `f_k` for `k = 0..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curves {
    pub omega: Vec<f64>,
    pub forcing: Vec<f64>,
}

pub fn curves(mu: f64, k_max: usize) -> shallowwave::Result<Curves> {
    let params = SpectralParams::new(mu, k_max, DEMO_L_MODES)?;
    Ok(Curves {
        omega: (0..=k_max).map(|k| water_frequency(mu, k)).collect(),
        forcing: ntn_forcing(&params)?.forcing().to_vec(),
    })
}

fn js_err(e: shallowwave::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Water profile followed by limit profile, `n` values each.
#[wasm_bindgen]
pub fn surface_profiles(mu: f64, t: f64, n: usize) -> Result<Vec<f64>, JsError> {
    let p = profiles(mu, t, n).map_err(js_err)?;
    Ok(p.water.into_iter().chain(p.limit).collect())
}

#[wasm_bindgen]
pub fn potential_field(mu: f64, nx: usize, ny: usize, velocity: f64) -> Result<Vec<f64>, JsError> {
    Ok(potential(mu, nx, ny, velocity).map_err(js_err)?.values().to_vec())
}

/// `ω_0..ω_K` followed by `f_0..f_K`.
#[wasm_bindgen]
pub fn dispersion_curves(mu: f64, k_max: usize) -> Result<Vec<f64>, JsError> {
    let c = curves(mu, k_max).map_err(js_err)?;
    Ok(c.omega.into_iter().chain(c.forcing).collect())
}
