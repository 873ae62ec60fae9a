//! Command dispatch and output files.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use shallowwave::evolution::{evolve_with, make_initial, InputSignal, ModalSystem};
use shallowwave::field::{dirichlet_value, neumann_value, FieldGrid, LateralProfile};
use shallowwave::lab::{audit_kernels, audit_resolvent_grid, bmu_gap_table, run_sweep, SweepConfig, PROBE_SEED};
use shallowwave::{SpectralParams, SweepReport};
use tempfile::NamedTempFile;

use crate::config::{Command, Extension, RunConfig, SystemChoice};
use crate::error::CliError;

/// Files produced by a run, plus text for the terminal.
#[derive(Debug)]
pub struct Outcome {
    pub written: Vec<PathBuf>,
    pub message: String,
}

fn model<T>(context: &'static str, r: shallowwave::Result<T>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Model { context, source })
}

fn decades(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|e| 10f64.powi(-e)).collect()
}

pub fn dispatch(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    match cfg.command {
        Command::Simulate => simulate(cfg),
        Command::Sweep => sweep(cfg),
        Command::Verify => verify(cfg),
        Command::Field => field(cfg),
    }
}

fn system(cfg: &RunConfig) -> Result<ModalSystem, CliError> {
    match cfg.system {
        SystemChoice::Limit => Ok(ModalSystem::limit(cfg.k_modes)),
        SystemChoice::Water => {
            let params = model(
                "invalid parameters",
                SpectralParams::new(cfg.mu, cfg.k_modes, cfg.l_modes),
            )?;
            model("water-wave forcing", ModalSystem::water(&params))
        }
    }
}

pub fn trajectory_csv(cfg: &RunConfig) -> Result<String, CliError> {
    let sys = system(cfg)?;
    let z0 = cfg.init.build(cfg.k_modes, cfg.seed);
    let z1 = cfg.init_velocity.build(cfg.k_modes, cfg.seed.wrapping_add(1));
    let init = model("initial data", make_initial(&z0, &z1, &sys))?;
    let signal = model(
        "input signal",
        InputSignal::from_shape(&cfg.signal.0, cfg.dt(), cfg.tau),
    )?;

    let k = cfg.k_modes;
    let mut csv = String::from("t");
    for i in 0..=k {
        let _ = write!(csv, ",zeta_{i}");
    }
    for i in 0..=k {
        let _ = write!(csv, ",zeta_t_{i}");
    }
    csv.push('\n');
    model(
        "evolution",
        evolve_with(&init, &signal, &sys, |_, t, s| {
            let _ = write!(csv, "{t:.16e}");
            for c in s.zeta(&sys).iter().chain(s.alpha().iter()) {
                let _ = write!(csv, ",{c:.16e}");
            }
            csv.push('\n');
        }),
    )?;
    Ok(csv)
}

fn simulate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let csv = trajectory_csv(cfg)?;
    let written = write_outputs(&cfg.out, &[("trajectory.csv", csv)])?;
    Ok(Outcome {
        written,
        message: format!(
            "simulated {} steps of dt = {} (K = {})\n",
            (cfg.tau / cfg.dt()).round(),
            cfg.dt(),
            cfg.k_modes
        ),
    })
}

pub fn sweep_report(cfg: &RunConfig) -> Result<SweepReport, CliError> {
    let sc = SweepConfig {
        mu_list: cfg.mu_list.clone(),
        tau: cfg.tau,
        dt: cfg.dt(),
        k_modes: cfg.k_modes,
        l_modes: cfg.l_modes,
        zeta0: cfg.init.build(cfg.k_modes, cfg.seed),
        zeta1: cfg.init_velocity.build(cfg.k_modes, cfg.seed.wrapping_add(1)),
        signal: cfg.signal.0,
        exclude_largest: cfg.exclude_largest,
    };
    let mut report = model("sweep", run_sweep(&sc))?;
    report.audit = Some(model(
        "kernel audit",
        audit_kernels(&cfg.mu_list, cfg.k_modes, cfg.l_modes),
    )?);
    Ok(report)
}

fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let report = sweep_report(cfg)?;
    let summary = report.summary();
    let written = write_outputs(
        &cfg.out,
        &[("sweep.csv", report.to_csv()), ("summary.txt", summary.clone())],
    )?;
    Ok(Outcome {
        written,
        message: summary,
    })
}

/// Kernel, resolvent and forcing-gap audits; `Ok(false)` when a proven bound fails.
pub fn audit_text(cfg: &RunConfig) -> Result<(String, bool), CliError> {
    let grid = decades(0, 6);
    let kernels = model("kernel audit", audit_kernels(&grid, cfg.audit_k_max, cfg.l_modes))?;
    let resolvents = model(
        "resolvent audit",
        audit_resolvent_grid(&grid, cfg.k_modes, 100, PROBE_SEED),
    )?;
    let gaps = model(
        "forcing gap",
        bmu_gap_table(&decades(2, 6), cfg.audit_k_max, cfg.l_modes),
    )?;

    let mut s = kernels.to_text();
    let _ = writeln!(
        s,
        "\nresolvent audit: 100 unit probes (seed {PROBE_SEED:#x}), K = {}",
        cfg.k_modes
    );
    let _ = writeln!(
        s,
        "{:>10} {:>18} {:>10} {:>14}",
        "mu", "max gap/sqrt(mu)", "violations", "C (G-channel)"
    );
    for r in &resolvents {
        let _ = writeln!(
            s,
            "{:>10.1e} {:>18.6e} {:>10} {:>14.6e}",
            r.mu, r.max_gap_f_ratio, r.violations, r.g_constant
        );
    }
    let _ = writeln!(
        s,
        "\nforcing gap in the dual norm, K = {}, l_modes = {}",
        cfg.audit_k_max, cfg.l_modes
    );
    let _ = writeln!(s, "{:>10} {:>14} {:>16}", "mu", "gap", "gap*mu^(-1/4)");
    for (mu, gap, scaled) in &gaps {
        let _ = writeln!(s, "{mu:>10.1e} {gap:>14.6e} {scaled:>16.6e}");
    }
    let resolvents_ok = resolvents.iter().all(|r| r.violations == 0);
    let ok = kernels.proven_bounds_hold() && resolvents_ok;
    let _ = writeln!(s, "\nall proven bounds hold: {}", if ok { "yes" } else { "NO" });
    Ok((s, ok))
}

fn verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (text, ok) = audit_text(cfg)?;
    let written = write_outputs(&cfg.out, &[("audit.txt", text.clone())])?;
    if !ok {
        return Err(CliError::Audit(format!(
            "a proven bound is violated; see {}",
            written[0].display()
        )));
    }
    Ok(Outcome { written, message: text })
}

pub fn field_grid(cfg: &RunConfig) -> Result<FieldGrid, CliError> {
    let eta = cfg.init.build(cfg.k_modes, cfg.seed);
    let lateral = model("lateral profile", LateralProfile::uniform(cfg.l_modes))?;
    let (mu, v) = (cfg.mu, cfg.velocity);
    let (nx, ny) = cfg.grid;
    let grid = match cfg.extension {
        Extension::Dirichlet => FieldGrid::sample(nx, ny, |x, y| dirichlet_value(&eta, mu, x, y)),
        Extension::Neumann => FieldGrid::sample(nx, ny, |x, y| v * neumann_value(&lateral, mu, x, y)),
        Extension::Sum => FieldGrid::sample(nx, ny, |x, y| {
            dirichlet_value(&eta, mu, x, y) + v * neumann_value(&lateral, mu, x, y)
        }),
    };
    model("field", grid)
}

fn field(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = field_grid(cfg)?;
    let mut buf = Vec::new();
    grid.write_csv(&mut buf).expect("writing to memory");
    let csv = String::from_utf8(buf).expect("ascii csv");
    let written = write_outputs(&cfg.out, &[("field.csv", csv)])?;
    Ok(Outcome {
        written,
        message: format!("sampled a {}x{} grid\n", grid.nx(), grid.ny()),
    })
}

/// Writes each file through a temporary sibling and a rename. If any file
/// fails, the ones already placed by this call are removed.
pub fn write_outputs(dir: &Path, files: &[(&str, String)]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Output {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut placed: Vec<PathBuf> = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        let result = NamedTempFile::new_in(dir)
            .and_then(|mut tmp| {
                tmp.write_all(body.as_bytes())?;
                tmp.as_file().sync_all()?;
                Ok(tmp)
            })
            .and_then(|tmp| tmp.persist(&path).map_err(|e| e.error));
        if let Err(source) = result {
            for p in &placed {
                let _ = fs::remove_file(p);
            }
            return Err(CliError::Output { path, source });
        }
        placed.push(path);
    }
    Ok(placed)
}
