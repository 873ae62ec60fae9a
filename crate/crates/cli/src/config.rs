//! Flat `key=value` run configuration.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Command-line flags are applied afterwards through the same parser, so a
//! flag and a config line with the same key are interchangeable.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shallowwave::{ModalVector, SignalShape, DEFAULT_K_MODES, DEFAULT_L_MODES};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Sweep,
    Verify,
    Field,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
            Command::Field => "field",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "simulate" => Ok(Command::Simulate),
            "sweep" => Ok(Command::Sweep),
            "verify" => Ok(Command::Verify),
            "field" => Ok(Command::Field),
            _ => Err("one of simulate, sweep, verify, field".into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemChoice {
    Water,
    Limit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    Dirichlet,
    Neumann,
    Sum,
}

/// One term of an initial-data spec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitTerm {
    Zero,
    /// `e_1`.
    Cos1,
    /// `Σ_{k≤8} e_k/k²`.
    Smooth8,
    /// Seeded uniform coefficients damped by `(1+k)^{-2}`.
    Random,
    Mode {
        k: usize,
        amp: f64,
    },
}

/// Sum of [`InitTerm`]s, written as a comma-separated list.
#[derive(Debug, Clone, PartialEq)]
pub struct InitSpec(pub Vec<InitTerm>);

impl InitSpec {
    pub fn zero() -> Self {
        InitSpec(vec![InitTerm::Zero])
    }

    pub fn max_mode(&self) -> usize {
        self.0
            .iter()
            .map(|t| match t {
                InitTerm::Mode { k, .. } => *k,
                _ => 0,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn build(&self, k_modes: usize, seed: u64) -> ModalVector {
        let mut c = vec![0.0; k_modes + 1];
        for term in &self.0 {
            match *term {
                InitTerm::Zero => {}
                InitTerm::Cos1 => c[1] += 1.0,
                InitTerm::Smooth8 => {
                    for (k, v) in ModalVector::smooth8(k_modes).iter().enumerate() {
                        c[k] += v;
                    }
                }
                InitTerm::Random => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    for (k, v) in c.iter_mut().enumerate() {
                        *v += rng.random_range(-1.0..1.0) / ((1 + k) as f64).powi(2);
                    }
                }
                InitTerm::Mode { k, amp } => c[k] += amp,
            }
        }
        ModalVector::new(c).expect("finite terms")
    }
}

impl FromStr for InitSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let accepted = "a comma-separated sum of zero, cos1, smooth8, random, mode:K:AMP";
        let mut terms = Vec::new();
        for raw in s.split(',') {
            let t = raw.trim();
            let term = match t {
                "zero" => InitTerm::Zero,
                "cos1" => InitTerm::Cos1,
                "smooth8" => InitTerm::Smooth8,
                "random" => InitTerm::Random,
                _ => {
                    let parts: Vec<&str> = t.split(':').collect();
                    match parts.as_slice() {
                        ["mode", k, amp] => {
                            let k: usize = k.parse().map_err(|_| accepted.to_string())?;
                            let amp: f64 = amp.parse().map_err(|_| accepted.to_string())?;
                            if !amp.is_finite() {
                                return Err(accepted.into());
                            }
                            InitTerm::Mode { k, amp }
                        }
                        _ => return Err(accepted.into()),
                    }
                }
            };
            terms.push(term);
        }
        Ok(InitSpec(terms))
    }
}

impl fmt::Display for InitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match t {
                InitTerm::Zero => f.write_str("zero")?,
                InitTerm::Cos1 => f.write_str("cos1")?,
                InitTerm::Smooth8 => f.write_str("smooth8")?,
                InitTerm::Random => f.write_str("random")?,
                InitTerm::Mode { k, amp } => write!(f, "mode:{k}:{amp}")?,
            }
        }
        Ok(())
    }
}

/// Wave-maker signal: `zero`, `const:A`, `pulse:START:END:AMP` (bare `pulse`
/// is a unit pulse on `[0, 1]`), `sine:AMP:FREQ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalSpec(pub SignalShape);

impl FromStr for SignalSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let accepted = "zero, const:A, pulse, pulse:START:END:AMP or sine:AMP:FREQ";
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |v: &str| -> Result<f64, String> {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| accepted.to_string())
        };
        let shape = match parts.as_slice() {
            ["zero"] => SignalShape::Zero,
            ["const", a] => SignalShape::Constant(num(a)?),
            ["pulse"] => SignalShape::Pulse {
                start: 0.0,
                end: 1.0,
                amp: 1.0,
            },
            ["pulse", s, e, a] => {
                let (start, end) = (num(s)?, num(e)?);
                if end < start {
                    return Err(accepted.into());
                }
                SignalShape::Pulse {
                    start,
                    end,
                    amp: num(a)?,
                }
            }
            ["sine", a, w] => SignalShape::Sine {
                amp: num(a)?,
                freq: num(w)?,
            },
            _ => return Err(accepted.into()),
        };
        Ok(SignalSpec(shape))
    }
}

impl fmt::Display for SignalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            SignalShape::Zero => f.write_str("zero"),
            SignalShape::Constant(a) => write!(f, "const:{a}"),
            SignalShape::Pulse { start, end, amp } => write!(f, "pulse:{start}:{end}:{amp}"),
            SignalShape::Sine { amp, freq } => write!(f, "sine:{amp}:{freq}"),
        }
    }
}

/// Everything a run needs, validated.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub out: PathBuf,
    pub mu: f64,
    pub mu_list: Vec<f64>,
    pub k_modes: usize,
    pub l_modes: usize,
    /// `None` means `1e-3·tau`.
    pub dt: Option<f64>,
    pub tau: f64,
    pub init: InitSpec,
    pub init_velocity: InitSpec,
    pub signal: SignalSpec,
    pub system: SystemChoice,
    pub grid: (usize, usize),
    pub extension: Extension,
    pub velocity: f64,
    pub seed: u64,
    pub exclude_largest: bool,
    pub audit_k_max: usize,
}

pub const KEYS: &[&str] = &[
    "command",
    "out",
    "mu",
    "mu_list",
    "k_modes",
    "l_modes",
    "dt",
    "tau",
    "init",
    "init_velocity",
    "signal",
    "system",
    "grid",
    "extension",
    "velocity",
    "seed",
    "exclude_largest",
    "audit_k_max",
];

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        RunConfig {
            command,
            out: PathBuf::from("out"),
            mu: 1e-2,
            mu_list: vec![1e-1, 1e-2, 1e-3, 1e-4],
            k_modes: DEFAULT_K_MODES,
            l_modes: DEFAULT_L_MODES,
            dt: None,
            tau: 10.0,
            init: InitSpec(vec![InitTerm::Smooth8]),
            init_velocity: InitSpec::zero(),
            signal: SignalSpec(SignalShape::Pulse {
                start: 0.0,
                end: 1.0,
                amp: 1.0,
            }),
            system: SystemChoice::Water,
            grid: (101, 51),
            extension: Extension::Sum,
            velocity: 1.0,
            seed: 2021,
            exclude_largest: true,
            audit_k_max: 10_000,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt.unwrap_or(1e-3 * self.tau)
    }

    /// Parses a config file body on top of the defaults for `command`.
    pub fn from_text(command: Command, text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::defaults(command);
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| CliError::Syntax {
                line: n + 1,
                text: line.to_string(),
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    /// Assigns one key; every value is range-checked here.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        fn bad(key: &str, range: &str, value: &str) -> CliError {
            CliError::Range {
                key: key.to_string(),
                range: range.to_string(),
                value: value.to_string(),
            }
        }
        let float = |range: &str, ok: &dyn Fn(f64) -> bool| -> Result<f64, CliError> {
            value
                .parse::<f64>()
                .ok()
                .filter(|v| ok(*v))
                .ok_or_else(|| bad(key, range, value))
        };
        let count = |range: &str, min: usize| -> Result<usize, CliError> {
            value
                .parse::<usize>()
                .ok()
                .filter(|v| *v >= min)
                .ok_or_else(|| bad(key, range, value))
        };
        let unit = |v: f64| v > 0.0 && v <= 1.0;
        match key {
            "command" => self.command = value.parse().map_err(|r: String| bad(key, &r, value))?,
            "out" => {
                if value.is_empty() {
                    return Err(bad(key, "a nonempty path", value));
                }
                self.out = PathBuf::from(value)
            }
            "mu" => self.mu = float("(0, 1]", &unit)?,
            "mu_list" => {
                let range = "a strictly decreasing comma-separated list in (0, 1]";
                let list: Vec<f64> = value
                    .split(',')
                    .map(|v| v.trim().parse::<f64>().ok().filter(|m| unit(*m)))
                    .collect::<Option<_>>()
                    .ok_or_else(|| bad(key, range, value))?;
                if list.is_empty() || list.windows(2).any(|w| w[1] >= w[0]) {
                    return Err(bad(key, range, value));
                }
                self.mu_list = list;
            }
            "k_modes" => self.k_modes = count("[1, ∞)", 1)?,
            "l_modes" => self.l_modes = count("[1, ∞)", 1)?,
            "dt" => self.dt = Some(float("(0, tau]", &|v| v > 0.0 && v.is_finite())?),
            "tau" => self.tau = float("(0, ∞)", &|v| v > 0.0 && v.is_finite())?,
            "init" => self.init = value.parse().map_err(|r: String| bad(key, &r, value))?,
            "init_velocity" => self.init_velocity = value.parse().map_err(|r: String| bad(key, &r, value))?,
            "signal" => self.signal = value.parse().map_err(|r: String| bad(key, &r, value))?,
            "system" => {
                self.system = match value {
                    "water" => SystemChoice::Water,
                    "limit" => SystemChoice::Limit,
                    _ => return Err(bad(key, "water or limit", value)),
                }
            }
            "grid" => {
                let range = "NX,NY with both at least 2";
                let (nx, ny) = value.split_once(',').ok_or_else(|| bad(key, range, value))?;
                let parse = |v: &str| v.trim().parse::<usize>().ok().filter(|n| *n >= 2);
                self.grid = (
                    parse(nx).ok_or_else(|| bad(key, range, value))?,
                    parse(ny).ok_or_else(|| bad(key, range, value))?,
                );
            }
            "extension" => {
                self.extension = match value {
                    "dirichlet" => Extension::Dirichlet,
                    "neumann" => Extension::Neumann,
                    "sum" => Extension::Sum,
                    _ => return Err(bad(key, "dirichlet, neumann or sum", value)),
                }
            }
            "velocity" => self.velocity = float("finite reals", &|v| v.is_finite())?,
            "seed" => self.seed = value.parse().map_err(|_| bad(key, "[0, 2^64)", value))?,
            "exclude_largest" => self.exclude_largest = value.parse().map_err(|_| bad(key, "true or false", value))?,
            "audit_k_max" => self.audit_k_max = count("[1, ∞)", 1)?,
            _ => {
                return Err(CliError::UnknownKey {
                    key: key.to_string(),
                    accepted: KEYS.join(", "),
                })
            }
        }
        Ok(())
    }

    /// Checks that only make sense once every key is known.
    pub fn validate(&self) -> Result<(), CliError> {
        let dt = self.dt();
        if dt > self.tau {
            return Err(CliError::Range {
                key: "dt".into(),
                range: "(0, tau]".into(),
                value: dt.to_string(),
            });
        }
        for (key, spec) in [("init", &self.init), ("init_velocity", &self.init_velocity)] {
            if spec.max_mode() > self.k_modes {
                return Err(CliError::Range {
                    key: key.into(),
                    range: format!("modes 0..={} (k_modes)", self.k_modes),
                    value: spec.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Canonical `key=value` text; parsing it back gives an equal config.
    pub fn to_text(&self) -> String {
        let mut lines = vec![
            format!("command={}", self.command.name()),
            format!("out={}", self.out.display()),
            format!("mu={}", self.mu),
            format!(
                "mu_list={}",
                self.mu_list.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
            ),
            format!("k_modes={}", self.k_modes),
            format!("l_modes={}", self.l_modes),
        ];
        if let Some(dt) = self.dt {
            lines.push(format!("dt={dt}"));
        }
        lines.extend([
            format!("tau={}", self.tau),
            format!("init={}", self.init),
            format!("init_velocity={}", self.init_velocity),
            format!("signal={}", self.signal),
            format!(
                "system={}",
                match self.system {
                    SystemChoice::Water => "water",
                    SystemChoice::Limit => "limit",
                }
            ),
            format!("grid={},{}", self.grid.0, self.grid.1),
            format!(
                "extension={}",
                match self.extension {
                    Extension::Dirichlet => "dirichlet",
                    Extension::Neumann => "neumann",
                    Extension::Sum => "sum",
                }
            ),
            format!("velocity={}", self.velocity),
            format!("seed={}", self.seed),
            format!("exclude_largest={}", self.exclude_largest),
            format!("audit_k_max={}", self.audit_k_max),
        ]);
        let mut s = lines.join("\n");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = RunConfig::from_text(Command::Verify, "").unwrap();
        assert_eq!(cfg.k_modes, 256);
        assert_eq!(cfg.l_modes, 10_000);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn mu_zero_is_rejected_with_range() {
        let err = RunConfig::from_text(Command::Simulate, "mu = 0").unwrap_err();
        assert!(err.to_string().starts_with("mu must be in (0, 1]"), "{err}");
    }

    #[test]
    fn mu_list_parses() {
        let cfg = RunConfig::from_text(Command::Sweep, "mu_list = 1e-1,1e-2,1e-3  # three decades").unwrap();
        assert_eq!(cfg.mu_list, vec![1e-1, 1e-2, 1e-3]);
        assert!(RunConfig::from_text(Command::Sweep, "mu_list = 1e-2,1e-1").is_err());
    }

    #[test]
    fn unknown_key_and_bad_syntax() {
        let err = RunConfig::from_text(Command::Sweep, "nu = 3").unwrap_err();
        assert!(err.to_string().contains("unknown key `nu`"));
        assert!(matches!(
            RunConfig::from_text(Command::Sweep, "\n\nmu 3").unwrap_err(),
            CliError::Syntax { line: 3, .. }
        ));
    }

    #[test]
    fn specs_round_trip() {
        for s in ["zero", "const:2.5", "pulse:0:1:1", "sine:0.5:3"] {
            assert_eq!(s.parse::<SignalSpec>().unwrap().to_string(), s);
        }
        assert_eq!("pulse".parse::<SignalSpec>().unwrap().to_string(), "pulse:0:1:1");
        for s in ["smooth8", "cos1,mode:3:-0.25", "random,mode:0:1"] {
            assert_eq!(s.parse::<InitSpec>().unwrap().to_string(), s);
        }
        assert!("mode:x:1".parse::<InitSpec>().is_err());
        assert!("pulse:1:0:1".parse::<SignalSpec>().is_err());
    }

    #[test]
    fn init_presets() {
        let v = "cos1,mode:3:2".parse::<InitSpec>().unwrap().build(4, 0);
        assert_eq!(v.coeffs(), &[0.0, 1.0, 0.0, 2.0, 0.0]);
        let r1 = InitSpec(vec![InitTerm::Random]).build(8, 7);
        let r2 = InitSpec(vec![InitTerm::Random]).build(8, 7);
        assert_eq!(r1, r2);
    }

    #[test]
    fn init_mode_beyond_truncation_is_rejected() {
        let cfg = RunConfig::from_text(Command::Simulate, "k_modes=4\ninit=mode:5:1").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_round_trip() {
        let text = "mu=0.03\nmu_list=0.5,0.05\ndt=0.002\ntau=3\ninit=cos1,mode:2:0.1\nsignal=sine:1:2\nsystem=limit\ngrid=7,5\nextension=neumann\nvelocity=-0.5\nseed=9\nexclude_largest=false";
        let cfg = RunConfig::from_text(Command::Field, text).unwrap();
        let again = RunConfig::from_text(Command::Simulate, &cfg.to_text()).unwrap();
        assert_eq!(cfg, again);
        let d = RunConfig::defaults(Command::Sweep);
        assert_eq!(RunConfig::from_text(Command::Verify, &d.to_text()).unwrap(), d);
    }
}
