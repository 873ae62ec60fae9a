use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use shallowwave_cli::{dispatch, CliError, Command, RunConfig};

const SPEC_HELP: &str = "\
Initial data (--init, init_velocity): comma-separated sum of
  zero | cos1 (= e_1) | smooth8 (= sum_{k<=8} e_k/k^2) | random (seeded) | mode:K:AMP
Signals (--signal): zero | const:A | pulse (unit on [0,1]) | pulse:START:END:AMP | sine:AMP:FREQ
Config files: one key=value per line, '#' comments. Flags override the file.
Keys: command out mu mu_list k_modes l_modes dt tau init init_velocity signal
      system (water|limit) grid extension (dirichlet|neumann|sum) velocity seed
      exclude_largest audit_k_max
Exit codes: 0 success, 1 usage or configuration error, 2 precision or audit failure.";

#[derive(Parser)]
#[command(name = "shallowwave", version, about = "Water waves in a rectangle against their shallow-water limit", after_help = SPEC_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Evolve one system and write trajectory.csv
    Simulate(Flags),
    /// Sweep mu against the limit system; writes sweep.csv and summary.txt
    Sweep(Flags),
    /// Audit the kernel and resolvent bounds; writes audit.txt
    Verify(Flags),
    /// Sample the velocity potential on a grid; writes field.csv
    Field(Flags),
}

#[derive(Args)]
struct Flags {
    /// key=value config file
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory [default: out]
    #[arg(long, value_name = "DIR")]
    out: Option<String>,
    /// Shallowness parameter in (0, 1] [default: 0.01]
    #[arg(long)]
    mu: Option<String>,
    /// Strictly decreasing list, e.g. 1e-1,1e-2,1e-3
    #[arg(long, value_name = "LIST")]
    mu_list: Option<String>,
    /// Highest cosine mode K [default: 256]
    #[arg(long)]
    k_modes: Option<String>,
    /// Terms of the lateral series [default: 10000]
    #[arg(long)]
    l_modes: Option<String>,
    /// Time step [default: 1e-3 * tau]
    #[arg(long)]
    dt: Option<String>,
    /// Horizon [default: 10]
    #[arg(long)]
    tau: Option<String>,
    /// Field grid size [default: 101,51]
    #[arg(long, value_name = "NX,NY")]
    grid: Option<String>,
    /// Wave-maker signal [default: pulse]
    #[arg(long, value_name = "SPEC")]
    signal: Option<String>,
    /// Initial elevation [default: smooth8]
    #[arg(long, value_name = "SPEC")]
    init: Option<String>,
    /// Any other config key
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn build(command: Command, flags: Flags) -> Result<RunConfig, CliError> {
    let text = match &flags.config {
        Some(path) => fs::read_to_string(path).map_err(|source| CliError::Io {
            context: format!("reading {}", path.display()),
            source,
        })?,
        None => String::new(),
    };
    let mut cfg = RunConfig::from_text(command, &text)?;
    cfg.command = command;
    let named = [
        ("out", flags.out),
        ("mu", flags.mu),
        ("mu_list", flags.mu_list),
        ("k_modes", flags.k_modes),
        ("l_modes", flags.l_modes),
        ("dt", flags.dt),
        ("tau", flags.tau),
        ("grid", flags.grid),
        ("signal", flags.signal),
        ("init", flags.init),
    ];
    for (key, value) in named {
        if let Some(v) = value {
            cfg.set(key, v.trim())?;
        }
    }
    for pair in &flags.set {
        let (key, value) = pair.split_once('=').ok_or_else(|| CliError::Assignment(pair.clone()))?;
        cfg.set(key.trim(), value.trim())?;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let (command, flags) = match cli.command {
        Sub::Simulate(f) => (Command::Simulate, f),
        Sub::Sweep(f) => (Command::Sweep, f),
        Sub::Verify(f) => (Command::Verify, f),
        Sub::Field(f) => (Command::Field, f),
    };
    let result = build(command, flags).and_then(|cfg| dispatch(&cfg));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.message);
            for p in &outcome.written {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
