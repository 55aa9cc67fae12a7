use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tfq::config::{Command, Format, KernelChoice, MapSpec, Overrides, RunConfig, SignalSpec};
use tfq::run::run;

#[derive(Parser)]
#[command(name = "tfq", version, about = "Wigner, Born-Jordan and Cohen-class phase-space computations")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Wigner distribution of the input signal.
    Wigner(Opts),
    /// Born-Jordan distribution of the input signal.
    Bj(Opts),
    /// Cohen-class distribution for `--kernel`.
    Cohen(Opts),
    /// Symplectic covariance residuals for each `--map`.
    Covariance(Opts),
    /// Four coherent states on a rotating square.
    Diamond(Opts),
    /// Born-Jordan and Weyl quantization consistency.
    QuantizeCheck(Opts),
}

#[derive(Args)]
struct Opts {
    /// TOML run configuration; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Grid points per axis (even).
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    xmax: Option<f64>,
    #[arg(long)]
    hbar: Option<f64>,
    #[arg(long, value_enum)]
    kernel: Option<KernelChoice>,
    /// `gauss(x,p)`, `gauss(x,p,re,im)` joined by `+`, or `file:PATH`.
    #[arg(long, value_parser = |s: &str| s.parse::<SignalSpec>().map_err(|e| e.to_string()))]
    signal: Option<SignalSpec>,
    /// Diamond angles.
    #[arg(long)]
    steps: Option<usize>,
    /// `rotation:θ`, `shear:c`, `scale:L` or `fourier`; repeatable.
    #[arg(long = "map", value_parser = |s: &str| s.parse::<MapSpec>().map_err(|e| e.to_string()))]
    maps: Vec<MapSpec>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Field file formats; repeatable or comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    format: Vec<Format>,
    /// Exit non-zero unless every check passes.
    #[arg(long)]
    assert: bool,
    /// Covariance residual bound for `--assert`.
    #[arg(long)]
    tolerance: Option<f64>,
}

impl Opts {
    fn overrides(self) -> (Option<PathBuf>, Overrides) {
        let o = Overrides {
            n_points: self.grid,
            x_max: self.xmax,
            hbar: self.hbar,
            kernel: self.kernel,
            signal: self.signal,
            steps: self.steps,
            maps: (!self.maps.is_empty()).then_some(self.maps),
            out: self.out,
            formats: (!self.format.is_empty()).then_some(self.format),
            assert: self.assert,
            tolerance: self.tolerance,
        };
        (self.config, o)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (command, opts) = match cli.command {
        Sub::Wigner(o) => (Command::Wigner, o),
        Sub::Bj(o) => (Command::Bj, o),
        Sub::Cohen(o) => (Command::Cohen, o),
        Sub::Covariance(o) => (Command::Covariance, o),
        Sub::Diamond(o) => (Command::Diamond, o),
        Sub::QuantizeCheck(o) => (Command::QuantizeCheck, o),
    };
    let (file, overrides) = opts.overrides();
    let cfg = match RunConfig::resolve(command, file.as_deref(), overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    for path in &outcome.files {
        println!("wrote {}", path.display());
    }
    for c in &outcome.checks {
        println!("{} {}: {:.6e}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.value);
    }
    if cfg.assert && !outcome.all_passed() {
        eprintln!("error: assertion failed");
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}
