//! Command-line front end. Every subcommand builds a [`Config`], runs it and
//! emits a JSON report. Exit codes: 0 all checks pass, 1 a check failed,
//! 2 configuration or runtime error.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use psdmult::engine::GridSpec;
use psdmult::harness::config::SymbolTestParams;
use psdmult::harness::{self, report_write, Config, MatrixSymbolSpec, Report, Scenario, SymbolSpec};
use psdmult::{Error, Result};

#[derive(Parser)]
#[command(name = "psdmult", version, about = "Positive semidefinite functions and positivity-preserving multipliers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON configuration; command-line flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Grid as `n,N,L`.
    #[arg(long, global = true, value_parser = parse_grid)]
    grid: Option<GridSpec>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// CSV export: the axis-0 slice of the output field for `apply`, the
    /// per-trial records otherwise.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Overrides the sampled-Gram and grid-positivity tolerances.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Sampled-Gram PSD test of a symbol.
    TestPsd(SymbolArg),
    /// Sampled-Gram CPSD test of a symbol.
    TestCpsd(SymbolArg),
    /// Bochner transform of an atomic measure (atoms from --config).
    SynthBochner,
    /// Lévy–Khintchine function and its semigroup.
    SynthLk {
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
    },
    /// Applies a multiplier to a field.
    Apply {
        #[command(flatten)]
        symbol: SymbolArg,
        /// Input field in the binary grid format.
        #[arg(long)]
        input: Option<String>,
        /// Output field in the binary grid format.
        #[arg(long)]
        output: Option<String>,
    },
    /// Parseval ratio, symbol sup and kernel total variation.
    Norms(SymbolArg),
    /// Runs a named verification scenario.
    Verify {
        scenario: String,
        /// Scalar part `a` for example-2-6.
        #[arg(long)]
        a: Option<String>,
        /// Off-diagonal coupling `b` for example-2-6.
        #[arg(long)]
        b: Option<f64>,
        /// Semigroup times.
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
    },
    /// Tries to refute positivity preservation of a symbol.
    Falsify(SymbolArg),
}

#[derive(Args)]
struct SymbolArg {
    /// Symbol family: gaussian, cos, sin, neg-quadratic, pos-quadratic, drift, bump, zero, one.
    #[arg(long)]
    symbol: Option<String>,
}

fn parse_grid(s: &str) -> std::result::Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err("expected n,N,L".into());
    }
    let n = parts[0].parse::<usize>().map_err(|e| e.to_string())?;
    let samples = parts[1].parse::<usize>().map_err(|e| e.to_string())?;
    let length = parts[2].parse::<f64>().map_err(|e| e.to_string())?;
    GridSpec::new(n, samples, length).map_err(|e| e.to_string())
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::ConfigInvalid(msg.into())
}

fn kind_of(cmd: &Command) -> &str {
    match cmd {
        Command::TestPsd(_) => "test-psd",
        Command::TestCpsd(_) => "test-cpsd",
        Command::SynthBochner => "synth-bochner",
        Command::SynthLk { .. } => "synth-lk",
        Command::Apply { .. } => "apply",
        Command::Norms(_) => "norms",
        Command::Verify { scenario, .. } => scenario,
        Command::Falsify(_) => "falsify",
    }
}

fn build_config(cli: &Cli) -> Result<Config> {
    let c = &cli.common;
    let kind = kind_of(&cli.command);
    let mut cfg = match &c.config {
        Some(path) => {
            let cfg = Config::from_json(&std::fs::read_to_string(path)?)?;
            if cfg.scenario.kind() != kind {
                return Err(invalid(format!(
                    "config describes scenario {:?} but the command runs {kind:?}",
                    cfg.scenario.kind()
                )));
            }
            cfg
        }
        None => {
            let seed = c.seed.ok_or_else(|| invalid("--seed is required without --config"))?;
            Config::new(Scenario::default_for(kind)?, seed)
        }
    };
    if let Some(seed) = c.seed {
        cfg.seed = seed;
    }
    if let Some(grid) = &c.grid {
        cfg.grid = grid.clone();
    }
    if let Some(tol) = c.tol {
        cfg.sampling.tol = tol;
        cfg.tolerances.positivity = tol;
    }
    let dim = cfg.grid.dim();
    let named = |s: &Option<String>| s.as_deref().map(|n| SymbolSpec::from_name(n, dim)).transpose();

    match (&cli.command, &mut cfg.scenario) {
        (Command::TestPsd(s), Scenario::TestPsd(p)) | (Command::TestCpsd(s), Scenario::TestCpsd(p)) => {
            if let Some(sym) = named(&s.symbol)? {
                *p = SymbolTestParams { symbol: Some(sym), matrix: None };
            }
        }
        (Command::SynthLk { t }, Scenario::SynthLk(p)) => override_t(&mut p.t, t),
        (Command::Apply { symbol, input, output }, Scenario::Apply(p)) => {
            if let Some(sym) = named(&symbol.symbol)? {
                p.symbol = MatrixSymbolSpec::Scalar { symbol: sym };
            }
            if input.is_some() {
                p.input = input.clone();
            }
            if output.is_some() {
                p.output = output.clone();
            }
            if let Some(csv) = &c.csv {
                p.output_csv = Some(csv.to_string_lossy().into_owned());
            }
        }
        (Command::Norms(s), Scenario::Norms(p)) => {
            if let Some(sym) = named(&s.symbol)? {
                p.symbol = MatrixSymbolSpec::Scalar { symbol: sym };
            }
        }
        (Command::Falsify(s), Scenario::Falsify(p)) => {
            if let Some(sym) = named(&s.symbol)? {
                p.symbol = sym;
            }
        }
        (Command::Verify { a, b, t, .. }, scenario) => match scenario {
            Scenario::TwoComponent(p) => {
                if let Some(sym) = named(a)? {
                    p.a = sym;
                }
                if let Some(b) = b {
                    p.b = *b;
                }
                override_t(&mut p.t, t);
            }
            Scenario::HadamardSemigroup(p) | Scenario::DiagonalSemigroup(p) | Scenario::PsdEntrySemigroup(p) => {
                reject_ab(a, b)?;
                override_t(&mut p.t, t);
            }
            Scenario::LkSuite(p) => {
                reject_ab(a, b)?;
                override_t(&mut p.t, t);
            }
            _ => {
                reject_ab(a, b)?;
                if !t.is_empty() {
                    return Err(invalid(format!("--t does not apply to {kind}")));
                }
            }
        },
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn override_t(dst: &mut Vec<f64>, t: &[f64]) {
    if !t.is_empty() {
        *dst = t.to_vec();
    }
}

fn reject_ab(a: &Option<String>, b: &Option<f64>) -> Result<()> {
    if a.is_some() || b.is_some() {
        return Err(invalid("--a/--b apply only to example-2-6"));
    }
    Ok(())
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    match &cli.common.out {
        Some(path) => {
            report_write(report, path)?;
            for c in &report.checks {
                let value = c.value.map_or("null".to_string(), |v| format!("{v:.3e}"));
                println!("{} {} value={value} tol={:e}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.tol);
            }
        }
        None => println!("{}", report.to_json()),
    }
    if let (Some(path), false) = (&cli.common.csv, matches!(cli.command, Command::Apply { .. })) {
        report.write_trials_csv(BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = build_config(&cli).and_then(|cfg| harness::run(&cfg));
    let code = harness::exit_code(&outcome);
    match outcome {
        Ok(report) => {
            if let Err(e) = emit(&cli, &report) {
                eprintln!("error: {e}");
                return ExitCode::from(harness::EXIT_ERROR as u8);
            }
            for c in report.failed() {
                eprintln!("check failed: {}", c.name);
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(code as u8)
}
