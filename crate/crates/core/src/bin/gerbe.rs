use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gerbe_core::cochain::Limits;
use gerbe_core::commands::{self, Options};
use gerbe_core::json::DEFAULT_MAX_ORDER;

/// Computations with multiplicative gerbes over finite groups.
///
/// The payload is a JSON document read from stdin or `--input`; the report
/// is written to stdout. Exit codes: 0 ok, 1 mathematical failure, 2 input
/// error, 3 resource cap.
#[derive(Parser, Debug)]
#[command(name = "gerbe", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Read the payload from this file instead of stdin.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Extra factor on the coefficient level used by the solvers.
    #[arg(long, global = true, env = "GERBE_LEVEL_MULTIPLIER", default_value_t = 1)]
    level_multiplier: u64,
    /// Largest group order accepted.
    #[arg(long, global = true, env = "GERBE_MAX_ORDER", default_value_t = DEFAULT_MAX_ORDER)]
    max_order: usize,
    /// Largest dimension of a linear system.
    #[arg(long, global = true, env = "GERBE_MAX_MATRIX_DIM", default_value_t = Limits::default().max_matrix_dim)]
    max_matrix_dim: usize,
    /// Include witness cochains in the report.
    #[arg(long, global = true, env = "GERBE_EMIT_WITNESS")]
    emit_witness: bool,
    /// Pretty-print the report.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect a group, form a quotient by a central subgroup, or build an extension.
    Group { op: GroupOp },
    /// Invariant factors and generators of H^n(G, Q/Z).
    Cohomology,
    /// Cocycle checks, coboundary solving and class comparison.
    Cocycle { op: CocycleOp },
    /// Gerbes and their representations.
    Gerbe {
        #[command(subcommand)]
        op: GerbeOp,
    },
    /// Fibrewise dual of a gerbe over a central subgroup.
    Dual,
    /// Dualize twice and compare with the input.
    Doubledual,
    /// Crossed modules for a finite abelian fibre.
    Crossmod { op: CrossmodOp },
    /// Spectral sequence data.
    Spectral { op: SpectralOp },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GroupOp {
    Inspect,
    Quotient,
    Extension,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CocycleOp {
    Check,
    Solve,
    Equal,
}

#[derive(Subcommand, Debug)]
enum GerbeOp {
    /// Validate a 3-cocycle and normalize it.
    Make,
    /// Representations on a finite G-set.
    Rep { op: RepOp },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum RepOp {
    Exists,
    Count,
    Canonical,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CrossmodOp {
    Pair,
    Validate,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SpectralOp {
    E2,
    Restrict,
}

fn op_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Group { op } => format!("group.{}", op_name(*op)),
        Command::Cohomology => "cohomology".into(),
        Command::Cocycle { op } => format!("cocycle.{}", op_name(*op)),
        Command::Gerbe { op: GerbeOp::Make } => "gerbe.make".into(),
        Command::Gerbe { op: GerbeOp::Rep { op } } => format!("gerbe.rep.{}", op_name(*op)),
        Command::Dual => "dual".into(),
        Command::Doubledual => "doubledual".into(),
        Command::Crossmod { op } => format!("crossmod.{}", op_name(*op)),
        Command::Spectral { op } => format!("spectral.{}", op_name(*op)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let opts = Options {
        limits: Limits { level_multiplier: g.level_multiplier.max(1), max_matrix_dim: g.max_matrix_dim },
        max_order: g.max_order,
        emit_witness: g.emit_witness,
    };
    let name = command_name(&cli.command);
    let payload = match &g.input {
        Some(path) => std::fs::read_to_string(path),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s)
        }
    };
    let report = match payload {
        Ok(text) => commands::run_str(&name, &text, &opts),
        Err(e) => {
            eprintln!("gerbe: cannot read payload: {e}");
            return ExitCode::from(2);
        }
    };
    let text = if g.pretty {
        serde_json::to_string_pretty(&report.json)
    } else {
        serde_json::to_string(&report.json)
    };
    println!("{}", text.expect("reports serialize"));
    ExitCode::from(report.exit_code as u8)
}
