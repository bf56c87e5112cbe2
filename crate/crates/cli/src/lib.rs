//! Command-line front-end for `tsf-core`.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns
//! the exit code together with the rendered report. Exit codes: `0` success
//! or something found, `1` verification failed or nothing found, `2` usage
//! or parse error.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use tsf_core::{ATOM_CAPACITY, DEFAULT_MAX_ATOMS};

mod commands;
pub mod report;
pub mod spec;

pub use report::{Outcome, Report};
pub use spec::{Workspace, WorkspaceSpec};

/// Environment variable overriding the default of `--max-atoms`.
pub const MAX_ATOMS_ENV: &str = "TSF_MAX_ATOMS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("spec error: {0}")]
    Spec(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "tsf", version, about = "Finite Boolean algebras, push-outs and tight filtrations")]
pub struct Cli {
    /// Workspace spec file (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest atom count any builder may produce.
    #[arg(long, global = true, env = MAX_ATOMS_ENV, default_value_t = DEFAULT_MAX_ATOMS)]
    pub max_atoms: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Add wall-clock time to the report (breaks byte-identical output).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Interval form `P⁻ ≤ x_k ≤ P⁺` of `P = 0`.
    Eliminate(EliminateArgs),
    /// Push-out of a declared amalgam input.
    Pushout(PushoutArgs),
    /// Check the push-out conditions on a declared diagram.
    VerifyPushout(DiagramArgs),
    /// Build a filtration from the spec or at random, and verify it.
    BuildFiltration(BuildArgs),
    /// Check every step of a declared filtration; names the first failing step.
    VerifyFiltration(FiltrationArgs),
    /// Subalgebra generated by the step algebras with the given indices.
    Skeleton(SkeletonArgs),
    /// A saturated index set whose skeleton contains the given elements.
    Saturate(SaturateArgs),
    /// Sandwich witnesses in the skeleton of a common index set.
    BracketSolve(BracketSolveArgs),
    /// Search a family of finite sets for a sunflower with `k` petals.
    Sunflower(SunflowerArgs),
    /// Scan a family for either alternative of the dichotomy.
    Dichotomy(DichotomyArgs),
    /// Sup norm of an alternating sum of indicators along a chain.
    ChainNorm(ChainNormArgs),
    /// Quick internal consistency checks.
    Selftest,
}

#[derive(Debug, Args)]
pub struct EliminateArgs {
    /// Term string or declared polynomial name.
    #[arg(long)]
    pub poly: String,
    /// One-based variable index.
    #[arg(long)]
    pub var: usize,
    /// Minimum arity of the polynomial.
    #[arg(long)]
    pub arity: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PushoutArgs {
    #[arg(long)]
    pub amalgam: String,
}

#[derive(Debug, Args)]
pub struct DiagramArgs {
    #[arg(long)]
    pub diagram: String,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Declared filtration to build.
    #[arg(long, conflicts_with = "random")]
    pub filtration: Option<String>,
    /// Seeded random schedule instead of a declared one.
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 4)]
    pub steps: usize,
    #[arg(long, default_value_t = 3)]
    pub max_s_atoms: usize,
    /// Name under which the result is emitted.
    #[arg(long, default_value = "F")]
    pub name: String,
}

#[derive(Debug, Args)]
pub struct FiltrationArgs {
    #[arg(long)]
    pub filtration: String,
}

#[derive(Debug, Args)]
pub struct SkeletonArgs {
    #[arg(long)]
    pub filtration: String,
    /// Comma-separated step indices; empty for none.
    #[arg(long, default_value = "")]
    pub gamma: String,
}

#[derive(Debug, Args)]
pub struct SaturateArgs {
    #[arg(long)]
    pub filtration: String,
    /// Comma-separated element names.
    #[arg(long, default_value = "")]
    pub elements: String,
}

#[derive(Debug, Args)]
pub struct BracketSolveArgs {
    #[arg(long)]
    pub filtration: String,
    /// Comma-separated step indices of the common part.
    #[arg(long, default_value = "")]
    pub delta: String,
    /// One index list per variable, separated by `;`.
    #[arg(long)]
    pub gammas: String,
    /// Comma-separated element names, one per variable.
    #[arg(long)]
    pub elements: String,
    #[arg(long)]
    pub poly: String,
}

#[derive(Debug, Args)]
pub struct SunflowerArgs {
    /// Declared set family.
    #[arg(long, conflicts_with_all = ["sets", "random"])]
    pub family: Option<String>,
    /// Inline family such as `1,2;1,3;1,4`.
    #[arg(long, conflicts_with = "random")]
    pub sets: Option<String>,
    /// Number of distinct random sets to draw.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub set_size: usize,
    #[arg(long, default_value_t = 6)]
    pub universe: u64,
    /// Number of petals.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct DichotomyArgs {
    #[arg(long, requires = "family")]
    pub filtration: Option<String>,
    #[arg(long, conflicts_with = "chain")]
    pub family: Option<String>,
    /// Singletons of a strictly increasing chain of this length.
    #[arg(long)]
    pub chain: Option<usize>,
    /// Defaults to `x1 & !x2` for chains.
    #[arg(long)]
    pub poly: Option<String>,
    /// Minimum subfamily size; defaults to half the family.
    #[arg(long)]
    pub threshold: Option<usize>,
    #[arg(long, default_value_t = 12)]
    pub exhaustive_limit: usize,
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct ChainNormArgs {
    /// Half the chain length, for the generated chain.
    #[arg(long)]
    pub n: Option<usize>,
    /// `nested`, `interleaved` or `perm:` followed by chain positions.
    #[arg(long, default_value = "nested")]
    pub pattern: String,
    /// Comma-separated element names forming an increasing chain.
    #[arg(long, conflicts_with = "n")]
    pub chain: Option<String>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs `tsf` on `args`, which include the program name.
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Invocation { code, stdout: text, stderr: String::new() }
            } else {
                Invocation { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let echoed: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli, &echoed) {
        Ok(report) => {
            let rendered = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            let code = report.outcome.exit_code();
            match &cli.output {
                Some(path) => match std::fs::write(path, &rendered) {
                    Ok(()) => Invocation { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => Invocation {
                        code: 2,
                        stdout: String::new(),
                        stderr: format!("error: cannot write {}: {e}\n", path.display()),
                    },
                },
                None => Invocation { code, stdout: rendered, stderr: String::new() },
            }
        }
        Err(e) => Invocation { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn execute(cli: &Cli, echoed: &[String]) -> Result<Report, CliError> {
    if cli.max_atoms == 0 || cli.max_atoms > ATOM_CAPACITY {
        return Err(CliError::Usage(format!("--max-atoms must be in 1..={ATOM_CAPACITY}")));
    }
    let ws = match &cli.input {
        Some(path) => Workspace::new(WorkspaceSpec::load(path)?, cli.max_atoms)?,
        None => Workspace::empty(),
    };
    let start = Instant::now();
    let mut report = commands::dispatch(cli, &ws)?;
    report.command = report::echo(echoed);
    report.seed = cli.seed;
    if cli.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis());
    }
    Ok(report)
}
