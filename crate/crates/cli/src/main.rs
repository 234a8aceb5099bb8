//! `semibrick`: command-line front end for `semibrick-core`.
//!
//! Exit codes: 0 success or true, 1 false or negative verdict, 2 usage or
//! input error, 3 budget exhausted.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "semibrick",
    version,
    about = "Bricks, semibricks and their extensions over prime fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone, Debug, Default)]
pub struct Opts {
    /// Quiver file, or the name of a bundled quiver (A1, A2, K2, K3, loop)
    #[arg(long)]
    pub quiver: Option<PathBuf>,
    /// Module file or bundled module name; repeatable
    #[arg(long = "module")]
    pub modules: Vec<PathBuf>,
    /// Semibrick member files (module documents or arrays of them)
    #[arg(long, num_args = 1..)]
    pub semibrick: Vec<PathBuf>,
    /// Dimension vector "a,b,..."; repeatable
    #[arg(long = "dim")]
    pub dims: Vec<String>,
    /// Element of K0(proj) "a,b,..." in the basis of projectives
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Prime for sampling commands
    #[arg(long)]
    pub prime: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub lmax: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Semibrick member to extend through
    #[arg(long, default_value_t = 0)]
    pub member: usize,
    /// Target semibrick size for `grow`
    #[arg(long)]
    pub target: Option<usize>,
    /// F̄_θ oracle mode: auto, exhaustive or fast-path
    #[arg(long, default_value = "auto")]
    pub mode: String,
    /// Emit a JSON document instead of a table
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand)]
pub enum Command {
    /// dim Hom(M, N) with a basis
    Hom(Opts),
    /// dim Ext¹(M, N) (path algebras)
    Ext(Opts),
    /// Whether End(M) is the ground field
    Brick(Opts),
    /// Whether the modules form a semibrick
    Semibrick(Opts),
    /// Randomized isomorphism test with witness
    Iso(Opts),
    /// Whether a brick is open, i.e. exceptional
    Open(Opts),
    /// Whether a dimension vector is a Schur root
    Schur(Opts),
    /// Real/tame/wild classification of a Schur root
    Classify(Opts),
    /// Canonical decomposition of a dimension vector
    Candecomp(Opts),
    /// Indecomposable summands of a module
    Decompose(Opts),
    /// θ(M) for a module
    Theta(Opts),
    /// Sample a presentation of θ and its cokernel
    Present(Opts),
    /// Membership of a module in F̄_θ
    Fbar(Opts),
    /// Search for f ∈ Hom(lθ) with Hom(Coker f, M) = 0
    Fei(Opts),
    /// Extend a semibrick by one brick
    Extend(Opts),
    /// Extend a semibrick repeatedly
    Grow(Opts),
    /// Probe a semibrick for maximality
    Probe(Opts),
    /// Generic dim Hom between dimension vectors
    GenericHom(Opts),
    /// Run the invariant suite
    Selftest(Opts),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
