//! `prologi`: batch runner, REPL and protocol server for interactive Horn
//! clause programs.

mod batch;
mod repl;
mod serve;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use prologi_core::engine::{parse_script, ChoicePolicy, ScriptEntry, SolveOptions};
use prologi_core::{parse_program, Goal, Program};

#[derive(Parser, Debug)]
#[command(
    name = "prologi",
    version,
    about = "Horn clause interpreter with read and uchoose"
)]
struct Cli {
    #[command(subcommand)]
    mode: Mode,
}

#[derive(Subcommand, Debug)]
enum Mode {
    /// Solve one goal and print every answer.
    Run {
        program: PathBuf,
        #[command(flatten)]
        config: Config,
    },
    /// Read goals interactively.
    Repl {
        program: PathBuf,
        #[command(flatten)]
        config: Config,
    },
    /// Speak the line-delimited JSON session protocol.
    Serve {
        program: Option<PathBuf>,
        #[command(flatten)]
        config: Config,
    },
}

#[derive(Args, Debug)]
struct Config {
    /// Goal to solve (required by `run`).
    #[arg(long)]
    goal: Option<String>,
    /// File of `choose <k>` / `read <term>` lines answering interactions.
    #[arg(long)]
    script: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    max_solutions: Option<usize>,
    /// Maximum derivation depth; deeper branches fail.
    #[arg(long, value_name = "N")]
    depth_limit: Option<usize>,
    #[arg(long)]
    occurs_check: bool,
    /// What happens when the chosen uchoose branch fails.
    #[arg(long, value_name = "fail|retry", default_value = "fail")]
    choice_policy: ChoicePolicy,
    /// Transport for `serve`.
    #[arg(long, value_name = "stdio|tcp:PORT", default_value = "stdio")]
    protocol: String,
}

impl Config {
    fn solve_options(&self) -> SolveOptions {
        let mut opts = SolveOptions::default()
            .with_occurs_check(self.occurs_check)
            .with_choice_policy(self.choice_policy);
        if let Some(n) = self.max_solutions {
            opts = opts.with_max_solutions(n);
        }
        if let Some(n) = self.depth_limit {
            opts = opts.with_depth_limit(n);
        }
        opts
    }

    fn script(&self) -> Result<Option<Vec<ScriptEntry>>, String> {
        let Some(path) = &self.script else {
            return Ok(None);
        };
        let text = read_file(path)?;
        parse_script(&text)
            .map(Some)
            .map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_program(path: &Path) -> Result<Program, String> {
    let text = read_file(path)?;
    parse_program(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Binders whose variable never occurs in their body.
fn warn_unused_binders(goal: &Goal) {
    for v in goal.unused_binders() {
        eprintln!("warning: variable {} is bound but never used", v.name);
    }
}

pub(crate) const EXIT_YES: u8 = 0;
pub(crate) const EXIT_NO: u8 = 1;
pub(crate) const EXIT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.mode {
        Mode::Run { program, config } => batch::run(program, config),
        Mode::Repl { program, config } => repl::run(program, config),
        Mode::Serve { program, config } => serve::run(program.as_deref(), config),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("prologi: {message}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
