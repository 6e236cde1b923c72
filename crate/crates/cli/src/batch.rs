use std::io::{self, Write};
use std::path::Path;

use prologi_core::engine::{
    solve, ConsoleHandler, InteractionHandler, ScriptedHandler, SolveError, SolveOptions,
};
use prologi_core::{parse_goal, Goal, Program};

use crate::{load_program, warn_unused_binders, Config, EXIT_NO, EXIT_YES};

pub fn run(program_path: &Path, config: &Config) -> Result<u8, String> {
    let goal_text = config.goal.as_deref().ok_or("run needs --goal")?;
    let program = load_program(program_path)?;
    let goal = parse_goal(goal_text).map_err(|e| format!("goal: {e}"))?;
    warn_unused_binders(&goal);
    let opts = config.solve_options();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match config.script()? {
        Some(script) => print_answers(
            &program,
            &goal,
            ScriptedHandler::new(script),
            opts,
            &mut out,
        ),
        None => {
            let stdin = io::stdin();
            let console = ConsoleHandler::new(stdin.lock(), io::stderr());
            print_answers(&program, &goal, console, opts, &mut out)
        }
    }
}

/// Prints `Var = term` blocks separated by blank lines, then `yes` or
/// `no`.
fn print_answers<H: InteractionHandler>(
    program: &Program,
    goal: &Goal,
    handler: H,
    opts: SolveOptions,
    out: &mut impl Write,
) -> Result<u8, String> {
    let io_err = |e: io::Error| e.to_string();
    let mut solutions = solve(program, goal, handler, opts);
    let mut count = 0usize;
    for answer in solutions.by_ref() {
        let answer = answer.map_err(|e: SolveError| e.to_string())?;
        if count > 0 {
            writeln!(out).map_err(io_err)?;
        }
        for line in answer.lines() {
            writeln!(out, "{line}").map_err(io_err)?;
        }
        out.flush().map_err(io_err)?;
        count += 1;
    }
    if solutions.truncated() {
        eprintln!("warning: depth limit reached; some branches were not explored");
    }
    let verdict = if count > 0 { "yes" } else { "no" };
    writeln!(out, "{verdict}").map_err(io_err)?;
    Ok(if count > 0 { EXIT_YES } else { EXIT_NO })
}
