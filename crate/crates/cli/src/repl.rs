use std::io::{self, BufRead, Write};
use std::path::Path;

use prologi_core::engine::{
    solve, ConsoleHandler, HandlerError, InteractionHandler, ScriptedHandler, SolveOptions,
};
use prologi_core::{parse_goal, Program, Term};

use crate::{load_program, warn_unused_binders, Config, EXIT_YES};

pub fn run(program_path: &Path, config: &Config) -> Result<u8, String> {
    let program = load_program(program_path)?;
    let script = config.script()?.map(ScriptedHandler::new);
    let stdin = io::stdin();
    let stdout = io::stdout();
    let console = ConsoleHandler::new(stdin.lock(), stdout.lock());
    repl(&program, console, script, config.solve_options()).map_err(|e| e.to_string())?;
    Ok(EXIT_YES)
}

/// Interactions go to the script when one is given, otherwise to the
/// console that also reads goals.
struct Interactions<'a, R, W> {
    console: &'a mut ConsoleHandler<R, W>,
    script: Option<&'a mut ScriptedHandler>,
}

impl<R: BufRead, W: Write> InteractionHandler for Interactions<'_, R, W> {
    fn choose(&mut self, alternatives: &[String]) -> Result<usize, HandlerError> {
        match &mut self.script {
            Some(s) => s.choose(alternatives),
            None => self.console.choose(alternatives),
        }
    }

    fn read_term(&mut self, variable: &str) -> Result<Term, HandlerError> {
        match &mut self.script {
            Some(s) => s.read_term(variable),
            None => self.console.read_term(variable),
        }
    }
}

fn io_error(e: HandlerError) -> io::Error {
    io::Error::other(e.to_string())
}

/// `?- ` loop. After each answer a line holding `;` asks for the next one;
/// anything else stops the query. Answers are separated by blank lines.
pub fn repl<R: BufRead, W: Write>(
    program: &Program,
    mut console: ConsoleHandler<R, W>,
    mut script: Option<ScriptedHandler>,
    opts: SolveOptions,
) -> io::Result<()> {
    loop {
        write!(console.output(), "?- ")?;
        console.output().flush()?;
        let Some(line) = console.read_line().map_err(io_error)? else {
            writeln!(console.output())?;
            return Ok(());
        };
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if text == "halt" || text == "halt." {
            return Ok(());
        }
        let goal = match parse_goal(text) {
            Ok(g) => g,
            Err(e) => {
                writeln!(console.output(), "error: {e}")?;
                continue;
            }
        };
        warn_unused_binders(&goal);
        let handler = Interactions {
            console: &mut console,
            script: script.as_mut(),
        };
        let mut solutions = solve(program, &goal, handler, opts);
        let mut first = true;
        loop {
            let next = solutions.next();
            let console = &mut *solutions.handler_mut().console;
            match next {
                None => {
                    writeln!(console.output(), "no")?;
                    break;
                }
                Some(Err(e)) => {
                    writeln!(console.output(), "error: {e}")?;
                    break;
                }
                Some(Ok(answer)) => {
                    if !first {
                        writeln!(console.output())?;
                    }
                    first = false;
                    for l in answer.lines() {
                        writeln!(console.output(), "{l}")?;
                    }
                    console.output().flush()?;
                    match console.read_line().map_err(io_error)? {
                        Some(reply) if reply.trim() == ";" => continue,
                        _ => {
                            writeln!(console.output(), "yes")?;
                            break;
                        }
                    }
                }
            }
        }
    }
}
