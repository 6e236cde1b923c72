use std::io::{BufRead, Write};

use crate::syntax::parse_term;
use crate::term::Term;

/// Failure reported by an [`InteractionHandler`].
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HandlerError {
    /// The user (or transport) ended the session.
    #[error("session aborted: {0}")]
    Aborted(String),
    /// The user never produced usable input; only the current branch fails.
    #[error("invalid input: {0}")]
    Input(String),
    #[error("script exhausted: no entry left for {request} request")]
    ScriptExhausted { request: &'static str },
    #[error("script mismatch: engine asked for {requested}, script has `{found}`")]
    ScriptMismatch {
        requested: &'static str,
        found: String,
    },
    #[error("choice index {index} out of range 1..{len}")]
    ChoiceOutOfRange { index: usize, len: usize },
    #[error("i/o error: {0}")]
    Io(String),
}

/// The two ways the engine consults a user.
pub trait InteractionHandler {
    /// Picks one of `alternatives` (already rendered). Returns a 1-based
    /// index.
    fn choose(&mut self, alternatives: &[String]) -> Result<usize, HandlerError>;

    /// Supplies a term for the `read` binder named `variable`.
    fn read_term(&mut self, variable: &str) -> Result<Term, HandlerError>;
}

impl<H: InteractionHandler + ?Sized> InteractionHandler for &mut H {
    fn choose(&mut self, alternatives: &[String]) -> Result<usize, HandlerError> {
        (**self).choose(alternatives)
    }

    fn read_term(&mut self, variable: &str) -> Result<Term, HandlerError> {
        (**self).read_term(variable)
    }
}

impl<H: InteractionHandler + ?Sized> InteractionHandler for Box<H> {
    fn choose(&mut self, alternatives: &[String]) -> Result<usize, HandlerError> {
        (**self).choose(alternatives)
    }

    fn read_term(&mut self, variable: &str) -> Result<Term, HandlerError> {
        (**self).read_term(variable)
    }
}

/// Handler for goals that must not interact; any request aborts.
#[derive(Clone, Copy, Debug, Default)]
pub struct NonInteractive;

impl InteractionHandler for NonInteractive {
    fn choose(&mut self, _: &[String]) -> Result<usize, HandlerError> {
        Err(HandlerError::Aborted("no interaction available".into()))
    }

    fn read_term(&mut self, _: &str) -> Result<Term, HandlerError> {
        Err(HandlerError::Aborted("no interaction available".into()))
    }
}

/// How many times a console user is asked again after bad input.
pub const MAX_REPROMPTS: usize = 3;

/// Terminal handler: numbered menus for `uchoose`, `X? ` prompts for `read`.
pub struct ConsoleHandler<R, W> {
    input: R,
    output: W,
}

impl<R: BufRead, W: Write> ConsoleHandler<R, W> {
    pub fn new(input: R, output: W) -> Self {
        ConsoleHandler { input, output }
    }

    pub fn input(&mut self) -> &mut R {
        &mut self.input
    }

    pub fn output(&mut self) -> &mut W {
        &mut self.output
    }

    pub fn into_parts(self) -> (R, W) {
        (self.input, self.output)
    }

    /// One line without its terminator; `None` at end of input.
    pub fn read_line(&mut self) -> Result<Option<String>, HandlerError> {
        let mut line = String::new();
        let n = self
            .input
            .read_line(&mut line)
            .map_err(|e| HandlerError::Io(e.to_string()))?;
        if n == 0 {
            return Ok(None);
        }
        while line.ends_with('\n') || line.ends_with('\r') {
            line.pop();
        }
        Ok(Some(line))
    }

    fn say(&mut self, text: &str) -> Result<(), HandlerError> {
        self.output
            .write_all(text.as_bytes())
            .and_then(|_| self.output.flush())
            .map_err(|e| HandlerError::Io(e.to_string()))
    }

    fn ask(&mut self, prompt: &str) -> Result<String, HandlerError> {
        self.say(prompt)?;
        self.read_line()?
            .ok_or_else(|| HandlerError::Aborted("end of input".into()))
    }
}

/// Menu text shown for a choice request: one `k) alternative` line each.
pub fn render_menu(alternatives: &[String]) -> String {
    alternatives
        .iter()
        .enumerate()
        .map(|(i, a)| format!("{}) {}\n", i + 1, a))
        .collect()
}

impl<R: BufRead, W: Write> InteractionHandler for ConsoleHandler<R, W> {
    fn choose(&mut self, alternatives: &[String]) -> Result<usize, HandlerError> {
        let menu = render_menu(alternatives);
        self.say(&menu)?;
        let n = alternatives.len();
        for _ in 0..=MAX_REPROMPTS {
            let line = self.ask(&format!("choose 1-{n}? "))?;
            match line.trim().trim_end_matches('.').parse::<usize>() {
                Ok(k) if (1..=n).contains(&k) => return Ok(k),
                _ => self.say(&format!("please type a number from 1 to {n}\n"))?,
            }
        }
        Err(HandlerError::Input("no valid choice given".into()))
    }

    fn read_term(&mut self, variable: &str) -> Result<Term, HandlerError> {
        let mut last = String::new();
        for _ in 0..=MAX_REPROMPTS {
            let line = self.ask(&format!("{variable}? "))?;
            match parse_term(&line) {
                Ok(t) => return Ok(t),
                Err(e) => {
                    last = e.to_string();
                    self.say(&format!("{last}\n"))?;
                }
            }
        }
        Err(HandlerError::Input(last))
    }
}
