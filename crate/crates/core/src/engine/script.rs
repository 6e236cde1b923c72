//! Scripted interaction: a replayable list of `choose k` / `read <term>`
//! responses.

use std::fmt;

use super::handler::{HandlerError, InteractionHandler};
use crate::syntax::{parse_term, render_term};
use crate::term::Term;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptEntry {
    Choose(usize),
    Read(Term),
}

impl fmt::Display for ScriptEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptEntry::Choose(k) => write!(f, "choose {k}"),
            ScriptEntry::Read(t) => write!(f, "read {}", render_term(t)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("script line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

/// Parses a script file. One directive per line: `choose <k>` with `k` in
/// decimal, or `read <term>`. Lines starting with `#` and blank lines are
/// skipped.
pub fn parse_script(text: &str) -> Result<Vec<ScriptEntry>, ScriptError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| ScriptError {
            line: i + 1,
            message,
        };
        if let Some(k) = line.strip_prefix("choose ") {
            if k.is_empty() || !k.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err(format!("expected decimal index, found `{k}`")));
            }
            let k = k
                .parse()
                .map_err(|_| err(format!("index `{k}` out of range")))?;
            out.push(ScriptEntry::Choose(k));
        } else if let Some(t) = line.strip_prefix("read ") {
            let term = parse_term(t).map_err(|e| err(e.to_string()))?;
            out.push(ScriptEntry::Read(term));
        } else {
            return Err(err(format!(
                "expected `choose <k>` or `read <term>`, found `{line}`"
            )));
        }
    }
    Ok(out)
}

/// Serializes entries in the format accepted by [`parse_script`].
pub fn render_script(entries: &[ScriptEntry]) -> String {
    entries.iter().map(|e| format!("{e}\n")).collect()
}

/// Replays a fixed list of responses in order.
#[derive(Clone, Debug, Default)]
pub struct ScriptedHandler {
    entries: Vec<ScriptEntry>,
    next: usize,
}

pub fn make_scripted_handler(script: Vec<ScriptEntry>) -> ScriptedHandler {
    ScriptedHandler::new(script)
}

impl ScriptedHandler {
    pub fn new(entries: Vec<ScriptEntry>) -> Self {
        ScriptedHandler { entries, next: 0 }
    }

    pub fn from_text(text: &str) -> Result<Self, ScriptError> {
        Ok(Self::new(parse_script(text)?))
    }

    pub fn consumed(&self) -> usize {
        self.next
    }

    pub fn remaining(&self) -> &[ScriptEntry] {
        &self.entries[self.next..]
    }

    fn take(&mut self, request: &'static str) -> Result<&ScriptEntry, HandlerError> {
        let e = self
            .entries
            .get(self.next)
            .ok_or(HandlerError::ScriptExhausted { request })?;
        self.next += 1;
        Ok(e)
    }
}

impl InteractionHandler for ScriptedHandler {
    fn choose(&mut self, alternatives: &[String]) -> Result<usize, HandlerError> {
        match self.take("choose")? {
            &ScriptEntry::Choose(k) => {
                if (1..=alternatives.len()).contains(&k) {
                    Ok(k)
                } else {
                    Err(HandlerError::ChoiceOutOfRange {
                        index: k,
                        len: alternatives.len(),
                    })
                }
            }
            other => Err(HandlerError::ScriptMismatch {
                requested: "choose",
                found: other.to_string(),
            }),
        }
    }

    fn read_term(&mut self, _variable: &str) -> Result<Term, HandlerError> {
        match self.take("read")? {
            ScriptEntry::Read(t) => Ok(t.clone()),
            other => Err(HandlerError::ScriptMismatch {
                requested: "read",
                found: other.to_string(),
            }),
        }
    }
}
