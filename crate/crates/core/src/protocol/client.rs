use std::io::{self, BufRead, Write};

use indexmap::IndexMap;

use super::message::{decode, encode, DecodeError, ProtocolMessage};
use crate::engine::ScriptEntry;
use crate::syntax::render_term;

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("server closed the connection")]
    Closed,
    #[error("server broke the protocol: {0}")]
    Protocol(String),
    #[error("server error: {0}")]
    Server(String),
    #[error("script has no {0} entry left")]
    ScriptExhausted(&'static str),
}

/// Drives a server with pre-recorded responses, checking that requests
/// arrive one at a time with increasing ids.
pub struct ScriptedClient<R, W> {
    reader: R,
    writer: W,
    last_id: u64,
    /// Every line sent or received, prefixed with `>` or `<`.
    pub transcript: Vec<String>,
}

impl<R: BufRead, W: Write> ScriptedClient<R, W> {
    pub fn new(reader: R, writer: W) -> Self {
        ScriptedClient {
            reader,
            writer,
            last_id: 0,
            transcript: Vec::new(),
        }
    }

    pub fn send(&mut self, msg: &ProtocolMessage) -> io::Result<()> {
        let line = encode(msg);
        writeln!(self.writer, "{line}")?;
        self.writer.flush()?;
        self.transcript.push(format!("> {line}"));
        Ok(())
    }

    pub fn receive(&mut self) -> Result<ProtocolMessage, ClientError> {
        let mut line = String::new();
        if self.reader.read_line(&mut line)? == 0 {
            return Err(ClientError::Closed);
        }
        let msg = decode(&line)?;
        self.transcript.push(format!("< {}", line.trim_end()));
        Ok(msg)
    }

    fn check_id(&mut self, id: u64) -> Result<(), ClientError> {
        if id <= self.last_id {
            return Err(ClientError::Protocol(format!(
                "request id {id} does not exceed previous id {}",
                self.last_id
            )));
        }
        self.last_id = id;
        Ok(())
    }

    /// Loads `program`, runs `goal`, answers requests from `script` and
    /// collects every solution. Asks for all answers.
    pub fn run(
        &mut self,
        program: &str,
        goal: &str,
        script: &[ScriptEntry],
    ) -> Result<Vec<IndexMap<String, String>>, ClientError> {
        self.send(&ProtocolMessage::Load {
            program: program.to_string(),
        })?;
        self.send(&ProtocolMessage::Query {
            goal: goal.to_string(),
        })?;
        let mut script = script.iter();
        let mut solutions = Vec::new();
        let mut error = None;
        loop {
            match self.receive()? {
                ProtocolMessage::Choice { id, alternatives } => {
                    self.check_id(id)?;
                    let index = match script.next() {
                        Some(ScriptEntry::Choose(k)) => *k,
                        _ => return Err(ClientError::ScriptExhausted("choose")),
                    };
                    debug_assert!(!alternatives.is_empty());
                    self.send(&ProtocolMessage::Choose { id, index })?;
                }
                ProtocolMessage::Read { id, .. } => {
                    self.check_id(id)?;
                    let text = match script.next() {
                        Some(ScriptEntry::Read(t)) => render_term(t),
                        _ => return Err(ClientError::ScriptExhausted("read")),
                    };
                    self.send(&ProtocolMessage::Term { id, text })?;
                }
                ProtocolMessage::Solution { bindings } => solutions.push(bindings),
                ProtocolMessage::More => self.send(&ProtocolMessage::Next)?,
                ProtocolMessage::Fail => {}
                ProtocolMessage::Error { message } => error = Some(message),
                ProtocolMessage::Done => break,
                other => {
                    return Err(ClientError::Protocol(format!(
                        "unexpected {} from server",
                        other.kind()
                    )))
                }
            }
        }
        match error {
            Some(message) => Err(ClientError::Server(message)),
            None => Ok(solutions),
        }
    }
}

/// `Var = term` lines of a solution, or `true`.
pub fn solution_lines(bindings: &IndexMap<String, String>) -> Vec<String> {
    if bindings.is_empty() {
        return vec!["true".into()];
    }
    bindings.iter().map(|(v, t)| format!("{v} = {t}")).collect()
}
