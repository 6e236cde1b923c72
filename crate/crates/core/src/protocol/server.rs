use std::io::{self, BufRead, BufReader, Write};
use std::net::TcpListener;
use std::sync::Arc;
use std::thread;

use indexmap::IndexMap;

use super::message::{decode, encode, DecodeError, ProtocolMessage};
use crate::engine::{solve, Answer, HandlerError, InteractionHandler, SolveOptions};
use crate::syntax::{parse_goal, parse_program, parse_term, Program};
use crate::term::Term;

/// Why a pending interaction was abandoned.
#[derive(Debug)]
enum Interrupt {
    Stop,
    Eof,
    Violation(String),
    Io(io::Error),
}

enum Received {
    Message(ProtocolMessage),
    Malformed(DecodeError),
    Eof,
}

/// One client connection. Implements [`InteractionHandler`] by sending
/// `choice`/`read` requests and blocking on the matching reply.
struct Connection<R, W> {
    reader: R,
    writer: W,
    next_id: u64,
    interrupt: Option<Interrupt>,
}

impl<R: BufRead, W: Write> Connection<R, W> {
    fn send(&mut self, msg: &ProtocolMessage) -> io::Result<()> {
        writeln!(self.writer, "{}", encode(msg))?;
        self.writer.flush()
    }

    fn receive(&mut self) -> io::Result<Received> {
        let mut line = String::new();
        if self.reader.read_line(&mut line)? == 0 {
            return Ok(Received::Eof);
        }
        Ok(match decode(&line) {
            Ok(m) => Received::Message(m),
            Err(e) => Received::Malformed(e),
        })
    }

    fn abort(&mut self, why: Interrupt) -> HandlerError {
        let text = match &why {
            Interrupt::Stop => "stopped by client".to_string(),
            Interrupt::Eof => "connection closed".to_string(),
            Interrupt::Violation(m) => m.clone(),
            Interrupt::Io(e) => e.to_string(),
        };
        self.interrupt = Some(why);
        HandlerError::Aborted(text)
    }

    fn request(&mut self, msg: ProtocolMessage) -> Result<ProtocolMessage, HandlerError> {
        if let Err(e) = self.send(&msg) {
            return Err(self.abort(Interrupt::Io(e)));
        }
        match self.receive() {
            Ok(Received::Message(ProtocolMessage::Stop)) => Err(self.abort(Interrupt::Stop)),
            Ok(Received::Message(reply)) => Ok(reply),
            Ok(Received::Malformed(e)) => Err(self.abort(Interrupt::Violation(e.to_string()))),
            Ok(Received::Eof) => Err(self.abort(Interrupt::Eof)),
            Err(e) => Err(self.abort(Interrupt::Io(e))),
        }
    }

    fn fresh_id(&mut self) -> u64 {
        self.next_id += 1;
        self.next_id
    }

    fn violation(&mut self, message: String) -> HandlerError {
        self.abort(Interrupt::Violation(message))
    }
}

impl<R: BufRead, W: Write> InteractionHandler for Connection<R, W> {
    fn choose(&mut self, alternatives: &[String]) -> Result<usize, HandlerError> {
        let id = self.fresh_id();
        let len = alternatives.len();
        let reply = self.request(ProtocolMessage::Choice {
            id,
            alternatives: alternatives.to_vec(),
        })?;
        match reply {
            ProtocolMessage::Choose { id: got, .. } if got != id => {
                Err(self.violation(format!("reply id {got} does not match request {id}")))
            }
            ProtocolMessage::Choose { index, .. } if index == 0 || index > len => {
                Err(self.violation(format!("index out of range: {index} not in 1..{len}")))
            }
            ProtocolMessage::Choose { index, .. } => Ok(index),
            other => Err(self.violation(format!(
                "expected choose for request {id}, got {}",
                other.kind()
            ))),
        }
    }

    fn read_term(&mut self, variable: &str) -> Result<Term, HandlerError> {
        let id = self.fresh_id();
        let reply = self.request(ProtocolMessage::Read {
            id,
            variable: variable.to_string(),
        })?;
        match reply {
            ProtocolMessage::Term { id: got, .. } if got != id => {
                Err(self.violation(format!("reply id {got} does not match request {id}")))
            }
            ProtocolMessage::Term { text, .. } => {
                parse_term(&text).map_err(|e| self.violation(format!("invalid term: {e}")))
            }
            other => Err(self.violation(format!(
                "expected term for request {id}, got {}",
                other.kind()
            ))),
        }
    }
}

/// Variable bindings as sent in a `solution` message.
pub fn solution_bindings(answer: &Answer) -> IndexMap<String, String> {
    answer.rendered_bindings().into_iter().collect()
}

/// Whether the session continues after a query.
enum After {
    Continue,
    Close,
}

/// Runs one protocol session until the client disconnects. `program` is
/// the initially loaded program, replaced by each successful `load`.
pub fn serve<R: BufRead, W: Write>(
    reader: R,
    writer: W,
    program: Option<Arc<Program>>,
    opts: SolveOptions,
) -> io::Result<()> {
    let mut conn = Connection {
        reader,
        writer,
        next_id: 0,
        interrupt: None,
    };
    let mut program = program;
    loop {
        let msg = match conn.receive()? {
            Received::Eof => return Ok(()),
            Received::Malformed(e) => {
                conn.send(&ProtocolMessage::error(e.to_string()))?;
                continue;
            }
            Received::Message(m) => m,
        };
        match msg {
            ProtocolMessage::Load { program: text } => match parse_program(&text) {
                Ok(p) => program = Some(Arc::new(p)),
                Err(e) => conn.send(&ProtocolMessage::error(e.to_string()))?,
            },
            ProtocolMessage::Query { goal } => {
                if let After::Close = run_query(&mut conn, program.as_deref(), &goal, opts)? {
                    return Ok(());
                }
            }
            other => conn.send(&ProtocolMessage::error(format!(
                "unexpected {} message outside a query",
                other.kind()
            )))?,
        }
    }
}

fn end_with_error<R: BufRead, W: Write>(
    conn: &mut Connection<R, W>,
    message: String,
) -> io::Result<After> {
    conn.send(&ProtocolMessage::error(message))?;
    conn.send(&ProtocolMessage::Done)?;
    Ok(After::Continue)
}

fn run_query<R: BufRead, W: Write>(
    conn: &mut Connection<R, W>,
    program: Option<&Program>,
    goal_text: &str,
    opts: SolveOptions,
) -> io::Result<After> {
    let Some(program) = program else {
        return end_with_error(conn, "no program loaded".into());
    };
    let goal = match parse_goal(goal_text) {
        Ok(g) => g,
        Err(e) => return end_with_error(conn, e.to_string()),
    };
    let mut solutions = solve(program, &goal, &mut *conn, opts);
    loop {
        let next = solutions.next();
        let conn = &mut **solutions.handler_mut();
        match next {
            None => {
                conn.send(&ProtocolMessage::Fail)?;
                conn.send(&ProtocolMessage::Done)?;
                return Ok(After::Continue);
            }
            Some(Ok(answer)) => {
                conn.send(&ProtocolMessage::Solution {
                    bindings: solution_bindings(&answer),
                })?;
                conn.send(&ProtocolMessage::More)?;
                match conn.receive()? {
                    Received::Message(ProtocolMessage::Next) => {}
                    Received::Message(ProtocolMessage::Stop) => {
                        conn.send(&ProtocolMessage::Done)?;
                        return Ok(After::Continue);
                    }
                    Received::Message(other) => {
                        let message = format!("expected next or stop, got {}", other.kind());
                        return end_with_error(conn, message);
                    }
                    Received::Malformed(e) => return end_with_error(conn, e.to_string()),
                    Received::Eof => return Ok(After::Close),
                }
            }
            Some(Err(e)) => {
                return match (conn.interrupt.take(), e) {
                    (Some(Interrupt::Eof), _) => Ok(After::Close),
                    (Some(Interrupt::Io(e)), _) => Err(e),
                    (Some(Interrupt::Stop), _) => {
                        conn.send(&ProtocolMessage::Done)?;
                        Ok(After::Continue)
                    }
                    (Some(Interrupt::Violation(m)), _) => end_with_error(conn, m),
                    (None, e) => end_with_error(conn, e.to_string()),
                };
            }
        }
    }
}

/// Serves every connection accepted by `listener` on its own thread.
pub fn serve_tcp(
    listener: TcpListener,
    program: Option<Arc<Program>>,
    opts: SolveOptions,
) -> io::Result<()> {
    for stream in listener.incoming() {
        let stream = stream?;
        let program = program.clone();
        thread::spawn(move || -> io::Result<()> {
            let reader = BufReader::new(stream.try_clone()?);
            serve(reader, stream, program, opts)
        });
    }
    Ok(())
}
