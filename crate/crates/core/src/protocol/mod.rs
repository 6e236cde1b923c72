//! Line-delimited JSON session protocol.
//!
//! A client loads a program, poses a query, and answers the server's
//! `choice` and `read` requests. Each answer is sent as a `solution`
//! followed by `more`; the client replies `next` or `stop`. Every query
//! ends with `done`, preceded by `fail` when the search is exhausted or by
//! `error` when the query was aborted.

mod client;
mod message;
mod server;

pub use client::{solution_lines, ClientError, ScriptedClient};
pub use message::{decode, encode, DecodeError, ProtocolMessage};
pub use server::{serve, serve_tcp, solution_bindings};
