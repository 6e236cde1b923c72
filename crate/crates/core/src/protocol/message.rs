use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

/// One line of the session protocol. Serialized as a JSON object whose
/// `type` field names the variant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ProtocolMessage {
    /// Client: replace the session's program.
    Load {
        program: String,
    },
    /// Client: start solving a goal.
    Query {
        goal: String,
    },
    /// Server: pick one of `alternatives` (1-based).
    Choice {
        id: u64,
        alternatives: Vec<String>,
    },
    /// Client: reply to `choice`.
    Choose {
        id: u64,
        index: usize,
    },
    /// Server: supply a term for `variable`.
    Read {
        id: u64,
        variable: String,
    },
    /// Client: reply to `read`.
    Term {
        id: u64,
        text: String,
    },
    /// Server: one answer, variables in query order.
    Solution {
        bindings: IndexMap<String, String>,
    },
    /// Server: another answer may follow; reply `next` or `stop`.
    More,
    Next,
    Stop,
    /// Server: no (further) answer.
    Fail,
    Error {
        message: String,
    },
    /// Server: the current query is over.
    Done,
}

impl ProtocolMessage {
    pub fn error(message: impl Into<String>) -> Self {
        ProtocolMessage::Error {
            message: message.into(),
        }
    }

    /// The `type` tag.
    pub fn kind(&self) -> &'static str {
        match self {
            ProtocolMessage::Load { .. } => "load",
            ProtocolMessage::Query { .. } => "query",
            ProtocolMessage::Choice { .. } => "choice",
            ProtocolMessage::Choose { .. } => "choose",
            ProtocolMessage::Read { .. } => "read",
            ProtocolMessage::Term { .. } => "term",
            ProtocolMessage::Solution { .. } => "solution",
            ProtocolMessage::More => "more",
            ProtocolMessage::Next => "next",
            ProtocolMessage::Stop => "stop",
            ProtocolMessage::Fail => "fail",
            ProtocolMessage::Error { .. } => "error",
            ProtocolMessage::Done => "done",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("malformed message at byte {offset}: {message}")]
pub struct DecodeError {
    pub offset: usize,
    pub message: String,
}

/// Serializes `msg` as one line, without the trailing newline.
pub fn encode(msg: &ProtocolMessage) -> String {
    serde_json::to_string(msg).expect("protocol messages always serialize")
}

/// Parses one line. A trailing `\n` or `\r\n` is accepted; unknown fields
/// are ignored.
pub fn decode(line: &str) -> Result<ProtocolMessage, DecodeError> {
    let line = line.strip_suffix('\n').unwrap_or(line);
    let line = line.strip_suffix('\r').unwrap_or(line);
    serde_json::from_str(line).map_err(|e| DecodeError {
        offset: byte_offset(line, e.line(), e.column()),
        message: strip_position(&e.to_string()),
    })
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    (start + column.saturating_sub(1)).min(text.len())
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choose_round_trips() {
        let m = ProtocolMessage::Choose { id: 1, index: 2 };
        let line = encode(&m);
        assert_eq!(line, r#"{"type":"choose","id":1,"index":2}"#);
        assert_eq!(decode(&line).unwrap(), m);
    }

    #[test]
    fn solution_keeps_binding_order() {
        let mut bindings = IndexMap::new();
        bindings.insert("Dt".to_string(), "9:00".to_string());
        bindings.insert("At".to_string(), "10:50".to_string());
        let m = ProtocolMessage::Solution { bindings };
        let line = encode(&m);
        assert_eq!(
            line,
            r#"{"type":"solution","bindings":{"Dt":"9:00","At":"10:50"}}"#
        );
        assert_eq!(decode(&line).unwrap(), m);
    }

    #[test]
    fn unit_messages() {
        assert_eq!(encode(&ProtocolMessage::More), r#"{"type":"more"}"#);
        assert_eq!(
            decode("{\"type\":\"done\"}\n").unwrap(),
            ProtocolMessage::Done
        );
    }

    #[test]
    fn empty_line_is_an_error() {
        let e = decode("").unwrap_err();
        assert_eq!(e.offset, 0);
    }

    #[test]
    fn error_offsets_point_into_the_line() {
        let e = decode(r#"{"type":"choose","id":1,"index":x}"#).unwrap_err();
        assert_eq!(e.offset, 32);
        assert!(decode(r#"{"type":"launch"}"#).is_err());
        assert!(decode(r#"{"type":"choose","id":1}"#).is_err());
        assert!(decode(r#"{"type":"choose","id":1,"index":-1}"#).is_err());
    }

    #[test]
    fn unknown_fields_are_ignored() {
        let m = decode(r#"{"type":"next","trace":true}"#).unwrap();
        assert_eq!(m, ProtocolMessage::Next);
        let m = decode(r#"{"index":3,"id":7,"type":"choose","extra":[1]}"#).unwrap();
        assert_eq!(m, ProtocolMessage::Choose { id: 7, index: 3 });
    }
}
