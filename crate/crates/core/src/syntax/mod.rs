//! Concrete syntax: parsing and rendering of programs, goals and terms.
//!
//! ```text
//! program := clause*
//! clause  := term '.' | term ':-' goal '.'
//! goal    := primary (',' primary)*
//! primary := '(' goal ')' | 'read(' VAR ',' goal ')' | 'exists(' VAR ',' goal ')'
//!          | 'uchoose(' primary (',' primary)+ ')' | VAR ['(' args ')'] | term
//! term    := simple (':' simple)*          % right-associative
//! simple  := INT | VAR | atom ['(' args ')'] | '(' term ')'
//! ```
//!
//! `%` starts a line comment. Lowercase identifiers and `'quoted'` names are
//! atoms; identifiers starting with an uppercase letter or `_` are variables.

mod ast;
mod lexer;
mod parser;
mod render;

use std::fmt;

pub use ast::{AtomGoal, Clause, Goal, Program};
pub use parser::{parse_goal, parse_program, parse_term};
pub use render::{
    render_clause, render_goal, render_program, render_substitution, render_term, VarNames,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}
