//! An interpreter for Horn clauses extended with two interactive goals:
//! `read(X, G)` binds `X` to a term typed by the user before proving `G`,
//! and `uchoose(G1, ..., Gn)` lets the user pick which alternative to prove.

pub mod engine;
pub mod protocol;
pub mod syntax;
pub mod term;

pub use engine::{
    solve, Answer, ChoicePolicy, InteractionHandler, ScriptedHandler, SolveError, SolveOptions,
};
pub use syntax::{parse_goal, parse_program, parse_term, Clause, Goal, ParseError, Program};
pub use term::{unify, Substitution, Term, Var};
