//! Proof search with interactive goals, interaction handlers, and the
//! bottom-up oracle used to cross-check the solver.

mod handler;
mod index;
mod oracle;
mod script;
mod solve;

use std::num::NonZeroUsize;

pub use handler::{
    render_menu, ConsoleHandler, HandlerError, InteractionHandler, NonInteractive, MAX_REPROMPTS,
};
pub use oracle::{fixpoint_oracle, LeastModel, OracleError};
pub use script::{
    make_scripted_handler, parse_script, render_script, ScriptEntry, ScriptError, ScriptedHandler,
};
pub use solve::{solve, Solutions};

use crate::syntax::VarNames;
use crate::term::{Substitution, Term, Var};

/// What happens when the branch picked by the user has no proof.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ChoicePolicy {
    /// The whole `uchoose` fails.
    #[default]
    Fail,
    /// The user is asked again, with the failed alternative removed.
    Retry,
}

impl std::str::FromStr for ChoicePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fail" => Ok(ChoicePolicy::Fail),
            "retry" => Ok(ChoicePolicy::Retry),
            other => Err(format!(
                "unknown choice policy `{other}` (expected fail or retry)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub occurs_check: bool,
    /// Maximum derivation depth; query atoms are at depth 1.
    pub depth_limit: Option<NonZeroUsize>,
    pub max_solutions: Option<NonZeroUsize>,
    pub choice_policy: ChoicePolicy,
}

impl SolveOptions {
    pub fn with_depth_limit(mut self, limit: usize) -> Self {
        self.depth_limit = NonZeroUsize::new(limit);
        self
    }

    pub fn with_max_solutions(mut self, max: usize) -> Self {
        self.max_solutions = NonZeroUsize::new(max);
        self
    }

    pub fn with_occurs_check(mut self, on: bool) -> Self {
        self.occurs_check = on;
        self
    }

    pub fn with_choice_policy(mut self, policy: ChoicePolicy) -> Self {
        self.choice_policy = policy;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InteractionKind {
    Choose,
    Read,
}

/// One exchange with the user.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionRecord {
    pub kind: InteractionKind,
    /// The rendered menu (one alternative per line) or the variable name.
    pub prompt: String,
    /// The chosen index or the rendered term; the error text when the
    /// input was rejected.
    pub response: String,
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    /// Bindings of the query's free variables.
    pub bindings: Substitution,
    /// Query variables in first-occurrence order.
    pub order: Vec<Var>,
    /// Interactions on the derivation path of this answer, oldest first.
    pub transcript: Vec<InteractionRecord>,
}

impl Answer {
    /// `(name, rendered term)` pairs in query order. Unbound query variables
    /// are omitted.
    pub fn rendered_bindings(&self) -> Vec<(String, String)> {
        let mut vars: Vec<Var> = self.order.clone();
        for (_, t) in self.bindings.iter() {
            vars.extend(t.vars());
        }
        let names = VarNames::for_vars(&vars);
        self.order
            .iter()
            .filter_map(|v| {
                self.bindings
                    .get(v)
                    .map(|t| (v.name.to_string(), names.term(t)))
            })
            .collect()
    }

    /// `Var = term` lines, or the single line `true`.
    pub fn lines(&self) -> Vec<String> {
        let pairs = self.rendered_bindings();
        if pairs.is_empty() {
            return vec!["true".into()];
        }
        pairs
            .into_iter()
            .map(|(v, t)| format!("{v} = {t}"))
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.order
            .iter()
            .find(|v| &*v.name == name)
            .and_then(|v| self.bindings.get(v))
    }

    /// The transcript as a replayable script.
    pub fn script(&self) -> Result<Vec<ScriptEntry>, ScriptError> {
        let text: String = self
            .transcript
            .iter()
            .map(|r| match r.kind {
                InteractionKind::Choose => format!("choose {}\n", r.response),
                InteractionKind::Read => format!("read {}\n", r.response),
            })
            .collect();
        parse_script(&text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("instantiation error: predicate of `{goal}` is unbound at call time")]
    Instantiation { goal: String },
    #[error("type error: `{goal}` is not callable")]
    Type { goal: String },
    #[error("choice index {index} out of range 1..{len}")]
    ChoiceOutOfRange { index: usize, len: usize },
    #[error(transparent)]
    Handler(#[from] HandlerError),
}
