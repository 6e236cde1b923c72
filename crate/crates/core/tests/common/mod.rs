#![allow(dead_code)]

pub mod checks;

use std::collections::HashMap;
use std::io::{self, BufReader, PipeReader, PipeWriter};
use std::sync::Arc;
use std::thread::JoinHandle;

use proptest::prelude::*;

use prologi_core::engine::{
    parse_script, solve, Answer, ScriptedHandler, SolveError, SolveOptions,
};
use prologi_core::protocol::{serve, solution_lines, ClientError, ScriptedClient};
use prologi_core::syntax::{AtomGoal, Clause, Goal, Program};
use prologi_core::term::{Int, Term, Var};
use prologi_core::{parse_goal, parse_program};

pub const RESTAURANT: &str = include_str!("../../../cli/examples/restaurant.plg");
pub const FLIGHTS: &str = include_str!("../../../cli/examples/flights.plg");
pub const RESTAURANT_UCHOOSE: &str =
    include_str!("../../../cli/examples/goals/restaurant_uchoose.goal");
pub const RESTAURANT_READ: &str = include_str!("../../../cli/examples/goals/restaurant_read.goal");
pub const FLIGHTS_READ: &str = include_str!("../../../cli/examples/goals/flights_read.goal");
pub const FLIGHTS_UCHOOSE: &str = include_str!("../../../cli/examples/goals/flights_uchoose.goal");

/// A scripted run from the shipped corpus with its expected batch output.
pub struct CorpusCase {
    pub name: &'static str,
    /// File name of the program under the corpus directory.
    pub program_file: &'static str,
    pub program: &'static str,
    pub goal: &'static str,
    pub script: &'static str,
    pub expected: &'static str,
}

macro_rules! case {
    ($name:literal, $file:literal, $program:expr, $goal:expr) => {
        CorpusCase {
            name: $name,
            program_file: $file,
            program: $program,
            goal: $goal,
            script: include_str!(concat!("../../../cli/examples/scripts/", $name, ".script")),
            expected: include_str!(concat!("../../../cli/examples/golden/", $name, ".out")),
        }
    };
}

pub const CORPUS: [CorpusCase; 11] = [
    case!(
        "restaurant_choose1",
        "restaurant.plg",
        RESTAURANT,
        RESTAURANT_UCHOOSE
    ),
    case!(
        "restaurant_choose2",
        "restaurant.plg",
        RESTAURANT,
        RESTAURANT_UCHOOSE
    ),
    case!(
        "restaurant_choose3",
        "restaurant.plg",
        RESTAURANT,
        RESTAURANT_UCHOOSE
    ),
    case!(
        "restaurant_choose4",
        "restaurant.plg",
        RESTAURANT,
        RESTAURANT_UCHOOSE
    ),
    case!(
        "restaurant_read_h_o",
        "restaurant.plg",
        RESTAURANT,
        RESTAURANT_READ
    ),
    case!(
        "restaurant_read_f_o",
        "restaurant.plg",
        RESTAURANT,
        RESTAURANT_READ
    ),
    case!(
        "restaurant_read_h_c",
        "restaurant.plg",
        RESTAURANT,
        RESTAURANT_READ
    ),
    case!(
        "restaurant_read_f_c",
        "restaurant.plg",
        RESTAURANT,
        RESTAURANT_READ
    ),
    case!("flights_read_panam", "flights.plg", FLIGHTS, FLIGHTS_READ),
    case!("flights_choose1", "flights.plg", FLIGHTS, FLIGHTS_UCHOOSE),
    case!("flights_choose2", "flights.plg", FLIGHTS, FLIGHTS_UCHOOSE),
];

/// Batch-style text for a list of answers: `Var = term` blocks separated
/// by blank lines, then `yes` or `no`.
pub fn batch_text<I: IntoIterator<Item = Vec<String>>>(answers: I) -> String {
    let blocks: Vec<String> = answers
        .into_iter()
        .map(|lines| lines.iter().map(|l| format!("{l}\n")).collect())
        .collect();
    let verdict = if blocks.is_empty() { "no\n" } else { "yes\n" };
    let mut out = blocks.join("\n");
    out.push_str(verdict);
    out
}

/// In-process run of a corpus case, rendered like the batch runner.
pub fn corpus_in_process(case: &CorpusCase) -> Result<String, SolveError> {
    let program = parse_program(case.program).expect("corpus parses");
    let answers = run_script(&program, case.goal, case.script, SolveOptions::default())?;
    Ok(batch_text(answers.iter().map(Answer::lines)))
}

pub type PipeClient = ScriptedClient<BufReader<PipeReader>, PipeWriter>;

/// Starts a protocol session on a thread, connected by pipes.
pub fn spawn_session(
    program: Option<Arc<Program>>,
    opts: SolveOptions,
) -> (PipeClient, JoinHandle<io::Result<()>>) {
    let (server_in, client_out) = io::pipe().expect("pipe");
    let (client_in, server_out) = io::pipe().expect("pipe");
    let handle =
        std::thread::spawn(move || serve(BufReader::new(server_in), server_out, program, opts));
    (
        ScriptedClient::new(BufReader::new(client_in), client_out),
        handle,
    )
}

/// Runs a corpus case over the wire, rendered like the batch runner.
pub fn corpus_over_wire(case: &CorpusCase) -> Result<String, ClientError> {
    let (mut client, handle) = spawn_session(None, SolveOptions::default());
    let script = parse_script(case.script).expect("script parses");
    let solutions = client.run(case.program, case.goal, &script)?;
    drop(client);
    handle
        .join()
        .expect("server thread")
        .map_err(ClientError::Io)?;
    Ok(batch_text(solutions.iter().map(solution_lines)))
}

pub fn restaurant() -> Program {
    parse_program(RESTAURANT).expect("restaurant corpus parses")
}

pub fn flights() -> Program {
    parse_program(FLIGHTS).expect("flights corpus parses")
}

/// Solves `goal` against `program` with a scripted handler, collecting every
/// answer.
pub fn run_script(
    program: &Program,
    goal: &str,
    script: &str,
    opts: SolveOptions,
) -> Result<Vec<Answer>, SolveError> {
    let goal = parse_goal(goal).expect("goal parses");
    let handler = ScriptedHandler::new(parse_script(script).expect("script parses"));
    solve(program, &goal, handler, opts).collect()
}

pub fn run_goal(program: &Program, goal: &Goal, script: &str) -> Result<Vec<Answer>, SolveError> {
    let handler = ScriptedHandler::new(parse_script(script).expect("script parses"));
    solve(program, goal, handler, SolveOptions::default()).collect()
}

/// Rendered `(Var, term)` pairs of every answer.
pub fn pairs(answers: &[Answer]) -> Vec<Vec<(String, String)>> {
    answers.iter().map(Answer::rendered_bindings).collect()
}

pub fn binding_pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
    list.iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

// ---------------------------------------------------------------------------
// Canonical renaming: two values are equal up to variable serials iff their
// canonical forms are equal.

#[derive(Default)]
pub struct Canon {
    map: HashMap<Var, Var>,
}

impl Canon {
    pub fn var(&mut self, v: &Var) -> Var {
        let n = self.map.len() as u64;
        self.map
            .entry(v.clone())
            .or_insert_with(|| Var::new("V", n))
            .clone()
    }

    pub fn term(&mut self, t: &Term) -> Term {
        t.map_vars(&mut |v| Some(Term::Var(self.var(v))))
    }

    pub fn goal(&mut self, g: &Goal) -> Goal {
        match g {
            Goal::Atom(AtomGoal::Rigid(t)) => Goal::atom(self.term(t)),
            Goal::Atom(AtomGoal::Flex { head, args }) => {
                let head = self.var(head);
                Goal::Atom(AtomGoal::Flex {
                    head,
                    args: args.iter().map(|a| self.term(a)).collect(),
                })
            }
            Goal::Conj(l, r) => {
                let l = self.goal(l);
                Goal::conj(l, self.goal(r))
            }
            Goal::Exists(v, b) => {
                let v = self.var(v);
                Goal::Exists(v, Box::new(self.goal(b)))
            }
            Goal::Read(v, b) => {
                let v = self.var(v);
                Goal::Read(v, Box::new(self.goal(b)))
            }
            Goal::Uchoose(alts) => Goal::Uchoose(alts.iter().map(|a| self.goal(a)).collect()),
        }
    }
}

pub fn canon_term(t: &Term) -> Term {
    Canon::default().term(t)
}

pub fn canon_goal(g: &Goal) -> Goal {
    Canon::default().goal(g)
}

pub fn canon_program(p: &Program) -> Program {
    Program::new(
        p.clauses
            .iter()
            .map(|c| {
                let mut canon = Canon::default();
                let head = canon.term(&c.head);
                Clause {
                    head,
                    body: c.body.as_ref().map(|b| canon.goal(b)),
                }
            })
            .collect(),
    )
}

/// Answer bindings as a substitution: sorted by query variable, with fresh
/// variables renamed canonically in that order.
pub fn canon_answer(a: &Answer) -> Vec<(String, Term)> {
    let mut vars: Vec<&Var> = a
        .order
        .iter()
        .filter(|v| a.bindings.get(v).is_some())
        .collect();
    vars.sort();
    let mut canon = Canon::default();
    vars.into_iter()
        .map(|v| (v.name.to_string(), canon.term(a.bindings.get(v).unwrap())))
        .collect()
}

pub fn canon_answers(answers: &[Answer]) -> Vec<Vec<(String, Term)>> {
    answers.iter().map(canon_answer).collect()
}

// ---------------------------------------------------------------------------
// Random terms for unification.

pub fn small_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        3 => prop::sample::select(vec!["X", "Y", "Z", "W"]).prop_map(|n| Term::var(n, 0)),
        1 => prop::sample::select(vec!["a", "b"]).prop_map(Term::atom),
        1 => (0i64..3).prop_map(Term::int),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::compound("f", vec![t])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::compound("g", vec![a, b])),
            (inner.clone(), inner.clone(), inner)
                .prop_map(|(a, b, c)| Term::compound("h", vec![a, b, c])),
        ]
    })
}

// ---------------------------------------------------------------------------
// Random syntax for parser round trips.

fn var_name() -> impl Strategy<Value = String> {
    "[A-Z][a-z0-9]{0,2}"
}

fn gen_var() -> impl Strategy<Value = Var> {
    (var_name(), 0u64..4).prop_map(|(n, s)| Var::new(n.as_str(), s))
}

fn atom_name() -> impl Strategy<Value = String> {
    prop_oneof![
        4 => "[a-z][a-z0-9_]{0,4}",
        1 => "[ -~]{0,6}",
        1 => Just(":".to_string()),
    ]
    .prop_filter("reserved goal names", |s| {
        !matches!(s.as_str(), "read" | "exists" | "uchoose")
    })
}

fn gen_int() -> impl Strategy<Value = Term> {
    prop_oneof![
        (-50i64..5000).prop_map(Term::int),
        (0i64..100, 2u8..4).prop_map(|(v, w)| Term::Int(Int::with_width(v, w))),
        (0i64..24, 0i64..60).prop_map(|(h, m)| Term::time(h, m)),
    ]
}

pub fn gen_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        gen_var().prop_map(Term::Var),
        atom_name().prop_map(|a| Term::Atom(a.into())),
        gen_int(),
    ];
    leaf.prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            (atom_name(), prop::collection::vec(inner.clone(), 1..4))
                .prop_map(|(f, args)| Term::Compound(f.into(), args)),
            (inner.clone(), inner).prop_map(|(l, r)| Term::Compound(":".into(), vec![l, r])),
        ]
    })
}

fn callable() -> impl Strategy<Value = Term> {
    prop_oneof![
        atom_name().prop_map(|a| Term::Atom(a.into())),
        (atom_name(), prop::collection::vec(gen_term(), 1..4))
            .prop_map(|(f, args)| Term::Compound(f.into(), args)),
    ]
}

pub fn gen_goal() -> impl Strategy<Value = Goal> {
    let leaf = prop_oneof![
        4 => callable().prop_map(Goal::atom),
        1 => (gen_var(), prop::collection::vec(gen_term(), 0..3))
            .prop_map(|(head, args)| Goal::Atom(AtomGoal::Flex { head, args })),
    ];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Goal::conj(l, r)),
            (gen_var(), inner.clone()).prop_map(|(v, b)| Goal::Exists(v, Box::new(b))),
            (gen_var(), inner.clone()).prop_map(|(v, b)| Goal::Read(v, Box::new(b))),
            prop::collection::vec(inner, 2..5).prop_map(Goal::Uchoose),
        ]
    })
}

pub fn gen_clause() -> impl Strategy<Value = Clause> {
    (callable(), prop::option::of(gen_goal())).prop_map(|(head, body)| Clause { head, body })
}

pub fn gen_program() -> impl Strategy<Value = Program> {
    prop::collection::vec(gen_clause(), 0..6).prop_map(Program::new)
}

// ---------------------------------------------------------------------------
// Random function-free programs for solver checks. Predicates are ordered
// and bodies only call lower predicates, so depth-first search terminates.

pub const CONSTANTS: [&str; 8] = ["a", "b", "c", "d", "e", "0", "1", "2"];
pub const PREDICATES: [(&str, usize); 5] = [("p", 1), ("q", 2), ("r", 1), ("s", 2), ("t", 0)];

pub fn constant(i: usize) -> Term {
    let c = CONSTANTS[i];
    match c.parse::<i64>() {
        Ok(n) => Term::int(n),
        Err(_) => Term::atom(c),
    }
}

fn arg() -> impl Strategy<Value = Term> {
    prop_oneof![
        2 => (0usize..CONSTANTS.len()).prop_map(constant),
        3 => prop::sample::select(vec!["X", "Y", "Z"]).prop_map(|n| Term::var(n, 0)),
    ]
}

fn atom_of(pred: usize) -> impl Strategy<Value = Term> {
    let (name, arity) = PREDICATES[pred];
    prop::collection::vec(arg(), arity).prop_map(move |args| Term::compound(name, args))
}

fn atom_below(pred: usize) -> BoxedStrategy<Term> {
    (0..pred).prop_flat_map(atom_of).boxed()
}

fn hierarchical_clause() -> impl Strategy<Value = Clause> {
    (0usize..PREDICATES.len()).prop_flat_map(|pred| {
        let body = if pred == 0 {
            Just(Vec::new()).boxed()
        } else {
            prop::collection::vec(atom_below(pred), 0..=2).boxed()
        };
        (atom_of(pred), body).prop_map(|(head, body)| {
            let body = body.into_iter().map(Goal::atom).reduce(Goal::conj);
            Clause { head, body }
        })
    })
}

/// Up to 10 clauses, at most 2 body atoms each, constants from [`CONSTANTS`].
pub fn function_free_program() -> impl Strategy<Value = Program> {
    prop::collection::vec(hierarchical_clause(), 0..=10).prop_map(Program::new)
}

pub fn atomic_query() -> impl Strategy<Value = Term> {
    (0usize..PREDICATES.len()).prop_flat_map(atom_of)
}

/// A conjunction of one or two atoms.
pub fn simple_goal() -> impl Strategy<Value = Goal> {
    prop::collection::vec(atomic_query(), 1..=2).prop_map(|atoms| {
        atoms
            .into_iter()
            .map(Goal::atom)
            .reduce(Goal::conj)
            .unwrap()
    })
}

/// Program, alternatives `G1..Gn` (n in 2..=4) and a 1-based choice.
pub fn choice_case() -> impl Strategy<Value = (Program, Vec<Goal>, usize)> {
    (
        function_free_program(),
        prop::collection::vec(simple_goal(), 2..=4),
    )
        .prop_flat_map(|(p, alts)| {
            let n = alts.len();
            (Just(p), Just(alts), 1..=n)
        })
}

/// Every constant of [`CONSTANTS`] as a fact of an otherwise unused
/// predicate, so the oracle's universe covers all query constants.
pub fn with_domain(p: &Program) -> Program {
    let mut clauses = p.clauses.clone();
    for i in 0..CONSTANTS.len() {
        clauses.push(Clause::fact(Term::compound("dom", vec![constant(i)])));
    }
    Program::new(clauses)
}
