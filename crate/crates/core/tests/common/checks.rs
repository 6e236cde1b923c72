//! Property checks shared by the proptest suites and the acceptance runner.

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use prologi_core::engine::{fixpoint_oracle, solve, NonInteractive, SolveOptions};
use prologi_core::syntax::{
    render_clause, render_goal, render_program, render_term, Goal, Program,
};
use prologi_core::term::{unify, Term, Var};
use prologi_core::{parse_goal, parse_program, parse_term};

use super::*;

type Check = Result<(), TestCaseError>;

/// Choosing alternative `k` of `uchoose(G1..Gn)` gives the same answers as
/// solving `Gk` directly.
pub fn rule10((program, alts, k): (Program, Vec<Goal>, usize)) -> Check {
    let direct = run_goal(&program, &alts[k - 1], "").map(|a| canon_answers(&a));
    let chosen =
        run_goal(&program, &Goal::Uchoose(alts), &format!("choose {k}")).map(|a| canon_answers(&a));
    prop_assert_eq!(chosen, direct);
    Ok(())
}

/// Answering `read(X, G)` with `t` gives the same answers as `G[X := t]`.
pub fn rule9((program, goal, t): (Program, Goal, Term)) -> Check {
    let x = Var::new("X", 0);
    let substituted = goal.substitute(&x, &t);
    let read = Goal::Read(x, Box::new(goal));
    let direct = run_goal(&program, &substituted, "").map(|a| canon_answers(&a));
    let via_read =
        run_goal(&program, &read, &format!("read {}", render_term(&t))).map(|a| canon_answers(&a));
    prop_assert_eq!(via_read, direct);
    Ok(())
}

pub fn read_case() -> impl Strategy<Value = (Program, Goal, Term)> {
    (
        function_free_program(),
        simple_goal(),
        (0usize..CONSTANTS.len()).prop_map(constant),
    )
}

/// Ground instances, over the oracle's universe, of every answer to `query`.
fn ground_answers(program: &Program, query: &Term, universe: &BTreeSet<Term>) -> BTreeSet<Term> {
    let goal = Goal::atom(query.clone());
    let model = prologi_core::engine::LeastModel {
        atoms: BTreeSet::new(),
        universe: universe.clone(),
    };
    solve(program, &goal, NonInteractive, SolveOptions::default())
        .map(|a| a.expect("function-free programs do not raise"))
        .flat_map(|a| model.ground_instances(&a.bindings.apply(query)))
        .collect()
}

/// The solver's ground answers to each atomic query equal the matching
/// atoms of the least model.
pub fn oracle_equivalence((program, query): (Program, Term)) -> Check {
    let program = with_domain(&program);
    let model = fixpoint_oracle(&program).expect("generator stays in the oracle fragment");
    let mut queries: Vec<Term> = PREDICATES
        .iter()
        .map(|&(name, arity)| {
            let args = (0..arity)
                .map(|i| Term::var(&format!("A{i}"), i as u64))
                .collect();
            Term::compound(name, args)
        })
        .collect();
    queries.push(query);
    for q in &queries {
        let solved = ground_answers(&program, q, &model.universe);
        let expected = model.matching(q);
        prop_assert_eq!(
            &solved,
            &expected,
            "query {} on\n{}",
            render_term(q),
            render_program(&program)
        );
    }
    Ok(())
}

pub fn oracle_case() -> impl Strategy<Value = (Program, Term)> {
    (function_free_program(), atomic_query())
}

/// Replaces some variables of `t` with small terms.
fn instance_of(t: Term) -> impl Strategy<Value = (Term, Term)> {
    let vars = t.vars();
    let n = vars.len();
    prop::collection::vec(prop::option::of(small_term()), n).prop_map(move |repl| {
        let map: HashMap<Var, Term> = vars
            .iter()
            .cloned()
            .zip(repl)
            .filter_map(|(v, r)| r.map(|r| (v, r)))
            .collect();
        let inst = t.map_vars(&mut |v| map.get(v).cloned());
        (t.clone(), inst)
    })
}

/// Independent pairs and pairs where one side is an instance of the other,
/// so that both unifiable and non-unifiable cases are common.
pub fn unify_pair() -> impl Strategy<Value = (Term, Term)> {
    prop_oneof![
        (small_term(), small_term()),
        small_term().prop_flat_map(instance_of),
        small_term()
            .prop_flat_map(instance_of)
            .prop_map(|(a, b)| (b, a)),
    ]
}

/// A pair plus a ground value for each of the variables `X Y Z W`.
pub fn unify_case() -> impl Strategy<Value = (Term, Term, Vec<Term>)> {
    let value = prop::sample::select(vec![
        Term::atom("a"),
        Term::atom("b"),
        Term::int(0),
        Term::compound("f", vec![Term::atom("a")]),
    ]);
    (unify_pair(), prop::collection::vec(value, 4)).prop_map(|((a, b), g)| (a, b, g))
}

/// Idempotence, symmetry, correctness, generality and occurs-check
/// behaviour of the mgu.
pub fn unification((a, b, values): (Term, Term, Vec<Term>)) -> Check {
    let s = unify(&a, &b, true);
    let swapped = unify(&b, &a, true);
    prop_assert_eq!(s.is_some(), swapped.is_some(), "symmetry of success");

    let pair = Term::compound("g", vec![a.clone(), b.clone()]);
    if let (Some(s), Some(t)) = (&s, &swapped) {
        prop_assert!(s.is_idempotent(), "not idempotent: {}", s);
        prop_assert_eq!(s.apply(&s.apply(&pair)), s.apply(&pair));
        prop_assert_eq!(s.apply(&a), s.apply(&b), "not a unifier");
        prop_assert_eq!(canon_term(&s.apply(&pair)), canon_term(&t.apply(&pair)));
        for (v, t) in s.iter() {
            prop_assert!(!t.occurs(v), "occurs check violated for {}", v.name);
        }
    }

    // Generality: a ground unifier must factor through the mgu.
    let env: HashMap<Var, Term> = ["X", "Y", "Z", "W"]
        .iter()
        .zip(values)
        .map(|(n, t)| (Var::new(*n, 0), t))
        .collect();
    let ground = |t: &Term| t.map_vars(&mut |v| env.get(v).cloned());
    if ground(&a) == ground(&b) {
        prop_assert!(
            s.is_some(),
            "a common instance exists but unification failed"
        );
        let s = s.as_ref().unwrap();
        for v in pair.vars() {
            let v = Term::Var(v);
            prop_assert_eq!(ground(&s.apply(&v)), ground(&v));
        }
    }

    // Without the occurs check the result agrees whenever the check would
    // have passed, and cyclic cases are reported as failure.
    let unchecked = unify(&a, &b, false);
    match (&s, &unchecked) {
        (Some(s), Some(u)) => {
            prop_assert_eq!(canon_term(&s.apply(&pair)), canon_term(&u.apply(&pair)))
        }
        (Some(_), None) => prop_assert!(false, "occurs check off lost a unifier"),
        (None, Some(u)) => prop_assert!(false, "occurs check off invented a unifier {}", u),
        (None, None) => {}
    }
    Ok(())
}

pub fn term_round_trip(t: Term) -> Check {
    let text = render_term(&t);
    let back = parse_term(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
    prop_assert_eq!(canon_term(&back), canon_term(&t), "{}", text);
    prop_assert_eq!(render_term(&back), text);
    Ok(())
}

pub fn goal_round_trip(g: Goal) -> Check {
    let text = render_goal(&g);
    let back = parse_goal(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
    prop_assert_eq!(canon_goal(&back), canon_goal(&g), "{}", text);
    Ok(())
}

pub fn program_round_trip(p: Program) -> Check {
    let text = render_program(&p);
    let back = parse_program(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
    prop_assert_eq!(canon_program(&back), canon_program(&p), "{}", text);
    prop_assert_eq!(render_program(&back), text);
    Ok(())
}

/// Rendering a parsed corpus file and parsing it again is the identity.
pub fn corpus_round_trip(src: &str) -> Check {
    let p = parse_program(src).map_err(|e| TestCaseError::fail(e.to_string()))?;
    program_round_trip(p.clone())?;
    for c in &p.clauses {
        let line = render_clause(c);
        let again = parse_program(&line).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(
            canon_program(&again),
            canon_program(&Program::new(vec![c.clone()]))
        );
    }
    Ok(())
}
