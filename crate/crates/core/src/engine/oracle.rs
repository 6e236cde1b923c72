//! Naive bottom-up least-model computation for function-free programs.
//!
//! Shares nothing with the top-down solver beyond the AST: matching is done
//! here against ground facts only, and the model is grown until nothing
//! changes.

use std::collections::{BTreeSet, HashMap};

use crate::syntax::{render_clause, AtomGoal, Clause, Goal, Program};
use crate::term::{Term, Var};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("clause `{0}` has a non-constant compound argument")]
    NotFunctionFree(String),
    #[error("clause `{0}` uses read, uchoose or a flex goal")]
    Interactive(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LeastModel {
    pub atoms: BTreeSet<Term>,
    /// Every constant in the program.
    pub universe: BTreeSet<Term>,
}

impl LeastModel {
    /// Atoms of the model that are instances of `pattern`.
    pub fn matching(&self, pattern: &Term) -> BTreeSet<Term> {
        self.atoms
            .iter()
            .filter(|a| match_term(pattern, a, &mut HashMap::new()))
            .cloned()
            .collect()
    }

    /// Ground instances of `t` obtained by replacing its variables with
    /// constants of the universe.
    pub fn ground_instances(&self, t: &Term) -> BTreeSet<Term> {
        let vars = t.vars();
        let mut out = BTreeSet::new();
        let universe: Vec<&Term> = self.universe.iter().collect();
        for_each_assignment(&vars, &universe, &mut HashMap::new(), &mut |env| {
            out.insert(subst(t, env));
        });
        out
    }
}

/// `:` literals such as `9:00` count as constants.
fn is_constant(t: &Term) -> bool {
    match t {
        Term::Atom(_) | Term::Int(_) => true,
        Term::Compound(f, args) => &**f == ":" && args.len() == 2 && args.iter().all(is_constant),
        Term::Var(_) => false,
    }
}

fn check_atom(t: &Term, clause: &Clause) -> Result<(), OracleError> {
    let args: &[Term] = match t {
        Term::Atom(_) => &[],
        Term::Compound(_, args) => args,
        _ => return Err(OracleError::NotFunctionFree(render_clause(clause))),
    };
    if args.iter().all(|a| a.is_var() || is_constant(a)) {
        Ok(())
    } else {
        Err(OracleError::NotFunctionFree(render_clause(clause)))
    }
}

/// Flattens a body into its atoms, giving each `exists` binder its own
/// variable.
fn body_atoms(
    g: &Goal,
    clause: &Clause,
    fresh: &mut u64,
    scope: &mut Vec<(Var, Var)>,
    out: &mut Vec<Term>,
) -> Result<(), OracleError> {
    match g {
        Goal::Atom(AtomGoal::Rigid(t)) => {
            check_atom(t, clause)?;
            out.push(t.map_vars(&mut |v| {
                scope
                    .iter()
                    .rev()
                    .find(|(o, _)| o == v)
                    .map(|(_, n)| Term::Var(n.clone()))
            }));
            Ok(())
        }
        Goal::Conj(l, r) => {
            body_atoms(l, clause, fresh, scope, out)?;
            body_atoms(r, clause, fresh, scope, out)
        }
        Goal::Exists(v, body) => {
            *fresh -= 1;
            scope.push((v.clone(), Var::new(v.name.clone(), *fresh)));
            let r = body_atoms(body, clause, fresh, scope, out);
            scope.pop();
            r
        }
        Goal::Atom(AtomGoal::Flex { .. }) | Goal::Read(..) | Goal::Uchoose(_) => {
            Err(OracleError::Interactive(render_clause(clause)))
        }
    }
}

fn collect_constants(t: &Term, out: &mut BTreeSet<Term>) {
    if let Term::Compound(_, args) = t {
        for a in args {
            if is_constant(a) {
                out.insert(a.clone());
            }
        }
    }
}

fn match_term(pattern: &Term, ground: &Term, env: &mut HashMap<Var, Term>) -> bool {
    match (pattern, ground) {
        (Term::Var(v), g) => match env.get(v) {
            Some(bound) => bound == g,
            None => {
                env.insert(v.clone(), g.clone());
                true
            }
        },
        (Term::Compound(f, xs), Term::Compound(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, env))
        }
        (p, g) => p == g,
    }
}

fn subst(t: &Term, env: &HashMap<Var, Term>) -> Term {
    t.map_vars(&mut |v| env.get(v).cloned())
}

fn for_each_assignment(
    vars: &[Var],
    universe: &[&Term],
    env: &mut HashMap<Var, Term>,
    f: &mut impl FnMut(&HashMap<Var, Term>),
) {
    match vars.split_first() {
        None => f(env),
        Some((v, rest)) => {
            if env.contains_key(v) {
                return for_each_assignment(rest, universe, env, f);
            }
            for c in universe {
                env.insert(v.clone(), (*c).clone());
                for_each_assignment(rest, universe, env, f);
            }
            env.remove(v);
        }
    }
}

/// Extends `env` in every way that maps all of `body` into `model`.
fn join(
    body: &[Term],
    model: &BTreeSet<Term>,
    env: &mut HashMap<Var, Term>,
    f: &mut impl FnMut(&HashMap<Var, Term>),
) {
    match body.split_first() {
        None => f(env),
        Some((atom, rest)) => {
            for fact in model {
                let mut next = env.clone();
                if match_term(atom, fact, &mut next) {
                    join(rest, model, &mut next, f);
                }
            }
        }
    }
}

/// Least Herbrand model of a function-free, interaction-free program.
pub fn fixpoint_oracle(program: &Program) -> Result<LeastModel, OracleError> {
    let mut rules = Vec::new();
    let mut universe = BTreeSet::new();
    for clause in &program.clauses {
        check_atom(&clause.head, clause)?;
        collect_constants(&clause.head, &mut universe);
        let mut body = Vec::new();
        if let Some(g) = &clause.body {
            let mut fresh = u64::MAX;
            body_atoms(g, clause, &mut fresh, &mut Vec::new(), &mut body)?;
        }
        for atom in &body {
            collect_constants(atom, &mut universe);
        }
        let mut vars = clause.head.vars();
        for atom in &body {
            for v in atom.vars() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        rules.push((clause.head.clone(), body, vars));
    }

    let constants: Vec<&Term> = universe.iter().collect();
    let mut model = BTreeSet::new();
    loop {
        let mut derived = Vec::new();
        for (head, body, vars) in &rules {
            join(body, &model, &mut HashMap::new(), &mut |env| {
                // Head variables not fixed by the body range over the universe.
                let mut env = env.clone();
                for_each_assignment(vars, &constants, &mut env, &mut |full| {
                    derived.push(subst(head, full));
                });
            });
        }
        let before = model.len();
        model.extend(derived);
        if model.len() == before {
            break;
        }
    }
    Ok(LeastModel {
        atoms: model,
        universe,
    })
}
