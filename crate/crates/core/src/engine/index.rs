//! Clause selection by predicate and first argument.

use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use crate::syntax::Program;
use crate::term::{Bindings, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum ArgKey {
    Atom(Arc<str>),
    Int(i64),
    Functor(Arc<str>, usize),
}

fn arg_key(t: &Term) -> Option<ArgKey> {
    match t {
        Term::Atom(a) => Some(ArgKey::Atom(a.clone())),
        Term::Int(i) => Some(ArgKey::Int(i.value)),
        Term::Compound(f, args) => Some(ArgKey::Functor(f.clone(), args.len())),
        Term::Var(_) => None,
    }
}

fn first_arg(t: &Term) -> Option<&Term> {
    match t {
        Term::Compound(_, args) => args.first(),
        _ => None,
    }
}

#[derive(Default)]
struct Predicate {
    all: Vec<usize>,
    /// Clauses whose first head argument is a variable.
    open: Vec<usize>,
    by_first: HashMap<ArgKey, Vec<usize>>,
}

type Lists = (Rc<[usize]>, Rc<[usize]>, HashMap<ArgKey, Rc<[usize]>>);

/// Candidate clause lists, in textual order, shared between choice points.
pub(super) struct ClauseIndex {
    preds: HashMap<(Arc<str>, usize), Lists>,
    empty: Rc<[usize]>,
}

impl ClauseIndex {
    pub(super) fn new(program: &Program) -> Self {
        let mut building: HashMap<(Arc<str>, usize), Predicate> = HashMap::new();
        for (i, clause) in program.clauses.iter().enumerate() {
            let key = match &clause.head {
                Term::Atom(a) => (a.clone(), 0),
                Term::Compound(f, args) => (f.clone(), args.len()),
                _ => continue,
            };
            let pred = building.entry(key).or_default();
            pred.all.push(i);
            match first_arg(&clause.head).and_then(arg_key) {
                Some(k) => pred.by_first.entry(k).or_default().push(i),
                None => pred.open.push(i),
            }
        }
        let preds = building
            .into_iter()
            .map(|(key, mut pred)| {
                for list in pred.by_first.values_mut() {
                    let mut merged: Vec<usize> =
                        pred.open.iter().chain(list.iter()).copied().collect();
                    merged.sort_unstable();
                    merged.dedup();
                    *list = merged;
                }
                let by_first = pred
                    .by_first
                    .into_iter()
                    .map(|(k, v)| (k, Rc::from(v)))
                    .collect();
                (key, (Rc::from(pred.all), Rc::from(pred.open), by_first))
            })
            .collect();
        ClauseIndex {
            preds,
            empty: Rc::from(Vec::new()),
        }
    }

    /// Clauses whose head may unify with `goal`.
    pub(super) fn candidates(&self, goal: &Term, store: &Bindings) -> Rc<[usize]> {
        let (name, arity) = match goal {
            Term::Atom(a) => (a, 0),
            Term::Compound(f, args) => (f, args.len()),
            _ => return self.empty.clone(),
        };
        let Some((all, open, by_first)) = self.preds.get(&(name.clone(), arity)) else {
            return self.empty.clone();
        };
        match first_arg(goal).map(|a| store.walk(a)).and_then(arg_key) {
            Some(k) => by_first.get(&k).unwrap_or(open).clone(),
            None => all.clone(),
        }
    }
}
