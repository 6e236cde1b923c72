use std::collections::HashSet;

use crate::term::{Substitution, Term, Var};

/// An atomic goal. `Flex` has a variable in predicate position and must be
/// resolved to an atom before it can be called.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomGoal {
    Rigid(Term),
    Flex { head: Var, args: Vec<Term> },
}

impl AtomGoal {
    /// Applies `s` to the goal. A flex head bound to an atom `a` turns
    /// `X(args)` into the rigid goal `a(args)`.
    pub fn apply(&self, s: &Substitution) -> AtomGoal {
        match self {
            AtomGoal::Rigid(t) => AtomGoal::Rigid(s.apply(t)),
            AtomGoal::Flex { head, args } => {
                let args: Vec<Term> = args.iter().map(|a| s.apply(a)).collect();
                match s.get(head) {
                    Some(Term::Atom(name)) => AtomGoal::Rigid(Term::compound(name, args)),
                    Some(t @ Term::Compound(..)) if args.is_empty() => AtomGoal::Rigid(t.clone()),
                    Some(Term::Var(v)) => AtomGoal::Flex {
                        head: v.clone(),
                        args,
                    },
                    _ => AtomGoal::Flex {
                        head: head.clone(),
                        args,
                    },
                }
            }
        }
    }

    fn collect_vars(&self, out: &mut Vec<Var>, seen: &mut HashSet<Var>) {
        match self {
            AtomGoal::Rigid(t) => t.collect_vars(out, seen),
            AtomGoal::Flex { head, args } => {
                if seen.insert(head.clone()) {
                    out.push(head.clone());
                }
                for a in args {
                    a.collect_vars(out, seen);
                }
            }
        }
    }
}

/// Query syntax: atoms, conjunction, explicit existential, the `read`
/// binder and bounded user choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goal {
    Atom(AtomGoal),
    Conj(Box<Goal>, Box<Goal>),
    Exists(Var, Box<Goal>),
    Read(Var, Box<Goal>),
    /// At least two alternatives.
    Uchoose(Vec<Goal>),
}

impl Goal {
    pub fn atom(t: Term) -> Goal {
        Goal::Atom(AtomGoal::Rigid(t))
    }

    pub fn conj(l: Goal, r: Goal) -> Goal {
        Goal::Conj(Box::new(l), Box::new(r))
    }

    /// Free variables in first-occurrence order. Binder variables of
    /// `read`/`exists` are excluded within their body.
    pub fn free_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        self.collect_free(&mut Vec::new(), &mut out, &mut seen);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut Vec<Var>, seen: &mut HashSet<Var>) {
        match self {
            Goal::Atom(a) => {
                let mut vs = Vec::new();
                a.collect_vars(&mut vs, &mut HashSet::new());
                for v in vs {
                    if !bound.contains(&v) && seen.insert(v.clone()) {
                        out.push(v);
                    }
                }
            }
            Goal::Conj(l, r) => {
                l.collect_free(bound, out, seen);
                r.collect_free(bound, out, seen);
            }
            Goal::Exists(v, body) | Goal::Read(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out, seen);
                bound.pop();
            }
            Goal::Uchoose(alts) => {
                for g in alts {
                    g.collect_free(bound, out, seen);
                }
            }
        }
    }

    /// Every variable occurrence, binders included.
    pub fn all_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        self.collect_all(&mut out, &mut seen);
        out
    }

    fn collect_all(&self, out: &mut Vec<Var>, seen: &mut HashSet<Var>) {
        match self {
            Goal::Atom(a) => a.collect_vars(out, seen),
            Goal::Conj(l, r) => {
                l.collect_all(out, seen);
                r.collect_all(out, seen);
            }
            Goal::Exists(v, body) | Goal::Read(v, body) => {
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
                body.collect_all(out, seen);
            }
            Goal::Uchoose(alts) => {
                for g in alts {
                    g.collect_all(out, seen);
                }
            }
        }
    }

    /// Applies `s` to free occurrences. Binders shadow the substitution for
    /// their own variable; no capture avoidance is attempted, so the range
    /// of `s` should not mention binder variables of `self`.
    pub fn apply(&self, s: &Substitution) -> Goal {
        match self {
            Goal::Atom(a) => Goal::Atom(a.apply(s)),
            Goal::Conj(l, r) => Goal::conj(l.apply(s), r.apply(s)),
            Goal::Exists(v, body) | Goal::Read(v, body) => {
                let inner = if s.get(v).is_some() {
                    let vars: Vec<Var> = s.domain().filter(|d| *d != v).cloned().collect();
                    body.apply(&s.restrict(&vars))
                } else {
                    body.apply(s)
                };
                match self {
                    Goal::Exists(..) => Goal::Exists(v.clone(), Box::new(inner)),
                    _ => Goal::Read(v.clone(), Box::new(inner)),
                }
            }
            Goal::Uchoose(alts) => Goal::Uchoose(alts.iter().map(|g| g.apply(s)).collect()),
        }
    }

    /// `[t/x]G`: replaces free occurrences of `var` by `term`.
    pub fn substitute(&self, var: &Var, term: &Term) -> Goal {
        match Substitution::singleton(var.clone(), term.clone()) {
            Some(s) => self.apply(&s),
            // `term` mentions `var`; substitute through a single pass.
            None => self.map_free(var, term),
        }
    }

    fn map_free(&self, var: &Var, term: &Term) -> Goal {
        let f = |t: &Term| t.map_vars(&mut |v| (v == var).then(|| term.clone()));
        match self {
            Goal::Atom(AtomGoal::Rigid(t)) => Goal::atom(f(t)),
            Goal::Atom(AtomGoal::Flex { head, args }) => {
                let args = args.iter().map(f).collect::<Vec<_>>();
                if head == var {
                    match term {
                        Term::Atom(name) => Goal::atom(Term::compound(name, args)),
                        Term::Var(v) => Goal::Atom(AtomGoal::Flex {
                            head: v.clone(),
                            args,
                        }),
                        _ => Goal::Atom(AtomGoal::Flex {
                            head: head.clone(),
                            args,
                        }),
                    }
                } else {
                    Goal::Atom(AtomGoal::Flex {
                        head: head.clone(),
                        args,
                    })
                }
            }
            Goal::Conj(l, r) => Goal::conj(l.map_free(var, term), r.map_free(var, term)),
            Goal::Exists(v, _) | Goal::Read(v, _) if v == var => self.clone(),
            Goal::Exists(v, body) => Goal::Exists(v.clone(), Box::new(body.map_free(var, term))),
            Goal::Read(v, body) => Goal::Read(v.clone(), Box::new(body.map_free(var, term))),
            Goal::Uchoose(alts) => {
                Goal::Uchoose(alts.iter().map(|g| g.map_free(var, term)).collect())
            }
        }
    }

    /// Binder variables that never occur in their body.
    pub fn unused_binders(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.find_unused(&mut out);
        out
    }

    fn find_unused(&self, out: &mut Vec<Var>) {
        match self {
            Goal::Atom(_) => {}
            Goal::Conj(l, r) => {
                l.find_unused(out);
                r.find_unused(out);
            }
            Goal::Exists(v, body) | Goal::Read(v, body) => {
                if !body.free_vars().contains(v) {
                    out.push(v.clone());
                }
                body.find_unused(out);
            }
            Goal::Uchoose(alts) => alts.iter().for_each(|g| g.find_unused(out)),
        }
    }

    /// True when the goal contains no `read` or `uchoose`.
    pub fn is_interaction_free(&self) -> bool {
        match self {
            Goal::Atom(_) => true,
            Goal::Conj(l, r) => l.is_interaction_free() && r.is_interaction_free(),
            Goal::Exists(_, body) => body.is_interaction_free(),
            Goal::Read(..) | Goal::Uchoose(_) => false,
        }
    }
}

/// A Horn clause: `head.` or `head :- body.` All variables are implicitly
/// universally quantified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub head: Term,
    pub body: Option<Goal>,
}

impl Clause {
    pub fn fact(head: Term) -> Clause {
        Clause { head, body: None }
    }

    pub fn rule(head: Term, body: Goal) -> Clause {
        Clause {
            head,
            body: Some(body),
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        self.head.collect_vars(&mut out, &mut seen);
        if let Some(body) = &self.body {
            for v in body.all_vars() {
                if seen.insert(v.clone()) {
                    out.push(v);
                }
            }
        }
        out
    }
}

/// Clauses in textual order; the order fixes clause selection order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub clauses: Vec<Clause>,
}

impl Program {
    pub fn new(clauses: Vec<Clause>) -> Self {
        Program { clauses }
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Var {
        Var::new(n, 0)
    }

    #[test]
    fn flex_goal_becomes_rigid() {
        let g = AtomGoal::Flex {
            head: v("X"),
            args: vec![Term::atom("paris"), Term::atom("nice"), Term::Var(v("Dt"))],
        };
        let s = Substitution::singleton(v("X"), Term::atom("panam")).unwrap();
        assert_eq!(
            g.apply(&s),
            AtomGoal::Rigid(Term::compound(
                "panam",
                vec![Term::atom("paris"), Term::atom("nice"), Term::Var(v("Dt"))]
            ))
        );
    }

    #[test]
    fn binders_are_not_free() {
        let body = Goal::atom(Term::compound(
            "p",
            vec![Term::Var(v("X")), Term::Var(v("W"))],
        ));
        let g = Goal::Read(v("X"), Box::new(body));
        assert_eq!(g.free_vars(), vec![v("W")]);
        assert!(g.unused_binders().is_empty());
        let unused = Goal::Exists(v("Y"), Box::new(Goal::atom(Term::atom("q"))));
        assert_eq!(unused.unused_binders(), vec![v("Y")]);
    }

    #[test]
    fn substitute_respects_shadowing() {
        let inner = Goal::Read(
            v("X"),
            Box::new(Goal::atom(Term::compound("q", vec![Term::Var(v("X"))]))),
        );
        let g = Goal::conj(
            Goal::atom(Term::compound("p", vec![Term::Var(v("X"))])),
            inner.clone(),
        );
        let r = g.substitute(&v("X"), &Term::atom("a"));
        assert_eq!(
            r,
            Goal::conj(
                Goal::atom(Term::compound("p", vec![Term::atom("a")])),
                inner
            )
        );
    }
}
