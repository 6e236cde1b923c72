//! Terms, substitutions and unification.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// A logic variable. Identity is the `(name, serial)` pair; the name is kept
/// only for printing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    pub name: Arc<str>,
    pub serial: u64,
}

impl Var {
    pub fn new(name: impl Into<Arc<str>>, serial: u64) -> Self {
        Var {
            name: name.into(),
            serial,
        }
    }
}

// Serial first so that parser-assigned serials give first-occurrence order.
impl Ord for Var {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.serial
            .cmp(&other.serial)
            .then_with(|| self.name.cmp(&other.name))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Integer constant. `width` is the digit count written in the source when
/// it carried leading zeros (`09` has width 2), zero otherwise. It only
/// affects rendering; equality and hashing look at the value alone.
#[derive(Clone, Copy, Debug)]
pub struct Int {
    pub value: i64,
    pub width: u8,
}

impl Int {
    pub fn new(value: i64) -> Self {
        Int { value, width: 0 }
    }

    pub fn with_width(value: i64, width: u8) -> Self {
        Int { value, width }
    }
}

impl PartialEq for Int {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for Int {}

impl Hash for Int {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.value.cmp(&other.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Int(Int),
    Atom(Arc<str>),
    /// Always at least one argument; zero-arity symbols are atoms.
    Compound(Arc<str>, Vec<Term>),
}

impl Term {
    pub fn var(name: &str, serial: u64) -> Term {
        Term::Var(Var::new(name, serial))
    }

    pub fn int(value: i64) -> Term {
        Term::Int(Int::new(value))
    }

    pub fn atom(name: &str) -> Term {
        Term::Atom(name.into())
    }

    /// Builds `functor(args..)`, collapsing to an atom when `args` is empty.
    pub fn compound(functor: &str, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::Atom(functor.into())
        } else {
            Term::Compound(functor.into(), args)
        }
    }

    /// `H:M` time literal.
    pub fn time(hours: i64, minutes: i64) -> Term {
        Term::Compound(
            ":".into(),
            vec![Term::int(hours), Term::Int(Int::with_width(minutes, 2))],
        )
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Int(_) | Term::Atom(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Predicate key (`name`, arity) for atoms and compounds.
    pub fn functor(&self) -> Option<(&str, usize)> {
        match self {
            Term::Atom(name) => Some((name, 0)),
            Term::Compound(name, args) => Some((name, args.len())),
            _ => None,
        }
    }

    /// Variables in first-occurrence order, without duplicates.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        self.collect_vars(&mut out, &mut seen);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<Var>, seen: &mut HashSet<Var>) {
        match self {
            Term::Var(v) => {
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
            }
            Term::Compound(_, args) => {
                for a in args {
                    a.collect_vars(out, seen);
                }
            }
            _ => {}
        }
    }

    pub fn occurs(&self, var: &Var) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::Compound(_, args) => args.iter().any(|a| a.occurs(var)),
            _ => false,
        }
    }

    /// Replaces variables through `f`; variables for which `f` returns
    /// `None` are kept.
    pub fn map_vars(&self, f: &mut impl FnMut(&Var) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Term::Compound(name, args) => {
                Term::Compound(name.clone(), args.iter().map(|a| a.map_vars(f)).collect())
            }
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::render_term(self))
    }
}

/// Source of fresh variable serials. Monotone; one per engine run.
#[derive(Clone, Debug, Default)]
pub struct VarGen {
    next: u64,
}

impl VarGen {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn starting_at(next: u64) -> Self {
        VarGen { next }
    }

    pub fn fresh(&mut self, name: &str) -> Var {
        let v = Var::new(name, self.next);
        self.next += 1;
        v
    }

    /// Makes sure no serial at or below `serial` is handed out later.
    pub fn reserve(&mut self, serial: u64) {
        self.next = self.next.max(serial + 1);
    }

    /// Renames every variable of `t` apart, consistently within this call.
    pub fn rename(&mut self, t: &Term) -> Term {
        let mut map = HashMap::new();
        self.rename_with(t, &mut map)
    }

    pub fn rename_with(&mut self, t: &Term, map: &mut HashMap<Var, Var>) -> Term {
        t.map_vars(&mut |v| {
            let fresh = map
                .entry(v.clone())
                .or_insert_with(|| self.fresh(&v.name))
                .clone();
            Some(Term::Var(fresh))
        })
    }
}

/// Idempotent finite map from variables to terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// `{var ↦ term}`; `None` when `term` mentions `var` (not idempotent).
    /// Binding a variable to itself yields the empty substitution.
    pub fn singleton(var: Var, term: Term) -> Option<Self> {
        let mut s = Substitution::new();
        if term == Term::Var(var.clone()) {
            return Some(s);
        }
        if term.occurs(&var) {
            return None;
        }
        s.bindings.insert(var, term);
        Some(s)
    }

    /// Normalizes triangular bindings (each right-hand side may mention
    /// variables bound elsewhere in the list) to an idempotent substitution.
    /// Returns `None` when the bindings are cyclic. Later duplicates of a
    /// variable are ignored.
    pub fn from_triangular(pairs: impl IntoIterator<Item = (Var, Term)>) -> Option<Self> {
        let mut store = Bindings::new();
        for (v, t) in pairs {
            if store.lookup(&v).is_none() && t != Term::Var(v.clone()) {
                store.bind(v, t);
            }
        }
        store.to_substitution()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, var: &Var) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.bindings.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.bindings.keys()
    }

    pub fn apply(&self, t: &Term) -> Term {
        if self.bindings.is_empty() {
            return t.clone();
        }
        t.map_vars(&mut |v| self.bindings.get(v).cloned())
    }

    /// Substitution equivalent to applying `self` and then `other`.
    ///
    /// The result is idempotent whenever no variable bound by `self` occurs
    /// in the range of `other`, which holds for the compositions built
    /// during resolution.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut bindings = BTreeMap::new();
        for (v, t) in &self.bindings {
            let t = other.apply(t);
            if t != Term::Var(v.clone()) {
                bindings.insert(v.clone(), t);
            }
        }
        for (v, t) in &other.bindings {
            if !self.bindings.contains_key(v) {
                bindings.insert(v.clone(), t.clone());
            }
        }
        Substitution { bindings }
    }

    /// Keeps only bindings for the given variables.
    pub fn restrict(&self, vars: &[Var]) -> Substitution {
        Substitution {
            bindings: self
                .bindings
                .iter()
                .filter(|(v, _)| vars.contains(v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.bindings
            .values()
            .all(|t| self.bindings.keys().all(|v| !t.occurs(v)))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::render_substitution(self))
    }
}

/// Raised when materializing a binding would not terminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cyclic;

/// Triangular binding store with an undo trail. This is the working
/// representation used by unification and the solver.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    map: HashMap<Var, Term>,
    trail: Vec<Var>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lookup(&self, v: &Var) -> Option<&Term> {
        self.map.get(v)
    }

    /// Binds an unbound variable. Callers must not bind a variable to itself.
    pub fn bind(&mut self, v: Var, t: Term) {
        debug_assert!(t != Term::Var(v.clone()));
        self.trail.push(v.clone());
        self.map.insert(v, t);
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("trail length checked");
            self.map.remove(&v);
        }
    }

    /// Follows variable-to-term links until an unbound variable or a
    /// non-variable term.
    pub fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.map.get(v) {
                Some(next) => t = next,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, var: &Var, t: &Term) -> bool {
        let mut stack = vec![t];
        let mut visited: HashSet<Var> = HashSet::new();
        while let Some(t) = stack.pop() {
            match self.walk(t) {
                Term::Var(v) => {
                    if v == var {
                        return true;
                    }
                }
                Term::Compound(_, args) => {
                    for a in args {
                        if let Term::Var(v) = a {
                            // Bound variables are expanded once; a cycle
                            // that does not pass through `var` is not ours
                            // to report.
                            if self.map.contains_key(v) && !visited.insert(v.clone()) {
                                continue;
                            }
                        }
                        stack.push(a);
                    }
                }
                _ => {}
            }
        }
        false
    }

    /// Unifies two terms, extending the store. On failure the store is left
    /// exactly as it was.
    pub fn unify(&mut self, a: &Term, b: &Term, occurs_check: bool) -> bool {
        let mark = self.mark();
        if self.unify_inner(a, b, occurs_check) {
            true
        } else {
            self.undo_to(mark);
            false
        }
    }

    fn unify_inner(&mut self, a: &Term, b: &Term, occurs_check: bool) -> bool {
        let mut stack: Vec<(Term, Term)> = vec![(a.clone(), b.clone())];
        // Pairs of already-identified compound nodes, so that unifying
        // rational trees without the occurs check still terminates.
        let mut assumed: HashSet<(Term, Term)> = HashSet::new();
        while let Some((a0, b0)) = stack.pop() {
            let via_binding = a0.is_var() || b0.is_var();
            let a = self.walk(&a0).clone();
            let b = self.walk(&b0).clone();
            match (&a, &b) {
                (Term::Var(x), Term::Var(y)) if x == y => {}
                (Term::Var(x), _) => {
                    if occurs_check && self.occurs(x, &b) {
                        return false;
                    }
                    self.bind(x.clone(), b.clone());
                }
                (_, Term::Var(y)) => {
                    if occurs_check && self.occurs(y, &a) {
                        return false;
                    }
                    self.bind(y.clone(), a.clone());
                }
                (Term::Int(x), Term::Int(y)) => {
                    if x != y {
                        return false;
                    }
                }
                (Term::Atom(x), Term::Atom(y)) => {
                    if x != y {
                        return false;
                    }
                }
                (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                    if f != g || xs.len() != ys.len() {
                        return false;
                    }
                    // Cycles can only close through a bound variable.
                    if !occurs_check && via_binding && !assumed.insert((a.clone(), b.clone())) {
                        continue;
                    }
                    for (x, y) in xs.iter().zip(ys.iter()).rev() {
                        stack.push((x.clone(), y.clone()));
                    }
                }
                _ => return false,
            }
        }
        true
    }

    /// Fully applies the store to `t`. Fails with [`Cyclic`] when a variable
    /// is reached again while its own binding is being expanded.
    pub fn resolve(&self, t: &Term) -> Result<Term, Cyclic> {
        let mut active = Vec::new();
        self.resolve_inner(t, &mut active)
    }

    fn resolve_inner(&self, t: &Term, active: &mut Vec<Var>) -> Result<Term, Cyclic> {
        match t {
            Term::Var(v) => match self.map.get(v) {
                None => Ok(t.clone()),
                Some(next) => {
                    if active.contains(v) {
                        return Err(Cyclic);
                    }
                    active.push(v.clone());
                    let r = self.resolve_inner(next, active);
                    active.pop();
                    r
                }
            },
            Term::Compound(name, args) => {
                let args = args
                    .iter()
                    .map(|a| self.resolve_inner(a, active))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Term::Compound(name.clone(), args))
            }
            _ => Ok(t.clone()),
        }
    }

    /// Idempotent view of every binding in the store.
    pub fn to_substitution(&self) -> Option<Substitution> {
        let mut bindings = BTreeMap::new();
        for v in self.map.keys() {
            let t = self.resolve(&Term::Var(v.clone())).ok()?;
            if t != Term::Var(v.clone()) {
                bindings.insert(v.clone(), t);
            }
        }
        Some(Substitution { bindings })
    }
}

/// Most general unifier of `a` and `b`, or `None` when none exists.
///
/// With `occurs_check` off a cyclic binding such as `X = f(X)` is accepted
/// during unification but cannot be materialized as an idempotent
/// substitution, so it is reported as failure here as well.
pub fn unify(a: &Term, b: &Term, occurs_check: bool) -> Option<Substitution> {
    let mut store = Bindings::new();
    if !store.unify(a, b, occurs_check) {
        return None;
    }
    store.to_substitution()
}
