//! Depth-first proof search.
//!
//! The search alternates between goal reduction (conjunction, existential,
//! `read`, `uchoose`) and backchaining on atoms. Clauses are tried in
//! textual order and leftmost goals first. User interactions never leave a
//! choice point behind: once answered they are committed, and every
//! interaction site can be consumed at most once per instantiation.

use std::cell::Cell;
use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use super::handler::{HandlerError, InteractionHandler};
use super::index::ClauseIndex;
use super::{Answer, ChoicePolicy, InteractionKind, InteractionRecord, SolveError, SolveOptions};
use crate::syntax::{AtomGoal, Goal, Program, VarNames};
use crate::term::{Bindings, Term, Var, VarGen};

/// Instantiated goal. Binder variables are already renamed apart, and
/// interaction nodes carry a site id unique to this instantiation.
#[derive(Debug)]
enum Node {
    Call(Term),
    Flex { head: Var, args: Vec<Term> },
    Conj(Rc<Node>, Rc<Node>),
    Exists(Var, Rc<Node>),
    Read { var: Var, body: Rc<Node>, site: u64 },
    Uchoose { alts: Vec<Rc<Node>>, site: u64 },
}

enum Item {
    Goal {
        node: Rc<Node>,
        depth: usize,
    },
    /// Reached once the alternative chosen under the `retry` policy has been
    /// proved.
    Proved(Rc<Cell<bool>>),
}

type Cont = Option<Rc<Frame>>;

struct Frame {
    item: Item,
    next: Cont,
}

// Unlink iteratively; long continuations would otherwise overflow the
// stack through recursive drops.
impl Drop for Frame {
    fn drop(&mut self) {
        let mut next = self.next.take();
        while let Some(rc) = next {
            match Rc::try_unwrap(rc) {
                Ok(mut frame) => next = frame.next.take(),
                Err(_) => break,
            }
        }
    }
}

fn push(item: Item, next: Cont) -> Cont {
    Some(Rc::new(Frame { item, next }))
}

/// Interactions along the current derivation path, newest first.
type Path = Option<Rc<PathNode>>;

struct PathNode {
    record: InteractionRecord,
    prev: Path,
}

enum Alternative {
    Clauses {
        goal: Term,
        depth: usize,
        candidates: Rc<[usize]>,
        next: usize,
    },
    Retry {
        alts: Vec<Rc<Node>>,
        remaining: Vec<usize>,
        depth: usize,
        proved: Rc<Cell<bool>>,
    },
}

struct ChoicePoint {
    mark: usize,
    goals: Cont,
    path: Path,
    alt: Alternative,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Fresh,
    Resume,
    Finished,
}

/// Lazy answer sequence for one query. Produced by [`solve`].
pub struct Solutions<'p, H> {
    program: &'p Program,
    index: ClauseIndex,
    handler: H,
    opts: SolveOptions,
    store: Bindings,
    gen: VarGen,
    goals: Cont,
    choicepoints: Vec<ChoicePoint>,
    consumed: HashSet<u64>,
    next_site: u64,
    path: Path,
    log: Vec<InteractionRecord>,
    query_vars: Vec<Var>,
    truncated: bool,
    status: Status,
    yielded: usize,
}

/// Starts proving `goal` against `program`. Free variables of `goal` are
/// the answer variables; `read` and `uchoose` consult `handler`.
pub fn solve<'p, H: InteractionHandler>(
    program: &'p Program,
    goal: &Goal,
    handler: H,
    opts: SolveOptions,
) -> Solutions<'p, H> {
    let mut gen = VarGen::new();
    for v in goal.all_vars() {
        gen.reserve(v.serial);
    }
    let mut s = Solutions {
        program,
        index: ClauseIndex::new(program),
        handler,
        opts,
        store: Bindings::new(),
        gen,
        goals: None,
        choicepoints: Vec::new(),
        consumed: HashSet::new(),
        next_site: 0,
        path: None,
        log: Vec::new(),
        query_vars: goal.free_vars(),
        truncated: false,
        status: Status::Fresh,
        yielded: 0,
    };
    let node = s.instantiate(goal, &mut Renaming::Query, &mut Vec::new());
    s.goals = push(Item::Goal { node, depth: 1 }, None);
    s
}

/// How free variables are mapped while instantiating a goal.
enum Renaming {
    /// Query variables keep their identity.
    Query,
    /// Clause variables are renamed apart, consistently across head and body.
    Fresh(HashMap<Var, Var>),
}

impl<'p, H: InteractionHandler> Solutions<'p, H> {
    /// Whether some branch was cut off by the depth limit.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Every interaction so far, including those on failed branches.
    pub fn log(&self) -> &[InteractionRecord] {
        &self.log
    }

    pub fn handler(&self) -> &H {
        &self.handler
    }

    pub fn handler_mut(&mut self) -> &mut H {
        &mut self.handler
    }

    pub fn into_handler(self) -> H {
        self.handler
    }

    /// Answer variables in first-occurrence order.
    pub fn query_vars(&self) -> &[Var] {
        &self.query_vars
    }

    fn instantiate(
        &mut self,
        goal: &Goal,
        renaming: &mut Renaming,
        scope: &mut Vec<(Var, Var)>,
    ) -> Rc<Node> {
        let node = match goal {
            Goal::Atom(AtomGoal::Rigid(t)) => Node::Call(self.rename_term(t, renaming, scope)),
            Goal::Atom(AtomGoal::Flex { head, args }) => Node::Flex {
                head: self.rename_var(head, renaming, scope),
                args: args
                    .iter()
                    .map(|a| self.rename_term(a, renaming, scope))
                    .collect(),
            },
            Goal::Conj(l, r) => {
                let l = self.instantiate(l, renaming, scope);
                let r = self.instantiate(r, renaming, scope);
                Node::Conj(l, r)
            }
            Goal::Exists(v, body) | Goal::Read(v, body) => {
                let fresh = self.gen.fresh(&v.name);
                scope.push((v.clone(), fresh.clone()));
                let body = self.instantiate(body, renaming, scope);
                scope.pop();
                if matches!(goal, Goal::Read(..)) {
                    Node::Read {
                        var: fresh,
                        body,
                        site: self.site(),
                    }
                } else {
                    Node::Exists(fresh, body)
                }
            }
            Goal::Uchoose(alts) => Node::Uchoose {
                alts: alts
                    .iter()
                    .map(|g| self.instantiate(g, renaming, scope))
                    .collect(),
                site: self.site(),
            },
        };
        Rc::new(node)
    }

    fn site(&mut self) -> u64 {
        self.next_site += 1;
        self.next_site
    }

    fn rename_var(&mut self, v: &Var, renaming: &mut Renaming, scope: &[(Var, Var)]) -> Var {
        if let Some((_, fresh)) = scope.iter().rev().find(|(orig, _)| orig == v) {
            return fresh.clone();
        }
        match renaming {
            Renaming::Query => v.clone(),
            Renaming::Fresh(map) => map
                .entry(v.clone())
                .or_insert_with(|| self.gen.fresh(&v.name))
                .clone(),
        }
    }

    fn rename_term(&mut self, t: &Term, renaming: &mut Renaming, scope: &[(Var, Var)]) -> Term {
        t.map_vars(&mut |v| Some(Term::Var(self.rename_var(v, renaming, scope))))
    }

    fn run(&mut self) -> Result<Option<Answer>, SolveError> {
        match self.status {
            Status::Finished => return Ok(None),
            Status::Resume => {
                if !self.backtrack()? {
                    return Ok(None);
                }
            }
            Status::Fresh => {}
        }
        self.status = Status::Resume;
        loop {
            let Some(frame) = self.goals.take() else {
                if let Some(answer) = self.answer() {
                    return Ok(Some(answer));
                }
                // Cyclic answer binding: treat as failure.
                if !self.backtrack()? {
                    return Ok(None);
                }
                continue;
            };
            self.goals = frame.next.clone();
            let progressed = match &frame.item {
                Item::Proved(flag) => {
                    flag.set(true);
                    true
                }
                Item::Goal { node, depth } => self.reduce(node.clone(), *depth)?,
            };
            if !progressed && !self.backtrack()? {
                return Ok(None);
            }
        }
    }

    /// Goal reduction. Returns `false` when the goal fails outright.
    fn reduce(&mut self, node: Rc<Node>, depth: usize) -> Result<bool, SolveError> {
        match &*node {
            Node::Call(t) => self.call(t.clone(), depth),
            Node::Flex { head, args } => {
                let callee = match self.store.walk(&Term::Var(head.clone())) {
                    Term::Var(_) => None,
                    Term::Atom(name) => Some(Term::compound(name, args.clone())),
                    t @ Term::Compound(..) if args.is_empty() => Some(t.clone()),
                    _ => {
                        return Err(SolveError::Type {
                            goal: self.render_node(&node),
                        })
                    }
                };
                match callee {
                    Some(t) => self.call(t, depth),
                    None => Err(SolveError::Instantiation {
                        goal: self.render_node(&node),
                    }),
                }
            }
            Node::Conj(l, r) => {
                let goals = push(
                    Item::Goal {
                        node: r.clone(),
                        depth,
                    },
                    self.goals.take(),
                );
                self.goals = push(
                    Item::Goal {
                        node: l.clone(),
                        depth,
                    },
                    goals,
                );
                Ok(true)
            }
            // The binder is already a fresh variable; unification later
            // selects its instance.
            Node::Exists(_, body) => {
                self.goals = push(
                    Item::Goal {
                        node: body.clone(),
                        depth,
                    },
                    self.goals.take(),
                );
                Ok(true)
            }
            Node::Read { var, body, site } => {
                if !self.consumed.insert(*site) {
                    return Ok(false);
                }
                let term = match self.handler.read_term(&var.name) {
                    Ok(t) => t,
                    Err(HandlerError::Input(msg)) => {
                        self.record(InteractionKind::Read, var.name.to_string(), msg, false);
                        return Ok(false);
                    }
                    Err(e) => return Err(SolveError::Handler(e)),
                };
                let term = self.gen.rename(&term);
                let shown = crate::syntax::render_term(&term);
                self.record(InteractionKind::Read, var.name.to_string(), shown, true);
                if !self
                    .store
                    .unify(&Term::Var(var.clone()), &term, self.opts.occurs_check)
                {
                    return Ok(false);
                }
                self.goals = push(
                    Item::Goal {
                        node: body.clone(),
                        depth,
                    },
                    self.goals.take(),
                );
                Ok(true)
            }
            Node::Uchoose { alts, site } => {
                if !self.consumed.insert(*site) {
                    return Ok(false);
                }
                let candidates = (0..alts.len()).collect();
                self.commit_choice(alts.clone(), candidates, depth)
            }
        }
    }

    /// Asks the user to pick among `candidates` (indices into `alts`) and
    /// continues with the chosen alternative.
    fn commit_choice(
        &mut self,
        alts: Vec<Rc<Node>>,
        candidates: Vec<usize>,
        depth: usize,
    ) -> Result<bool, SolveError> {
        let menu = self.render_menu(&alts, &candidates);
        let index = match self.handler.choose(&menu) {
            Ok(k) => k,
            Err(HandlerError::Input(msg)) => {
                self.record(InteractionKind::Choose, menu.join("\n"), msg, false);
                return Ok(false);
            }
            Err(e) => return Err(SolveError::Handler(e)),
        };
        if index == 0 || index > candidates.len() {
            return Err(SolveError::ChoiceOutOfRange {
                index,
                len: candidates.len(),
            });
        }
        self.record(
            InteractionKind::Choose,
            menu.join("\n"),
            index.to_string(),
            true,
        );
        let chosen = candidates[index - 1];
        let node = alts[chosen].clone();
        if self.opts.choice_policy == ChoicePolicy::Retry {
            let proved = Rc::new(Cell::new(false));
            let remaining = candidates.into_iter().filter(|&c| c != chosen).collect();
            self.choicepoints.push(ChoicePoint {
                mark: self.store.mark(),
                goals: self.goals.clone(),
                path: self.path.clone(),
                alt: Alternative::Retry {
                    alts,
                    remaining,
                    depth,
                    proved: proved.clone(),
                },
            });
            self.goals = push(Item::Proved(proved), self.goals.take());
        }
        self.goals = push(Item::Goal { node, depth }, self.goals.take());
        Ok(true)
    }

    fn render_menu(&self, alts: &[Rc<Node>], candidates: &[usize]) -> Vec<String> {
        let goals: Vec<Goal> = candidates.iter().map(|&i| self.to_goal(&alts[i])).collect();
        let mut vars = Vec::new();
        for g in &goals {
            vars.extend(g.all_vars());
        }
        let names = VarNames::for_vars(&vars);
        goals.iter().map(|g| names.goal(g)).collect()
    }

    fn render_node(&self, node: &Node) -> String {
        crate::syntax::render_goal(&self.to_goal(node))
    }

    fn resolved(&self, t: &Term) -> Term {
        self.store.resolve(t).unwrap_or_else(|_| t.clone())
    }

    /// Current bindings applied to an instantiated goal, for display.
    fn to_goal(&self, node: &Node) -> Goal {
        match node {
            Node::Call(t) => Goal::atom(self.resolved(t)),
            Node::Flex { head, args } => {
                let args: Vec<Term> = args.iter().map(|a| self.resolved(a)).collect();
                match self.store.walk(&Term::Var(head.clone())) {
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
            }
            Node::Conj(l, r) => Goal::conj(self.to_goal(l), self.to_goal(r)),
            Node::Exists(v, body) => Goal::Exists(v.clone(), Box::new(self.to_goal(body))),
            Node::Read { var, body, .. } => Goal::Read(var.clone(), Box::new(self.to_goal(body))),
            Node::Uchoose { alts, .. } => {
                Goal::Uchoose(alts.iter().map(|a| self.to_goal(a)).collect())
            }
        }
    }

    fn record(&mut self, kind: InteractionKind, prompt: String, response: String, accepted: bool) {
        let record = InteractionRecord {
            kind,
            prompt,
            response,
            accepted,
        };
        self.log.push(record.clone());
        if accepted {
            self.path = Some(Rc::new(PathNode {
                record,
                prev: self.path.take(),
            }));
        }
    }

    /// Backchaining on an atomic goal.
    fn call(&mut self, goal: Term, depth: usize) -> Result<bool, SolveError> {
        if let Some(limit) = self.opts.depth_limit {
            if depth > limit.get() {
                self.truncated = true;
                return Ok(false);
            }
        }
        let candidates = self.index.candidates(&goal, &self.store);
        Ok(self.try_clauses(goal, depth, candidates, 0))
    }

    /// Tries `candidates` from position `start` on: renames each clause
    /// apart, unifies its head with `goal`, and on success schedules the
    /// body. A choice point is left when a later candidate remains.
    fn try_clauses(
        &mut self,
        goal: Term,
        depth: usize,
        candidates: Rc<[usize]>,
        start: usize,
    ) -> bool {
        let program = self.program;
        for pos in start..candidates.len() {
            let clause = &program.clauses[candidates[pos]];
            let mark = self.store.mark();
            let mut renaming = Renaming::Fresh(HashMap::new());
            let head = self.rename_term(&clause.head, &mut renaming, &[]);
            if !self.store.unify(&head, &goal, self.opts.occurs_check) {
                continue;
            }
            if pos + 1 < candidates.len() {
                self.choicepoints.push(ChoicePoint {
                    mark,
                    goals: self.goals.clone(),
                    path: self.path.clone(),
                    alt: Alternative::Clauses {
                        goal: goal.clone(),
                        depth,
                        candidates: candidates.clone(),
                        next: pos + 1,
                    },
                });
            }
            if let Some(body) = &clause.body {
                let node = self.instantiate(body, &mut renaming, &mut Vec::new());
                self.goals = push(
                    Item::Goal {
                        node,
                        depth: depth + 1,
                    },
                    self.goals.take(),
                );
            }
            return true;
        }
        false
    }

    /// Resumes the most recent choice point. Returns `false` when none is
    /// left.
    fn backtrack(&mut self) -> Result<bool, SolveError> {
        while let Some(cp) = self.choicepoints.pop() {
            self.store.undo_to(cp.mark);
            self.goals = cp.goals;
            self.path = cp.path;
            let resumed = match cp.alt {
                Alternative::Clauses {
                    goal,
                    depth,
                    candidates,
                    next,
                } => self.try_clauses(goal, depth, candidates, next),
                Alternative::Retry {
                    alts,
                    remaining,
                    depth,
                    proved,
                } => {
                    // Only a chosen branch with no proof at all is offered
                    // again; later failures keep the commitment.
                    if proved.get() || remaining.is_empty() {
                        false
                    } else {
                        self.commit_choice(alts, remaining, depth)?
                    }
                }
            };
            if resumed {
                return Ok(true);
            }
        }
        self.status = Status::Finished;
        Ok(false)
    }

    fn answer(&self) -> Option<Answer> {
        let mut pairs = Vec::new();
        for v in &self.query_vars {
            let t = self.store.resolve(&Term::Var(v.clone())).ok()?;
            if t != Term::Var(v.clone()) {
                pairs.push((v.clone(), t));
            }
        }
        let bindings = crate::term::Substitution::from_triangular(pairs)?;
        let mut transcript = Vec::new();
        let mut p = &self.path;
        while let Some(node) = p {
            transcript.push(node.record.clone());
            p = &node.prev;
        }
        transcript.reverse();
        Some(Answer {
            bindings,
            order: self.query_vars.clone(),
            transcript,
        })
    }
}

impl<H: InteractionHandler> Iterator for Solutions<'_, H> {
    type Item = Result<Answer, SolveError>;

    fn next(&mut self) -> Option<Self::Item> {
        if let Some(max) = self.opts.max_solutions {
            if self.yielded >= max.get() {
                return None;
            }
        }
        match self.run() {
            Ok(Some(a)) => {
                self.yielded += 1;
                Some(Ok(a))
            }
            Ok(None) => None,
            Err(e) => {
                self.status = Status::Finished;
                Some(Err(e))
            }
        }
    }
}
