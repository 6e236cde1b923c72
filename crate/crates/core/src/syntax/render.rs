use std::collections::{HashMap, HashSet};

use super::ast::{AtomGoal, Clause, Goal, Program};
use crate::term::{Int, Substitution, Term, Var};

/// Assigns printable names to variables. A name shared by several distinct
/// variables gets a `_<serial>` suffix so the printed text keeps them apart.
#[derive(Debug, Default)]
pub struct VarNames {
    ambiguous: HashSet<std::sync::Arc<str>>,
}

impl VarNames {
    pub fn for_vars<'a>(vars: impl IntoIterator<Item = &'a Var>) -> Self {
        let mut by_name: HashMap<std::sync::Arc<str>, HashSet<u64>> = HashMap::new();
        for v in vars {
            by_name.entry(v.name.clone()).or_default().insert(v.serial);
        }
        VarNames {
            ambiguous: by_name
                .into_iter()
                .filter(|(_, serials)| serials.len() > 1)
                .map(|(name, _)| name)
                .collect(),
        }
    }

    pub fn name(&self, v: &Var) -> String {
        if self.ambiguous.contains(&v.name) {
            format!("{}_{}", v.name, v.serial)
        } else {
            v.name.to_string()
        }
    }

    pub fn term(&self, t: &Term) -> String {
        let mut out = String::new();
        self.write_term(t, &mut out);
        out
    }

    fn write_term(&self, t: &Term, out: &mut String) {
        match t {
            Term::Var(v) => out.push_str(&self.name(v)),
            Term::Int(i) => write_int(*i, 0, out),
            Term::Atom(a) => write_atom(a, out),
            Term::Compound(f, args) if &**f == ":" && args.len() == 2 => {
                let (l, r) = (&args[0], &args[1]);
                if is_colon(l) {
                    out.push('(');
                    self.write_term(l, out);
                    out.push(')');
                } else {
                    self.write_term(l, out);
                }
                out.push(':');
                match (l, r) {
                    // Minutes of an `H:M` literal always print two digits.
                    (Term::Int(_), Term::Int(m)) if m.value >= 0 => write_int(*m, 2, out),
                    _ => {
                        let mut rhs = String::new();
                        self.write_term(r, &mut rhs);
                        // `:-` would lex as the neck operator.
                        if rhs.starts_with('-') {
                            out.push(' ');
                        }
                        out.push_str(&rhs);
                    }
                }
            }
            Term::Compound(f, args) => {
                write_atom(f, out);
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    self.write_term(a, out);
                }
                out.push(')');
            }
        }
    }

    /// Terms in goal or clause-head position. `:` is written prefix there,
    /// since an operand such as `9` or `X` cannot start a goal.
    pub fn callable(&self, t: &Term) -> String {
        let mut out = String::new();
        self.write_callable(t, &mut out);
        out
    }

    fn write_callable(&self, t: &Term, out: &mut String) {
        match t {
            Term::Compound(f, args) if is_colon(t) => {
                write_atom(f, out);
                out.push('(');
                self.write_term(&args[0], out);
                out.push(',');
                self.write_term(&args[1], out);
                out.push(')');
            }
            _ => self.write_term(t, out),
        }
    }

    pub fn goal(&self, g: &Goal) -> String {
        let mut out = String::new();
        self.write_goal(g, &mut out);
        out
    }

    fn write_goal(&self, g: &Goal, out: &mut String) {
        match g {
            Goal::Atom(AtomGoal::Rigid(t)) => self.write_callable(t, out),
            Goal::Atom(AtomGoal::Flex { head, args }) => {
                out.push_str(&self.name(head));
                if !args.is_empty() {
                    out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        self.write_term(a, out);
                    }
                    out.push(')');
                }
            }
            Goal::Conj(l, r) => {
                self.write_nested(l, out);
                out.push_str(", ");
                self.write_goal(r, out);
            }
            Goal::Exists(v, body) | Goal::Read(v, body) => {
                out.push_str(if matches!(g, Goal::Read(..)) {
                    "read("
                } else {
                    "exists("
                });
                out.push_str(&self.name(v));
                out.push_str(", ");
                self.write_nested(body, out);
                out.push(')');
            }
            Goal::Uchoose(alts) => {
                out.push_str("uchoose(");
                for (i, a) in alts.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.write_nested(a, out);
                }
                out.push(')');
            }
        }
    }

    /// Conjunctions in argument position are parenthesized.
    fn write_nested(&self, g: &Goal, out: &mut String) {
        if matches!(g, Goal::Conj(..)) {
            out.push('(');
            self.write_goal(g, out);
            out.push(')');
        } else {
            self.write_goal(g, out);
        }
    }
}

fn is_colon(t: &Term) -> bool {
    matches!(t, Term::Compound(f, args) if &**f == ":" && args.len() == 2)
}

fn write_int(i: Int, min_width: usize, out: &mut String) {
    let width = usize::from(i.width).max(min_width);
    if i.value < 0 {
        out.push_str(&i.value.to_string());
    } else {
        out.push_str(&format!("{:0width$}", i.value, width = width));
    }
}

fn is_plain_atom(a: &str) -> bool {
    let mut chars = a.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn write_atom(a: &str, out: &mut String) {
    if is_plain_atom(a) {
        out.push_str(a);
    } else {
        out.push('\'');
        out.push_str(&a.replace('\'', "''"));
        out.push('\'');
    }
}

pub fn render_term(t: &Term) -> String {
    VarNames::for_vars(&t.vars()).term(t)
}

pub fn render_goal(g: &Goal) -> String {
    VarNames::for_vars(&g.all_vars()).goal(g)
}

/// `X = t, Y = u`, or `true` when empty.
pub fn render_substitution(s: &Substitution) -> String {
    if s.is_empty() {
        return "true".into();
    }
    let mut vars: Vec<Var> = s.domain().cloned().collect();
    for (_, t) in s.iter() {
        vars.extend(t.vars());
    }
    let names = VarNames::for_vars(&vars);
    s.iter()
        .map(|(v, t)| format!("{} = {}", names.name(v), names.term(t)))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn render_clause(c: &Clause) -> String {
    let vars = c.vars();
    let names = VarNames::for_vars(&vars);
    match &c.body {
        None => format!("{}.", names.callable(&c.head)),
        Some(body) => format!("{} :- {}.", names.callable(&c.head), names.goal(body)),
    }
}

pub fn render_program(p: &Program) -> String {
    p.clauses.iter().map(|c| render_clause(c) + "\n").collect()
}
