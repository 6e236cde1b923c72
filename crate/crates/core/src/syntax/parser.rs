use std::collections::HashMap;

use super::ast::{AtomGoal, Clause, Goal, Program};
use super::lexer::{tokenize, Tok, Token};
use super::ParseError;
use crate::term::{Int, Term, Var};

/// Deepest nesting (brackets or `:` chains) accepted before giving up.
const MAX_NESTING: usize = 256;
/// Longest conjunction accepted in one goal.
const MAX_CONJUNCTS: usize = 10_000;

pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(src)?;
    let mut clauses = Vec::new();
    while !p.at(&Tok::Eof) {
        p.vars.clear();
        clauses.push(p.clause()?);
    }
    Ok(Program::new(clauses))
}

/// Parses a query. A single trailing `.` is accepted.
pub fn parse_goal(src: &str) -> Result<Goal, ParseError> {
    let mut p = Parser::new(src)?;
    let g = p.goal()?;
    if p.at(&Tok::End) {
        p.advance();
    }
    p.expect_eof()?;
    Ok(g)
}

/// Parses a single term, as typed in reply to a `read` prompt. A single
/// trailing `.` is accepted.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    if p.at(&Tok::End) {
        p.advance();
    }
    p.expect_eof()?;
    Ok(t)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Variables of the clause or goal being parsed, by name.
    vars: HashMap<String, Var>,
    next_serial: u64,
    depth: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            vars: HashMap::new(),
            next_serial: 0,
            depth: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        let i = (self.pos + 1).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let here = &self.toks[self.pos];
        ParseError {
            line: here.line,
            column: here.column,
            message: format!("expected {expected}, found {}", here.tok.describe()),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.at(&t) {
            self.advance();
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.at(&Tok::Eof) {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            let here = &self.toks[self.pos];
            return Err(ParseError {
                line: here.line,
                column: here.column,
                message: "nesting too deep".into(),
            });
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn var(&mut self, name: String) -> Var {
        if name == "_" {
            let v = Var::new("_", self.next_serial);
            self.next_serial += 1;
            return v;
        }
        if let Some(v) = self.vars.get(&name) {
            return v.clone();
        }
        let v = Var::new(name.as_str(), self.next_serial);
        self.next_serial += 1;
        self.vars.insert(name, v.clone());
        v
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        let head = match self.peek() {
            Tok::Atom(_) => self.term()?,
            _ => return Err(self.error("clause head (atom or compound term)")),
        };
        if matches!(head, Term::Int(_) | Term::Var(_)) {
            return Err(self.error("clause head (atom or compound term)"));
        }
        let body = if self.at(&Tok::Neck) {
            self.advance();
            Some(self.goal()?)
        } else {
            None
        };
        self.expect(Tok::End, "`.` at end of clause")?;
        Ok(Clause { head, body })
    }

    // goal := primary (',' primary)*, folded to the right
    fn goal(&mut self) -> Result<Goal, ParseError> {
        self.enter()?;
        let mut parts = vec![self.primary_goal()?];
        while self.at(&Tok::Comma) {
            if parts.len() >= MAX_CONJUNCTS {
                return Err(self.error("end of conjunction (too many conjuncts)"));
            }
            self.advance();
            parts.push(self.primary_goal()?);
        }
        self.leave();
        let mut g = parts.pop().expect("at least one conjunct");
        while let Some(left) = parts.pop() {
            g = Goal::conj(left, g);
        }
        Ok(g)
    }

    fn primary_goal(&mut self) -> Result<Goal, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let g = self.goal()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(g)
            }
            Tok::Var(name) => {
                self.advance();
                let head = self.var(name);
                let args = if self.at(&Tok::LParen) {
                    self.advance();
                    self.args()?
                } else {
                    Vec::new()
                };
                Ok(Goal::Atom(AtomGoal::Flex { head, args }))
            }
            Tok::Atom(name) if self.peek2() == &Tok::LParen => match name.as_str() {
                "read" | "exists" => self.binder(&name),
                "uchoose" => self.uchoose(),
                _ => Ok(Goal::atom(self.term()?)),
            },
            Tok::Atom(_) => Ok(Goal::atom(self.term()?)),
            _ => Err(self.error("goal")),
        }
    }

    fn binder(&mut self, kind: &str) -> Result<Goal, ParseError> {
        self.advance();
        self.advance();
        let var = match self.peek().clone() {
            Tok::Var(name) => {
                self.advance();
                self.var(name)
            }
            _ => return Err(self.error(&format!("variable as first argument of `{kind}`"))),
        };
        self.expect(Tok::Comma, "`,`")?;
        let body = self.goal()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(match kind {
            "read" => Goal::Read(var, Box::new(body)),
            _ => Goal::Exists(var, Box::new(body)),
        })
    }

    fn uchoose(&mut self) -> Result<Goal, ParseError> {
        let at = &self.toks[self.pos];
        let (line, column) = (at.line, at.column);
        self.advance();
        self.advance();
        let mut alts = vec![self.primary_goal()?];
        while self.at(&Tok::Comma) {
            self.advance();
            alts.push(self.primary_goal()?);
        }
        self.expect(Tok::RParen, "`,` or `)`")?;
        if alts.len() < 2 {
            return Err(ParseError {
                line,
                column,
                message: "uchoose needs at least two alternatives".into(),
            });
        }
        Ok(Goal::Uchoose(alts))
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = vec![self.term()?];
        while self.at(&Tok::Comma) {
            self.advance();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`,` or `)`")?;
        Ok(args)
    }

    // term := primary (':' primary)*, right-associative
    pub(crate) fn term(&mut self) -> Result<Term, ParseError> {
        self.enter()?;
        let mut parts = vec![self.primary_term()?];
        while self.at(&Tok::Colon) {
            if parts.len() >= MAX_NESTING {
                return Err(self.error("end of `:` chain (nesting too deep)"));
            }
            self.advance();
            parts.push(self.primary_term()?);
        }
        self.leave();
        let mut t = parts.pop().expect("at least one operand");
        while let Some(left) = parts.pop() {
            t = Term::Compound(":".into(), vec![left, t]);
        }
        Ok(t)
    }

    fn primary_term(&mut self) -> Result<Term, ParseError> {
        let t = match self.peek().clone() {
            Tok::Int { value, width } => Term::Int(Int::with_width(value, width)),
            Tok::Var(name) => Term::Var(self.var(name)),
            Tok::Atom(name) => {
                self.advance();
                if self.at(&Tok::LParen) {
                    self.advance();
                    return Ok(Term::Compound(name.into(), self.args()?));
                }
                return Ok(Term::Atom(name.into()));
            }
            Tok::LParen => {
                self.advance();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(t);
            }
            _ => return Err(self.error("term")),
        };
        self.advance();
        Ok(t)
    }
}
