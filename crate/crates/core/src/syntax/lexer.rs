use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Atom(String),
    Var(String),
    Int { value: i64, width: u8 },
    LParen,
    RParen,
    Comma,
    Colon,
    Neck,
    End,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Atom(a) => format!("atom `{a}`"),
            Tok::Var(v) => format!("variable `{v}`"),
            Tok::Int { value, .. } => format!("integer `{value}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Neck => "`:-`".into(),
            Tok::End => "`.`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut lx = Lexer {
        chars: src.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        lx.skip_trivia();
        let (line, column) = (lx.line, lx.column);
        let tok = lx.next_tok()?;
        let done = tok == Tok::Eof;
        out.push(Token { tok, line, column });
        if done {
            return Ok(out);
        }
    }
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<char> {
        self.chars.get(self.pos + off).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '%' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn next_tok(&mut self) -> Result<Tok, ParseError> {
        let Some(c) = self.peek() else {
            return Ok(Tok::Eof);
        };
        match c {
            '(' => {
                self.bump();
                Ok(Tok::LParen)
            }
            ')' => {
                self.bump();
                Ok(Tok::RParen)
            }
            ',' => {
                self.bump();
                Ok(Tok::Comma)
            }
            '.' => {
                self.bump();
                Ok(Tok::End)
            }
            ':' => {
                self.bump();
                if self.peek() == Some('-') {
                    self.bump();
                    Ok(Tok::Neck)
                } else {
                    Ok(Tok::Colon)
                }
            }
            '\'' => self.quoted(),
            '-' if self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) => {
                self.bump();
                self.number(true)
            }
            c if c.is_ascii_digit() => self.number(false),
            c if c.is_ascii_lowercase() => Ok(Tok::Atom(self.ident())),
            c if c.is_ascii_uppercase() || c == '_' => Ok(Tok::Var(self.ident())),
            other => Err(self.err(format!("unexpected character `{other}`"))),
        }
    }

    fn ident(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn number(&mut self, negative: bool) -> Result<Tok, ParseError> {
        let start = (self.line, self.column);
        let mut digits = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.bump();
            } else {
                break;
            }
        }
        let overflow = || ParseError {
            line: start.0,
            column: start.1,
            message: format!("integer literal `{digits}` out of range"),
        };
        let magnitude: i64 = digits.parse().map_err(|_| overflow())?;
        let width = if digits.len() > 1 && digits.starts_with('0') {
            u8::try_from(digits.len()).map_err(|_| overflow())?
        } else {
            0
        };
        let value = if negative { -magnitude } else { magnitude };
        Ok(Tok::Int { value, width })
    }

    fn quoted(&mut self) -> Result<Tok, ParseError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(self.err("unterminated quoted atom")),
                Some('\'') => {
                    if self.peek() == Some('\'') {
                        self.bump();
                        s.push('\'');
                    } else {
                        return Ok(Tok::Atom(s));
                    }
                }
                Some(c) => s.push(c),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn time_literal_tokens() {
        assert_eq!(
            toks("09:35"),
            vec![
                Tok::Int { value: 9, width: 2 },
                Tok::Colon,
                Tok::Int {
                    value: 35,
                    width: 0
                },
                Tok::Eof
            ]
        );
        assert_eq!(
            toks("9:00"),
            vec![
                Tok::Int { value: 9, width: 0 },
                Tok::Colon,
                Tok::Int { value: 0, width: 2 },
                Tok::Eof
            ]
        );
    }

    #[test]
    fn neck_and_comment() {
        assert_eq!(
            toks("p :- q. % trailing\n"),
            vec![
                Tok::Atom("p".into()),
                Tok::Neck,
                Tok::Atom("q".into()),
                Tok::End,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn quoted_atoms_and_positions() {
        assert_eq!(toks("'it''s'"), vec![Tok::Atom("it's".into()), Tok::Eof]);
        let t = tokenize("a\n  B").unwrap();
        assert_eq!((t[1].line, t[1].column), (2, 3));
        let e = tokenize("a\n #").unwrap_err();
        assert_eq!((e.line, e.column), (2, 2));
    }

    #[test]
    fn overflow_is_an_error() {
        assert!(tokenize("99999999999999999999").is_err());
    }
}
