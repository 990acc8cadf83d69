//! Recursive-descent parser for the surface syntax.
//!
//! Grammar (EBNF):
//!
//! ```text
//! formula  := quant | or
//! quant    := ("exists" | "forall") binder {"," binder} "." formula
//! binder   := IDENT ":" sort
//! sort     := "VF" | "RF" | "Z"
//! or       := and {"or" and}
//! and      := unary {"and" unary}
//! unary    := "not" unary | atom
//! atom     := "(" formula ")" | term relop term
//! relop    := "=" | "!=" | "<=" | "~" INT
//! term     := factor {"+" factor}
//! factor   := primary {"*" primary}
//! primary  := "(" term ")" | "ord" "(" term ")" | "ac" "(" term ")"
//!           | INT | "-" INT | COSET | IDENT [":" sort]
//! COSET    := "d" INT   (written without space, e.g. d1, d2)
//! ```
//!
//! `a != b` abbreviates `not (a = b)`; `a ~d b` is congruence mod `d`.
//! A parenthesized prefix is tried as a formula first and re-read as a
//! term when an arithmetic or relational symbol follows.

use thiserror::Error;

use super::ast::{sort_check, Formula, Sort, SortError, Term};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error(transparent)]
    Sort(#[from] SortError),
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Syntax {
        pos,
        msg: msg.into(),
    })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Plus,
    Star,
    Minus,
    Eq,
    Neq,
    Le,
    Tilde,
    Dot,
    Comma,
    Colon,
    Int(i64),
    Ident(String),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '~' => {
                out.push((Tok::Tilde, i));
                i += 1;
            }
            '.' => {
                out.push((Tok::Dot, i));
                i += 1;
            }
            ',' => {
                out.push((Tok::Comma, i));
                i += 1;
            }
            ':' => {
                out.push((Tok::Colon, i));
                i += 1;
            }
            '=' => {
                out.push((Tok::Eq, i));
                i += 1;
            }
            '!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push((Tok::Neq, i));
                    i += 2;
                } else {
                    return err(i, "expected `!=`");
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push((Tok::Le, i));
                    i += 2;
                } else {
                    return err(i, "expected `<=`");
                }
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: i64 = text[start..i]
                    .parse()
                    .map_err(|_| ParseError::Syntax {
                        pos: start,
                        msg: "integer literal out of range".into(),
                    })?;
                out.push((Tok::Int(n), start));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            other => return err(i, format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_pos(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.peek_pos();
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => err(pos, format!("expected {what}")),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        let pos = self.peek_pos();
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => err(pos, "expected an identifier"),
        }
    }

    fn sort(&mut self) -> Result<Sort, ParseError> {
        let pos = self.peek_pos();
        let name = self.ident()?;
        match name.as_str() {
            "VF" => Ok(Sort::Vf),
            "RF" => Ok(Sort::Rf),
            "Z" => Ok(Sort::Zz),
            other => err(pos, format!("unknown sort `{other}` (expected VF, RF or Z)")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Ident(kw)) if kw == "exists" || kw == "forall" => {
                let is_exists = kw == "exists";
                self.next();
                let mut binders = Vec::new();
                loop {
                    let name = self.ident()?;
                    self.expect(Tok::Colon, "`:` after the bound variable")?;
                    let sort = self.sort()?;
                    binders.push((name, sort));
                    match self.peek() {
                        Some(Tok::Comma) => {
                            self.next();
                        }
                        _ => break,
                    }
                }
                self.expect(Tok::Dot, "`.` after the quantifier binders")?;
                let mut body = self.formula()?;
                for (name, sort) in binders.into_iter().rev() {
                    body = if is_exists {
                        Formula::Exists(name, sort, Box::new(body))
                    } else {
                        Formula::Forall(name, sort, Box::new(body))
                    };
                }
                Ok(body)
            }
            _ => self.or(),
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while matches!(self.peek(), Some(Tok::Ident(k)) if k == "or") {
            self.next();
            let rhs = self.and()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while matches!(self.peek(), Some(Tok::Ident(k)) if k == "and") {
            self.next();
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if matches!(self.peek(), Some(Tok::Ident(k)) if k == "not") {
            self.next();
            let f = self.unary()?;
            return Ok(Formula::not(f));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        // a parenthesis may open a sub-formula or a term; try the formula
        // reading and fall back when an operator follows the `)`
        if matches!(self.peek(), Some(Tok::LParen)) {
            let save = self.pos;
            self.next();
            if let Ok(f) = self.formula() {
                if matches!(self.peek(), Some(Tok::RParen)) {
                    let after = self.toks.get(self.pos + 1).map(|(t, _)| t.clone());
                    let is_term_continuation = matches!(
                        after,
                        Some(Tok::Plus)
                            | Some(Tok::Star)
                            | Some(Tok::Eq)
                            | Some(Tok::Neq)
                            | Some(Tok::Le)
                            | Some(Tok::Tilde)
                    );
                    if !is_term_continuation {
                        self.next(); // consume `)`
                        return Ok(f);
                    }
                }
            }
            self.pos = save;
        }
        let lhs = self.term()?;
        let pos = self.peek_pos();
        match self.next() {
            Some(Tok::Eq) => Ok(Formula::Eq(lhs, self.term()?)),
            Some(Tok::Neq) => Ok(Formula::not(Formula::Eq(lhs, self.term()?))),
            Some(Tok::Le) => Ok(Formula::Le(lhs, self.term()?)),
            Some(Tok::Tilde) => {
                let dpos = self.peek_pos();
                match self.next() {
                    Some(Tok::Int(d)) if d >= 2 => Ok(Formula::Cong(d as u64, lhs, self.term()?)),
                    _ => err(dpos, "congruence modulus must be an integer >= 2"),
                }
            }
            _ => err(pos, "expected a relation (=, !=, <=, ~d)"),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Plus)) {
            self.next();
            let rhs = self.factor()?;
            acc = Term::add(acc, rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.primary()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.next();
            let rhs = self.primary()?;
            acc = Term::mul(acc, rhs);
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        let pos = self.peek_pos();
        match self.next() {
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Minus) => match self.next() {
                Some(Tok::Int(n)) => Ok(Term::Int {
                    value: -n,
                    sort: None,
                }),
                _ => err(pos, "`-` must be followed by an integer literal"),
            },
            Some(Tok::Int(n)) => Ok(Term::Int {
                value: n,
                sort: None,
            }),
            Some(Tok::Ident(name)) => match name.as_str() {
                "ord" | "ac" => {
                    self.expect(Tok::LParen, &format!("`(` after {name}"))?;
                    let t = self.term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(if name == "ord" {
                        Term::Ord(Box::new(t))
                    } else {
                        Term::Ac(Box::new(t))
                    })
                }
                "exists" | "forall" | "and" | "or" | "not" => {
                    err(pos, format!("keyword `{name}` cannot be used as a term"))
                }
                _ => {
                    // coset constants d1, d2, …
                    if let Some(rest) = name.strip_prefix('d') {
                        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                            let idx: usize = rest.parse().map_err(|_| ParseError::Syntax {
                                pos,
                                msg: "coset constant index out of range".into(),
                            })?;
                            if idx == 0 {
                                return err(pos, "coset constants are numbered from 1");
                            }
                            return Ok(Term::CosetConst(idx));
                        }
                    }
                    let sort = if matches!(self.peek(), Some(Tok::Colon)) {
                        self.next();
                        Some(self.sort()?)
                    } else {
                        None
                    };
                    Ok(Term::Var { name, sort })
                }
            },
            _ => err(pos, "expected a term"),
        }
    }
}

/// Parse and sort-check a formula; the result is fully annotated.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let mut f = p.formula()?;
    if p.pos != p.toks.len() {
        return err(p.peek_pos(), "trailing input after the formula");
    }
    sort_check(&mut f)?;
    Ok(f)
}
