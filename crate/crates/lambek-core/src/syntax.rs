//! Concrete syntax for categories, terms, and sequents.
//!
//! Categories are written with `/`, `\`, and `.`; product binds loosest,
//! then `/` (both left-associative), then `\` which binds tightest and
//! associates to the right, so `a\b/c` is `(a\b)/c` and `a/b\c` is
//! `a/(b\c)`.  Terms wrap comma pairs in parentheses: `(a, (b, c))`.
//! Sequents are `TERM |- FORM`.
//!
//! [`render_category`] and [`render_term`] emit the minimal parentheses
//! that parse back to the same value; the round trip is exercised by the
//! property suite.

use crate::form::{Form, Term};
use thiserror::Error;

/// A parse failure, with the byte offset where it happened.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {pos}: {msg}")]
pub struct SyntaxError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError { pos, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom(String),
    Slash,
    Backslash,
    Dot,
    LParen,
    RParen,
    Comma,
    Turnstile,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            c if c.is_whitespace() => i += 1,
            '/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            '\\' => {
                toks.push((i, Tok::Backslash));
                i += 1;
            }
            '.' => {
                toks.push((i, Tok::Dot));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            ',' => {
                toks.push((i, Tok::Comma));
                i += 1;
            }
            '|' => {
                if bytes.get(i + 1) == Some(&b'-') {
                    toks.push((i, Tok::Turnstile));
                    i += 2;
                } else {
                    return err(i, "expected `|-`");
                }
            }
            _ => {
                let start = i;
                while i < bytes.len() {
                    let c = bytes[i] as char;
                    if c.is_whitespace() || "/\\.(),|".contains(c) {
                        break;
                    }
                    i += 1;
                }
                toks.push((start, Tok::Atom(src[start..i].to_string())));
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t);
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), SyntaxError> {
        let pos = self.here();
        match self.bump() {
            Some(t) if *t == want => Ok(()),
            _ => err(pos, format!("expected {what}")),
        }
    }

    // form := dotterm; dotterm := slashterm ("." slashterm)*
    fn form(&mut self) -> Result<Form, SyntaxError> {
        let mut acc = self.slash_term()?;
        while self.peek() == Some(&Tok::Dot) {
            self.bump();
            let rhs = self.slash_term()?;
            acc = Form::dot(acc, rhs);
        }
        Ok(acc)
    }

    // slashterm := bslashterm ("/" bslashterm)*
    fn slash_term(&mut self) -> Result<Form, SyntaxError> {
        let mut acc = self.bslash_term()?;
        while self.peek() == Some(&Tok::Slash) {
            self.bump();
            let rhs = self.bslash_term()?;
            acc = Form::slash(acc, rhs);
        }
        Ok(acc)
    }

    // bslashterm := atomterm ("\" bslashterm)?   (right-associative)
    fn bslash_term(&mut self) -> Result<Form, SyntaxError> {
        let lhs = self.atom_term()?;
        if self.peek() == Some(&Tok::Backslash) {
            self.bump();
            let rhs = self.bslash_term()?;
            Ok(Form::backslash(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn atom_term(&mut self) -> Result<Form, SyntaxError> {
        let pos = self.here();
        match self.bump().cloned() {
            Some(Tok::Atom(name)) => Ok(Form::At(name)),
            Some(Tok::LParen) => {
                let f = self.form()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => err(pos, "expected an atom or `(`"),
        }
    }

    // term := "(" term "," term ")" | form
    // A leading `(` is ambiguous between the two alternatives; try the pair
    // reading first and fall back to a parenthesised category.
    fn term(&mut self) -> Result<Term, SyntaxError> {
        if self.peek() == Some(&Tok::LParen) {
            let save = self.pos;
            self.bump();
            if let Ok(left) = self.term() {
                if self.peek() == Some(&Tok::Comma) {
                    self.bump();
                    let right = self.term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Term::comma(left, right));
                }
            }
            self.pos = save;
        }
        Ok(Term::one(self.form()?))
    }

    fn eof(&self, what: &str) -> Result<(), SyntaxError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            err(self.here(), format!("unexpected input after {what}"))
        }
    }
}

fn parser<'a>(toks: &'a [(usize, Tok)], src: &str) -> Parser<'a> {
    Parser { toks, pos: 0, end: src.len() }
}

/// Parse a category, e.g. `S/(S/np)`.
pub fn parse_category(src: &str) -> Result<Form, SyntaxError> {
    let toks = tokenize(src)?;
    let mut p = parser(&toks, src);
    let f = p.form()?;
    p.eof("the category")?;
    Ok(f)
}

/// Parse a term, e.g. `(S/inf, inf/np)` or a bare category.
pub fn parse_term(src: &str) -> Result<Term, SyntaxError> {
    let toks = tokenize(src)?;
    let mut p = parser(&toks, src);
    let t = p.term()?;
    p.eof("the term")?;
    Ok(t)
}

/// Parse `TERM |- FORM` into its two halves.
pub fn parse_sequent(src: &str) -> Result<(Term, Form), SyntaxError> {
    let toks = tokenize(src)?;
    let mut p = parser(&toks, src);
    let t = p.term()?;
    p.expect(Tok::Turnstile, "`|-`")?;
    let f = p.form()?;
    p.eof("the sequent")?;
    Ok((t, f))
}

// Binding strength, loosest to tightest: Dot 0, Slash 1, Backslash 2, At 3.
pub(crate) fn level(f: &Form) -> u8 {
    match f {
        Form::Dot(..) => 0,
        Form::Slash(..) => 1,
        Form::Backslash(..) => 2,
        Form::At(_) => 3,
    }
}

fn render_at(f: &Form, req: u8, out: &mut String) {
    if level(f) < req {
        out.push('(');
        render_at(f, 0, out);
        out.push(')');
        return;
    }
    match f {
        Form::At(name) => out.push_str(name),
        Form::Dot(l, r) => {
            render_at(l, 0, out);
            out.push('.');
            render_at(r, 1, out);
        }
        Form::Slash(l, r) => {
            render_at(l, 1, out);
            out.push('/');
            render_at(r, 2, out);
        }
        Form::Backslash(l, r) => {
            render_at(l, 3, out);
            out.push('\\');
            render_at(r, 2, out);
        }
    }
}

/// Render a category with minimal parentheses.
pub fn render_category(f: &Form) -> String {
    let mut out = String::new();
    render_at(f, 0, &mut out);
    out
}

/// Render a term; comma pairs are always parenthesised.
pub fn render_term(t: &Term) -> String {
    match t {
        Term::OneForm(f) => render_category(f),
        Term::Comma(l, r) => format!("({}, {})", render_term(l), render_term(r)),
    }
}

/// Render `TERM |- FORM`.
pub fn render_sequent_text(ante: &Term, succ: &Form) -> String {
    format!("{} |- {}", render_term(ante), render_category(succ))
}
