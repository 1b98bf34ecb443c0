//! Arithmetic expressions over cuts.
//!
//! Grammar: `expr := term (('+' | '-') term)*`,
//! `term := unary (('*' | '/') unary)*`, `unary := '-' unary | atom`,
//! `atom := number | 'inf' | 'sqrt' '(' expr ')' | '(' expr ')'`.
//! Division and `sqrt` need arguments that evaluate to exact rationals, so
//! `1/3` is the rational one third and `sqrt(8/9)` a cut.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

use super::{CutBudget, RationalCut};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(String),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push(Token::Number(chars[start..i].iter().collect()));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/()".contains(c) {
            out.push(Token::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    budget: CutBudget,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<RationalCut> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalCut> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul_signed(&self.unary()?, self.budget)?;
            } else if self.eat('/') {
                let d = exact(&self.unary()?, "divisor")?;
                if d.is_zero() {
                    return Err(Error::Undefined("division by zero".into()));
                }
                acc = acc.scale(&(Rational::from_integer(1.into()) / d));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalCut> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<RationalCut> {
        let token = self.peek().cloned().ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match token {
            Token::Number(s) => Ok(RationalCut::from_rational(parse_rational(&s)?)),
            Token::Ident(name) if name == "inf" => Ok(RationalCut::pos_infinity()),
            Token::Ident(name) if name == "sqrt" => {
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                RationalCut::sqrt(&exact(&arg, "sqrt argument")?)
            }
            Token::Ident(name) => Err(Error::Parse(format!("unknown name `{name}`"))),
            Token::Sym('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Token::Sym(c) => Err(Error::Parse(format!("unexpected `{c}`"))),
        }
    }
}

fn exact(x: &RationalCut, what: &str) -> Result<Rational> {
    x.as_rational()
        .cloned()
        .ok_or_else(|| Error::Invalid(format!("{what} must evaluate to a rational")))
}

/// Builds the cut denoted by `src`.
pub fn parse_expression(src: &str, budget: CutBudget) -> Result<RationalCut> {
    let mut parser = Parser {
        tokens: tokenize(src)?,
        pos: 0,
        budget,
    };
    let value = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Parse("trailing input".into()));
    }
    Ok(value)
}
