//! Small recursive-descent parser for arithmetic expressions.
//!
//! Grammar: `expr = term (('+'|'-') term)*`, `term = unary (('*'|'/') unary)*`,
//! `unary = '-' unary | power`, `power = atom ('^' int)?`,
//! `atom = number | ident | '(' expr ')'`. Identifiers may carry trailing
//! primes (`P'`). The target algebra decides what identifiers mean.

use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use super::rational::{parse_rational, Rational};
use super::var::Var;
use crate::error::{Error, Result};

pub trait Algebra: Sized + Clone {
    fn from_rational(r: Rational) -> Self;
    fn from_ident(name: &str) -> std::result::Result<Self, String>;
    fn add(self, o: Self) -> Self;
    fn neg(self) -> Self;
    fn mul(self, o: Self) -> std::result::Result<Self, String>;
    fn div(self, o: Self) -> std::result::Result<Self, String>;
    fn pow(self, k: u32) -> std::result::Result<Self, String> {
        let mut acc = Self::from_rational(Rational::from_integer(1.into()));
        for _ in 0..k {
            acc = acc.mul(self.clone())?;
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_ascii_digit() || chars[j].1 == '.') {
                j += 1;
            }
            out.push((pos, Tok::Num(chars[i..j].iter().map(|c| c.1).collect())));
            i = j;
        } else if ch.is_alphabetic() || ch == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_') {
                j += 1;
            }
            while j < chars.len() && chars[j].1 == '\'' {
                j += 1;
            }
            out.push((pos, Tok::Ident(chars[i..j].iter().map(|c| c.1).collect())));
            i = j;
        } else if "+-*/^()".contains(ch) {
            out.push((pos, Tok::Op(ch)));
            i += 1;
        } else {
            return Err(Error::Parse { pos, msg: format!("unexpected character {ch:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn lift<T>(&self, r: std::result::Result<T, String>) -> Result<T> {
        r.map_err(|msg| Error::Parse { pos: self.pos(), msg })
    }

    fn expr<A: Algebra>(&mut self) -> Result<A> {
        let mut acc = self.term::<A>()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.i += 1;
            let t = self.term::<A>()?;
            acc = acc.add(if op == '-' { t.neg() } else { t });
        }
        Ok(acc)
    }

    fn term<A: Algebra>(&mut self) -> Result<A> {
        let mut acc = self.unary::<A>()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.i += 1;
            let t = self.unary::<A>()?;
            acc = if op == '*' { self.lift(acc.mul(t))? } else { self.lift(acc.div(t))? };
        }
        Ok(acc)
    }

    fn unary<A: Algebra>(&mut self) -> Result<A> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.i += 1;
                Ok(self.unary::<A>()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.i += 1;
                self.unary::<A>()
            }
            _ => self.power::<A>(),
        }
    }

    fn power<A: Algebra>(&mut self) -> Result<A> {
        let base = self.atom::<A>()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.i += 1;
            let Some(Tok::Num(n)) = self.peek().cloned() else {
                return self.err("expected a nonnegative integer exponent");
            };
            let k: u32 = match n.parse() {
                Ok(k) => k,
                Err(_) => return self.err(format!("bad exponent {n:?}")),
            };
            self.i += 1;
            return self.lift(base.pow(k));
        }
        Ok(base)
    }

    fn atom<A: Algebra>(&mut self) -> Result<A> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                let r = parse_rational(&n)
                    .map_err(|_| Error::Parse { pos: self.pos(), msg: format!("bad number {n:?}") })?;
                self.i += 1;
                Ok(A::from_rational(r))
            }
            Some(Tok::Ident(name)) => {
                let v = self.lift(A::from_ident(&name))?;
                self.i += 1;
                Ok(v)
            }
            Some(Tok::Op('(')) => {
                self.i += 1;
                let v = self.expr::<A>()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return self.err("expected ')'");
                }
                self.i += 1;
                Ok(v)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse a complete expression into any [`Algebra`].
pub fn parse_expr<A: Algebra>(s: &str) -> Result<A> {
    let toks = lex(s)?;
    let mut p = Parser { toks, i: 0, end: s.len() };
    let v = p.expr::<A>()?;
    if p.i != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

impl Algebra for RatFunc {
    fn from_rational(r: Rational) -> Self {
        RatFunc::constant(r)
    }
    fn from_ident(name: &str) -> std::result::Result<Self, String> {
        Var::from_name(name).map(RatFunc::var).ok_or_else(|| format!("unknown variable {name:?}"))
    }
    fn add(self, o: Self) -> Self {
        &self + &o
    }
    fn neg(self) -> Self {
        -self
    }
    fn mul(self, o: Self) -> std::result::Result<Self, String> {
        Ok(&self * &o)
    }
    fn div(self, o: Self) -> std::result::Result<Self, String> {
        if o.is_zero() {
            return Err("division by zero".into());
        }
        Ok(&self / &o)
    }
    fn pow(self, k: u32) -> std::result::Result<Self, String> {
        Ok(RatFunc::pow(&self, k))
    }
}

pub fn parse_ratfunc(s: &str) -> Result<RatFunc> {
    parse_expr::<RatFunc>(s)
}

/// Parse a polynomial; divisions are allowed only by nonzero constants.
pub fn parse_poly(s: &str) -> Result<MultiPoly> {
    let r = parse_ratfunc(s)?;
    r.to_poly().map_err(|_| Error::Parse { pos: 0, msg: format!("not a polynomial: {s:?}") })
}

/// Parse `name=value` pairs, e.g. `g2=1/2`.
pub fn parse_assignment(s: &str) -> Result<(Var, Rational)> {
    let (n, v) = s.split_once('=').ok_or(Error::Parse { pos: 0, msg: format!("expected name=value, got {s:?}") })?;
    let var = Var::from_name(n.trim()).ok_or(Error::Parse { pos: 0, msg: format!("unknown variable {n:?}") })?;
    let val = parse_ratfunc(v)?
        .constant_value()
        .ok_or(Error::Parse { pos: n.len() + 1, msg: "value must be a constant".into() })?;
    Ok((var, val))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn parses_conditions() {
        let p = parse_poly("9*c + 3*e^2").unwrap();
        assert_eq!(p.to_string(), "9*c + 3*e^2");
        let q = parse_poly("-(c - 2*e)^2/4").unwrap();
        assert_eq!(q, parse_poly("-c^2/4 + c*e - e^2").unwrap());
        assert_eq!(parse_poly("1.5*g2").unwrap(), MultiPoly::var(Var::G2).scale(&rat(3, 2)));
    }

    #[test]
    fn round_trip_through_display() {
        let p = parse_poly("3*lambda*e - 7/2*g3 + u2*c^3").unwrap();
        assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn errors_have_positions() {
        match parse_poly("c + * e") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_poly("c/e").is_err());
        assert!(parse_poly("foo").is_err());
        assert!(parse_ratfunc("1/(c-c)").is_err());
    }

    #[test]
    fn assignments() {
        assert_eq!(parse_assignment("g2=-1/3").unwrap(), (Var::G2, rat(-1, 3)));
        assert_eq!(parse_assignment("c = 2").unwrap(), (Var::C, int(2)));
    }
}
