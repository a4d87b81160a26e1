//! Polynomial expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Division is only allowed by constants that are units of the
//! coefficient ring.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Int(text[start..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ring: &'a Arc<PolyRing>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let at = self.offset();
                let d = self.unary()?;
                let cr = self.ring.coeffs();
                let inv = d
                    .constant_value()
                    .filter(|c| !num_traits::Zero::is_zero(c))
                    .ok_or_else(|| Error::Parse { pos: at, msg: "division by a non-constant or zero".into() })
                    .and_then(|c| {
                        cr.inv(&c).ok_or_else(|| Error::NotRepresentable {
                            ring: cr.to_string(),
                            msg: format!("1/{c}"),
                        })
                    })?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let n: u32 = n.try_into().map_err(|_| Error::Parse {
                        pos: self.offset(),
                        msg: "exponent too large".into(),
                    })?;
                    Ok(base.pow(n))
                }
                _ => self.err("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Poly::from_int(self.ring, n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Poly::var_named(self.ring, &name)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parser<'a>(text: &str, ring: &'a Arc<PolyRing>) -> Result<Parser<'a>> {
    Ok(Parser { toks: tokenize(text)?, pos: 0, end: text.len(), ring })
}

pub fn parse_poly(text: &str, ring: &Arc<PolyRing>) -> Result<Poly> {
    let mut p = parser(text, ring)?;
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Comma-separated list; an empty or all-whitespace string is the empty list.
pub fn parse_poly_list(text: &str, ring: &Arc<PolyRing>) -> Result<Vec<Poly>> {
    let mut p = parser(text, ring)?;
    let mut out = Vec::new();
    if p.toks.is_empty() {
        return Ok(out);
    }
    loop {
        out.push(p.expr()?);
        if p.pos == p.toks.len() {
            return Ok(out);
        }
        if !p.eat(',') {
            return p.err("expected `,`");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffRing;
    use proptest::prelude::*;

    #[test]
    fn reads_the_example_relation() {
        let r = PolyRing::with_vars(CoeffRing::integers(), &["x", "y"]);
        let f = parse_poly("y^2 - 4*x", &r).unwrap();
        assert_eq!(f.terms().len(), 2);
        assert_eq!(f.to_string(), "y^2 - 4*x");
    }

    #[test]
    fn distributes_constants() {
        let r = PolyRing::with_vars(CoeffRing::integers(), &["t"]);
        assert_eq!(parse_poly("2*(t+1)", &r).unwrap().to_string(), "2*t + 2");
        assert_eq!(parse_poly("-t^2", &r).unwrap().to_string(), "-t^2");
    }

    #[test]
    fn rejects_bad_input() {
        let r = PolyRing::with_vars(CoeffRing::integers(), &["z"]);
        assert!(matches!(parse_poly("z/2", &r), Err(Error::NotRepresentable { .. })));
        assert!(matches!(parse_poly("w + 1", &r), Err(Error::UnknownVariable(_))));
        assert!(matches!(parse_poly("z +* 1", &r), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("(z + 1", &r), Err(Error::Parse { .. })));
        let q = PolyRing::with_vars(CoeffRing::rationals(), &["z"]);
        assert_eq!(parse_poly("z/2", &q).unwrap().to_string(), "1/2*z");
        let f3 = PolyRing::with_vars(CoeffRing::prime_field(3).unwrap(), &["z"]);
        assert_eq!(parse_poly("z/2", &f3).unwrap().to_string(), "2*z");
    }

    #[test]
    fn lists() {
        let r = PolyRing::with_vars(CoeffRing::integers(), &["X", "Y"]);
        let l = parse_poly_list("2, Y^2-4*X", &r).unwrap();
        assert_eq!(l.len(), 2);
        assert!(parse_poly_list("  ", &r).unwrap().is_empty());
    }

    fn arb_poly_text() -> impl Strategy<Value = String> {
        let atom = prop_oneof![
            (-9i64..10).prop_map(|c| format!("({c})")),
            prop::sample::select(vec!["x", "y", "z"]).prop_map(String::from),
        ];
        atom.prop_recursive(3, 16, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
                (inner, 0u32..3).prop_map(|(a, n)| format!("({a})^{n}")),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(text in arb_poly_text()) {
            for cr in [CoeffRing::integers(), CoeffRing::rationals(), CoeffRing::prime_field(5).unwrap(),
                       CoeffRing::mod_prime_power(3, 2).unwrap()] {
                let r = PolyRing::with_vars(cr, &["x", "y", "z"]);
                let f = parse_poly(&text, &r).unwrap();
                let g = parse_poly(&f.to_string(), &r).unwrap();
                prop_assert_eq!(&f, &g);
                // canonicalization is idempotent
                prop_assert_eq!(Poly::from_terms(&r, f.terms().to_vec()), f);
            }
        }

        #[test]
        fn ring_axioms(a in arb_poly_text(), b in arb_poly_text(), c in arb_poly_text()) {
            let r = PolyRing::with_vars(CoeffRing::integers(), &["x", "y", "z"]);
            let (a, b, c) = (parse_poly(&a, &r).unwrap(), parse_poly(&b, &r).unwrap(), parse_poly(&c, &r).unwrap());
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        }
    }
}
