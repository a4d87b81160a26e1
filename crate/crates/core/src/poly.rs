//! Sparse multivariate polynomials in canonical form.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::coeff::{Coeff, CoeffKind, CoeffRing};
use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};

/// A polynomial ring: coefficient ring plus an ordered list of variable names.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    coeffs: CoeffRing,
    vars: Vec<String>,
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PolyRing {
    pub fn new(coeffs: CoeffRing, vars: Vec<String>) -> Result<Arc<Self>> {
        for (i, v) in vars.iter().enumerate() {
            if !valid_identifier(v) {
                return Err(Error::Parse { pos: 0, msg: format!("invalid variable name `{v}`") });
            }
            if vars[..i].contains(v) {
                return Err(Error::Parse { pos: 0, msg: format!("duplicate variable `{v}`") });
            }
        }
        Ok(Arc::new(PolyRing { coeffs, vars }))
    }

    /// Convenience constructor for string slices; panics on invalid names.
    pub fn with_vars(coeffs: CoeffRing, vars: &[&str]) -> Arc<Self> {
        Self::new(coeffs, vars.iter().map(|s| s.to_string()).collect()).expect("valid variables")
    }

    pub fn coeffs(&self) -> &CoeffRing {
        &self.coeffs
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.coeffs, self.vars.join(","))
    }
}

/// Terms are kept strictly descending in graded reverse lexicographic
/// order with nonzero canonical coefficients, so derived equality is ring
/// equality.
#[derive(Clone, Debug)]
pub struct Poly {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, Coeff)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
            && self.terms == other.terms
    }
}

impl Eq for Poly {}

const STORAGE: MonomialOrder = MonomialOrder::GrevLex;

/// Ring homomorphism on coefficients, where one exists.
fn map_coeff(from: &CoeffRing, to: &CoeffRing, c: &Coeff) -> Result<Coeff> {
    if from == to {
        return Ok(c.clone());
    }
    let ok = match (from.kind(), to.kind()) {
        (CoeffKind::Integers, _) => true,
        (CoeffKind::IntegerModPrimePower(p, k), CoeffKind::IntegerModPrimePower(q, j)) => {
            p == q && j <= k
        }
        (CoeffKind::IntegerModPrimePower(p, _), CoeffKind::PrimeField(q)) => p == q,
        _ => false,
    };
    if !ok {
        return Err(Error::IncompatibleContext(format!("no coefficient map {from} -> {to}")));
    }
    to.from_rational(c)
}

impl Poly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Poly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Coeff) -> Self {
        Self::from_terms(ring, vec![(Monomial::one(ring.nvars()), c)])
    }

    pub fn from_int(ring: &Arc<PolyRing>, i: impl Into<BigInt>) -> Self {
        Self::constant(ring, ring.coeffs().from_int(i))
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Self::from_terms(ring, vec![(Monomial::var(ring.nvars(), i), ring.coeffs().one())])
    }

    pub fn var_named(ring: &Arc<PolyRing>, name: &str) -> Result<Self> {
        let i = ring.var_index(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var(ring, i))
    }

    /// Builds a canonical polynomial from terms whose coefficients are
    /// already canonical ring elements; duplicates are combined.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: Vec<(Monomial, Coeff)>) -> Self {
        let cr = ring.coeffs();
        let mut acc: HashMap<Monomial, Coeff> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.nvars());
            match acc.get_mut(&m) {
                Some(e) => *e = cr.add(e, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| STORAGE.cmp(&b.0, &a.0));
        Poly { ring: ring.clone(), terms }
    }

    /// Terms with arbitrary rational coefficients, mapped into the ring.
    pub fn from_rational_terms(
        ring: &Arc<PolyRing>,
        terms: Vec<(Monomial, Coeff)>,
    ) -> Result<Self> {
        let terms = terms
            .into_iter()
            .map(|(m, c)| Ok((m, ring.coeffs().from_rational(&c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(ring, terms))
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Coeff)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Coeff> {
        match self.terms.as_slice() {
            [] => Some(Coeff::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<&(Monomial, Coeff)> {
        self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0))
    }

    /// Indices of variables that occur in some term.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exponents()[i] > 0))
            .collect()
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::IncompatibleContext(format!("{} vs {}", self.ring, other.ring)))
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self::from_terms(&self.ring, terms))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.checked_add(&other.neg_poly())
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let cr = self.ring.coeffs();
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                terms.push((m1.mul(m2), cr.mul(c1, c2)));
            }
        }
        Ok(Self::from_terms(&self.ring, terms))
    }

    fn neg_poly(&self) -> Poly {
        let cr = self.ring.coeffs();
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), cr.neg(c))).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        let cr = self.ring.coeffs();
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), cr.mul(a, c))).collect();
        Self::from_terms(&self.ring, terms)
    }

    pub fn scale_int(&self, i: i64) -> Poly {
        self.scale(&self.ring.coeffs().from_int(i))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    /// Substitutes `images[i]` for variable `i`; all images live in `target`.
    pub fn eval_in(&self, target: &Arc<PolyRing>, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::LengthMismatch { expected: self.ring.nvars(), got: images.len() });
        }
        for img in images {
            if img.ring != *target {
                return Err(Error::IncompatibleContext(format!(
                    "image in {} but target is {}",
                    img.ring, target
                )));
            }
        }
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        let mut result = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, map_coeff(self.ring.coeffs(), target.coeffs(), c)?);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            result = &result + &t;
        }
        Ok(result)
    }

    /// Moves the polynomial into `target`, sending variable `i` to
    /// variable `var_map[i]` and mapping coefficients.
    pub fn embed(&self, target: &Arc<PolyRing>, var_map: &[usize]) -> Result<Poly> {
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; n];
                for (i, &x) in m.exponents().iter().enumerate() {
                    e[var_map[i]] += x;
                }
                Ok((Monomial::from_exponents(e), map_coeff(self.ring.coeffs(), target.coeffs(), c)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(target, terms))
    }

    /// Embeds by matching variable names.
    pub fn embed_by_name(&self, target: &Arc<PolyRing>) -> Result<Poly> {
        let map = self
            .ring
            .vars()
            .iter()
            .map(|v| target.var_index(v).ok_or_else(|| Error::UnknownVariable(v.clone())))
            .collect::<Result<Vec<_>>>()?;
        self.embed(target, &map)
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let cr = self.ring.coeffs();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponents()[var] > 0)
            .map(|(m, c)| {
                let mut e = m.exponents().to_vec();
                let k = e[var];
                e[var] -= 1;
                (Monomial::from_exponents(e), cr.mul(c, &cr.from_int(k)))
            })
            .collect();
        Self::from_terms(&self.ring, terms)
    }

    /// Exact quotient `self / d` over a coefficient domain, if it exists.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let cr = self.ring.coeffs();
        let (lm, lc) = d.leading_term(&STORAGE)?.clone();
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            if !lm.divides(&m) {
                return None;
            }
            let q = cr.divides(&lc, &c)?;
            let t = m.div(&lm);
            rem = &rem - &d.mul_monomial(&t).scale(&q);
            quotient.push((t, q));
        }
        Some(Self::from_terms(&self.ring, quotient))
    }

    fn fmt_monomial(&self, m: &Monomial) -> String {
        m.exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.ring.vars()[i].clone()
                } else {
                    format!("{}^{}", self.ring.vars()[i], e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", self.fmt_monomial(m))?;
            } else {
                write!(f, "{}*{}", abs, self.fmt_monomial(m))?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomials from the same ring")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomials from the same ring")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomials from the same ring")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_poly()
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_poly()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn zxy() -> Arc<PolyRing> {
        PolyRing::with_vars(CoeffRing::integers(), &["X", "Y"])
    }

    #[test]
    fn example_relation_expands() {
        let r = zxy();
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let f = &(&y * &y) - &x.scale_int(4);
        assert_eq!(f.to_string(), "Y^2 - 4*X");
        assert!((&f + &(-&f)).is_zero());
    }

    #[test]
    fn binomial_square() {
        let r = PolyRing::with_vars(CoeffRing::integers(), &["T1", "T2"]);
        let d = &Poly::var(&r, 0) - &Poly::var(&r, 1);
        assert_eq!(d.pow(2).to_string(), "T1^2 - 2*T1*T2 + T2^2");
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = Poly::var(&zxy(), 0);
        let q = PolyRing::with_vars(CoeffRing::rationals(), &["X", "Y"]);
        let b = Poly::var(&q, 0);
        assert!(matches!(a.checked_add(&b), Err(Error::IncompatibleContext(_))));
        assert!(matches!(a.checked_mul(&b), Err(Error::IncompatibleContext(_))));
    }

    #[test]
    fn exact_division() {
        let r = zxy();
        let f = parse_poly("(X - Y)*(2*X + 3)", &r).unwrap();
        let d = parse_poly("2*X + 3", &r).unwrap();
        assert_eq!(f.div_exact(&d).unwrap().to_string(), "X - Y");
        assert!(parse_poly("X + 1", &r).unwrap().div_exact(&d).is_none());
    }

    #[test]
    fn evaluation_and_derivative() {
        let r = zxy();
        let t = PolyRing::with_vars(CoeffRing::integers(), &["T"]);
        let f = parse_poly("Y^2 - 4*X", &r).unwrap();
        let imgs = [parse_poly("T^2", &t).unwrap(), parse_poly("2*T", &t).unwrap()];
        assert!(f.eval_in(&t, &imgs).unwrap().is_zero());
        assert_eq!(f.derivative(1).to_string(), "2*Y");
    }

    #[test]
    fn coefficient_maps() {
        let f = parse_poly("3*X - 5", &zxy()).unwrap();
        let gf2 = PolyRing::with_vars(CoeffRing::prime_field(2).unwrap(), &["X", "Y"]);
        assert_eq!(f.embed_by_name(&gf2).unwrap().to_string(), "X + 1");
        let q = PolyRing::with_vars(CoeffRing::rationals(), &["X", "Y"]);
        let g = parse_poly("X/2", &q).unwrap();
        assert!(g.embed_by_name(&gf2).is_err());
    }
}
