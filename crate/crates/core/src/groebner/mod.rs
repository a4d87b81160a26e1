//! Ideals, Gröbner bases and membership.

mod kernel;
pub mod ops;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::parse::parse_poly_list;
use crate::poly::{Poly, PolyRing};

pub(crate) use kernel::{Kernel, TermVec};

/// An ideal given by generators; zero generators are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    gens: Vec<Poly>,
}

impl Ideal {
    pub fn new(ring: &Arc<PolyRing>, gens: Vec<Poly>) -> Result<Self> {
        for g in &gens {
            if g.ring() != ring {
                return Err(Error::IncompatibleContext(format!(
                    "generator {g} lives in {} not {ring}",
                    g.ring()
                )));
            }
        }
        Ok(Ideal { ring: ring.clone(), gens: gens.into_iter().filter(|g| !g.is_zero()).collect() })
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Ideal { ring: ring.clone(), gens: Vec::new() }
    }

    pub fn unit(ring: &Arc<PolyRing>) -> Self {
        Ideal { ring: ring.clone(), gens: vec![Poly::one(ring)] }
    }

    pub fn parse(ring: &Arc<PolyRing>, text: &str) -> Result<Self> {
        Self::new(ring, parse_poly_list(text, ring)?)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn into_gens(self) -> Vec<Poly> {
        self.gens
    }

    pub fn groebner(&self, order: &MonomialOrder) -> GroebnerBasis {
        buchberger(self, order)
    }
}

impl std::fmt::Display for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

/// A reduced Gröbner basis; over the integers and `Z/p^k` it is strong.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ideal: Ideal,
    order: MonomialOrder,
    basis: Vec<Poly>,
    strong: bool,
    terms: Vec<TermVec>,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.basis == other.basis
    }
}

pub(crate) fn to_terms(p: &Poly, order: &MonomialOrder) -> TermVec {
    let mut t = p.terms().to_vec();
    t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    t
}

pub fn buchberger(ideal: &Ideal, order: &MonomialOrder) -> GroebnerBasis {
    let cr = ideal.ring.coeffs();
    let k = Kernel::new(cr, order);
    let gens = ideal.gens.iter().map(|g| to_terms(g, order)).collect();
    let terms = k.groebner(gens);
    let basis = terms.iter().map(|t| Poly::from_terms(&ideal.ring, t.clone())).collect();
    GroebnerBasis {
        ideal: ideal.clone(),
        order: order.clone(),
        basis,
        strong: cr.is_euclidean_non_field(),
        terms,
    }
}

impl GroebnerBasis {
    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ideal.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn is_strong(&self) -> bool {
        self.strong
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.terms.iter().map(|t| t[0].0.clone()).collect()
    }

    pub fn leading_terms(&self) -> Vec<(Monomial, crate::coeff::Coeff)> {
        self.terms.iter().map(|t| t[0].clone()).collect()
    }

    /// Re-checks the Buchberger criterion: all S-polynomials (and, over
    /// Euclidean bases, G-polynomials) reduce to zero.
    pub fn verify_certificate(&self) -> bool {
        Kernel::new(self.ring().coeffs(), &self.order).certify(&self.terms)
    }

    fn check(&self, f: &Poly) -> Result<()> {
        if f.ring() == self.ring() {
            Ok(())
        } else {
            Err(Error::IncompatibleContext(format!("{} vs {}", f.ring(), self.ring())))
        }
    }

    /// Canonical representative of `f` modulo the ideal.
    pub fn normal_form(&self, f: &Poly) -> Result<Poly> {
        self.check(f)?;
        let k = Kernel::new(self.ring().coeffs(), &self.order);
        let nf = k.reduce(to_terms(f, &self.order), &self.terms);
        Ok(Poly::from_terms(self.ring(), nf))
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn contains_all(&self, gens: &[Poly]) -> Result<bool> {
        for g in gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn normal_form(f: &Poly, gb: &GroebnerBasis) -> Result<Poly> {
    gb.normal_form(f)
}

pub fn ideal_member(f: &Poly, ideal: &Ideal, order: &MonomialOrder) -> Result<bool> {
    if f.ring() != ideal.ring() {
        return Err(Error::IncompatibleContext(format!("{} vs {}", f.ring(), ideal.ring())));
    }
    buchberger(ideal, order).contains(f)
}
