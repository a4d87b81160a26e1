//! Finitely presented algebras and the maps between them.

mod conductor;
mod differentials;
mod graph;

use std::fmt;
use std::sync::Arc;

use crate::coeff::CoeffRing;
use crate::error::{Error, Result};
use crate::groebner::ops;
use crate::groebner::{buchberger, GroebnerBasis, Ideal};
use crate::monomial::MonomialOrder;
use crate::parse::{parse_poly, parse_poly_list};
use crate::poly::{Poly, PolyRing};

pub use conductor::{conductor, transporter, Conductor};
pub use differentials::{fitting_zero, relative_differentials, unramified_at, PresentedModule};
pub use graph::{kernel_of_map, subring_member, LinearSolver, SubringOracle};

/// `K[x_1..x_n] / J` with a cached Gröbner basis of `J`.
#[derive(Clone, Debug)]
pub struct FPRing {
    poly: Arc<PolyRing>,
    defining: Ideal,
    order: MonomialOrder,
    gb: GroebnerBasis,
    asserted_domain: bool,
}

impl PartialEq for FPRing {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly && self.gb == other.gb
    }
}

impl FPRing {
    pub fn new(poly: &Arc<PolyRing>, relations: Vec<Poly>, order: MonomialOrder) -> Result<Self> {
        let defining = Ideal::new(poly, relations)?;
        let gb = buchberger(&defining, &order);
        Ok(FPRing { poly: poly.clone(), defining, order, gb, asserted_domain: false })
    }

    /// The polynomial ring itself, with no relations.
    pub fn polynomial(poly: &Arc<PolyRing>) -> Self {
        Self::new(poly, Vec::new(), MonomialOrder::GrevLex).expect("no relations")
    }

    /// Parses `relations` as a comma-separated list over `poly`.
    pub fn parse(poly: &Arc<PolyRing>, relations: &str) -> Result<Self> {
        Self::new(poly, parse_poly_list(relations, poly)?, MonomialOrder::GrevLex)
    }

    /// Records the caller's claim that the ring is a domain; never checked.
    pub fn assert_domain(mut self, yes: bool) -> Self {
        self.asserted_domain = yes;
        self
    }

    pub fn shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn poly(&self) -> &Arc<PolyRing> {
        &self.poly
    }

    pub fn coeffs(&self) -> &CoeffRing {
        self.poly.coeffs()
    }

    pub fn vars(&self) -> &[String] {
        self.poly.vars()
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn defining(&self) -> &Ideal {
        &self.defining
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn is_asserted_domain(&self) -> bool {
        self.asserted_domain
    }

    pub fn is_zero_ring(&self) -> bool {
        self.gb.is_unit()
    }

    /// Canonical representative of `f` in the quotient.
    pub fn reduce(&self, f: &Poly) -> Result<Poly> {
        self.gb.normal_form(f)
    }

    pub fn elem(&self, text: &str) -> Result<Poly> {
        self.reduce(&parse_poly(text, &self.poly)?)
    }

    pub fn var(&self, name: &str) -> Result<Poly> {
        Poly::var_named(&self.poly, name)
    }

    pub fn is_zero(&self, f: &Poly) -> Result<bool> {
        self.gb.contains(f)
    }

    pub fn equal(&self, a: &Poly, b: &Poly) -> Result<bool> {
        self.is_zero(&a.checked_sub(b)?)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        self.reduce(&a.checked_mul(b)?)
    }

    pub fn pow(&self, a: &Poly, n: u32) -> Result<Poly> {
        let mut acc = Poly::one(&self.poly);
        for _ in 0..n {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// `gens + J` as an ideal of the polynomial cover.
    pub fn lift_ideal(&self, gens: &[Poly]) -> Result<Ideal> {
        let mut all = gens.to_vec();
        all.extend(self.defining.gens().iter().cloned());
        Ideal::new(&self.poly, all)
    }

    pub fn ideal_gb(&self, gens: &[Poly]) -> Result<GroebnerBasis> {
        Ok(buchberger(&self.lift_ideal(gens)?, &self.order))
    }

    /// `R / (extra)`.
    pub fn quotient(&self, extra: &[Poly]) -> Result<FPRing> {
        let ideal = self.lift_ideal(extra)?;
        let mut q = FPRing::new(&self.poly, ideal.into_gens(), self.order.clone())?;
        q.asserted_domain = false;
        Ok(q)
    }

    /// `f ∈ √(gens + J)`.
    pub fn radical_member(&self, f: &Poly, gens: &[Poly]) -> Result<bool> {
        ops::radical_member(f, &self.lift_ideal(gens)?)
    }
}

impl fmt::Display for FPRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)?;
        if !self.defining.gens().is_empty() {
            write!(f, " / {}", self.defining)?;
        }
        Ok(())
    }
}

/// A homomorphism of finitely presented algebras over a common coefficient
/// ring, given by the images of the source variables.
#[derive(Clone, Debug)]
pub struct RingMap {
    source: Arc<FPRing>,
    target: Arc<FPRing>,
    images: Vec<Poly>,
}

impl RingMap {
    pub fn new(source: &Arc<FPRing>, target: &Arc<FPRing>, images: Vec<Poly>) -> Result<Self> {
        if source.coeffs() != target.coeffs() {
            return Err(Error::IncompatibleContext(format!(
                "map from {} to {} changes the coefficient ring",
                source.coeffs(),
                target.coeffs()
            )));
        }
        if images.len() != source.nvars() {
            return Err(Error::LengthMismatch { expected: source.nvars(), got: images.len() });
        }
        let images = images.iter().map(|f| target.reduce(f)).collect::<Result<Vec<_>>>()?;
        let map = RingMap { source: source.clone(), target: target.clone(), images };
        for rel in source.defining().gens() {
            if !map.apply(rel)?.is_zero() {
                return Err(Error::IllDefinedMap(rel.to_string()));
            }
        }
        Ok(map)
    }

    pub fn parse(source: &Arc<FPRing>, target: &Arc<FPRing>, images: &[&str]) -> Result<Self> {
        let images = images.iter().map(|t| parse_poly(t, target.poly())).collect::<Result<Vec<_>>>()?;
        Self::new(source, target, images)
    }

    pub fn identity(ring: &Arc<FPRing>) -> Self {
        let images = (0..ring.nvars()).map(|i| Poly::var(ring.poly(), i)).collect();
        Self::new(ring, ring, images).expect("identity is well defined")
    }

    pub fn source(&self) -> &Arc<FPRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FPRing> {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    /// Image of a source element, reduced in the target.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        if f.ring() != self.source.poly() {
            return Err(Error::IncompatibleContext(format!("{} vs {}", f.ring(), self.source.poly())));
        }
        self.target.reduce(&f.eval_in(self.target.poly(), &self.images)?)
    }

    pub fn compose(&self, after: &RingMap) -> Result<RingMap> {
        let images = self.images.iter().map(|f| after.apply(f)).collect::<Result<Vec<_>>>()?;
        RingMap::new(&self.source, &after.target, images)
    }
}

impl fmt::Display for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .source
            .vars()
            .iter()
            .zip(&self.images)
            .map(|(v, img)| format!("{v} -> {img}"))
            .collect();
        write!(f, "{{ {} }}", parts.join(", "))
    }
}

/// `S ⊗_R S` together with the two inclusions of `S`.
#[derive(Clone, Debug)]
pub struct TensorSquare {
    pub ring: Arc<FPRing>,
    pub left: RingMap,
    pub right: RingMap,
}

/// Presents `S ⊗_R S` by two copies of the variables of `S` (suffixes `_1`
/// and `_2`), both copies of the relations of `S` and the identification of
/// the images of `R`.
pub fn tensor_square(phi: &RingMap) -> Result<TensorSquare> {
    let s = phi.target();
    let n = s.nvars();
    let mut taken: Vec<String> = Vec::new();
    let mut names = Vec::with_capacity(2 * n);
    for suffix in ["1", "2"] {
        for v in s.vars() {
            let name = ops::fresh_name(&format!("{v}_{suffix}"), &taken);
            taken.push(name.clone());
            names.push(name);
        }
    }
    let ring = PolyRing::new(s.coeffs().clone(), names)?;
    let first: Vec<usize> = (0..n).collect();
    let second: Vec<usize> = (n..2 * n).collect();
    let mut rels = Vec::new();
    for g in s.defining().gens() {
        rels.push(g.embed(&ring, &first)?);
        rels.push(g.embed(&ring, &second)?);
    }
    for img in phi.images() {
        rels.push(img.embed(&ring, &first)?.checked_sub(&img.embed(&ring, &second)?)?);
    }
    let t = FPRing::new(&ring, rels, MonomialOrder::GrevLex)?.shared();
    let left = RingMap::new(s, &t, first.iter().map(|&i| Poly::var(&ring, i)).collect())?;
    let right = RingMap::new(s, &t, second.iter().map(|&i| Poly::var(&ring, i)).collect())?;
    Ok(TensorSquare { ring: t, left, right })
}

/// A prime ideal of an [`FPRing`], with an optional saturation element used
/// for symbolic powers. Primality is the caller's claim.
#[derive(Clone, Debug)]
pub struct PrimeSpot {
    name: String,
    ring: Arc<FPRing>,
    gens: Vec<Poly>,
    saturation: Option<Poly>,
    regular: bool,
    gb: GroebnerBasis,
}

impl PrimeSpot {
    pub fn new(name: &str, ring: &Arc<FPRing>, gens: Vec<Poly>) -> Result<Self> {
        let gb = ring.ideal_gb(&gens)?;
        if gb.is_unit() {
            return Err(Error::ImproperIdeal(name.to_string()));
        }
        let gens = gens.iter().map(|g| ring.reduce(g)).collect::<Result<Vec<_>>>()?;
        Ok(PrimeSpot { name: name.to_string(), ring: ring.clone(), gens, saturation: None, regular: false, gb })
    }

    pub fn parse(name: &str, ring: &Arc<FPRing>, gens: &str) -> Result<Self> {
        Self::new(name, ring, parse_poly_list(gens, ring.poly())?)
    }

    pub fn with_saturation(mut self, s: Poly) -> Result<Self> {
        if s.ring() != self.ring.poly() {
            return Err(Error::IncompatibleContext(format!("{} vs {}", s.ring(), self.ring.poly())));
        }
        self.saturation = Some(s);
        Ok(self)
    }

    /// Tags the spot as a regular point of the ring.
    pub fn with_regular(mut self, yes: bool) -> Self {
        self.regular = yes;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &Arc<FPRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn saturation(&self) -> Option<&Poly> {
        self.saturation.as_ref()
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    /// Gröbner basis of the prime plus the defining ideal.
    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        self.gb.contains(f)
    }

    /// `self ⊆ other`, both in the same ring.
    pub fn contained_in(&self, other: &PrimeSpot) -> Result<bool> {
        other.gb.contains_all(&self.gens)
    }
}

impl fmt::Display for PrimeSpot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_map() -> RingMap {
        let a = FPRing::parse(&PolyRing::with_vars(CoeffRing::integers(), &["X", "Y"]), "Y^2 - 4*X")
            .unwrap()
            .assert_domain(true)
            .shared();
        let s = FPRing::polynomial(&PolyRing::with_vars(CoeffRing::integers(), &["T"])).shared();
        RingMap::parse(&a, &s, &["T^2", "2*T"]).unwrap()
    }

    #[test]
    fn reduces_modulo_relations() {
        let phi = example_map();
        let a = phi.source();
        assert_eq!(a.elem("Y^2").unwrap().to_string(), "4*X");
        assert!(a.equal(&a.elem("Y^3").unwrap(), &a.elem("4*X*Y").unwrap()).unwrap());
        assert_eq!(a.to_string(), "ZZ[X,Y] / (Y^2 - 4*X)");
    }

    #[test]
    fn rejects_ill_defined_map() {
        let phi = example_map();
        let r = RingMap::parse(phi.source(), phi.target(), &["T^2", "T"]);
        assert!(matches!(r, Err(Error::IllDefinedMap(_))));
    }

    #[test]
    fn tensor_square_relations() {
        let phi = example_map();
        let t = tensor_square(&phi).unwrap();
        assert_eq!(t.ring.vars(), &["T_1".to_string(), "T_2".to_string()]);
        let rels: Vec<String> = t.ring.defining().gens().iter().map(|g| g.to_string()).collect();
        assert_eq!(rels, vec!["T_1^2 - T_2^2", "2*T_1 - 2*T_2"]);
        // oracle: both relations vanish under T_1, T_2 -> T
        let back = RingMap::parse(&t.ring, phi.target(), &["T", "T"]).unwrap();
        assert_eq!(back.target().nvars(), 1);
        for r in ["X", "Y", "X*Y + 3"] {
            let r = phi.source().elem(r).unwrap();
            let s = phi.apply(&r).unwrap();
            assert!(t.ring.equal(&t.left.apply(&s).unwrap(), &t.right.apply(&s).unwrap()).unwrap());
        }
    }

    #[test]
    fn identity_tensor_square_collapses() {
        let r = FPRing::polynomial(&PolyRing::with_vars(CoeffRing::integers(), &["x", "y"])).shared();
        let t = tensor_square(&RingMap::identity(&r)).unwrap();
        for s in ["x", "y", "x*y - 7"] {
            let s = r.elem(s).unwrap();
            assert!(t.ring.equal(&t.left.apply(&s).unwrap(), &t.right.apply(&s).unwrap()).unwrap());
        }
    }

    #[test]
    fn improper_prime_rejected() {
        let phi = example_map();
        assert!(matches!(PrimeSpot::parse("P", phi.source(), "2, X - 1, Y - 3"), Err(Error::ImproperIdeal(_))));
        let p = PrimeSpot::parse("P", phi.source(), "2, Y").unwrap();
        assert!(p.contains(&phi.source().elem("4*X").unwrap()).unwrap());
        assert!(!p.contains(&phi.source().elem("X").unwrap()).unwrap());
    }
}
