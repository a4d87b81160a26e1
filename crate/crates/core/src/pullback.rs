//! Fiber products `R ×_{R/I} B` for a subring `B` of `R/I`, and the
//! witnesses showing such a pullback is not weakly normal.

use std::sync::Arc;

use serde::Serialize;

use crate::coeff::is_prime_u64;
use crate::error::{Error, Result};
use crate::fpring::{kernel_of_map, FPRing, RingMap, SubringOracle};
use crate::monomial::MonomialOrder;
use crate::poly::{Poly, PolyRing};
use crate::wnlab::{manaresi_witness, probe_monomials, yanagihara_check, Certificate, ManaresiOutcome};

/// Data of the diagram `R → R/I ← B`, with `B` given by generators.
#[derive(Clone, Debug)]
pub struct PullbackSpec {
    ring: Arc<FPRing>,
    ideal: Vec<Poly>,
    b_gens: Vec<Poly>,
    p: u64,
    e_bound: u32,
    quotient: Arc<FPRing>,
    b_inclusion: RingMap,
}

impl PullbackSpec {
    pub fn new(ring: &Arc<FPRing>, ideal: Vec<Poly>, b_gens: Vec<Poly>, p: u64, e_bound: u32) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        for g in ideal.iter().chain(&b_gens) {
            if g.ring() != ring.poly() {
                return Err(Error::IncompatibleContext(format!("{} vs {}", g.ring(), ring.poly())));
            }
        }
        let quotient = ring.quotient(&ideal)?.shared();
        if quotient.is_zero_ring() {
            return Err(Error::ImproperIdeal(format!("{:?}", ideal.iter().map(|g| g.to_string()).collect::<Vec<_>>())));
        }
        let names: Vec<String> = (0..b_gens.len()).map(|i| format!("b{i}")).collect();
        let free = FPRing::polynomial(&PolyRing::new(ring.coeffs().clone(), names)?).shared();
        let b_inclusion = RingMap::new(&free, &quotient, b_gens.clone())?;
        Ok(PullbackSpec { ring: ring.clone(), ideal, b_gens, p, e_bound, quotient, b_inclusion })
    }

    pub fn ring(&self) -> &Arc<FPRing> {
        &self.ring
    }

    pub fn ideal(&self) -> &[Poly] {
        &self.ideal
    }

    pub fn b_gens(&self) -> &[Poly] {
        &self.b_gens
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e_bound(&self) -> u32 {
        self.e_bound
    }

    /// `R/I`.
    pub fn quotient(&self) -> &Arc<FPRing> {
        &self.quotient
    }

    /// `B → R/I` from the free algebra on the generators of `B`.
    pub fn b_inclusion(&self) -> &RingMap {
        &self.b_inclusion
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GpiVerdict {
    /// Every variable of `R/I` has a `p^e`-th power in `B`.
    Pass,
    /// Some variable needs an exponent beyond the bound.
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GpiReport {
    pub verdict: GpiVerdict,
    /// Least `e` with `v^(p^e) ∈ B` for each variable `v` of `R/I`.
    pub exponents: Vec<(String, Option<u32>)>,
}

/// Generator-level check that `R/I` is purely inseparable over `B`.
pub fn gpi_check(spec: &PullbackSpec) -> Result<GpiReport> {
    let oracle = SubringOracle::new(spec.b_inclusion())?;
    let q = spec.quotient();
    let mut exponents = Vec::new();
    for (i, name) in q.vars().iter().enumerate() {
        let mut power = Poly::var(q.poly(), i);
        let mut found = None;
        for e in 0..=spec.e_bound {
            if oracle.contains(&q.reduce(&power)?)? {
                found = Some(e);
                break;
            }
            power = q.pow(&power, spec.p as u32)?;
        }
        exponents.push((name.clone(), found));
    }
    let verdict = if exponents.iter().all(|(_, e)| e.is_some()) { GpiVerdict::Pass } else { GpiVerdict::Indeterminate };
    Ok(GpiReport { verdict, exponents })
}

/// A presented pullback `R'` with its inclusion into `R`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub ring: Arc<FPRing>,
    pub inclusion: RingMap,
    /// Elements of `R` that the variables of `R'` map to.
    pub generators: Vec<Poly>,
}

impl Pullback {
    /// The same presentation with new variable names.
    pub fn renamed(&self, names: &[&str]) -> Result<Pullback> {
        let n = self.ring.nvars();
        if names.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: names.len() });
        }
        let poly = PolyRing::new(self.ring.coeffs().clone(), names.iter().map(|s| s.to_string()).collect())?;
        let map: Vec<usize> = (0..n).collect();
        let rels = self.ring.defining().gens().iter().map(|g| g.embed(&poly, &map)).collect::<Result<Vec<_>>>()?;
        let ring = FPRing::new(&poly, rels, self.ring.order().clone())?.shared();
        let inclusion = RingMap::new(&ring, self.inclusion.target(), self.generators.clone())?;
        Ok(Pullback { ring, inclusion, generators: self.generators.clone() })
    }
}

/// Presents `R' = R ×_{R/I} B` from the generators: lifts of the generators
/// of `B`, generators of `I` and `extra`. Constants are dropped since the
/// coefficient ring is in `R'` already. Completeness of the generating set
/// is probed on all standard monomials of `R` (and their `I`-multiples) up to
/// `probe_degree`.
pub fn fiber_product(spec: &PullbackSpec, extra: &[Poly], probe_degree: u32) -> Result<Pullback> {
    let r = spec.ring();
    let q = spec.quotient();
    let b = SubringOracle::new(spec.b_inclusion())?;
    let mut gens: Vec<Poly> = Vec::new();
    for g in spec.b_gens().iter().chain(spec.ideal()).chain(extra) {
        if g.ring() != r.poly() {
            return Err(Error::IncompatibleContext(format!("{} vs {}", g.ring(), r.poly())));
        }
        let g = r.reduce(g)?;
        if g.is_constant() || gens.contains(&g) {
            continue;
        }
        if !b.contains(&q.reduce(&g)?)? {
            return Err(Error::EscapesSubring(g.to_string()));
        }
        gens.push(g);
    }
    let names: Vec<String> = (1..=gens.len()).map(|i| format!("g{i}")).collect();
    let free = FPRing::polynomial(&PolyRing::new(r.coeffs().clone(), names)?).shared();
    let cover = RingMap::new(&free, r, gens.clone())?;
    let kernel = kernel_of_map(&cover)?;
    let ring = FPRing::new(free.poly(), kernel.into_gens(), MonomialOrder::GrevLex)?.shared();
    let inclusion = RingMap::new(&ring, r, gens.clone())?;
    let image = SubringOracle::new(&inclusion)?;
    let monos = probe_monomials(r, probe_degree)?;
    let mut probes: Vec<Poly> = Vec::new();
    for m in &monos {
        if b.contains(&q.reduce(m)?)? {
            probes.push(m.clone());
        }
    }
    for i in spec.ideal() {
        for m in &monos {
            probes.push(r.mul(i, m)?);
        }
    }
    for f in probes {
        if !image.contains(&f)? {
            return Err(Error::IncompleteGenerators(f.to_string()));
        }
    }
    Ok(Pullback { ring, inclusion, generators: gens })
}

#[derive(Clone, Debug)]
pub enum NotWeaklyNormal {
    Certified {
        /// Element of `R` outside `R'` with `p s` and `s^(p^e)` in `R'`.
        s: Poly,
        e: u32,
        certificate: Certificate,
    },
    Indeterminate,
}

/// Searches standard monomials `s` of `R` up to `degree` for `s ∉ R'`,
/// `p s ∈ R'` and `s^(p^e) ∈ R'` with `1 <= e <= e_bound`. For `e = 1` the
/// certificate is a Yanagihara violation in `R'`, otherwise a Manaresi
/// witness.
pub fn certify_not_wn(inclusion: &RingMap, p: u64, degree: u32, e_bound: u32) -> Result<NotWeaklyNormal> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let r = inclusion.target();
    let sub = inclusion.source();
    let oracle = SubringOracle::new(inclusion)?;
    for s in probe_monomials(r, degree)? {
        if oracle.contains(&s)? {
            continue;
        }
        let Some(ps) = oracle.preimage(&s.scale_int(p as i64))? else { continue };
        let mut power = s.clone();
        for e in 1..=e_bound {
            power = r.pow(&power, p as u32)?;
            let Some(top) = oracle.preimage(&power)? else { continue };
            let certificate = if e == 1 {
                yanagihara_check(sub, p, &top, &ps, &Poly::from_int(sub.poly(), p), &ps)?
            } else {
                match manaresi_witness(inclusion, &s)? {
                    ManaresiOutcome::Witness(w) => w,
                    ManaresiOutcome::NotAWitness { .. } => {
                        return Err(Error::Precondition(format!("{s} passed the power test but is not a witness")))
                    }
                }
            };
            if !certificate.is_violation() {
                return Err(Error::Precondition(format!("{s} gave a non-violating certificate")));
            }
            return Ok(NotWeaklyNormal::Certified { s, e, certificate });
        }
    }
    Ok(NotWeaklyNormal::Indeterminate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffRing;
    use crate::groebner::buchberger;

    fn zt() -> Arc<FPRing> {
        FPRing::polynomial(&PolyRing::with_vars(CoeffRing::integers(), &["T"])).shared()
    }

    fn spec(p: u64, b: &str) -> PullbackSpec {
        let r = zt();
        PullbackSpec::new(&r, vec![Poly::from_int(r.poly(), p)], vec![r.elem(b).unwrap()], p, 3).unwrap()
    }

    #[test]
    fn generically_purely_inseparable() {
        let g = gpi_check(&spec(2, "T^2")).unwrap();
        assert_eq!(g.verdict, GpiVerdict::Pass);
        assert_eq!(g.exponents, vec![("T".to_string(), Some(1))]);
        assert_eq!(gpi_check(&spec(3, "T^3")).unwrap().exponents[0].1, Some(1));
        assert_eq!(gpi_check(&spec(2, "T")).unwrap().exponents[0].1, Some(0));
        let r = zt();
        let s = PullbackSpec::new(&r, vec![r.elem("2").unwrap()], vec![r.elem("T^3").unwrap()], 2, 4).unwrap();
        assert_eq!(gpi_check(&s).unwrap().verdict, GpiVerdict::Indeterminate);
    }

    #[test]
    fn example_pullback() {
        let s = spec(2, "T^2");
        let r = s.ring().clone();
        let pb = fiber_product(&s, &[r.elem("2*T").unwrap()], 4).unwrap();
        let pb = pb.renamed(&["X", "Y"]).unwrap();
        let gb = buchberger(pb.ring.defining(), &MonomialOrder::GrevLex);
        assert_eq!(gb.basis().iter().map(|g| g.to_string()).collect::<Vec<_>>(), vec!["Y^2 - 4*X"]);
        assert_eq!(pb.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(), vec!["T^2", "2*T"]);
        match certify_not_wn(&pb.inclusion, 2, 3, 2).unwrap() {
            NotWeaklyNormal::Certified { s, e, certificate } => {
                assert_eq!(s.to_string(), "T");
                assert_eq!(e, 1);
                assert!(certificate.verify().unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_generator_detected() {
        let s = spec(2, "T^2");
        assert!(matches!(fiber_product(&s, &[], 3), Err(Error::IncompleteGenerators(_))));
        let r = s.ring().clone();
        assert!(matches!(fiber_product(&s, &[r.elem("T").unwrap()], 3), Err(Error::EscapesSubring(_))));
    }

    #[test]
    fn trivial_pullback() {
        let s = spec(2, "T");
        let pb = fiber_product(&s, &[], 3).unwrap();
        assert!(pb.ring.defining().gens().is_empty());
        assert!(matches!(certify_not_wn(&pb.inclusion, 2, 3, 2).unwrap(), NotWeaklyNormal::Indeterminate));
    }

    #[test]
    fn cube_pullback() {
        let s = spec(3, "T^3");
        let r = s.ring().clone();
        let extra = [r.elem("3*T").unwrap(), r.elem("3*T^2").unwrap()];
        let pb = fiber_product(&s, &extra, 6).unwrap();
        assert_eq!(pb.generators.len(), 3);
        // oracle: every kernel generator vanishes at (T^3, 3T, 3T^2)
        for g in pb.ring.defining().gens() {
            assert!(pb.inclusion.apply(g).unwrap().is_zero());
        }
        let free = FPRing::polynomial(pb.ring.poly()).shared();
        let (g1, g2, g3) = (free.var("g1").unwrap(), free.var("g2").unwrap(), free.var("g3").unwrap());
        // (3T)^2 = 3 * (3T^2), analogous to Y^2 = 4X
        let rel = &(&g2 * &g2) - &g3.scale_int(3);
        assert!(pb.ring.is_zero(&rel).unwrap());
        let cube = &(&g2 * &(&g2 * &g2)) - &g1.scale_int(27);
        assert!(pb.ring.is_zero(&cube).unwrap());
        match certify_not_wn(&pb.inclusion, 3, 3, 2).unwrap() {
            NotWeaklyNormal::Certified { s, certificate, .. } => {
                assert_eq!(s.to_string(), "T");
                assert!(certificate.verify().unwrap());
            }
            other => panic!("{other:?}"),
        }
    }
}
