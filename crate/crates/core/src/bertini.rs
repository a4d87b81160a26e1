//! Hyperplane sections through points of projective space: specialization,
//! section elements, symbolic powers and exhaustive scans over `P^d(F_p)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::is_prime_u64;
use crate::error::{Error, Result};
use crate::fpring::{FPRing, PrimeSpot};
use crate::groebner::{buchberger, ops, GroebnerBasis, Ideal};
use crate::poly::Poly;

/// A point of `P^d(F_p)` whose first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjPoint {
    p: u64,
    coords: Vec<u64>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(p));
    let x = e.x.mod_floor(&BigInt::from(p));
    u64::try_from(x).expect("residue fits")
}

impl ProjPoint {
    /// Normalizes residues modulo `p`; the zero vector is rejected.
    pub fn new(p: u64, coords: &[u64]) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        let coords: Vec<u64> = coords.iter().map(|c| c % p).collect();
        let Some(&lead) = coords.iter().find(|&&c| c != 0) else { return Err(Error::ZeroVector) };
        let inv = inv_mod(lead, p) as u128;
        let coords = coords.iter().map(|&c| ((c as u128 * inv) % p as u128) as u64).collect();
        Ok(ProjPoint { p, coords })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// All points of `P^d(F_p)` in canonical form, ordered by the position of
    /// the leading 1 and then lexicographically.
    pub fn enumerate(p: u64, d: usize) -> Result<Vec<ProjPoint>> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        let mut out = Vec::new();
        for lead in 0..=d {
            let free = d - lead;
            let count = p.checked_pow(free as u32).ok_or_else(|| Error::Precondition("too many points".into()))?;
            for idx in 0..count {
                let mut coords = vec![0; d + 1];
                coords[lead] = 1;
                let mut rest = idx;
                for k in (lead + 1..=d).rev() {
                    coords[k] = rest % p;
                    rest /= p;
                }
                out.push(ProjPoint { p, coords });
            }
        }
        Ok(out)
    }

    /// Lift with least nonnegative residues.
    pub fn lift(&self) -> Vec<BigInt> {
        self.coords.iter().map(|&c| BigInt::from(c)).collect()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

/// Reduction modulo `p` of an integer point of `P^d`, after dividing out the
/// largest common power of `p`.
pub fn specialize(lift: &[BigInt], p: u64) -> Result<ProjPoint> {
    if lift.iter().all(|c| c.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let pb = BigInt::from(p);
    let valuation = |c: &BigInt| {
        let mut v = 0u32;
        let mut c = c.clone();
        while (&c % &pb).is_zero() {
            c /= &pb;
            v += 1;
        }
        v
    };
    let v = lift.iter().filter(|c| !c.is_zero()).map(valuation).min().unwrap();
    let scale = pb.pow(v);
    let coords: Vec<u64> = lift
        .iter()
        .map(|c| u64::try_from((c / &scale).mod_floor(&pb)).expect("residue fits"))
        .collect();
    ProjPoint::new(p, &coords)
}

/// The ring, the chosen generators `x_0..x_d` and the primes to avoid.
#[derive(Clone, Debug)]
pub struct SectionContext {
    ring: Arc<FPRing>,
    xs: Vec<Poly>,
    bad: Vec<PrimeSpot>,
    wn: Vec<PrimeSpot>,
}

impl SectionContext {
    pub fn new(ring: &Arc<FPRing>, xs: Vec<Poly>, bad: Vec<PrimeSpot>, wn: Vec<PrimeSpot>) -> Result<Self> {
        let xs = xs.iter().map(|x| ring.reduce(x)).collect::<Result<Vec<_>>>()?;
        if xs.is_empty() || xs.iter().all(|x| x.is_zero()) {
            return Err(Error::Precondition("the generator list is zero".into()));
        }
        for spot in bad.iter().chain(&wn) {
            if spot.ring().as_ref() != ring.as_ref() {
                return Err(Error::IncompatibleContext(format!("{} is not a prime of {ring}", spot.name())));
            }
        }
        if let Some(spot) = wn.iter().find(|s| s.saturation().is_none()) {
            return Err(Error::MissingSaturation(spot.name().to_string()));
        }
        Ok(SectionContext { ring: ring.clone(), xs, bad, wn })
    }

    pub fn ring(&self) -> &Arc<FPRing> {
        &self.ring
    }

    pub fn xs(&self) -> &[Poly] {
        &self.xs
    }

    pub fn bad(&self) -> &[PrimeSpot] {
        &self.bad
    }

    pub fn wn(&self) -> &[PrimeSpot] {
        &self.wn
    }
}

/// `Σ a_i x_i` for integer coordinates `a`.
pub fn section_element(ctx: &SectionContext, lift: &[BigInt]) -> Result<Poly> {
    if lift.len() != ctx.xs.len() {
        return Err(Error::LengthMismatch { expected: ctx.xs.len(), got: lift.len() });
    }
    let r = ctx.ring();
    let mut acc = Poly::zero(r.poly());
    for (a, x) in lift.iter().zip(&ctx.xs) {
        acc = &acc + &x.scale(&r.coeffs().from_int(a.clone()));
    }
    r.reduce(&acc)
}

#[derive(Clone, Debug)]
pub struct SymbolicPower {
    /// Generators in the polynomial cover, including the defining relations.
    pub ideal: Ideal,
    pub gb: GroebnerBasis,
    /// Quotient steps until the saturation chain stabilized.
    pub steps: usize,
}

fn ideal_power(gens: &[Poly], n: u32) -> Vec<Poly> {
    let mut acc = vec![Poly::one(gens[0].ring())];
    for _ in 0..n {
        let mut next: Vec<Poly> = Vec::new();
        for a in &acc {
            for g in gens {
                let prod = a * g;
                if !prod.is_zero() && !next.contains(&prod) {
                    next.push(prod);
                }
            }
        }
        acc = next;
    }
    acc
}

/// `p^(n) = p^n R_p ∩ R`, computed as `(p^n + J) : s^∞` for the saturation
/// element `s ∉ p` carried by the spot. The result is checked to lie in `p`;
/// otherwise `s` is rejected.
pub fn symbolic_power(spot: &PrimeSpot, n: u32) -> Result<SymbolicPower> {
    let s = spot.saturation().ok_or_else(|| Error::MissingSaturation(spot.name().to_string()))?;
    if n == 0 {
        return Err(Error::Precondition("symbolic powers start at n = 1".into()));
    }
    if spot.contains(s)? {
        return Err(Error::UnsuitableSaturation(format!("{s} lies in {}", spot.name())));
    }
    let ring = spot.ring();
    let gens = if spot.gens().is_empty() { Vec::new() } else { ideal_power(spot.gens(), n) };
    let power = ring.lift_ideal(&gens)?;
    let sat = ops::saturate(&power, s)?;
    if !spot.gb().contains_all(sat.ideal.gens())? {
        return Err(Error::UnsuitableSaturation(format!("the saturation by {s} leaves {}", spot.name())));
    }
    let gb = buchberger(&sat.ideal, ring.order());
    Ok(SymbolicPower { ideal: sat.ideal, gb, steps: sat.steps })
}

/// `p^n + J` as a Gröbner basis, for comparison with the symbolic power.
pub fn ordinary_power(spot: &PrimeSpot, n: u32) -> Result<GroebnerBasis> {
    let gens = if spot.gens().is_empty() { Vec::new() } else { ideal_power(spot.gens(), n) };
    spot.ring().ideal_gb(&gens)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointVerdict {
    pub point: String,
    pub lift: Vec<String>,
    pub section: String,
    pub good: bool,
    pub failures: Vec<String>,
    /// Spots tagged regular where the section lies in `p` but not in
    /// `p^(2)`, so the section ring stays regular there.
    pub regular_at: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub q: u64,
    pub dimension: usize,
    pub total: usize,
    pub good: usize,
    pub verdicts: Vec<PointVerdict>,
}

/// Judges a single lift: the section must avoid every bad prime and the
/// symbolic square of every spot.
pub fn judge_point(ctx: &SectionContext, squares: &[GroebnerBasis], lift: &[BigInt]) -> Result<(Poly, Vec<String>, Vec<String>)> {
    let x = section_element(ctx, lift)?;
    let mut failures = Vec::new();
    let mut regular = Vec::new();
    for spot in &ctx.bad {
        if spot.contains(&x)? {
            failures.push(format!("in bad prime {}", spot.name()));
        }
    }
    for (spot, sq) in ctx.wn.iter().zip(squares) {
        if sq.contains(&x)? {
            failures.push(format!("in symbolic square of {}", spot.name()));
        } else if spot.is_regular() && spot.contains(&x)? {
            regular.push(spot.name().to_string());
        }
    }
    Ok((x, failures, regular))
}

/// Symbolic squares of the spots in `ctx.wn`, in order.
pub fn symbolic_squares(ctx: &SectionContext) -> Result<Vec<GroebnerBasis>> {
    ctx.wn.iter().map(|s| symbolic_power(s, 2).map(|p| p.gb)).collect()
}

/// Scans every point of `P^d(F_q)` (`d + 1` generators) with the least
/// nonnegative lift. Only prime `q` is supported.
pub fn bertini_scan(ctx: &SectionContext, q: u64) -> Result<ScanReport> {
    if !is_prime_u64(q) {
        return Err(Error::NotPrime(q.to_string()));
    }
    let d = ctx.xs.len() - 1;
    let squares = symbolic_squares(ctx)?;
    let points = ProjPoint::enumerate(q, d)?;
    let verdicts = points
        .par_iter()
        .map(|pt| {
            let lift = pt.lift();
            let (x, failures, regular_at) = judge_point(ctx, &squares, &lift)?;
            Ok(PointVerdict {
                point: pt.to_string(),
                lift: lift.iter().map(|c| c.to_string()).collect(),
                section: x.to_string(),
                good: failures.is_empty(),
                failures,
                regular_at,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let good = verdicts.iter().filter(|v| v.good).count();
    Ok(ScanReport { q, dimension: d, total: verdicts.len(), good, verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffRing;
    use crate::poly::PolyRing;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn specialization() {
        assert_eq!(specialize(&big(&[1, 3]), 2).unwrap().coords(), &[1, 1]);
        assert_eq!(specialize(&big(&[2, 1]), 2).unwrap().coords(), &[0, 1]);
        assert_eq!(specialize(&big(&[2, 6]), 2).unwrap().coords(), &[1, 1]);
        assert_eq!(specialize(&big(&[0, 0]), 2), Err(Error::ZeroVector));
        assert_eq!(specialize(&big(&[-3, 6]), 3).unwrap().coords(), &[1, 1]);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(ProjPoint::enumerate(2, 1).unwrap().len(), 3);
        assert_eq!(ProjPoint::enumerate(3, 2).unwrap().len(), 13);
        let pts = ProjPoint::enumerate(5, 2).unwrap();
        let mut sorted = pts.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), 31);
    }

    fn zx() -> Arc<FPRing> {
        FPRing::polynomial(&PolyRing::with_vars(CoeffRing::integers(), &["x"])).shared()
    }

    #[test]
    fn sections() {
        let r = zx();
        let ctx = SectionContext::new(&r, vec![r.elem("2").unwrap(), r.elem("x").unwrap()], vec![], vec![]).unwrap();
        assert_eq!(section_element(&ctx, &big(&[1, 1])).unwrap().to_string(), "x + 2");
        assert_eq!(section_element(&ctx, &big(&[1, 0])).unwrap().to_string(), "2");
        assert!(matches!(section_element(&ctx, &big(&[1])), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn regular_symbolic_square() {
        let r = zx();
        let p = PrimeSpot::parse("P", &r, "2, x").unwrap().with_saturation(r.elem("x + 1").unwrap()).unwrap();
        let sq = symbolic_power(&p, 2).unwrap();
        assert_eq!(sq.steps, 0);
        assert_eq!(sq.gb, ordinary_power(&p, 2).unwrap());
        let shown: Vec<String> = sq.gb.basis().iter().map(|g| g.to_string()).collect();
        assert_eq!(shown, vec!["4", "2*x", "x^2"]);
        let one = symbolic_power(&p, 1).unwrap();
        assert_eq!(one.gb, *p.gb());
        let bad = PrimeSpot::parse("P", &r, "2, x").unwrap().with_saturation(r.elem("x").unwrap()).unwrap();
        assert!(matches!(symbolic_power(&bad, 2), Err(Error::UnsuitableSaturation(_))));
    }

    #[test]
    fn cone_symbolic_square() {
        let r = FPRing::parse(&PolyRing::with_vars(CoeffRing::rationals(), &["x", "y", "z"]), "x*y - z^2")
            .unwrap()
            .shared();
        let p = PrimeSpot::parse("P", &r, "x, z").unwrap().with_saturation(r.elem("y").unwrap()).unwrap();
        let sq = symbolic_power(&p, 2).unwrap();
        let x = r.elem("x").unwrap();
        assert!(sq.gb.contains(&x).unwrap());
        assert!(!ordinary_power(&p, 2).unwrap().contains(&x).unwrap());
    }

    #[test]
    fn scans() {
        let r = zx();
        let xs = vec![r.elem("2").unwrap(), r.elem("x").unwrap()];
        let p = PrimeSpot::parse("P", &r, "2, x").unwrap().with_saturation(r.elem("x + 1").unwrap()).unwrap();
        let good = SectionContext::new(&r, xs.clone(), vec![], vec![p.clone().with_regular(true)]).unwrap();
        let rep = bertini_scan(&good, 2).unwrap();
        assert_eq!((rep.good, rep.total), (3, 3));
        assert!(rep.verdicts.iter().all(|v| v.regular_at == vec!["P".to_string()]));
        let bad = SectionContext::new(&r, xs, vec![p], vec![]).unwrap();
        let rep = bertini_scan(&bad, 2).unwrap();
        assert_eq!((rep.good, rep.total), (0, 3));
    }
}
