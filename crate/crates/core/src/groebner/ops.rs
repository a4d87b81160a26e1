//! Ideal arithmetic built on elimination: sums, products, intersections,
//! quotients, saturation, radical membership and fiberwise dimensions.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::{buchberger, Ideal};
use crate::coeff::{CoeffKind, CoeffRing};
use crate::error::{Error, Result};
use crate::monomial::MonomialOrder;
use crate::poly::{Poly, PolyRing};

/// A variable name not present in `taken`, derived from `base`.
pub fn fresh_name(base: &str, taken: &[String]) -> String {
    if !taken.iter().any(|v| v == base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|c| !taken.iter().any(|v| v == c))
        .unwrap()
}

/// `ring` with fresh variables prepended; returns the new ring and the
/// names actually used.
pub fn prepend_vars(ring: &Arc<PolyRing>, names: &[&str]) -> (Arc<PolyRing>, Vec<String>) {
    let mut taken: Vec<String> = ring.vars().to_vec();
    let mut fresh = Vec::new();
    for n in names {
        let f = fresh_name(n, &taken);
        taken.push(f.clone());
        fresh.push(f);
    }
    let mut vars = fresh.clone();
    vars.extend(ring.vars().iter().cloned());
    (PolyRing::new(ring.coeffs().clone(), vars).expect("fresh names"), fresh)
}

fn check_same(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::IncompatibleContext(format!("{a} vs {b}")))
    }
}

pub fn sum(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    check_same(i.ring(), j.ring())?;
    let mut gens = i.gens().to_vec();
    gens.extend(j.gens().iter().cloned());
    Ideal::new(i.ring(), gens)
}

pub fn product(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    check_same(i.ring(), j.ring())?;
    let gens = i.gens().iter().flat_map(|a| j.gens().iter().map(move |b| a * b)).collect();
    Ideal::new(i.ring(), gens)
}

/// Eliminates the first `k` variables: a generating set of `I ∩ R[x_k..]`,
/// expressed in the ring of the remaining variables.
pub fn eliminate(i: &Ideal, k: usize) -> Result<Ideal> {
    let ring = i.ring();
    let n = ring.nvars();
    let rest = PolyRing::new(ring.coeffs().clone(), ring.vars()[k..].to_vec())?;
    let gb = buchberger(i, &MonomialOrder::elimination(k));
    let lower: Vec<usize> = (k..n).collect();
    let map: Vec<usize> = (0..n).map(|v| v.saturating_sub(k)).collect();
    let gens = gb
        .basis()
        .iter()
        .filter(|g| g.terms().iter().all(|(m, _)| m.supported_in(&lower)))
        .map(|g| embed_dropping(g, &rest, &map))
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(&rest, gens)
}

fn embed_dropping(g: &Poly, target: &Arc<PolyRing>, map: &[usize]) -> Result<Poly> {
    g.embed(target, map)
}

/// Embeds an ideal of `ring` into `big`, matching variables by name.
pub fn extend_ideal(i: &Ideal, big: &Arc<PolyRing>) -> Result<Ideal> {
    let gens = i.gens().iter().map(|g| g.embed_by_name(big)).collect::<Result<Vec<_>>>()?;
    Ideal::new(big, gens)
}

pub fn intersect(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    check_same(i.ring(), j.ring())?;
    let (big, _) = prepend_vars(i.ring(), &["t"]);
    let t = Poly::var(&big, 0);
    let one_minus_t = &Poly::one(&big) - &t;
    let mut gens = Vec::new();
    for g in i.gens() {
        gens.push(&t * &g.embed_by_name(&big)?);
    }
    for g in j.gens() {
        gens.push(&one_minus_t * &g.embed_by_name(&big)?);
    }
    eliminate(&Ideal::new(&big, gens)?, 1).map(|r| rebase(r, i.ring()))
}

/// Rewraps an ideal whose ring equals `ring` by value onto the same `Arc`.
fn rebase(i: Ideal, ring: &Arc<PolyRing>) -> Ideal {
    let gens = i
        .into_gens()
        .into_iter()
        .map(|g| Poly::from_terms(ring, g.into_terms()))
        .collect();
    Ideal::new(ring, gens).expect("same ring")
}

fn require_domain(cr: &CoeffRing, op: &'static str) -> Result<()> {
    if cr.is_domain() {
        Ok(())
    } else {
        Err(Error::UnsupportedBase { ring: cr.to_string(), op })
    }
}

/// `I : f`, computed as `(I ∩ (f)) / f`.
pub fn quotient(i: &Ideal, f: &Poly) -> Result<Ideal> {
    check_same(i.ring(), f.ring())?;
    require_domain(i.ring().coeffs(), "ideal quotient")?;
    if f.is_zero() {
        return Ok(Ideal::unit(i.ring()));
    }
    let inter = intersect(i, &Ideal::new(i.ring(), vec![f.clone()])?)?;
    let gens = inter
        .gens()
        .iter()
        .map(|h| {
            h.div_exact(f).ok_or_else(|| {
                Error::Precondition(format!("{h} is not divisible by {f} in the intersection"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(i.ring(), gens)
}

#[derive(Clone, Debug)]
pub struct Saturation {
    pub ideal: Ideal,
    /// Number of quotient steps that strictly enlarged the ideal.
    pub steps: usize,
}

/// `I : f^∞` by iterating quotients until the chain stabilizes.
pub fn saturate(i: &Ideal, f: &Poly) -> Result<Saturation> {
    let order = MonomialOrder::GrevLex;
    let mut current = i.clone();
    let mut gb = buchberger(&current, &order);
    let mut steps = 0;
    loop {
        let next = quotient(&current, f)?;
        if gb.contains_all(next.gens())? {
            return Ok(Saturation { ideal: Ideal::new(i.ring(), gb.basis().to_vec())?, steps });
        }
        steps += 1;
        gb = buchberger(&next, &order);
        current = next;
    }
}

/// `I : f^∞` as `(I + (1 - t f)) ∩ R`; an independent route to [`saturate`].
pub fn saturate_by_inversion(i: &Ideal, f: &Poly) -> Result<Ideal> {
    check_same(i.ring(), f.ring())?;
    let (big, _) = prepend_vars(i.ring(), &["t"]);
    let t = Poly::var(&big, 0);
    let mut gens = extend_ideal(i, &big)?.into_gens();
    gens.push(&Poly::one(&big) - &(&t * &f.embed_by_name(&big)?));
    eliminate(&Ideal::new(&big, gens)?, 1).map(|r| rebase(r, i.ring()))
}

/// `f ∈ √I`, via `1 ∈ I + (1 - t f)`.
pub fn radical_member(f: &Poly, i: &Ideal) -> Result<bool> {
    check_same(i.ring(), f.ring())?;
    require_domain(i.ring().coeffs(), "radical membership")?;
    let (big, _) = prepend_vars(i.ring(), &["t"]);
    let t = Poly::var(&big, 0);
    let mut gens = extend_ideal(i, &big)?.into_gens();
    gens.push(&Poly::one(&big) - &(&t * &f.embed_by_name(&big)?));
    Ok(buchberger(&Ideal::new(&big, gens)?, &MonomialOrder::GrevLex).is_unit())
}

/// Least `n <= bound` with `f^n ∈ I`, if any.
pub fn nilpotency_exponent(f: &Poly, i: &Ideal, bound: u32) -> Result<Option<u32>> {
    check_same(i.ring(), f.ring())?;
    let gb = buchberger(i, &MonomialOrder::GrevLex);
    let mut power = f.clone();
    for n in 1..=bound {
        if gb.contains(&power)? {
            return Ok(Some(n));
        }
        power = &power * f;
    }
    Ok(None)
}

/// Krull dimension of `K[x]/I` over a field `K`, from the leading monomial
/// ideal; `None` for the unit ideal.
pub fn krull_dim(i: &Ideal) -> Result<Option<usize>> {
    let cr = i.ring().coeffs();
    if !cr.is_field() {
        return Err(Error::UnsupportedBase { ring: cr.to_string(), op: "krull dimension" });
    }
    let gb = buchberger(i, &MonomialOrder::GrevLex);
    if gb.is_unit() {
        return Ok(None);
    }
    let lms = gb.leading_monomials();
    let n = i.ring().nvars();
    let mut best = 0;
    for mask in 0u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).collect();
        if lms.iter().all(|m| !m.supported_in(&subset)) {
            best = size;
        }
    }
    Ok(Some(best))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberDims {
    /// Dimension of the generic fiber over `Q`.
    pub generic: Option<usize>,
    /// Dimension of the fiber over `F_p` for each requested prime.
    pub special: BTreeMap<u64, Option<usize>>,
}

/// Dimensions of `Q[x]/I` and of `F_p[x]/I` for each prime, never combined
/// into a single arithmetic dimension.
pub fn dim_fiberwise(i: &Ideal, primes: &[u64]) -> Result<FiberDims> {
    let ring = i.ring();
    if *ring.coeffs().kind() != CoeffKind::Integers {
        return Err(Error::UnsupportedBase { ring: ring.coeffs().to_string(), op: "fiberwise dimension" });
    }
    let fiber = |cr: CoeffRing| -> Result<Option<usize>> {
        let r = PolyRing::new(cr, ring.vars().to_vec())?;
        krull_dim(&extend_ideal(i, &r)?)
    };
    let generic = fiber(CoeffRing::rationals())?;
    let mut special = BTreeMap::new();
    for &p in primes {
        special.insert(p, fiber(CoeffRing::prime_field(p)?)?);
    }
    Ok(FiberDims { generic, special })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn ring(cr: CoeffRing, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::with_vars(cr, vars)
    }

    #[test]
    fn quotient_of_square() {
        let r = ring(CoeffRing::rationals(), &["x"]);
        let i = Ideal::parse(&r, "x^2").unwrap();
        let q = quotient(&i, &Poly::var(&r, 0)).unwrap();
        let gb = buchberger(&q, &MonomialOrder::GrevLex);
        assert_eq!(gb.basis().iter().map(|p| p.to_string()).collect::<Vec<_>>(), vec!["x"]);
    }

    #[test]
    fn saturation_contains_x() {
        let r = ring(CoeffRing::rationals(), &["x", "y", "z"]);
        let i = Ideal::parse(&r, "x^2, x*z, z^2, x*y - z^2").unwrap();
        let y = Poly::var(&r, 1);
        let sat = saturate(&i, &y).unwrap();
        let gb = buchberger(&sat.ideal, &MonomialOrder::GrevLex);
        assert!(gb.contains(&Poly::var(&r, 0)).unwrap());
        // oracle: one quotient step already gives x, since x*y = z^2 + (x*y - z^2)
        let one = quotient(&i, &y).unwrap();
        assert!(buchberger(&one, &MonomialOrder::GrevLex).contains(&Poly::var(&r, 0)).unwrap());
        assert!(sat.steps >= 1);
        // idempotent
        let again = saturate(&sat.ideal, &y).unwrap();
        assert_eq!(again.steps, 0);
        let via_inversion = saturate_by_inversion(&i, &y).unwrap();
        assert_eq!(buchberger(&via_inversion, &MonomialOrder::GrevLex), gb);
    }

    #[test]
    fn eliminate_parameter() {
        let r = ring(CoeffRing::rationals(), &["t", "x", "y"]);
        let i = Ideal::parse(&r, "x - t^2, y - 2*t").unwrap();
        let e = eliminate(&i, 1).unwrap();
        let gb = buchberger(&e, &MonomialOrder::GrevLex);
        assert_eq!(gb.basis().iter().map(|p| p.to_string()).collect::<Vec<_>>(), vec!["y^2 - 4*x"]);
    }

    #[test]
    fn radical_membership() {
        let z = ring(CoeffRing::integers(), &["T1", "T2"]);
        let i = Ideal::parse(&z, "T1^2 - T2^2, 2*T1 - 2*T2").unwrap();
        let d = parse_poly("T1 - T2", &z).unwrap();
        // oracle: (T1 - T2)^2 = -T2*(2*T1 - 2*T2) + (T1^2 - T2^2)
        let identity = parse_poly("-T2*(2*T1 - 2*T2) + (T1^2 - T2^2)", &z).unwrap();
        assert_eq!(d.pow(2), identity);
        assert!(radical_member(&d, &i).unwrap());
        assert_eq!(nilpotency_exponent(&d, &i, 4).unwrap(), Some(2));

        let q = ring(CoeffRing::rationals(), &["x", "y"]);
        assert!(radical_member(&Poly::var(&q, 0), &Ideal::parse(&q, "x^2").unwrap()).unwrap());
        assert!(!radical_member(&Poly::var(&q, 1), &Ideal::parse(&q, "x").unwrap()).unwrap());

        let trunc = ring(CoeffRing::mod_prime_power(2, 2).unwrap(), &["x"]);
        assert!(matches!(
            radical_member(&Poly::var(&trunc, 0), &Ideal::zero(&trunc)),
            Err(Error::UnsupportedBase { .. })
        ));
    }

    #[test]
    fn intersection_over_z() {
        let z = ring(CoeffRing::integers(), &["x"]);
        let i = intersect(&Ideal::parse(&z, "2").unwrap(), &Ideal::parse(&z, "x").unwrap()).unwrap();
        let gb = buchberger(&i, &MonomialOrder::GrevLex);
        assert_eq!(gb.basis().iter().map(|p| p.to_string()).collect::<Vec<_>>(), vec!["2*x"]);
    }

    #[test]
    fn fiber_dimensions() {
        let z = ring(CoeffRing::integers(), &["x", "y"]);
        let d = dim_fiberwise(&Ideal::parse(&z, "y^2 - 4*x").unwrap(), &[2]).unwrap();
        assert_eq!(d.generic, Some(1));
        assert_eq!(d.special[&2], Some(1));
        let zx = ring(CoeffRing::integers(), &["x"]);
        let d = dim_fiberwise(&Ideal::zero(&zx), &[2, 3]).unwrap();
        assert_eq!(d.generic, Some(1));
        assert_eq!(d.special.values().copied().collect::<Vec<_>>(), vec![Some(1), Some(1)]);
        let d = dim_fiberwise(&Ideal::parse(&zx, "2").unwrap(), &[2, 3]).unwrap();
        assert_eq!(d.generic, None);
        assert_eq!(d.special[&2], Some(1));
        assert_eq!(d.special[&3], None);
    }
}
