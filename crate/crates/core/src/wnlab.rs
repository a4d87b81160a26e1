//! Seminormality and weak normality tests with re-checkable certificates.

use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fpring::{tensor_square, FPRing, LinearSolver, RingMap, SubringOracle, TensorSquare};
use crate::groebner::ops;
use crate::monomial::Monomial;
use crate::poly::Poly;

/// Largest exponent tried when recording how nilpotent a difference is.
const NILPOTENCY_BOUND: u32 = 16;

/// Evidence emitted by the decision procedures. Each variant re-verifies
/// through [`Certificate::verify`].
#[derive(Clone, Debug)]
pub enum Certificate {
    SwanWitness { ring: Arc<FPRing>, a: Poly, b: Poly, c: Poly },
    SwanViolation { ring: Arc<FPRing>, b: Poly, c: Poly },
    YanagiharaWitness { ring: Arc<FPRing>, p: u64, a: Poly, b: Poly, c: Poly, d: Poly, e: Poly },
    YanagiharaViolation { ring: Arc<FPRing>, p: u64, b: Poly, c: Poly, d: Poly, e: Poly },
    /// `s ⊗ 1 - 1 ⊗ s` is nilpotent in `S ⊗_R S` while `s ∉ R`.
    ManaresiWitness { map: RingMap, s: Poly, difference: Poly, nilpotency: Option<u32> },
    /// No probed element violates the equalizer condition. Not a proof.
    EqualizerPass { map: RingMap, tested: Vec<Poly> },
}

/// Serializable form of a certificate: every ring, map and element is
/// printed in the session syntax so the record can be checked on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateRecord {
    pub kind: &'static str,
    pub ring: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
    pub fields: Vec<(String, String)>,
    pub assumptions: Vec<&'static str>,
}

fn ring_mul(r: &FPRing, a: &Poly, b: &Poly) -> Result<Poly> {
    r.mul(a, b)
}

fn const_of(r: &FPRing, n: u64) -> Poly {
    Poly::from_int(r.poly(), n)
}

/// Forced solve of `a * x = target` in `R` (unique when `R` is a domain and
/// `x != 0`).
fn forced_quotient(ring: &Arc<FPRing>, x: &Poly, target: &Poly) -> Result<Option<Poly>> {
    let solver = LinearSolver::new(&RingMap::identity(ring), std::slice::from_ref(x))?;
    Ok(solver.solve(target)?.map(|mut r| r.remove(0)))
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::SwanWitness { .. } => "SwanWitness",
            Certificate::SwanViolation { .. } => "SwanViolation",
            Certificate::YanagiharaWitness { .. } => "YanagiharaWitness",
            Certificate::YanagiharaViolation { .. } => "YanagiharaViolation",
            Certificate::ManaresiWitness { .. } => "ManaresiWitness",
            Certificate::EqualizerPass { .. } => "EqualizerPass",
        }
    }

    /// Unverified hypotheses the certificate's meaning depends on.
    pub fn assumptions(&self) -> Vec<&'static str> {
        match self {
            Certificate::SwanWitness { .. } | Certificate::YanagiharaWitness { .. } => vec![],
            Certificate::SwanViolation { .. } | Certificate::YanagiharaViolation { .. } => vec!["domain"],
            Certificate::ManaresiWitness { .. } => vec!["extension is injective"],
            Certificate::EqualizerPass { .. } => vec!["extension is injective", "probe set only"],
        }
    }

    pub fn is_violation(&self) -> bool {
        matches!(
            self,
            Certificate::SwanViolation { .. }
                | Certificate::YanagiharaViolation { .. }
                | Certificate::ManaresiWitness { .. }
        )
    }

    /// Re-checks the defining identities with fresh normal form computations.
    pub fn verify(&self) -> Result<bool> {
        match self {
            Certificate::SwanWitness { ring, a, b, c } => {
                Ok(ring.equal(&ring.pow(a, 2)?, b)? && ring.equal(&ring.pow(a, 3)?, c)?)
            }
            Certificate::SwanViolation { ring, b, c } => {
                if ring.is_zero(b)? || !ring.equal(&ring.pow(b, 3)?, &ring.pow(c, 2)?)? {
                    return Ok(false);
                }
                Ok(match forced_quotient(ring, b, c)? {
                    None => true,
                    Some(a) => !(ring.equal(&ring.pow(&a, 2)?, b)? && ring.equal(&ring.pow(&a, 3)?, c)?),
                })
            }
            Certificate::YanagiharaWitness { ring, p, a, b, c, d, e } => {
                let pp = const_of(ring, *p);
                Ok(ring.equal(&ring.pow(a, *p as u32)?, b)?
                    && ring.equal(&ring_mul(ring, &pp, a)?, e)?
                    && ring.equal(&ring_mul(ring, d, a)?, c)?)
            }
            Certificate::YanagiharaViolation { ring, p, b, c, d, e } => {
                let pp = const_of(ring, *p);
                if ring.is_zero(d)?
                    || !ring.equal(&ring.pow(c, *p as u32)?, &ring_mul(ring, b, &ring.pow(d, *p as u32)?)?)?
                    || !ring.equal(&ring_mul(ring, &pp, c)?, &ring_mul(ring, d, e)?)?
                {
                    return Ok(false);
                }
                Ok(match forced_quotient(ring, d, c)? {
                    None => true,
                    Some(a) => {
                        !(ring.equal(&ring.pow(&a, *p as u32)?, b)? && ring.equal(&ring_mul(ring, &pp, &a)?, e)?)
                    }
                })
            }
            Certificate::ManaresiWitness { map, s, difference, nilpotency } => {
                let t = tensor_square(map)?;
                let diff = t.left.apply(s)?.checked_sub(&t.right.apply(s)?)?;
                if !t.ring.equal(&diff, difference)? {
                    return Ok(false);
                }
                if let Some(n) = nilpotency {
                    if !t.ring.is_zero(&t.ring.pow(&diff, *n)?)? {
                        return Ok(false);
                    }
                }
                let nilpotent = t.ring.radical_member(&diff, &[])?;
                Ok(nilpotent && SubringOracle::new(map)?.preimage(s)?.is_none())
            }
            Certificate::EqualizerPass { map, tested } => {
                let t = tensor_square(map)?;
                let oracle = SubringOracle::new(map)?;
                for s in tested {
                    if let ManaresiOutcome::Witness(_) = manaresi_with(map, &t, &oracle, s)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn to_record(&self) -> CertificateRecord {
        let f = |k: &str, v: &Poly| (k.to_string(), v.to_string());
        let (ring, target, map, fields) = match self {
            Certificate::SwanWitness { ring, a, b, c } => {
                (ring.to_string(), None, None, vec![f("a", a), f("b", b), f("c", c)])
            }
            Certificate::SwanViolation { ring, b, c } => (ring.to_string(), None, None, vec![f("b", b), f("c", c)]),
            Certificate::YanagiharaWitness { ring, p, a, b, c, d, e } => (
                ring.to_string(),
                None,
                None,
                vec![("p".into(), p.to_string()), f("a", a), f("b", b), f("c", c), f("d", d), f("e", e)],
            ),
            Certificate::YanagiharaViolation { ring, p, b, c, d, e } => (
                ring.to_string(),
                None,
                None,
                vec![("p".into(), p.to_string()), f("b", b), f("c", c), f("d", d), f("e", e)],
            ),
            Certificate::ManaresiWitness { map, s, difference, nilpotency } => {
                let mut fields = vec![f("s", s), f("difference", difference)];
                if let Some(n) = nilpotency {
                    fields.push(("nilpotency".into(), n.to_string()));
                }
                (map.source().to_string(), Some(map.target().to_string()), Some(map.to_string()), fields)
            }
            Certificate::EqualizerPass { map, tested } => {
                let list: Vec<String> = tested.iter().map(|t| t.to_string()).collect();
                (
                    map.source().to_string(),
                    Some(map.target().to_string()),
                    Some(map.to_string()),
                    vec![("tested".into(), format!("[{}]", list.join(", ")))],
                )
            }
        };
        CertificateRecord { kind: self.kind(), ring, target, map, fields, assumptions: self.assumptions() }
    }
}

fn check_ring(ring: &FPRing, f: &Poly) -> Result<()> {
    if f.ring() == ring.poly() {
        Ok(())
    } else {
        Err(Error::IncompatibleContext(format!("{} vs {}", f.ring(), ring.poly())))
    }
}

/// Swan's condition for a pair with `b^3 = c^2`: the witness is forced to be
/// `c / b`.
pub fn swan_check(ring: &Arc<FPRing>, b: &Poly, c: &Poly) -> Result<Certificate> {
    check_ring(ring, b)?;
    check_ring(ring, c)?;
    let (b, c) = (ring.reduce(b)?, ring.reduce(c)?);
    if !ring.equal(&ring.pow(&b, 3)?, &ring.pow(&c, 2)?)? {
        return Err(Error::Precondition(format!("b^3 != c^2 for b = {b}, c = {c}")));
    }
    if b.is_zero() {
        if !c.is_zero() {
            return Err(Error::AmbiguousSolve(format!("c = {c} is nilpotent")));
        }
        return Ok(Certificate::SwanWitness { ring: ring.clone(), a: b.clone(), b: b.clone(), c });
    }
    match forced_quotient(ring, &b, &c)? {
        None => Ok(Certificate::SwanViolation { ring: ring.clone(), b, c }),
        Some(a) => {
            let cert = Certificate::SwanWitness { ring: ring.clone(), a, b, c };
            if cert.verify()? {
                Ok(cert)
            } else {
                Err(Error::AmbiguousSolve("a * b = c has a solution that is not a witness".into()))
            }
        }
    }
}

/// `d` is a non-zerodivisor iff `(J : d) = J`.
fn non_zerodivisor(ring: &FPRing, d: &Poly) -> Result<bool> {
    if ring.is_zero(d)? {
        return Ok(false);
    }
    let q = ops::quotient(ring.defining(), d)?;
    ring.gb().contains_all(q.gens())
}

/// Yanagihara's condition: from `c^p = b d^p` and `p c = d e`, the witness
/// is forced to be `c / d`.
pub fn yanagihara_check(
    ring: &Arc<FPRing>,
    p: u64,
    b: &Poly,
    c: &Poly,
    d: &Poly,
    e: &Poly,
) -> Result<Certificate> {
    for x in [b, c, d, e] {
        check_ring(ring, x)?;
    }
    if !crate::coeff::is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let [b, c, d, e] = [b, c, d, e].map(|x| ring.reduce(x));
    let (b, c, d, e) = (b?, c?, d?, e?);
    if !non_zerodivisor(ring, &d)? {
        return Err(Error::ZeroDivisor(d.to_string()));
    }
    let pp = const_of(ring, p);
    let n = p as u32;
    if !ring.equal(&ring.pow(&c, n)?, &ring.mul(&b, &ring.pow(&d, n)?)?)? {
        return Err(Error::Precondition(format!("c^{p} != b d^{p}")));
    }
    if !ring.equal(&ring.mul(&pp, &c)?, &ring.mul(&d, &e)?)? {
        return Err(Error::Precondition(format!("{p} c != d e")));
    }
    match forced_quotient(ring, &d, &c)? {
        None => Ok(Certificate::YanagiharaViolation { ring: ring.clone(), p, b, c, d, e }),
        Some(a) => {
            let cert = Certificate::YanagiharaWitness { ring: ring.clone(), p, a, b, c, d, e };
            if cert.verify()? {
                Ok(cert)
            } else {
                Err(Error::AmbiguousSolve("d a = c has a solution that is not a witness".into()))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum ManaresiOutcome {
    Witness(Certificate),
    NotAWitness { in_subring: bool, nilpotent: Option<bool> },
}

fn manaresi_with(map: &RingMap, t: &TensorSquare, oracle: &SubringOracle, s: &Poly) -> Result<ManaresiOutcome> {
    if oracle.contains(s)? {
        return Ok(ManaresiOutcome::NotAWitness { in_subring: true, nilpotent: None });
    }
    let diff = t.left.apply(s)?.checked_sub(&t.right.apply(s)?)?;
    if !t.ring.radical_member(&diff, &[])? {
        return Ok(ManaresiOutcome::NotAWitness { in_subring: false, nilpotent: Some(false) });
    }
    let nilpotency = ops::nilpotency_exponent(&diff, t.ring.defining(), NILPOTENCY_BOUND)?;
    Ok(ManaresiOutcome::Witness(Certificate::ManaresiWitness {
        map: map.clone(),
        s: s.clone(),
        difference: diff,
        nilpotency,
    }))
}

/// Tests whether `s` witnesses that the source is not weakly normal in the
/// target.
pub fn manaresi_witness(map: &RingMap, s: &Poly) -> Result<ManaresiOutcome> {
    check_ring(map.target(), s)?;
    let s = map.target().reduce(s)?;
    manaresi_with(map, &tensor_square(map)?, &SubringOracle::new(map)?, &s)
}

/// Runs the equalizer test on every probe; the first violation is returned,
/// otherwise a pass recording the probe set.
pub fn equalizer_probe(map: &RingMap, probes: &[Poly]) -> Result<Certificate> {
    let t = tensor_square(map)?;
    let oracle = SubringOracle::new(map)?;
    let mut tested = Vec::new();
    for s in probes {
        check_ring(map.target(), s)?;
        let s = map.target().reduce(s)?;
        if let ManaresiOutcome::Witness(w) = manaresi_with(map, &t, &oracle, &s)? {
            return Ok(w);
        }
        tested.push(s);
    }
    Ok(Certificate::EqualizerPass { map: map.clone(), tested })
}

/// All monomials of total degree at most `degree` in `nvars` variables,
/// ordered by degree and then lexicographically.
pub fn monomials_up_to(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, left: usize, budget: u32, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for e in (0..=budget).rev() {
            prefix.push(e);
            rec(prefix, left - 1, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in 0..=degree {
        let mut level = Vec::new();
        rec(&mut Vec::new(), nvars, d, &mut level);
        out.extend(level.into_iter().filter(|e| e.iter().sum::<u32>() == d));
    }
    out.into_iter().map(Monomial::from_exponents).collect()
}

/// Standard monomials of the target up to `degree`, as elements.
pub fn probe_monomials(ring: &FPRing, degree: u32) -> Result<Vec<Poly>> {
    let lms = ring.gb().leading_monomials();
    Ok(monomials_up_to(ring.nvars(), degree)
        .into_iter()
        .filter(|m| !lms.iter().any(|l| l.divides(m)))
        .map(|m| Poly::from_terms(ring.poly(), vec![(m, ring.coeffs().one())]))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SearchKind {
    Swan,
    Yanagihara,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    /// Total degree bound on the candidate element of the target.
    pub degree: u32,
    /// Bound on the absolute value of its coefficients.
    pub height: u32,
    /// Primes tried for the Yanagihara condition.
    pub primes: Vec<u64>,
}

/// Upper limit on the number of candidates a search will enumerate.
pub const SEARCH_LIMIT: u64 = 2_000_000;

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub kind: SearchKind,
    pub bounds: SearchBounds,
    pub examined: u64,
    pub violations: Vec<Certificate>,
}

/// Enumerates every `a = Σ c_m m` over the standard monomials `m` of the
/// target up to the degree bound with `|c_m| <= height`, and reports each
/// `a ∉ R` whose Swan pair `(a^2, a^3)` or Yanagihara quadruple
/// `(a^p, p a, p, p a)` lies in `R`. The order of the result follows the
/// enumeration order and does not depend on the thread count.
pub fn bounded_violation_search(map: &RingMap, kind: SearchKind, bounds: &SearchBounds) -> Result<SearchReport> {
    let s = map.target();
    let r = map.source();
    let monos = probe_monomials(s, bounds.degree)?;
    let width = 2 * bounds.height as u64 + 1;
    let count = width
        .checked_pow(monos.len() as u32)
        .filter(|&c| c <= SEARCH_LIMIT)
        .ok_or_else(|| Error::Precondition(format!("search space exceeds {SEARCH_LIMIT} candidates")))?;
    if kind == SearchKind::Yanagihara {
        if let Some(&p) = bounds.primes.iter().find(|&&p| !crate::coeff::is_prime_u64(p)) {
            return Err(Error::NotPrime(p.to_string()));
        }
    }
    let oracle = SubringOracle::new(map)?;
    let h = bounds.height as i64;
    let candidate = |idx: u64| -> Poly {
        let mut rest = idx;
        let mut terms = Vec::with_capacity(monos.len());
        for m in &monos {
            let digit = (rest % width) as i64 - h;
            rest /= width;
            if digit != 0 {
                terms.push((m.terms()[0].0.clone(), s.coeffs().from_int(BigInt::from(digit))));
            }
        }
        Poly::from_terms(s.poly(), terms)
    };
    let found: Vec<Vec<Certificate>> = (0..count)
        .into_par_iter()
        .map(|idx| -> Result<Vec<Certificate>> {
            let a = candidate(idx);
            if a.is_zero() {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            match kind {
                SearchKind::Swan => {
                    let Some(b) = oracle.preimage(&s.pow(&a, 2)?)? else { return Ok(out) };
                    let Some(c) = oracle.preimage(&s.pow(&a, 3)?)? else { return Ok(out) };
                    if !oracle.contains(&a)? {
                        out.push(Certificate::SwanViolation { ring: r.clone(), b, c });
                    }
                }
                SearchKind::Yanagihara => {
                    if oracle.contains(&a)? {
                        return Ok(out);
                    }
                    for &p in &bounds.primes {
                        let pa = a.scale_int(p as i64);
                        let Some(e) = oracle.preimage(&pa)? else { continue };
                        let Some(b) = oracle.preimage(&s.pow(&a, p as u32)?)? else { continue };
                        out.push(Certificate::YanagiharaViolation {
                            ring: r.clone(),
                            p,
                            b,
                            c: e.clone(),
                            d: const_of(r, p),
                            e,
                        });
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SearchReport {
        kind,
        bounds: bounds.clone(),
        examined: count,
        violations: found.into_iter().flatten().collect(),
    })
}
