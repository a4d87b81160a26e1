//! Coefficient rings: the integers, the rationals, prime fields and the
//! truncations `Z/p^k`.
//!
//! Every coefficient is stored as a [`BigRational`]. Over the integer-like
//! rings the denominator is always one and the numerator is kept in its
//! canonical residue range, so structural equality of coefficients is
//! equality in the ring.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Coeff = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffKind {
    Integers,
    Rationals,
    PrimeField(u64),
    IntegerModPrimePower(u64, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffRing {
    kind: CoeffKind,
    modulus: Option<BigInt>,
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn int(c: &Coeff) -> &BigInt {
    debug_assert!(c.is_integer());
    c.numer()
}

fn rat(i: BigInt) -> Coeff {
    BigRational::from_integer(i)
}

/// p-adic valuation of a nonzero integer.
fn valuation(mut x: BigInt, p: &BigInt) -> u32 {
    let mut v = 0;
    while !x.is_zero() && (&x % p).is_zero() {
        x /= p;
        v += 1;
    }
    v
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else if (-&e.gcd).is_one() {
        Some((-e.x).mod_floor(m))
    } else {
        None
    }
}

impl CoeffRing {
    pub fn integers() -> Self {
        CoeffRing { kind: CoeffKind::Integers, modulus: None }
    }

    pub fn rationals() -> Self {
        CoeffRing { kind: CoeffKind::Rationals, modulus: None }
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(CoeffRing { kind: CoeffKind::PrimeField(p), modulus: Some(BigInt::from(p)) })
    }

    /// `Z/p^k` with `k >= 1`; `k = 1` is still treated as a truncation ring
    /// (callers wanting a field should use [`CoeffRing::prime_field`]).
    pub fn mod_prime_power(p: u64, k: u32) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        if k == 0 {
            return Err(Error::Precondition("exponent k must be positive".into()));
        }
        Ok(CoeffRing {
            kind: CoeffKind::IntegerModPrimePower(p, k),
            modulus: Some(num_traits::pow(BigInt::from(p), k as usize)),
        })
    }

    pub fn from_kind(kind: CoeffKind) -> Result<Self> {
        match kind {
            CoeffKind::Integers => Ok(Self::integers()),
            CoeffKind::Rationals => Ok(Self::rationals()),
            CoeffKind::PrimeField(p) => Self::prime_field(p),
            CoeffKind::IntegerModPrimePower(p, k) => Self::mod_prime_power(p, k),
        }
    }

    pub fn kind(&self) -> &CoeffKind {
        &self.kind
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind, CoeffKind::Rationals | CoeffKind::PrimeField(_))
    }

    pub fn is_domain(&self) -> bool {
        !matches!(self.kind, CoeffKind::IntegerModPrimePower(..))
    }

    /// Euclidean but not a field: strong bases need G-polynomials here.
    pub fn is_euclidean_non_field(&self) -> bool {
        matches!(self.kind, CoeffKind::Integers | CoeffKind::IntegerModPrimePower(..))
    }

    /// The residue characteristic prime of `Z/p^k` and `F_p`.
    pub fn prime(&self) -> Option<u64> {
        match self.kind {
            CoeffKind::PrimeField(p) | CoeffKind::IntegerModPrimePower(p, _) => Some(p),
            _ => None,
        }
    }

    fn reduce_int(&self, i: BigInt) -> BigInt {
        match &self.modulus {
            Some(m) => i.mod_floor(m),
            None => i,
        }
    }

    /// Maps an arbitrary rational into the ring, failing when the
    /// denominator is not invertible.
    pub fn from_rational(&self, c: &BigRational) -> Result<Coeff> {
        match &self.kind {
            CoeffKind::Rationals => Ok(c.clone()),
            CoeffKind::Integers => {
                if c.is_integer() {
                    Ok(c.clone())
                } else {
                    Err(Error::NotRepresentable { ring: self.to_string(), msg: c.to_string() })
                }
            }
            _ => {
                let m = self.modulus.as_ref().unwrap();
                let inv = mod_inverse(c.denom(), m).ok_or_else(|| Error::NotRepresentable {
                    ring: self.to_string(),
                    msg: c.to_string(),
                })?;
                Ok(rat((c.numer() * inv).mod_floor(m)))
            }
        }
    }

    pub fn from_int(&self, i: impl Into<BigInt>) -> Coeff {
        rat(self.reduce_int(i.into()))
    }

    pub fn zero(&self) -> Coeff {
        Coeff::zero()
    }

    pub fn one(&self) -> Coeff {
        self.from_int(1)
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match self.kind {
            CoeffKind::Rationals => a + b,
            _ => rat(self.reduce_int(int(a) + int(b))),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match self.kind {
            CoeffKind::Rationals => a - b,
            _ => rat(self.reduce_int(int(a) - int(b))),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match self.kind {
            CoeffKind::Rationals => a * b,
            _ => rat(self.reduce_int(int(a) * int(b))),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match self.kind {
            CoeffKind::Rationals => -a,
            _ => rat(self.reduce_int(-int(a))),
        }
    }

    pub fn inv(&self, a: &Coeff) -> Option<Coeff> {
        if a.is_zero() {
            return None;
        }
        match &self.kind {
            CoeffKind::Rationals => Some(a.recip()),
            CoeffKind::Integers => {
                if int(a).abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            _ => mod_inverse(int(a), self.modulus.as_ref().unwrap()).map(rat),
        }
    }

    pub fn is_unit(&self, a: &Coeff) -> bool {
        self.inv(a).is_some()
    }

    /// Some `q` with `a * q = b`, if `a` divides `b`.
    pub fn divides(&self, a: &Coeff, b: &Coeff) -> Option<Coeff> {
        if b.is_zero() {
            return Some(Coeff::zero());
        }
        if a.is_zero() {
            return None;
        }
        match &self.kind {
            CoeffKind::Rationals | CoeffKind::PrimeField(_) => {
                Some(self.mul(&self.inv(a).unwrap(), b))
            }
            CoeffKind::Integers => {
                let (q, r) = int(b).div_rem(int(a));
                r.is_zero().then(|| rat(q))
            }
            CoeffKind::IntegerModPrimePower(p, _) => {
                let pb = BigInt::from(*p);
                let va = valuation(int(a).clone(), &pb);
                let vb = valuation(int(b).clone(), &pb);
                if va > vb {
                    return None;
                }
                let pva = num_traits::pow(pb.clone(), va as usize);
                let ua = int(a) / &pva;
                let ub = int(b) / &pva;
                let m = self.modulus.as_ref().unwrap();
                let inv = mod_inverse(&ua, m).expect("unit part is invertible");
                Some(rat((ub * inv).mod_floor(m)))
            }
        }
    }

    /// A size measure on coefficients; the reducer with the smallest norm
    /// generates the leading-coefficient ideal of a strong basis.
    pub fn norm(&self, a: &Coeff) -> BigInt {
        match &self.kind {
            CoeffKind::Integers => int(a).abs(),
            CoeffKind::IntegerModPrimePower(p, _) => {
                BigInt::from(valuation(int(a).clone(), &BigInt::from(*p)))
            }
            _ => BigInt::zero(),
        }
    }

    /// Euclidean remainder of `c` by `d`, canonical in `[0, |d|)` over `Z` and
    /// `[0, p^v(d))` over `Z/p^k`; zero over fields.
    pub fn rem(&self, c: &Coeff, d: &Coeff) -> Coeff {
        match &self.kind {
            CoeffKind::Integers => rat(int(c).mod_floor(&int(d).abs())),
            CoeffKind::IntegerModPrimePower(p, _) => {
                let pb = BigInt::from(*p);
                let v = valuation(int(d).clone(), &pb);
                rat(int(c).mod_floor(&num_traits::pow(pb, v as usize)))
            }
            _ => Coeff::zero(),
        }
    }

    /// `(g, u, v)` with `g = u*a + v*b` generating the ideal `(a, b)`.
    pub fn xgcd(&self, a: &Coeff, b: &Coeff) -> (Coeff, Coeff, Coeff) {
        match &self.kind {
            CoeffKind::Integers => {
                let e = int(a).extended_gcd(int(b));
                (rat(e.gcd), rat(e.x), rat(e.y))
            }
            CoeffKind::IntegerModPrimePower(..) => {
                if self.divides(a, b).is_some() {
                    (a.clone(), self.one(), self.zero())
                } else {
                    (b.clone(), self.zero(), self.one())
                }
            }
            _ => {
                if !a.is_zero() {
                    (self.one(), self.inv(a).unwrap(), self.zero())
                } else {
                    (self.one(), self.zero(), self.inv(b).unwrap())
                }
            }
        }
    }

    /// `(ca, cb)` with `ca*a = cb*b` a least common multiple.
    pub fn lcm_cofactors(&self, a: &Coeff, b: &Coeff) -> (Coeff, Coeff) {
        match &self.kind {
            CoeffKind::Integers => {
                let g = int(a).gcd(int(b));
                (rat(int(b) / &g), rat(int(a) / &g))
            }
            CoeffKind::IntegerModPrimePower(..) => {
                if let Some(q) = self.divides(a, b) {
                    (q, self.one())
                } else {
                    (self.one(), self.divides(b, a).expect("p-powers are totally ordered"))
                }
            }
            _ => (self.inv(a).unwrap(), self.inv(b).unwrap()),
        }
    }

    /// Unit `u` such that `u*a` is the canonical associate of `a`
    /// (positive over `Z`, one over fields, a power of `p` over `Z/p^k`).
    pub fn normalizing_unit(&self, a: &Coeff) -> Coeff {
        match &self.kind {
            CoeffKind::Integers => {
                if int(a).is_negative() {
                    self.from_int(-1)
                } else {
                    self.one()
                }
            }
            CoeffKind::IntegerModPrimePower(p, _) => {
                let pb = BigInt::from(*p);
                let v = valuation(int(a).clone(), &pb);
                let u = int(a) / num_traits::pow(pb, v as usize);
                rat(mod_inverse(&u, self.modulus.as_ref().unwrap()).unwrap())
            }
            _ => self.inv(a).unwrap_or_else(|| self.one()),
        }
    }

    /// Generator of the annihilator of `a` when it is nonzero (only in `Z/p^k`).
    pub fn annihilator(&self, a: &Coeff) -> Option<Coeff> {
        match &self.kind {
            CoeffKind::IntegerModPrimePower(p, k) => {
                let pb = BigInt::from(*p);
                let v = valuation(int(a).clone(), &pb);
                (v > 0 && v < *k).then(|| rat(num_traits::pow(pb, (*k - v) as usize)))
            }
            _ => None,
        }
    }

    /// Whether the two generators generate the whole ring (used by the
    /// coprime-leading-term criterion).
    pub fn coprime(&self, a: &Coeff, b: &Coeff) -> bool {
        let (g, _, _) = self.xgcd(a, b);
        self.is_unit(&g)
    }

    pub fn format_coeff(&self, c: &Coeff) -> String {
        c.to_string()
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CoeffKind::Integers => write!(f, "ZZ"),
            CoeffKind::Rationals => write!(f, "QQ"),
            CoeffKind::PrimeField(p) => write!(f, "GF({p})"),
            CoeffKind::IntegerModPrimePower(p, k) => write!(f, "ZZ/{p}^{k}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(i: i64) -> Coeff {
        rat(BigInt::from(i))
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2,3,5,7
        assert!(CoeffRing::prime_field(4).is_err());
        assert!(CoeffRing::mod_prime_power(6, 2).is_err());
    }

    #[test]
    fn z_mod_p_power_euclidean_structure() {
        let r = CoeffRing::mod_prime_power(2, 3).unwrap();
        assert_eq!(r.from_int(-1), c(7));
        assert_eq!(r.divides(&c(2), &c(6)).map(|q| r.mul(&q, &c(2))), Some(c(6)));
        assert_eq!(r.divides(&c(4), &c(2)), None);
        assert_eq!(r.rem(&c(7), &c(4)), c(3));
        assert_eq!(r.annihilator(&c(6)), Some(c(4)));
        assert_eq!(r.annihilator(&c(3)), None);
        assert_eq!(r.mul(&r.normalizing_unit(&c(6)), &c(6)), c(2));
    }

    #[test]
    fn integer_gcd_and_lcm() {
        let z = CoeffRing::integers();
        let (g, u, v) = z.xgcd(&c(6), &c(10));
        assert_eq!(g, c(2));
        assert_eq!(u * c(6) + v * c(10), c(2));
        let (a, b) = z.lcm_cofactors(&c(6), &c(10));
        assert_eq!(a * c(6), c(30));
        assert_eq!(b * c(10), c(30));
        assert_eq!(z.rem(&c(-7), &c(3)), c(2));
        assert!(z.from_rational(&BigRational::new(1.into(), 2.into())).is_err());
    }

    #[test]
    fn prime_field_division() {
        let f = CoeffRing::prime_field(7).unwrap();
        let half = f.from_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(half, c(4));
        assert_eq!(f.inv(&c(3)), Some(c(5)));
    }
}
