//! Relative differentials, Fitting ideals and the unramified test.

use std::sync::Arc;

use super::graph::kernel_of_map;
use super::{FPRing, PrimeSpot, RingMap};
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::poly::Poly;

/// A finitely presented module: `ngens` generators and relation rows of
/// length `ngens`, all entries reduced in the ambient ring.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    ring: Arc<FPRing>,
    gen_names: Vec<String>,
    relations: Vec<Vec<Poly>>,
}

impl PresentedModule {
    pub fn new(ring: &Arc<FPRing>, gen_names: Vec<String>, relations: Vec<Vec<Poly>>) -> Result<Self> {
        let mut rows = Vec::new();
        for row in relations {
            if row.len() != gen_names.len() {
                return Err(Error::LengthMismatch { expected: gen_names.len(), got: row.len() });
            }
            let row = row.iter().map(|e| ring.reduce(e)).collect::<Result<Vec<_>>>()?;
            if row.iter().any(|e| !e.is_zero()) && !rows.contains(&row) {
                rows.push(row);
            }
        }
        Ok(PresentedModule { ring: ring.clone(), gen_names, relations: rows })
    }

    pub fn ring(&self) -> &Arc<FPRing> {
        &self.ring
    }

    pub fn ngens(&self) -> usize {
        self.gen_names.len()
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn relations(&self) -> &[Vec<Poly>] {
        &self.relations
    }
}

/// `Ω_{S/R}` for `φ: R → S`: generators `dx_j` for the variables of `S`,
/// relations the Jacobian rows of the defining relations of `S` and of the
/// images of the variables of `R`.
pub fn relative_differentials(phi: &RingMap) -> Result<PresentedModule> {
    let s = phi.target();
    let n = s.nvars();
    let jac = |f: &Poly| (0..n).map(|j| f.derivative(j)).collect::<Vec<_>>();
    let rows = s.defining().gens().iter().chain(phi.images()).map(jac).collect();
    let names = s.vars().iter().map(|v| format!("d{v}")).collect();
    PresentedModule::new(s, names, rows)
}

fn determinant(ring: &FPRing, m: &[Vec<Poly>]) -> Result<Poly> {
    let n = m.len();
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut acc = Poly::zero(ring.poly());
    for (col, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, e)| e.clone()).collect())
            .collect();
        let term = ring.mul(entry, &determinant(ring, &minor)?)?;
        acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    ring.reduce(&acc)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// The zeroth Fitting ideal: the ideal of maximal minors of the relation
/// matrix. No generators gives the unit ideal; fewer relations than
/// generators gives zero.
pub fn fitting_zero(m: &PresentedModule) -> Result<Ideal> {
    let ring = m.ring();
    let g = m.ngens();
    if g == 0 {
        return Ok(Ideal::unit(ring.poly()));
    }
    let mut minors = Vec::new();
    for rows in subsets(m.relations().len(), g) {
        let sub: Vec<Vec<Poly>> = rows.iter().map(|&r| m.relations()[r].clone()).collect();
        let d = determinant(ring, &sub)?;
        if !d.is_zero() {
            minors.push(d);
        }
    }
    Ideal::new(ring.poly(), minors)
}

/// Outcome of [`unramified_at`], with the ideals it was decided from.
#[derive(Clone, Debug)]
pub struct Unramified {
    pub verdict: bool,
    /// `F_0(Ω_{S/R})` in the target.
    pub fitting: Ideal,
    /// Its contraction to the source.
    pub contraction: Ideal,
}

/// `Ω_{S/R}` vanishes after localizing at `p` iff the contraction of its
/// zeroth Fitting ideal to `R` is not contained in `p`.
pub fn unramified_at(phi: &RingMap, p: &PrimeSpot) -> Result<Unramified> {
    if p.ring().as_ref() != phi.source().as_ref() {
        return Err(Error::IncompatibleContext(format!("{} is not a prime of {}", p, phi.source())));
    }
    let fitting = fitting_zero(&relative_differentials(phi)?)?;
    let quotient = phi.target().quotient(fitting.gens())?.shared();
    let to_quotient = RingMap::new(phi.source(), &quotient, phi.images().to_vec())?;
    let contraction = kernel_of_map(&to_quotient)?;
    let verdict = !p.gb().contains_all(contraction.gens())?;
    Ok(Unramified { verdict, fitting, contraction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffRing;
    use crate::groebner::buchberger;
    use crate::monomial::MonomialOrder;
    use crate::poly::PolyRing;

    fn example_map() -> RingMap {
        let a = FPRing::parse(&PolyRing::with_vars(CoeffRing::integers(), &["X", "Y"]), "Y^2 - 4*X")
            .unwrap()
            .shared();
        let s = FPRing::polynomial(&PolyRing::with_vars(CoeffRing::integers(), &["T"])).shared();
        RingMap::parse(&a, &s, &["T^2", "2*T"]).unwrap()
    }

    fn strs(i: &Ideal) -> Vec<String> {
        buchberger(i, &MonomialOrder::GrevLex).basis().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn differentials_of_the_example() {
        let m = relative_differentials(&example_map()).unwrap();
        assert_eq!(m.gen_names(), &["dT".to_string()]);
        let rows: Vec<String> = m.relations().iter().map(|r| r[0].to_string()).collect();
        // oracle: d(T^2) = 2T dT, d(2T) = 2 dT
        assert_eq!(rows, vec!["2*T", "2"]);
        assert_eq!(strs(&fitting_zero(&m).unwrap()), vec!["2"]);
    }

    #[test]
    fn fitting_conventions() {
        let r = FPRing::polynomial(&PolyRing::with_vars(CoeffRing::integers(), &["x"])).shared();
        let zero = PresentedModule::new(&r, vec![], vec![]).unwrap();
        assert!(buchberger(&fitting_zero(&zero).unwrap(), &MonomialOrder::GrevLex).is_unit());
        let free = PresentedModule::new(&r, vec!["e".into()], vec![]).unwrap();
        assert!(fitting_zero(&free).unwrap().gens().is_empty());
        let id = relative_differentials(&RingMap::identity(&r)).unwrap();
        assert!(buchberger(&fitting_zero(&id).unwrap(), &MonomialOrder::GrevLex).is_unit());
    }

    #[test]
    fn trivial_cover_is_unramified() {
        let phi = example_map();
        let s = FPRing::parse(&PolyRing::with_vars(CoeffRing::integers(), &["X", "Y", "T"]), "Y^2 - 4*X, T - X")
            .unwrap()
            .shared();
        let cover = RingMap::parse(phi.source(), &s, &["X", "Y"]).unwrap();
        assert!(buchberger(&fitting_zero(&relative_differentials(&cover).unwrap()).unwrap(), &MonomialOrder::GrevLex)
            .is_unit());
    }

    #[test]
    fn unramified_verdicts() {
        let phi = example_map();
        let a = phi.source();
        let ramified = PrimeSpot::parse("P", a, "2, Y").unwrap();
        let u = unramified_at(&phi, &ramified).unwrap();
        assert!(!u.verdict);
        assert_eq!(strs(&u.contraction), vec!["2", "Y"]);
        let good = PrimeSpot::parse("Q", a, "Y - 2*X").unwrap();
        assert!(unramified_at(&phi, &good).unwrap().verdict);
        assert!(!good.contains(&a.elem("2").unwrap()).unwrap());
        let id = RingMap::identity(a);
        assert!(unramified_at(&id, &ramified).unwrap().verdict);
    }
}
