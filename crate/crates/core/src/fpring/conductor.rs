//! Conductors of module-finite extensions.

use super::graph::{transporter_ideal, LinearSolver};
use super::RingMap;
use crate::error::{Error, Result};
use crate::groebner::{ops, Ideal};
use crate::poly::Poly;

#[derive(Clone, Debug)]
pub struct Conductor {
    /// The conductor as an ideal of the source cover.
    pub ideal: Ideal,
    /// True when `ideal` is the whole conductor rather than a sub-ideal.
    pub exact: bool,
    /// `{r : r m ∈ R}` for each module generator `m`.
    pub transporters: Vec<Ideal>,
}

/// `{r : r m ∈ φ(R)}` for a single target element.
pub fn transporter(phi: &RingMap, m: &Poly) -> Result<Ideal> {
    transporter_ideal(phi, m)
}

/// Checks that `module` spans the target as a module over the source:
/// `1` and every `x_k m_j` must lie in `Σ φ(R) m_j`.
fn check_spanning(phi: &RingMap, module: &[Poly]) -> Result<()> {
    let s = phi.target();
    let solver = LinearSolver::new(phi, module)?;
    let mut probes = vec![Poly::one(s.poly())];
    for m in module {
        for k in 0..s.nvars() {
            probes.push(s.mul(&Poly::var(s.poly(), k), m)?);
        }
    }
    for f in probes {
        if solver.solve(&f)?.is_none() {
            return Err(Error::SpanningWitness(format!("{f} is not in the span")));
        }
    }
    Ok(())
}

/// `{r ∈ R : r S ⊆ R}`, given module generators of `S` over `R`. The
/// transporter of each generator is computed exactly, so `exact` is set.
pub fn conductor(phi: &RingMap, module: &[Poly]) -> Result<Conductor> {
    check_spanning(phi, module)?;
    let transporters = module.iter().map(|m| transporter_ideal(phi, m)).collect::<Result<Vec<_>>>()?;
    let cover = phi.source().poly();
    let mut ideal = Ideal::unit(cover);
    for t in &transporters {
        ideal = ops::intersect(&ideal, t)?;
    }
    Ok(Conductor { ideal, exact: true, transporters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffRing;
    use crate::fpring::{subring_member, FPRing};
    use crate::groebner::buchberger;
    use crate::monomial::MonomialOrder;
    use crate::poly::PolyRing;

    #[test]
    fn conductor_of_the_example() {
        let a = FPRing::parse(&PolyRing::with_vars(CoeffRing::integers(), &["X", "Y"]), "Y^2 - 4*X")
            .unwrap()
            .shared();
        let s = FPRing::polynomial(&PolyRing::with_vars(CoeffRing::integers(), &["T"])).shared();
        let phi = RingMap::parse(&a, &s, &["T^2", "2*T"]).unwrap();
        let module = vec![s.elem("1").unwrap(), s.elem("T").unwrap()];
        let c = conductor(&phi, &module).unwrap();
        assert!(c.exact);
        let gb = buchberger(&c.ideal, &MonomialOrder::GrevLex);
        assert_eq!(gb.basis().iter().map(|g| g.to_string()).collect::<Vec<_>>(), vec!["2", "Y"]);
        for r in c.ideal.gens() {
            for m in &module {
                let image = s.mul(&phi.apply(r).unwrap(), m).unwrap();
                assert!(subring_member(&image, &phi).unwrap().is_some());
            }
        }
        assert!(matches!(conductor(&phi, &module[..1]), Err(Error::SpanningWitness(_))));
    }

    #[test]
    fn identity_has_unit_conductor() {
        let r = FPRing::polynomial(&PolyRing::with_vars(CoeffRing::integers(), &["x", "y"])).shared();
        let c = conductor(&RingMap::identity(&r), &[Poly::one(r.poly())]).unwrap();
        assert!(buchberger(&c.ideal, &MonomialOrder::GrevLex).is_unit());
    }
}
