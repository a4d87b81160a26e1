//! Graph ideals of ring maps: subring membership, kernels and R-linear
//! solving in the target.
//!
//! The graph ring has variables `[x (target), extra..., y (source)]` and
//! carries `J_S(x) + (y_i - f_i(x))`. Under an order that eliminates `x`
//! (and then the extras), normal forms that are free of `x` are exactly the
//! images of the source.

use std::sync::Arc;

use super::RingMap;
use crate::error::{Error, Result};
use crate::groebner::{buchberger, GroebnerBasis, Ideal};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Poly, PolyRing};

pub(crate) struct Graph {
    pub ring: Arc<PolyRing>,
    pub nx: usize,
    pub nextra: usize,
}

impl Graph {
    pub fn new(map: &RingMap, nextra: usize) -> Result<Self> {
        let nx = map.target().nvars();
        let ny = map.source().nvars();
        let names: Vec<String> = (0..nx)
            .map(|i| format!("_x{i}"))
            .chain((0..nextra).map(|i| format!("_w{i}")))
            .chain((0..ny).map(|i| format!("_y{i}")))
            .collect();
        let ring = PolyRing::new(map.source().coeffs().clone(), names)?;
        Ok(Graph { ring, nx, nextra })
    }

    pub fn from_target(&self, f: &Poly) -> Result<Poly> {
        f.embed(&self.ring, &(0..self.nx).collect::<Vec<_>>())
    }

    pub fn extra(&self, i: usize) -> Poly {
        Poly::var(&self.ring, self.nx + i)
    }

    /// `J_S(x) + (y_i - f_i(x))`.
    pub fn base_relations(&self, map: &RingMap) -> Result<Vec<Poly>> {
        let mut rels = Vec::new();
        for g in map.target().defining().gens() {
            rels.push(self.from_target(g)?);
        }
        for (i, f) in map.images().iter().enumerate() {
            let y = Poly::var(&self.ring, self.nx + self.nextra + i);
            rels.push(y.checked_sub(&self.from_target(f)?)?);
        }
        Ok(rels)
    }

    pub fn is_free_of_prefix(&self, f: &Poly, upto: usize) -> bool {
        f.terms().iter().all(|(m, _)| m.exponents()[..upto].iter().all(|&e| e == 0))
    }

    /// Restriction of a polynomial in the `y` variables to the source ring.
    pub fn to_source(&self, f: &Poly, source: &Arc<PolyRing>) -> Poly {
        let off = self.nx + self.nextra;
        let terms = f
            .terms()
            .iter()
            .map(|(m, c)| (Monomial::from_exponents(m.exponents()[off..].to_vec()), c.clone()))
            .collect();
        Poly::from_terms(source, terms)
    }
}

/// Decides membership in the image of a ring map, reusing one Gröbner basis
/// of the graph ideal.
pub struct SubringOracle {
    map: RingMap,
    graph: Graph,
    gb: GroebnerBasis,
}

impl SubringOracle {
    pub fn new(map: &RingMap) -> Result<Self> {
        let cr = map.source().coeffs();
        if !(cr.is_field() || cr.is_euclidean_non_field()) {
            return Err(Error::UnsupportedBase { ring: cr.to_string(), op: "subring membership" });
        }
        let graph = Graph::new(map, 0)?;
        let ideal = Ideal::new(&graph.ring, graph.base_relations(map)?)?;
        let gb = buchberger(&ideal, &MonomialOrder::elimination(graph.nx));
        Ok(SubringOracle { map: map.clone(), graph, gb })
    }

    pub fn map(&self) -> &RingMap {
        &self.map
    }

    /// A preimage of `f`, reduced in the source, when `f` lies in the image.
    pub fn preimage(&self, f: &Poly) -> Result<Option<Poly>> {
        if f.ring() != self.map.target().poly() {
            return Err(Error::IncompatibleContext(format!("{} vs {}", f.ring(), self.map.target().poly())));
        }
        let nf = self.gb.normal_form(&self.graph.from_target(f)?)?;
        if !self.graph.is_free_of_prefix(&nf, self.graph.nx) {
            return Ok(None);
        }
        let pre = self.map.source().reduce(&self.graph.to_source(&nf, self.map.source().poly()))?;
        Ok(Some(pre))
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(self.preimage(f)?.is_some())
    }
}

/// Membership of `f` in the image of `map`, with a preimage when it holds.
pub fn subring_member(f: &Poly, map: &RingMap) -> Result<Option<Poly>> {
    SubringOracle::new(map)?.preimage(f)
}

/// `ker(map)` as an ideal of the polynomial cover of the source; it
/// contains the defining relations of the source.
pub fn kernel_of_map(map: &RingMap) -> Result<Ideal> {
    let graph = Graph::new(map, 0)?;
    let ideal = Ideal::new(&graph.ring, graph.base_relations(map)?)?;
    let gb = buchberger(&ideal, &MonomialOrder::elimination(graph.nx));
    let source = map.source().poly();
    let gens = gb
        .basis()
        .iter()
        .filter(|g| graph.is_free_of_prefix(g, graph.nx))
        .map(|g| graph.to_source(g, source))
        .collect();
    Ideal::new(source, gens)
}

/// Solves `s = Σ φ(r_j) m_j` for fixed module elements `m_j` of the target.
///
/// Works in `[x, t, w_1..w_k, y]` with `w_j - m_j t`; a solution exists iff
/// the normal form of `s t` is free of `x` and `t` and linear in the `w`,
/// and then its `w_j`-coefficients are the `r_j`.
pub struct LinearSolver {
    map: RingMap,
    graph: Graph,
    gb: GroebnerBasis,
    k: usize,
}

impl LinearSolver {
    pub fn new(map: &RingMap, module: &[Poly]) -> Result<Self> {
        let cr = map.source().coeffs();
        if !(cr.is_field() || cr.is_euclidean_non_field()) {
            return Err(Error::UnsupportedBase { ring: cr.to_string(), op: "linear solving" });
        }
        let k = module.len();
        let graph = Graph::new(map, k + 1)?;
        let mut rels = graph.base_relations(map)?;
        let t = graph.extra(0);
        for (j, m) in module.iter().enumerate() {
            rels.push(graph.extra(j + 1).checked_sub(&graph.from_target(m)?.checked_mul(&t)?)?);
        }
        let order = MonomialOrder::block(graph.nx + 1, MonomialOrder::block(k, MonomialOrder::GrevLex));
        let gb = buchberger(&Ideal::new(&graph.ring, rels)?, &order);
        Ok(LinearSolver { map: map.clone(), graph, gb, k })
    }

    /// Coefficients `r_j` (reduced in the source) with `s = Σ φ(r_j) m_j`.
    pub fn solve(&self, s: &Poly) -> Result<Option<Vec<Poly>>> {
        let g = &self.graph;
        let st = g.from_target(s)?.checked_mul(&g.extra(0))?;
        let nf = self.gb.normal_form(&st)?;
        if !g.is_free_of_prefix(&nf, g.nx + 1) {
            return Ok(None);
        }
        let wrange = g.nx + 1..g.nx + 1 + self.k;
        let source = self.map.source().poly();
        let mut coeffs: Vec<Vec<_>> = vec![Vec::new(); self.k];
        for (m, c) in nf.terms() {
            let e = m.exponents();
            let wdeg: u32 = e[wrange.clone()].iter().sum();
            match wdeg {
                0 => {}
                1 => {
                    let j = wrange.clone().position(|i| e[i] == 1).unwrap();
                    let y = Monomial::from_exponents(e[g.nx + g.nextra..].to_vec());
                    coeffs[j].push((y, c.clone()));
                }
                _ => return Ok(None),
            }
        }
        let r = coeffs
            .into_iter()
            .map(|t| self.map.source().reduce(&Poly::from_terms(source, t)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(r))
    }
}

/// The `R`-module `{r : r m ∈ φ(R)}` for a single target element `m`, as an
/// ideal of the source cover (containing its defining relations).
pub(crate) fn transporter_ideal(map: &RingMap, m: &Poly) -> Result<Ideal> {
    let graph = Graph::new(map, 1)?;
    let mut rels = graph.base_relations(map)?;
    rels.push(graph.extra(0).checked_sub(&graph.from_target(m)?)?);
    let order = MonomialOrder::block(graph.nx, MonomialOrder::block(1, MonomialOrder::GrevLex));
    let gb = buchberger(&Ideal::new(&graph.ring, rels)?, &order);
    let source = map.source().poly();
    let w = graph.nx;
    let mut gens = Vec::new();
    for g in gb.basis() {
        if !graph.is_free_of_prefix(g, graph.nx) {
            continue;
        }
        let wdeg = g.terms().iter().map(|(m, _)| m.exponents()[w]).max().unwrap_or(0);
        let pick = |d: u32| {
            let terms = g
                .terms()
                .iter()
                .filter(|(m, _)| m.exponents()[w] == d)
                .map(|(m, c)| (Monomial::from_exponents(m.exponents()[w + 1..].to_vec()), c.clone()))
                .collect();
            Poly::from_terms(source, terms)
        };
        match wdeg {
            0 => gens.push(pick(0)),
            1 => gens.push(pick(1)),
            _ => {}
        }
    }
    gens.extend(map.source().defining().gens().iter().cloned());
    Ideal::new(source, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffRing;
    use crate::fpring::FPRing;

    fn example_map() -> RingMap {
        let a = FPRing::parse(&PolyRing::with_vars(CoeffRing::integers(), &["X", "Y"]), "Y^2 - 4*X")
            .unwrap()
            .shared();
        let s = FPRing::polynomial(&PolyRing::with_vars(CoeffRing::integers(), &["T"])).shared();
        RingMap::parse(&a, &s, &["T^2", "2*T"]).unwrap()
    }

    #[test]
    fn membership_in_the_image() {
        let phi = example_map();
        let s = phi.target();
        let o = SubringOracle::new(&phi).unwrap();
        assert_eq!(o.preimage(&s.elem("T").unwrap()).unwrap(), None);
        assert_eq!(o.preimage(&s.elem("T^2").unwrap()).unwrap().unwrap().to_string(), "X");
        assert_eq!(o.preimage(&s.elem("2*T").unwrap()).unwrap().unwrap().to_string(), "Y");
        let pre = o.preimage(&s.elem("T^4 + 6*T^3 - 4").unwrap()).unwrap().unwrap();
        assert_eq!(phi.apply(&pre).unwrap(), s.elem("T^4 + 6*T^3 - 4").unwrap());
        assert!(!o.contains(&s.elem("T^3").unwrap()).unwrap());
    }

    #[test]
    fn kernels() {
        let phi = example_map();
        let free = FPRing::polynomial(phi.source().poly()).shared();
        let cover = RingMap::new(&free, phi.target(), phi.images().to_vec()).unwrap();
        let k = kernel_of_map(&cover).unwrap();
        let gb = buchberger(&k, &MonomialOrder::GrevLex);
        assert_eq!(gb.basis().iter().map(|g| g.to_string()).collect::<Vec<_>>(), vec!["Y^2 - 4*X"]);
        let id = RingMap::identity(&free);
        assert!(kernel_of_map(&id).unwrap().gens().is_empty());
    }

    #[test]
    fn linear_solve_in_the_module() {
        let phi = example_map();
        let s = phi.target();
        let solver = LinearSolver::new(&phi, &[s.elem("1").unwrap(), s.elem("T").unwrap()]).unwrap();
        for f in ["T^3 + 5", "7*T - T^2", "T^5"] {
            let f = s.elem(f).unwrap();
            let r = solver.solve(&f).unwrap().unwrap();
            let back = &phi.apply(&r[0]).unwrap() + &(&phi.apply(&r[1]).unwrap() * &s.elem("T").unwrap());
            assert_eq!(s.reduce(&back).unwrap(), f);
        }
        let only_one = LinearSolver::new(&phi, &[s.elem("1").unwrap()]).unwrap();
        assert!(only_one.solve(&s.elem("T").unwrap()).unwrap().is_none());
    }

    #[test]
    fn transporter_of_t() {
        let phi = example_map();
        let t = transporter_ideal(&phi, &phi.target().elem("T").unwrap()).unwrap();
        let gb = buchberger(&t, &MonomialOrder::GrevLex);
        assert_eq!(gb.basis().iter().map(|g| g.to_string()).collect::<Vec<_>>(), vec!["2", "Y"]);
    }
}
