//! Buchberger's algorithm on bare term vectors.
//!
//! Polynomials here are `Vec<(Monomial, Coeff)>` sorted strictly descending
//! in the working order. Over the integers and `Z/p^k` the basis is a strong
//! Gröbner basis: S-polynomials, G-polynomials (gcd of leading
//! coefficients) and, in `Z/p^k`, annihilator multiples are all reduced.
//! Reduction replaces a coefficient by its Euclidean remainder when no
//! reducer divides it exactly, which makes normal forms canonical once the
//! basis is strong.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::coeff::{Coeff, CoeffRing};
use crate::monomial::{Monomial, MonomialOrder};

pub(crate) type Term = (Monomial, Coeff);
pub(crate) type TermVec = Vec<Term>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum PairKind {
    G,
    S,
}

#[derive(Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    kind: PairKind,
}

pub(crate) struct Kernel<'a> {
    pub cr: &'a CoeffRing,
    pub order: &'a MonomialOrder,
}

impl<'a> Kernel<'a> {
    pub fn new(cr: &'a CoeffRing, order: &'a MonomialOrder) -> Self {
        Kernel { cr, order }
    }

    /// `f - q * t * g` by a merge of sorted term lists.
    pub fn sub_scaled(&self, f: &[Term], q: &Coeff, t: &Monomial, g: &[Term]) -> TermVec {
        let mut out = Vec::with_capacity(f.len() + g.len());
        let mut gi = g.iter().map(|(m, c)| (m.mul(t), self.cr.mul(c, q))).peekable();
        let mut fi = f.iter().peekable();
        loop {
            let ord = match (fi.peek(), gi.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(a), Some(b)) => self.order.cmp(&a.0, &b.0),
            };
            match ord {
                Ordering::Greater => out.push(fi.next().unwrap().clone()),
                Ordering::Less => {
                    let (m, c) = gi.next().unwrap();
                    let c = self.cr.neg(&c);
                    if !c.is_zero() {
                        out.push((m, c));
                    }
                }
                Ordering::Equal => {
                    let (m, c) = fi.next().unwrap();
                    let (_, d) = gi.next().unwrap();
                    let c = self.cr.sub(c, &d);
                    if !c.is_zero() {
                        out.push((m.clone(), c));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, f: &[Term], g: &[Term]) -> TermVec {
        let one = Monomial::one(f.first().or(g.first()).map_or(0, |t| t.0.nvars()));
        self.sub_scaled(f, &self.cr.from_int(-1), &one, g)
    }

    pub fn scale(&self, f: &[Term], q: &Coeff, t: &Monomial) -> TermVec {
        f.iter()
            .map(|(m, c)| (m.mul(t), self.cr.mul(c, q)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// Multiplies by the unit that makes the leading coefficient canonical.
    pub fn normalize(&self, f: TermVec) -> TermVec {
        match f.first() {
            None => f,
            Some((_, lc)) => {
                let u = self.cr.normalizing_unit(lc);
                if u == self.cr.one() {
                    f
                } else {
                    let one = Monomial::one(f[0].0.nvars());
                    self.scale(&f, &u, &one)
                }
            }
        }
    }

    /// Full normal form of `f` by `basis` (each basis element nonzero).
    pub fn reduce(&self, f: TermVec, basis: &[TermVec]) -> TermVec {
        let mut f = f;
        let mut start = 0;
        let mut rem = Vec::new();
        'outer: while start < f.len() {
            let (m, c) = f[start].clone();
            let mut best: Option<(usize, num_bigint::BigInt)> = None;
            for (k, g) in basis.iter().enumerate() {
                let (lm, lc) = &g[0];
                if !lm.divides(&m) {
                    continue;
                }
                if let Some(q) = self.cr.divides(lc, &c) {
                    f = self.sub_scaled(&f[start..], &q, &m.div(lm), g);
                    start = 0;
                    continue 'outer;
                }
                let n = self.cr.norm(lc);
                if best.as_ref().is_none_or(|(_, bn)| n < *bn) {
                    best = Some((k, n));
                }
            }
            if let Some((k, _)) = best {
                let (lm, lc) = &basis[k][0];
                let r = self.cr.rem(&c, lc);
                let q = self
                    .cr
                    .divides(lc, &self.cr.sub(&c, &r))
                    .expect("c - rem(c, lc) is a multiple of lc");
                if !q.is_zero() {
                    f = self.sub_scaled(&f[start..], &q, &m.div(lm), &basis[k]);
                    start = 0;
                    debug_assert!(f[0].0 == m && f[0].1 == r);
                }
            }
            rem.push(f[start].clone());
            start += 1;
        }
        rem
    }

    pub fn s_poly(&self, f: &[Term], g: &[Term]) -> TermVec {
        let (lf, cf) = &f[0];
        let (lg, cg) = &g[0];
        let l = lf.lcm(lg);
        let (af, ag) = self.cr.lcm_cofactors(cf, cg);
        let a = self.scale(f, &af, &l.div(lf));
        let b = self.scale(g, &ag, &l.div(lg));
        self.sub_scaled(&a, &self.cr.one(), &Monomial::one(l.nvars()), &b)
    }

    pub fn g_poly(&self, f: &[Term], g: &[Term]) -> TermVec {
        let (lf, cf) = &f[0];
        let (lg, cg) = &g[0];
        let l = lf.lcm(lg);
        let (_, u, v) = self.cr.xgcd(cf, cg);
        let a = self.scale(f, &u, &l.div(lf));
        let b = self.scale(g, &v, &l.div(lg));
        self.add(&a, &b)
    }

    fn needs_g_pair(&self, f: &[Term], g: &[Term]) -> bool {
        self.cr.is_euclidean_non_field()
            && self.cr.divides(&f[0].1, &g[0].1).is_none()
            && self.cr.divides(&g[0].1, &f[0].1).is_none()
    }

    fn s_pair_skippable(&self, f: &[Term], g: &[Term]) -> bool {
        f[0].0.coprime(&g[0].0) && self.cr.coprime(&f[0].1, &g[0].1)
    }

    fn annihilated(&self, f: &[Term]) -> Option<TermVec> {
        let a = self.cr.annihilator(&f[0].1)?;
        let t = self.scale(f, &a, &Monomial::one(f[0].0.nvars()));
        (!t.is_empty()).then_some(t)
    }

    /// Computes the reduced (strong) Gröbner basis of the given generators.
    pub fn groebner(&self, gens: Vec<TermVec>) -> Vec<TermVec> {
        let mut basis: Vec<TermVec> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut pending: Vec<TermVec> = gens;
        pending.reverse();
        loop {
            while let Some(h) = pending.pop() {
                let h = self.normalize(self.reduce(h, &basis));
                if h.is_empty() {
                    continue;
                }
                if h[0].0.is_one() && self.cr.is_unit(&h[0].1) {
                    return vec![h];
                }
                if let Some(a) = self.annihilated(&h) {
                    pending.push(a);
                }
                let n = basis.len();
                for i in 0..n {
                    let lcm = basis[i][0].0.lcm(&h[0].0);
                    if !self.s_pair_skippable(&basis[i], &h) {
                        pairs.push(Pair { i, j: n, lcm: lcm.clone(), kind: PairKind::S });
                    }
                    if self.needs_g_pair(&basis[i], &h) {
                        pairs.push(Pair { i, j: n, lcm, kind: PairKind::G });
                    }
                }
                basis.push(h);
            }
            let Some(idx) = (0..pairs.len()).min_by(|&a, &b| {
                let (p, q) = (&pairs[a], &pairs[b]);
                self.order
                    .cmp(&p.lcm, &q.lcm)
                    .then(p.kind.cmp(&q.kind))
                    .then(p.j.cmp(&q.j))
                    .then(p.i.cmp(&q.i))
            }) else {
                break;
            };
            let pair = pairs.swap_remove(idx);
            let (f, g) = (&basis[pair.i], &basis[pair.j]);
            let h = match pair.kind {
                PairKind::S => self.s_poly(f, g),
                PairKind::G => self.g_poly(f, g),
            };
            if !h.is_empty() {
                pending.push(h);
            }
        }
        self.reduce_basis(basis)
    }

    fn lt_divides(&self, a: &[Term], b: &[Term]) -> bool {
        a[0].0.divides(&b[0].0) && self.cr.divides(&a[0].1, &b[0].1).is_some()
    }

    /// Minimizes, inter-reduces and sorts a strong basis.
    pub fn reduce_basis(&self, basis: Vec<TermVec>) -> Vec<TermVec> {
        let n = basis.len();
        let mut keep = vec![true; n];
        for i in 0..n {
            for j in 0..n {
                if i == j || !keep[j] || !self.lt_divides(&basis[j], &basis[i]) {
                    continue;
                }
                let same = basis[j][0] == basis[i][0];
                if !same || j < i {
                    keep[i] = false;
                    break;
                }
            }
        }
        let mut basis: Vec<TermVec> =
            basis.into_iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| g).collect();
        for i in 0..basis.len() {
            let g = std::mem::take(&mut basis[i]);
            let others: Vec<TermVec> = basis.iter().filter(|b| !b.is_empty()).cloned().collect();
            let tail = self.reduce(g[1..].to_vec(), &others);
            let mut reduced = vec![g[0].clone()];
            reduced.extend(tail);
            basis[i] = reduced;
        }
        basis.sort_by(|a, b| {
            self.order
                .cmp(&a[0].0, &b[0].0)
                .then_with(|| self.cr.norm(&a[0].1).cmp(&self.cr.norm(&b[0].1)))
        });
        basis
    }

    /// Every S-polynomial, G-polynomial and annihilator multiple reduces to
    /// zero.
    pub fn certify(&self, basis: &[TermVec]) -> bool {
        for (i, f) in basis.iter().enumerate() {
            if let Some(a) = self.annihilated(f) {
                if !self.reduce(a, basis).is_empty() {
                    return false;
                }
            }
            for g in &basis[i + 1..] {
                if !self.reduce(self.s_poly(f, g), basis).is_empty() {
                    return false;
                }
                if self.cr.is_euclidean_non_field() && !self.reduce(self.g_poly(f, g), basis).is_empty()
                {
                    return false;
                }
            }
        }
        true
    }
}
