//! Buchberger's algorithm, normal forms, and the standard-monomial basis of
//! a zero-dimensional quotient ring.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{same_ring, Monomial, MonomialOrder, MultiPoly, Ring};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Reduced Groebner basis: monic elements, sorted by descending leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<C> {
    order: MonomialOrder,
    ring: Arc<Ring>,
    elements: Vec<MultiPoly<C>>,
}

impl<C: Field> PartialEq for GroebnerBasis<C> {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.elements == other.elements
    }
}

impl<C: Field> GroebnerBasis<C> {
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn elements(&self) -> &[MultiPoly<C>] {
        &self.elements
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .map(|g| g.leading_monomial(self.order).expect("basis elements are nonzero").clone())
            .collect()
    }

    /// True when the ideal is the whole ring (no solutions).
    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant()
    }
}

/// Standard monomials of a zero-dimensional ideal, in increasing term order.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientBasis {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl QuotientBasis {
    fn new(monomials: Vec<Monomial>) -> Self {
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        QuotientBasis { monomials, index }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

fn reduce_against<C: Field>(f: &MultiPoly<C>, divisors: &[MultiPoly<C>], order: MonomialOrder) -> MultiPoly<C> {
    let lts: Vec<(Monomial, C)> = divisors
        .iter()
        .map(|g| {
            let (m, c) = g.leading_term(order).expect("nonzero divisor");
            (m.clone(), c.clone())
        })
        .collect();
    let mut p = f.clone();
    let mut rem = MultiPoly::zero(f.ring());
    while let Some((m, c)) = p.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        match lts.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(k) => {
                let q = m.div(&lts[k].0);
                let factor = c / lts[k].1.clone();
                p.sub_mul_term(&divisors[k], &q, &factor);
            }
            None => {
                p.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
    }
    rem
}

/// Remainder of multivariate division by `basis`; no term of the result is
/// divisible by a leading monomial of the basis.
pub fn normal_form<C: Field>(f: &MultiPoly<C>, basis: &GroebnerBasis<C>) -> Result<MultiPoly<C>> {
    if !same_ring(f.ring(), &basis.ring) {
        return Err(Error::RingMismatch);
    }
    Ok(reduce_against(f, &basis.elements, basis.order))
}

/// S-polynomial of two nonzero polynomials.
pub fn s_polynomial<C: Field>(f: &MultiPoly<C>, g: &MultiPoly<C>, order: MonomialOrder) -> MultiPoly<C> {
    let (mf, cf) = f.leading_term(order).expect("nonzero");
    let (mg, cg) = g.leading_term(order).expect("nonzero");
    let l = mf.lcm(mg);
    let a = f.mul_term(&l.div(mf), &(C::one() / cf.clone()));
    let b = g.mul_term(&l.div(mg), &(C::one() / cg.clone()));
    &a - &b
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduced Groebner basis of the ideal generated by `generators`.
///
/// Pairs are processed by the normal strategy (smallest lcm first) and
/// pruned by the coprime-leading-term and chain criteria.
pub fn buchberger<C: Field>(generators: &[MultiPoly<C>], order: MonomialOrder) -> Result<GroebnerBasis<C>> {
    let first = generators.first().ok_or(Error::EmptyInput("generator list"))?;
    let ring = first.ring().clone();
    if generators.iter().any(|g| !same_ring(g.ring(), &ring)) {
        return Err(Error::RingMismatch);
    }

    let mut basis: Vec<MultiPoly<C>> = Vec::new();
    let mut lms: Vec<Monomial> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();

    let push = |h: MultiPoly<C>, basis: &mut Vec<MultiPoly<C>>, lms: &mut Vec<Monomial>, pairs: &mut Vec<Pair>| {
        let h = h.monic(order);
        let lm = h.leading_monomial(order).expect("nonzero").clone();
        let k = basis.len();
        for (i, m) in lms.iter().enumerate() {
            pairs.push(Pair { i, j: k, lcm: m.lcm(&lm) });
        }
        basis.push(h);
        lms.push(lm);
    };

    for g in generators {
        let h = reduce_against(g, &basis, order);
        if !h.is_zero() {
            push(h, &mut basis, &mut lms, &mut pairs);
        }
    }

    let unit = |basis: &[MultiPoly<C>]| basis.iter().any(|g| g.is_constant());

    while !pairs.is_empty() && !unit(&basis) {
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pairs[a], &pairs[b]);
                pa.lcm
                    .degree()
                    .cmp(&pb.lcm.degree())
                    .then_with(|| order.cmp(&pa.lcm, &pb.lcm))
                    .then_with(|| (pa.j, pa.i).cmp(&(pb.j, pb.i)))
            })
            .expect("nonempty");
        let pair = pairs.swap_remove(best);
        let (i, j) = (pair.i, pair.j);
        done.insert((i, j));

        if lms[i].coprime(&lms[j]) {
            continue;
        }
        let processed = |a: usize, b: usize| done.contains(&(a.min(b), a.max(b)));
        let chain = (0..basis.len())
            .any(|k| k != i && k != j && lms[k].divides(&pair.lcm) && processed(i, k) && processed(j, k));
        if chain {
            continue;
        }

        let s = s_polynomial(&basis[i], &basis[j], order);
        let h = reduce_against(&s, &basis, order);
        if !h.is_zero() {
            push(h, &mut basis, &mut lms, &mut pairs);
        }
    }

    if unit(&basis) {
        return Ok(GroebnerBasis { order, ring: ring.clone(), elements: vec![MultiPoly::one(&ring)] });
    }
    Ok(GroebnerBasis { order, ring, elements: interreduce(basis, order) })
}

fn interreduce<C: Field>(basis: Vec<MultiPoly<C>>, order: MonomialOrder) -> Vec<MultiPoly<C>> {
    // minimal basis: drop elements whose leading monomial is divisible by another's
    let mut sorted = basis;
    sorted.sort_by(|a, b| order.cmp(a.leading_monomial(order).unwrap(), b.leading_monomial(order).unwrap()));
    let mut minimal: Vec<MultiPoly<C>> = Vec::new();
    for g in sorted {
        let lm = g.leading_monomial(order).unwrap();
        if minimal.iter().all(|h| !h.leading_monomial(order).unwrap().divides(lm)) {
            minimal.push(g);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<MultiPoly<C>> =
            minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, g)| g.clone()).collect();
        reduced.push(reduce_against(&minimal[k], &others, order).monic(order));
    }
    reduced.sort_by(|a, b| order.cmp(b.leading_monomial(order).unwrap(), a.leading_monomial(order).unwrap()));
    reduced
}

/// Standard monomials of `basis`, or `NotZeroDimensional` if they are infinite.
///
/// An ideal equal to the whole ring yields an empty basis.
pub fn quotient_basis<C: Field>(basis: &GroebnerBasis<C>) -> Result<QuotientBasis> {
    let order = basis.order;
    let nvars = basis.ring.nvars();
    let lms = basis.leading_monomials();
    if basis.is_unit() {
        return Ok(QuotientBasis::new(Vec::new()));
    }
    let mut bounds = vec![0u32; nvars];
    for (v, bound) in bounds.iter_mut().enumerate() {
        *bound = lms
            .iter()
            .filter(|m| m.pure_power_of() == Some(v))
            .map(|m| m.exponents()[v])
            .min()
            .ok_or_else(|| Error::NotZeroDimensional { variable: basis.ring.vars()[v].clone() })?;
    }

    let mut out = Vec::new();
    let mut e = vec![0u32; nvars];
    'walk: loop {
        let m = Monomial::new(e.clone());
        if !lms.iter().any(|lm| lm.divides(&m)) {
            out.push(m);
        }
        for v in 0..nvars {
            e[v] += 1;
            if e[v] < bounds[v] {
                continue 'walk;
            }
            e[v] = 0;
        }
        break;
    }
    out.sort_by(|a, b| order.cmp(a, b));
    Ok(QuotientBasis::new(out))
}

impl<C: Field> GroebnerBasis<C> {
    /// Checks that all S-polynomials reduce to zero and the basis is reduced.
    pub fn verify(&self) -> bool {
        let n = self.elements.len();
        for i in 0..n {
            for j in i + 1..n {
                let s = s_polynomial(&self.elements[i], &self.elements[j], self.order);
                if !reduce_against(&s, &self.elements, self.order).is_zero() {
                    return false;
                }
            }
        }
        let lms = self.leading_monomials();
        for (k, g) in self.elements.iter().enumerate() {
            if !g.is_monic(self.order) {
                return false;
            }
            for (i, lm) in lms.iter().enumerate() {
                if i != k && g.terms().any(|(m, _)| lm.divides(m)) {
                    return false;
                }
            }
        }
        true
    }
}
