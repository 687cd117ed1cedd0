//! Buchberger's algorithm and the ideal machinery built on it.
//!
//! Inside the engine a polynomial is a vector of terms sorted in descending
//! order under the active monomial order; [`MultiPoly`] is only used at the
//! boundary.

mod hilbert;
mod ops;
mod solve;

use std::cmp::Ordering;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::{Field, Q};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{same_ring, MultiPoly, Ring};

pub use hilbert::{hilbert_numerator, krull_dimension};
pub use ops::{
    elimination, ideal_product, ideal_quotient, ideal_quotient_principal, ideal_sum, intersection, saturation,
};
pub use solve::{affine_points, projective_points};

type Term<K> = (Monomial, K);

/// Limits on a Buchberger run; `None` means unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of S-polynomials reduced.
    pub max_pairs: Option<usize>,
    /// Maximum number of terms in any intermediate polynomial.
    pub max_terms: Option<usize>,
}

/// A finite generating set in a declared ring, with a lazily computed
/// Gröbner basis for its monomial order.
#[derive(Clone, Debug)]
pub struct Ideal<K: Field = Q> {
    ring: Ring<K>,
    generators: Vec<MultiPoly<K>>,
    order: MonomialOrder,
    notes: Vec<String>,
    gb: OnceLock<GroebnerBasis<K>>,
}

impl<K: Field> Ideal<K> {
    /// Zero generators are dropped.
    pub fn new(ring: &Ring<K>, generators: Vec<MultiPoly<K>>) -> Result<Self> {
        if generators.iter().any(|g| !same_ring(g.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            order: MonomialOrder::Grevlex,
            notes: Vec::new(),
            gb: OnceLock::new(),
        })
    }

    pub fn zero(ring: &Ring<K>) -> Self {
        Self::new(ring, Vec::new()).expect("no generators")
    }

    pub fn unit(ring: &Ring<K>) -> Self {
        Self::new(ring, vec![MultiPoly::one(ring)]).expect("same ring")
    }

    /// The ideal of linear forms `sum c_i * var(offset + i)`.
    pub fn from_linear_forms(ring: &Ring<K>, forms: &[Vec<K>], offset: usize) -> Self {
        let gens = forms
            .iter()
            .map(|f| {
                MultiPoly::from_terms(
                    ring,
                    f.iter()
                        .enumerate()
                        .map(|(i, c)| (Monomial::var(ring.nvars(), offset + i), c.clone())),
                )
            })
            .collect();
        Self::new(ring, gens).expect("same ring")
    }

    pub fn with_order(mut self, order: MonomialOrder) -> Self {
        if order != self.order {
            self.order = order;
            self.gb = OnceLock::new();
        }
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn ring(&self) -> &Ring<K> {
        &self.ring
    }

    pub fn generators(&self) -> &[MultiPoly<K>] {
        &self.generators
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// Diagnostics attached during construction.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    /// The cached reduced Gröbner basis, computing it on first use.
    pub fn groebner(&self) -> &GroebnerBasis<K> {
        self.gb.get_or_init(|| buchberger(self, self.order))
    }

    /// Like [`Ideal::groebner`] but honouring a budget.
    pub fn groebner_with_budget(&self, budget: Budget) -> Result<&GroebnerBasis<K>> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb);
        }
        let gb = buchberger_with_budget(self, self.order, budget)?;
        Ok(self.gb.get_or_init(|| gb))
    }

    pub fn contains(&self, f: &MultiPoly<K>) -> Result<bool> {
        Ok(normal_form(f, self.groebner())?.is_zero())
    }

    /// Ideal equality via reduced Gröbner bases.
    pub fn same_ideal(&self, other: &Ideal<K>) -> Result<bool> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let a = self.groebner();
        let b = if other.order == self.order {
            other.groebner().clone()
        } else {
            buchberger(other, self.order)
        };
        Ok(a.polys == b.polys)
    }

    /// Generators with zero and scalar-multiple duplicates removed.
    pub fn deduplicated(&self) -> Self {
        let mut kept: Vec<MultiPoly<K>> = Vec::new();
        let mut seen: Vec<MultiPoly<K>> = Vec::new();
        for g in &self.generators {
            let m = g.monic(MonomialOrder::Grevlex);
            if !seen.contains(&m) {
                seen.push(m);
                kept.push(g.clone());
            }
        }
        let mut out = Ideal::new(&self.ring, kept).expect("same ring").with_order(self.order);
        out.notes = self.notes.clone();
        out
    }

    /// A minimal generating subset of a homogeneous ideal: generators are
    /// visited by increasing degree and kept only when not already in the
    /// ideal of those kept so far.
    pub fn minimal_generators(&self) -> Self {
        let mut gens: Vec<(usize, MultiPoly<K>)> = self.generators.iter().cloned().enumerate().collect();
        gens.sort_by_key(|(i, g)| (g.total_degree().unwrap_or(0), *i));
        let mut kept: Vec<(usize, MultiPoly<K>)> = Vec::new();
        for (i, g) in gens {
            let sub = Ideal::new(&self.ring, kept.iter().map(|(_, p)| p.clone()).collect()).expect("same ring");
            if kept.is_empty() || !sub.contains(&g).expect("same ring") {
                kept.push((i, g));
            }
        }
        kept.sort_by_key(|(i, _)| *i);
        let mut out = Ideal::new(&self.ring, kept.into_iter().map(|(_, p)| p).collect())
            .expect("same ring")
            .with_order(self.order);
        out.notes = self.notes.clone();
        out
    }

    /// Reinterprets in another ring with the same variable count.
    pub fn map_coefficients<L: Field>(&self, target: &Ring<L>, f: impl Fn(&K) -> L) -> Ideal<L> {
        Ideal::new(target, self.generators.iter().map(|g| g.map_coefficients(target, &f)).collect())
            .expect("same ring")
            .with_order(self.order)
    }
}

/// A reduced Gröbner basis: monic, interreduced, sorted by increasing leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis<K: Field = Q> {
    ring: Ring<K>,
    order: MonomialOrder,
    polys: Vec<MultiPoly<K>>,
    terms: Vec<Vec<Term<K>>>,
}

impl<K: Field> GroebnerBasis<K> {
    pub fn ring(&self) -> &Ring<K> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn generators(&self) -> &[MultiPoly<K>] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.terms.iter().map(|t| t[0].0.clone()).collect()
    }

    /// True when the basis is {1}.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0][0].0.is_one()
    }

    /// Buchberger's criterion: every S-polynomial reduces to zero.
    pub fn self_check(&self) -> bool {
        let reducers = Reducers::new(&self.terms);
        for i in 0..self.terms.len() {
            for j in i + 1..self.terms.len() {
                let s = s_polynomial(&self.terms[i], &self.terms[j], self.order);
                if !reducers.reduce(s, self.order, None).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

fn mask(m: &Monomial) -> u64 {
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .fold(0u64, |acc, (i, _)| acc | 1u64 << (i % 64))
}

/// `f - c * m * g`, with `f` and `g` sorted descending.
fn sub_mul<K: Field>(f: &[Term<K>], c: &K, m: &Monomial, g: &[Term<K>], order: MonomialOrder) -> Vec<Term<K>> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let next_g = |j: usize| -> Term<K> { (g[j].0.mul(m), g[j].1.mul(c)) };
    let mut gj = (j < g.len()).then(|| next_g(j));
    while i < f.len() || gj.is_some() {
        match (f.get(i), &gj) {
            (Some(a), Some(b)) => match order.cmp(&a.0, &b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.0.clone(), b.1.neg()));
                    j += 1;
                    gj = (j < g.len()).then(|| next_g(j));
                }
                Ordering::Equal => {
                    let v = a.1.sub(&b.1);
                    if !v.is_zero() {
                        out.push((a.0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                    gj = (j < g.len()).then(|| next_g(j));
                }
            },
            (Some(a), None) => {
                out.push(a.clone());
                i += 1;
            }
            (None, Some(b)) => {
                out.push((b.0.clone(), b.1.neg()));
                j += 1;
                gj = (j < g.len()).then(|| next_g(j));
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn make_monic<K: Field>(f: &mut [Term<K>]) {
    if let Some((_, c)) = f.first() {
        if !c.is_one() {
            let inv = c.inv().expect("nonzero leading coefficient");
            for t in f.iter_mut() {
                t.1 = t.1.mul(&inv);
            }
        }
    }
}

fn s_polynomial<K: Field>(f: &[Term<K>], g: &[Term<K>], order: MonomialOrder) -> Vec<Term<K>> {
    let l = f[0].0.lcm(&g[0].0);
    let mf = l.div(&f[0].0);
    let mg = l.div(&g[0].0);
    let cf = f[0].1.inv().expect("nonzero");
    let cg = g[0].1.inv().expect("nonzero");
    let scaled_f: Vec<Term<K>> = f[1..].iter().map(|(m, c)| (m.mul(&mf), c.mul(&cf))).collect();
    sub_mul(&scaled_f, &cg, &mg, &g[1..], order)
}

/// A set of monic polynomials used as divisors.
struct Reducers<'a, K: Field> {
    polys: Vec<&'a [Term<K>]>,
    masks: Vec<u64>,
}

impl<'a, K: Field> Reducers<'a, K> {
    fn new(polys: &'a [Vec<Term<K>>]) -> Self {
        Self::from_refs(polys.iter().map(|p| p.as_slice()).collect())
    }

    fn from_refs(polys: Vec<&'a [Term<K>]>) -> Self {
        let masks = polys.iter().map(|p| mask(&p[0].0)).collect();
        Reducers { polys, masks }
    }

    fn find(&self, m: &Monomial) -> Option<usize> {
        let mm = mask(m);
        (0..self.polys.len()).find(|&i| self.masks[i] & !mm == 0 && self.polys[i][0].0.divides(m))
    }

    /// Full reduction (leading and tail terms).
    fn reduce(&self, mut f: Vec<Term<K>>, order: MonomialOrder, max_terms: Option<usize>) -> Vec<Term<K>> {
        self.try_reduce(&mut f, order, max_terms).unwrap_or_default()
    }

    fn try_reduce(&self, f: &mut Vec<Term<K>>, order: MonomialOrder, max_terms: Option<usize>) -> Option<Vec<Term<K>>> {
        let mut out = Vec::new();
        let mut start = 0;
        while start < f.len() {
            let (m, c) = &f[start];
            match self.find(m) {
                Some(r) => {
                    let g = self.polys[r];
                    let q = m.div(&g[0].0);
                    let c = c.div(&g[0].1);
                    *f = sub_mul(&f[start + 1..], &c, &q, &g[1..], order);
                    start = 0;
                    if max_terms.is_some_and(|mx| f.len() + out.len() > mx) {
                        return None;
                    }
                }
                None => {
                    out.push(f[start].clone());
                    start += 1;
                }
            }
        }
        Some(out)
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
    serial: usize,
}

struct Engine<K: Field> {
    order: MonomialOrder,
    polys: Vec<Vec<Term<K>>>,
    sugar: Vec<u32>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    serial: usize,
}

impl<K: Field> Engine<K> {
    fn lm(&self, i: usize) -> &Monomial {
        &self.polys[i][0].0
    }

    fn reducers(&self) -> Reducers<'_, K> {
        Reducers::from_refs(self.active.iter().map(|&i| self.polys[i].as_slice()).collect())
    }

    fn pair_sugar(&self, i: usize, j: usize, lcm: &Monomial) -> u32 {
        let d = lcm.degree();
        (self.sugar[i] + d - self.lm(i).degree()).max(self.sugar[j] + d - self.lm(j).degree())
    }

    /// Inserts a new monic, reduced polynomial with the Gebauer–Möller criteria.
    fn update(&mut self, h: Vec<Term<K>>, sugar: u32) {
        let hi = self.polys.len();
        self.polys.push(h);
        self.sugar.push(sugar);
        let lm_h = self.lm(hi).clone();

        let mut candidates: Vec<(usize, Monomial)> = self
            .active
            .iter()
            .map(|&g| (g, self.lm(g).lcm(&lm_h)))
            .collect();
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        while !candidates.is_empty() {
            let (g, l) = candidates.remove(0);
            let coprime = self.lm(g).is_coprime(&lm_h);
            let dominated = candidates.iter().chain(kept.iter()).any(|(_, l2)| l2.divides(&l));
            if coprime || !dominated {
                kept.push((g, l));
            }
        }
        kept.retain(|(g, _)| !self.lm(*g).is_coprime(&lm_h));

        let polys = &self.polys;
        self.pairs.retain(|p| {
            let li = polys[p.i][0].0.lcm(&lm_h);
            let lj = polys[p.j][0].0.lcm(&lm_h);
            !(lm_h.divides(&p.lcm) && li != p.lcm && lj != p.lcm)
        });
        for (g, l) in kept {
            let sugar = self.pair_sugar(g, hi, &l);
            self.pairs.push(Pair {
                i: g,
                j: hi,
                lcm: l,
                sugar,
                serial: self.serial,
            });
            self.serial += 1;
        }
        let polys = &self.polys;
        self.active.retain(|&g| !lm_h.divides(&polys[g][0].0));
        self.active.push(hi);
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let order = self.order;
        let best = (0..self.pairs.len()).min_by(|&a, &b| {
            let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
            pa.sugar
                .cmp(&pb.sugar)
                .then_with(|| order.cmp(&pa.lcm, &pb.lcm))
                .then_with(|| pa.serial.cmp(&pb.serial))
        })?;
        Some(self.pairs.swap_remove(best))
    }
}

fn to_terms<K: Field>(f: &MultiPoly<K>, order: MonomialOrder) -> Vec<Term<K>> {
    f.sorted_terms(order)
}

fn from_terms<K: Field>(ring: &Ring<K>, t: Vec<Term<K>>) -> MultiPoly<K> {
    MultiPoly::from_terms(ring, t)
}

/// Reduced Gröbner basis of `ideal` under `order`.
pub fn buchberger<K: Field>(ideal: &Ideal<K>, order: MonomialOrder) -> GroebnerBasis<K> {
    buchberger_with_budget(ideal, order, Budget::default()).expect("unlimited budget")
}

/// Reduced Gröbner basis, giving up with [`Error::BudgetExceeded`] when a limit is hit.
pub fn buchberger_with_budget<K: Field>(
    ideal: &Ideal<K>,
    order: MonomialOrder,
    budget: Budget,
) -> Result<GroebnerBasis<K>> {
    let mut inputs: Vec<(u32, usize, Vec<Term<K>>)> = ideal
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| (g.total_degree().unwrap_or(0), i, to_terms(g, order)))
        .collect();
    inputs.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| order.cmp(&a.2[0].0, &b.2[0].0))
            .then_with(|| a.1.cmp(&b.1))
    });

    let mut engine = Engine {
        order,
        polys: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        serial: 0,
    };
    let exceeded = |what: &str| Error::BudgetExceeded(what.to_string());

    for (deg, _, f) in inputs {
        let mut f = f;
        let Some(mut h) = engine.reducers().try_reduce(&mut f, order, budget.max_terms) else {
            return Err(exceeded("term limit"));
        };
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        if h[0].0.is_one() {
            return Ok(unit_basis(ideal.ring(), order));
        }
        engine.update(h, deg);
    }

    let mut reduced_pairs = 0usize;
    while let Some(p) = engine.next_pair() {
        reduced_pairs += 1;
        if budget.max_pairs.is_some_and(|m| reduced_pairs > m) {
            return Err(exceeded("pair limit"));
        }
        let mut s = s_polynomial(&engine.polys[p.i], &engine.polys[p.j], order);
        let Some(mut h) = engine.reducers().try_reduce(&mut s, order, budget.max_terms) else {
            return Err(exceeded("term limit"));
        };
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        if h[0].0.is_one() {
            return Ok(unit_basis(ideal.ring(), order));
        }
        engine.update(h, p.sugar);
    }

    // Interreduce the minimal basis.
    let mut basis: Vec<Vec<Term<K>>> = engine.active.iter().map(|&i| engine.polys[i].clone()).collect();
    for i in 0..basis.len() {
        let others: Vec<&[Term<K>]> = basis
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.as_slice())
            .collect();
        let reducers = Reducers::from_refs(others);
        let lead = basis[i][0].clone();
        let tail = reducers.reduce(basis[i][1..].to_vec(), order, None);
        let mut new = vec![lead];
        new.extend(tail);
        basis[i] = new;
    }
    basis.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    Ok(make_basis(ideal.ring(), order, basis))
}

fn unit_basis<K: Field>(ring: &Ring<K>, order: MonomialOrder) -> GroebnerBasis<K> {
    make_basis(ring, order, vec![vec![(Monomial::one(ring.nvars()), ring.one())]])
}

fn make_basis<K: Field>(ring: &Ring<K>, order: MonomialOrder, terms: Vec<Vec<Term<K>>>) -> GroebnerBasis<K> {
    GroebnerBasis {
        ring: ring.clone(),
        order,
        polys: terms.iter().map(|t| from_terms(ring, t.clone())).collect(),
        terms,
    }
}

/// Remainder of `f` on division by the basis; zero iff `f` lies in the ideal.
pub fn normal_form<K: Field>(f: &MultiPoly<K>, gb: &GroebnerBasis<K>) -> Result<MultiPoly<K>> {
    if !same_ring(f.ring(), &gb.ring) {
        return Err(Error::RingMismatch);
    }
    let r = Reducers::new(&gb.terms).reduce(to_terms(f, gb.order), gb.order, None);
    Ok(from_terms(&gb.ring, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Zp;
    use crate::poly::{PolyRing, VarSet};

    fn ring(n: usize) -> Ring<Q> {
        PolyRing::new(VarSet::indexed("x", n), ())
    }

    fn ideal(r: &Ring<Q>, gens: &[&str]) -> Ideal<Q> {
        Ideal::new(r, gens.iter().map(|g| MultiPoly::parse(r, g).unwrap()).collect()).unwrap()
    }

    fn texts(gb: &GroebnerBasis<Q>) -> Vec<String> {
        gb.generators().iter().map(|g| g.to_text()).collect()
    }

    #[test]
    fn hand_computed_basis() {
        // S(x0^2, x0x1+x1^2) = x1*x0^2 - x0*(x0x1+x1^2) = -x0x1^2 -> x1^3
        let r = ring(2);
        let gb = buchberger(&ideal(&r, &["x0^2", "x0x1+x1^2"]), MonomialOrder::Grevlex);
        assert_eq!(texts(&gb), vec!["x0x1+x1^2", "x0^2", "x1^3"]);
        assert!(gb.self_check());
    }

    #[test]
    fn principal_ideal_is_monic_generator() {
        let r = ring(3);
        let gb = buchberger(&ideal(&r, &["3x0x1-6x2^2"]), MonomialOrder::Grevlex);
        assert_eq!(texts(&gb), vec!["x0x1-2x2^2"]);
    }

    #[test]
    fn generators_reduce_to_zero() {
        let r = ring(4);
        let i = ideal(&r, &["x0x1-x2x3", "x0^2-x1x3+x2^2", "x1^3-x0x2x3"]);
        let gb = i.groebner();
        assert!(gb.self_check());
        for g in i.generators() {
            assert!(normal_form(g, gb).unwrap().is_zero());
        }
        assert!(!normal_form(&MultiPoly::one(&r), gb).unwrap().is_zero());
    }

    #[test]
    fn unit_ideal_detected() {
        let r = ring(2);
        let gb = buchberger(&ideal(&r, &["x0", "x0-1"]), MonomialOrder::Grevlex);
        assert!(gb.is_unit());
    }

    #[test]
    fn lex_elimination_of_parametrized_curve() {
        // twisted cubic in lex: y - x^2, z - x^3 style relations
        let r = ring(3);
        let gb = buchberger(&ideal(&r, &["x1-x0^2", "x2-x0^3"]), MonomialOrder::Lex);
        assert!(gb.self_check());
        assert!(gb.generators().iter().any(|g| g.to_text() == "x1^3-x2^2"));
    }

    #[test]
    fn works_over_prime_field() {
        let p = 32003u32;
        let r = PolyRing::<Zp>::new(VarSet::indexed("x", 3), p);
        let gens = ["x0^2-x1x2", "x1^2-x0x2", "x2^2-x0x1"]
            .iter()
            .map(|s| MultiPoly::parse_in(&r, s).unwrap())
            .collect();
        let i = Ideal::new(&r, gens).unwrap();
        assert!(i.groebner().self_check());
    }

    #[test]
    fn budget_is_honoured() {
        let r = ring(4);
        let i = ideal(&r, &["x0x1-x2x3", "x0^2-x1x3+x2^2", "x1^3-x0x2x3"]);
        let b = Budget {
            max_pairs: Some(0),
            max_terms: None,
        };
        assert!(matches!(buchberger_with_budget(&i, MonomialOrder::Grevlex, b), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn minimal_generators_drop_redundant() {
        let r = ring(3);
        let i = ideal(&r, &["x0", "x1", "x0x2+x1^2", "2x0"]);
        let m = i.minimal_generators();
        assert_eq!(m.generators().len(), 2);
        assert_eq!(i.deduplicated().generators().len(), 3);
    }
}
