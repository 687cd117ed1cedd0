//! Sums, products, intersections, quotients and saturations of ideals.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::MonomialOrder;
use crate::poly::{same_ring, MultiPoly, PolyRing, Ring, VarSet};

use super::{buchberger, Ideal};

fn check_rings<K: Field>(i: &Ideal<K>, j: &Ideal<K>) -> Result<()> {
    if same_ring(i.ring(), j.ring()) {
        Ok(())
    } else {
        Err(Error::RingMismatch)
    }
}

/// An ideal generated by the reduced Gröbner basis of `i` (grevlex).
fn tidy<K: Field>(i: &Ideal<K>) -> Ideal<K> {
    let gb = if i.order() == MonomialOrder::Grevlex {
        i.groebner().clone()
    } else {
        buchberger(i, MonomialOrder::Grevlex)
    };
    Ideal::new(i.ring(), gb.generators().to_vec()).expect("same ring")
}

pub fn ideal_sum<K: Field>(i: &Ideal<K>, j: &Ideal<K>) -> Result<Ideal<K>> {
    check_rings(i, j)?;
    let mut gens = i.generators().to_vec();
    gens.extend_from_slice(j.generators());
    Ideal::new(i.ring(), gens)
}

/// Generated by pairwise products, with zero and proportional duplicates removed.
pub fn ideal_product<K: Field>(i: &Ideal<K>, j: &Ideal<K>) -> Result<Ideal<K>> {
    check_rings(i, j)?;
    let gens = i
        .generators()
        .iter()
        .flat_map(|f| j.generators().iter().map(move |g| f * g))
        .collect();
    Ok(Ideal::new(i.ring(), gens)?.deduplicated())
}

/// Polynomials of `i` free of the first `split` variables (elimination ideal),
/// kept in the original ring.
pub fn elimination<K: Field>(i: &Ideal<K>, split: usize) -> Ideal<K> {
    let gb = buchberger(i, MonomialOrder::Elimination { split });
    let gens = gb
        .generators()
        .iter()
        .filter(|g| g.terms().all(|(m, _)| m.partial_degree(0..split) == 0))
        .cloned()
        .collect();
    Ideal::new(i.ring(), gens).expect("same ring")
}

/// The ring with one extra variable prepended, plus the index map old -> new.
fn with_auxiliary<K: Field>(ring: &Ring<K>) -> (Ring<K>, Vec<usize>) {
    let names = ring.vars().names();
    let mut t = "t".to_string();
    while names.contains(&t) {
        t.push('_');
    }
    let mut all = vec![t];
    all.extend(names.iter().cloned());
    let r = PolyRing::new(VarSet::new(all).expect("fresh name"), ring.ctx().clone());
    (r, (1..=ring.nvars()).collect())
}

/// `I ∩ J` by eliminating `t` from `t·I + (1-t)·J`.
pub fn intersection<K: Field>(i: &Ideal<K>, j: &Ideal<K>) -> Result<Ideal<K>> {
    check_rings(i, j)?;
    let ring = i.ring();
    if i.is_zero_ideal() || j.is_zero_ideal() {
        return Ok(Ideal::zero(ring));
    }
    let (rt, map) = with_auxiliary(ring);
    let t = MultiPoly::var(&rt, 0);
    let one_minus_t = &MultiPoly::one(&rt) - &t;
    let mut gens: Vec<MultiPoly<K>> = i.generators().iter().map(|f| &t * &f.map_vars(&rt, &map)).collect();
    gens.extend(j.generators().iter().map(|g| &one_minus_t * &g.map_vars(&rt, &map)));
    let gb = buchberger(&Ideal::new(&rt, gens)?, MonomialOrder::Elimination { split: 1 });
    let mut back = vec![0usize];
    back.extend(0..ring.nvars());
    let kept = gb
        .generators()
        .iter()
        .filter(|g| g.terms().all(|(m, _)| m.exponent(0) == 0))
        .map(|g| g.map_vars(ring, &back))
        .collect();
    Ok(Ideal::new(ring, kept)?.with_order(i.order()))
}

/// Exact quotient `h / g`; errors if `g` does not divide `h`.
fn exact_divide<K: Field>(h: &MultiPoly<K>, g: &MultiPoly<K>) -> Result<MultiPoly<K>> {
    let order = MonomialOrder::Grevlex;
    let (gm, gc) = g.leading_term(order).ok_or_else(|| Error::InvalidInput("division by zero".into()))?;
    let ginv = gc.inv().expect("nonzero");
    let mut q = MultiPoly::zero(h.ring());
    let mut r = h.clone();
    while let Some((m, c)) = r.leading_term(order) {
        if !gm.divides(&m) {
            return Err(Error::InvalidInput("inexact polynomial division".into()));
        }
        let t = MultiPoly::monomial(h.ring(), m.div(&gm), c.mul(&ginv));
        r = &r - &(&t * g);
        q = &q + &t;
    }
    Ok(q)
}

/// `I : (g)`, from the generators of `I ∩ (g)` divided by `g`.
pub fn ideal_quotient_principal<K: Field>(i: &Ideal<K>, g: &MultiPoly<K>) -> Result<Ideal<K>> {
    if !same_ring(i.ring(), g.ring()) {
        return Err(Error::RingMismatch);
    }
    if g.is_zero() {
        return Ok(Ideal::unit(i.ring()));
    }
    if g.total_degree() == Some(0) {
        return Ok(tidy(i));
    }
    let principal = Ideal::new(i.ring(), vec![g.clone()])?;
    let cap = intersection(i, &principal)?;
    let gens = cap
        .generators()
        .iter()
        .map(|h| exact_divide(h, g))
        .collect::<Result<Vec<_>>>()?;
    Ok(tidy(&Ideal::new(i.ring(), gens)?))
}

/// `I : J = { f | f·J ⊆ I }`, intersecting the quotients by each generator of `J`.
pub fn ideal_quotient<K: Field>(i: &Ideal<K>, j: &Ideal<K>) -> Result<Ideal<K>> {
    check_rings(i, j)?;
    if j.is_zero_ideal() {
        return Ok(Ideal::unit(i.ring()));
    }
    let mut acc: Option<Ideal<K>> = None;
    for g in j.generators() {
        let q = ideal_quotient_principal(i, g)?;
        acc = Some(match acc {
            None => q,
            Some(a) => tidy(&intersection(&a, &q)?),
        });
    }
    Ok(acc.expect("nonempty").with_order(i.order()))
}

/// `I : J^∞`, iterating quotients until the ideal stops growing.
pub fn saturation<K: Field>(i: &Ideal<K>, j: &Ideal<K>) -> Result<Ideal<K>> {
    check_rings(i, j)?;
    let mut cur = tidy(i);
    loop {
        let next = ideal_quotient(&cur, j)?.with_order(MonomialOrder::Grevlex);
        if next.same_ideal(&cur)? {
            return Ok(cur.with_order(i.order()));
        }
        cur = tidy(&next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::poly::VarSet;

    fn ring(n: usize) -> Ring<Q> {
        PolyRing::new(VarSet::indexed("x", n), ())
    }

    fn ideal(r: &Ring<Q>, gens: &[&str]) -> Ideal<Q> {
        Ideal::new(r, gens.iter().map(|g| MultiPoly::parse(r, g).unwrap()).collect()).unwrap()
    }

    #[test]
    fn monomial_quotient() {
        let r = ring(2);
        let q = ideal_quotient(&ideal(&r, &["x0x1"]), &ideal(&r, &["x0"])).unwrap();
        assert!(q.same_ideal(&ideal(&r, &["x1"])).unwrap());
    }

    #[test]
    fn quotient_by_unit_is_identity() {
        let r = ring(3);
        let i = ideal(&r, &["x0^2-x1x2", "x1^3"]);
        let q = ideal_quotient(&i, &Ideal::unit(&r)).unwrap();
        assert!(q.same_ideal(&i).unwrap());
    }

    #[test]
    fn saturation_removes_power() {
        let r = ring(2);
        let s = saturation(&ideal(&r, &["x0^2x1"]), &ideal(&r, &["x0"])).unwrap();
        assert!(s.same_ideal(&ideal(&r, &["x1"])).unwrap());
    }

    #[test]
    fn saturation_of_prime_by_non_member() {
        let r = ring(3);
        let i = ideal(&r, &["x0^2-x1x2"]);
        let s = saturation(&i, &ideal(&r, &["x0", "x1"])).unwrap();
        assert!(s.same_ideal(&i).unwrap());
    }

    #[test]
    fn intersection_of_coordinate_ideals() {
        let r = ring(2);
        let c = intersection(&ideal(&r, &["x0"]), &ideal(&r, &["x1"])).unwrap();
        assert!(c.same_ideal(&ideal(&r, &["x0x1"])).unwrap());
    }

    #[test]
    fn products() {
        let r = ring(2);
        let p = ideal_product(&ideal(&r, &["x0"]), &ideal(&r, &["x1"])).unwrap();
        assert_eq!(p.generators()[0].to_text(), "x0x1");
        let i = ideal(&r, &["x0^2", "x1"]);
        assert!(ideal_product(&i, &Ideal::unit(&r)).unwrap().same_ideal(&i).unwrap());
        let four = ring(4);
        let a = ideal(&four, &["x0", "x1", "x2"]);
        let b = ideal(&four, &["x1", "x2", "x3"]);
        let ab = ideal_product(&a, &b).unwrap();
        // x1x2 appears twice among the nine products
        assert_eq!(ab.generators().len(), 8);
        assert!(ab.generators().iter().all(|g| g.total_degree() == Some(2)));
    }

    #[test]
    fn eliminating_a_parameter() {
        let r = ring(3);
        // x1 = x0^2, x2 = x0^3 -> eliminate x0
        let e = elimination(&ideal(&r, &["x1-x0^2", "x2-x0^3"]), 1);
        assert!(e.contains(&MultiPoly::parse(&r, "x1^3-x2^2").unwrap()).unwrap());
    }
}
