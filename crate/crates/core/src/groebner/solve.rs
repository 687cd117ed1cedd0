//! Points of zero-dimensional ideals with coordinates in the base field.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::MonomialOrder;
use crate::poly::MultiPoly;
use crate::scene::ProjectivePoint;

use super::{buchberger, Ideal};

/// Coefficients (constant first) of `f` in variable `i` after substituting
/// the values assigned to the later variables.
fn specialize<K: Field>(f: &MultiPoly<K>, i: usize, values: &[Option<K>]) -> Vec<K> {
    let zero = f.ring().zero();
    let mut coeffs: Vec<K> = Vec::new();
    for (m, c) in f.terms() {
        let mut v = c.clone();
        for (j, &e) in m.exponents().iter().enumerate().skip(i + 1) {
            let x = values[j].as_ref().expect("later variables assigned");
            for _ in 0..e {
                v = v.mul(x);
            }
        }
        let d = m.exponent(i) as usize;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, zero.clone());
        }
        coeffs[d] = coeffs[d].add(&v);
    }
    coeffs
}

/// All points of a zero-dimensional affine ideal with coordinates in the
/// base field, by lex Gröbner basis and back-substitution.
pub fn affine_points<K: Field>(ideal: &Ideal<K>) -> Result<Vec<Vec<K>>> {
    let gb = buchberger(ideal, MonomialOrder::Lex);
    if gb.is_unit() {
        return Ok(Vec::new());
    }
    if gb.krull_dimension() != Some(0) {
        return Err(Error::NotZeroDimensional);
    }
    let n = ideal.ring().nvars();
    // Basis elements grouped by their first (largest) variable.
    let first_var = |g: &MultiPoly<K>| {
        g.terms()
            .flat_map(|(m, _)| m.support().next())
            .min()
            .unwrap_or(n)
    };
    let mut partial: Vec<Vec<Option<K>>> = vec![vec![None; n]];
    for i in (0..n).rev() {
        let level: Vec<&MultiPoly<K>> = gb.generators().iter().filter(|g| first_var(g) == i).collect();
        let mut next = Vec::new();
        for values in partial {
            let univariates: Vec<Vec<K>> = level
                .iter()
                .map(|g| specialize(g, i, &values))
                .filter(|c| c.iter().any(|x| !x.is_zero()))
                .collect();
            let Some(first) = univariates.first() else {
                return Err(Error::NotZeroDimensional);
            };
            for r in K::univariate_roots(first) {
                let vanishes = univariates[1..].iter().all(|c| {
                    c.iter().rev().fold(ideal.ring().zero(), |acc, x| acc.mul(&r).add(x)).is_zero()
                });
                if vanishes {
                    let mut v = values.clone();
                    v[i] = Some(r);
                    next.push(v);
                }
            }
        }
        partial = next;
    }
    let points: Vec<Vec<K>> = partial
        .into_iter()
        .map(|v| v.into_iter().map(|x| x.expect("assigned")).collect())
        .collect();
    for p in &points {
        for g in ideal.generators() {
            debug_assert!(g.evaluate(p)?.is_zero());
        }
    }
    Ok(points)
}

/// Points of a homogeneous ideal with finitely many projective zeros,
/// found chart by chart (`x_c = 1` with `x_0 = ... = x_{c-1} = 0`).
pub fn projective_points<K: Field>(ideal: &Ideal<K>) -> Result<Vec<ProjectivePoint<K>>> {
    let ring = ideal.ring();
    let n = ring.nvars();
    let mut out = Vec::new();
    for c in 0..n {
        let mut gens = ideal.generators().to_vec();
        gens.extend((0..c).map(|j| MultiPoly::var(ring, j)));
        gens.push(&MultiPoly::var(ring, c) - &MultiPoly::one(ring));
        for p in affine_points(&Ideal::new(ring, gens)?)? {
            out.push(ProjectivePoint::new(p)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, Q};
    use crate::poly::{PolyRing, Ring, VarSet};

    fn ring(n: usize) -> Ring<Q> {
        PolyRing::new(VarSet::indexed("x", n), ())
    }

    fn ideal(r: &Ring<Q>, gens: &[&str]) -> Ideal<Q> {
        Ideal::new(r, gens.iter().map(|g| MultiPoly::parse(r, g).unwrap()).collect()).unwrap()
    }

    #[test]
    fn circle_meets_line() {
        let r = ring(2);
        let mut pts = affine_points(&ideal(&r, &["x0^2+x1^2-25", "x0-x1-1"])).unwrap();
        pts.sort();
        assert_eq!(pts, vec![vec![int(-3), int(-4)], vec![int(4), int(3)]]);
    }

    #[test]
    fn irrational_points_are_skipped() {
        let r = ring(1);
        assert!(affine_points(&ideal(&r, &["x0^2-2"])).unwrap().is_empty());
        assert!(affine_points(&ideal(&r, &["x0", "x0-1"])).unwrap().is_empty());
    }

    #[test]
    fn positive_dimension_rejected() {
        let r = ring(2);
        assert!(matches!(affine_points(&ideal(&r, &["x0x1"])), Err(Error::NotZeroDimensional)));
    }

    #[test]
    fn projective_conic_and_line() {
        let r = ring(3);
        // x0x1 = x2^2 meets x2 = 0 at (1:0:0) and (0:1:0)
        let pts = projective_points(&ideal(&r, &["x0x1-x2^2", "x2"])).unwrap();
        let shown: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, vec!["(1:0:0)", "(0:1:0)"]);
    }
}
