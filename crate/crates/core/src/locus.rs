//! The locus matrices M_X, M_Y and the ideals of the critical loci.
//!
//! For a setup with views (Q_j, P_j), M_X has one row block per view: the
//! block of view j holds P_j in the first k+1 (constant) columns and the
//! linear forms Q_j(x) in column k+1+j. M_Y is the mirror image with the
//! roles of P and Q exchanged.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::Ideal;
use crate::linalg::{maximal_minors, PolyMatrix};
use crate::monomial::Monomial;
use crate::poly::{MultiPoly, PolyRing, Ring, VarSet};
use crate::scene::{Camera, ProjectionSetup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn prefix(self) -> &'static str {
        match self {
            Side::X => "x",
            Side::Y => "y",
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::X => "X",
            Side::Y => "Y",
        })
    }
}

/// `x0..xk` (or `y0..yk`).
pub fn side_ring<K: Field>(k: usize, side: Side, ctx: &K::Ctx) -> Ring<K> {
    PolyRing::new(VarSet::indexed(side.prefix(), k + 1), ctx.clone())
}

/// `x0..xk, y0..yk` with the (x|y) block structure.
pub fn unified_ring<K: Field>(k: usize, ctx: &K::Ctx) -> Ring<K> {
    PolyRing::new(VarSet::bigraded(k), ctx.clone())
}

/// Linear forms `row · (v_offset, ..., v_{offset+k})`, one per camera row.
pub fn camera_forms<K: Field>(c: &Camera<K>, ring: &Ring<K>, offset: usize) -> Vec<MultiPoly<K>> {
    let n = ring.nvars();
    c.matrix()
        .to_rows()
        .into_iter()
        .map(|row| {
            MultiPoly::from_terms(
                ring,
                row.into_iter()
                    .enumerate()
                    .map(|(i, a)| (Monomial::var(n, offset + i), a)),
            )
        })
        .collect()
}

/// M_X or M_Y together with its block layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusMatrix<K: Field> {
    matrix: PolyMatrix<K>,
    side: Side,
    blocks: Vec<Range<usize>>,
}

impl<K: Field> LocusMatrix<K> {
    pub fn matrix(&self) -> &PolyMatrix<K> {
        &self.matrix
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Row range of each view's block.
    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    /// Number of rows belonging to all views but the last.
    pub fn leading_rows(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.start)
    }

    pub fn into_matrix(self) -> PolyMatrix<K> {
        self.matrix
    }
}

/// Builds the locus matrix with its linear forms in `ring`, using variables
/// `offset..offset+k+1`.
pub fn build_locus_matrix_in<K: Field>(
    s: &ProjectionSetup<K>,
    side: Side,
    ring: &Ring<K>,
    offset: usize,
) -> LocusMatrix<K> {
    let k = s.k();
    let n = s.n();
    let rows: usize = s.h_list().iter().map(|h| h + 1).sum();
    let cols = n + k + 1;
    let mut m = PolyMatrix::zeros(ring, rows, cols);
    let mut blocks = Vec::with_capacity(n);
    let mut r0 = 0;
    for (j, v) in s.views().iter().enumerate() {
        let (constant, linear) = match side {
            Side::X => (&v.p, &v.q),
            Side::Y => (&v.q, &v.p),
        };
        let forms = camera_forms(linear, ring, offset);
        for (i, form) in forms.into_iter().enumerate() {
            for c in 0..=k {
                m.set(r0 + i, c, MultiPoly::constant(ring, constant.matrix().get(i, c).clone()));
            }
            m.set(r0 + i, k + 1 + j, form);
        }
        blocks.push(r0..r0 + v.h() + 1);
        r0 += v.h() + 1;
    }
    LocusMatrix { matrix: m, side, blocks }
}

/// Builds M_X (side X, variables x0..xk) or M_Y (side Y, variables y0..yk).
pub fn build_locus_matrix<K: Field>(s: &ProjectionSetup<K>, side: Side) -> LocusMatrix<K> {
    let ring = side_ring(s.k(), side, &s.ctx());
    build_locus_matrix_in(s, side, &ring, 0)
}

/// Ideal of the critical locus in `ring` (variables `offset..`), generated by
/// the nonzero maximal minors of the locus matrix, up to proportional duplicates.
pub fn critical_ideal_in<K: Field>(s: &ProjectionSetup<K>, side: Side, ring: &Ring<K>, offset: usize) -> Ideal<K> {
    let lm = build_locus_matrix_in(s, side, ring, offset);
    let m = lm.matrix();
    if m.rows() < m.cols() {
        return Ideal::zero(ring).with_note(format!(
            "M_{side} has {} rows and {} columns: no maximal minors, the critical locus is all of P^{}",
            m.rows(),
            m.cols(),
            s.k()
        ));
    }
    let gens = maximal_minors(m).into_iter().map(|(_, p)| p).collect();
    Ideal::new(ring, gens).expect("same ring").deduplicated()
}

/// I(X) (side X) or I(Y) (side Y) in its own ring.
pub fn critical_ideal<K: Field>(s: &ProjectionSetup<K>, side: Side) -> Ideal<K> {
    let ring = side_ring(s.k(), side, &s.ctx());
    critical_ideal_in(s, side, &ring, 0)
}

/// Bihomogeneous ideal of the unified critical locus in `x0..xk, y0..yk`:
/// maximal minors of M_X and M_Y plus, for every view, the 2x2 minors of
/// the two-column matrix (P_j(y) | Q_j(x)).
pub fn unified_ideal<K: Field>(s: &ProjectionSetup<K>) -> Ideal<K> {
    let k = s.k();
    let ring = unified_ring(k, &s.ctx());
    let ix = critical_ideal_in(s, Side::X, &ring, 0);
    let iy = critical_ideal_in(s, Side::Y, &ring, k + 1);
    let mut gens: Vec<MultiPoly<K>> = ix.generators().to_vec();
    gens.extend_from_slice(iy.generators());
    for v in s.views() {
        let py = camera_forms(&v.p, &ring, k + 1);
        let qx = camera_forms(&v.q, &ring, 0);
        for a in 0..py.len() {
            for b in a + 1..py.len() {
                gens.push(&(&py[a] * &qx[b]) - &(&py[b] * &qx[a]));
            }
        }
    }
    let mut ideal = Ideal::new(&ring, gens).expect("same ring").deduplicated();
    for note in ix.notes().iter().chain(iy.notes()) {
        ideal = ideal.with_note(note.clone());
    }
    ideal
}

/// `2k - Σ h_i`; negative values signal expected emptiness off the centers.
pub fn formula_dimension(k: usize, hs: &[usize]) -> i64 {
    2 * k as i64 - hs.iter().sum::<usize>() as i64
}

fn binomial(n: i64, r: i64) -> u64 {
    if r < 0 || n < r {
        return 0;
    }
    let r = r.min(n - r) as u64;
    let n = n as u64;
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `C(n - k - 1 + Σ h_i, n - 1)`, defined when the expected dimension is nonnegative.
pub fn formula_degree(k: usize, hs: &[usize]) -> Result<u64> {
    let d = formula_dimension(k, hs);
    if d < 0 {
        return Err(Error::NegativeExpectedDimension(d));
    }
    let n = hs.len() as i64;
    let top = n - k as i64 - 1 + hs.iter().sum::<usize>() as i64;
    Ok(binomial(top, n - 1))
}

pub fn expected_dimension<K: Field>(s: &ProjectionSetup<K>) -> i64 {
    formula_dimension(s.k(), &s.h_list())
}

pub fn expected_degree<K: Field>(s: &ProjectionSetup<K>) -> Result<u64> {
    formula_degree(s.k(), &s.h_list())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    fn single_view() -> ProjectionSetup<Q> {
        ProjectionSetup::from_i64(
            &[(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]], &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]])],
            &(),
        )
        .unwrap()
    }

    #[test]
    fn formulas() {
        assert_eq!((formula_dimension(3, &[2, 2]), formula_degree(3, &[2, 2]).unwrap()), (2, 2));
        assert_eq!((formula_dimension(3, &[2, 2, 1]), formula_degree(3, &[2, 2, 1]).unwrap()), (1, 6));
        assert_eq!((formula_dimension(4, &[2, 2, 2]), formula_degree(4, &[2, 2, 2]).unwrap()), (2, 6));
        assert!(matches!(formula_degree(2, &[2, 2, 1]), Err(Error::NegativeExpectedDimension(-1))));
    }

    #[test]
    fn single_view_shape_and_zero_ideal() {
        let s = single_view();
        let m = build_locus_matrix(&s, Side::X);
        assert_eq!((m.matrix().rows(), m.matrix().cols()), (3, 5));
        let i = critical_ideal(&s, Side::X);
        assert!(i.is_zero_ideal());
        assert_eq!(i.notes().len(), 1);
    }

    #[test]
    fn equal_cameras_give_symmetric_bilinear_minors() {
        let u = unified_ideal(&single_view());
        let texts: Vec<String> = u.generators().iter().map(|g| g.to_text()).collect();
        assert_eq!(texts, vec!["x1y0-x0y1", "x2y0-x0y2", "x2y1-x1y2"]);
    }
}
