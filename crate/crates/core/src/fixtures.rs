//! Bundled worked examples: a two-view setup P^3 -> P^2 and its extension by
//! a third view P^3 -> P^1, with the printed quadrics, residual-curve
//! matrices, special points and fibre lines used as golden data.

use serde::Deserialize;

use crate::field::{Field, Q};
use crate::io::parse_setup;
use crate::linalg::PolyMatrix;
use crate::locus::{side_ring, Side};
use crate::poly::MultiPoly;
use crate::scene::{ProjectionSetup, ProjectivePoint};

pub const TWO_VIEWS_JSON: &str = include_str!("../data/two_views.json");
pub const THREE_VIEWS_JSON: &str = include_str!("../data/three_views.json");
pub const RESIDUAL_CURVES_JSON: &str = include_str!("../data/residual_curves.json");

/// The X-side quadric of the two-view setup.
pub const X_QUADRIC: &str = "2x0x1-x1^2-2x0x2+x1x2+2x2^2+2x0x3+x1x3-3x2x3+2x3^2";
/// The Y-side quadric of the two-view setup.
pub const Y_QUADRIC: &str = "-4y0^2-5y0y1-y0y2+3y1y2-y2^2-6y0y3+3y1y3-y2y3";

/// Centers of the two-view setup.
pub const C_P1: [i64; 4] = [0, 0, 0, 1];
pub const C_P2: [i64; 4] = [0, -1, -1, 1];
pub const C_Q1: [i64; 4] = [-1, 3, 2, 1];
pub const C_Q2: [i64; 4] = [-1, -1, 1, 1];

/// Fibre lines of the two-view setup over the centers:
/// r1 over C_Q1, r2 over C_Q2 (in y), s1 over C_P1, s2 over C_P2 (in x).
pub const R1: [[i64; 4]; 2] = [[4, 5, 0, 5], [0, 0, 1, 1]];
pub const R2: [[i64; 4]; 2] = [[1, 0, 0, 0], [0, 3, -1, 0]];
pub const S1: [[i64; 4]; 2] = [[0, 1, 0, 1], [1, 0, -1, 2]];
pub const S2: [[i64; 4]; 2] = [[0, 1, -2, 1], [1, 0, 0, 1]];

/// Center lines of the third view: L_Q3 (x1 = x3 = 0) and L_P3 (3y1+y3 = y2+y3 = 0).
pub const L_Q3: [[i64; 4]; 2] = [[0, 1, 0, 0], [0, 0, 0, 1]];
pub const L_P3: [[i64; 4]; 2] = [[0, 3, 0, 1], [0, 0, 1, 1]];

/// Special points of the three-view setup.
pub const A: [i64; 4] = [1, 0, 0, 0];
pub const B: [i64; 4] = [1, 0, 1, 0];
pub const C: [i64; 4] = [0, 1, 3, -3];
pub const D: [i64; 4] = [5, 2, 6, -6];
/// The conjugate of A.
pub const A_IMAGE: [i64; 4] = [1, 1, 1, -2];
/// The point of the residual X-curve conjugate to C_P2.
pub const E: [i64; 4] = [2, 0, -1, -2];
/// A point of L_Q3 other than A and B.
pub const L_Q3_OTHER: [i64; 4] = [1, 0, 2, 0];
/// Further rational points of the residual X-curve away from all centers
/// (found by a small-height search; the curve has genus 2, so rational
/// points are scarce).
pub const X_RESIDUAL_RATIONAL: [[i64; 4]; 3] = [[1, 0, 0, -1], [3, 1, 0, -1], [7, 1, -1, -2]];

pub fn two_view_setup() -> ProjectionSetup<Q> {
    parse_setup(TWO_VIEWS_JSON).expect("bundled setup").0
}

pub fn three_view_setup() -> ProjectionSetup<Q> {
    parse_setup(THREE_VIEWS_JSON).expect("bundled setup").0
}

pub fn point<K: Field>(c: [i64; 4], ctx: &K::Ctx) -> ProjectivePoint<K> {
    ProjectivePoint::from_i64(&c, ctx).expect("nonzero")
}

pub fn forms<K: Field>(rows: &[[i64; 4]], ctx: &K::Ctx) -> Vec<Vec<K>> {
    rows.iter()
        .map(|r| r.iter().map(|&v| K::from_i64(v, ctx)).collect())
        .collect()
}

#[derive(Deserialize)]
struct ResidualFile {
    x_matrix: Vec<Vec<String>>,
    y_matrix: Vec<Vec<String>>,
}

/// The 3x2 matrix whose maximal minors cut out the residual curve on `side`.
pub fn residual_matrix<K: Field>(side: Side, ctx: &K::Ctx) -> PolyMatrix<K> {
    let f: ResidualFile = serde_json::from_str(RESIDUAL_CURVES_JSON).expect("bundled data");
    let rows = match side {
        Side::X => f.x_matrix,
        Side::Y => f.y_matrix,
    };
    let ring = side_ring::<K>(3, side, ctx);
    let entries = rows
        .iter()
        .map(|r| r.iter().map(|e| MultiPoly::parse_in(&ring, e).expect("bundled polynomial")).collect())
        .collect();
    PolyMatrix::from_rows(&ring, entries).expect("same ring")
}
