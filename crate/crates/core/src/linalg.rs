//! Exact linear algebra over a field and over polynomial entries.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Q};
use crate::poly::{MultiPoly, Ring};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<K: Field = Q> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Field> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<K: Field> Matrix<K> {
    pub fn zeros(rows: usize, cols: usize, ctx: &K::Ctx) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![K::zero(ctx); rows * cols],
        }
    }

    pub fn identity(n: usize, ctx: &K::Ctx) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.set(i, i, K::one(ctx));
        }
        m
    }

    /// Builds from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<K>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]], ctx: &K::Ctx) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| K::from_i64(v, ctx)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &K {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: K) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[K] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<K>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn mul_vec(&self, v: &[K]) -> Result<Vec<K>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let ctx = v
            .first()
            .map(|x| x.ctx())
            .ok_or_else(|| Error::InvalidInput("product with an empty vector".into()))?;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(K::zero(&ctx), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect())
    }

    fn ctx(&self) -> Option<K::Ctx> {
        self.data.first().map(|x| x.ctx())
    }
}

/// Null-space basis; vectors in reduced-echelon-derived form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelBasis<K: Field = Q> {
    pub vectors: Vec<Vec<K>>,
}

impl<K: Field> KernelBasis<K> {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det_scalar<K: Field>(m: &Matrix<K>) -> Result<K> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Err(Error::InvalidInput("determinant of an empty matrix needs a field context".into()));
    }
    let ctx = m.ctx().expect("nonempty");
    let mut a = m.to_rows();
    let mut negate = false;
    let mut prev = K::one(&ctx);
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return Ok(K::zero(&ctx)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.div(&prev);
            }
            a[i][k] = K::zero(&ctx);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { d.neg() } else { d })
}

/// Rank by fraction-free elimination with leftmost pivots.
pub fn rank_bareiss<K: Field>(m: &Matrix<K>) -> usize {
    let Some(ctx) = m.ctx() else { return 0 };
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = K::one(&ctx);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = a[i][j].mul(&a[r][c]).sub(&a[i][c].mul(&a[r][j]));
                a[i][j] = v.div(&prev);
            }
            a[i][c] = K::zero(&ctx);
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form with leftmost pivots; returns the pivot columns.
pub fn rref<K: Field>(m: &Matrix<K>) -> (Matrix<K>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = a.get(r, c).inv().expect("nonzero pivot");
        for j in 0..a.cols {
            let v = a.get(r, j).mul(&inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in 0..a.cols {
                let v = a.get(i, j).sub(&f.mul(a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Exact rank and a kernel basis. For every free column `f` the basis holds
/// the vector with a 1 in position `f` and zeros in the other free positions.
pub fn rank_kernel<K: Field>(m: &Matrix<K>) -> (usize, KernelBasis<K>) {
    let Some(ctx) = m.ctx() else {
        return (0, KernelBasis { vectors: Vec::new() });
    };
    let (r, pivots) = rref(m);
    let mut vectors = Vec::new();
    for f in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![K::zero(&ctx); m.cols];
        v[f] = K::one(&ctx);
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = r.get(row, f).neg();
        }
        vectors.push(v);
    }
    (pivots.len(), KernelBasis { vectors })
}

/// Canonical basis of the row space spanned by `vectors` (nonzero RREF rows).
pub fn row_space_basis<K: Field>(vectors: &[Vec<K>]) -> Vec<Vec<K>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(vectors.to_vec()).expect("equal lengths");
    let (r, pivots) = rref(&m);
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Linear forms cutting out the span of `vectors`: a basis of the left
/// annihilator, i.e. the kernel of the matrix whose rows are the vectors.
pub fn annihilator<K: Field>(vectors: &[Vec<K>], dim: usize, ctx: &K::Ctx) -> Vec<Vec<K>> {
    if vectors.is_empty() {
        return (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { K::one(ctx) } else { K::zero(ctx) }).collect())
            .collect();
    }
    let m = Matrix::from_rows(vectors.to_vec()).expect("equal lengths");
    let (_, k) = rank_kernel(&m);
    row_space_basis(&k.vectors)
}

/// Sorted row (and column) indices selecting a square submatrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinorIndex {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 && idx[0] == n - k {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Matrix of polynomials sharing one ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix<K: Field = Q> {
    ring: Ring<K>,
    rows: usize,
    cols: usize,
    entries: Vec<MultiPoly<K>>,
}

impl<K: Field> PolyMatrix<K> {
    pub fn zeros(ring: &Ring<K>, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![MultiPoly::zero(ring); rows * cols],
        }
    }

    pub fn from_rows(ring: &Ring<K>, rows: Vec<Vec<MultiPoly<K>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        let entries: Vec<MultiPoly<K>> = rows.into_iter().flatten().collect();
        if entries.iter().any(|e| !crate::poly::same_ring(e.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn ring(&self) -> &Ring<K> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &MultiPoly<K> {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: MultiPoly<K>) {
        assert!(crate::poly::same_ring(v.ring(), &self.ring));
        self.entries[r * self.cols + c] = v;
    }

    pub fn evaluate(&self, point: &[K]) -> Result<Matrix<K>> {
        let data = self
            .entries
            .iter()
            .map(|e| e.evaluate(point))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(self.get(r, c).clone());
            }
        }
        PolyMatrix {
            ring: self.ring.clone(),
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        PolyMatrix {
            ring: self.ring.clone(),
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    fn is_constant_column(&self, c: usize) -> bool {
        (0..self.rows).all(|r| self.get(r, c).total_degree().is_none_or(|d| d == 0))
    }

    /// Column processing order for cofactor expansion: constant columns
    /// first, then by increasing number of nonzero entries.
    fn expansion_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.cols).collect();
        order.sort_by_key(|&c| {
            let nz = (0..self.rows).filter(|&r| !self.get(r, c).is_zero()).count();
            (!self.is_constant_column(c), nz, c)
        });
        order
    }
}

/// Sign of the permutation given as a sequence of distinct integers.
fn permutation_sign(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// Memoized column-by-column Laplace expansion over row subsets of a tall matrix.
struct MinorExpander<'a, K: Field> {
    m: &'a PolyMatrix<K>,
    order: Vec<usize>,
    memo: HashMap<u128, MultiPoly<K>>,
}

impl<'a, K: Field> MinorExpander<'a, K> {
    fn new(m: &'a PolyMatrix<K>) -> Self {
        assert!(m.rows <= 128, "too many rows for minor expansion");
        MinorExpander {
            m,
            order: m.expansion_order(),
            memo: HashMap::new(),
        }
    }

    /// Determinant of rows `mask` against the last `|mask|` columns of `order`.
    fn det(&mut self, mask: u128) -> MultiPoly<K> {
        let size = mask.count_ones() as usize;
        if size == 0 {
            return MultiPoly::one(&self.m.ring);
        }
        if let Some(v) = self.memo.get(&mask) {
            return v.clone();
        }
        let col = self.order[self.order.len() - size];
        let mut acc = MultiPoly::zero(&self.m.ring);
        let mut pos = 0;
        for r in 0..self.m.rows {
            if mask & (1u128 << r) == 0 {
                continue;
            }
            let e = self.m.get(r, col);
            if !e.is_zero() {
                let sub = self.det(mask & !(1u128 << r));
                if !sub.is_zero() {
                    let t = e * &sub;
                    acc = if pos % 2 == 0 { &acc + &t } else { &acc - &t };
                }
            }
            pos += 1;
        }
        self.memo.insert(mask, acc.clone());
        acc
    }

    fn minor(&mut self, rows: &[usize]) -> MultiPoly<K> {
        let mask = rows.iter().fold(0u128, |m, &r| m | (1u128 << r));
        let d = self.det(mask);
        if permutation_sign(&self.order) {
            -&d
        } else {
            d
        }
    }
}

/// Symbolic determinant by cofactor expansion, constant columns first.
pub fn det_poly<K: Field>(m: &PolyMatrix<K>) -> Result<MultiPoly<K>> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let rows: Vec<usize> = (0..m.rows).collect();
    Ok(MinorExpander::new(m).minor(&rows))
}

/// All minors of order `min(rows, cols)`, zero minors included, in
/// lexicographic order of the selecting indices.
pub fn maximal_minors<K: Field>(m: &PolyMatrix<K>) -> Vec<(MinorIndex, MultiPoly<K>)> {
    if m.rows >= m.cols {
        let all_cols: Vec<usize> = (0..m.cols).collect();
        let mut ex = MinorExpander::new(m);
        combinations(m.rows, m.cols)
            .into_iter()
            .map(|rows| {
                let d = ex.minor(&rows);
                (
                    MinorIndex {
                        rows,
                        cols: all_cols.clone(),
                    },
                    d,
                )
            })
            .collect()
    } else {
        let t = m.transpose();
        maximal_minors(&t)
            .into_iter()
            .map(|(idx, d)| {
                (
                    MinorIndex {
                        rows: idx.cols,
                        cols: idx.rows,
                    },
                    d,
                )
            })
            .collect()
    }
}

fn check_index(idx: &[usize], bound: usize) -> Result<()> {
    for w in idx.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidInput("minor indices must be strictly increasing".into()));
        }
    }
    if let Some(&last) = idx.last() {
        if last >= bound {
            return Err(Error::IndexOutOfRange { index: last, len: bound });
        }
    }
    Ok(())
}

/// The minor selected by `rows` x `cols`, evaluated at `at`.
pub fn submatrix_det<K: Field>(m: &PolyMatrix<K>, rows: &[usize], cols: &[usize], at: &[K]) -> Result<K> {
    check_index(rows, m.rows)?;
    check_index(cols, m.cols)?;
    if rows.len() != cols.len() {
        return Err(Error::NotSquare {
            rows: rows.len(),
            cols: cols.len(),
        });
    }
    if rows.is_empty() {
        return Err(Error::InvalidInput("empty minor selection".into()));
    }
    det_scalar(&m.select(rows, cols).evaluate(at)?)
}
