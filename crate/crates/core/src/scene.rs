//! Cameras, centers, projective points and projection setups.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, Zp, Q};
use crate::linalg::{rank_kernel, row_space_basis, KernelBasis, Matrix};

/// A point of projective space, normalized so the first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint<K: Field = Q> {
    coords: Vec<K>,
}

impl<K: Field> ProjectivePoint<K> {
    pub fn new(coords: Vec<K>) -> Result<Self> {
        let Some(lead) = coords.iter().find(|c| !c.is_zero()) else {
            return Err(Error::InvalidInput("projective point with all coordinates zero".into()));
        };
        let inv = lead.inv().expect("nonzero");
        Ok(ProjectivePoint {
            coords: coords.iter().map(|c| c.mul(&inv)).collect(),
        })
    }

    pub fn from_i64(coords: &[i64], ctx: &K::Ctx) -> Result<Self> {
        Self::new(coords.iter().map(|&c| K::from_i64(c, ctx)).collect())
    }

    pub fn coords(&self) -> &[K] {
        &self.coords
    }

    /// Dimension of the ambient projective space.
    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }
}

impl<K: Field> fmt::Display for ProjectivePoint<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", K::projective_strings(&self.coords).join(":"))
    }
}

impl<K: Field> fmt::Debug for ProjectivePoint<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// The center of a camera: its right kernel, kept both as a spanning basis
/// and as a set of linear forms cutting it out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Center<K: Field = Q> {
    basis: KernelBasis<K>,
    forms: Vec<Vec<K>>,
}

impl<K: Field> Center<K> {
    pub fn basis(&self) -> &KernelBasis<K> {
        &self.basis
    }

    /// Coefficient vectors of independent linear forms vanishing exactly on the center.
    pub fn forms(&self) -> &[Vec<K>] {
        &self.forms
    }

    /// Projective dimension of the center.
    pub fn dim(&self) -> usize {
        self.basis.dim() - 1
    }

    pub fn contains(&self, p: &ProjectivePoint<K>) -> bool {
        self.forms.iter().all(|f| dot(f, p.coords()).is_zero())
    }

    /// The basis vectors as projective points.
    pub fn points(&self) -> Vec<ProjectivePoint<K>> {
        self.basis
            .vectors
            .iter()
            .map(|v| ProjectivePoint::new(v.clone()).expect("kernel vectors are nonzero"))
            .collect()
    }

    /// The single point of a zero-dimensional center.
    pub fn as_point(&self) -> Option<ProjectivePoint<K>> {
        (self.basis.dim() == 1).then(|| self.points().remove(0))
    }
}

pub(crate) fn dot<K: Field>(a: &[K], b: &[K]) -> K {
    let ctx = a[0].ctx();
    a.iter().zip(b).fold(K::zero(&ctx), |acc, (x, y)| acc.add(&x.mul(y)))
}

/// Outcome of projecting a point through a camera.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Image<K: Field = Q> {
    Point(ProjectivePoint<K>),
    InCenter,
}

/// A full-rank (h+1)x(k+1) matrix representing a projection from P^k to P^h.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Camera<K: Field = Q> {
    matrix: Matrix<K>,
    center: Center<K>,
}

impl<K: Field> Camera<K> {
    /// Validates shape and rank.
    pub fn new(matrix: Matrix<K>) -> Result<Self> {
        let (rows, cols) = (matrix.rows(), matrix.cols());
        if rows == 0 || cols < 2 || rows >= cols {
            return Err(Error::InvalidCamera(format!(
                "a {rows}x{cols} matrix is not a projection P^k -> P^h with h < k"
            )));
        }
        let (rank, basis) = rank_kernel(&matrix);
        if rank < rows {
            return Err(Error::DegenerateCamera { rank, expected: rows });
        }
        let forms = row_space_basis(&matrix.to_rows());
        Ok(Camera {
            matrix,
            center: Center { basis, forms },
        })
    }

    pub fn from_i64(rows: &[&[i64]], ctx: &K::Ctx) -> Result<Self> {
        Self::new(Matrix::from_i64(rows, ctx))
    }

    pub fn matrix(&self) -> &Matrix<K> {
        &self.matrix
    }

    /// Target dimension h.
    pub fn h(&self) -> usize {
        self.matrix.rows() - 1
    }

    /// Source dimension k.
    pub fn k(&self) -> usize {
        self.matrix.cols() - 1
    }

    pub fn center(&self) -> &Center<K> {
        &self.center
    }

    /// The image vector `P * v` without normalization.
    pub fn apply_vector(&self, v: &[K]) -> Result<Vec<K>> {
        self.matrix.mul_vec(v)
    }

    pub fn apply(&self, p: &ProjectivePoint<K>) -> Result<Image<K>> {
        let v = self.apply_vector(p.coords())?;
        Ok(match ProjectivePoint::new(v) {
            Ok(q) => Image::Point(q),
            Err(_) => Image::InCenter,
        })
    }

    pub fn map_field<L: Field>(&self, f: &impl Fn(&K) -> Option<L>) -> Result<Camera<L>> {
        let rows = self
            .matrix
            .to_rows()
            .iter()
            .map(|r| r.iter().map(f).collect::<Option<Vec<L>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidInput("camera entry not representable in the target field".into()))?;
        Camera::new(Matrix::from_rows(rows)?)
    }
}

/// One pair of matched projections (Q_j, P_j) to the same P^h.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct View<K: Field = Q> {
    pub q: Camera<K>,
    pub p: Camera<K>,
}

impl<K: Field> View<K> {
    pub fn h(&self) -> usize {
        self.q.h()
    }
}

/// Two n-tuples of projections from P^k sharing target dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionSetup<K: Field = Q> {
    k: usize,
    views: Vec<View<K>>,
}

impl<K: Field> ProjectionSetup<K> {
    pub fn new(views: Vec<View<K>>) -> Result<Self> {
        let first = views
            .first()
            .ok_or_else(|| Error::InvalidInput("a setup needs at least one view".into()))?;
        let k = first.q.k();
        for (j, v) in views.iter().enumerate() {
            if v.q.k() != k || v.p.k() != k {
                return Err(Error::InvalidCamera(format!("view {j}: source dimension differs from {k}")));
            }
            if v.q.h() != v.p.h() {
                return Err(Error::InvalidCamera(format!(
                    "view {j}: Q and P have different targets (h = {} vs {})",
                    v.q.h(),
                    v.p.h()
                )));
            }
        }
        Ok(ProjectionSetup { k, views })
    }

    /// Builds from integer matrices, `(Q_j, P_j)` per view.
    pub fn from_i64(views: &[(&[&[i64]], &[&[i64]])], ctx: &K::Ctx) -> Result<Self> {
        let views = views
            .iter()
            .map(|(q, p)| {
                Ok(View {
                    q: Camera::from_i64(q, ctx)?,
                    p: Camera::from_i64(p, ctx)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(views)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.views.len()
    }

    pub fn views(&self) -> &[View<K>] {
        &self.views
    }

    pub fn view(&self, j: usize) -> &View<K> {
        &self.views[j]
    }

    pub fn h_list(&self) -> Vec<usize> {
        self.views.iter().map(|v| v.h()).collect()
    }

    pub fn h_sum(&self) -> usize {
        self.h_list().iter().sum()
    }

    pub fn ctx(&self) -> K::Ctx {
        self.views[0].q.matrix().get(0, 0).ctx()
    }

    /// Exchanges the roles of every `Q_j` and `P_j`.
    pub fn swapped(&self) -> Self {
        ProjectionSetup {
            k: self.k,
            views: self
                .views
                .iter()
                .map(|v| View {
                    q: v.p.clone(),
                    p: v.q.clone(),
                })
                .collect(),
        }
    }

    /// The setup restricted to the views at the given (0-based, increasing) indices.
    pub fn sub_setup(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidInput("empty view subset".into()));
        }
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidInput("view subset must be strictly increasing".into()));
            }
        }
        if let Some(&last) = indices.last() {
            if last >= self.n() {
                return Err(Error::IndexOutOfRange {
                    index: last,
                    len: self.n(),
                });
            }
        }
        Ok(ProjectionSetup {
            k: self.k,
            views: indices.iter().map(|&j| self.views[j].clone()).collect(),
        })
    }

    /// True when the Q-centers are pairwise disjoint.
    pub fn centers_pairwise_disjoint(&self) -> bool {
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                let mut stacked = self.views[i].q.center().forms().to_vec();
                stacked.extend_from_slice(self.views[j].q.center().forms());
                if row_space_basis(&stacked).len() < self.k + 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Indices of the views whose Q-center contains `x`.
    pub fn q_centers_containing(&self, x: &ProjectivePoint<K>) -> Vec<usize> {
        (0..self.n())
            .filter(|&j| self.views[j].q.center().contains(x))
            .collect()
    }

    pub fn map_field<L: Field>(&self, f: impl Fn(&K) -> Option<L>) -> Result<ProjectionSetup<L>> {
        let views = self
            .views
            .iter()
            .map(|v| {
                Ok(View {
                    q: v.q.map_field(&f)?,
                    p: v.p.map_field(&f)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ProjectionSetup::new(views)
    }
}

impl ProjectionSetup<Q> {
    /// Reduction modulo a prime; fails if a camera loses rank or a
    /// denominator is not invertible.
    pub fn reduce_mod(&self, p: u32) -> Result<ProjectionSetup<Zp>> {
        self.map_field(|x| Zp::from_rational(x, &p))
    }
}

/// Random full-rank setup with entries drawn uniformly from `-bound..=bound`.
pub fn random_setup<K: Field>(
    k: usize,
    hs: &[usize],
    bound: i64,
    rng: &mut impl Rng,
    ctx: &K::Ctx,
) -> Result<ProjectionSetup<K>> {
    let mut camera = |h: usize| -> Result<Camera<K>> {
        for _ in 0..100 {
            let rows = (0..=h)
                .map(|_| (0..=k).map(|_| K::from_i64(rng.gen_range(-bound..=bound), ctx)).collect())
                .collect();
            if let Ok(c) = Camera::new(Matrix::from_rows(rows)?) {
                return Ok(c);
            }
        }
        Err(Error::InvalidInput("could not draw a full-rank camera".into()))
    };
    let views = hs
        .iter()
        .map(|&h| {
            Ok(View {
                q: camera(h)?,
                p: camera(h)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ProjectionSetup::new(views)
}

/// [`random_setup`] driven by a ChaCha8 generator seeded with `seed`.
pub fn seeded_random_setup<K: Field>(k: usize, hs: &[usize], bound: i64, seed: u64, ctx: &K::Ctx) -> Result<ProjectionSetup<K>> {
    use rand::SeedableRng;
    random_setup(k, hs, bound, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::int;

    fn cam(rows: &[&[i64]]) -> Camera<Q> {
        Camera::from_i64(rows, &()).unwrap()
    }

    #[test]
    fn degenerate_camera_rejected() {
        let r = Camera::<Q>::from_i64(&[&[1, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0]], &());
        assert!(matches!(r, Err(Error::DegenerateCamera { rank: 2, expected: 3 })));
        assert!(Camera::<Q>::from_i64(&[&[1, 0], &[0, 1]], &()).is_err());
    }

    #[test]
    fn coordinate_projection() {
        let p1 = cam(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        assert_eq!((p1.h(), p1.k()), (2, 3));
        let x = ProjectivePoint::from_i64(&[2, 3, 5, 7], &()).unwrap();
        let img = p1.apply(&x).unwrap();
        assert_eq!(img, Image::Point(ProjectivePoint::from_i64(&[2, 3, 5], &()).unwrap()));
        assert_eq!(p1.center().as_point().unwrap(), ProjectivePoint::from_i64(&[0, 0, 0, 1], &()).unwrap());
    }

    #[test]
    fn point_normalization() {
        let a = ProjectivePoint::<Q>::from_i64(&[0, -2, 4, 6], &()).unwrap();
        let b = ProjectivePoint::<Q>::from_i64(&[0, 1, -2, -3], &()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coords()[1], int(1));
        assert_eq!(ProjectivePoint::new(a.coords().to_vec()).unwrap(), a);
        assert!(ProjectivePoint::<Q>::from_i64(&[0, 0], &()).is_err());
        assert_eq!(a.to_string(), "(0:1:-2:-3)");
    }

    #[test]
    fn line_center_forms() {
        let q3 = cam(&[&[0, 0, 0, 1], &[0, 1, 0, 0]]);
        let c = q3.center();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&ProjectivePoint::from_i64(&[1, 0, 5, 0], &()).unwrap()));
        assert!(!c.contains(&ProjectivePoint::from_i64(&[1, 1, 0, 0], &()).unwrap()));
        for p in c.points() {
            assert_eq!(q3.apply(&p).unwrap(), Image::InCenter);
        }
    }

    #[test]
    fn identical_cameras_share_centers() {
        let q = cam(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        let v = View { q: q.clone(), p: q };
        let s = ProjectionSetup::new(vec![v.clone(), v]).unwrap();
        assert!(!s.centers_pairwise_disjoint());
        assert!(s.sub_setup(&[]).is_err());
        assert!(s.sub_setup(&[1, 0]).is_err());
        assert!(s.sub_setup(&[0, 2]).is_err());
    }
}
