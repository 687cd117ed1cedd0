//! Fibres of the two projections of the unified locus, conjugate points,
//! image membership, nesting of critical loci, tangent spaces, and the
//! sampling / slicing devices used to gather evidence on examples.
//!
//! Conventions: view and center indices are 0-based. "Forward" maps a point
//! x of X to its conjugates in y-space (fibre of the first projection);
//! "backward" is the mirror image, obtained by swapping P and Q.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{ideal_product, ideal_quotient, normal_form, projective_points, saturation, Ideal};
use crate::linalg::{annihilator, det_poly, rank_bareiss, rank_kernel, row_space_basis, Matrix};
use crate::locus::{build_locus_matrix, critical_ideal, Side};
use crate::monomial::Monomial;
use crate::poly::{MultiPoly, PolyRing, Ring, VarSet};
use crate::scene::{ProjectionSetup, ProjectivePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    /// Side on which the input point lives.
    pub fn source(self) -> Side {
        match self {
            Direction::Forward => Side::X,
            Direction::Backward => Side::Y,
        }
    }

    pub fn reverse(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "forward" | "f" => Ok(Direction::Forward),
            "backward" | "b" => Ok(Direction::Backward),
            _ => Err(Error::Parse(format!("unknown direction '{s}' (expected forward|backward)"))),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        })
    }
}

/// The setup seen from the source side of `dir`: backward queries are
/// forward queries on the setup with P and Q exchanged.
fn oriented<K: Field>(s: &ProjectionSetup<K>, dir: Direction) -> ProjectionSetup<K> {
    match dir {
        Direction::Forward => s.clone(),
        Direction::Backward => s.swapped(),
    }
}

fn check_point<K: Field>(s: &ProjectionSetup<K>, x: &ProjectivePoint<K>) -> Result<()> {
    if x.coords().len() != s.k() + 1 {
        return Err(Error::DimensionMismatch {
            expected: s.k() + 1,
            got: x.coords().len(),
        });
    }
    Ok(())
}

/// The locus matrix M_X (or M_Y) evaluated at a point.
pub fn locus_matrix_at<K: Field>(s: &ProjectionSetup<K>, side: Side, x: &ProjectivePoint<K>) -> Result<Matrix<K>> {
    check_point(s, x)?;
    let k = s.k();
    let ctx = s.ctx();
    let rows: usize = s.h_list().iter().map(|h| h + 1).sum();
    let mut m = Matrix::zeros(rows, s.n() + k + 1, &ctx);
    let mut r0 = 0;
    for (j, v) in s.views().iter().enumerate() {
        let (constant, linear) = match side {
            Side::X => (&v.p, &v.q),
            Side::Y => (&v.q, &v.p),
        };
        let image = linear.apply_vector(x.coords())?;
        for (i, value) in image.into_iter().enumerate() {
            for c in 0..=k {
                m.set(r0 + i, c, constant.matrix().get(i, c).clone());
            }
            m.set(r0 + i, k + 1 + j, value);
        }
        r0 += v.h() + 1;
    }
    Ok(m)
}

/// Whether `x` lies on the critical locus of `side`: the locus matrix at x
/// drops rank (always true when the matrix has fewer rows than columns).
pub fn on_locus<K: Field>(s: &ProjectionSetup<K>, side: Side, x: &ProjectivePoint<K>) -> Result<bool> {
    let m = locus_matrix_at(s, side, x)?;
    Ok(m.rows() < m.cols() || rank_bareiss(&m) < m.cols())
}

/// A projective linear subspace of x- or y-space, stored as a canonical
/// (reduced row echelon) basis of the underlying vector space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSpace<K: Field = crate::field::Q> {
    side: Side,
    basis: Vec<Vec<K>>,
}

impl<K: Field> LinearSpace<K> {
    /// Span of the given vectors; errors if they span only the zero vector.
    pub fn span(side: Side, vectors: &[Vec<K>]) -> Result<Self> {
        let basis = row_space_basis(vectors);
        if basis.is_empty() {
            return Err(Error::InvalidInput("empty span".into()));
        }
        Ok(LinearSpace { side, basis })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn basis(&self) -> &[Vec<K>] {
        &self.basis
    }

    /// Projective dimension.
    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis[0].len() - 1
    }

    /// Linear forms cutting out the space, in canonical echelon form.
    pub fn equations(&self) -> Vec<Vec<K>> {
        let ctx = self.basis[0][0].ctx();
        annihilator(&self.basis, self.basis[0].len(), &ctx)
    }

    pub fn contains(&self, p: &ProjectivePoint<K>) -> bool {
        let mut v = self.basis.clone();
        v.push(p.coords().to_vec());
        row_space_basis(&v).len() == self.basis.len()
    }

    pub fn contains_space(&self, other: &LinearSpace<K>) -> bool {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        row_space_basis(&v).len() == self.basis.len()
    }

    /// The basis vectors as projective points.
    pub fn points(&self) -> Vec<ProjectivePoint<K>> {
        self.basis
            .iter()
            .map(|b| ProjectivePoint::new(b.clone()).expect("basis vectors are nonzero"))
            .collect()
    }

    /// Equations as text, e.g. `4y0+5y1+5y3=0`.
    pub fn equation_strings(&self) -> Vec<String> {
        self.equations()
            .iter()
            .map(|f| linear_form_text(f, self.side.prefix()))
            .collect()
    }
}

/// Renders a linear form with coefficients scaled as for projective points.
fn linear_form_text<K: Field>(form: &[K], prefix: &str) -> String {
    let mut out = String::new();
    for (i, c) in K::projective_strings(form).into_iter().enumerate() {
        if c == "0" {
            continue;
        }
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, c),
        };
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if mag != "1" {
            out.push_str(&mag);
            if mag.contains('/') {
                out.push('*');
            }
        }
        out.push_str(&format!("{prefix}{i}"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out.push_str("=0");
    out
}

impl<K: Field> fmt::Display for LinearSpace<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearSpace dim {}: {}", self.dim(), self.equation_strings().join(", "))
    }
}

/// Outcome of a fibre query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FibreResult<K: Field = crate::field::Q> {
    /// The point is on the locus but not in the image of the projection.
    Empty,
    Point(ProjectivePoint<K>),
    LinearSpace(LinearSpace<K>),
    /// The point is not on the critical locus.
    NotInLocus,
}

impl<K: Field> FibreResult<K> {
    pub fn point(&self) -> Option<&ProjectivePoint<K>> {
        match self {
            FibreResult::Point(p) => Some(p),
            _ => None,
        }
    }

    pub fn linear_space(&self) -> Option<&LinearSpace<K>> {
        match self {
            FibreResult::LinearSpace(l) => Some(l),
            _ => None,
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            FibreResult::Empty => "Empty",
            FibreResult::Point(_) => "Point",
            FibreResult::LinearSpace(_) => "LinearSpace",
            FibreResult::NotInLocus => "NotInLocus",
        }
    }
}

impl<K: Field> fmt::Display for FibreResult<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FibreResult::Empty => write!(f, "Empty"),
            FibreResult::Point(p) => write!(f, "Point {p}"),
            FibreResult::LinearSpace(l) => write!(f, "{l}"),
            FibreResult::NotInLocus => write!(f, "NotInLocus"),
        }
    }
}

/// Projects kernel vectors of a locus matrix to their first k+1 entries and
/// classifies the span.
fn projected_kernel<K: Field>(m: &Matrix<K>, k: usize, target: Side) -> Result<FibreResult<K>> {
    let (_, ker) = rank_kernel(m);
    let proj: Vec<Vec<K>> = ker.vectors.iter().map(|v| v[..=k].to_vec()).collect();
    if proj.iter().any(|v| v.iter().all(|c| c.is_zero())) {
        return Err(Error::Hypothesis(
            "internal invariant violated: kernel vector with zero point part off the centers".into(),
        ));
    }
    let basis = row_space_basis(&proj);
    Ok(match basis.len() {
        0 => FibreResult::Empty,
        1 => FibreResult::Point(ProjectivePoint::new(basis.into_iter().next().expect("one"))?),
        _ => FibreResult::LinearSpace(LinearSpace { side: target, basis }),
    })
}

/// Conjugates of `x`: the fibre of the projection from the unified locus
/// over `x`, seen in the other space.
///
/// Let R be the views whose Q-center (P-center when going backward) does not
/// contain x. If R is everything, the fibre is read off the kernel of the
/// locus matrix at x. Otherwise x has conjugates only when it lies on the
/// critical locus of the sub-setup R, and the fibre is read off that
/// sub-setup's locus matrix. When x lies in every center (R empty) the
/// result is `Empty`.
pub fn conjugate_point<K: Field>(s: &ProjectionSetup<K>, x: &ProjectivePoint<K>, dir: Direction) -> Result<FibreResult<K>> {
    let s = oriented(s, dir);
    check_point(&s, x)?;
    let target = dir.source().other();
    if !on_locus(&s, Side::X, x)? {
        return Ok(FibreResult::NotInLocus);
    }
    let containing = s.q_centers_containing(x);
    if containing.is_empty() {
        return projected_kernel(&locus_matrix_at(&s, Side::X, x)?, s.k(), target);
    }
    let rest: Vec<usize> = (0..s.n()).filter(|j| !containing.contains(j)).collect();
    if rest.is_empty() {
        return Ok(FibreResult::Empty);
    }
    let sub = s.sub_setup(&rest)?;
    if !on_locus(&sub, Side::X, x)? {
        return Ok(FibreResult::Empty);
    }
    projected_kernel(&locus_matrix_at(&sub, Side::X, x)?, s.k(), target)
}

/// For a two-view setup and a point x in the center of the camera
/// `center_index` (a Q-camera forward, a P-camera backward): the linear
/// space of conjugates, i.e. the kernel of (P_o | Q_o(x)) for the other
/// view o, projected to the point coordinates.
pub fn center_fibre_two_views<K: Field>(
    s: &ProjectionSetup<K>,
    center_index: usize,
    x: &ProjectivePoint<K>,
    dir: Direction,
) -> Result<FibreResult<K>> {
    if s.n() != 2 {
        return Err(Error::InvalidInput(format!("two views required, got {}", s.n())));
    }
    if center_index > 1 {
        return Err(Error::IndexOutOfRange { index: center_index, len: 2 });
    }
    let s = oriented(s, dir);
    check_point(&s, x)?;
    if !s.view(center_index).q.center().contains(x) {
        return Err(Error::NotInCenter);
    }
    let other = s.view(1 - center_index);
    let k = s.k();
    let qx = other.q.apply_vector(x.coords())?;
    let mut m = Matrix::zeros(other.h() + 1, k + 2, &s.ctx());
    for (i, value) in qx.into_iter().enumerate() {
        for c in 0..=k {
            m.set(i, c, other.p.matrix().get(i, c).clone());
        }
        m.set(i, k + 1, value);
    }
    projected_kernel(&m, k, dir.source().other())
}

/// Span of the fibres over the spanning points of a center (two views); its
/// projective dimension is at most 2k - h_1 - h_2 - 1.
pub fn center_fibre_union_span<K: Field>(s: &ProjectionSetup<K>, center_index: usize, dir: Direction) -> Result<LinearSpace<K>> {
    let oriented_setup = oriented(s, dir);
    let center = oriented_setup.view(center_index).q.center().clone();
    let mut vectors = Vec::new();
    for p in center.points() {
        match center_fibre_two_views(s, center_index, &p, dir)? {
            FibreResult::Point(y) => vectors.push(y.coords().to_vec()),
            FibreResult::LinearSpace(l) => vectors.extend(l.basis().iter().cloned()),
            _ => {}
        }
    }
    LinearSpace::span(dir.source().other(), &vectors)
}

/// Which alternative of the image criterion applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipCase {
    /// x avoids every center.
    OffCenters,
    /// x lies in the centers of the views outside `views` and on the
    /// critical locus of the sub-setup `views` (r = its size).
    InCenters { r: usize, views: Vec<usize> },
    /// Neither alternative holds.
    Excluded,
}

impl fmt::Display for MembershipCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipCase::OffCenters => write!(f, "off-centers"),
            MembershipCase::InCenters { r, .. } => write!(f, "in-centers-with-subcriticality(r={r})"),
            MembershipCase::Excluded => write!(f, "excluded"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub case: MembershipCase,
}

/// Whether a point of X is in the image of the first projection of the
/// unified locus (second projection and Y when going backward).
pub fn image_membership<K: Field>(s: &ProjectionSetup<K>, x: &ProjectivePoint<K>, dir: Direction) -> Result<Membership> {
    let s = oriented(s, dir);
    check_point(&s, x)?;
    if !on_locus(&s, Side::X, x)? {
        return Err(Error::NotOnLocus);
    }
    let containing = s.q_centers_containing(x);
    if containing.is_empty() {
        return Ok(Membership { member: true, case: MembershipCase::OffCenters });
    }
    let rest: Vec<usize> = (0..s.n()).filter(|j| !containing.contains(j)).collect();
    if !rest.is_empty() && on_locus(&s.sub_setup(&rest)?, Side::X, x)? {
        return Ok(Membership {
            member: true,
            case: MembershipCase::InCenters { r: rest.len(), views: rest },
        });
    }
    Ok(Membership { member: false, case: MembershipCase::Excluded })
}

/// Result of comparing I(X_r) with I(X_n) : (product of the complementary
/// center ideals).
#[derive(Clone, Debug)]
pub struct NestingReport<K: Field = crate::field::Q> {
    pub subset: Vec<usize>,
    pub verdict: bool,
    /// Normal form of each generator of I(X_r) modulo the quotient.
    pub normal_forms: Vec<MultiPoly<K>>,
}

/// Tests I(X_r) ⊆ I(X_n) : (I(C_j) for j outside `subset`) generator-wise.
pub fn nesting_check<K: Field>(s: &ProjectionSetup<K>, subset: &[usize]) -> Result<NestingReport<K>> {
    let sub = s.sub_setup(subset)?;
    let full = critical_ideal(s, Side::X);
    let ring = full.ring().clone();
    let ir = critical_ideal(&sub, Side::X);
    let mut j = Ideal::unit(&ring);
    for v in (0..s.n()).filter(|v| !subset.contains(v)) {
        let c = Ideal::from_linear_forms(&ring, s.view(v).q.center().forms(), 0);
        j = ideal_product(&j, &c)?;
    }
    let quotient = ideal_quotient(&full, &j)?;
    let gb = quotient.groebner();
    let normal_forms = ir
        .generators()
        .iter()
        .map(|g| normal_form(&g.map_vars(&ring, &(0..ring.nvars()).collect::<Vec<_>>()), gb))
        .collect::<Result<Vec<_>>>()?;
    Ok(NestingReport {
        subset: subset.to_vec(),
        verdict: normal_forms.iter().all(|f| f.is_zero()),
        normal_forms,
    })
}

/// Rank conditions under which the tangent space of X_n at a point of the
/// last Q-center has dimension k - h_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisFlags {
    /// Rank of M_{X_{n-1}} at the point (wanted: k + n - 1).
    pub rank_leading: usize,
    /// Rank of M_{X_n} at the point with its last column removed (wanted: k + n).
    pub rank_without_last_column: usize,
    pub wanted_leading: usize,
    pub wanted_without_last_column: usize,
    /// Whether the point lies in the last Q-center.
    pub in_last_center: bool,
}

impl HypothesisFlags {
    pub fn hold(&self) -> bool {
        self.in_last_center
            && self.rank_leading == self.wanted_leading
            && self.rank_without_last_column == self.wanted_without_last_column
    }
}

#[derive(Clone, Debug)]
pub struct TangentReport<K: Field = crate::field::Q> {
    pub point: ProjectivePoint<K>,
    pub jacobian_rank: usize,
    /// Projective dimension of the embedded tangent space, k - rank.
    pub tangent_dimension: usize,
    pub flags: Option<HypothesisFlags>,
}

/// Rank of the Jacobian matrix of the generators of `i` at `x`.
pub fn jacobian_rank<K: Field>(i: &Ideal<K>, x: &ProjectivePoint<K>) -> Result<TangentReport<K>> {
    let n = i.ring().nvars();
    if x.coords().len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.coords().len() });
    }
    let mut rows = Vec::new();
    for g in i.generators() {
        if !g.evaluate(x.coords())?.is_zero() {
            return Err(Error::NotOnLocus);
        }
        rows.push(
            (0..n)
                .map(|v| g.partial_derivative(v)?.evaluate(x.coords()))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let rank = if rows.is_empty() { 0 } else { rank_bareiss(&Matrix::from_rows(rows)?) };
    Ok(TangentReport {
        point: x.clone(),
        jacobian_rank: rank,
        tangent_dimension: n - 1 - rank,
        flags: None,
    })
}

/// Jacobian rank of I(X_n) (I(Y_n) backward) at `x` with the rank flags for
/// the last view filled in.
pub fn tangent_report<K: Field>(s: &ProjectionSetup<K>, x: &ProjectivePoint<K>, dir: Direction) -> Result<TangentReport<K>> {
    let s = oriented(s, dir);
    check_point(&s, x)?;
    let mut report = jacobian_rank(&critical_ideal(&s, Side::X), x)?;
    let (k, n) = (s.k(), s.n());
    if n >= 2 {
        let leading = s.sub_setup(&(0..n - 1).collect::<Vec<_>>())?;
        let m = locus_matrix_at(&s, Side::X, x)?;
        let cols: Vec<usize> = (0..m.cols() - 1).collect();
        let all_rows: Vec<usize> = (0..m.rows()).collect();
        report.flags = Some(HypothesisFlags {
            rank_leading: rank_bareiss(&locus_matrix_at(&leading, Side::X, x)?),
            rank_without_last_column: rank_bareiss(&m.select(&all_rows, &cols)),
            wanted_leading: k + n - 1,
            wanted_without_last_column: k + n,
            in_last_center: s.view(n - 1).q.center().contains(x),
        });
    }
    Ok(report)
}

/// Ideal of the closure of the critical locus of `side` minus the center of
/// view `view` (its Q-center on the X side, its P-center on the Y side):
/// the saturation of the critical ideal by the center's ideal.
pub fn residual_ideal<K: Field>(s: &ProjectionSetup<K>, side: Side, view: usize) -> Result<Ideal<K>> {
    if view >= s.n() {
        return Err(Error::IndexOutOfRange { index: view, len: s.n() });
    }
    let i = critical_ideal(s, side);
    let camera = match side {
        Side::X => &s.view(view).q,
        Side::Y => &s.view(view).p,
    };
    let c = Ideal::from_linear_forms(i.ring(), camera.center().forms(), 0);
    saturation(&i, &c)
}

/// The unified ideal saturated by the x-ideal of the Q-center and the
/// y-ideal of the P-center of view `view`: pairs lying over neither center.
pub fn residual_unified_ideal<K: Field>(s: &ProjectionSetup<K>, view: usize) -> Result<Ideal<K>> {
    if view >= s.n() {
        return Err(Error::IndexOutOfRange { index: view, len: s.n() });
    }
    let u = crate::locus::unified_ideal(s);
    let ring = u.ring().clone();
    let cx = Ideal::from_linear_forms(&ring, s.view(view).q.center().forms(), 0);
    let cy = Ideal::from_linear_forms(&ring, s.view(view).p.center().forms(), s.k() + 1);
    saturation(&saturation(&u, &cx)?, &cy)
}

/// Outcome of one round trip x -> y -> x'.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoundtripOutcome<K: Field = crate::field::Q> {
    Success { image: ProjectivePoint<K> },
    Failed { reason: String },
    NotApplicable { reason: String },
}

#[derive(Clone, Debug)]
pub struct RoundtripRecord<K: Field = crate::field::Q> {
    pub input: ProjectivePoint<K>,
    pub outcome: RoundtripOutcome<K>,
}

#[derive(Clone, Debug)]
pub struct RoundtripReport<K: Field = crate::field::Q> {
    pub records: Vec<RoundtripRecord<K>>,
    /// Number of distinct images among successful round trips.
    pub distinct_images: usize,
}

impl<K: Field> RoundtripReport<K> {
    pub fn successes(&self) -> usize {
        self.records
            .iter()
            .filter(|r| matches!(r.outcome, RoundtripOutcome::Success { .. }))
            .count()
    }

    pub fn all_succeeded(&self) -> bool {
        self.successes() == self.records.len()
    }
}

fn roundtrip_one<K: Field>(s: &ProjectionSetup<K>, x: &ProjectivePoint<K>) -> Result<RoundtripOutcome<K>> {
    let na = |reason: &str| Ok(RoundtripOutcome::NotApplicable { reason: reason.to_string() });
    if !on_locus(s, Side::X, x)? {
        return na("not on the critical locus");
    }
    if !s.q_centers_containing(x).is_empty() {
        return na("lies in a center");
    }
    let m = locus_matrix_at(s, Side::X, x)?;
    if rank_bareiss(&m) + 1 != m.cols() {
        return na("locus matrix rank below k+n");
    }
    let y = match conjugate_point(s, x, Direction::Forward)? {
        FibreResult::Point(y) => y,
        other => return Ok(RoundtripOutcome::Failed { reason: format!("forward gave {}", other.variant_name()) }),
    };
    match conjugate_point(s, &y, Direction::Backward)? {
        FibreResult::Point(back) if &back == x => Ok(RoundtripOutcome::Success { image: y }),
        FibreResult::Point(back) => Ok(RoundtripOutcome::Failed { reason: format!("backward gave {back}") }),
        other => Ok(RoundtripOutcome::Failed { reason: format!("backward gave {}", other.variant_name()) }),
    }
}

/// Checks backward(forward(x)) = x at each point, flagging points where the
/// uniqueness preconditions fail as not applicable.
pub fn roundtrip_check<K: Field>(s: &ProjectionSetup<K>, points: &[ProjectivePoint<K>]) -> Result<RoundtripReport<K>> {
    let mut records = Vec::with_capacity(points.len());
    let mut images = BTreeSet::new();
    for x in points {
        check_point(s, x)?;
        let outcome = roundtrip_one(s, x)?;
        if let RoundtripOutcome::Success { image } = &outcome {
            images.insert(image.to_string());
        }
        records.push(RoundtripRecord { input: x.clone(), outcome });
    }
    Ok(RoundtripReport { records, distinct_images: images.len() })
}

fn small<K: Field>(rng: &mut ChaCha8Rng, ctx: &K::Ctx) -> K {
    K::from_i64(rng.gen_range(-10..=10), ctx)
}

/// Points of a quadric hypersurface: for seeded random directions d, the
/// second intersection of the line base + t·d with the quadric, namely
/// q(d)·base − (∇q(base)·d)·d. Tangent lines and lines
/// inside the quadric are skipped; duplicates and the base are filtered.
pub fn sample_points_on_quadric<K: Field>(
    q: &MultiPoly<K>,
    base: &ProjectivePoint<K>,
    count: usize,
    seed: u64,
) -> Result<Vec<ProjectivePoint<K>>> {
    let ring = q.ring();
    let n = ring.nvars();
    if base.coords().len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: base.coords().len() });
    }
    let info = q.degree_info();
    if info.total != Some(2) || !info.homogeneous {
        return Err(Error::InvalidInput("not a quadratic form".into()));
    }
    let b = base.coords();
    if !q.evaluate(b)?.is_zero() {
        return Err(Error::InvalidInput(format!("base point {base} is not on the quadric")));
    }
    let grad = (0..n)
        .map(|v| q.partial_derivative(v)?.evaluate(b))
        .collect::<Result<Vec<K>>>()?;
    if grad.iter().all(|g| g.is_zero()) {
        return Err(Error::QuadricVertex);
    }
    let ctx = ring.ctx().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    seen.insert(base.to_string());
    let mut out = Vec::new();
    for _ in 0..count.saturating_mul(200).max(200) {
        if out.len() == count {
            break;
        }
        let d: Vec<K> = (0..n).map(|_| small::<K>(&mut rng, &ctx)).collect();
        let qd = q.evaluate(&d)?;
        let polar = grad.iter().zip(&d).fold(K::zero(&ctx), |acc, (g, x)| acc.add(&g.mul(x)));
        if qd.is_zero() || polar.is_zero() {
            continue;
        }
        let coords: Vec<K> = b
            .iter()
            .zip(&d)
            .map(|(bi, di)| qd.mul(bi).sub(&polar.mul(di)))
            .collect();
        let Ok(p) = ProjectivePoint::new(coords) else { continue };
        debug_assert!(q.evaluate(p.coords())?.is_zero());
        if seen.insert(p.to_string()) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Linear form with seeded coefficients in [-10, 10] in the variables `vars`.
pub fn random_linear_form<K: Field>(ring: &Ring<K>, vars: Range<usize>, rng: &mut ChaCha8Rng) -> MultiPoly<K> {
    let ctx = ring.ctx().clone();
    let mut coeffs = vec![K::zero(&ctx); ring.nvars()];
    for v in vars {
        coeffs[v] = small::<K>(rng, &ctx);
    }
    MultiPoly::linear(ring, &coeffs)
}

/// Points of a projective curve found by intersecting it with seeded random
/// hyperplanes and keeping the intersection points with coordinates in the
/// field for which `accept` holds. Over the rationals this finds points only
/// on curves with many rational points; over GF(p) it is effective.
pub fn sample_points_on_curve<K: Field>(
    curve: &Ideal<K>,
    count: usize,
    seed: u64,
    accept: impl Fn(&ProjectivePoint<K>) -> bool,
) -> Result<Vec<ProjectivePoint<K>>> {
    let ring = curve.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for _ in 0..count.saturating_mul(20).max(20) {
        if out.len() >= count {
            break;
        }
        let h = random_linear_form(ring, 0..ring.nvars(), &mut rng);
        let mut gens = curve.generators().to_vec();
        gens.push(h);
        let pts = match projective_points(&Ideal::new(ring, gens)?) {
            Ok(p) => p,
            Err(Error::NotZeroDimensional) => continue,
            Err(e) => return Err(e),
        };
        for p in pts {
            if out.len() < count && accept(&p) && seen.insert(p.to_string()) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// A slice count together with the data needed to reproduce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceCount {
    pub count: u64,
    pub seed: u64,
    /// Number of slicing forms used (the dimension of the locus).
    pub forms: usize,
    pub interpretation: String,
}

impl fmt::Display for SliceCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}; {} forms, seed {})", self.count, self.interpretation, self.forms, self.seed)
    }
}

/// Number of solutions, with multiplicity, of the ideal extended by `forms`:
/// the number of standard monomials of the zero-dimensional Gröbner basis.
pub fn affine_slice_count<K: Field>(i: &Ideal<K>, forms: &[MultiPoly<K>]) -> Result<u64> {
    let mut gens = i.generators().to_vec();
    gens.extend(forms.iter().cloned());
    Ideal::new(i.ring(), gens)?.groebner().standard_monomial_count()
}

/// Degree of a projective locus by slicing: `dim` random hyperplanes plus a
/// random affine chart, solutions counted with multiplicity.
pub fn projective_slice_count<K: Field>(i: &Ideal<K>, seed: u64) -> Result<SliceCount> {
    let dim = i.groebner().dimension().ok_or(Error::EmptyLocus)?;
    let ring = i.ring();
    let n = ring.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut forms: Vec<MultiPoly<K>> = (0..dim).map(|_| random_linear_form(ring, 0..n, &mut rng)).collect();
    forms.push(&random_linear_form(ring, 0..n, &mut rng) - &MultiPoly::one(ring));
    Ok(SliceCount {
        count: affine_slice_count(i, &forms)?,
        seed,
        forms: dim,
        interpretation: "projective degree".into(),
    })
}

fn block_ranges<K: Field>(ring: &Ring<K>) -> Result<(Range<usize>, Range<usize>)> {
    let split = ring
        .vars()
        .split()
        .ok_or_else(|| Error::InvalidInput("ring has no (x|y) block structure".into()))?;
    Ok((0..split, split..ring.nvars()))
}

/// Dimension of a bihomogeneous locus in P^a x P^b, after removing the
/// components supported on the irrelevant ideals of either factor.
/// `None` means empty.
pub fn biprojective_dimension<K: Field>(i: &Ideal<K>) -> Result<Option<usize>> {
    let (xs, ys) = block_ranges(i.ring())?;
    let ring = i.ring();
    let irrelevant = |r: Range<usize>| Ideal::new(ring, r.map(|v| MultiPoly::var(ring, v)).collect());
    let sat = saturation(&saturation(i, &irrelevant(xs)?)?, &irrelevant(ys)?)?;
    Ok(sat.groebner().krull_dimension().and_then(|d| d.checked_sub(2)))
}

/// Random bilinear form Σ c_ij x_i y_j with coefficients in [-10, 10].
fn random_bilinear_form<K: Field>(ring: &Ring<K>, rng: &mut ChaCha8Rng) -> Result<MultiPoly<K>> {
    let (xs, ys) = block_ranges(ring)?;
    let ctx = ring.ctx().clone();
    let n = ring.nvars();
    let mut terms = Vec::new();
    for a in xs {
        for b in ys.clone() {
            let m = Monomial::var(n, a).mul(&Monomial::var(n, b));
            terms.push((m, small::<K>(rng, &ctx)));
        }
    }
    Ok(MultiPoly::from_terms(ring, terms))
}

fn charts<K: Field>(ring: &Ring<K>, rng: &mut ChaCha8Rng) -> Result<Vec<MultiPoly<K>>> {
    let (xs, ys) = block_ranges(ring)?;
    let one = MultiPoly::one(ring);
    Ok(vec![
        &random_linear_form(ring, xs, rng) - &one,
        &random_linear_form(ring, ys, rng) - &one,
    ])
}

/// Degree of a bihomogeneous locus of dimension d under the Segre
/// embedding: slice with d random bidegree-(1,1) forms, dehomogenize in
/// both factors with random affine charts, count solutions.
pub fn segre_slice_count<K: Field>(i: &Ideal<K>, dim: usize, seed: u64) -> Result<SliceCount> {
    let ring = i.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut forms = (0..dim)
        .map(|_| random_bilinear_form(ring, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    forms.extend(charts(ring, &mut rng)?);
    Ok(SliceCount {
        count: affine_slice_count(i, &forms)?,
        seed,
        forms: dim,
        interpretation: "Segre degree: slices by generic bidegree-(1,1) forms".into(),
    })
}

/// One entry of the multidegree: slice with `x_forms` random hyperplanes in
/// x and `y_forms` in y (their sum should be the dimension), dehomogenize
/// in both factors, count solutions. For a curve, (1, 0) gives the degree
/// of its projection to the x-space times the degree of that projection map.
pub fn mixed_slice_count<K: Field>(i: &Ideal<K>, x_forms: usize, y_forms: usize, seed: u64) -> Result<SliceCount> {
    let ring = i.ring();
    let (xs, ys) = block_ranges(ring)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut forms: Vec<MultiPoly<K>> = (0..x_forms).map(|_| random_linear_form(ring, xs.clone(), &mut rng)).collect();
    forms.extend((0..y_forms).map(|_| random_linear_form(ring, ys.clone(), &mut rng)));
    forms.extend(charts(ring, &mut rng)?);
    Ok(SliceCount {
        count: affine_slice_count(i, &forms)?,
        seed,
        forms: x_forms + y_forms,
        interpretation: format!("multidegree entry: {x_forms} x-hyperplanes, {y_forms} y-hyperplanes"),
    })
}

/// The conjugates of the points of one Q-center, as forms in the center's
/// linear parameters t_0.. (x = Σ t_i A_i with A_i the center's spanning
/// points).
#[derive(Clone, Debug)]
pub struct CenterImageMap<K: Field = crate::field::Q> {
    pub center_index: usize,
    /// Spanning points A_i of the center.
    pub center_basis: Vec<Vec<K>>,
    pub parameter_ring: Ring<K>,
    /// k+1 forms of degree n-1 giving the conjugate point.
    pub forms: Vec<MultiPoly<K>>,
    /// Rows of M_{X_{n-1}} whose signed maximal minors give the forms.
    pub rows: Vec<usize>,
    /// Number of sampled parameter points at which the rank hypothesis and
    /// the kernel cross-check were verified.
    pub samples_checked: usize,
}

impl<K: Field> CenterImageMap<K> {
    pub fn evaluate(&self, params: &[K]) -> Result<Vec<K>> {
        self.forms.iter().map(|f| f.evaluate(params)).collect()
    }

    /// The center point with the given parameters.
    pub fn center_point(&self, params: &[K]) -> Vec<K> {
        let ctx = params[0].ctx();
        let len = self.center_basis[0].len();
        (0..len)
            .map(|c| {
                params
                    .iter()
                    .zip(&self.center_basis)
                    .fold(K::zero(&ctx), |acc, (t, a)| acc.add(&t.mul(&a[c])))
            })
            .collect()
    }
}

/// Conjugates of the points of the Q-center of view `center_index` for
/// n ≥ 3: the center is parameterized linearly, substituted into the locus
/// matrix of the remaining views, and the kernel is written as signed
/// maximal minors of k+n-1 rows. The rank hypothesis (rank k+n-1 along the
/// center) is checked at 5 seeded sample parameters, where the forms are
/// also compared with a direct kernel solve. Only scalar content is removed
/// from the forms.
pub fn center_image_map<K: Field>(s: &ProjectionSetup<K>, center_index: usize, seed: u64) -> Result<CenterImageMap<K>> {
    let (k, n) = (s.k(), s.n());
    if n < 3 {
        return Err(Error::InvalidInput(format!("at least three views required, got {n}")));
    }
    if center_index >= n {
        return Err(Error::IndexOutOfRange { index: center_index, len: n });
    }
    let others: Vec<usize> = (0..n).filter(|&j| j != center_index).collect();
    let h_others: usize = others.iter().map(|&j| s.view(j).h()).sum();
    if h_others < k {
        return Err(Error::Hypothesis(format!(
            "sum of h over the other views is {h_others} < k = {k}"
        )));
    }
    let ctx = s.ctx();
    let sub = s.sub_setup(&others)?;
    let center = s.view(center_index).q.center();
    let basis: Vec<Vec<K>> = center.basis().vectors.clone();
    let m_params = basis.len();
    let pring: Ring<K> = PolyRing::new(VarSet::indexed("t", m_params), ctx.clone());
    let images: Vec<MultiPoly<K>> = (0..=k)
        .map(|c| {
            let coeffs: Vec<K> = basis.iter().map(|a| a[c].clone()).collect();
            MultiPoly::linear(&pring, &coeffs)
        })
        .collect();
    let mx = build_locus_matrix(&sub, Side::X).into_matrix();
    let mut mt = crate::linalg::PolyMatrix::zeros(&pring, mx.rows(), mx.cols());
    for r in 0..mx.rows() {
        for c in 0..mx.cols() {
            mt.set(r, c, mx.get(r, c).substitute(&images)?);
        }
    }
    let wanted = k + n - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Vec<K>> = (0..5)
        .map(|_| loop {
            let t: Vec<K> = (0..m_params).map(|_| small::<K>(&mut rng, &ctx)).collect();
            if t.iter().any(|v| !v.is_zero()) {
                break t;
            }
        })
        .collect();
    let evaluated = samples.iter().map(|t| mt.evaluate(t)).collect::<Result<Vec<_>>>()?;
    for (t, m) in samples.iter().zip(&evaluated) {
        let r = rank_bareiss(m);
        if r != wanted {
            return Err(Error::Hypothesis(format!(
                "center not in the smooth locus of the other views' critical locus: rank {r} != k+n-1 = {wanted} at parameters {}",
                t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
            )));
        }
    }
    // Greedy choice of rows independent at the first sample.
    let mut rows: Vec<usize> = Vec::new();
    for r in 0..mt.rows() {
        let mut trial = rows.clone();
        trial.push(r);
        let all_cols: Vec<usize> = (0..mt.cols()).collect();
        if rank_bareiss(&evaluated[0].select(&trial, &all_cols)) == trial.len() {
            rows = trial;
        }
        if rows.len() == wanted {
            break;
        }
    }
    let mut forms = Vec::with_capacity(k + 1);
    for c in 0..=k {
        let cols: Vec<usize> = (0..mt.cols()).filter(|&x| x != c).collect();
        let d = det_poly(&mt.select(&rows, &cols))?;
        forms.push(if c % 2 == 0 { d } else { d.scale(&K::one(&ctx).neg()) });
    }
    // Remove scalar content: make the first nonzero coefficient of the first
    // nonzero form equal to one, then rescale rationals to integers.
    if let Some(lead) = forms.iter().find_map(|f| f.terms().next().map(|(_, c)| c.clone())) {
        let inv = lead.inv().expect("nonzero");
        forms = forms.iter().map(|f| f.scale(&inv)).collect();
    }
    let map = CenterImageMap {
        center_index,
        center_basis: basis,
        parameter_ring: pring,
        forms,
        rows,
        samples_checked: samples.len(),
    };
    for t in &samples {
        let y = map.evaluate(t)?;
        let x = ProjectivePoint::new(map.center_point(t))?;
        let Ok(yp) = ProjectivePoint::new(y) else {
            return Err(Error::Hypothesis("selected minors vanish at a sample parameter".into()));
        };
        match conjugate_point(s, &x, Direction::Forward)? {
            FibreResult::Point(z) if z == yp => {}
            other => {
                return Err(Error::Hypothesis(format!(
                    "kernel cross-check failed at {x}: forms give {yp}, kernel gives {other}"
                )))
            }
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::fixtures::*;
    use crate::locus::unified_ideal;

    fn p(c: [i64; 4]) -> ProjectivePoint<Q> {
        point(c, &())
    }

    fn unified_holds(s: &ProjectionSetup<Q>, x: &ProjectivePoint<Q>, y: &ProjectivePoint<Q>) -> bool {
        let u = unified_ideal(s);
        let xy: Vec<Q> = x.coords().iter().chain(y.coords()).cloned().collect();
        u.generators().iter().all(|g| g.evaluate(&xy).unwrap().is_zero())
    }

    #[test]
    fn three_view_fibres() {
        let s = three_view_setup();
        let fwd = |c| conjugate_point(&s, &p(c), Direction::Forward).unwrap();
        assert_eq!(fwd(A), FibreResult::Point(p(A_IMAGE)));
        assert_eq!(fwd(B), FibreResult::Point(p(C_P1)));
        assert_eq!(fwd(L_Q3_OTHER), FibreResult::Empty);
        assert_eq!(fwd(C_Q1), FibreResult::Point(p(D)));
        assert_eq!(fwd(C_Q2), FibreResult::Point(p(C)));
        assert_eq!(fwd(E), FibreResult::Point(p(C_P2)));
        assert_eq!(fwd([1, 1, 1, 1]), FibreResult::NotInLocus);
        let bwd = |c| conjugate_point(&s, &p(c), Direction::Backward).unwrap();
        assert_eq!(bwd(A_IMAGE), FibreResult::Point(p(A)));
        assert_eq!(bwd(C_P1), FibreResult::Point(p(B)));
        assert_eq!(bwd(D), FibreResult::Point(p(C_Q1)));
        assert_eq!(bwd(C), FibreResult::Point(p(C_Q2)));
        assert_eq!(bwd(C_P2), FibreResult::Point(p(E)));
        for (x, y) in [(A, A_IMAGE), (B, C_P1), (C_Q1, D), (C_Q2, C), (E, C_P2)] {
            assert!(unified_holds(&s, &p(x), &p(y)));
        }
    }

    #[test]
    fn two_view_center_lines() {
        let s = two_view_setup();
        let line = |c, idx, dir| {
            center_fibre_two_views(&s, idx, &p(c), dir).unwrap().linear_space().unwrap().clone()
        };
        let r1 = line(C_Q1, 0, Direction::Forward);
        assert_eq!(r1.to_string(), "LinearSpace dim 1: 4y0+5y1+5y3=0, y2+y3=0");
        assert!(r1.contains(&p(C_P2)));
        let s1 = line(C_P1, 0, Direction::Backward);
        assert_eq!(s1.side(), Side::X);
        assert!(s1.contains(&p(C_Q2)));
        assert_eq!(s1.equations(), row_space_basis(&forms::<Q>(&S1, &())));
        // Every point of the line pairs with the center into the unified locus.
        for y in r1.points() {
            assert!(unified_holds(&s, &p(C_Q1), &y));
        }
        assert!(matches!(
            center_fibre_two_views(&s, 0, &p(C_Q2), Direction::Forward),
            Err(Error::NotInCenter)
        ));
        let span = center_fibre_union_span(&s, 0, Direction::Forward).unwrap();
        assert!(span.dim() <= 2 * 3 - 2 - 2 - 1);
        // The full conjugate query at a center gives the same line.
        assert_eq!(conjugate_point(&s, &p(C_Q1), Direction::Forward).unwrap(), FibreResult::LinearSpace(r1));
    }

    #[test]
    fn membership_cases() {
        let s = three_view_setup();
        let m = image_membership(&s, &p(B), Direction::Forward).unwrap();
        assert_eq!(m.case.to_string(), "in-centers-with-subcriticality(r=2)");
        assert!(m.member);
        let m = image_membership(&s, &p(L_Q3_OTHER), Direction::Forward).unwrap();
        assert!(!m.member);
        assert!(matches!(image_membership(&s, &p([1, 1, 1, 1]), Direction::Forward), Err(Error::NotOnLocus)));
    }

    #[test]
    fn nesting_on_three_views() {
        let s = three_view_setup();
        let r = nesting_check(&s, &[0, 1]).unwrap();
        assert!(r.verdict);
        assert!(nesting_check(&s, &[0, 1, 2]).unwrap().verdict);
    }

    #[test]
    fn singular_point_a() {
        let s = three_view_setup();
        let m = locus_matrix_at(&s, Side::X, &p(A)).unwrap();
        assert_eq!(rank_bareiss(&m), 6);
        let t = tangent_report(&s, &p(A), Direction::Forward).unwrap();
        assert!(t.tangent_dimension > 1);
        assert_eq!(t.tangent_dimension + t.jacobian_rank, 3);
    }

    #[test]
    fn quadric_sampling_and_roundtrips() {
        let s = two_view_setup();
        let ring = crate::locus::side_ring::<Q>(3, Side::X, &());
        let q = MultiPoly::parse(&ring, X_QUADRIC).unwrap();
        let pts = sample_points_on_quadric(&q, &p(C_Q1), 20, 42).unwrap();
        assert_eq!(pts.len(), 20);
        let report = roundtrip_check(&s, &pts).unwrap();
        assert!(report.all_succeeded());
        assert_eq!(report.distinct_images, 20);
        let flagged = roundtrip_check(&s, &[p(C_Q1)]).unwrap();
        assert!(matches!(flagged.records[0].outcome, RoundtripOutcome::NotApplicable { .. }));
        let cone = MultiPoly::parse(&ring, "x0x1-x2^2").unwrap();
        assert!(matches!(sample_points_on_quadric(&cone, &p([0, 0, 0, 1]), 3, 1), Err(Error::QuadricVertex)));
    }

    #[test]
    fn slice_counts_on_quadric() {
        let s = two_view_setup();
        let i = critical_ideal(&s, Side::X);
        assert_eq!(projective_slice_count(&i, 3).unwrap().count, 2);
    }

    #[test]
    fn tangent_dimension_at_center_point() {
        // A lies on the last Q-center and on the two-view quadric; the rank
        // flags hold there and the tangent space has dimension k - h_3 = 2.
        let t = tangent_report(&three_view_setup(), &p(A), Direction::Forward).unwrap();
        assert!(t.flags.as_ref().unwrap().hold(), "{:?}", t.flags);
        assert_eq!(t.tangent_dimension, 2);
    }

    #[test]
    fn center_image_is_a_conic_for_three_planar_views_of_p4() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s: ProjectionSetup<Q> = crate::scene::random_setup(4, &[2, 2, 2], 5, &mut rng, &()).unwrap();
        let map = center_image_map(&s, 2, 5).unwrap();
        assert_eq!(map.forms.len(), 5);
        assert!(map.forms.iter().all(|f| f.degree_info().total == Some(2)));
        // The conic spans a plane, and three spanning forms satisfy exactly
        // one quadratic relation.
        let coefficients = |f: &MultiPoly<Q>, d: u16| -> Vec<Q> {
            (0..=d).map(|i| f.coefficient(&Monomial::from_exponents(&[d - i, i]))).collect()
        };
        let plane = row_space_basis(&map.forms.iter().map(|f| coefficients(f, 2)).collect::<Vec<_>>());
        assert_eq!(plane.len(), 3);
        let ring = &map.parameter_ring;
        let g: Vec<MultiPoly<Q>> = plane
            .iter()
            .map(|c| {
                let terms = c.iter().enumerate().map(|(i, a)| (Monomial::from_exponents(&[2 - i as u16, i as u16]), a.clone()));
                MultiPoly::from_terms(ring, terms)
            })
            .collect();
        let mut products = Vec::new();
        for a in 0..3 {
            for b in a..3 {
                products.push(coefficients(&(&g[a] * &g[b]), 4));
            }
        }
        assert_eq!(products.len() - row_space_basis(&products).len(), 1);
    }

    #[test]
    fn equation_text_forms() {
        assert_eq!(linear_form_text::<Q>(&[Q::from_integer((-1).into()), Q::from_integer(3.into())], "x"), "-x0+3x1=0");
    }
}
