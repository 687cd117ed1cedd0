//! Randomized invariants of the polynomial, linear-algebra, Gröbner and
//! locus layers.

use proptest::prelude::*;

use critloc::field::int;
use critloc::geometry::*;
use critloc::groebner::{ideal_quotient, saturation};
use critloc::linalg::{det_scalar, rank_bareiss, rank_kernel, Matrix};
use critloc::locus::{critical_ideal, formula_degree, formula_dimension, unified_ideal};
use critloc::scene::{seeded_random_setup, View};
use critloc::{Camera, Field, Ideal, Monomial, MultiPoly, PolyRing, ProjectionSetup, ProjectivePoint, Ring, Side, VarSet, Zp, DEFAULT_PRIME, Q};

fn qring(n: usize) -> Ring<Q> {
    PolyRing::new(VarSet::indexed("x", n), ())
}

fn pring(n: usize) -> Ring<Zp> {
    PolyRing::new(VarSet::indexed("x", n), DEFAULT_PRIME)
}

/// Terms as (coefficient, exponent vector).
fn terms(nvars: usize, max_exp: u16, max_terms: usize) -> impl Strategy<Value = Vec<(i64, Vec<u16>)>> {
    prop::collection::vec((-5i64..=5, prop::collection::vec(0..=max_exp, nvars)), 0..=max_terms)
}

fn poly<K: Field>(ring: &Ring<K>, t: &[(i64, Vec<u16>)]) -> MultiPoly<K> {
    MultiPoly::from_terms(ring, t.iter().map(|(c, e)| (Monomial::from_exponents(e), K::from_i64(*c, ring.ctx()))))
}

/// A homogeneous polynomial of degree `d` in 4 variables.
fn homogeneous(ring: &Ring<Q>, d: u16, coeffs: &[i64]) -> MultiPoly<Q> {
    let mut monos = Vec::new();
    for a in 0..=d {
        for b in 0..=d - a {
            for c in 0..=d - a - b {
                monos.push(Monomial::from_exponents(&[a, b, c, d - a - b - c]));
            }
        }
    }
    MultiPoly::from_terms(ring, monos.into_iter().zip(coeffs).map(|(m, c)| (m, int(*c))))
}

fn matrix(rows: usize, cols: usize, entries: &[i64]) -> Matrix<Q> {
    Matrix::from_rows(entries.chunks(cols).take(rows).map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
}

fn laplace(m: &[Vec<Q>]) -> Q {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut total = int(0);
    for c in 0..m.len() {
        let minor: Vec<Vec<Q>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect()).collect();
        let term = &m[0][c] * laplace(&minor);
        total = if c % 2 == 0 { total + term } else { total - term };
    }
    total
}

fn scaled_camera(c: &Camera<Zp>, s: i64) -> Camera<Zp> {
    let f = Zp::new(s, DEFAULT_PRIME);
    let rows = c.matrix().to_rows().into_iter().map(|r| r.iter().map(|v| v.mul(&f)).collect()).collect();
    Camera::new(Matrix::from_rows(rows).unwrap()).unwrap()
}

fn dim_deg<K: Field>(i: &Ideal<K>) -> (Option<usize>, Option<u64>) {
    let gb = i.groebner();
    (gb.dimension(), gb.degree().ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in terms(3, 3, 5), b in terms(3, 3, 5), c in terms(3, 3, 5)) {
        let r = qring(3);
        let (f, g, h) = (poly(&r, &a), poly(&r, &b), poly(&r, &c));
        prop_assert_eq!(&(&f + &g) * &h, &(&f * &h) + &(&g * &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert!((&f - &f).is_zero());
        let at = [int(2), int(-1), int(3)];
        let lhs = (&f * &g).evaluate(&at).unwrap();
        prop_assert_eq!(lhs, f.evaluate(&at).unwrap() * g.evaluate(&at).unwrap());
    }

    #[test]
    fn text_round_trip(a in terms(3, 3, 6)) {
        let r = qring(3);
        let f = poly(&r, &a);
        prop_assert_eq!(MultiPoly::parse(&r, &f.to_text()).unwrap(), f);
    }

    #[test]
    fn euler_identity(d in 1u16..=4, coeffs in prop::collection::vec(-6i64..=6, 35)) {
        let r = qring(4);
        let f = homogeneous(&r, d, &coeffs);
        let mut sum = MultiPoly::zero(&r);
        for v in 0..4 {
            sum = &sum + &(&MultiPoly::var(&r, v) * &f.partial_derivative(v).unwrap());
        }
        prop_assert_eq!(sum, f.scale(&int(d as i64)));
    }

    #[test]
    fn rank_nullity(rows in 1usize..=5, cols in 1usize..=6, entries in prop::collection::vec(-3i64..=3, 30)) {
        let m = matrix(rows, cols, &entries);
        let (rank, kernel) = rank_kernel(&m);
        prop_assert_eq!(rank, rank_bareiss(&m));
        prop_assert_eq!(rank + kernel.dim(), cols);
        for v in &kernel.vectors {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn bareiss_matches_cofactor_expansion(n in 1usize..=4, entries in prop::collection::vec(-9i64..=9, 16)) {
        let m = matrix(n, n, &entries);
        prop_assert_eq!(det_scalar(&m).unwrap(), laplace(&m.to_rows()));
    }

    #[test]
    fn groebner_basis_invariants(gens in prop::collection::vec(terms(3, 2, 3), 1..=3), extra in terms(3, 2, 3)) {
        let r = pring(3);
        let polys: Vec<_> = gens.iter().map(|t| poly(&r, t)).collect();
        let i = Ideal::new(&r, polys.clone()).unwrap();
        let gb = i.groebner();
        prop_assert!(gb.self_check());
        for g in &polys {
            prop_assert!(i.contains(g).unwrap());
        }
        // A combination of generators is a member.
        let h = poly(&r, &extra);
        let combo = polys.iter().fold(MultiPoly::zero(&r), |acc, g| &acc + &(&h * g));
        prop_assert!(i.contains(&combo).unwrap());
        // Same ideal regardless of generator order.
        let mut rev = polys.clone();
        rev.reverse();
        prop_assert!(i.same_ideal(&Ideal::new(&r, rev).unwrap()).unwrap());
    }

    #[test]
    fn quotient_and_saturation_chain(gens in prop::collection::vec(terms(3, 2, 3), 1..=2), j in terms(3, 1, 2)) {
        let r = pring(3);
        let i = Ideal::new(&r, gens.iter().map(|t| poly(&r, t)).collect()).unwrap();
        let jp = poly(&r, &j);
        prop_assume!(!jp.is_zero());
        let jj = Ideal::new(&r, vec![jp.clone()]).unwrap();
        let quot = ideal_quotient(&i, &jj).unwrap();
        let sat = saturation(&i, &jj).unwrap();
        for f in quot.generators() {
            prop_assert!(i.contains(&(f * &jp)).unwrap());
            prop_assert!(sat.contains(f).unwrap());
        }
        for g in i.generators() {
            prop_assert!(quot.contains(g).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn locus_invariant_under_view_order_and_scaling(seed in any::<u64>(), s1 in 1i64..50, s2 in 1i64..50) {
        let s: ProjectionSetup<Zp> = seeded_random_setup(3, &[2, 2, 1], 10, seed, &DEFAULT_PRIME).unwrap();
        let base = dim_deg(&critical_ideal(&s, Side::X));
        let permuted = ProjectionSetup::new([2, 0, 1].iter().map(|&j| s.view(j).clone()).collect()).unwrap();
        prop_assert_eq!(dim_deg(&critical_ideal(&permuted, Side::X)), base);
        let views = s
            .views()
            .iter()
            .zip([s1, s2, 1])
            .map(|(v, f)| View { q: scaled_camera(&v.q, f), p: scaled_camera(&v.p, f + 1) })
            .collect();
        let scaled = ProjectionSetup::new(views).unwrap();
        prop_assert!(critical_ideal(&scaled, Side::X).same_ideal(&critical_ideal(&s, Side::X)).unwrap());
        // Generic setups attain the expected dimension and degree.
        prop_assert_eq!(base, (Some(formula_dimension(3, &[2, 2, 1]) as usize), Some(formula_degree(3, &[2, 2, 1]).unwrap())));
    }

    #[test]
    fn nesting_holds_on_random_setups(seed in any::<u64>()) {
        let s: ProjectionSetup<Zp> = seeded_random_setup(3, &[2, 2, 1], 10, seed, &DEFAULT_PRIME).unwrap();
        prop_assert!(nesting_check(&s, &[0, 1]).unwrap().verdict);
    }

    #[test]
    fn conjugates_satisfy_the_unified_ideal(seed in any::<u64>()) {
        let s: ProjectionSetup<Zp> = seeded_random_setup(3, &[2, 2], 10, seed, &DEFAULT_PRIME).unwrap();
        let quadric = critical_ideal(&s, Side::X).generators()[0].clone();
        let base = s.view(0).q.center().as_point().unwrap();
        let pts = sample_points_on_quadric(&quadric, &base, 4, seed).unwrap();
        let u = unified_ideal(&s);
        for x in pts.iter().filter(|p| s.q_centers_containing(p).is_empty()) {
            let f = conjugate_point(&s, x, Direction::Forward).unwrap();
            let y = f.point().expect("unique conjugate off the centers");
            let mut xy = x.coords().to_vec();
            xy.extend_from_slice(y.coords());
            prop_assert!(u.generators().iter().all(|g| g.evaluate(&xy).unwrap().is_zero()));
            // Membership in the image is equivalent to a nonempty fibre.
            prop_assert!(image_membership(&s, y, Direction::Backward).unwrap().member);
            let back = conjugate_point(&s, y, Direction::Backward).unwrap();
            prop_assert_eq!(back.point(), Some(x));
        }
    }

    #[test]
    fn points_off_the_locus_are_rejected(seed in any::<u64>(), c in prop::collection::vec(-20i64..=20, 4)) {
        let s: ProjectionSetup<Zp> = seeded_random_setup(3, &[2, 2], 10, seed, &DEFAULT_PRIME).unwrap();
        let Ok(x) = ProjectivePoint::from_i64(&c, &DEFAULT_PRIME) else { return Ok(()) };
        let on = critical_ideal(&s, Side::X).generators()[0].evaluate(x.coords()).unwrap().is_zero();
        let f = conjugate_point(&s, &x, Direction::Forward).unwrap();
        prop_assert_eq!(on, f != FibreResult::NotInLocus);
    }
}
