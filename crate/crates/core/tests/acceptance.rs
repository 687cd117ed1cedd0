//! Acceptance criteria 1–13 on the bundled worked examples.
//!
//! Prints one `PASS`/`FAIL` line per criterion together with its time limit.
//! Criterion 13 reads the unified residual degree as a Segre slice count and
//! is known to disagree (10 instead of 5); the test pins that observation
//! rather than hiding it. Runs without the test harness so the report is
//! always printed.

use std::time::{Duration, Instant};

use critloc::fixtures::*;
use critloc::geometry::*;
use critloc::groebner::{projective_points, saturation};
use critloc::linalg::{det_scalar, maximal_minors, rank_kernel, row_space_basis};
use critloc::locus::{critical_ideal, formula_degree, formula_dimension, side_ring, unified_ideal};
use critloc::verify::{residual_samples, run_suite, unified_shape, Status};
use critloc::{Field, Ideal, MonomialOrder, MultiPoly, ProjectivePoint, Side, DEFAULT_PRIME, Q};

struct Line {
    number: usize,
    passed: bool,
    detail: String,
}

fn criterion(number: usize, title: &str, limit: Duration, body: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (ok, detail) = body();
    let elapsed = start.elapsed();
    let passed = ok && elapsed <= limit;
    println!(
        "{} {:>2} {title}: {detail} ({} ms, limit {} ms)",
        if passed { "PASS" } else { "FAIL" },
        number,
        elapsed.as_millis(),
        limit.as_millis()
    );
    Line { number, passed, detail }
}

fn q(c: [i64; 4]) -> ProjectivePoint<Q> {
    point(c, &())
}

fn qv(c: &[i64]) -> Vec<Q> {
    c.iter().map(|&v| Q::from_i64(v, &())).collect()
}

fn vanishes<K: Field>(i: &Ideal<K>, p: &[K]) -> bool {
    i.generators().iter().all(|g| g.evaluate(p).unwrap().is_zero())
}

fn dim_deg<K: Field>(i: &Ideal<K>) -> (Option<usize>, u64) {
    let gb = i.groebner();
    (gb.dimension(), gb.degree().unwrap_or(0))
}

/// The printed quadric equals the computed generator up to a scalar, and,
/// independently, det M_X(x) / quadric(x) is the same nonzero constant at
/// many integer points.
fn golden_quadric(side: Side, printed: &str) -> (bool, String) {
    let s = two_view_setup();
    let i = critical_ideal(&s, side);
    let golden = MultiPoly::parse(i.ring(), printed).unwrap();
    let o = MonomialOrder::Grevlex;
    let principal = i.generators().len() == 1 && i.generators()[0].monic(o) == golden.monic(o);
    let mut ratio: Option<Q> = None;
    let mut consistent = true;
    for a in -2..=2i64 {
        for b in -1..=1i64 {
            let x = qv(&[1, a, b, a * b + 2]);
            let g = golden.evaluate(&x).unwrap();
            let p = ProjectivePoint::new(x).unwrap();
            let oriented = if side == Side::X { s.clone() } else { s.swapped() };
            let d = det_scalar(&locus_matrix_at(&oriented, Side::X, &p).unwrap()).unwrap();
            if g.is_zero() {
                consistent &= d.is_zero();
                continue;
            }
            let r = d / g;
            consistent &= !r.is_zero() && ratio.as_ref().map_or(true, |x| *x == r);
            ratio = Some(r);
        }
    }
    (principal && consistent, format!("generator matches: {principal}, determinant ratio constant: {consistent}"))
}

fn main() {
    let two = two_view_setup();
    let three = three_view_setup();
    let mut lines = Vec::new();

    lines.push(criterion(1, "golden quadrics", Duration::from_secs(1), || {
        let (x, dx) = golden_quadric(Side::X, X_QUADRIC);
        let (y, dy) = golden_quadric(Side::Y, Y_QUADRIC);
        (x && y, format!("X [{dx}], Y [{dy}]"))
    }));

    lines.push(criterion(2, "center membership", Duration::from_secs(1), || {
        let ix = critical_ideal(&two, Side::X);
        let iy = critical_ideal(&two, Side::Y);
        let two_ok = [C_Q1, C_Q2].iter().all(|c| vanishes(&ix, &qv(c))) && [C_P1, C_P2].iter().all(|c| vanishes(&iy, &qv(c)));
        let ix3 = critical_ideal(&three, Side::X);
        let mut line_pts: Vec<Vec<Q>> = vec![qv(&A), qv(&B), qv(&L_Q3_OTHER), qv(&[3, 0, -7, 0])];
        line_pts.extend([C_Q1, C_Q2].iter().map(|c| qv(c)));
        let three_ok = line_pts.iter().all(|p| vanishes(&ix3, p));
        (two_ok && three_ok, format!("two views: {two_ok}, three views (C_Q1, C_Q2, L_Q3): {three_ok}"))
    }));

    lines.push(criterion(3, "unified ideal shape", Duration::from_secs(5), || {
        let shape = unified_shape(&unified_ideal(&two).minimal_generators());
        (shape == "2 quadrics + 6 bidegree-(1,1) forms", shape)
    }));

    lines.push(criterion(4, "dimension/degree formulas", Duration::from_millis(100), || {
        let got: Vec<(i64, u64)> = [(3, vec![2, 2]), (3, vec![2, 2, 1]), (4, vec![2, 2, 2])]
            .iter()
            .map(|(k, hs)| (formula_dimension(*k, hs), formula_degree(*k, hs).unwrap()))
            .collect();
        (got == vec![(2, 2), (1, 6), (2, 6)], format!("{got:?}"))
    }));

    lines.push(criterion(5, "Groebner dimension/degree and residual curves", Duration::from_secs(60), || {
        let mut ok = true;
        let mut parts = Vec::new();
        let sp = three.reduce_mod(DEFAULT_PRIME).unwrap();
        for side in [Side::X, Side::Y] {
            let full = dim_deg(&critical_ideal(&three, side));
            let start = Instant::now();
            let modular = dim_deg(&critical_ideal(&sp, side));
            let residual = residual_ideal(&three, side, 2).unwrap();
            let rdd = dim_deg(&residual);
            let residual_p = dim_deg(&residual_ideal(&sp, side, 2).unwrap());
            let modular_fast = start.elapsed() < Duration::from_secs(5);
            let n = residual_matrix::<Q>(side, &());
            let ring = residual.ring().clone();
            let minors = Ideal::new(&ring, maximal_minors(&n).into_iter().map(|(_, p)| p).collect()).unwrap();
            let maximal = Ideal::new(&ring, (0..4).map(|v| MultiPoly::var(&ring, v)).collect()).unwrap();
            let printed = saturation(&minors, &maximal).unwrap();
            let same = residual.same_ideal(&printed).unwrap();
            ok &= full == (Some(1), 6) && modular == full && rdd == (Some(1), 5) && residual_p == rdd && same && modular_fast;
            parts.push(format!("{side}3 {full:?} (GF(p) {modular:?}), residual {rdd:?} (GF(p) {residual_p:?}), equals printed minors: {same}"));
        }
        (ok, parts.join("; "))
    }));

    lines.push(criterion(6, "intersection points", Duration::from_secs(10), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for (side, line, want) in [(Side::X, L_Q3, [A, B]), (Side::Y, L_P3, [C, D])] {
            let r = residual_ideal(&three, side, 2).unwrap();
            let mut gens = r.generators().to_vec();
            gens.extend(Ideal::from_linear_forms(r.ring(), &forms::<Q>(&line, &()), 0).generators().iter().cloned());
            let mut got: Vec<String> = projective_points(&Ideal::new(r.ring(), gens).unwrap()).unwrap().iter().map(|p| p.to_string()).collect();
            got.sort();
            let mut exp: Vec<String> = want.iter().map(|c| q(*c).to_string()).collect();
            exp.sort();
            ok &= got == exp;
            parts.push(got.join(" "));
        }
        (ok, parts.join("; "))
    }));

    lines.push(criterion(7, "fibre facts (a)-(i)", Duration::from_secs(10), || {
        let mut ok = true;
        for c in [L_Q3_OTHER, [1, 0, -1, 0], [0, 0, 1, 0]] {
            ok &= conjugate_point(&three, &q(c), Direction::Forward).unwrap() == FibreResult::Empty;
        }
        for c in [[1, 0, 0, 0], [1, 1, 3, -3], [2, 1, 3, -3]] {
            ok &= conjugate_point(&three, &q(c), Direction::Backward).unwrap() == FibreResult::Empty;
        }
        let empties = ok;
        let mut pairs = 0;
        for (x, y) in [(A, A_IMAGE), (B, C_P1), (C_Q1, D), (C_Q2, C), (E, C_P2)] {
            let f = conjugate_point(&three, &q(x), Direction::Forward).unwrap();
            let b = conjugate_point(&three, &q(y), Direction::Backward).unwrap();
            if f.point() == Some(&q(y)) && b.point() == Some(&q(x)) {
                pairs += 1;
            }
        }
        let mut unique = 0;
        for side in [Side::X, Side::Y] {
            let (oriented, pts) = residual_samples(side, 10, 7).unwrap();
            unique += pts.iter().filter(|p| conjugate_point(&oriented, p, Direction::Forward).unwrap().point().is_some()).count();
        }
        let exact = X_RESIDUAL_RATIONAL.iter().filter(|c| conjugate_point(&three, &q(**c), Direction::Forward).unwrap().point().is_some()).count();
        ok &= pairs == 5 && unique == 20 && exact == 3;
        (ok, format!("empty on center lines: {empties}, conjugate pairs 5/{pairs}, unique at 20/{unique} GF(p) samples and 3/{exact} rational points"))
    }));

    lines.push(criterion(8, "two-view center fibres", Duration::from_secs(1), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for (name, center, idx, dir, printed, incident) in [
            ("r1", C_Q1, 0, Direction::Forward, R1, C_P2),
            ("r2", C_Q2, 1, Direction::Forward, R2, C_P1),
            ("s1", C_P1, 0, Direction::Backward, S1, C_Q2),
            ("s2", C_P2, 1, Direction::Backward, S2, C_Q1),
        ] {
            let res = center_fibre_two_views(&two, idx, &q(center), dir).unwrap();
            let l = res.linear_space().expect("a line");
            let same = l.equations() == row_space_basis(&forms::<Q>(&printed, &()));
            let good = same && l.dim() == 1 && l.contains(&q(incident));
            ok &= good;
            parts.push(format!("{name}: {good}"));
        }
        (ok, parts.join(", "))
    }));

    lines.push(criterion(9, "nesting {1,2}", Duration::from_secs(30), || {
        let r = nesting_check(&three, &[0, 1]).unwrap();
        (r.verdict, format!("verdict {}", r.verdict))
    }));

    lines.push(criterion(10, "singular-point rank", Duration::from_secs(5), || {
        let (rank, _) = rank_kernel(&locus_matrix_at(&three, Side::X, &q(A)).unwrap());
        let t = tangent_report(&three, &q(A), Direction::Forward).unwrap();
        (rank == 6 && t.tangent_dimension > 1, format!("rank {rank}, tangent dimension {}", t.tangent_dimension))
    }));

    lines.push(criterion(11, "round trips", Duration::from_secs(10), || {
        let ring = side_ring::<Q>(3, Side::X, &());
        let quadric = MultiPoly::parse(&ring, X_QUADRIC).unwrap();
        let pts = sample_points_on_quadric(&quadric, &q(C_Q1), 20, 42).unwrap();
        let off = pts.iter().all(|p| two.q_centers_containing(p).is_empty());
        let r2 = roundtrip_check(&two, &pts).unwrap();
        let (oriented, rpts) = residual_samples(Side::X, 10, 42).unwrap();
        let r3 = roundtrip_check(&oriented, &rpts).unwrap();
        let ok = off && r2.all_succeeded() && r2.distinct_images == 20 && r3.all_succeeded() && r3.distinct_images == 10 && rpts.len() == 10;
        (
            ok,
            format!(
                "quadric {}/20 with {} distinct images; residual curve (GF(p)) {}/10 with {} distinct images",
                r2.successes(),
                r2.distinct_images,
                r3.successes(),
                r3.distinct_images
            ),
        )
    }));

    lines.push(criterion(12, "property suite", Duration::from_secs(60), || {
        let report = run_suite("properties", 42).unwrap();
        let wanted = [
            "Buchberger self-check on bundled ideals",
            "Euler identity",
            "rank-nullity",
            "quotient law",
            "Bareiss determinant vs cofactor expansion",
            "nesting on random GF(p) setups",
        ];
        let failed: Vec<&str> = wanted
            .iter()
            .copied()
            .filter(|n| report.check(n).map_or(true, |c| c.status != Status::Pass))
            .collect();
        (failed.is_empty(), if failed.is_empty() { format!("{} checks pass", wanted.len()) } else { format!("failed: {}", failed.join(", ")) })
    }));

    lines.push(criterion(13, "unified residual dimension and Segre degree", Duration::from_secs(120), || {
        let u = residual_unified_ideal(&three.reduce_mod(DEFAULT_PRIME).unwrap(), 2).unwrap();
        let dim = biprojective_dimension(&u).unwrap();
        let segre = segre_slice_count(&u, 1, 42).unwrap();
        let px = mixed_slice_count(&u, 1, 0, 42).unwrap();
        let py = mixed_slice_count(&u, 0, 1, 42).unwrap();
        (
            dim == Some(1) && segre.count == 5,
            format!(
                "dimension {dim:?}, Segre count {} [{}], projection degrees ({},{})",
                segre.count, segre.interpretation, px.count, py.count
            ),
        )
    }));

    for l in &lines[..12] {
        assert!(l.passed, "criterion {} failed: {}", l.number, l.detail);
    }
    // The unified residual locus has dimension 1 and both projections have
    // degree 5, but the Segre slice count is 10 = 5 + 5.
    let last = &lines[12];
    assert!(!last.passed);
    assert!(last.detail.starts_with("dimension Some(1), Segre count 10 ["), "{}", last.detail);
    assert!(last.detail.ends_with("projection degrees (5,5)"), "{}", last.detail);
}
