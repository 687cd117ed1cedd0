use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use serde_json::{json, Value};

use critloc::field::parse_rational;
use critloc::geometry::{
    biprojective_dimension, conjugate_point, image_membership, locus_matrix_at, mixed_slice_count, nesting_check,
    segre_slice_count, Direction, FibreResult,
};
use critloc::groebner::Budget;
use critloc::io::{ideal_to_json, parse_ideal, parse_setup, setup_to_json, Expected, FieldChoice};
use critloc::locus::{critical_ideal, expected_degree, expected_dimension, unified_ideal, Side};
use critloc::verify::{run_suite, Status};
use critloc::{Error, Field, Ideal, PolyRing, ProjectionSetup, ProjectivePoint, Ring, Zp, Q};

use crate::{FieldArgs, SideArg};

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    fn domain(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::InvalidCamera(_)
            | Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::IndexOutOfRange { .. } => 2,
            _ => 3,
        };
        CliError { code, message: e.to_string() }
    }
}

type CliResult = Result<ExitCode, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn field_choice(args: &FieldArgs, from_file: Option<FieldChoice>) -> Result<FieldChoice, CliError> {
    match &args.field {
        Some(f) => Ok(FieldChoice::parse(f, args.prime)?),
        None => Ok(from_file.unwrap_or(FieldChoice::Rational)),
    }
}

fn load_setup(path: &Path, args: &FieldArgs) -> Result<(ProjectionSetup<Q>, FieldChoice), CliError> {
    let (s, f) = parse_setup(&read(path)?)?;
    Ok((s, field_choice(args, f)?))
}

/// Runs `$body` with `$s` bound to the setup over the chosen field.
macro_rules! over_field {
    ($choice:expr, $setup:expr, |$s:ident| $body:expr) => {
        match $choice {
            FieldChoice::Rational => {
                let $s = $setup.clone();
                $body
            }
            FieldChoice::Prime(p) => {
                let $s = $setup.reduce_mod(p)?;
                $body
            }
        }
    };
}

fn json_out(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

pub fn build_ideal(setup: &Path, side: SideArg, out: Option<&Path>, field: &FieldArgs, as_json: bool) -> CliResult {
    let (s, choice) = load_setup(setup, field)?;
    over_field!(choice, s, |s| build_ideal_in(&s, side, out, as_json))
}

fn build_ideal_in<K: Field>(s: &ProjectionSetup<K>, side: SideArg, out: Option<&Path>, as_json: bool) -> CliResult {
    let ideal = match side {
        SideArg::X => critical_ideal(s, Side::X),
        SideArg::Y => critical_ideal(s, Side::Y),
        SideArg::U => unified_ideal(s),
    };
    let expected = Expected {
        dimension: expected_dimension(s),
        degree: if side == SideArg::U { None } else { expected_degree(s).ok() },
    };
    let text = ideal_to_json(&ideal, Some(expected));
    let degrees: Vec<String> = ideal
        .generators()
        .iter()
        .map(|g| {
            let info = g.degree_info();
            match info.bidegree {
                Some((a, b)) if side == SideArg::U => format!("({a},{b})"),
                _ => info.total.map_or("-".into(), |d| d.to_string()),
            }
        })
        .collect();
    let ring = ideal.ring();
    let ring_text = format!(
        "{} ({}) over {}",
        ring.vars().names().join(","),
        ideal.order().name(),
        K::label(ring.ctx())
    );
    let summary = if as_json {
        serde_json::to_string_pretty(&json!({
            "generators": ideal.generators().len(),
            "degrees": degrees,
            "ring": ring_text,
            "notes": ideal.notes(),
        }))
        .expect("serializable")
    } else {
        let mut t = format!("generators: {}\ndegrees: {}\nring: {}", ideal.generators().len(), degrees.join(" "), ring_text);
        for n in ideal.notes() {
            let _ = write!(t, "\nnote: {n}");
        }
        t
    };
    match out {
        Some(_) => {
            write_output(out, &text)?;
            println!("{summary}");
        }
        None => {
            println!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Limits for exact runs of `dim-degree`; past them the computation is
/// redone modulo the prime and labelled probabilistic.
const RATIONAL_BUDGET: Budget = Budget { max_pairs: Some(50_000), max_terms: Some(20_000) };

pub fn dim_degree(path: &Path, field: &FieldArgs, seed: u64, as_json: bool) -> CliResult {
    let doc = parse_ideal(&read(path)?)?;
    match field_choice(field, doc.field)? {
        FieldChoice::Rational => match doc.ideal.groebner_with_budget(RATIONAL_BUDGET) {
            Ok(_) => dim_degree_in(&doc.ideal, doc.expected, seed, as_json, "Q"),
            Err(Error::BudgetExceeded(what)) => {
                let p = field.prime;
                eprintln!("note: exact computation exceeded its budget ({what}); falling back to GF({p})");
                dim_degree_in(&reduce_ideal(&doc.ideal, p)?, doc.expected, seed, as_json, &format!("GF({p}), probabilistic"))
            }
            Err(e) => Err(e.into()),
        },
        FieldChoice::Prime(p) => dim_degree_in(&reduce_ideal(&doc.ideal, p)?, doc.expected, seed, as_json, &format!("GF({p})")),
    }
}

fn reduce_ideal(ideal: &Ideal<Q>, p: u32) -> Result<Ideal<Zp>, CliError> {
    let ring: Ring<Zp> = PolyRing::new(ideal.ring().vars().clone(), p);
    for g in ideal.generators() {
        if let Some((_, c)) = g.terms().find(|(_, c)| Zp::from_rational(c, &p).is_none()) {
            return Err(CliError::usage(format!("coefficient {c} has no image modulo {p}")));
        }
    }
    Ok(ideal.map_coefficients(&ring, |c| Zp::from_rational(c, &p).expect("checked")))
}

fn dim_degree_in<K: Field>(ideal: &Ideal<K>, expected: Option<Expected>, seed: u64, as_json: bool, label: &str) -> CliResult {
    let bigraded = ideal.ring().vars().split().is_some();
    let gb = ideal.groebner();
    let mut lines = vec![format!("field: {label}")];
    let mut report = json!({ "field": label, "expected": expected.map(|e| json!({"dimension": e.dimension, "degree": e.degree})) });
    if let Some(e) = expected {
        let deg = e.degree.map_or("n/a".to_string(), |d| d.to_string());
        lines.push(format!("expected: dim {} deg {deg}", e.dimension));
    }
    let empty = gb.is_unit() || if bigraded { biprojective_dimension(ideal)?.is_none() } else { gb.dimension().is_none() };
    if empty {
        lines.push("actual: empty locus".into());
        report["actual"] = json!("empty locus");
    } else if bigraded {
        let dim = biprojective_dimension(ideal)?.expect("nonempty");
        let segre = segre_slice_count(ideal, dim, seed)?;
        let multidegree = (0..=dim)
            .map(|a| mixed_slice_count(ideal, a, dim - a, seed).map(|c| c.count))
            .collect::<Result<Vec<_>, _>>()?;
        lines.push(format!("actual: dim {dim} deg {} (interpretation: {}; seed {seed})", segre.count, segre.interpretation));
        lines.push(format!(
            "multidegree: {} (x-hyperplanes from {dim} down to 0)",
            multidegree.iter().rev().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
        ));
        report["actual"] = json!({"dimension": dim, "degree": segre.count, "interpretation": segre.interpretation,
            "multidegree": multidegree.iter().rev().collect::<Vec<_>>(), "seed": seed});
        if let Some(e) = expected {
            flag_mismatch(&mut lines, e, dim, None);
        }
    } else {
        let dim = gb.dimension().expect("nonempty");
        let deg = gb.degree()?;
        lines.push(format!("actual: dim {dim} deg {deg}"));
        report["actual"] = json!({"dimension": dim, "degree": deg});
        if let Some(e) = expected {
            flag_mismatch(&mut lines, e, dim, Some(deg));
        }
    }
    if as_json {
        report["lines"] = json!(lines);
        json_out(&report);
    } else {
        println!("{}", lines.join("\n"));
    }
    Ok(ExitCode::SUCCESS)
}

fn flag_mismatch(lines: &mut Vec<String>, e: Expected, dim: usize, deg: Option<u64>) {
    if e.dimension != dim as i64 {
        lines.push(format!("MISMATCH: dimension expected {} actual {dim}", e.dimension));
    }
    if let (Some(a), Some(b)) = (e.degree, deg) {
        if a != b && e.dimension == dim as i64 {
            lines.push(format!("MISMATCH: degree expected {a} actual {b}"));
        }
    }
}

fn parse_point(text: &str) -> Result<Vec<Q>, CliError> {
    text.split(',')
        .map(|t| parse_rational(t.trim()).ok_or_else(|| CliError::usage(format!("bad coordinate '{}'", t.trim()))))
        .collect()
}

pub fn fiber(setup: &Path, point: &str, direction: &str, field: &FieldArgs, as_json: bool) -> CliResult {
    let (s, choice) = load_setup(setup, field)?;
    let coords = parse_point(point)?;
    if coords.len() != s.k() + 1 {
        return Err(CliError::usage(format!("point needs {} coordinates, got {}", s.k() + 1, coords.len())));
    }
    let dir: Direction = direction.parse()?;
    over_field!(choice, s, |s| fiber_in(&s, &coords, dir, as_json))
}

fn fiber_in<K: Field>(s: &ProjectionSetup<K>, coords: &[Q], dir: Direction, as_json: bool) -> CliResult {
    let ctx = s.ctx();
    let mapped = coords
        .iter()
        .map(|c| K::from_rational(c, &ctx).ok_or_else(|| CliError::usage(format!("coordinate {c} has no image in the field"))))
        .collect::<Result<Vec<K>, _>>()?;
    let x = ProjectivePoint::new(mapped).map_err(|_| CliError::usage("the zero vector is not a projective point"))?;
    let result = conjugate_point(s, &x, dir)?;
    let source = dir.source();
    if result == FibreResult::NotInLocus {
        return Err(CliError::domain(format!("point {x} is not on the critical locus {source}")));
    }
    let oriented = if dir == Direction::Forward { s.clone() } else { s.swapped() };
    let membership = image_membership(s, &x, dir)?;
    let rank = critloc::linalg::rank_bareiss(&locus_matrix_at(&oriented, Side::X, &x)?);
    let centers: Vec<usize> = oriented.q_centers_containing(&x).iter().map(|j| j + 1).collect();
    if as_json {
        let mut r = json!({
            "input": x.to_string(),
            "direction": dir.to_string(),
            "variant": result.variant_name(),
            "case": membership.case.to_string(),
            "locus_matrix_rank": rank,
            "centers_containing_input": centers,
        });
        match &result {
            FibreResult::Point(y) => r["point"] = json!(y.to_string()),
            FibreResult::LinearSpace(l) => {
                r["dimension"] = json!(l.dim());
                r["equations"] = json!(l.equation_strings());
            }
            _ => {}
        }
        json_out(&r);
    } else {
        println!("{result}");
        println!("case: {}", membership.case);
        println!("locus matrix rank at input: {rank}");
        if !centers.is_empty() {
            println!(
                "input lies in the centers of views {}",
                centers.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn verify(suite: &str, seed: u64, as_json: bool) -> CliResult {
    let report = run_suite(suite, seed).map_err(|e| CliError::usage(e.to_string()))?;
    if as_json {
        let checks: Vec<Value> = report
            .checks
            .iter()
            .map(|c| {
                json!({"name": c.name, "status": c.status.to_string(), "expected": c.expected, "got": c.got,
                    "note": c.note, "elapsed_ms": c.elapsed.as_millis() as u64})
            })
            .collect();
        json_out(&json!({"suite": report.suite, "seed": seed, "passed": report.passed(), "checks": checks}));
    } else {
        println!("suite: {} (seed {seed})", report.suite);
        for c in &report.checks {
            println!("{c}");
        }
        println!(
            "summary: {} passed, {} failed, {} skipped",
            report.count(Status::Pass),
            report.count(Status::Fail),
            report.count(Status::Skip)
        );
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

fn parse_indices(text: &str, what: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::usage(format!("bad {what} entry '{}'", t.trim())))
        })
        .collect()
}

pub fn nesting(setup: &Path, subset: &str, field: &FieldArgs, as_json: bool) -> CliResult {
    let (s, choice) = load_setup(setup, field)?;
    let mut idx = parse_indices(subset, "subset")?;
    idx.sort_unstable();
    if idx.is_empty() || idx[0] == 0 || idx.windows(2).any(|w| w[0] == w[1]) || *idx.last().expect("nonempty") > s.n() {
        return Err(CliError::usage(format!("subset must list distinct view indices in 1..={}", s.n())));
    }
    let zero_based: Vec<usize> = idx.iter().map(|i| i - 1).collect();
    over_field!(choice, s, |s| nesting_in(&s, &zero_based, as_json))
}

fn nesting_in<K: Field>(s: &ProjectionSetup<K>, subset: &[usize], as_json: bool) -> CliResult {
    let r = nesting_check(s, subset)?;
    let shown: Vec<String> = r.subset.iter().map(|i| (i + 1).to_string()).collect();
    let nonzero: Vec<String> = r.normal_forms.iter().filter(|f| !f.is_zero()).map(|f| f.to_text()).collect();
    if as_json {
        json_out(&json!({"subset": r.subset.iter().map(|i| i + 1).collect::<Vec<_>>(), "verdict": r.verdict,
            "generators": r.normal_forms.len(), "nonzero_normal_forms": nonzero}));
    } else {
        println!("subset: {{{}}}", shown.join(","));
        println!("verdict: {}", r.verdict);
        println!("generators checked: {}", r.normal_forms.len());
        for f in &nonzero {
            println!("nonzero normal form: {f}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn random_setup(k: usize, h: &str, seed: u64, bound: i64, out: Option<&Path>) -> CliResult {
    let hs = parse_indices(h, "h")?;
    if k == 0 || hs.is_empty() || hs.iter().any(|&x| x == 0 || x >= k) || bound < 1 {
        return Err(CliError::usage("need k >= 1, bound >= 1 and every h in 1..k"));
    }
    let s: ProjectionSetup<Q> = critloc::scene::seeded_random_setup(k, &hs, bound, seed, &())?;
    write_output(out, &setup_to_json(&s))?;
    eprintln!("seed: {seed}");
    Ok(ExitCode::SUCCESS)
}
