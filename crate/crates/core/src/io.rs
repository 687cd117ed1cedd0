//! JSON formats for projection setups and ideals.
//!
//! Setup: `{"k": 3, "views": [{"h": 2, "P": [["1","0",..],..], "Q": [..]}, ..]}`
//! with rational entries written as strings ("a/b") or integers, and an
//! optional `"field": "Q" | "GF(p)"`.
//!
//! Ideal: `{"ring": {"vars": [..], "order": "grevlex"}, "generators": [..]}`
//! with generators in the polynomial text format.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{is_supported_prime, parse_rational, primitive_integer_vector, Field, Q};
use crate::groebner::Ideal;
use crate::linalg::Matrix;
use crate::monomial::MonomialOrder;
use crate::poly::{MultiPoly, PolyRing, VarSet};
use crate::scene::{Camera, ProjectionSetup, View};

/// Coefficient field requested for a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Rational,
    Prime(u32),
}

impl FieldChoice {
    /// Accepts "Q", "GF(p)", "GFp" (with `default_prime`) and "GF<p>".
    pub fn parse(s: &str, default_prime: u32) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldChoice::Rational);
        }
        let rest = t
            .strip_prefix("GF")
            .or_else(|| t.strip_prefix("gf"))
            .ok_or_else(|| Error::Parse(format!("unknown field '{s}'")))?;
        let digits = rest.trim_start_matches('(').trim_end_matches(')');
        let p = if digits.is_empty() || digits.eq_ignore_ascii_case("p") {
            default_prime
        } else {
            digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime in field '{s}'")))?
        };
        if !is_supported_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not a supported prime")));
        }
        Ok(FieldChoice::Prime(p))
    }
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Rational => write!(f, "Q"),
            FieldChoice::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ViewFile {
    h: usize,
    #[serde(rename = "P")]
    p: Vec<Vec<Value>>,
    #[serde(rename = "Q")]
    q: Vec<Vec<Value>>,
}

#[derive(Serialize, Deserialize)]
struct SetupFile {
    k: usize,
    views: Vec<ViewFile>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    field: Option<String>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn entry(v: &Value) -> Result<Q> {
    let parsed = match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n.as_i64().and_then(|i| parse_rational(&i.to_string())),
        _ => None,
    };
    parsed.ok_or_else(|| Error::Parse(format!("matrix entry {v} is not a rational number")))
}

fn matrix(rows: &[Vec<Value>]) -> Result<Matrix<Q>> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(entry).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?,
    )
}

fn camera(rows: &[Vec<Value>], k: usize, h: usize, label: &str) -> Result<Camera<Q>> {
    let m = matrix(rows)?;
    if m.rows() != h + 1 || m.cols() != k + 1 {
        return Err(Error::InvalidCamera(format!(
            "{label}: expected a {}x{} matrix, got {}x{}",
            h + 1,
            k + 1,
            m.rows(),
            m.cols()
        )));
    }
    Camera::new(m).map_err(|e| match e {
        Error::DegenerateCamera { rank, expected } => {
            Error::InvalidCamera(format!("{label}: degenerate camera (rank {rank} < {expected})"))
        }
        other => other,
    })
}

/// Parses a setup file; returns the setup and the optional field selector.
pub fn parse_setup(json: &str) -> Result<(ProjectionSetup<Q>, Option<FieldChoice>)> {
    let f: SetupFile = serde_json::from_str(json).map_err(json_error)?;
    let views = f
        .views
        .iter()
        .enumerate()
        .map(|(j, v)| {
            Ok(View {
                q: camera(&v.q, f.k, v.h, &format!("view {} Q", j + 1))?,
                p: camera(&v.p, f.k, v.h, &format!("view {} P", j + 1))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let field = f
        .field
        .as_deref()
        .map(|s| FieldChoice::parse(s, crate::field::DEFAULT_PRIME))
        .transpose()?;
    Ok((ProjectionSetup::new(views)?, field))
}

fn matrix_json(m: &Matrix<Q>) -> Vec<Vec<Value>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|x| Value::String(x.to_string())).collect())
        .collect()
}

pub fn setup_to_json(s: &ProjectionSetup<Q>) -> String {
    let f = SetupFile {
        k: s.k(),
        views: s
            .views()
            .iter()
            .map(|v| ViewFile {
                h: v.h(),
                p: matrix_json(v.p.matrix()),
                q: matrix_json(v.q.matrix()),
            })
            .collect(),
        field: None,
    };
    serde_json::to_string_pretty(&f).expect("serializable")
}

/// Dimension/degree metadata stored alongside an exported ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub dimension: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct RingFile {
    vars: Vec<String>,
    order: MonomialOrder,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    split: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct IdealFile {
    ring: RingFile,
    generators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    expected: Option<Expected>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    field: Option<String>,
}

pub fn ideal_to_json<K: Field>(ideal: &Ideal<K>, expected: Option<Expected>) -> String {
    let f = IdealFile {
        ring: RingFile {
            vars: ideal.ring().vars().names().to_vec(),
            order: ideal.order(),
            split: ideal.ring().vars().split(),
        },
        generators: ideal.generators().iter().map(|g| g.to_text()).collect(),
        expected,
        field: Some(K::label(ideal.ring().ctx())),
    };
    serde_json::to_string_pretty(&f).expect("serializable")
}

/// Contents of an ideal file. Coefficients are read as rationals; `field`
/// records the field the ideal was computed over.
#[derive(Clone, Debug)]
pub struct IdealDocument {
    pub ideal: Ideal<Q>,
    pub expected: Option<Expected>,
    pub field: Option<FieldChoice>,
}

/// Parses an ideal file.
pub fn parse_ideal(json: &str) -> Result<IdealDocument> {
    let f: IdealFile = serde_json::from_str(json).map_err(json_error)?;
    let vars = match f.ring.split {
        Some(s) => VarSet::blocked(f.ring.vars, s)?,
        None => VarSet::new(f.ring.vars)?,
    };
    let ring = PolyRing::new(vars, ());
    let gens = f
        .generators
        .iter()
        .map(|g| MultiPoly::parse(&ring, g))
        .collect::<Result<Vec<_>>>()?;
    let field = f
        .field
        .as_deref()
        .map(|s| FieldChoice::parse(s, crate::field::DEFAULT_PRIME))
        .transpose()?;
    Ok(IdealDocument {
        ideal: Ideal::new(&ring, gens)?.with_order(f.ring.order),
        expected: f.expected,
        field,
    })
}

/// Linear forms as text equations, e.g. `4y0+5y1+5y3=0`, with each form
/// scaled to primitive integer coefficients.
pub fn linear_equations(forms: &[Vec<Q>], prefix: &str) -> Vec<String> {
    let ring = PolyRing::<Q>::new(VarSet::indexed(prefix, forms.first().map_or(0, |f| f.len())), ());
    forms
        .iter()
        .map(|f| {
            let ints: Vec<Q> = primitive_integer_vector(f).into_iter().map(Q::from_integer).collect();
            format!("{}=0", MultiPoly::linear(&ring, &ints).to_text())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    const SETUP: &str = r#"{"k": 2, "views": [{"h": 1, "P": [["1","0","0"],["0","1","0"]], "Q": [[1,0,"1/2"],[0,1,0]]}]}"#;

    #[test]
    fn setup_roundtrip() {
        let (s, f) = parse_setup(SETUP).unwrap();
        assert_eq!(f, None);
        assert_eq!((s.k(), s.n()), (2, 1));
        assert_eq!(s.view(0).q.matrix().get(0, 2), &rat(1, 2));
        let (again, _) = parse_setup(&setup_to_json(&s)).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn malformed_setup_reports_position() {
        let err = parse_setup("{\"k\": 3,\n \"views\": [}").unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.contains("line 2")));
        let bad = SETUP.replace("[1,0,\"1/2\"],[0,1,0]", "[1,0,0],[2,0,0]");
        assert!(matches!(parse_setup(&bad), Err(Error::InvalidCamera(m)) if m.contains("degenerate")));
    }

    #[test]
    fn field_choices() {
        assert_eq!(FieldChoice::parse("Q", 32003).unwrap(), FieldChoice::Rational);
        assert_eq!(FieldChoice::parse("GFp", 32003).unwrap(), FieldChoice::Prime(32003));
        assert_eq!(FieldChoice::parse("GF(101)", 32003).unwrap(), FieldChoice::Prime(101));
        assert!(FieldChoice::parse("GF(100)", 32003).is_err());
        assert!(FieldChoice::parse("R", 32003).is_err());
    }

    #[test]
    fn ideal_roundtrip() {
        let ring = PolyRing::<Q>::new(VarSet::bigraded(1), ());
        let g = MultiPoly::parse(&ring, "x0y1-1/2*x1y0").unwrap();
        let i = Ideal::new(&ring, vec![g]).unwrap();
        let json = ideal_to_json(&i, Some(Expected { dimension: 0, degree: None }));
        let doc = parse_ideal(&json).unwrap();
        assert_eq!(doc.ideal.generators()[0].to_text(), "-1/2*x1y0+x0y1");
        assert_eq!(doc.ideal.ring().vars().split(), Some(2));
        assert_eq!(doc.expected.unwrap().dimension, 0);
        assert_eq!(doc.field, Some(FieldChoice::Rational));
    }

    #[test]
    fn equations_are_primitive() {
        let eqs = linear_equations(&[vec![rat(4, 5), Q::from_integer(1.into()), rat(0, 1), Q::from_integer(1.into())]], "y");
        assert_eq!(eqs, vec!["4y0+5y1+5y3=0"]);
    }
}
