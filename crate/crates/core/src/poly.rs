//! Sparse multivariate polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{Field, Q};
use crate::monomial::{Monomial, MonomialOrder};

/// Ordered, uniquely named variables, optionally split into an x-block
/// `0..split` and a y-block `split..`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
    split: Option<usize>,
}

impl VarSet {
    pub fn new(names: Vec<String>) -> Result<Self> {
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() || names[..i].contains(a) {
                return Err(Error::InvalidInput(format!("duplicate or empty variable name '{}'", a)));
            }
        }
        Ok(VarSet { names, split: None })
    }

    pub fn blocked(names: Vec<String>, split: usize) -> Result<Self> {
        if split > names.len() {
            return Err(Error::InvalidInput("block split beyond variable count".into()));
        }
        let mut v = Self::new(names)?;
        v.split = Some(split);
        Ok(v)
    }

    /// `prefix0 .. prefix{count-1}`.
    pub fn indexed(prefix: &str, count: usize) -> Self {
        VarSet {
            names: (0..count).map(|i| format!("{prefix}{i}")).collect(),
            split: None,
        }
    }

    /// `x0..xk, y0..yk` with the (x|y) block structure.
    pub fn bigraded(k: usize) -> Self {
        let mut names: Vec<String> = (0..=k).map(|i| format!("x{i}")).collect();
        names.extend((0..=k).map(|i| format!("y{i}")));
        VarSet {
            names,
            split: Some(k + 1),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn split(&self) -> Option<usize> {
        self.split
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A polynomial ring: variables plus the coefficient field context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing<K: Field = Q> {
    vars: VarSet,
    ctx: K::Ctx,
}

pub type Ring<K = Q> = Arc<PolyRing<K>>;

impl<K: Field> PolyRing<K> {
    pub fn new(vars: VarSet, ctx: K::Ctx) -> Ring<K> {
        Arc::new(PolyRing { vars, ctx })
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn ctx(&self) -> &K::Ctx {
        &self.ctx
    }

    pub fn zero(&self) -> K {
        K::zero(&self.ctx)
    }

    pub fn one(&self) -> K {
        K::one(&self.ctx)
    }

    pub fn from_i64(&self, v: i64) -> K {
        K::from_i64(v, &self.ctx)
    }
}

pub fn same_ring<K: Field>(a: &Ring<K>, b: &Ring<K>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Total degree, homogeneity and (when the ring is blocked) bidegree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeInfo {
    /// `None` for the zero polynomial.
    pub total: Option<u32>,
    pub homogeneous: bool,
    pub bidegree: Option<(u32, u32)>,
}

/// Sparse polynomial: exponent vector -> nonzero coefficient.
#[derive(Clone)]
pub struct MultiPoly<K: Field = Q> {
    ring: Ring<K>,
    terms: BTreeMap<Monomial, K>,
}

impl<K: Field> PartialEq for MultiPoly<K> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<K: Field> Eq for MultiPoly<K> {}

impl<K: Field> MultiPoly<K> {
    pub fn zero(ring: &Ring<K>) -> Self {
        MultiPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Ring<K>, c: K) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.nvars()), c);
        }
        p
    }

    pub fn one(ring: &Ring<K>) -> Self {
        Self::constant(ring, ring.one())
    }

    pub fn var(ring: &Ring<K>, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i), ring.one())
    }

    pub fn monomial(ring: &Ring<K>, m: Monomial, c: K) -> Self {
        assert_eq!(m.nvars(), ring.nvars());
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Sums like terms and drops zeros.
    pub fn from_terms(ring: &Ring<K>, terms: impl IntoIterator<Item = (Monomial, K)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    /// Linear form `sum coeffs[i] * x_i`.
    pub fn linear(ring: &Ring<K>, coeffs: &[K]) -> Self {
        assert_eq!(coeffs.len(), ring.nvars());
        Self::from_terms(
            ring,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(ring.nvars(), i), c.clone())),
        )
    }

    pub fn ring(&self) -> &Ring<K> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &K)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> K {
        self.coefficient(&Monomial::one(self.ring.nvars()))
    }

    fn add_term(&mut self, m: Monomial, c: &K) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.add(c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c);
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), &c.neg());
        }
        Ok(r)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut r = Self::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                r.add_term(ma.mul(mb), &ca.mul(cb));
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.mul(c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, v)| (t.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn evaluate(&self, point: &[K]) -> Result<K> {
        if point.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.ring.nvars(),
                got: point.len(),
            });
        }
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t = t.mul(x);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Self> {
        if var >= self.ring.nvars() {
            return Err(Error::IndexOutOfRange {
                index: var,
                len: self.ring.nvars(),
            });
        }
        let mut r = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e > 0 {
                r.add_term(m.with_exponent(var, e - 1), &c.mul_u32(e as u32));
            }
        }
        Ok(r)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_info(&self) -> DegreeInfo {
        let total = self.total_degree();
        let homogeneous = match total {
            None => true,
            Some(d) => self.terms.keys().all(|m| m.degree() == d),
        };
        let bidegree = self.ring.vars().split().and_then(|s| {
            let n = self.ring.nvars();
            let mut degs = self
                .terms
                .keys()
                .map(|m| (m.partial_degree(0..s), m.partial_degree(s..n)));
            let first = degs.next()?;
            degs.all(|d| d == first).then_some(first)
        });
        DegreeInfo {
            total,
            homogeneous,
            bidegree,
        }
    }

    /// Terms sorted in descending order under `order`.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(Monomial, K)> {
        let mut v: Vec<(Monomial, K)> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(Monomial, K)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    /// Scales so the leading coefficient under `order` is 1.
    pub fn monic(&self, order: MonomialOrder) -> Self {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Reinterprets the polynomial in `target`, sending variable `i` to
    /// variable `map[i]`.
    pub fn map_vars(&self, target: &Ring<K>, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.ring.nvars());
        let n = target.nvars();
        Self::from_terms(
            target,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0u16; n];
                for (i, &x) in m.exponents().iter().enumerate() {
                    e[map[i]] += x;
                }
                (Monomial::from_exponents(&e), c.clone())
            }),
        )
    }

    /// Substitutes polynomials (all in one ring) for the variables.
    pub fn substitute(&self, images: &[MultiPoly<K>]) -> Result<Self> {
        if images.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.ring.nvars(),
                got: images.len(),
            });
        }
        let target = images
            .first()
            .map(|p| p.ring.clone())
            .unwrap_or_else(|| self.ring.clone());
        let mut acc = MultiPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (img, &e) in images.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t = t.try_mul(img)?;
                }
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    /// Coefficient-wise image in another field.
    pub fn map_coefficients<L: Field>(&self, target: &Ring<L>, f: impl Fn(&K) -> L) -> MultiPoly<L> {
        assert_eq!(target.nvars(), self.ring.nvars());
        MultiPoly::from_terms(target, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Writes the polynomial in descending grevlex order, e.g. `2x0x1-x1^2+5/4*x3`.
    pub fn to_text(&self) -> String {
        format_terms(&self.sorted_terms(MonomialOrder::Grevlex), self.ring.vars().names())
    }
}

impl MultiPoly<Q> {
    /// Parses the text format produced by [`MultiPoly::to_text`].
    pub fn parse(ring: &Ring<Q>, s: &str) -> Result<Self> {
        Parser::new(ring, s).parse()
    }
}

impl<K: Field> MultiPoly<K> {
    /// Parses rational text and maps it into this field.
    pub fn parse_in(ring: &Ring<K>, s: &str) -> Result<Self> {
        let qring: Ring<Q> = PolyRing::new(ring.vars().clone(), ());
        let q = Parser::new(&qring, s).parse()?;
        let mut out = MultiPoly::zero(ring);
        for (m, c) in q.terms() {
            let c = K::from_rational(c, ring.ctx())
                .ok_or_else(|| Error::InvalidInput(format!("coefficient {} not representable in {}", c, K::label(ring.ctx()))))?;
            out.add_term(m.clone(), &c);
        }
        Ok(out)
    }
}

fn format_monomial(m: &Monomial, names: &[String]) -> String {
    let mut s = String::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => s.push_str(&names[i]),
            _ => s.push_str(&format!("{}^{}", names[i], e)),
        }
    }
    s
}

pub(crate) fn format_terms<K: Field>(terms: &[(Monomial, K)], names: &[String]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (m, c) in terms {
        let cs = c.to_string();
        let (neg, abs) = match cs.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, cs),
        };
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if m.is_one() {
            out.push_str(&abs);
        } else {
            if abs != "1" {
                out.push_str(&abs);
                if abs.contains('/') {
                    out.push('*');
                }
            }
            out.push_str(&format_monomial(m, names));
        }
    }
    out
}

impl<K: Field> fmt::Display for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<K: Field> fmt::Debug for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self.to_text())
    }
}

// Operator sugar for polynomials known to share a ring; panics otherwise.
impl<K: Field> Add for &MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn add(self, rhs: Self) -> MultiPoly<K> {
        self.try_add(rhs).expect("polynomials from different rings")
    }
}

impl<K: Field> Sub for &MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn sub(self, rhs: Self) -> MultiPoly<K> {
        self.try_sub(rhs).expect("polynomials from different rings")
    }
}

impl<K: Field> Mul for &MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn mul(self, rhs: Self) -> MultiPoly<K> {
        self.try_mul(rhs).expect("polynomials from different rings")
    }
}

impl<K: Field> Neg for &MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn neg(self) -> MultiPoly<K> {
        self.scale(&self.ring.one().neg())
    }
}

struct Parser<'a> {
    ring: &'a Ring<Q>,
    src: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a Ring<Q>, s: &str) -> Self {
        Parser {
            ring,
            src: s.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{} at offset {} in '{}'", msg, self.pos, self.src.iter().collect::<String>()))
    }

    fn peek(&self) -> Option<char> {
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.src[start..self.pos].iter().collect::<String>().parse().ok()
    }

    fn variable(&mut self) -> Option<usize> {
        let rest: String = self.src[self.pos..].iter().collect();
        let mut best: Option<(usize, usize)> = None;
        for (i, name) in self.ring.vars().names().iter().enumerate() {
            if rest.starts_with(name.as_str()) && best.is_none_or(|(_, l)| name.len() > l) {
                best = Some((i, name.len()));
            }
        }
        let (i, l) = best?;
        self.pos += rest[..l].chars().count();
        Some(i)
    }

    fn term(&mut self) -> Result<(Monomial, Q)> {
        let n = self.ring.nvars();
        let mut coeff = Q::from_integer(BigInt::from(1));
        let mut mono = Monomial::one(n);
        let mut seen_any = false;
        if let Some(num) = self.integer() {
            let mut c = BigRational::from_integer(num);
            if self.peek() == Some('/') {
                self.pos += 1;
                let den = self.integer().ok_or_else(|| self.err("expected denominator"))?;
                if den == BigInt::from(0) {
                    return Err(self.err("zero denominator"));
                }
                c /= BigRational::from_integer(den);
            }
            coeff = c;
            seen_any = true;
        }
        loop {
            if self.peek() == Some('*') {
                self.pos += 1;
            }
            match self.variable() {
                Some(i) => {
                    let mut e = 1u16;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        let v = self.integer().ok_or_else(|| self.err("expected exponent"))?;
                        e = u16::try_from(v).map_err(|_| self.err("exponent too large"))?;
                    }
                    mono = mono.mul(&Monomial::var(n, i).with_exponent(i, e));
                    seen_any = true;
                }
                None => break,
            }
        }
        if !seen_any {
            return Err(self.err("expected term"));
        }
        Ok((mono, coeff))
    }

    fn parse(mut self) -> Result<MultiPoly<Q>> {
        let mut p = MultiPoly::zero(self.ring);
        if self.src.iter().collect::<String>() == "0" {
            return Ok(p);
        }
        let mut first = true;
        while self.pos < self.src.len() {
            let mut sign = 1;
            match self.peek() {
                Some('+') => self.pos += 1,
                Some('-') => {
                    sign = -1;
                    self.pos += 1;
                }
                _ if first => {}
                _ => return Err(self.err("expected '+' or '-'")),
            }
            first = false;
            let (m, c) = self.term()?;
            let c = if sign < 0 { -c } else { c };
            p.add_term(m, &c);
        }
        if first {
            return Err(self.err("empty polynomial"));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};

    fn ring4() -> Ring<Q> {
        PolyRing::new(VarSet::indexed("x", 4), ())
    }

    fn quadric(r: &Ring<Q>) -> MultiPoly<Q> {
        MultiPoly::parse(r, "2x0x1-x1^2-2x0x2+x1x2+2x2^2+2x0x3+x1x3-3x2x3+2x3^2").unwrap()
    }

    #[test]
    fn additive_inverse_and_merge() {
        let r = ring4();
        let x0 = MultiPoly::var(&r, 0);
        assert!((&x0 + &(-&x0)).is_zero());
        let x0x1 = &x0 * &MultiPoly::var(&r, 1);
        assert_eq!((&x0x1 + &x0x1).to_text(), "2x0x1");
    }

    #[test]
    fn difference_of_squares() {
        let r = ring4();
        let a = MultiPoly::parse(&r, "x0+x1").unwrap();
        let b = MultiPoly::parse(&r, "x0-x1").unwrap();
        assert_eq!((&a * &b).to_text(), "x0^2-x1^2");
        assert_eq!(&a * &MultiPoly::one(&r), a);
    }

    #[test]
    fn quadric_vanishes_at_example_centers() {
        let r = ring4();
        let q = quadric(&r);
        assert_eq!(q.evaluate(&[int(-1), int(3), int(2), int(1)]).unwrap(), int(0));
        assert_eq!(q.evaluate(&[int(-1), int(-1), int(1), int(1)]).unwrap(), int(0));
        assert!(q.evaluate(&[int(1)]).is_err());
    }

    #[test]
    fn constant_term_at_origin() {
        let r = ring4();
        let f = MultiPoly::parse(&r, "3x0^2-x1+7/2").unwrap();
        assert_eq!(f.evaluate(&[int(0), int(0), int(0), int(0)]).unwrap(), rat(7, 2));
    }

    #[test]
    fn derivative_of_quadric() {
        let r = ring4();
        let d = quadric(&r).partial_derivative(0).unwrap();
        assert_eq!(d, MultiPoly::parse(&r, "2x1-2x2+2x3").unwrap());
        assert!(MultiPoly::one(&r).partial_derivative(1).unwrap().is_zero());
        assert!(quadric(&r).partial_derivative(4).is_err());
    }

    #[test]
    fn degree_information() {
        let r = PolyRing::<Q>::new(VarSet::bigraded(3), ());
        let f = MultiPoly::parse(&r, "x0^2y1").unwrap();
        let info = f.degree_info();
        assert_eq!(info.bidegree, Some((2, 1)));
        assert_eq!(info.total, Some(3));
        let r4 = ring4();
        let q = quadric(&r4).degree_info();
        assert_eq!((q.total, q.homogeneous), (Some(2), true));
        assert!(!MultiPoly::parse(&r4, "x0+x1^2").unwrap().degree_info().homogeneous);
        assert_eq!(MultiPoly::zero(&r4).degree_info().total, None);
    }

    #[test]
    fn text_roundtrip_with_fractions() {
        let r = ring4();
        let f = MultiPoly::parse(&r, "-5/4*x0x3 + x1^3 - 2/3").unwrap();
        assert_eq!(f.to_text(), "x1^3-5/4*x0x3-2/3");
        assert_eq!(MultiPoly::parse(&r, &f.to_text()).unwrap(), f);
        assert!(MultiPoly::parse(&r, "x0 +* 2").is_err());
        assert!(MultiPoly::parse(&r, "z1").is_err());
    }

    #[test]
    fn mismatched_rings_rejected() {
        let a = MultiPoly::var(&ring4(), 0);
        let other = PolyRing::<Q>::new(VarSet::indexed("y", 4), ());
        let b = MultiPoly::var(&other, 0);
        assert!(matches!(a.try_add(&b), Err(Error::RingMismatch)));
        assert!(matches!(a.try_mul(&b), Err(Error::RingMismatch)));
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(VarSet::new(vec!["a".into(), "a".into()]).is_err());
    }
}
