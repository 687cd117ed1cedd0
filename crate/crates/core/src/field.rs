//! Coefficient fields: exact rationals and prime fields GF(p).
//!
//! Arithmetic goes through the [`Field`] trait rather than `std::ops` so that
//! generic code can work on references without cloning big rationals.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number, the default coefficient field.
pub type Q = BigRational;

/// Default prime for the modular fallback.
pub const DEFAULT_PRIME: u32 = 32003;

pub trait Field: Clone + PartialEq + Eq + Hash + Debug + Display + Send + Sync + 'static {
    /// Runtime data needed to create constants (the modulus for GF(p)).
    type Ctx: Clone + PartialEq + Eq + Debug + Send + Sync + 'static;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(v: i64, ctx: &Self::Ctx) -> Self;
    /// Image of a rational number; `None` when the denominator is not invertible.
    fn from_rational(q: &Q, ctx: &Self::Ctx) -> Option<Self>;
    fn ctx(&self) -> Self::Ctx;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn mul_u32(&self, k: u32) -> Self {
        self.mul(&Self::from_i64(k as i64, &self.ctx()))
    }

    /// Divides; panics on a zero divisor.
    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv().expect("division by zero"))
    }

    /// All roots in the field of the univariate polynomial with the given
    /// coefficients (constant term first), without multiplicity, sorted.
    fn univariate_roots(coeffs: &[Self]) -> Vec<Self>;

    /// True when the field has characteristic zero.
    fn is_exact_rational() -> bool;

    /// Short label used in reports ("Q" or "GF(p)").
    fn label(ctx: &Self::Ctx) -> String;

    /// Coordinates of a projective point as display strings. Rationals are
    /// scaled to a primitive integer vector.
    fn projective_strings(coords: &[Self]) -> Vec<String> {
        coords.iter().map(|c| c.to_string()).collect()
    }
}

impl Field for BigRational {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        Zero::zero()
    }
    fn one(_: &()) -> Self {
        One::one()
    }
    fn from_i64(v: i64, _: &()) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(q: &Q, _: &()) -> Option<Self> {
        Some(q.clone())
    }
    fn ctx(&self) {}

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn mul_u32(&self, k: u32) -> Self {
        self * BigRational::from_integer(BigInt::from(k))
    }

    fn univariate_roots(coeffs: &[Self]) -> Vec<Self> {
        rational_roots(coeffs)
    }

    fn is_exact_rational() -> bool {
        true
    }

    fn label(_: &()) -> String {
        "Q".to_string()
    }

    fn projective_strings(coords: &[Self]) -> Vec<String> {
        primitive_integer_vector(coords).iter().map(|c| c.to_string()).collect()
    }
}

/// Scales a rational vector to coprime integers, keeping the first nonzero
/// entry's sign as given. The zero vector maps to zeros.
pub fn primitive_integer_vector(v: &[Q]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Element of GF(p) for a prime p < 2^31. The modulus travels with the value.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Zp {
    value: u32,
    modulus: u32,
}

impl Zp {
    pub fn new(v: i64, modulus: u32) -> Self {
        let m = modulus as i64;
        Zp {
            value: v.rem_euclid(m) as u32,
            modulus,
        }
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    fn pow(&self, mut e: u64) -> Self {
        let m = self.modulus as u64;
        let mut base = self.value as u64;
        let mut acc = 1u64 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        Zp {
            value: acc as u32,
            modulus: self.modulus,
        }
    }
}

impl Debug for Zp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Prints the symmetric representative, so small negative numbers stay readable.
impl Display for Zp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.value as i64;
        let m = self.modulus as i64;
        if v > m / 2 {
            write!(f, "{}", v - m)
        } else {
            write!(f, "{}", v)
        }
    }
}

impl Field for Zp {
    type Ctx = u32;

    fn zero(p: &u32) -> Self {
        Zp { value: 0, modulus: *p }
    }
    fn one(p: &u32) -> Self {
        Zp::new(1, *p)
    }
    fn from_i64(v: i64, p: &u32) -> Self {
        Zp::new(v, *p)
    }
    fn from_rational(q: &Q, p: &u32) -> Option<Self> {
        let m = BigInt::from(*p);
        let num = q.numer().mod_floor(&m).to_i64()?;
        let den = q.denom().mod_floor(&m).to_i64()?;
        let d = Zp::new(den, *p);
        d.inv().map(|di| Zp::new(num, *p).mul(&di))
    }
    fn ctx(&self) -> u32 {
        self.modulus
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn is_one(&self) -> bool {
        self.value == 1
    }
    fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value as u64 + rhs.value as u64;
        let m = self.modulus as u64;
        Zp {
            value: if s >= m { (s - m) as u32 } else { s as u32 },
            modulus: self.modulus,
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.modulus - (rhs.value - self.value)
        };
        Zp {
            value: v,
            modulus: self.modulus,
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Zp {
            value: (self.value as u64 * rhs.value as u64 % self.modulus as u64) as u32,
            modulus: self.modulus,
        }
    }
    fn neg(&self) -> Self {
        if self.value == 0 {
            *self
        } else {
            Zp {
                value: self.modulus - self.value,
                modulus: self.modulus,
            }
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.modulus as u64 - 2))
        }
    }

    fn univariate_roots(coeffs: &[Self]) -> Vec<Self> {
        let Some(first) = coeffs.iter().find(|c| !c.is_zero()) else {
            return Vec::new();
        };
        let p = first.modulus;
        (0..p)
            .map(|v| Zp { value: v, modulus: p })
            .filter(|x| {
                let mut acc = Zp::zero(&p);
                for c in coeffs.iter().rev() {
                    acc = acc.mul(x).add(c);
                }
                acc.is_zero()
            })
            .collect()
    }

    fn is_exact_rational() -> bool {
        false
    }

    fn label(p: &u32) -> String {
        format!("GF({})", p)
    }
}

/// True when `p` is prime and small enough for [`Zp`].
pub fn is_supported_prime(p: u32) -> bool {
    if p < 3 || p >= (1 << 31) {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Parses "a", "-a", "a/b" into an exact rational.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

pub fn rat(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Rational roots via the rational root test on the primitive integer form.
fn rational_roots(coeffs: &[Q]) -> Vec<Q> {
    let mut c: Vec<Q> = coeffs.to_vec();
    while c.last().is_some_and(|x| Zero::is_zero(x)) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let lead_zeros = c.iter().take_while(|x| Zero::is_zero(*x)).count();
    if lead_zeros > 0 {
        roots.push(<Q as Zero>::zero());
        c.drain(..lead_zeros);
    }
    if c.len() > 1 {
        let lcm = c
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = c.iter().map(|x| (x * &lcm).to_integer()).collect();
        let a0 = ints[0].clone();
        let an = ints.last().unwrap().clone();
        let eval = |r: &Q| {
            let mut acc = <Q as Zero>::zero();
            for x in ints.iter().rev() {
                acc = acc * r + Q::from_integer(x.clone());
            }
            acc
        };
        let ps = divisors(&a0);
        let qs = divisors(&an);
        for p in &ps {
            for q in &qs {
                for sign in [1, -1] {
                    let r = Q::new(p * sign, q.clone());
                    if Zero::is_zero(&eval(&r)) && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zp_inverse_roundtrip() {
        let p = DEFAULT_PRIME;
        for v in [1i64, 2, 17, 31999, -5] {
            let x = Zp::new(v, p);
            assert!(x.mul(&x.inv().unwrap()).is_one());
        }
        assert!(Zp::zero(&p).inv().is_none());
    }

    #[test]
    fn zp_from_rational() {
        let p = 7;
        let x = Zp::from_rational(&rat(3, 2), &p).unwrap();
        assert_eq!(x.mul(&Zp::new(2, p)), Zp::new(3, p));
        assert!(Zp::from_rational(&rat(1, 14), &p).is_none());
    }

    #[test]
    fn rational_roots_of_cubic() {
        // (x - 1/2)(x + 3)(x^2 + 1) = x^4 + 5/2 x^3 - 1/2 x^2 + 5/2 x - 3/2
        let c = vec![rat(-3, 2), rat(5, 2), rat(-1, 2), rat(5, 2), int(1)];
        assert_eq!(rational_roots(&c), vec![int(-3), rat(1, 2)]);
        assert_eq!(rational_roots(&[int(0), int(0), int(1)]), vec![int(0)]);
    }

    #[test]
    fn zp_roots_by_enumeration() {
        let p = 101;
        // x^2 - 4
        let c = vec![Zp::new(-4, p), Zp::new(0, p), Zp::new(1, p)];
        assert_eq!(Zp::univariate_roots(&c), vec![Zp::new(2, p), Zp::new(99, p)]);
    }

    #[test]
    fn primitive_vectors() {
        let v = primitive_integer_vector(&[rat(1, 1), rat(2, 5), rat(6, 5), rat(-6, 5)]);
        let got: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(got, vec!["5", "2", "6", "-6"]);
    }

    #[test]
    fn prime_check() {
        assert!(is_supported_prime(32003));
        assert!(!is_supported_prime(32001));
    }

    #[test]
    fn parses_fractions() {
        assert_eq!(parse_rational("-6/4"), Some(rat(-3, 2)));
        assert_eq!(parse_rational(" 7 "), Some(int(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
