//! Dimension and degree read off the leading-term ideal.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::Monomial;

use super::GroebnerBasis;

fn support_mask(m: &Monomial) -> u64 {
    m.support().fold(0u64, |acc, i| acc | 1u64 << i)
}

/// Krull dimension of `S / (lms)`: the size of a largest set of variables
/// containing the support of no generator. `None` for the unit ideal.
pub fn krull_dimension(lms: &[Monomial], nvars: usize) -> Option<usize> {
    assert!(nvars <= 64, "too many variables for dimension search");
    if lms.iter().any(|m| m.is_one()) {
        return None;
    }
    let masks: Vec<u64> = lms.iter().map(support_mask).collect();
    fn independent(set: u64, masks: &[u64]) -> bool {
        masks.iter().all(|&m| m & !set != 0)
    }
    fn dfs(i: usize, set: u64, n: usize, masks: &[u64], best: &mut usize) {
        let size = set.count_ones() as usize;
        if size + (n - i) <= *best {
            return;
        }
        if i == n {
            *best = size;
            return;
        }
        let with = set | 1u64 << i;
        if independent(with, masks) {
            dfs(i + 1, with, n, masks, best);
        }
        dfs(i + 1, set, n, masks, best);
    }
    let mut best = 0;
    dfs(0, 0, nvars, &masks, &mut best);
    Some(best)
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

fn numerator(gens: Vec<Monomial>) -> Vec<i128> {
    let gens = minimalize(gens);
    if gens.is_empty() {
        return vec![1];
    }
    let coprime = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if coprime {
        return gens.iter().fold(vec![1], |acc, g| {
            let mut f = vec![0i128; g.degree() as usize + 1];
            f[0] = 1;
            f[g.degree() as usize] -= 1;
            poly_mul(&acc, &f)
        });
    }
    // Pivot on the variable occurring in the most non-linear generators.
    let n = gens[0].nvars();
    let x = (0..n)
        .max_by_key(|&i| (gens.iter().filter(|g| g.exponent(i) > 0 && g.degree() > 1).count(), std::cmp::Reverse(i)))
        .expect("at least one variable");
    let xm = Monomial::var(n, x);
    let mut plus: Vec<Monomial> = gens.iter().filter(|g| g.exponent(x) == 0).cloned().collect();
    plus.push(xm.clone());
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| if g.exponent(x) > 0 { g.div(&xm) } else { g.clone() })
        .collect();
    let a = numerator(plus);
    let mut b = vec![0i128];
    b.extend(numerator(colon));
    poly_add(&a, &b)
}

/// Numerator `N(t)` of the Hilbert series `N(t) / (1-t)^n` of `S / (lms)`,
/// constant coefficient first, trailing zeros trimmed.
pub fn hilbert_numerator(lms: &[Monomial]) -> Vec<i128> {
    let mut n = numerator(lms.to_vec());
    while n.len() > 1 && n.last() == Some(&0) {
        n.pop();
    }
    n
}

/// Divides out `(1-t)` while possible; returns (number of factors, value at 1).
fn strip_one_minus_t(mut n: Vec<i128>) -> (usize, i128) {
    let mut count = 0;
    loop {
        let at_one: i128 = n.iter().sum();
        if at_one != 0 || n.iter().all(|&c| c == 0) {
            return (count, at_one);
        }
        // n = (1-t) q  =>  q_i = n_i + q_{i-1}
        let mut q = Vec::with_capacity(n.len() - 1);
        let mut acc = 0i128;
        for c in &n[..n.len() - 1] {
            acc += c;
            q.push(acc);
        }
        n = q;
        count += 1;
    }
}

/// Krull dimension and multiplicity from the Hilbert series of a monomial ideal.
pub(crate) fn hilbert_dimension_degree(lms: &[Monomial], nvars: usize) -> (usize, i128) {
    let (codim, deg) = strip_one_minus_t(hilbert_numerator(lms));
    (nvars - codim, deg)
}

impl<K: Field> GroebnerBasis<K> {
    /// Krull dimension of the quotient ring; `None` for the unit ideal.
    pub fn krull_dimension(&self) -> Option<usize> {
        krull_dimension(&self.leading_monomials(), self.ring().nvars())
    }

    /// Projective dimension of a homogeneous ideal; `None` when the locus is empty.
    pub fn dimension(&self) -> Option<usize> {
        self.krull_dimension().and_then(|d| d.checked_sub(1))
    }

    /// Degree of the projective locus of a homogeneous ideal.
    pub fn degree(&self) -> Result<u64> {
        if self.dimension().is_none() {
            return Err(Error::EmptyLocus);
        }
        let (_, deg) = hilbert_dimension_degree(&self.leading_monomials(), self.ring().nvars());
        Ok(deg as u64)
    }

    /// Number of standard monomials of a zero-dimensional (affine) ideal,
    /// i.e. its solution count with multiplicity. Zero for the unit ideal.
    pub fn standard_monomial_count(&self) -> Result<u64> {
        match self.krull_dimension() {
            None => Ok(0),
            Some(0) => Ok(hilbert_dimension_degree(&self.leading_monomials(), self.ring().nvars()).1 as u64),
            Some(_) => Err(Error::NotZeroDimensional),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn quadric_surface() {
        // leading monomial of a quadric in P^3
        let lms = [m(&[1, 1, 0, 0])];
        assert_eq!(krull_dimension(&lms, 4), Some(3));
        assert_eq!(hilbert_dimension_degree(&lms, 4), (3, 2));
    }

    #[test]
    fn irrelevant_ideal() {
        let lms = [m(&[1, 0, 0]), m(&[0, 1, 0]), m(&[0, 0, 1])];
        assert_eq!(krull_dimension(&lms, 3), Some(0));
        assert_eq!(hilbert_dimension_degree(&lms, 3), (0, 1));
        assert_eq!(krull_dimension(&[m(&[0, 0])], 2), None);
    }

    #[test]
    fn twisted_cubic_initial_ideal() {
        // grevlex initial ideal of the twisted cubic: (x1^2, x1x2, x2^2) in 4 vars
        let lms = [m(&[0, 2, 0, 0]), m(&[0, 1, 1, 0]), m(&[0, 0, 2, 0])];
        assert_eq!(hilbert_dimension_degree(&lms, 4), (2, 3));
        assert_eq!(krull_dimension(&lms, 4), Some(2));
    }

    #[test]
    fn standard_monomials_of_zero_dim() {
        // (x^2, y^3): 6 standard monomials
        let lms = [m(&[2, 0]), m(&[0, 3])];
        assert_eq!(hilbert_dimension_degree(&lms, 2), (0, 6));
        // (x^2, xy, y^2): 1, x, y
        let lms = [m(&[2, 0]), m(&[1, 1]), m(&[0, 2])];
        assert_eq!(hilbert_dimension_degree(&lms, 2), (0, 3));
    }
}
