//! Multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::scalar::{one, Scalar};

/// Exponent vector of a monomial; its length is the number of variables.
pub type Monomial = Vec<u32>;

/// Sparse polynomial in `n_vars` variables. Zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    n_vars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(n_vars: usize) -> Self {
        Polynomial { n_vars, terms: BTreeMap::new() }
    }

    pub fn constant(n_vars: usize, c: Scalar) -> Self {
        Self::monomial(n_vars, vec![0; n_vars], c)
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, one())
    }

    /// The coordinate function `x_{i+1}` (indices are zero-based).
    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Self::monomial(n_vars, e, one())
    }

    pub fn monomial(n_vars: usize, exps: Monomial, c: Scalar) -> Self {
        assert_eq!(exps.len(), n_vars, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Polynomial { n_vars, terms }
    }

    pub fn from_terms(n_vars: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Self::zero(n_vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn coefficient(&self, m: &[u32]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        assert_eq!(m.len(), self.n_vars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&vec![0; self.n_vars]).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Weighted degree when every term has the same one.
    pub fn weighted_degree(&self, weights: &[u32]) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| m.iter().zip(weights).map(|(&a, &w)| i64::from(a * w)).sum());
        let first = it.next()?;
        it.all(|d: i64| d == first).then_some(first)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n_vars);
        }
        Polynomial { n_vars: self.n_vars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n_vars);
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut e = m.clone();
                e[i] -= 1;
                out.add_term(e, c * Scalar::from_integer(m[i].into()));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.n_vars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.n_vars, "point length");
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &a) in point.iter().zip(m) {
                for _ in 0..a {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Same polynomial viewed in `n` variables (`n >= n_vars`).
    pub fn widen(&self, n: usize) -> Self {
        assert!(n >= self.n_vars);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.clone();
                e.resize(n, 0);
                (e, c.clone())
            })
            .collect();
        Polynomial { n_vars: n, terms }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.n_vars, rhs.n_vars, "variable count");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.n_vars, rhs.n_vars, "variable count");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.n_vars, rhs.n_vars, "variable count");
        let mut out = Polynomial::zero(self.n_vars);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let m = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(m, x * y);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-one())
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &[u32]) -> fmt::Result {
    let mut first = true;
    for (i, &a) in m.iter().enumerate() {
        if a == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "x{}", i + 1)?;
        if a > 1 {
            write!(f, "^{a}")?;
        }
    }
    Ok(())
}

/// Writes `c*mono*suffix` terms joined by ` + ` / ` - `, in the grammar
/// accepted by [`crate::expr`].
pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl IntoIterator<Item = (&'a [u32], &'a Scalar, Option<&'a str>)>,
) -> fmt::Result {
    let mut first = true;
    for (m, c, suffix) in terms {
        let neg = c.is_negative();
        match (first, neg) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        first = false;
        let a = c.abs();
        let has_mono = m.iter().any(|&e| e > 0);
        let mut need_star = false;
        if !a.is_one() || (!has_mono && suffix.is_none()) {
            write!(f, "{a}")?;
            need_star = true;
        }
        if has_mono {
            if need_star {
                f.write_str("*")?;
            }
            write_monomial(f, m)?;
            need_star = true;
        }
        if let Some(s) = suffix {
            if need_star {
                f.write_str("*")?;
            }
            f.write_str(s)?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().rev().map(|(m, c)| (m.as_slice(), c, None)))
    }
}

/// All exponent vectors with `Σ a_j w_j = target`.
pub fn monomials_of_weight(weights: &[u32], target: i64) -> Vec<Monomial> {
    fn rec(weights: &[u32], i: usize, left: i64, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = i64::from(weights[i]);
        let mut a = 0;
        while a * w <= left {
            cur[i] = a as u32;
            rec(weights, i + 1, left - a * w, cur, out);
            a += 1;
        }
        cur[i] = 0;
    }
    assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
    let mut out = Vec::new();
    if target >= 0 {
        rec(weights, 0, target, &mut vec![0; weights.len()], &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    #[test]
    fn arithmetic_and_derivative() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = &(&x * &x) + &y.scale(&int(3));
        assert_eq!(p.derivative(0), x.scale(&int(2)));
        assert_eq!(p.derivative(1), Polynomial::constant(2, int(3)));
        assert_eq!(p.eval(&[int(2), frac(1, 3)]), int(5));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn display() {
        let x = Polynomial::var(4, 0);
        let p = &x.pow(2).scale(&frac(1, 2)) - &Polynomial::var(4, 2);
        assert_eq!(p.to_string(), "1/2*x1^2 - x3");
        assert_eq!(Polynomial::constant(1, int(-2)).to_string(), "-2");
        assert_eq!(Polynomial::zero(3).to_string(), "0");
    }

    #[test]
    fn weights() {
        let w = [1, 1, 2, 3];
        assert_eq!(monomials_of_weight(&w, 0).len(), 1);
        assert_eq!(monomials_of_weight(&w, 2).len(), 4);
        assert_eq!(monomials_of_weight(&w, -1).len(), 0);
        let p = &Polynomial::var(4, 0).pow(2) + &Polynomial::var(4, 2);
        assert_eq!(p.weighted_degree(&w), Some(2));
        assert_eq!((&p + &Polynomial::one(4)).weighted_degree(&w), None);
    }
}
