//! Text grammar for polynomials, vector fields and 1-forms.
//!
//! ```text
//! list    := expr (';' expr)*
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor (('*'|'/') factor)*       '/' only by a nonzero constant
//! factor  := atom ['^' uint]                  '^' only on polynomial atoms
//! atom    := uint | 'x'<i> | 'd'<i> | 'dx'<i> | '(' expr ')'
//! ```
//!
//! `x<i>` is the coordinate `x_i`, `d<i>` the field `∂_i`, `dx<i>` the form
//! `dx_i`; indices start at 1. A product may contain at most one `d<i>` or
//! `dx<i>` factor. Whitespace is ignored. Examples: `x1^2/2*d3`,
//! `dx4 - x3*dx1`, `(1 + x2)*(d1 - d2)`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{parse_rational, Scalar};
use crate::vf::{OneForm, PfaffSystem, PolyVectorField};

const MAX_EXPONENT: u32 = 64;
const MAX_INDEX: usize = 64;
const MAX_DEGREE: u32 = 256;
const MAX_TERMS: u128 = 4096;

#[derive(Clone, Debug, PartialEq)]
enum Value {
    Poly(Polynomial),
    Field(Vec<Polynomial>),
    Form(Vec<Polynomial>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn index(&mut self) -> Result<usize> {
        let start = self.pos;
        if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            return err(start, "expected a variable index");
        }
        let i = self.uint()?;
        let i: usize = i.try_into().map_err(|_| Error::Parse { pos: start, msg: "index too large".into() })?;
        if i == 0 || i > self.n {
            return err(start, format!("index {i} outside 1..={}", self.n));
        }
        Ok(i - 1)
    }

    fn zero_poly(&self) -> Polynomial {
        Polynomial::zero(self.n)
    }

    fn atom(&mut self) -> Result<Value> {
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return err(self.pos, "expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(Value::Poly(Polynomial::var(self.n, self.index()?)))
            }
            Some(b'd') => {
                self.pos += 1;
                let form = self.src.get(self.pos) == Some(&b'x');
                if form {
                    self.pos += 1;
                }
                let i = self.index()?;
                let mut v = vec![self.zero_poly(); self.n];
                v[i] = Polynomial::one(self.n);
                Ok(if form { Value::Form(v) } else { Value::Field(v) })
            }
            Some(c) if c.is_ascii_digit() => {
                let k = self.uint()?;
                Ok(Value::Poly(Polynomial::constant(self.n, Scalar::from_integer(k))))
            }
            Some(_) => err(start, "unexpected character"),
            None => err(start, "unexpected end of input"),
        }
    }

    fn factor(&mut self) -> Result<Value> {
        let v = self.atom()?;
        if self.peek() == Some(b'^') {
            let at = self.pos;
            self.pos += 1;
            let k = self.uint()?;
            let k: u32 = match k.try_into() {
                Ok(k) if k <= MAX_EXPONENT => k,
                _ => return err(at, format!("exponent above {MAX_EXPONENT}")),
            };
            return match v {
                Value::Poly(p) if power_bound(&p, k) <= MAX_TERMS && degree(&p) * k <= MAX_DEGREE => {
                    Ok(Value::Poly(p.pow(k)))
                }
                Value::Poly(_) => err(at, "power is too large"),
                _ => err(at, "only polynomials can be raised to a power"),
            };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    let at = self.pos;
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = multiply(acc, rhs).or_else(|m| err(at, m))?;
                }
                Some(b'/') => {
                    let at = self.pos;
                    self.pos += 1;
                    let rhs = self.factor()?;
                    let c = match &rhs {
                        Value::Poly(p) => p.as_constant(),
                        _ => None,
                    };
                    match c {
                        Some(c) if !c.is_zero() => acc = scale(acc, &c.recip()),
                        _ => return err(at, "division only by a nonzero constant"),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = scale(acc, &-Scalar::from_integer(1.into()));
        }
        loop {
            let sign = match self.peek() {
                Some(b'+') => 1,
                Some(b'-') => -1,
                _ => return Ok(acc),
            };
            let at = self.pos;
            self.pos += 1;
            let mut rhs = self.term()?;
            if sign < 0 {
                rhs = scale(rhs, &-Scalar::from_integer(1.into()));
            }
            acc = add(acc, rhs).or_else(|m| err(at, m))?;
        }
    }
}

fn scale(v: Value, c: &Scalar) -> Value {
    match v {
        Value::Poly(p) => Value::Poly(p.scale(c)),
        Value::Field(v) => Value::Field(v.iter().map(|p| p.scale(c)).collect()),
        Value::Form(v) => Value::Form(v.iter().map(|p| p.scale(c)).collect()),
    }
}

fn degree(p: &Polynomial) -> u32 {
    p.total_degree().unwrap_or(0)
}

/// Upper bound on the number of terms of `p^k`: at most `|p|^k`, and at most
/// the number of monomials of degree `<= k deg p` in the variables of `p`.
fn power_bound(p: &Polynomial, k: u32) -> u128 {
    let terms = p.terms().len() as u128;
    let by_product = (0..k).try_fold(1u128, |acc, _| acc.checked_mul(terms)).unwrap_or(u128::MAX);
    let vars = (0..p.n_vars()).filter(|&i| p.terms().keys().any(|m| m[i] > 0)).count() as u128;
    let top = u128::from(degree(p)) * u128::from(k);
    let mut by_degree = 1u128;
    for i in 1..=vars {
        by_degree = by_degree.saturating_mul(top + i) / i;
    }
    by_product.min(by_degree)
}

fn parts(v: &Value) -> Vec<&Polynomial> {
    match v {
        Value::Poly(p) => vec![p],
        Value::Field(v) | Value::Form(v) => v.iter().collect(),
    }
}

fn multiply(a: Value, b: Value) -> std::result::Result<Value, &'static str> {
    let size = |v: &Value| parts(v).iter().map(|p| p.terms().len() as u128).sum::<u128>();
    let deg = |v: &Value| parts(v).iter().map(|p| degree(p)).max().unwrap_or(0);
    if size(&a) * size(&b) > MAX_TERMS || deg(&a) + deg(&b) > MAX_DEGREE {
        return Err("product is too large");
    }
    let times = |p: &Polynomial, v: Vec<Polynomial>| v.iter().map(|q| p * q).collect();
    match (a, b) {
        (Value::Poly(p), Value::Poly(q)) => Ok(Value::Poly(&p * &q)),
        (Value::Poly(p), Value::Field(v)) | (Value::Field(v), Value::Poly(p)) => Ok(Value::Field(times(&p, v))),
        (Value::Poly(p), Value::Form(v)) | (Value::Form(v), Value::Poly(p)) => Ok(Value::Form(times(&p, v))),
        _ => Err("product of two fields or forms"),
    }
}

fn add(a: Value, b: Value) -> std::result::Result<Value, &'static str> {
    let sum = |x: Vec<Polynomial>, y: Vec<Polynomial>| x.iter().zip(&y).map(|(p, q)| p + q).collect();
    match (a, b) {
        (Value::Poly(p), Value::Poly(q)) => Ok(Value::Poly(&p + &q)),
        (Value::Field(x), Value::Field(y)) => Ok(Value::Field(sum(x, y))),
        (Value::Form(x), Value::Form(y)) => Ok(Value::Form(sum(x, y))),
        _ => Err("sum of a polynomial, field or form with a different kind"),
    }
}

/// Largest variable index mentioned in `src` (0 if none).
pub fn max_index(src: &str) -> usize {
    let b = src.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < b.len() {
        if b[i] == b'x' || b[i] == b'd' {
            let mut j = i + 1;
            if b[i] == b'd' && b.get(j) == Some(&b'x') {
                j += 1;
            }
            let start = j;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            if j > start && j - start <= 3 {
                let k: usize = src[start..j].parse().unwrap_or(0);
                best = best.max(k);
            }
            i = j.max(i + 1);
        } else {
            i += 1;
        }
    }
    best
}

fn resolve_n(src: &str, n_vars: Option<usize>) -> Result<usize> {
    let n = n_vars.unwrap_or_else(|| max_index(src));
    if n == 0 {
        return err(0, "cannot infer the number of variables");
    }
    if n > MAX_INDEX {
        return err(0, format!("more than {MAX_INDEX} variables"));
    }
    Ok(n)
}

fn parse_value(src: &str, n: usize) -> Result<Value> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, n };
    let v = p.expr()?;
    if p.peek().is_some() {
        return err(p.pos, "trailing input");
    }
    Ok(v)
}

fn split_list(src: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for piece in src.split(';') {
        out.push((start, piece));
        start += piece.len() + 1;
    }
    out
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

/// Parses a polynomial; `n_vars = None` infers it from the largest index.
pub fn parse_polynomial(src: &str, n_vars: Option<usize>) -> Result<Polynomial> {
    let n = resolve_n(src, n_vars).or_else(|_| resolve_n(src, Some(1)))?;
    match parse_value(src, n)? {
        Value::Poly(p) => Ok(p),
        _ => err(0, "expected a polynomial"),
    }
}

pub fn parse_field(src: &str, n_vars: Option<usize>) -> Result<PolyVectorField> {
    let n = resolve_n(src, n_vars)?;
    match parse_value(src, n)? {
        Value::Field(v) => Ok(PolyVectorField::new(v)),
        Value::Poly(p) if p.is_zero() => Ok(PolyVectorField::zero(n)),
        _ => err(0, "expected a vector field"),
    }
}

pub fn parse_form(src: &str, n_vars: Option<usize>) -> Result<OneForm> {
    let n = resolve_n(src, n_vars)?;
    match parse_value(src, n)? {
        Value::Form(v) => Ok(OneForm::new(v)),
        Value::Poly(p) if p.is_zero() => Ok(OneForm::zero(n)),
        _ => err(0, "expected a 1-form"),
    }
}

/// `;`-separated list of fields sharing one variable count.
pub fn parse_fields(src: &str, n_vars: Option<usize>) -> Result<Vec<PolyVectorField>> {
    let n = resolve_n(src, n_vars)?;
    split_list(src).into_iter().map(|(at, s)| parse_field(s, Some(n)).map_err(|e| shift(e, at))).collect()
}

/// `;`-separated list of forms; an empty string is the empty system.
pub fn parse_pfaff(src: &str, n_vars: Option<usize>) -> Result<PfaffSystem> {
    if src.trim().is_empty() {
        let n = n_vars.ok_or_else(|| Error::Parse { pos: 0, msg: "empty system needs a variable count".into() })?;
        return PfaffSystem::new(n, Vec::new());
    }
    let n = resolve_n(src, n_vars)?;
    let forms = split_list(src)
        .into_iter()
        .map(|(at, s)| parse_form(s, Some(n)).map_err(|e| shift(e, at)))
        .collect::<Result<Vec<_>>>()?;
    PfaffSystem::new(n, forms)
}

/// Parses `(a,b,..);(c,d,..)` into rational points.
pub fn parse_points(src: &str) -> Result<Vec<Vec<Scalar>>> {
    let mut out = Vec::new();
    for (at, piece) in split_list(src) {
        let t = piece.trim();
        let lead = piece.len() - piece.trim_start().len();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse { pos: at + lead, msg: "expected '(' ... ')'".into() })?;
        let coords = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?
        };
        out.push(coords);
    }
    if let Some(first) = out.first() {
        if out.iter().any(|p| p.len() != first.len()) {
            return Err(Error::DimensionMismatch {
                expected: first.len(),
                got: out.iter().map(Vec::len).find(|&l| l != first.len()).unwrap(),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    #[test]
    fn polynomials() {
        let p = parse_polynomial("x1^2/2 - 3*x2*x1 + 1", None).unwrap();
        assert_eq!(p.n_vars(), 2);
        assert_eq!(p.eval(&[int(2), int(1)]), int(-3));
        assert_eq!(parse_polynomial("-(x1 - x1)", None).unwrap(), Polynomial::zero(1));
        assert_eq!(parse_polynomial("7/14", None).unwrap().as_constant(), Some(frac(1, 2)));
    }

    #[test]
    fn fields_and_forms() {
        let x = parse_field("d2 + x1*d3 + 1/2*x1^2*d4", None).unwrap();
        assert_eq!(x.n_vars(), 4);
        assert_eq!(x.to_string(), "d2 + x1*d3 + 1/2*x1^2*d4");
        let a = parse_form("dx4 - x3*dx1", None).unwrap();
        assert_eq!(a.to_string(), "-x3*dx1 + dx4");
        let s = parse_pfaff("dx4 - x3*dx1; dx3 - x2*dx1", None).unwrap();
        assert_eq!(s.forms().len(), 2);
        assert_eq!(parse_field("(1 + x2)*(d1 - d2)", None).unwrap().to_string(), "d1 + x2*d1 - d2 - x2*d2");
    }

    #[test]
    fn rejects() {
        for bad in ["", "d1*d2", "x1 + d1", "x0", "d1^2", "x1/x2", "x1/0", "(x1", "x1)", "x1 $", "dx1 + d1", "x1^99"] {
            assert!(parse_field(bad, Some(2)).is_err(), "{bad}");
        }
        assert!(matches!(parse_form("dx1 +", None), Err(Error::Parse { .. })));
        assert!(parse_field("d3", Some(2)).is_err());
    }

    #[test]
    fn size_limits() {
        assert_eq!(parse_polynomial("(x1 + x2)^4", None).unwrap().terms().len(), 5);
        assert_eq!(parse_polynomial("(x1 + 1)^64", None).unwrap().terms().len(), 65);
        for bad in [
            "(x1 + x2 + x3 + x4 + x5 + x6)^64",
            "((x1 + x2)^64)^64",
            "(x1^64)^5",
            "(x1+x2+x3+x4+x5+x6+x7+x8)^4*(x1+x2+x3+x4+x5+x6+x7+x8)^4",
        ] {
            assert!(parse_polynomial(bad, None).is_err(), "{bad}");
        }
    }

    #[test]
    fn error_positions() {
        match parse_pfaff("dx1; dx2 * dx1", None) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn points() {
        let p = parse_points("(0,0,0,0);(1, -1/2, 3, 0)").unwrap();
        assert_eq!(p[1][1], frac(-1, 2));
        assert!(parse_points("(1,2);(1)").is_err());
        assert!(parse_points("1,2").is_err());
    }
}
