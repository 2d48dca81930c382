//! Polynomial vector fields, 1-forms and Pfaff systems; the weight-graded
//! symmetry algebra of a Pfaff system and its abstract graded model.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::graded_lie::{BasisElement, DerivationSubalgebra, GradedLieAlgebra};
use crate::linalg::{kernel_of_rows, CoordinateSystem, Matrix, Subspace};
use crate::poly::{monomials_of_weight, write_terms, Monomial, Polynomial};
use crate::scalar::{frac, int, one, zeros, Scalar};

/// `Σ_i X_i ∂_i` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyVectorField {
    coeffs: Vec<Polynomial>,
}

impl PolyVectorField {
    pub fn new(coeffs: Vec<Polynomial>) -> Self {
        let n = coeffs.len();
        assert!(coeffs.iter().all(|p| p.n_vars() == n), "coefficient variable count");
        PolyVectorField { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        PolyVectorField { coeffs: vec![Polynomial::zero(n); n] }
    }

    /// `∂_{i+1}` (zero-based index).
    pub fn partial(n: usize, i: usize) -> Self {
        let mut f = Self::zero(n);
        f.coeffs[i] = Polynomial::one(n);
        f
    }

    pub fn n_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    /// `X(f) = Σ X_i ∂_i f`.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.n_vars());
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &(c * &f.derivative(i));
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        PolyVectorField { coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn mul_poly(&self, f: &Polynomial) -> Self {
        PolyVectorField { coeffs: self.coeffs.iter().map(|p| p * f).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n_vars(), other.n_vars(), "variable count");
        PolyVectorField { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n_vars(), other.n_vars(), "variable count");
        PolyVectorField { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn eval(&self, point: &[Scalar]) -> Vec<Scalar> {
        self.coeffs.iter().map(|p| p.eval(point)).collect()
    }

    /// Weight of `x^a ∂_i` is `Σ a_j w_j - w_i`; `None` if not homogeneous.
    pub fn weighted_degree(&self, g: &WeightedGrading) -> Option<i64> {
        let mut deg = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            for m in c.terms().keys() {
                let d = g.monomial_weight(m) - i64::from(g.weights[i]);
                if *deg.get_or_insert(d) != d {
                    return None;
                }
            }
        }
        deg
    }

    /// Coefficients keyed by `(component, monomial)`.
    pub fn flat_terms(&self) -> impl Iterator<Item = ((usize, &Monomial), &Scalar)> {
        self.coeffs.iter().enumerate().flat_map(|(i, p)| p.terms().iter().map(move |(m, c)| ((i, m), c)))
    }
}

impl fmt::Display for PolyVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.n_vars()).map(|i| format!("d{i}")).collect();
        write_terms(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .flat_map(|(i, p)| p.terms().iter().map(move |(m, c)| (m.as_slice(), c, i)))
                .map(|(m, c, i)| (m, c, Some(names[i].as_str()))),
        )
    }
}

pub fn vf_bracket(x: &PolyVectorField, y: &PolyVectorField) -> Result<PolyVectorField> {
    if x.n_vars() != y.n_vars() {
        return Err(Error::DimensionMismatch { expected: x.n_vars(), got: y.n_vars() });
    }
    let coeffs = (0..x.n_vars()).map(|i| &x.apply(&y.coeffs[i]) - &y.apply(&x.coeffs[i])).collect();
    Ok(PolyVectorField { coeffs })
}

/// `Σ_i a_i dx_i` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OneForm {
    coeffs: Vec<Polynomial>,
}

impl OneForm {
    pub fn new(coeffs: Vec<Polynomial>) -> Self {
        let n = coeffs.len();
        assert!(coeffs.iter().all(|p| p.n_vars() == n), "coefficient variable count");
        OneForm { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        OneForm { coeffs: vec![Polynomial::zero(n); n] }
    }

    pub fn n_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    pub fn mul_poly(&self, f: &Polynomial) -> Self {
        OneForm { coeffs: self.coeffs.iter().map(|p| p * f).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        OneForm { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        OneForm { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    /// `α(X)`.
    pub fn contract(&self, x: &PolyVectorField) -> Polynomial {
        let mut out = Polynomial::zero(self.n_vars());
        for (a, c) in self.coeffs.iter().zip(x.coeffs()) {
            out = &out + &(a * c);
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> Vec<Scalar> {
        self.coeffs.iter().map(|p| p.eval(point)).collect()
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.n_vars()).map(|i| format!("dx{i}")).collect();
        write_terms(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .flat_map(|(i, p)| p.terms().iter().map(move |(m, c)| (m.as_slice(), c, i)))
                .map(|(m, c, i)| (m, c, Some(names[i].as_str()))),
        )
    }
}

/// `(L_X α)_j = Σ_i X_i ∂_i α_j + α_i ∂_j X_i`.
pub fn lie_derivative(x: &PolyVectorField, a: &OneForm) -> Result<OneForm> {
    if x.n_vars() != a.n_vars() {
        return Err(Error::DimensionMismatch { expected: x.n_vars(), got: a.n_vars() });
    }
    let n = x.n_vars();
    let coeffs = (0..n)
        .map(|j| {
            let mut c = x.apply(&a.coeffs[j]);
            for i in 0..n {
                if !a.coeffs[i].is_zero() {
                    c = &c + &(&a.coeffs[i] * &x.coeffs()[i].derivative(j));
                }
            }
            c
        })
        .collect();
    Ok(OneForm { coeffs })
}

/// Positive integer weights of the coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGrading {
    pub weights: Vec<u32>,
}

impl WeightedGrading {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if weights.is_empty() || weights.contains(&0) {
            return Err(Error::InvalidParams("weights must be positive".into()));
        }
        Ok(WeightedGrading { weights })
    }

    pub fn monomial_weight(&self, m: &[u32]) -> i64 {
        m.iter().zip(&self.weights).map(|(&a, &w)| i64::from(a) * i64::from(w)).sum()
    }

    /// All monomial fields `x^a ∂_i` of weight `k`, in a fixed order.
    pub fn monomial_fields(&self, k: i64) -> Vec<(usize, Monomial)> {
        let mut out = Vec::new();
        for (i, &w) in self.weights.iter().enumerate() {
            for m in monomials_of_weight(&self.weights, k + i64::from(w)) {
                out.push((i, m));
            }
        }
        out
    }
}

/// Forms in unit-pivot echelon shape: form `j` has coefficient 1 at
/// `pivots[j]` and every other form has 0 there.
#[derive(Clone, Debug)]
pub struct ReducedPfaff {
    pub forms: Vec<OneForm>,
    pub pivots: Vec<usize>,
}

/// Pfaff system `α_1 = ... = α_k = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfaffSystem {
    n_vars: usize,
    forms: Vec<OneForm>,
}

impl PfaffSystem {
    /// Rejects forms of the wrong size and forms dependent at the origin.
    pub fn new(n_vars: usize, forms: Vec<OneForm>) -> Result<Self> {
        if let Some(f) = forms.iter().find(|f| f.n_vars() != n_vars) {
            return Err(Error::DimensionMismatch { expected: n_vars, got: f.n_vars() });
        }
        let s = PfaffSystem { n_vars, forms };
        if !s.independent_at(&zeros(n_vars)) {
            return Err(Error::DependentFields);
        }
        Ok(s)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn forms(&self) -> &[OneForm] {
        &self.forms
    }

    pub fn independent_at(&self, point: &[Scalar]) -> bool {
        let rows: Vec<Vec<Scalar>> = self.forms.iter().map(|f| f.eval(point)).collect();
        crate::linalg::rank(&Matrix::from_rows(self.n_vars, rows).expect("row length")) == self.forms.len()
    }

    /// Fraction-free Gauss-Jordan over the polynomial ring. Returns the
    /// reduced forms, their pivot columns and the pivot entries; constant
    /// pivots are preferred and normalized to 1.
    pub fn echelon(&self) -> (Vec<OneForm>, Vec<usize>, Vec<Polynomial>) {
        let n = self.n_vars;
        let mut forms = self.forms.clone();
        let mut pivots = Vec::new();
        let mut pivot_entries = Vec::new();
        for j in 0..forms.len() {
            let choice = (0..n).filter(|c| !pivots.contains(c) && !forms[j].coeffs[*c].is_zero()).min_by_key(|&c| {
                let p = &forms[j].coeffs[c];
                (p.as_constant().is_none(), p.total_degree().unwrap_or(0), p.terms().len(), c)
            });
            let Some(c) = choice else { continue };
            if let Some(k) = forms[j].coeffs[c].as_constant() {
                let inv = Polynomial::constant(n, k.recip());
                forms[j] = forms[j].mul_poly(&inv);
            }
            let p = forms[j].coeffs[c].clone();
            for other in 0..forms.len() {
                if other == j || forms[other].coeffs[c].is_zero() {
                    continue;
                }
                let q = forms[other].coeffs[c].clone();
                forms[other] = if p.as_constant() == Some(one()) {
                    forms[other].sub(&forms[j].mul_poly(&q))
                } else {
                    forms[other].mul_poly(&p).sub(&forms[j].mul_poly(&q))
                };
            }
            pivots.push(c);
            pivot_entries.push(p);
        }
        (forms, pivots, pivot_entries)
    }

    /// Unit-pivot shape if one exists via constant pivots.
    pub fn reduced(&self) -> Option<ReducedPfaff> {
        let (forms, pivots, entries) = self.echelon();
        (pivots.len() == self.forms.len() && entries.iter().all(|p| p.as_constant() == Some(one())))
            .then_some(ReducedPfaff { forms, pivots })
    }
}

impl ReducedPfaff {
    /// `β - Σ_j β[p_j] α_j`; zero iff `β` lies in the span of the forms.
    pub fn residual(&self, beta: &OneForm) -> OneForm {
        let mut r = beta.clone();
        for (a, &p) in self.forms.iter().zip(&self.pivots) {
            let c = beta.coeffs[p].clone();
            if !c.is_zero() {
                r = r.sub(&a.mul_poly(&c));
            }
        }
        r
    }
}

/// Decides whether `β = Σ f_k α_k` has polynomial solutions with
/// `deg f_k ≤ bound`, by exact linear algebra on the coefficients.
pub fn in_span_bounded(beta: &OneForm, forms: &[OneForm], bound: u32) -> bool {
    if beta.is_zero() {
        return true;
    }
    if forms.is_empty() {
        return false;
    }
    let n = beta.n_vars();
    let monos: Vec<Monomial> = (0..=bound).flat_map(|d| monomials_of_weight(&vec![1; n], i64::from(d))).collect();
    let mut index: HashMap<(usize, Monomial), usize> = HashMap::new();
    let mut columns: Vec<BTreeMap<usize, Scalar>> = Vec::new();
    let key = |k: (usize, Monomial), index: &mut HashMap<(usize, Monomial), usize>| {
        let len = index.len();
        *index.entry(k).or_insert(len)
    };
    for a in forms {
        for m in &monos {
            let mono = Polynomial::monomial(n, m.clone(), one());
            let prod = a.mul_poly(&mono);
            let mut col = BTreeMap::new();
            for (j, p) in prod.coeffs.iter().enumerate() {
                for (mm, c) in p.terms() {
                    col.insert(key((j, mm.clone()), &mut index), c.clone());
                }
            }
            columns.push(col);
        }
    }
    let mut target = BTreeMap::new();
    for (j, p) in beta.coeffs.iter().enumerate() {
        for (mm, c) in p.terms() {
            target.insert(key((j, mm.clone()), &mut index), c.clone());
        }
    }
    let rows = index.len();
    let dense = |col: &BTreeMap<usize, Scalar>| {
        let mut v = zeros(rows);
        for (&i, c) in col {
            v[i] = c.clone();
        }
        v
    };
    let span = Subspace::span(rows, columns.iter().map(dense).collect()).expect("uniform length");
    span.contains(&dense(&target))
}

/// True iff `L_X α_k` lies in the polynomial span of the system for every
/// `k`. Exact for systems with a unit-pivot shape; otherwise multipliers are
/// searched up to the degree of `L_X α_k`.
pub fn preserves_pfaff(x: &PolyVectorField, p: &PfaffSystem) -> Result<bool> {
    if x.n_vars() != p.n_vars() {
        return Err(Error::DimensionMismatch { expected: p.n_vars(), got: x.n_vars() });
    }
    if let Some(red) = p.reduced() {
        for a in &red.forms {
            if !red.residual(&lie_derivative(x, a)?).is_zero() {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    for a in p.forms() {
        let beta = lie_derivative(x, a)?;
        let bound = beta.coeffs.iter().filter_map(Polynomial::total_degree).max().unwrap_or(0);
        if !in_span_bounded(&beta, p.forms(), bound) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Basis (canonical echelon in the monomial-field order of
/// [`WeightedGrading::monomial_fields`]) of all weight-`k` polynomial fields
/// preserving `p`. Needs a unit-pivot shape.
pub fn preserving_fields_of_weight(p: &PfaffSystem, g: &WeightedGrading, k: i64) -> Result<Vec<PolyVectorField>> {
    if g.weights.len() != p.n_vars() {
        return Err(Error::DimensionMismatch { expected: p.n_vars(), got: g.weights.len() });
    }
    let red = p.reduced().ok_or_else(|| Error::Unsupported("system without a unit-pivot shape".into()))?;
    let n = p.n_vars();
    let unknowns = g.monomial_fields(k);
    let mut index: HashMap<(usize, usize, Monomial), usize> = HashMap::new();
    let mut cols: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for (i, m) in &unknowns {
        let mut x = PolyVectorField::zero(n);
        x.coeffs[*i] = Polynomial::monomial(n, m.clone(), one());
        let mut col = Vec::new();
        for (f, a) in red.forms.iter().enumerate() {
            let r = red.residual(&lie_derivative(&x, a)?);
            for (j, q) in r.coeffs.iter().enumerate() {
                for (mm, c) in q.terms() {
                    let len = index.len();
                    let row = *index.entry((f, j, mm.clone())).or_insert(len);
                    col.push((row, c.clone()));
                }
            }
        }
        cols.push(col);
    }
    let mut rows = vec![zeros(unknowns.len()); index.len()];
    for (u, col) in cols.iter().enumerate() {
        for (r, c) in col {
            rows[*r][u] = c.clone();
        }
    }
    let kernel = kernel_of_rows(unknowns.len(), rows)?;
    Ok(kernel
        .basis()
        .iter()
        .map(|v| {
            let mut x = PolyVectorField::zero(n);
            for ((i, m), c) in unknowns.iter().zip(v) {
                x.coeffs[*i].add_term(m.clone(), c.clone());
            }
            x
        })
        .collect())
}

/// A named homogeneous field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledField {
    pub label: String,
    pub field: PolyVectorField,
    pub degree: i32,
}

impl LabeledField {
    pub fn new(label: &str, field: PolyVectorField, degree: i32) -> Self {
        LabeledField { label: label.to_string(), field, degree }
    }
}

/// The Pfaff system `dx4 - x3 dx1 = dx3 - x2 dx1 = 0` on four variables.
pub fn engel_pfaff() -> PfaffSystem {
    crate::expr::parse_pfaff("dx4 - x3*dx1; dx3 - x2*dx1", Some(4)).expect("static system")
}

pub fn engel_weights() -> WeightedGrading {
    WeightedGrading::new(vec![1, 1, 2, 3]).expect("static weights")
}

/// `X_n = x1^(n+1) ∂2 + x1^(n+2)/(n+2) ∂3 + x1^(n+3)/((n+2)(n+3)) ∂4`,
/// `n ≥ -1`.
pub fn engel_x(n: i32) -> PolyVectorField {
    assert!(n >= -1);
    let a = (n + 1) as u32;
    let x1 = |k: u32, c: Scalar| Polynomial::monomial(4, vec![k, 0, 0, 0], c);
    let nn = i64::from(n);
    PolyVectorField::new(vec![
        Polynomial::zero(4),
        x1(a, one()),
        x1(a + 1, frac(1, nn + 2)),
        x1(a + 2, frac(1, (nn + 2) * (nn + 3))),
    ])
}

/// Named symmetries of the Engel system: `d4`; `D3`; `d1`, `X-1`;
/// `E`, `H`, `X0`; `X1`..`X{max_degree}`, each with its weight.
pub fn engel_basis(max_degree: i32) -> Vec<LabeledField> {
    let f = |s: &str| crate::expr::parse_field(s, Some(4)).expect("static field");
    let all = vec![
        LabeledField::new("d4", f("d4"), -3),
        LabeledField::new("D3", f("d3 + x1*d4"), -2),
        LabeledField::new("d1", f("d1"), -1),
        LabeledField::new("X-1", engel_x(-1), -1),
        LabeledField::new("E", f("x1*d1 + x2*d2 + 2*x3*d3 + 3*x4*d4"), 0),
        LabeledField::new("H", f("x1*d1 - x2*d2 + x4*d4"), 0),
        LabeledField::new("X0", engel_x(0), 0),
    ];
    let mut out: Vec<LabeledField> = all.into_iter().filter(|l| l.degree <= max_degree).collect();
    for n in 1..=max_degree {
        out.push(LabeledField::new(&format!("X{n}"), engel_x(n), n));
    }
    out
}

/// Linear coordinates of fields with respect to a fixed independent list.
#[derive(Clone, Debug)]
pub struct FieldBasis {
    keys: HashMap<(usize, Monomial), usize>,
    coords: CoordinateSystem,
}

impl FieldBasis {
    pub fn new(fields: &[PolyVectorField]) -> Result<Self> {
        let mut keys = HashMap::new();
        for f in fields {
            for ((i, m), _) in f.flat_terms() {
                let len = keys.len();
                keys.entry((i, m.clone())).or_insert(len);
            }
        }
        let vecs: Vec<Vec<Scalar>> = fields.iter().map(|f| Self::flatten_with(&keys, f).expect("known keys")).collect();
        let coords = CoordinateSystem::new(keys.len(), &vecs)?;
        if coords.dim() != fields.len() {
            return Err(Error::InvalidParams("fields are linearly dependent".into()));
        }
        Ok(FieldBasis { keys, coords })
    }

    fn flatten_with(keys: &HashMap<(usize, Monomial), usize>, f: &PolyVectorField) -> Option<Vec<Scalar>> {
        let mut v = zeros(keys.len());
        for ((i, m), c) in f.flat_terms() {
            v[*keys.get(&(i, m.clone()))?] = c.clone();
        }
        Some(v)
    }

    /// Coordinates of `f`, or `None` outside the span.
    pub fn express(&self, f: &PolyVectorField) -> Option<Vec<Scalar>> {
        self.coords.coords(&Self::flatten_with(&self.keys, f)?)
    }
}

/// Structure constants of a bracket-closed list of homogeneous fields.
pub fn graded_model(fields: &[LabeledField], g: &WeightedGrading) -> Result<GradedLieAlgebra> {
    for (i, f) in fields.iter().enumerate() {
        if f.field.weighted_degree(g) != Some(i64::from(f.degree)) {
            return Err(Error::InvalidParams(format!(
                "field {i} ({}) is not homogeneous of degree {}",
                f.label, f.degree
            )));
        }
    }
    let plain: Vec<PolyVectorField> = fields.iter().map(|f| f.field.clone()).collect();
    let basis = FieldBasis::new(&plain)?;
    let mut brackets = BTreeMap::new();
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            let b = vf_bracket(&plain[i], &plain[j])?;
            if b.is_zero() {
                continue;
            }
            let c = basis.express(&b).ok_or(Error::NotClosed(i, j))?;
            brackets.insert((i, j), c);
        }
    }
    let elems = fields.iter().map(|f| BasisElement { label: f.label.clone(), degree: f.degree }).collect();
    GradedLieAlgebra::new(elems, brackets)
}

/// Pairs `(i, j)` with `deg_i + deg_j ≤ max_degree` whose bracket leaves the
/// span of `fields`.
pub fn bracket_closure_violations(fields: &[LabeledField], max_degree: i32) -> Result<Vec<(usize, usize)>> {
    let plain: Vec<PolyVectorField> = fields.iter().map(|f| f.field.clone()).collect();
    let basis = FieldBasis::new(&plain)?;
    let mut bad = Vec::new();
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            if fields[i].degree + fields[j].degree > max_degree {
                continue;
            }
            let b = vf_bracket(&plain[i], &plain[j])?;
            if !b.is_zero() && basis.express(&b).is_none() {
                bad.push((i, j));
            }
        }
    }
    Ok(bad)
}

/// The derivation `v ↦ [z, v]` of the model algebra spanned by `negative`,
/// as a matrix whose column `b` holds the image of basis element `b`.
pub fn induced_derivation(z: &PolyVectorField, negative: &[LabeledField]) -> Result<Matrix> {
    let plain: Vec<PolyVectorField> = negative.iter().map(|f| f.field.clone()).collect();
    let basis = FieldBasis::new(&plain)?;
    let n = plain.len();
    let mut m = Matrix::zero(n, n);
    for (b, f) in plain.iter().enumerate() {
        let img = vf_bracket(z, f)?;
        let c = basis.express(&img).ok_or(Error::NotClosed(b, b))?;
        for (a, x) in c.into_iter().enumerate() {
            m.set(a, b, x);
        }
    }
    Ok(m)
}

/// The subalgebra of degree-0 derivations induced by `zeros`, labelled by
/// their field names.
pub fn induced_g0(
    g: &GradedLieAlgebra,
    zeros_: &[LabeledField],
    negative: &[LabeledField],
) -> Result<DerivationSubalgebra> {
    let mats = zeros_.iter().map(|z| induced_derivation(&z.field, negative)).collect::<Result<Vec<_>>>()?;
    let labels = zeros_.iter().map(|z| z.label.clone()).collect();
    DerivationSubalgebra::from_matrices(g, 0, mats, labels)
}

/// Field `Σ c_i ∂_i` with constant coefficients.
pub fn constant_field(c: &[Scalar]) -> PolyVectorField {
    let n = c.len();
    PolyVectorField::new(c.iter().map(|x| Polynomial::constant(n, x.clone())).collect())
}

pub fn int_field(c: &[i64]) -> PolyVectorField {
    constant_field(&c.iter().map(|&x| int(x)).collect::<Vec<_>>())
}
