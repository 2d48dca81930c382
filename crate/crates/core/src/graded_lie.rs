//! Finite-dimensional Z-graded Lie algebras given by structure constants.
//!
//! Brackets are stored only for basis pairs `i < j`; `[e_j, e_i]` and
//! `[e_i, e_i]` are synthesized, so antisymmetry cannot be violated.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{axpy, kernel_of_rows, CoordinateSystem, Matrix, Subspace};
use crate::scalar::{self, coeff_prefix, is_zero_vec, one, zeros, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub label: String,
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    basis: Vec<BasisElement>,
    brackets: BTreeMap<(usize, usize), Vec<Scalar>>,
}

impl GradedLieAlgebra {
    /// Validates index ranges, `i < j`, vector lengths and degree additivity.
    /// The Jacobi identity is *not* enforced here; see [`Self::check_jacobi`].
    pub fn new(basis: Vec<BasisElement>, brackets: BTreeMap<(usize, usize), Vec<Scalar>>) -> Result<Self> {
        let n = basis.len();
        let mut clean = BTreeMap::new();
        for ((i, j), v) in brackets {
            if i >= j || j >= n {
                return Err(Error::InvalidAlgebra(format!("bracket key ({i}, {j}) must satisfy i < j < {n}")));
            }
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
            let want = basis[i].degree + basis[j].degree;
            if let Some(w) = v.iter().enumerate().find(|(w, c)| !c.is_zero() && basis[*w].degree != want) {
                return Err(Error::InvalidAlgebra(format!(
                    "[{}, {}] has a component along {} of degree {}, expected degree {want}",
                    basis[i].label, basis[j].label, basis[w.0].label, basis[w.0].degree
                )));
            }
            if !is_zero_vec(&v) {
                clean.insert((i, j), v);
            }
        }
        Ok(GradedLieAlgebra { basis, brackets: clean })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn structure_constants(&self) -> &BTreeMap<(usize, usize), Vec<Scalar>> {
        &self.brackets
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => zeros(self.dim()),
            Less => self.brackets.get(&(i, j)).cloned().unwrap_or_else(|| zeros(self.dim())),
            Greater => match self.brackets.get(&(j, i)) {
                Some(v) => v.iter().map(|x| -x).collect(),
                None => zeros(self.dim()),
            },
        }
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        let n = self.dim();
        for v in [x, y] {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
        }
        let mut out = zeros(n);
        for (&(i, j), c) in &self.brackets {
            let f = &x[i] * &y[j] - &x[j] * &y[i];
            axpy(&mut out, &f, c);
        }
        Ok(out)
    }

    /// Basis triples `i < j < k` on which the Jacobiator is nonzero.
    pub fn check_jacobi(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut acc = zeros(n);
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = self.bracket_basis(b, c);
                        let outer = self.bracket(&scalar::unit(n, a), &inner).expect("lengths match");
                        axpy(&mut acc, &one(), &outer);
                    }
                    if !is_zero_vec(&acc) {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    pub fn indices_of_degree(&self, k: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) == k).collect()
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for b in &self.basis {
            *m.entry(b.degree).or_insert(0) += 1;
        }
        m
    }

    /// `d` for a negatively graded algebra concentrated in `[-d, -1]`.
    pub fn depth(&self) -> usize {
        self.basis.iter().map(|b| (-b.degree).max(0) as usize).max().unwrap_or(0)
    }

    pub fn is_negatively_graded(&self) -> bool {
        self.basis.iter().all(|b| b.degree <= -1)
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// Span of the iterated brackets of the degree -1 part, degree by degree.
    fn generated_span(&self) -> Subspace {
        let n = self.dim();
        let gens: Vec<usize> = self.indices_of_degree(-1);
        let mut layer: Vec<Vec<Scalar>> = gens.iter().map(|&i| scalar::unit(n, i)).collect();
        let mut all = layer.clone();
        for _ in 1..n.max(1) {
            let mut next = Vec::new();
            for &g in &gens {
                for v in &layer {
                    let b = self.bracket(&scalar::unit(n, g), v).expect("lengths match");
                    if !is_zero_vec(&b) {
                        next.push(b);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            let (reduced, _) = crate::linalg::rref(next, n);
            all.extend(reduced.iter().cloned());
            layer = reduced;
        }
        Subspace::span(n, all).expect("vectors of ambient length")
    }

    pub fn generated_in_degree_minus_one(&self) -> bool {
        self.generated_span().dim() == self.dim()
    }

    /// Re-expresses the algebra in a basis determined by its degree -1 part
    /// alone: degree `-(i+1)` is spanned greedily by `[e_a, b]` for `e_a` in
    /// degree -1 and `b` in the new degree `-i` basis, in index order. Two
    /// algebras that agree on this construction have identical constants.
    pub fn rebased_by_generators(&self) -> Result<GradedLieAlgebra> {
        if !self.is_negatively_graded() || !self.generated_in_degree_minus_one() {
            return Err(Error::InvalidAlgebra(
                "rebasing needs a negatively graded algebra generated in degree -1".into(),
            ));
        }
        let n = self.dim();
        let gens = self.indices_of_degree(-1);
        let mut new_basis: Vec<Vec<Scalar>> = gens.iter().map(|&i| scalar::unit(n, i)).collect();
        let mut elems: Vec<BasisElement> = gens.iter().map(|&i| self.basis[i].clone()).collect();
        let mut layer: Vec<Vec<Scalar>> = new_basis.clone();
        let mut deg = -1;
        while new_basis.len() < n {
            deg -= 1;
            let mut chosen: Vec<Vec<Scalar>> = Vec::new();
            let mut span = Subspace::zero(n);
            for &g in &gens {
                for v in &layer {
                    let b = self.bracket(&scalar::unit(n, g), v)?;
                    if !span.contains(&b) {
                        span = span.sum(&Subspace::span(n, vec![b.clone()])?)?;
                        chosen.push(b);
                    }
                }
            }
            if chosen.is_empty() {
                return Err(Error::Invariant("degree layer unexpectedly empty".into()));
            }
            for (t, _) in chosen.iter().enumerate() {
                elems.push(BasisElement { label: format!("g{deg}_{}", t + 1), degree: deg });
            }
            new_basis.extend(chosen.iter().cloned());
            layer = chosen;
        }
        let cs = CoordinateSystem::new(n, &new_basis)?;
        let mut brackets = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let b = self.bracket(&new_basis[i], &new_basis[j])?;
                let c = cs.coords(&b).ok_or_else(|| Error::Invariant("bracket outside new basis".into()))?;
                brackets.insert((i, j), c);
            }
        }
        GradedLieAlgebra::new(elems, brackets)
    }

    /// Same constants and degrees, ignoring labels.
    pub fn same_constants(&self, other: &GradedLieAlgebra) -> bool {
        self.dim() == other.dim()
            && self.basis.iter().zip(&other.basis).all(|(a, b)| a.degree == b.degree)
            && self.brackets == other.brackets
    }

    pub fn format_element(&self, v: &[Scalar]) -> String {
        format_combination(v, |i| self.label(i).to_string())
    }

    pub fn to_json(&self) -> AlgebraJson {
        AlgebraJson {
            basis: self.basis.clone(),
            brackets: self.brackets.iter().map(|(&(i, j), v)| BracketJson { i, j, value: v.clone() }).collect(),
        }
    }

    /// Loads a negatively graded Lie algebra; rejects nonnegative degrees
    /// and Jacobi failures.
    pub fn from_json(doc: &AlgebraJson) -> Result<Self> {
        let mut map = BTreeMap::new();
        for b in &doc.brackets {
            if map.insert((b.i, b.j), b.value.clone()).is_some() {
                return Err(Error::InvalidAlgebra(format!("duplicate bracket entry ({}, {})", b.i, b.j)));
            }
        }
        let g = GradedLieAlgebra::new(doc.basis.clone(), map)?;
        if let Some(b) = g.basis.iter().find(|b| b.degree >= 0) {
            return Err(Error::InvalidAlgebra(format!(
                "{} has degree {}, expected a negative degree",
                b.label, b.degree
            )));
        }
        if let Some(&(i, j, k)) = g.check_jacobi().first() {
            return Err(Error::InvalidAlgebra(format!(
                "Jacobi identity fails on ({}, {}, {})",
                g.label(i),
                g.label(j),
                g.label(k)
            )));
        }
        Ok(g)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: AlgebraJson = serde_json::from_str(s)?;
        Self::from_json(&doc)
    }
}

pub(crate) fn format_combination(v: &[Scalar], label: impl Fn(usize) -> String) -> String {
    let mut out = String::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        out.push_str(&coeff_prefix(c, out.is_empty()));
        out.push_str(&label(i));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub basis: Vec<BasisElement>,
    #[serde(default)]
    pub brackets: Vec<BracketJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    #[serde(with = "crate::scalar::serde_vec")]
    pub value: Vec<Scalar>,
}

fn elem(label: impl Into<String>, degree: i32) -> BasisElement {
    BasisElement { label: label.into(), degree }
}

pub fn abelian(n: usize) -> Result<GradedLieAlgebra> {
    if n == 0 {
        return Err(Error::InvalidParams("abelian needs n >= 1".into()));
    }
    GradedLieAlgebra::new((1..=n).map(|i| elem(format!("v{i}"), -1)).collect(), BTreeMap::new())
}

/// `p_1..p_r, q_1..q_r` in degree -1, `z` in degree -2, `[p_i, q_i] = z`.
pub fn heisenberg(r: usize) -> Result<GradedLieAlgebra> {
    if r == 0 {
        return Err(Error::InvalidParams("heisenberg needs r >= 1".into()));
    }
    let n = 2 * r + 1;
    let mut basis: Vec<BasisElement> = (1..=r).map(|i| elem(format!("p{i}"), -1)).collect();
    basis.extend((1..=r).map(|i| elem(format!("q{i}"), -1)));
    basis.push(elem("z", -2));
    let brackets = (0..r).map(|i| ((i, r + i), scalar::unit(n, 2 * r))).collect();
    GradedLieAlgebra::new(basis, brackets)
}

/// `y1, y2` (degree -1), `y3` (-2), `y4` (-3); `[y1,y2] = y3`, `[y1,y3] = y4`.
pub fn engel_symbol() -> GradedLieAlgebra {
    let basis = vec![elem("y1", -1), elem("y2", -1), elem("y3", -2), elem("y4", -3)];
    let brackets = BTreeMap::from([((0, 1), scalar::unit(4, 2)), ((0, 2), scalar::unit(4, 3))]);
    GradedLieAlgebra::new(basis, brackets).expect("engel constants are graded")
}

/// Resolves `abelian:N`, `heisenberg:R` (alias `heis:R`) and `engel`
/// (alias `engel_symbol`).
pub fn builtin(spec: &str) -> Result<GradedLieAlgebra> {
    let (name, param) = match spec.split_once(':') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (spec.trim(), None),
    };
    let num = |p: Option<&str>| -> Result<usize> {
        p.ok_or_else(|| Error::InvalidParams(format!("{name} needs a parameter, e.g. {name}:1")))?
            .parse::<usize>()
            .map_err(|_| Error::InvalidParams(format!("bad parameter for {name}")))
    };
    match name {
        "abelian" => abelian(num(param)?),
        "heisenberg" | "heis" => heisenberg(num(param)?),
        "engel" | "engel_symbol" => match param {
            None => Ok(engel_symbol()),
            Some(_) => Err(Error::InvalidParams("engel takes no parameter".into())),
        },
        _ => Err(Error::UnknownBuiltin(spec.to_string())),
    }
}

/// A space of homogeneous derivations of a graded algebra, each stored as a
/// matrix whose column `b` holds the coordinates of `D(e_b)`.
#[derive(Clone, Debug)]
pub struct DerivationSubalgebra {
    parent: GradedLieAlgebra,
    degree: i32,
    basis: Vec<Matrix>,
    labels: Vec<String>,
}

impl DerivationSubalgebra {
    /// Wraps user-supplied matrices after checking each is a derivation of
    /// the stated degree and that they are linearly independent.
    pub fn from_matrices(
        parent: &GradedLieAlgebra,
        degree: i32,
        basis: Vec<Matrix>,
        labels: Vec<String>,
    ) -> Result<Self> {
        let n = parent.dim();
        if labels.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), got: labels.len() });
        }
        for (t, m) in basis.iter().enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch { expected: n, got: m.nrows().max(m.ncols()) });
            }
            if !is_derivation(parent, degree, m) {
                return Err(Error::NotDerivation(t));
            }
        }
        let flat: Vec<Vec<Scalar>> = basis.iter().map(Matrix::flatten).collect();
        CoordinateSystem::new(n * n, &flat)?;
        Ok(DerivationSubalgebra { parent: parent.clone(), degree, basis, labels })
    }

    pub fn parent(&self) -> &GradedLieAlgebra {
        &self.parent
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.basis.len() {
            return Err(Error::DimensionMismatch { expected: self.basis.len(), got: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn coords(&self, m: &Matrix) -> Option<Vec<Scalar>> {
        let n = self.parent.dim();
        let flat: Vec<Vec<Scalar>> = self.basis.iter().map(Matrix::flatten).collect();
        CoordinateSystem::new(n * n, &flat).ok()?.coords(&m.flatten())
    }

    pub fn as_subspace(&self) -> Subspace {
        let n = self.parent.dim();
        Subspace::span(n * n, self.basis.iter().map(Matrix::flatten).collect()).expect("square matrices")
    }

    /// Pairs of basis elements whose commutator leaves the span (empty iff
    /// closed). Only meaningful for degree 0.
    pub fn closure_violations(&self) -> Vec<(usize, usize)> {
        let span = self.as_subspace();
        let mut bad = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let c = commutator(&self.basis[i], &self.basis[j]);
                if !span.contains(&c.flatten()) {
                    bad.push((i, j));
                }
            }
        }
        bad
    }

    /// Validates a user-supplied `g0` as a subalgebra of `(der g)_0`.
    pub fn validate_as_g0(&self) -> Result<()> {
        if self.degree != 0 {
            return Err(Error::InvalidParams("g0 must consist of degree-0 derivations".into()));
        }
        if let Some(&(i, j)) = self.closure_violations().first() {
            return Err(Error::NotSubalgebra(i, j));
        }
        Ok(())
    }
}

pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    let ab = a.mul(b).expect("square");
    let ba = b.mul(a).expect("square");
    ab.sub(&ba)
}

/// Checks `D[x,y] = [Dx,y] + [x,Dy]` on basis pairs and degree shift.
pub fn is_derivation(g: &GradedLieAlgebra, degree: i32, d: &Matrix) -> bool {
    let n = g.dim();
    for b in 0..n {
        for a in 0..n {
            if !d.get(a, b).is_zero() && g.degree(a) != g.degree(b) + degree {
                return false;
            }
        }
    }
    let col = |i: usize| d.column(i);
    for i in 0..n {
        for j in i + 1..n {
            let lhs = d.mul_vec(&g.bracket_basis(i, j)).expect("square");
            let mut rhs = g.bracket(&col(i), &scalar::unit(n, j)).expect("len");
            axpy(&mut rhs, &one(), &g.bracket(&scalar::unit(n, i), &col(j)).expect("len"));
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// All degree-`k` derivations of `g`, as the kernel of the linearized
/// Leibniz constraints.
pub fn derivations_of_degree(g: &GradedLieAlgebra, k: i32) -> DerivationSubalgebra {
    let n = g.dim();
    // unknown (a, b): coefficient of e_a in D(e_b)
    let vars: Vec<(usize, usize)> =
        (0..n).flat_map(|b| (0..n).map(move |a| (a, b))).filter(|&(a, b)| g.degree(a) == g.degree(b) + k).collect();
    let var_index: BTreeMap<(usize, usize), usize> = vars.iter().enumerate().map(|(t, &ab)| (ab, t)).collect();
    let nv = vars.len();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut eq = vec![zeros(nv); n];
            // D([e_i, e_j])
            for (w, c) in g.bracket_basis(i, j).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for a in 0..n {
                    if let Some(&t) = var_index.get(&(a, w)) {
                        eq[a][t] += c;
                    }
                }
            }
            // -[D e_i, e_j] - [e_i, D e_j]
            for a in 0..n {
                if let Some(&t) = var_index.get(&(a, i)) {
                    for (c, x) in g.bracket_basis(a, j).iter().enumerate() {
                        if !x.is_zero() {
                            eq[c][t] -= x;
                        }
                    }
                }
                if let Some(&t) = var_index.get(&(a, j)) {
                    for (c, x) in g.bracket_basis(i, a).iter().enumerate() {
                        if !x.is_zero() {
                            eq[c][t] -= x;
                        }
                    }
                }
            }
            rows.extend(eq.into_iter().filter(|r| !is_zero_vec(r)));
        }
    }
    let ker = kernel_of_rows(nv, rows).expect("row lengths match");
    let basis: Vec<Matrix> = ker
        .basis()
        .iter()
        .map(|v| {
            let mut m = Matrix::zero(n, n);
            for (t, &(a, b)) in vars.iter().enumerate() {
                if !v[t].is_zero() {
                    m.set(a, b, v[t].clone());
                }
            }
            m
        })
        .collect();
    let labels = (1..=basis.len()).map(|t| format!("g{k}_{t}")).collect();
    DerivationSubalgebra { parent: g.clone(), degree: k, basis, labels }
}

/// `o(n)` acting on an abelian algebra: `E_ij - E_ji` for `i < j`.
pub fn orthogonal(g: &GradedLieAlgebra) -> Result<DerivationSubalgebra> {
    if !g.is_abelian() || g.basis.iter().any(|b| b.degree != -1) {
        return Err(Error::InvalidParams("o(n) is only defined here for abelian(n)".into()));
    }
    let n = g.dim();
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut m = Matrix::zero(n, n);
            m.set(i, j, one());
            m.set(j, i, -one());
            basis.push(m);
            labels.push(format!("o{}{}", i + 1, j + 1));
        }
    }
    DerivationSubalgebra::from_matrices(g, 0, basis, labels)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationsJson {
    #[serde(default)]
    pub labels: Vec<String>,
    pub matrices: Vec<MatrixJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixJson(#[serde(with = "crate::scalar::serde_matrix")] pub Vec<Vec<Scalar>>);

impl DerivationSubalgebra {
    pub fn from_json_str(parent: &GradedLieAlgebra, s: &str) -> Result<Self> {
        let doc: DerivationsJson = serde_json::from_str(s)?;
        let n = parent.dim();
        let mut basis = Vec::new();
        for m in doc.matrices {
            basis.push(Matrix::from_rows(n, m.0)?);
        }
        let labels =
            if doc.labels.is_empty() { (1..=basis.len()).map(|t| format!("g0_{t}")).collect() } else { doc.labels };
        let d = DerivationSubalgebra::from_matrices(parent, 0, basis, labels)?;
        d.validate_as_g0()?;
        Ok(d)
    }

    pub fn to_json(&self) -> DerivationsJson {
        DerivationsJson {
            labels: self.labels.clone(),
            matrices: self.basis.iter().map(|m| MatrixJson(m.rows().to_vec())).collect(),
        }
    }
}
