//! Distributions given by spanning polynomial fields or by a Pfaff system:
//! the flag `D_1 ⊂ D_2 ⊂ ...` at a point, regularity on sample points, and
//! the graded symbol algebra.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{parse_field, parse_pfaff, parse_points};
use crate::graded_lie::{BasisElement, GradedLieAlgebra};
use crate::linalg::{rank, CoordinateSystem, Matrix, Subspace};
use crate::poly::{Monomial, Polynomial};
use crate::scalar::{format_rational, frac, int, zeros, Scalar};
use crate::vf::{vf_bracket, PfaffSystem, PolyVectorField};

const MAX_LEVELS: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    n_vars: usize,
    fields: Vec<PolyVectorField>,
}

impl Distribution {
    pub fn from_fields(fields: Vec<PolyVectorField>) -> Result<Self> {
        let n_vars = fields
            .first()
            .map(PolyVectorField::n_vars)
            .ok_or_else(|| Error::InvalidParams("a distribution needs at least one field".into()))?;
        if let Some(f) = fields.iter().find(|f| f.n_vars() != n_vars) {
            return Err(Error::DimensionMismatch { expected: n_vars, got: f.n_vars() });
        }
        Ok(Distribution { n_vars, fields })
    }

    /// Kernel of the system, cleared of denominators: for each non-pivot
    /// column `c`, `P ∂_c - Σ_j (P / P_j) a_{jc} ∂_{p_j}` with `P = Π P_j`.
    pub fn from_pfaff(p: &PfaffSystem) -> Result<Self> {
        let n = p.n_vars();
        let (forms, pivots, entries) = p.echelon();
        if pivots.len() != p.forms().len() {
            return Err(Error::DependentFields);
        }
        if pivots.len() == n {
            return Err(Error::InvalidParams("the system annihilates every direction".into()));
        }
        let product_except = |skip: Option<usize>| {
            entries
                .iter()
                .enumerate()
                .filter(|&(m, _)| Some(m) != skip)
                .fold(Polynomial::one(n), |acc, (_, q)| &acc * q)
        };
        let total = product_except(None);
        let mut fields = Vec::new();
        for c in (0..n).filter(|c| !pivots.contains(c)) {
            let mut coeffs = vec![Polynomial::zero(n); n];
            coeffs[c] = total.clone();
            for (j, &pj) in pivots.iter().enumerate() {
                coeffs[pj] = -&(&product_except(Some(j)) * &forms[j].coeffs()[c]);
            }
            fields.push(PolyVectorField::new(coeffs));
        }
        Distribution::from_fields(fields)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn fields(&self) -> &[PolyVectorField] {
        &self.fields
    }
}

/// Subset of `fields` that is linearly independent over the rationals.
fn rational_basis(fields: Vec<PolyVectorField>) -> Vec<PolyVectorField> {
    let mut keys: HashMap<(usize, Monomial), usize> = HashMap::new();
    for f in &fields {
        for ((i, m), _) in f.flat_terms() {
            let len = keys.len();
            keys.entry((i, m.clone())).or_insert(len);
        }
    }
    let flat = |f: &PolyVectorField| {
        let mut v = zeros(keys.len());
        for ((i, m), c) in f.flat_terms() {
            v[keys[&(i, m.clone())]] = c.clone();
        }
        v
    };
    let mut span = Subspace::zero(keys.len());
    let mut out = Vec::new();
    for f in fields {
        let v = flat(&f);
        if !span.contains(&v) {
            span = span.sum(&Subspace::span(keys.len(), vec![v]).expect("length")).expect("length");
            out.push(f);
        }
    }
    out
}

/// Iterated brackets of the generators up to the stall of the pointwise
/// rank, with a frame of fields adapted to the flag at the point.
struct Flag {
    dims: Vec<usize>,
    /// `(field, level)`; level `i` means the value is new in `D_i`.
    frame: Vec<(PolyVectorField, usize)>,
}

fn flag(dist: &Distribution, point: &[Scalar]) -> Result<Flag> {
    let n = dist.n_vars;
    if point.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: point.len() });
    }
    let values: Vec<Vec<Scalar>> = dist.fields.iter().map(|f| f.eval(point)).collect();
    if rank(&Matrix::from_rows(n, values.clone())?) != dist.fields.len() {
        return Err(Error::DependentFields);
    }
    let mut span = Subspace::span(n, values)?;
    let mut dims = vec![span.dim()];
    let mut frame: Vec<(PolyVectorField, usize)> = dist.fields.iter().map(|f| (f.clone(), 1)).collect();
    let mut all = rational_basis(dist.fields.clone());
    let mut level = all.clone();
    while dims.len() < MAX_LEVELS && span.dim() < n {
        let mut next = Vec::new();
        for g in &dist.fields {
            for h in &level {
                let b = vf_bracket(g, h)?;
                if !b.is_zero() {
                    next.push(b);
                }
            }
        }
        let mut combined = all.clone();
        combined.extend(next);
        let grown = rational_basis(combined);
        level = grown[all.len()..].to_vec();
        all = grown;
        let lvl = dims.len() + 1;
        for f in &level {
            let v = f.eval(point);
            if !span.contains(&v) {
                span = span.sum(&Subspace::span(n, vec![v])?)?;
                frame.push((f.clone(), lvl));
            }
        }
        if span.dim() == *dims.last().unwrap() {
            break;
        }
        dims.push(span.dim());
    }
    Ok(Flag { dims, frame })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthVector {
    pub point: Vec<Scalar>,
    pub dims: Vec<usize>,
    pub n_vars: usize,
}

impl GrowthVector {
    pub fn depth(&self) -> usize {
        self.dims.len()
    }

    pub fn completely_nonholonomic(&self) -> bool {
        self.dims.last() == Some(&self.n_vars)
    }

    pub fn nonholonomic(&self) -> bool {
        self.depth() != 1
    }

    pub fn to_json(&self) -> GrowthJson {
        GrowthJson {
            point: self.point.iter().map(format_rational).collect(),
            dims: self.dims.clone(),
            depth: self.depth(),
            n_vars: self.n_vars,
            completely_nonholonomic: self.completely_nonholonomic(),
            nonholonomic: self.nonholonomic(),
        }
    }

    pub fn format_point(&self) -> String {
        format!("({})", self.point.iter().map(format_rational).collect::<Vec<_>>().join(","))
    }

    pub fn format_dims(&self) -> String {
        format!("({})", self.dims.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthJson {
    pub point: Vec<String>,
    pub dims: Vec<usize>,
    pub depth: usize,
    pub n_vars: usize,
    pub completely_nonholonomic: bool,
    pub nonholonomic: bool,
}

/// Dimensions of `D_1|x ⊂ D_2|x ⊂ ...`, where `D_{i+1}` is spanned by
/// `D_i` and `[D_1, D_i]`; stops once the rank stops growing.
pub fn flag_at_point(dist: &Distribution, point: &[Scalar]) -> Result<GrowthVector> {
    let f = flag(dist, point)?;
    Ok(GrowthVector { point: point.to_vec(), dims: f.dims, n_vars: dist.n_vars })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub entries: Vec<GrowthVector>,
}

impl RegularityReport {
    pub fn regular(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].dims == w[1].dims)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = writeln!(
                s,
                "point {}: growth {}, depth {}{}",
                e.format_point(),
                e.format_dims(),
                e.depth(),
                if e.completely_nonholonomic() { "" } else { ", not completely nonholonomic" }
            );
        }
        let _ = writeln!(
            s,
            "{}",
            if self.regular() { "regular on the sample" } else { "IRREGULAR: growth vectors differ" }
        );
        s
    }

    pub fn to_json(&self) -> RegularityJson {
        RegularityJson { regular: self.regular(), points: self.entries.iter().map(GrowthVector::to_json).collect() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityJson {
    pub regular: bool,
    pub points: Vec<GrowthJson>,
}

pub fn regularity_scan(dist: &Distribution, points: &[Vec<Scalar>]) -> Result<RegularityReport> {
    if points.is_empty() {
        return Err(Error::InvalidParams("regularity scan needs at least one point".into()));
    }
    let entries = points.iter().map(|p| flag_at_point(dist, p)).collect::<Result<Vec<_>>>()?;
    Ok(RegularityReport { entries })
}

/// Origin, `(1,..,1)`, `(1,2,..,n)` and `(-1, 1/2, -1/3, ..)`.
pub fn default_points(n: usize) -> Vec<Vec<Scalar>> {
    let signed = |i: usize| {
        let k = i as i64 + 1;
        if i.is_multiple_of(2) {
            frac(-1, k)
        } else {
            frac(1, k)
        }
    };
    vec![zeros(n), vec![int(1); n], (0..n).map(|i| int(i as i64 + 1)).collect(), (0..n).map(signed).collect()]
}

/// Graded nilpotent algebra `⊕ D_i|x / D_{i-1}|x`; basis `y1, y2, ..` in
/// flag order, bracket read off the field brackets at the point.
pub fn symbol_algebra(dist: &Distribution, point: &[Scalar]) -> Result<GradedLieAlgebra> {
    let f = flag(dist, point)?;
    let n = dist.n_vars;
    let values: Vec<Vec<Scalar>> = f.frame.iter().map(|(x, _)| x.eval(point)).collect();
    let coords = CoordinateSystem::new(n, &values)?;
    let depth = f.dims.len();
    let mut brackets = BTreeMap::new();
    for a in 0..f.frame.len() {
        for b in a + 1..f.frame.len() {
            let (la, lb) = (f.frame[a].1, f.frame[b].1);
            let w = vf_bracket(&f.frame[a].0, &f.frame[b].0)?.eval(point);
            let c = coords
                .coords(&w)
                .ok_or_else(|| Error::Irregular(format!("bracket of y{} and y{} leaves the flag", a + 1, b + 1)))?;
            let target = la + lb;
            let mut out = zeros(f.frame.len());
            for (e, (_, le)) in f.frame.iter().enumerate() {
                if c[e] == Scalar::from_integer(0.into()) {
                    continue;
                }
                if *le > target.min(depth) {
                    return Err(Error::Irregular(format!(
                        "bracket of y{} and y{} is not in D_{} at the point",
                        a + 1,
                        b + 1,
                        target
                    )));
                }
                if *le == target {
                    out[e] = c[e].clone();
                }
            }
            if out.iter().any(|x| *x != Scalar::from_integer(0.into())) {
                brackets.insert((a, b), out);
            }
        }
    }
    let basis = f
        .frame
        .iter()
        .enumerate()
        .map(|(i, (_, l))| BasisElement { label: format!("y{}", i + 1), degree: -(*l as i32) })
        .collect();
    let g = GradedLieAlgebra::new(basis, brackets)?;
    if !g.check_jacobi().is_empty() {
        return Err(Error::Irregular("induced bracket violates the Jacobi identity".into()));
    }
    Ok(g)
}

/// JSON job describing a distribution and where to sample it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionJob {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_vars: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pfaff: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fields: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<String>,
}

impl DistributionJob {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn distribution(&self) -> Result<Distribution> {
        match (&self.pfaff, &self.fields) {
            (Some(p), None) => Distribution::from_pfaff(&parse_pfaff(p, self.n_vars)?),
            (None, Some(fs)) => {
                let n = match self.n_vars {
                    Some(n) => n,
                    None => fs.iter().map(|s| crate::expr::max_index(s)).max().unwrap_or(0),
                };
                Distribution::from_fields(fs.iter().map(|s| parse_field(s, Some(n))).collect::<Result<Vec<_>>>()?)
            }
            _ => Err(Error::InvalidParams("a job needs exactly one of \"pfaff\" or \"fields\"".into())),
        }
    }

    pub fn points(&self, n: usize) -> Result<Vec<Vec<Scalar>>> {
        let pts = match &self.points {
            Some(s) => parse_points(s)?,
            None => default_points(n),
        };
        if let Some(p) = pts.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: p.len() });
        }
        Ok(pts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_lie::{engel_symbol, heisenberg};
    use crate::vf::engel_pfaff;

    fn engel() -> Distribution {
        Distribution::from_pfaff(&engel_pfaff()).unwrap()
    }

    #[test]
    fn engel_spanning_fields() {
        let d = engel();
        let s: Vec<String> = d.fields().iter().map(ToString::to_string).collect();
        assert_eq!(s, vec!["d1 + x2*d3 + x3*d4", "d2"]);
    }

    #[test]
    fn engel_growth() {
        let d = engel();
        for p in [zeros(4), vec![int(1); 4]] {
            let g = flag_at_point(&d, &p).unwrap();
            assert_eq!(g.dims, vec![2, 3, 4]);
            assert!(g.completely_nonholonomic());
        }
        assert!(regularity_scan(&d, &default_points(4)).unwrap().regular());
    }

    #[test]
    fn contact_growth_and_symbol() {
        for r in 1..=2usize {
            let n = 2 * r + 1;
            let mut src = format!("dx{n}");
            for i in 1..=r {
                src.push_str(&format!(" + x{i}*dx{} - x{}*dx{i}", i + r, i + r));
            }
            let d = Distribution::from_pfaff(&parse_pfaff(&src, Some(n)).unwrap()).unwrap();
            let g = flag_at_point(&d, &zeros(n)).unwrap();
            assert_eq!(g.dims, vec![2 * r, n]);
            let s = symbol_algebra(&d, &zeros(n)).unwrap();
            let want = heisenberg(r).unwrap().rebased_by_generators().unwrap();
            assert!(s.rebased_by_generators().unwrap().same_constants(&want));
        }
    }

    #[test]
    fn integrable() {
        let d =
            Distribution::from_fields(vec![PolyVectorField::partial(4, 0), PolyVectorField::partial(4, 1)]).unwrap();
        let g = flag_at_point(&d, &zeros(4)).unwrap();
        assert_eq!(g.dims, vec![2]);
        assert!(!g.nonholonomic());
        assert!(!g.completely_nonholonomic());
        assert!(symbol_algebra(&d, &zeros(4)).unwrap().is_abelian());
    }

    #[test]
    fn martinet_is_flagged() {
        let d = Distribution::from_pfaff(&parse_pfaff("dx3 - x2^2*dx1", Some(3)).unwrap()).unwrap();
        let r = regularity_scan(&d, &parse_points("(0,0,0);(0,1,0)").unwrap()).unwrap();
        assert!(!r.regular());
        assert_eq!(r.entries[0].dims, vec![2]);
        assert_eq!(r.entries[1].dims, vec![2, 3]);
    }

    #[test]
    fn engel_symbol_matches_builtin() {
        let s = symbol_algebra(&engel(), &zeros(4)).unwrap();
        let a = s.rebased_by_generators().unwrap();
        let b = engel_symbol().rebased_by_generators().unwrap();
        assert!(a.same_constants(&b));
        assert!(s.generated_in_degree_minus_one());
    }

    #[test]
    fn dependent_fields() {
        let d = Distribution::from_fields(vec![
            parse_field("d1", Some(2)).unwrap(),
            parse_field("x1*d2 + d1", Some(2)).unwrap(),
        ])
        .unwrap();
        assert!(matches!(flag_at_point(&d, &zeros(2)), Err(Error::DependentFields)));
        assert!(flag_at_point(&d, &[int(1), int(0)]).is_ok());
    }

    #[test]
    fn jobs() {
        let j = DistributionJob::from_json_str(r#"{"pfaff": "dx4 - x3*dx1; dx3 - x2*dx1", "points": "(0,0,0,0)"}"#)
            .unwrap();
        assert_eq!(j.points(4).unwrap().len(), 1);
        assert_eq!(j.distribution().unwrap().fields().len(), 2);
        assert!(DistributionJob::from_json_str(r#"{"pfaff": "dx1", "extra": 1}"#).is_err());
        assert!(DistributionJob::from_json_str(r#"{}"#).unwrap().distribution().is_err());
        let j = DistributionJob::from_json_str(r#"{"fields": ["d2", "d1 + x2*d3"]}"#).unwrap();
        assert_eq!(j.distribution().unwrap().n_vars(), 3);
    }
}
