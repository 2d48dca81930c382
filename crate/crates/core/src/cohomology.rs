//! Chevalley-Eilenberg cohomology of `g_-` with coefficients in the
//! prolong tower, split by order.
//!
//! An `s`-cochain of order `k` sends a sorted tuple `(b_1 < ... < b_s)` of
//! `g_-` basis indices into the tower piece of degree
//! `k + deg b_1 + ... + deg b_s`. The differential is the full
//! Chevalley-Eilenberg one (including the term on brackets of arguments),
//! scaled by `(-1)^(s+1)`. That scaling is the single normalization
//! choice: for abelian `g_-` it reproduces the Spencer differential
//! `(δf)(v_1..v_{s+1}) = Σ_i (-1)^i [f(.., v̂_{s+1-i}, ..), v_{s+1-i}]`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{intersect, kernel_of_rows, Matrix, Subspace};
use crate::prolong::{Elem, ProlongTower};
use crate::scalar::{coeff_prefix, is_zero_vec, one, zeros, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub tuple: Vec<usize>,
    /// Degree of the tower piece the values live in.
    pub degree: i32,
    pub offset: usize,
    pub dim: usize,
}

/// Coordinates of the homogeneous cochains `C^s` of a given order.
#[derive(Clone, Debug)]
pub struct CochainSpace {
    pub s: usize,
    pub order: i32,
    slots: Vec<Slot>,
    index: HashMap<Vec<usize>, usize>,
    dim: usize,
}

fn sorted_tuples(n: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, s, &mut Vec::new(), &mut out);
    out
}

impl CochainSpace {
    pub fn new(tower: &ProlongTower, s: usize, order: i32) -> Result<Self> {
        let g = tower.negative();
        let mut slots = Vec::new();
        let mut index = HashMap::new();
        let mut offset = 0;
        let mut required = i32::MIN;
        for tuple in sorted_tuples(g.dim(), s) {
            let degree = order + tuple.iter().map(|&b| g.degree(b)).sum::<i32>();
            match tower.piece_dim(degree) {
                None => required = required.max(degree),
                Some(0) => {}
                Some(dim) => {
                    index.insert(tuple.clone(), slots.len());
                    slots.push(Slot { tuple, degree, offset, dim });
                    offset += dim;
                }
            }
        }
        if required != i32::MIN {
            return Err(Error::CapInsufficient { cap: tower.built(), required });
        }
        Ok(CochainSpace { s, order, slots, index, dim: offset })
    }

    /// Highest tower degree a cochain of this shape can reach.
    pub fn required_cap(tower: &ProlongTower, s: usize, order: i32) -> i32 {
        let g = tower.negative();
        sorted_tuples(g.dim(), s)
            .iter()
            .map(|t| order + t.iter().map(|&b| g.degree(b)).sum::<i32>())
            .max()
            .unwrap_or(i32::MIN)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn slot(&self, tuple: &[usize]) -> Option<&Slot> {
        self.index.get(tuple).map(|&i| &self.slots[i])
    }

    /// Argument-degree pattern of a slot (its bigraded block).
    pub fn pattern(&self, tower: &ProlongTower, slot: &Slot) -> Vec<i32> {
        slot.tuple.iter().map(|&b| tower.negative().degree(b)).collect()
    }

    pub fn to_cochain(&self, v: &[Scalar]) -> Cochain {
        let mut values = BTreeMap::new();
        for slot in &self.slots {
            let part = &v[slot.offset..slot.offset + slot.dim];
            if !is_zero_vec(part) {
                values.insert(slot.tuple.clone(), part.to_vec());
            }
        }
        Cochain { s: self.s, order: self.order, values }
    }

    pub fn flatten(&self, c: &Cochain) -> Result<Vec<Scalar>> {
        if c.s != self.s || c.order != self.order {
            return Err(Error::InvalidParams("cochain shape does not match the space".into()));
        }
        let mut v = zeros(self.dim);
        for (tuple, vals) in &c.values {
            if is_zero_vec(vals) {
                continue;
            }
            let slot = self
                .slot(tuple)
                .ok_or_else(|| Error::InvalidParams(format!("tuple {tuple:?} has no values at this order")))?;
            if vals.len() != slot.dim {
                return Err(Error::DimensionMismatch { expected: slot.dim, got: vals.len() });
            }
            v[slot.offset..slot.offset + slot.dim].clone_from_slice(vals);
        }
        Ok(v)
    }

    /// Basis cochains: one per slot and per basis vector of its piece.
    pub fn basis(&self) -> Vec<Cochain> {
        (0..self.dim).map(|i| self.to_cochain(&crate::scalar::unit(self.dim, i))).collect()
    }
}

/// Alternating cochain stored on sorted tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub s: usize,
    pub order: i32,
    pub values: BTreeMap<Vec<usize>, Vec<Scalar>>,
}

impl Cochain {
    /// Builds a cochain from possibly unsorted tuples, applying the
    /// alternating sign; repeated indices contribute nothing.
    pub fn from_terms(tower: &ProlongTower, order: i32, terms: &[(Vec<usize>, Elem)]) -> Result<Cochain> {
        let s = terms.first().map_or(0, |t| t.0.len());
        let space = CochainSpace::new(tower, s, order)?;
        let mut v = zeros(space.dim());
        for (tuple, val) in terms {
            if tuple.len() != s {
                return Err(Error::InvalidParams("mixed cochain degrees".into()));
            }
            let Some((sorted, sign)) = sort_with_sign(tuple) else { continue };
            let slot = space
                .slot(&sorted)
                .ok_or_else(|| Error::InvalidParams(format!("tuple {tuple:?} has no values at order {order}")))?;
            if slot.degree != val.degree || slot.dim != val.coords.len() {
                return Err(Error::InvalidParams(format!(
                    "value for {tuple:?} must have degree {}, got {}",
                    slot.degree, val.degree
                )));
            }
            for (t, c) in val.coords.iter().enumerate() {
                v[slot.offset + t] += c * &sign;
            }
        }
        Ok(space.to_cochain(&v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| is_zero_vec(v))
    }

    /// `y1*^y2* (x) (E + H)` style rendering.
    pub fn format(&self, tower: &ProlongTower) -> String {
        let g = tower.negative();
        let mut parts = Vec::new();
        for (tuple, vals) in &self.values {
            if is_zero_vec(vals) {
                continue;
            }
            let wedge = if tuple.is_empty() {
                "1".to_string()
            } else {
                tuple.iter().map(|&b| format!("{}*", g.label(b))).collect::<Vec<_>>().join("^")
            };
            let deg = self.order + tuple.iter().map(|&b| g.degree(b)).sum::<i32>();
            let labels = tower.piece_labels(deg);
            let nonzero: Vec<usize> = (0..vals.len()).filter(|&i| !vals[i].is_zero()).collect();
            let value = if nonzero.len() == 1 {
                let i = nonzero[0];
                format!("{}{}", coeff_prefix(&vals[i], true), labels[i])
            } else {
                let mut s = String::new();
                for &i in &nonzero {
                    s.push_str(&coeff_prefix(&vals[i], s.is_empty()));
                    s.push_str(&labels[i]);
                }
                format!("({s})")
            };
            parts.push(format!("{wedge} (x) {value}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn sort_with_sign(tuple: &[usize]) -> Option<(Vec<usize>, Scalar)> {
    let mut v = tuple.to_vec();
    let mut sign = one();
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Basis of the homogeneous cochains of degree `s` and the given order.
pub fn cochain_basis(tower: &ProlongTower, s: usize, order: i32) -> Result<Vec<Cochain>> {
    Ok(CochainSpace::new(tower, s, order)?.basis())
}

/// Matrix of `δ: from -> to` as rows (`to.dim()` rows of length `from.dim()`).
pub fn differential_rows(tower: &ProlongTower, from: &CochainSpace, to: &CochainSpace) -> Result<Vec<Vec<Scalar>>> {
    if to.s != from.s + 1 || to.order != from.order {
        return Err(Error::InvalidParams("differential maps C^s to C^(s+1) at equal order".into()));
    }
    let g = tower.negative();
    let s = from.s;
    let mut rows = vec![zeros(from.dim()); to.dim()];
    let sign_of = |k: usize| if k.is_multiple_of(2) { one() } else { -one() };
    for u in to.slots() {
        // Σ_i (-1)^i [x_i, f(.. x̂_i ..)]
        for i in 0..=s {
            let x = u.tuple[i];
            let mut rest = u.tuple.clone();
            rest.remove(i);
            let Some(t) = from.slot(&rest) else { continue };
            let ex = tower.neg_basis_elem(x);
            for e in 0..t.dim {
                let val = tower.bracket(&ex, &tower.basis_elem(t.degree, e))?;
                for (r, c) in val.coords.iter().enumerate() {
                    if !c.is_zero() {
                        rows[u.offset + r][t.offset + e] += c * &sign_of(i);
                    }
                }
            }
        }
        // Σ_{i<j} (-1)^{i+j} f([x_i, x_j], .. x̂_i .. x̂_j ..)
        for i in 0..=s {
            for j in i + 1..=s {
                let c = g.bracket_basis(u.tuple[i], u.tuple[j]);
                let mut rest = u.tuple.clone();
                rest.remove(j);
                rest.remove(i);
                for (w, cw) in c.iter().enumerate() {
                    if cw.is_zero() || rest.contains(&w) {
                        continue;
                    }
                    let pos = rest.iter().filter(|&&r| r < w).count();
                    let mut tuple = rest.clone();
                    tuple.insert(pos, w);
                    let Some(t) = from.slot(&tuple) else { continue };
                    let coeff = cw * sign_of(i + j) * sign_of(pos);
                    for e in 0..t.dim {
                        rows[u.offset + e][t.offset + e] += &coeff;
                    }
                }
            }
        }
    }
    if s.is_multiple_of(2) {
        for row in rows.iter_mut() {
            for x in row.iter_mut() {
                if !x.is_zero() {
                    *x = -x.clone();
                }
            }
        }
    }
    Ok(rows)
}

/// `δc` as a cochain.
pub fn ce_differential(tower: &ProlongTower, c: &Cochain) -> Result<Cochain> {
    let from = CochainSpace::new(tower, c.s, c.order)?;
    let to = CochainSpace::new(tower, c.s + 1, c.order)?;
    let rows = differential_rows(tower, &from, &to)?;
    let m = Matrix::from_rows(from.dim(), rows)?;
    Ok(to.to_cochain(&m.mul_vec(&from.flatten(c)?)?))
}

/// Cocycles, coboundaries and a canonical complement at one order.
#[derive(Clone, Debug)]
pub struct CohomologyBlock {
    pub order: i32,
    pub space: CochainSpace,
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
    /// Canonical echelon complement of `B` in `Z`.
    pub representatives: Subspace,
}

impl CohomologyBlock {
    pub fn dim_z(&self) -> usize {
        self.cocycles.dim()
    }

    pub fn dim_b(&self) -> usize {
        self.coboundaries.dim()
    }

    pub fn dim_h(&self) -> usize {
        self.representatives.dim()
    }

    pub fn representative_cochains(&self) -> Vec<Cochain> {
        self.representatives.basis().iter().map(|v| self.space.to_cochain(v)).collect()
    }
}

fn coboundary_space(tower: &ProlongTower, s: usize, order: i32, space: &CochainSpace) -> Result<Subspace> {
    if s == 0 {
        return Ok(Subspace::zero(space.dim()));
    }
    let prev = CochainSpace::new(tower, s - 1, order)?;
    let rows = differential_rows(tower, &prev, space)?;
    let cols = Matrix::from_rows(prev.dim(), rows)?.transpose().into_rows();
    Subspace::span(space.dim(), cols)
}

pub fn cohomology_block(tower: &ProlongTower, s: usize, order: i32) -> Result<CohomologyBlock> {
    let space = CochainSpace::new(tower, s, order)?;
    let next = CochainSpace::new(tower, s + 1, order)?;
    let cocycles = kernel_of_rows(space.dim(), differential_rows(tower, &space, &next)?)?;
    let coboundaries = coboundary_space(tower, s, order, &space)?;
    if !cocycles.contains_subspace(&coboundaries) {
        return Err(Error::Invariant(format!("δ∘δ ≠ 0 at s = {s}, order = {order}")));
    }
    let representatives = coboundaries.complement_in(&cocycles)?;
    Ok(CohomologyBlock { order, space, cocycles, coboundaries, representatives })
}

/// Minimal cap for computing `H^s` at `order`.
pub fn required_cap(tower: &ProlongTower, s: usize, order: i32) -> i32 {
    let mut r = CochainSpace::required_cap(tower, s, order).max(CochainSpace::required_cap(tower, s + 1, order));
    if s > 0 {
        r = r.max(CochainSpace::required_cap(tower, s - 1, order));
    }
    r.max(0)
}

#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub s: usize,
    pub orders: (i32, i32),
    pub cap: i32,
    pub blocks: Vec<CohomologyBlock>,
}

impl CohomologyReport {
    pub fn block(&self, order: i32) -> Option<&CohomologyBlock> {
        self.blocks.iter().find(|b| b.order == order)
    }

    pub fn dim_h(&self, order: i32) -> Option<usize> {
        self.block(order).map(CohomologyBlock::dim_h)
    }

    pub fn total_dim_h(&self) -> usize {
        self.blocks.iter().map(CohomologyBlock::dim_h).sum()
    }

    pub fn to_text(&self, tower: &ProlongTower) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "H^{} (cap {}, orders {}..{}; verified range only)",
            self.s, self.cap, self.orders.0, self.orders.1
        );
        let _ = writeln!(out, "order | dim Z | dim B | dim H");
        for b in &self.blocks {
            let _ = writeln!(out, "{:>5} | {:>5} | {:>5} | {:>5}", b.order, b.dim_z(), b.dim_b(), b.dim_h());
        }
        for b in self.blocks.iter().filter(|b| b.dim_h() > 0) {
            let _ = writeln!(out, "representatives at order {}:", b.order);
            for c in b.representative_cochains() {
                let _ = writeln!(out, "  {}", c.format(tower));
            }
        }
        out
    }

    pub fn to_json(&self, tower: &ProlongTower) -> CohomologyJson {
        CohomologyJson {
            s: self.s,
            orders: [self.orders.0, self.orders.1],
            cap: self.cap,
            table: self
                .blocks
                .iter()
                .map(|b| OrderJson {
                    order: b.order,
                    dim_z: b.dim_z(),
                    dim_b: b.dim_b(),
                    dim_h: b.dim_h(),
                    representatives: b.representative_cochains().iter().map(|c| c.format(tower)).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyJson {
    pub s: usize,
    pub orders: [i32; 2],
    pub cap: i32,
    pub table: Vec<OrderJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderJson {
    pub order: i32,
    pub dim_z: usize,
    pub dim_b: usize,
    pub dim_h: usize,
    pub representatives: Vec<String>,
}

pub fn cohomology(tower: &ProlongTower, s: usize, lo: i32, hi: i32) -> Result<CohomologyReport> {
    if lo > hi {
        return Err(Error::InvalidParams(format!("empty order range {lo}..{hi}")));
    }
    let need = (lo..=hi).map(|k| required_cap(tower, s, k)).max().unwrap();
    if need > tower.built() {
        return Err(Error::CapInsufficient { cap: tower.built(), required: need });
    }
    let blocks = (lo..=hi).map(|k| cohomology_block(tower, s, k)).collect::<Result<Vec<_>>>()?;
    Ok(CohomologyReport { s, orders: (lo, hi), cap: tower.built(), blocks })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleCheck {
    pub is_cocycle: bool,
    pub is_coboundary: bool,
}

pub fn verify_cocycle(tower: &ProlongTower, c: &Cochain) -> Result<CocycleCheck> {
    let block = cohomology_block(tower, c.s, c.order)?;
    let v = block.space.flatten(c)?;
    Ok(CocycleCheck { is_cocycle: block.cocycles.contains(&v), is_coboundary: block.coboundaries.contains(&v) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Purity {
    Pure,
    Mixed,
}

/// Coordinates of every slot sharing an argument-degree pattern with the
/// support of `v`.
fn block_support(tower: &ProlongTower, space: &CochainSpace, v: &[Scalar]) -> Result<Subspace> {
    let patterns: BTreeSet<Vec<i32>> = space
        .slots()
        .iter()
        .filter(|s| !is_zero_vec(&v[s.offset..s.offset + s.dim]))
        .map(|s| space.pattern(tower, s))
        .collect();
    let units = space
        .slots()
        .iter()
        .filter(|s| patterns.contains(&space.pattern(tower, s)))
        .flat_map(|s| (s.offset..s.offset + s.dim).map(|i| crate::scalar::unit(space.dim(), i)))
        .collect();
    Subspace::span(space.dim(), units)
}

/// Coboundaries supported entirely inside the bigraded blocks of `c`.
pub fn coboundaries_in_blocks(tower: &ProlongTower, c: &Cochain) -> Result<Subspace> {
    let block = cohomology_block(tower, c.s, c.order)?;
    let v = block.space.flatten(c)?;
    intersect(&block.coboundaries, &block_support(tower, &block.space, &v)?)
}

/// Pure iff no nonzero coboundary lives inside the bigraded blocks on which
/// `c` is supported; mixed otherwise.
pub fn purity(tower: &ProlongTower, c: &Cochain) -> Result<Purity> {
    if !verify_cocycle(tower, c)?.is_cocycle {
        return Err(Error::NotCocycle);
    }
    Ok(if coboundaries_in_blocks(tower, c)?.is_zero() { Purity::Pure } else { Purity::Mixed })
}

/// Basis cochains of `C^s` (at `order`) with `δδ ≠ 0`; also needs `C^{s+2}`.
pub fn delta_squared_violations(tower: &ProlongTower, s: usize, order: i32) -> Result<Vec<usize>> {
    let c0 = CochainSpace::new(tower, s, order)?;
    let c1 = CochainSpace::new(tower, s + 1, order)?;
    let c2 = CochainSpace::new(tower, s + 2, order)?;
    let d0 = Matrix::from_rows(c0.dim(), differential_rows(tower, &c0, &c1)?)?;
    let d1 = Matrix::from_rows(c1.dim(), differential_rows(tower, &c1, &c2)?)?;
    let dd = d1.mul(&d0)?;
    Ok((0..c0.dim()).filter(|&j| !is_zero_vec(&dd.column(j))).collect())
}

/// Action of the `d`-th basis element `D` of `g_0` on a cochain:
/// `(D f)(x..) = [D, f(x..)] - Σ_i f(.., D x_i, ..)`. Needs bracket tables.
pub fn g0_action(tower: &ProlongTower, space: &CochainSpace, d: usize, v: &[Scalar]) -> Result<Vec<Scalar>> {
    let g = tower.negative();
    let dm = &tower.g0().basis()[d];
    let de = tower.basis_elem(0, d);
    let mut out = zeros(space.dim());
    for slot in space.slots() {
        let val = Elem { degree: slot.degree, coords: v[slot.offset..slot.offset + slot.dim].to_vec() };
        if val.is_zero() {
            continue;
        }
        let b = tower.bracket(&de, &val)?;
        for (r, c) in b.coords.iter().enumerate() {
            out[slot.offset + r] += c;
        }
    }
    // - Σ_i f(.., D x_i, ..) evaluated on each target slot
    for target in space.slots() {
        for i in 0..space.s {
            let x = target.tuple[i];
            for w in 0..g.dim() {
                let c = dm.get(w, x);
                if c.is_zero() {
                    continue;
                }
                let mut tuple = target.tuple.clone();
                tuple[i] = w;
                let Some((sorted, sign)) = sort_with_sign(&tuple) else { continue };
                let Some(src) = space.slot(&sorted) else { continue };
                for e in 0..src.dim {
                    let f = &v[src.offset + e];
                    if !f.is_zero() {
                        out[target.offset + e] -= c * &sign * f;
                    }
                }
            }
        }
    }
    Ok(out)
}
