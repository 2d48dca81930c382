//! Graded prolongation `(g_-, g_0)_*` of a negatively graded algebra and a
//! degree-0 derivation algebra, truncated at a degree cap.
//!
//! An element `X` of `g_k` (`k >= 0`) is stored by its restriction to
//! `g_-`: for every basis vector `u` of `g_-`, the coordinates of `X(u)` in
//! the piece of degree `k + deg u`. That piece is either a graded piece of
//! `g_-` (negative degree) or an already built component. `g_k` is the
//! space of such maps satisfying `X[u,v] = [Xu, v] + [u, Xv]`, where a
//! bracket `[Y, v]` with `Y` of nonnegative degree means `Y(v)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded_lie::{format_combination, AlgebraJson, DerivationSubalgebra, DerivationsJson, GradedLieAlgebra};
use crate::linalg::{axpy, intersect, kernel_of_rows, CoordinateSystem, Subspace};
use crate::scalar::{is_zero_vec, one, zeros, Scalar};

/// Homogeneous element of the truncated tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elem {
    pub degree: i32,
    pub coords: Vec<Scalar>,
}

impl Elem {
    pub fn zero(degree: i32, dim: usize) -> Self {
        Elem { degree, coords: zeros(dim) }
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coords)
    }

    fn add_scaled(&mut self, f: &Scalar, other: &Elem) {
        debug_assert_eq!(self.degree, other.degree);
        axpy(&mut self.coords, f, &other.coords);
    }
}

/// One nonnegative component `g_k` of the tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    degree: i32,
    /// `maps[e][u]`: coordinates of `X_e(u)`.
    maps: Vec<Vec<Vec<Scalar>>>,
    labels: Vec<String>,
}

impl Component {
    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Each basis element flattened in the layout `u = 0, 1, ...`.
    pub fn flattened(&self) -> Vec<Vec<Scalar>> {
        self.maps.iter().map(|m| m.iter().flatten().cloned().collect()).collect()
    }

    /// The span of the basis as a subspace of the flattened map space.
    pub fn subspace(&self, layout_len: usize) -> Subspace {
        Subspace::span(layout_len, self.flattened()).expect("maps follow the layout")
    }
}

#[derive(Clone, Debug)]
pub struct ProlongTower {
    neg: GradedLieAlgebra,
    depth: usize,
    /// `pieces[i]`: indices of `g_-` basis vectors of degree `-(i + 1)`.
    pieces: Vec<Vec<usize>>,
    pos_in_piece: Vec<usize>,
    g0: DerivationSubalgebra,
    comps: Vec<Component>,
    coord_systems: Vec<CoordinateSystem>,
    cap: i32,
    /// `(a, b)` with `0 <= a <= b`: `table[i][j]` = coordinates of
    /// `[X_i, Y_j]` in `g_{a+b}`.
    brackets: BTreeMap<(i32, i32), Vec<Vec<Vec<Scalar>>>>,
}

impl ProlongTower {
    /// A tower with only `g_- + g_0` built; components up to `cap` can then
    /// be added with the prolongation steps.
    pub fn new(neg: &GradedLieAlgebra, g0: &DerivationSubalgebra, cap: i32) -> Result<Self> {
        if cap < 0 {
            return Err(Error::InvalidParams("cap must be >= 0".into()));
        }
        if !neg.is_negatively_graded() || neg.dim() == 0 {
            return Err(Error::InvalidAlgebra("g_- must be nonzero and negatively graded".into()));
        }
        if !g0.parent().same_constants(neg) {
            return Err(Error::InvalidParams("g0 is defined over a different algebra".into()));
        }
        g0.validate_as_g0()?;
        let depth = neg.depth();
        let mut pieces = vec![Vec::new(); depth];
        let mut pos_in_piece = vec![0; neg.dim()];
        for u in 0..neg.dim() {
            let p = (-neg.degree(u) - 1) as usize;
            pos_in_piece[u] = pieces[p].len();
            pieces[p].push(u);
        }
        let maps = g0
            .basis()
            .iter()
            .map(|m| {
                (0..neg.dim())
                    .map(|u| pieces[(-neg.degree(u) - 1) as usize].iter().map(|&a| m.get(a, u).clone()).collect())
                    .collect()
            })
            .collect();
        let mut tower = ProlongTower {
            neg: neg.clone(),
            depth,
            pieces,
            pos_in_piece,
            g0: g0.clone(),
            comps: Vec::new(),
            coord_systems: Vec::new(),
            cap,
            brackets: BTreeMap::new(),
        };
        tower.push_component(Component { degree: 0, maps, labels: g0.labels().to_vec() })?;
        Ok(tower)
    }

    pub fn negative(&self) -> &GradedLieAlgebra {
        &self.neg
    }

    pub fn g0(&self) -> &DerivationSubalgebra {
        &self.g0
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn cap(&self) -> i32 {
        self.cap
    }

    /// Highest degree built so far.
    pub fn built(&self) -> i32 {
        self.comps.len() as i32 - 1
    }

    pub fn component(&self, k: i32) -> Option<&Component> {
        usize::try_from(k).ok().and_then(|k| self.comps.get(k))
    }

    pub fn min_degree(&self) -> i32 {
        -(self.depth as i32)
    }

    /// Dimension of the piece of degree `deg`, or `None` above the built range.
    pub fn piece_dim(&self, deg: i32) -> Option<usize> {
        if deg < self.min_degree() {
            Some(0)
        } else if deg < 0 {
            Some(self.pieces[(-deg - 1) as usize].len())
        } else {
            self.component(deg).map(Component::dim)
        }
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        (self.min_degree()..=self.built()).map(|k| (k, self.piece_dim(k).unwrap())).collect()
    }

    pub fn piece_labels(&self, deg: i32) -> Vec<String> {
        if deg < 0 {
            match self.pieces.get((-deg - 1) as usize) {
                Some(p) => p.iter().map(|&u| self.neg.label(u).to_string()).collect(),
                None => Vec::new(),
            }
        } else {
            self.component(deg).map(|c| c.labels.clone()).unwrap_or_default()
        }
    }

    pub fn format_elem(&self, x: &Elem) -> String {
        let labels = self.piece_labels(x.degree);
        format_combination(&x.coords, |i| labels[i].clone())
    }

    /// Embeds a negative-degree piece element into `g_-` coordinates.
    pub fn embed_negative(&self, x: &Elem) -> Vec<Scalar> {
        let mut v = zeros(self.neg.dim());
        for (c, &u) in x.coords.iter().zip(&self.pieces[(-x.degree - 1) as usize]) {
            v[u] = c.clone();
        }
        v
    }

    /// The homogeneous piece of `g_-` coordinates in degree `deg`.
    pub fn project_negative(&self, v: &[Scalar], deg: i32) -> Elem {
        if deg < self.min_degree() || deg >= 0 {
            return Elem::zero(deg, 0);
        }
        let coords = self.pieces[(-deg - 1) as usize].iter().map(|&u| v[u].clone()).collect();
        Elem { degree: deg, coords }
    }

    pub fn neg_basis_elem(&self, u: usize) -> Elem {
        let deg = self.neg.degree(u);
        let mut e = Elem::zero(deg, self.pieces[(-deg - 1) as usize].len());
        e.coords[self.pos_in_piece[u]] = one();
        e
    }

    pub fn basis_elem(&self, deg: i32, i: usize) -> Elem {
        let mut e = Elem::zero(deg, self.piece_dim(deg).expect("built degree"));
        e.coords[i] = one();
        e
    }

    /// `X(u)` for `X` of nonnegative degree and `u` a basis vector of `g_-`.
    pub fn act(&self, x: &Elem, u: usize) -> Elem {
        let comp = &self.comps[x.degree as usize];
        let deg = x.degree + self.neg.degree(u);
        let dim = self.piece_dim(deg).expect("lower degree is built");
        let mut out = Elem::zero(deg, dim);
        for (c, m) in x.coords.iter().zip(&comp.maps) {
            if !c.is_zero() {
                axpy(&mut out.coords, c, &m[u]);
            }
        }
        out
    }

    /// Bracket of two homogeneous elements of the truncated tower.
    pub fn bracket(&self, x: &Elem, y: &Elem) -> Result<Elem> {
        let deg = x.degree + y.degree;
        if deg > self.built() {
            return Err(Error::CapInsufficient { cap: self.built(), required: deg });
        }
        let dim = self.piece_dim(deg).expect("checked above");
        if dim == 0 || x.is_zero() || y.is_zero() {
            return Ok(Elem::zero(deg, dim));
        }
        match (x.degree < 0, y.degree < 0) {
            (true, true) => {
                let b = self.neg.bracket(&self.embed_negative(x), &self.embed_negative(y))?;
                Ok(self.project_negative(&b, deg))
            }
            (false, true) => {
                let mut out = Elem::zero(deg, dim);
                for (c, &u) in y.coords.iter().zip(&self.pieces[(-y.degree - 1) as usize]) {
                    if !c.is_zero() {
                        out.add_scaled(c, &self.act(x, u));
                    }
                }
                Ok(out)
            }
            (true, false) => {
                let mut b = self.bracket(y, x)?;
                b.coords.iter_mut().for_each(|c| *c = -c.clone());
                Ok(b)
            }
            (false, false) => {
                let (a, b, swap) = if x.degree <= y.degree { (x, y, false) } else { (y, x, true) };
                let table = self
                    .brackets
                    .get(&(a.degree, b.degree))
                    .ok_or_else(|| Error::Invariant(format!("bracket table ({}, {}) missing", a.degree, b.degree)))?;
                let mut out = Elem::zero(deg, dim);
                for (i, ci) in a.coords.iter().enumerate() {
                    if ci.is_zero() {
                        continue;
                    }
                    for (j, cj) in b.coords.iter().enumerate() {
                        if !cj.is_zero() {
                            axpy(&mut out.coords, &(ci * cj), &table[i][j]);
                        }
                    }
                }
                if swap {
                    out.coords.iter_mut().for_each(|c| *c = -c.clone());
                }
                Ok(out)
            }
        }
    }

    /// Offsets and sizes of the blocks `X(u)` for a degree-`k` map.
    pub fn map_layout(&self, k: i32) -> Result<Vec<(usize, usize)>> {
        let mut off = 0;
        let mut out = Vec::with_capacity(self.neg.dim());
        for u in 0..self.neg.dim() {
            let d = self.piece_dim(k + self.neg.degree(u)).ok_or(Error::MissingComponent(k - 1))?;
            out.push((off, d));
            off += d;
        }
        Ok(out)
    }

    fn check_step(&self, k: i32) -> Result<()> {
        if k < 1 {
            return Err(Error::InvalidParams("prolongation steps start at degree 1".into()));
        }
        if k > self.cap {
            return Err(Error::CapInsufficient { cap: self.cap, required: k });
        }
        if self.built() < k - 1 {
            return Err(Error::MissingComponent(k - 1));
        }
        Ok(())
    }

    fn component_from_kernel(&self, k: i32, layout: &[(usize, usize)], ker: &Subspace) -> Component {
        let maps =
            ker.basis().iter().map(|v| layout.iter().map(|&(o, d)| v[o..o + d].to_vec()).collect()).collect::<Vec<_>>();
        let labels = (1..=maps.len()).map(|t| format!("g{k}_{t}")).collect();
        Component { degree: k, maps, labels }
    }

    /// Degree-`k` component of the Tanaka-type prolong: all degree-`k` maps
    /// `g_- -> tower` satisfying the Leibniz rule on every basis pair.
    pub fn shchepochkina_prolong_step(&self, k: i32) -> Result<Component> {
        self.check_step(k)?;
        let n = self.neg.dim();
        let layout = self.map_layout(k)?;
        let nvars = layout.last().map_or(0, |&(o, d)| o + d);
        // Column t of block u: the basis element of the piece X(u) lives in.
        let block_elem = |u: usize, t: usize| self.basis_elem(k + self.neg.degree(u), t);
        let mut rows = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let out_deg = k + self.neg.degree(u) + self.neg.degree(v);
                let out_dim = self.piece_dim(out_deg).expect("lower degree");
                if out_dim == 0 {
                    continue;
                }
                let mut eq = vec![zeros(nvars); out_dim];
                // X([u, v])
                for (w, c) in self.neg.bracket_basis(u, v).iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (o, d) = layout[w];
                    for t in 0..d {
                        eq[t][o + t] += c;
                    }
                }
                // - [X(u), v]
                let ev = self.neg_basis_elem(v);
                let (o, d) = layout[u];
                for t in 0..d {
                    let b = self.bracket(&block_elem(u, t), &ev)?;
                    for (r, x) in b.coords.iter().enumerate() {
                        if !x.is_zero() {
                            eq[r][o + t] -= x;
                        }
                    }
                }
                // - [u, X(v)]
                let eu = self.neg_basis_elem(u);
                let (o, d) = layout[v];
                for t in 0..d {
                    let b = self.bracket(&eu, &block_elem(v, t))?;
                    for (r, x) in b.coords.iter().enumerate() {
                        if !x.is_zero() {
                            eq[r][o + t] -= x;
                        }
                    }
                }
                rows.extend(eq.into_iter().filter(|r| !is_zero_vec(r)));
            }
        }
        let ker = kernel_of_rows(nvars, rows)?;
        Ok(self.component_from_kernel(k, &layout, &ker))
    }

    /// Classical Cartan prolongation step for `g_-` abelian in degree -1:
    /// `X(v_a)(v_b) = X(v_b)(v_a)` for all basis pairs.
    pub fn cartan_prolong_step(&self, k: i32) -> Result<Component> {
        if self.depth != 1 || !self.neg.is_abelian() {
            return Err(Error::NotDepthOne);
        }
        self.check_step(k)?;
        let n = self.neg.dim();
        let prev = &self.comps[(k - 1) as usize];
        let width = prev.dim();
        let out_dim = self.piece_dim(k - 2).expect("lower degree");
        let nvars = n * width;
        let mut rows = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let mut eq = vec![zeros(nvars); out_dim];
                for t in 0..width {
                    // X(v_a) = sum_t x_{a,t} Y_t contributes Y_t(v_b); X(v_b) contributes -Y_t(v_a).
                    for (r, x) in prev.maps[t][b].iter().enumerate() {
                        if !x.is_zero() {
                            eq[r][a * width + t] += x;
                        }
                    }
                    for (r, x) in prev.maps[t][a].iter().enumerate() {
                        if !x.is_zero() {
                            eq[r][b * width + t] -= x;
                        }
                    }
                }
                rows.extend(eq.into_iter().filter(|r| !is_zero_vec(r)));
            }
        }
        let ker = kernel_of_rows(nvars, rows)?;
        let layout: Vec<(usize, usize)> = (0..n).map(|a| (a * width, width)).collect();
        Ok(self.component_from_kernel(k, &layout, &ker))
    }

    /// Appends the next component (degree `built() + 1`).
    pub fn push_component(&mut self, comp: Component) -> Result<()> {
        let k = self.built() + 1;
        if comp.degree != k {
            return Err(Error::MissingComponent(k));
        }
        let len = self.map_layout(k)?.iter().map(|&(_, d)| d).sum();
        let cs = CoordinateSystem::new(len, &comp.flattened())?;
        self.comps.push(comp);
        self.coord_systems.push(cs);
        Ok(())
    }

    /// Builds every component through `cap` without bracket tables.
    pub fn build_components(&mut self) -> Result<()> {
        for k in self.built() + 1..=self.cap {
            let comp = self.shchepochkina_prolong_step(k)?;
            self.push_component(comp)?;
        }
        Ok(())
    }

    /// Tabulates `[g_a, g_b]` for all `0 <= a <= b` with `a + b <= cap`.
    pub fn tabulate_brackets(&mut self) -> Result<()> {
        let top = self.built();
        for total in 0..=top {
            for a in 0..=total / 2 {
                let b = total - a;
                if self.brackets.contains_key(&(a, b)) {
                    continue;
                }
                let table = self.compute_bracket_table(a, b)?;
                self.brackets.insert((a, b), table);
            }
        }
        Ok(())
    }

    fn compute_bracket_table(&self, a: i32, b: i32) -> Result<Vec<Vec<Vec<Scalar>>>> {
        let k = a + b;
        let cs = &self.coord_systems[k as usize];
        let da = self.piece_dim(a).unwrap();
        let db = self.piece_dim(b).unwrap();
        let mut table = Vec::with_capacity(da);
        for i in 0..da {
            let x = self.basis_elem(a, i);
            let mut row = Vec::with_capacity(db);
            for j in 0..db {
                let y = self.basis_elem(b, j);
                // [X, Y](u) = [X, Y(u)] - [Y, X(u)]
                let mut flat = Vec::new();
                for u in 0..self.neg.dim() {
                    let mut v = self.bracket(&x, &self.act(&y, u))?;
                    let w = self.bracket(&y, &self.act(&x, u))?;
                    axpy(&mut v.coords, &-one(), &w.coords);
                    flat.extend(v.coords);
                }
                let c = cs
                    .coords(&flat)
                    .ok_or_else(|| Error::Invariant(format!("[g{a}_{}, g{b}_{}] is not in g{k}", i + 1, j + 1)))?;
                row.push(c);
            }
            table.push(row);
        }
        Ok(table)
    }

    /// Global enumeration of basis elements of the truncation.
    pub fn all_basis(&self) -> Vec<Elem> {
        let mut out = Vec::new();
        for deg in self.min_degree()..=self.built() {
            for i in 0..self.piece_dim(deg).unwrap() {
                out.push(self.basis_elem(deg, i));
            }
        }
        out
    }

    /// Basis triples (listed by degree) whose Jacobiator is nonzero; only
    /// triples whose pairwise and total degrees stay within the built range
    /// are examined. Returns the number of triples checked as well.
    pub fn check_truncated_jacobi(&self) -> Result<(usize, Vec<(i32, i32, i32)>)> {
        let top = self.built();
        let all = self.all_basis();
        let mut checked = 0;
        let mut bad = Vec::new();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                let (x, y) = (&all[i], &all[j]);
                if x.degree + y.degree > top {
                    continue;
                }
                let xy = self.bracket(x, y)?;
                for z in &all[j + 1..] {
                    let total = x.degree + y.degree + z.degree;
                    if total > top || x.degree + z.degree > top || y.degree + z.degree > top {
                        continue;
                    }
                    checked += 1;
                    let mut acc = self.bracket(z, &xy)?;
                    let yz = self.bracket(y, z)?;
                    acc.add_scaled(&one(), &self.bracket(x, &yz)?);
                    let zx = self.bracket(z, x)?;
                    acc.add_scaled(&one(), &self.bracket(y, &zx)?);
                    if !acc.is_zero() {
                        bad.push((x.degree, y.degree, z.degree));
                    }
                }
            }
        }
        Ok((checked, bad))
    }

    /// Basis elements of `g_k` (`k >= 1`) violating `X[u,v] = [Xu,v] + [u,Xv]`.
    pub fn derivation_violations(&self) -> Result<Vec<(i32, usize)>> {
        let n = self.neg.dim();
        let mut bad = Vec::new();
        for k in 1..=self.built() {
            for e in 0..self.piece_dim(k).unwrap() {
                let x = self.basis_elem(k, e);
                let mut ok = true;
                for u in 0..n {
                    for v in u + 1..n {
                        let uv = self.neg.bracket_basis(u, v);
                        let deg = self.neg.degree(u) + self.neg.degree(v);
                        let mut lhs = Elem::zero(k + deg, self.piece_dim(k + deg).unwrap());
                        for (w, c) in uv.iter().enumerate() {
                            if !c.is_zero() {
                                lhs.add_scaled(c, &self.act(&x, w));
                            }
                        }
                        let r1 = self.bracket(&self.act(&x, u), &self.neg_basis_elem(v))?;
                        let r2 = self.bracket(&self.neg_basis_elem(u), &self.act(&x, v))?;
                        lhs.add_scaled(&-one(), &r1);
                        lhs.add_scaled(&-one(), &r2);
                        ok &= lhs.is_zero();
                    }
                }
                if !ok {
                    bad.push((k, e));
                }
            }
        }
        Ok(bad)
    }

    /// Elements of `g_k` (`k >= 1`) vanishing on `g_{-1}`; transitivity says
    /// this space is zero when `g_-` is generated in degree -1.
    pub fn non_transitive_part(&self, k: i32) -> Result<Subspace> {
        let comp = self.component(k).ok_or(Error::MissingComponent(k))?;
        let deg1: Vec<usize> = self.neg.indices_of_degree(-1);
        let width = self.piece_dim(k - 1).unwrap();
        let rows: Vec<Vec<Scalar>> = deg1
            .iter()
            .flat_map(|&u| (0..width).map(move |r| (u, r)))
            .map(|(u, r)| comp.maps.iter().map(|m| m[u][r].clone()).collect())
            .collect();
        kernel_of_rows(comp.dim(), rows)
    }

    pub fn dims_table(&self) -> String {
        let dims = self.dims();
        let mut head = String::from("degree |");
        let mut body = String::from("dim    |");
        for (k, d) in &dims {
            let w = k.to_string().len().max(d.to_string().len());
            let _ = write!(head, " {k:>w$} |");
            let _ = write!(body, " {d:>w$} |");
        }
        format!("{head}\n{body}\n")
    }

    pub fn to_json(&self) -> TowerJson {
        let mut brackets = Vec::new();
        for (&(a, b), table) in &self.brackets {
            for (i, row) in table.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    if !is_zero_vec(v) {
                        brackets.push(TowerBracketJson { a, i, b, j, value: v.clone() });
                    }
                }
            }
        }
        TowerJson {
            negative: self.neg.to_json(),
            g0: self.g0.to_json(),
            cap: self.cap,
            dims: self.dims().into_iter().map(|(k, d)| DimJson { degree: k, dim: d }).collect(),
            components: self
                .comps
                .iter()
                .skip(1)
                .map(|c| ComponentJson {
                    degree: c.degree,
                    labels: c.labels.clone(),
                    maps: c.maps.iter().map(|m| m.iter().map(|v| VecJson(v.clone())).collect()).collect(),
                })
                .collect(),
            brackets,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerJson {
    pub negative: AlgebraJson,
    pub g0: DerivationsJson,
    pub cap: i32,
    pub dims: Vec<DimJson>,
    pub components: Vec<ComponentJson>,
    pub brackets: Vec<TowerBracketJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimJson {
    pub degree: i32,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VecJson(#[serde(with = "crate::scalar::serde_vec")] pub Vec<Scalar>);

#[derive(Clone, Debug, Serialize)]
pub struct ComponentJson {
    pub degree: i32,
    pub labels: Vec<String>,
    /// `maps[e][u]`: image of the `u`-th basis vector of `g_-`.
    pub maps: Vec<Vec<VecJson>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerBracketJson {
    pub a: i32,
    pub i: usize,
    pub b: i32,
    pub j: usize,
    #[serde(with = "crate::scalar::serde_vec")]
    pub value: Vec<Scalar>,
}

/// Builds all components through `cap`, tabulates the brackets and checks
/// the Jacobi identity on the truncation.
pub fn build_tower(g_minus: &GradedLieAlgebra, g0: &DerivationSubalgebra, cap: i32) -> Result<ProlongTower> {
    let mut t = ProlongTower::new(g_minus, g0, cap)?;
    t.build_components()?;
    t.tabulate_brackets()?;
    let (_, bad) = t.check_truncated_jacobi()?;
    if let Some(&(a, b, c)) = bad.first() {
        return Err(Error::Invariant(format!("Jacobi fails on a triple of degrees ({a}, {b}, {c})")));
    }
    Ok(t)
}

/// Components only; enough for cohomology, which needs the `g_-` action
/// but no brackets among nonnegative components.
pub fn build_components(g_minus: &GradedLieAlgebra, g0: &DerivationSubalgebra, cap: i32) -> Result<ProlongTower> {
    let mut t = ProlongTower::new(g_minus, g0, cap)?;
    t.build_components()?;
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientRow {
    pub degree: i32,
    pub dim: usize,
    pub classes: Vec<String>,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivedSeriesReport {
    /// `g / [g, g]` per degree.
    pub abelianization: Vec<QuotientRow>,
    /// `g1 / [g1, g1]` per degree, `g1 = [g, g]`.
    pub derived_quotient: Vec<QuotientRow>,
    /// Every degree `<=` this is exact regardless of truncation.
    pub certified_through: i32,
}

impl DerivedSeriesReport {
    fn total(rows: &[QuotientRow]) -> (usize, bool) {
        (rows.iter().map(|r| r.dim).sum(), rows.iter().all(|r| r.certified || r.dim == 0))
    }

    /// Total dimension of `g/[g,g]` over certified degrees.
    pub fn abelianization_dim(&self) -> usize {
        self.abelianization.iter().filter(|r| r.certified).map(|r| r.dim).sum()
    }

    pub fn derived_quotient_dim(&self) -> usize {
        self.derived_quotient.iter().filter(|r| r.certified).map(|r| r.dim).sum()
    }

    pub fn fully_certified(&self) -> bool {
        Self::total(&self.abelianization).1 && Self::total(&self.derived_quotient).1
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (name, rows) in [("g/[g,g]", &self.abelianization), ("g1/[g1,g1]", &self.derived_quotient)] {
            let total: usize = rows.iter().map(|r| r.dim).sum();
            let _ = writeln!(s, "{name}: dim {total}");
            for r in rows.iter().filter(|r| r.dim > 0) {
                let tag = if r.certified { "" } else { " (truncation artifact possible)" };
                let _ = writeln!(s, "  degree {:>3}: dim {} [{}]{tag}", r.degree, r.dim, r.classes.join(", "));
            }
        }
        let _ = writeln!(s, "certified through degree {}", self.certified_through);
        s
    }
}

/// Per-degree spans of all brackets `[A_a, B_b]` landing in the truncation.
fn bracket_spans(
    t: &ProlongTower,
    left: &BTreeMap<i32, Subspace>,
    right: &BTreeMap<i32, Subspace>,
) -> Result<BTreeMap<i32, Subspace>> {
    let mut out = BTreeMap::new();
    for k in t.min_degree()..=t.built() {
        let dim = t.piece_dim(k).unwrap();
        let mut vs = Vec::new();
        for (&a, sa) in left {
            let b = k - a;
            let Some(sb) = right.get(&b) else { continue };
            for x in sa.basis() {
                for y in sb.basis() {
                    let e =
                        t.bracket(&Elem { degree: a, coords: x.clone() }, &Elem { degree: b, coords: y.clone() })?;
                    if !e.is_zero() {
                        vs.push(e.coords);
                    }
                }
            }
        }
        out.insert(k, Subspace::span(dim, vs)?);
    }
    Ok(out)
}

fn quotient_rows(
    t: &ProlongTower,
    whole: &BTreeMap<i32, Subspace>,
    sub: &BTreeMap<i32, Subspace>,
    exact_through: i32,
    sub_exact_through: i32,
) -> Result<Vec<QuotientRow>> {
    let mut rows = Vec::new();
    for (&k, w) in whole {
        let s = intersect(&sub[&k], w)?;
        let comp = s.complement_in(w)?;
        let labels = t.piece_labels(k);
        let classes = comp.basis().iter().map(|v| format_combination(v, |i| labels[i].clone())).collect();
        let dim = comp.dim();
        let certified = k <= sub_exact_through || (k <= exact_through && dim == 0);
        rows.push(QuotientRow { degree: k, dim, classes, certified });
    }
    Ok(rows)
}

/// `g/[g,g]` and `g1/[g1,g1]` computed inside the truncation. Brackets
/// landing above the cap are dropped, so a degree `k` is exact only when
/// every pair contributing to it is available: `k <= cap - d` for `[g,g]`
/// and `k <= cap - 2d` for `[g1,g1]`. A zero quotient is exact whenever the
/// whole it is taken in is exact.
pub fn derived_series_report(t: &ProlongTower) -> Result<DerivedSeriesReport> {
    let d = t.depth() as i32;
    let required = (2 * d).max(3);
    if t.built() < required {
        return Err(Error::CapInsufficient { cap: t.built(), required });
    }
    let top = t.built();
    let whole: BTreeMap<i32, Subspace> =
        (t.min_degree()..=top).map(|k| (k, Subspace::full(t.piece_dim(k).unwrap()))).collect();
    let derived = bracket_spans(t, &whole, &whole)?;
    let abelianization = quotient_rows(t, &whole, &derived, top, top - d)?;
    let second = bracket_spans(t, &derived, &derived)?;
    let derived_quotient = quotient_rows(t, &derived, &second, top - d, top - 2 * d)?;
    Ok(DerivedSeriesReport { abelianization, derived_quotient, certified_through: top - 2 * d })
}
