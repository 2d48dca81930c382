//! Fixed expectation suites for the Engel and contact structures. Each
//! check records what was expected, what was computed and whether they
//! agree; nothing here adjusts an expectation to the computation.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cohomology::{cohomology, purity, verify_cocycle, Cochain, CohomologyReport, Purity};
use crate::error::Result;
use crate::graded_lie::{derivations_of_degree, heisenberg, DerivationSubalgebra, GradedLieAlgebra};
use crate::linalg::Subspace;
use crate::prolong::{build_components, build_tower, derived_series_report, Elem, ProlongTower};
use crate::scalar::{int, Scalar};
use crate::vf::{
    engel_basis, engel_pfaff, engel_weights, graded_model, induced_g0, preserves_pfaff, preserving_fields_of_weight,
    LabeledField,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub computed: String,
}

impl Check {
    fn new(name: &str, expected: impl ToString, computed: impl ToString) -> Self {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        Check { name: name.to_string(), passed: expected == computed, expected, computed }
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {}: expected {}, computed {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.expected,
            self.computed
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Suite {
    pub title: String,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub report: String,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n\n{}\n\n", self.title, self.report.trim_end());
        for c in &self.checks {
            let _ = writeln!(s, "{}", c.line());
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(s, "{} of {} checks passed", self.checks.len() - failed, self.checks.len());
        s
    }
}

fn list<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    format!("[{}]", v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

/// The Engel fields `y1 = d1, y2 = X-1, y3 = D3, y4 = d4` and the degree-0
/// fields `E, H, X0`.
pub fn engel_field_frames() -> (Vec<LabeledField>, Vec<LabeledField>) {
    let basis = engel_basis(0);
    let by = |l: &str| basis.iter().find(|f| f.label == l).expect("listed field").field.clone();
    let neg = vec![
        LabeledField::new("y1", by("d1"), -1),
        LabeledField::new("y2", by("X-1"), -1),
        LabeledField::new("y3", by("D3"), -2),
        LabeledField::new("y4", by("d4"), -3),
    ];
    let zero = ["E", "H", "X0"].iter().map(|l| LabeledField::new(l, by(l), 0)).collect();
    (neg, zero)
}

/// `(g_-, g_0)` of the Engel structure read off the vector fields, with
/// `g_0` labelled `E, H, X0`.
pub fn engel_model() -> Result<(GradedLieAlgebra, DerivationSubalgebra)> {
    let (neg, zero) = engel_field_frames();
    let g = graded_model(&neg, &engel_weights())?;
    let g0 = induced_g0(&g, &zero, &neg)?;
    Ok((g, g0))
}

/// `y1*^y2* (x) (E + H)` and `y4*^y3* (x) y4` in a tower over [`engel_model`].
pub fn engel_listed_cocycles(t: &ProlongTower) -> Result<[Cochain; 2]> {
    let g0 = t.g0();
    let mut e_plus_h = vec![Scalar::from_integer(0.into()); g0.dim()];
    for (i, l) in g0.labels().iter().enumerate() {
        if l == "E" || l == "H" {
            e_plus_h[i] = int(1);
        }
    }
    let first = Cochain::from_terms(t, 2, &[(vec![0, 1], Elem { degree: 0, coords: e_plus_h })])?;
    let second = Cochain::from_terms(t, 2, &[(vec![3, 2], t.neg_basis_elem(3))])?;
    Ok([first, second])
}

fn independent_mod(b: &Subspace, vs: &[Vec<Scalar>]) -> Result<bool> {
    let span = b.sum(&Subspace::span(b.ambient_dim(), vs.to_vec())?)?;
    Ok(span.dim() == b.dim() + vs.len())
}

/// Expected per-degree dimensions of the Engel symmetry algebra, degrees -3..6.
pub const ENGEL_CLAIMED_DIMS: [usize; 10] = [1, 1, 2, 3, 1, 1, 1, 1, 1, 1];
/// Expected dimensions of H^2 of the Engel structure, orders -1..6.
pub const ENGEL_H2: [usize; 8] = [0, 0, 0, 2, 0, 0, 0, 0];

pub fn verify_engel() -> Result<Suite> {
    let mut checks = Vec::new();
    let mut report = String::new();
    let (g, g0) = engel_model()?;

    let tower = build_tower(&g, &g0, 6)?;
    let _ = writeln!(report, "symmetry algebra, degrees -3..6:\n{}", tower.dims_table());
    checks.push(Check::new("tower dims -3..6", list(ENGEL_CLAIMED_DIMS), list(tower.dims().values())));
    let ds = derived_series_report(&tower)?;
    let _ = writeln!(report, "{}", ds.to_text());
    checks.push(Check::new("dim e/[e,e]", 2, ds.abelianization_dim()));
    checks.push(Check::new("dim e1/[e1,e1]", 1, ds.derived_quotient_dim()));

    let t5 = build_components(&g, &g0, 5)?;
    let h: CohomologyReport = cohomology(&t5, 2, -1, 6)?;
    let _ = writeln!(report, "{}", h.to_text(&t5));
    checks.push(Check::new("H^2 dims, orders -1..6", list(ENGEL_H2), list(h.blocks.iter().map(|b| b.dim_h()))));

    let reps = engel_listed_cocycles(&t5)?;
    let names = ["y1*^y2* (x) (E + H)", "y4*^y3* (x) y4"];
    let mut vecs = Vec::new();
    let block = h.block(2).expect("order 2 scanned");
    for (c, name) in reps.iter().zip(names) {
        let v = verify_cocycle(&t5, c)?;
        checks.push(Check::new(
            &format!("{name} is a cocycle, not a coboundary"),
            "cocycle, not coboundary",
            format!(
                "{}, {}",
                if v.is_cocycle { "cocycle" } else { "not cocycle" },
                if v.is_coboundary { "coboundary" } else { "not coboundary" }
            ),
        ));
        vecs.push(block.space.flatten(c)?);
    }
    checks.push(Check::new(
        "listed cocycles independent modulo B^2",
        true,
        independent_mod(&block.coboundaries, &vecs)?,
    ));
    let verdict = |c: &Cochain| match purity(&t5, c) {
        Ok(Purity::Pure) => "pure".to_string(),
        Ok(Purity::Mixed) => "mixed".to_string(),
        Err(e) => format!("undefined ({e})"),
    };
    checks.push(Check::new(
        "purity verdicts",
        "(pure, mixed)",
        format!("({}, {})", verdict(&reps[0]), verdict(&reps[1])),
    ));
    let pattern: Vec<usize> = block
        .space
        .slots()
        .iter()
        .filter(|s| s.tuple.iter().all(|&b| g.degree(b) == -1))
        .flat_map(|s| s.offset..s.offset + s.dim)
        .collect();
    let inter = crate::linalg::intersect(
        &block.coboundaries,
        &Subspace::span(
            block.space.dim(),
            pattern.iter().map(|&i| crate::scalar::unit(block.space.dim(), i)).collect(),
        )?,
    )?;
    checks.push(Check::new("dim(B^2 ∩ Λ²g₋₁*⊗g₀) at order 2", 0, inter.dim()));

    let pf = engel_pfaff();
    let basis4 = engel_basis(4);
    let mut bad = Vec::new();
    for f in &basis4 {
        if !preserves_pfaff(&f.field, &pf)? {
            bad.push(f.label.clone());
        }
    }
    checks.push(Check::new("fields of engel_basis(4) not preserving (E)", "[]", list(bad)));
    let listed_weights: Vec<usize> = (-3..=4).map(|k| basis4.iter().filter(|f| f.degree == k).count()).collect();
    let solved: Vec<usize> = (-3..=4)
        .map(|k| preserving_fields_of_weight(&pf, &engel_weights(), k).map(|v| v.len()))
        .collect::<Result<_>>()?;
    checks.push(Check::new("preserving fields per weight -3..4", list(listed_weights), list(solved)));
    checks.push(Check::new("graded model equals engel_symbol", true, g == crate::graded_lie::engel_symbol()));
    Ok(Suite { title: "Engel structure".into(), checks, report })
}

/// `dim csp(2r) = r(2r + 1) + 1`.
pub fn contact_g0_dim(r: usize) -> usize {
    r * (2 * r + 1) + 1
}

pub fn verify_contact(r: usize, lo: i32, hi: i32) -> Result<Suite> {
    let g = heisenberg(r)?;
    let g0 = derivations_of_degree(&g, 0);
    let cap = (lo..=hi).map(|k| k - 1).max().unwrap_or(0).max(1);
    let t = build_components(&g, &g0, cap)?;
    let h = cohomology(&t, 2, lo, hi)?;
    let mut report = String::new();
    let _ = writeln!(report, "{}", t.dims_table());
    let _ = writeln!(report, "{}", h.to_text(&t));
    let checks = vec![
        Check::new("dim g0", contact_g0_dim(r), g0.dim()),
        Check::new(
            &format!("H^2 dims, orders {lo}..{hi}"),
            list((lo..=hi).map(|_| 0)),
            list(h.blocks.iter().map(|b| b.dim_h())),
        ),
    ];
    Ok(Suite { title: format!("contact structure, heis({r})"), checks, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engel_model_labels_and_constants() {
        let (g, g0) = engel_model().unwrap();
        assert_eq!(g, crate::graded_lie::engel_symbol());
        assert_eq!(g0.labels(), ["E", "H", "X0"]);
        assert_eq!(g0.dim(), derivations_of_degree(&g, 0).dim());
    }

    #[test]
    fn listed_first_cochain_is_not_closed() {
        let (g, g0) = engel_model().unwrap();
        let t = build_components(&g, &g0, 3).unwrap();
        let [c, _] = engel_listed_cocycles(&t).unwrap();
        assert_eq!(c.format(&t), "y1*^y2* (x) (E + H)");
        assert!(!verify_cocycle(&t, &c).unwrap().is_cocycle);
    }

    #[test]
    fn contact_suite_small() {
        let s = verify_contact(1, 0, 3).unwrap();
        assert!(s.passed(), "{}", s.to_text());
    }
}
