use nhcurv::cohomology::{cohomology_block, delta_squared_violations, differential_rows, g0_action, CochainSpace};
use nhcurv::distribution::{flag_at_point, symbol_algebra, Distribution};
use nhcurv::expr::{parse_field, parse_form, parse_polynomial};
use nhcurv::graded_lie::{
    abelian, builtin, commutator, derivations_of_degree, engel_symbol, heisenberg, is_derivation, orthogonal,
    GradedLieAlgebra,
};
use nhcurv::linalg::{intersect, kernel_basis, rank, Matrix, Subspace};
use nhcurv::poly::Polynomial;
use nhcurv::prolong::{build_components, build_tower, ProlongTower};
use nhcurv::scalar::{format_rational, frac, int, is_zero_vec, parse_rational, Scalar};
use nhcurv::vf::{
    engel_basis, engel_pfaff, engel_weights, lie_derivative, preserves_pfaff, vf_bracket, OneForm, PolyVectorField,
};
use proptest::prelude::*;

const BUILTINS: [&str; 8] = ["abelian:1", "abelian:2", "abelian:3", "abelian:5", "heis:1", "heis:2", "heis:3", "engel"];

fn scalar() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, 1i64..=4).prop_map(|(p, q)| frac(p, q))
}

fn matrix() -> impl Strategy<Value = Matrix> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(scalar(), c), r)
            .prop_map(move |rows| Matrix::from_rows(c, rows).unwrap())
    })
}

fn vectors(n: usize) -> impl Strategy<Value = Vec<Vec<Scalar>>> {
    proptest::collection::vec(proptest::collection::vec((-2i64..=2).prop_map(int), n), 0..=n + 1)
}

fn polynomial(n: usize) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((proptest::collection::vec(0u32..=2, n), scalar()), 0..4)
        .prop_map(move |terms| Polynomial::from_terms(n, terms))
}

fn field(n: usize) -> impl Strategy<Value = PolyVectorField> {
    proptest::collection::vec(polynomial(n), n).prop_map(PolyVectorField::new)
}

fn form(n: usize) -> impl Strategy<Value = OneForm> {
    proptest::collection::vec(polynomial(n), n).prop_map(OneForm::new)
}

fn three_fields() -> impl Strategy<Value = (PolyVectorField, PolyVectorField, PolyVectorField)> {
    (1usize..=3).prop_flat_map(|n| (field(n), field(n), field(n)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn rank_nullity(m in matrix()) {
        let k = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + k.dim(), m.ncols());
        for v in k.basis() {
            prop_assert!(is_zero_vec(&m.mul_vec(v).unwrap()));
        }
    }

    #[test]
    fn grassmann_identity((n, a, b) in (1usize..6).prop_flat_map(|n| (Just(n), vectors(n), vectors(n)))) {
        let sa = Subspace::span(n, a).unwrap();
        let sb = Subspace::span(n, b).unwrap();
        let i = intersect(&sa, &sb).unwrap();
        let s = sa.sum(&sb).unwrap();
        prop_assert_eq!(i.dim() + s.dim(), sa.dim() + sb.dim());
        prop_assert!(sa.contains_subspace(&i) && sb.contains_subspace(&i));
        prop_assert!(s.contains_subspace(&sa) && s.contains_subspace(&sb));
    }

    #[test]
    fn canonical_form_ignores_the_spanning_set((n, vs, mix) in (1usize..6).prop_flat_map(|n| (Just(n), vectors(n), proptest::collection::vec(scalar(), 0..8)))) {
        let base = Subspace::span(n, vs.clone()).unwrap();
        let mut other: Vec<Vec<Scalar>> = vs.iter().rev().cloned().collect();
        for (k, c) in mix.iter().enumerate() {
            if vs.is_empty() {
                break;
            }
            let src = &vs[k % vs.len()];
            other.push(src.iter().map(|x| x * c).collect());
        }
        prop_assert_eq!(Subspace::span(n, other).unwrap(), base);
    }

    #[test]
    fn rationals_round_trip(x in scalar()) {
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn bracket_is_antisymmetric((x, y, _) in three_fields()) {
        let xy = vf_bracket(&x, &y).unwrap();
        let yx = vf_bracket(&y, &x).unwrap();
        prop_assert!(xy.add(&yx).is_zero());
    }

    #[test]
    fn bracket_satisfies_jacobi((x, y, z) in three_fields()) {
        let b = |p: &PolyVectorField, q: &PolyVectorField| vf_bracket(p, q).unwrap();
        let sum = b(&x, &b(&y, &z)).add(&b(&y, &b(&z, &x))).add(&b(&z, &b(&x, &y)));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn lie_derivative_is_a_representation(((x, y), a) in (1usize..=3).prop_flat_map(|n| ((field(n), field(n)), form(n)))) {
        let l = |f: &PolyVectorField, a: &OneForm| lie_derivative(f, a).unwrap();
        let lhs = l(&vf_bracket(&x, &y).unwrap(), &a);
        let rhs = l(&x, &l(&y, &a)).sub(&l(&y, &l(&x, &a)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_parses_back((p, x, a) in (1usize..=4).prop_flat_map(|n| (polynomial(n), field(n), form(n)))) {
        let n = p.n_vars();
        prop_assert_eq!(parse_polynomial(&p.to_string(), Some(n)).unwrap(), p);
        prop_assert_eq!(parse_field(&x.to_string(), Some(n)).unwrap(), x);
        prop_assert_eq!(parse_form(&a.to_string(), Some(n)).unwrap(), a);
    }

    #[test]
    fn g0_elements_are_derivations_and_close(name in proptest::sample::select(BUILTINS.to_vec()), coeffs in proptest::collection::vec(scalar(), 0..40)) {
        let g = builtin(name).unwrap();
        let d = derivations_of_degree(&g, 0);
        let n = g.dim();
        let mut m = Matrix::zero(n, n);
        for (k, b) in d.basis().iter().enumerate() {
            let c = coeffs.get(k).cloned().unwrap_or_else(|| int(0));
            m = m.sub(&Matrix::unflatten(n, n, &b.flatten().iter().map(|x| -(x * &c)).collect::<Vec<_>>()));
        }
        prop_assert!(is_derivation(&g, 0, &m));
        prop_assert!(d.coords(&m).is_some());
        for b in d.basis() {
            prop_assert!(d.coords(&commutator(&m, b)).is_some());
        }
    }
}

fn support_degrees(g: &GradedLieAlgebra, v: &[Scalar]) -> Vec<i32> {
    v.iter().enumerate().filter(|(_, c)| **c != int(0)).map(|(i, _)| g.degree(i)).collect()
}

#[test]
fn builtins_satisfy_jacobi_and_degree_additivity() {
    for name in BUILTINS {
        let g = builtin(name).unwrap();
        assert!(g.check_jacobi().is_empty(), "{name}");
        assert!(g.generated_in_degree_minus_one(), "{name}");
        assert!(g.is_negatively_graded(), "{name}");
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let want = g.degree(i) + g.degree(j);
                assert!(support_degrees(&g, &g.bracket_basis(i, j)).iter().all(|&d| d == want), "{name} [{i},{j}]");
            }
        }
    }
}

#[test]
fn g0_is_closed_under_commutator() {
    for name in BUILTINS {
        let g = builtin(name).unwrap();
        assert!(derivations_of_degree(&g, 0).closure_violations().is_empty(), "{name}");
    }
}

fn sample_towers() -> Vec<(&'static str, ProlongTower)> {
    let e = engel_symbol();
    let h1 = heisenberg(1).unwrap();
    let h2 = heisenberg(2).unwrap();
    let a2 = abelian(2).unwrap();
    let a3 = abelian(3).unwrap();
    vec![
        ("engel", build_tower(&e, &derivations_of_degree(&e, 0), 5).unwrap()),
        ("heis(1)", build_tower(&h1, &derivations_of_degree(&h1, 0), 5).unwrap()),
        ("heis(2)", build_tower(&h2, &derivations_of_degree(&h2, 0), 3).unwrap()),
        ("abelian(2)+gl", build_tower(&a2, &derivations_of_degree(&a2, 0), 3).unwrap()),
        ("abelian(3)+o", build_tower(&a3, &orthogonal(&a3).unwrap(), 2).unwrap()),
    ]
}

#[test]
fn towers_are_derivations_transitive_and_jacobi() {
    for (name, t) in sample_towers() {
        assert!(t.derivation_violations().unwrap().is_empty(), "{name}");
        let (checked, bad) = t.check_truncated_jacobi().unwrap();
        assert!(checked > 0 && bad.is_empty(), "{name}: {bad:?}");
        for k in 1..=t.built() {
            assert!(t.non_transitive_part(k).unwrap().is_zero(), "{name} degree {k}");
        }
    }
}

#[test]
fn depth_one_constructions_coincide() {
    for n in 1..=3 {
        let v = abelian(n).unwrap();
        for g0 in [derivations_of_degree(&v, 0), orthogonal(&v).unwrap()] {
            let t = build_components(&v, &g0, 3).unwrap();
            for k in 1..=3 {
                assert_eq!(
                    t.cartan_prolong_step(k).unwrap(),
                    t.shchepochkina_prolong_step(k).unwrap(),
                    "n = {n}, k = {k}"
                );
            }
        }
    }
}

fn blocks_within_cap(t: &ProlongTower, extra: usize) -> Vec<(usize, i32)> {
    let lo = -(t.depth() as i32) * 3;
    let mut out = Vec::new();
    for s in 0..=2usize {
        for k in lo..=8 {
            if (s.saturating_sub(1)..=s + extra).all(|q| CochainSpace::required_cap(t, q, k) <= t.built()) {
                out.push((s, k));
            }
        }
    }
    out
}

#[test]
fn differential_squares_to_zero() {
    for (name, t) in sample_towers() {
        for (s, k) in blocks_within_cap(&t, 2) {
            assert!(delta_squared_violations(&t, s, k).unwrap().is_empty(), "{name} s = {s} order {k}");
        }
    }
}

#[test]
fn cohomology_blocks_are_consistent() {
    for (name, t) in sample_towers() {
        for (s, k) in blocks_within_cap(&t, 1) {
            let b = cohomology_block(&t, s, k).unwrap();
            assert!(b.cocycles.contains_subspace(&b.coboundaries), "{name}");
            assert_eq!(b.dim_h(), b.dim_z() - b.dim_b(), "{name}");
            assert!(b.cocycles.contains_subspace(&b.representatives), "{name}");
            let joint = b.coboundaries.sum(&b.representatives).unwrap();
            assert_eq!(joint.dim(), b.dim_b() + b.dim_h(), "{name} s = {s} order {k}");
        }
    }
}

#[test]
fn g0_action_commutes_with_the_differential() {
    for (name, t) in sample_towers().into_iter().filter(|(n, _)| ["engel", "heis(1)", "heis(2)"].contains(n)) {
        for (s, k) in blocks_within_cap(&t, 1).into_iter().filter(|(s, _)| *s <= 1) {
            let from = CochainSpace::new(&t, s, k).unwrap();
            let to = CochainSpace::new(&t, s + 1, k).unwrap();
            let d = Matrix::from_rows(from.dim(), differential_rows(&t, &from, &to).unwrap()).unwrap();
            for g in 0..t.g0().dim() {
                for j in 0..from.dim() {
                    let e = nhcurv::scalar::unit(from.dim(), j);
                    let lhs = g0_action(&t, &to, g, &d.mul_vec(&e).unwrap()).unwrap();
                    let rhs = d.mul_vec(&g0_action(&t, &from, g, &e).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "{name} s = {s} order {k} g0[{g}] basis {j}");
                }
            }
        }
    }
}

#[test]
fn two_cochains_vanish_below_the_order_bound() {
    for (name, t) in sample_towers() {
        let d = t.depth() as i32;
        for k in (-3 * d)..(2 - d) {
            assert_eq!(CochainSpace::new(&t, 2, k).unwrap().dim(), 0, "{name} order {k}");
        }
    }
}

#[test]
fn engel_fields_preserve_the_system_with_homogeneous_degrees() {
    let pf = engel_pfaff();
    let w = engel_weights();
    for f in engel_basis(6) {
        assert!(preserves_pfaff(&f.field, &pf).unwrap(), "{}", f.label);
        assert_eq!(f.field.weighted_degree(&w), Some(i64::from(f.degree)), "{}", f.label);
    }
}

#[test]
fn symbol_algebras_are_lie_and_generated() {
    let cases = [
        vec!["d1 + x2*d3 + x3*d4", "d2"],
        vec!["d1 - x2/2*d3", "d2 + x1/2*d3"],
        vec!["d1", "d2 + x1*d3 + x1^2*d4 + x3*d5"],
    ];
    for c in cases {
        let n = c.iter().map(|s| nhcurv::expr::max_index(s)).max().unwrap();
        let fields = c.iter().map(|s| parse_field(s, Some(n)).unwrap()).collect();
        let dist = Distribution::from_fields(fields).unwrap();
        let origin = vec![int(0); n];
        let growth = flag_at_point(&dist, &origin).unwrap();
        assert!(growth.dims.windows(2).all(|w| w[0] < w[1]), "{c:?}");
        let g = symbol_algebra(&dist, &origin).unwrap();
        assert!(g.check_jacobi().is_empty(), "{c:?}");
        assert!(g.generated_in_degree_minus_one(), "{c:?}");
        assert_eq!(g.dim(), *growth.dims.last().unwrap(), "{c:?}");
    }
}
