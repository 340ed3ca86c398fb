use proptest::prelude::*;

use toric_lg::constructions::{
    galkin_mutate, hori_vafa, markov_children, markov_tree, weighted_triangle_check, CompleteIntersectionSpec,
    MarkovTriple,
};
use toric_lg::degeneration::{cone_over, factor_mutation, mutate_polytope, slice, Cosection, SliceDecomposition};
use toric_lg::laurent::{parse, rational};
use toric_lg::linalg;
use toric_lg::minkowski::{edge_binomials_ok, face_restriction, find_presentation, verify_presentation};
use toric_lg::mutation::{apply_cluster, equivalent_up_to_toric, ClusterChange, ToricChange};
use toric_lg::period::{period_oracle, period_sequence, periods_equal};
use toric_lg::polytope::{
    convex_hull, lattice_equivalent, minkowski_sum, newton_polytope, polygon_minkowski_decompositions, AffineMap,
};
use toric_lg::{ExponentVector, LaurentPoly, Rational};

const NAMES: [&str; 4] = ["x", "y", "z", "t"];

fn names(n: usize) -> Vec<String> {
    NAMES[..n].iter().map(|s| s.to_string()).collect()
}

fn coeff() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3)
        .prop_filter("nonzero", |(p, _)| *p != 0)
        .prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn poly_in(n: usize, terms: usize, reach: i64) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-reach..=reach, n), coeff()), 1..=terms)
        .prop_map(move |ts| LaurentPoly::from_terms(names(n), ts.into_iter().map(|(e, c)| (ExponentVector::new(e), c))))
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    (2usize..=3).prop_flat_map(|n| poly_in(n, 5, 2))
}

fn nonzero_poly_in(n: usize) -> impl Strategy<Value = LaurentPoly> {
    poly_in(n, 4, 2).prop_filter("nonzero", |p| !p.is_zero())
}

/// `x + y + … + 1/(x·y·…)` plus random terms, so the Newton polytope is
/// full-dimensional with the origin inside.
fn full_poly(n: usize) -> impl Strategy<Value = LaurentPoly> {
    poly_in(n, 3, 1).prop_map(move |extra| {
        let mut base = LaurentPoly::from_terms(
            names(n),
            (0..n).map(|i| (ExponentVector::unit(n, i), rational(1))).chain([(ExponentVector::new(vec![-1; n]), rational(1))]),
        );
        base = base.add(&extra).unwrap();
        base
    })
}

/// Products of elementary matrices, optionally with a sign flip.
fn unimodular(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (prop::collection::vec((0..n, 0..n, prop_oneof![Just(-1i64), Just(1i64)]), 0..5), any::<bool>()).prop_map(
        move |(ops, flip)| {
            let mut m = linalg::identity(n);
            for (i, j, s) in ops {
                if i != j {
                    let row = m[j].clone();
                    for (a, b) in m[i].iter_mut().zip(row) {
                        *a += s * b;
                    }
                }
            }
            if flip {
                for a in m[0].iter_mut() {
                    *a = -*a;
                }
            }
            m
        },
    )
}

fn points(n: usize, k: usize, reach: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-reach..=reach, n), 1..=k)
}

fn same_terms(a: &LaurentPoly, b: &LaurentPoly) -> bool {
    a.same_terms(b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms_random((a, b, c) in (2usize..=3).prop_flat_map(|n| (poly_in(n, 4, 2), poly_in(n, 4, 2), poly_in(n, 4, 2)))) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn exact_division_undoes_product((g, h) in (2usize..=3).prop_flat_map(|n| (poly_in(n, 4, 2), nonzero_poly_in(n)))) {
        let prod = g.mul(&h).unwrap();
        prop_assert_eq!(prod.exact_divide(&h).unwrap(), g);
    }

    #[test]
    fn newton_of_product_is_minkowski_sum((f, g) in (2usize..=4).prop_flat_map(|n| (nonzero_poly_in(n), nonzero_poly_in(n)))) {
        let fg = f.mul(&g).unwrap();
        let sum = minkowski_sum(&newton_polytope(&f).unwrap(), &newton_polytope(&g).unwrap()).unwrap();
        prop_assert_eq!(newton_polytope(&fg).unwrap(), sum);
    }

    #[test]
    fn hull_is_idempotent(pts in (2usize..=4).prop_flat_map(|n| points(n, 8, 3))) {
        let p = convex_hull(&pts).unwrap();
        let again = convex_hull(p.vertices()).unwrap();
        prop_assert_eq!(&again, &p);
        for q in &pts {
            prop_assert!(p.contains(q));
        }
    }

    #[test]
    fn polygon_decompositions_sum_back(pts in points(2, 6, 2)) {
        let p = convex_hull(&pts).unwrap();
        prop_assume!(p.dim() >= 1);
        let decs = match polygon_minkowski_decompositions(&p) {
            Ok(d) => d,
            Err(_) => return Ok(()),
        };
        prop_assert!(!decs.is_empty());
        for dec in decs {
            let total = dec.iter().skip(1).fold(dec[0].clone(), |acc, s| minkowski_sum(&acc, s).unwrap());
            prop_assert!(total.equal_up_to_translation(&p));
        }
    }

    #[test]
    fn lattice_equivalence_is_an_equivalence(
        (pts, a, b, s, t) in (2usize..=3).prop_flat_map(|n| (points(n, 6, 2), unimodular(n), unimodular(n), prop::collection::vec(-3i64..=3, n), prop::collection::vec(-3i64..=3, n)))
    ) {
        let p = convex_hull(&pts).unwrap();
        prop_assume!(p.is_full_dimensional());
        let ma = AffineMap { matrix: a, shift: s };
        let mb = AffineMap { matrix: b, shift: t };
        let q = p.image(&ma).unwrap();
        let r = q.image(&mb).unwrap();
        let id = lattice_equivalent(&p, &p).unwrap();
        prop_assert_eq!(p.image(&id).unwrap(), p.clone());
        let pq = lattice_equivalent(&p, &q).unwrap();
        prop_assert_eq!(p.image(&pq).unwrap(), q.clone());
        let qp = pq.inverse().unwrap();
        prop_assert_eq!(q.image(&qp).unwrap(), p.clone());
        prop_assert!(lattice_equivalent(&q, &p).is_some());
        let qr = lattice_equivalent(&q, &r).unwrap();
        prop_assert_eq!(p.image(&qr.compose(&pq)).unwrap(), r);
    }

    #[test]
    fn substitution_preserves_constant_term_and_periods(
        (f, a, scale) in (2usize..=3).prop_flat_map(|n| (poly_in(n, 4, 1), unimodular(n), prop::collection::vec(coeff(), n)))
    ) {
        let n = f.nvars();
        let g = f.monomial_substitute(&a, &ExponentVector::zero(n), &scale).unwrap();
        prop_assert_eq!(g.constant_term(), f.constant_term());
        prop_assume!(!f.is_zero());
        prop_assert_eq!(period_sequence(&f, 4).unwrap().values, period_sequence(&g, 4).unwrap().values);
    }

    #[test]
    fn substitutions_compose(
        (f, a, b, s1, s2, t2) in (2usize..=3).prop_flat_map(|n| (poly_in(n, 4, 2), unimodular(n), unimodular(n), prop::collection::vec(coeff(), n), prop::collection::vec(coeff(), n), prop::collection::vec(-2i64..=2, n)))
    ) {
        let n = f.nvars();
        let first = ToricChange::new(a, ExponentVector::zero(n), s1).unwrap();
        let second = ToricChange::new(b, ExponentVector::new(t2), s2).unwrap();
        let both = first.then(&second).unwrap();
        prop_assert_eq!(second.apply(&first.apply(&f).unwrap()).unwrap(), both.apply(&f).unwrap());
        let back = first.inverse().unwrap();
        prop_assert_eq!(back.apply(&first.apply(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn parse_format_roundtrip(f in poly()) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text, Some(f.var_names())).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn periods_match_oracle(f in (2usize..=3).prop_flat_map(nonzero_poly_in), n in 0usize..=6) {
        prop_assert_eq!(period_sequence(&f, n).unwrap().values, period_oracle(&f, n).unwrap().values);
    }

    #[test]
    fn cluster_changes_preserve_periods_and_invert(
        (f, h, pivot, sign) in (2usize..=3).prop_flat_map(|n| (full_poly(n), poly_in(n, 2, 1), 0..n, prop_oneof![Just(-1i8), Just(1i8)]))
    ) {
        let n = f.nvars();
        let h = h.retain_terms(|e| e[pivot] == 0).add(&LaurentPoly::one(names(n))).unwrap();
        prop_assume!(!h.is_zero());
        let c = ClusterChange::new(pivot, sign, h).unwrap();
        if let Ok(g) = apply_cluster(&f, &c) {
            prop_assert!(periods_equal(&f, &g, 6));
            prop_assert_eq!(apply_cluster(&g, &c.inverse()).unwrap(), f);
        }
    }

    #[test]
    fn toric_equivalence_finds_witnesses(
        (f, a, scale) in (2usize..=3).prop_flat_map(|n| (full_poly(n), unimodular(n), prop::collection::vec(prop_oneof![Just(1i64), Just(-1), Just(2)], n)))
    ) {
        let n = f.nvars();
        let scale: Vec<Rational> = scale.into_iter().map(rational).collect();
        prop_assume!(newton_polytope(&f).unwrap().is_full_dimensional());
        let g = ToricChange::new(a, ExponentVector::zero(n), scale).unwrap().apply(&f).unwrap();
        let w = equivalent_up_to_toric(&f, &g).unwrap();
        prop_assert!(w.apply(&f).unwrap().same_terms(&g));
        let back = equivalent_up_to_toric(&g, &f).unwrap();
        prop_assert!(back.apply(&g).unwrap().same_terms(&f));
        let id = equivalent_up_to_toric(&f, &f).unwrap();
        prop_assert!(id.is_identity());
    }

    #[test]
    fn factor_mutation_matches_formula(
        (f1, f2, f0, fm) in (poly_in(2, 2, 1), poly_in(2, 2, 1), poly_in(2, 2, 1), poly_in(2, 2, 1))
    ) {
        let lift = |p: &LaurentPoly, k: i64| -> LaurentPoly {
            LaurentPoly::from_terms(names(3), p.terms().map(|(e, c)| (ExponentVector::new(vec![e[0], e[1], k]), c.clone())))
        };
        prop_assume!(!f1.is_zero() && !f2.is_zero() && !fm.is_zero());
        let f = lift(&f1.mul(&f2).unwrap(), 1).add(&lift(&f0, 0)).unwrap().add(&lift(&fm, -1)).unwrap();
        let want = lift(&f1, 1).add(&lift(&f0, 0)).unwrap().add(&lift(&fm.mul(&f2).unwrap(), -1)).unwrap();
        let got = factor_mutation(&f, 2, &lift(&f1, 0), &lift(&f2, 0)).unwrap();
        prop_assert!(same_terms(&got, &want));
        prop_assert_eq!(newton_polytope(&got).unwrap(), newton_polytope(&want).unwrap());
        prop_assert!(periods_equal(&f, &got, 6));
    }

    #[test]
    fn face_restriction_commutes_with_substitution(
        (f, a) in (2usize..=3).prop_flat_map(|n| (full_poly(n), unimodular(n)))
    ) {
        let n = f.nvars();
        let g = f.monomial_substitute(&a, &ExponentVector::zero(n), &vec![rational(1); n]).unwrap();
        let pf = newton_polytope(&f).unwrap();
        let pg = newton_polytope(&g).unwrap();
        let map = AffineMap { matrix: a.clone(), shift: vec![0; n] };
        for face in pf.all_faces() {
            let image: Vec<Vec<i64>> = face.vertices.iter().map(|v| map.apply(v)).collect();
            let image = convex_hull(&image).unwrap();
            let target = pg.all_faces().into_iter().find(|h| h.vertices == image.vertices()).unwrap();
            let left = face_restriction(&g, &target).unwrap();
            let right = face_restriction(&f, &face).unwrap().monomial_substitute(&a, &ExponentVector::zero(n), &vec![rational(1); n]).unwrap();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn presentations_verify(factors in prop::collection::vec(prop::collection::vec(prop::collection::vec(-1i64..=1, 2), 2..=3), 1..=3)) {
        let mut f = LaurentPoly::one(names(2));
        for pts in factors {
            let g = LaurentPoly::from_terms(names(2), pts.into_iter().map(|e| (ExponentVector::new(e), rational(1))));
            let g = LaurentPoly::from_terms(names(2), g.terms().map(|(e, _)| (e.clone(), rational(1))));
            f = f.mul(&g).unwrap();
        }
        let found = match find_presentation(&f) {
            Ok(p) => p,
            Err(_) => return Ok(()),
        };
        if let Some(pres) = found {
            let report = verify_presentation(&f, &pres).unwrap();
            prop_assert!(report.ok, "{:?}", report);
            prop_assert!(edge_binomials_ok(&f).unwrap().ok);
        }
    }

    #[test]
    fn trivial_slice_decomposition_roundtrip(pts in points(2, 6, 3)) {
        let p = convex_hull(&pts).unwrap();
        prop_assume!(p.is_full_dimensional() && p.contains_origin_strictly());
        let cos = Cosection::new(vec![0, 1, 0], vec![vec![1, 0, 0], vec![0, 1, 1]]).unwrap();
        let cone = cone_over(&p).unwrap();
        let plus = match slice(&cone, &cos, 1) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        let dec = SliceDecomposition::trivial(&plus, &cos).unwrap();
        prop_assert!(dec.validate(&plus).is_ok());
        prop_assert_eq!(dec.c1.minkowski_sum(&dec.c2).unwrap(), plus);
        if let Ok(q) = mutate_polytope(&p, &cos, &dec) {
            prop_assert_eq!(q, p);
        }
    }

    #[test]
    fn cosections_are_checked(r in prop::collection::vec(-3i64..=3, 3), s in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 2)) {
        if let Ok(c) = Cosection::new(r.clone(), s.clone()) {
            prop_assert!(linalg::is_primitive_vector(&r) && r[2] == 0);
            prop_assert_eq!(linalg::mat_mul(&s, &c.inclusion()), linalg::identity(2));
        }
    }

    #[test]
    fn markov_transforms_are_involutions(path in prop::collection::vec(0usize..3, 0..6)) {
        let mut t = MarkovTriple::basic();
        for slot in path {
            let child = t.mutate(slot);
            let [a, b, c] = child.to_u64().unwrap().map(u128::from);
            prop_assert_eq!(a * a + b * b + c * c, 3 * a * b * c);
            let back = (0..3).map(|s| child.mutate(s)).any(|p| p == t);
            prop_assert!(back);
            t = child;
        }
    }

    #[test]
    fn galkin_walks(path in prop::collection::vec(0usize..3, 1..=3)) {
        let f = parse("x+y+1/(x*y)", None).unwrap();
        let mut g = f.clone();
        let mut t = MarkovTriple::basic();
        for slot in path {
            let (h, nt) = galkin_mutate(&g, &t, slot).unwrap();
            prop_assert!(weighted_triangle_check(&newton_polytope(&h).unwrap(), &nt));
            prop_assert!(periods_equal(&f, &h, 6));
            g = h;
            t = nt;
        }
    }
}

#[test]
fn hori_vafa_models_are_minkowski_candidates() {
    for n in 2..=7usize {
        for degrees in [vec![2], vec![3], vec![4], vec![2, 2], vec![2, 3], vec![3, 3], vec![2, 2, 2]] {
            let spec = CompleteIntersectionSpec::new(n, degrees.clone());
            if spec.index() < 1 || spec.dim() < 1 {
                assert!(hori_vafa(&spec).is_err(), "{spec:?}");
                continue;
            }
            let f = hori_vafa(&spec).unwrap();
            assert_eq!(f.nvars() as i64, spec.dim());
            let p = newton_polytope(&f).unwrap();
            assert!(p.contains_origin_strictly(), "{spec:?}");
            if f.nvars() <= 4 {
                assert!(edge_binomials_ok(&f).unwrap().ok, "{spec:?}");
            }
        }
    }
}

#[test]
fn markov_tree_levels() {
    let tree = markov_tree(4);
    for t in &tree {
        for c in markov_children(t) {
            assert!(markov_children(&c).contains(t));
        }
    }
}
