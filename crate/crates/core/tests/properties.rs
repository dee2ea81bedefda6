use std::sync::Arc;

use gradua::coalgebra::GradedCoalgebra;
use gradua::grading::{enumerate_monomials, super_component_dimension, Parity, SuperRankVector};
use gradua::rational::int;
use gradua::space::{monoid_law_holds, GradedSpace, Point};
use gradua::superalg::{homogeneous_parity, super_mul};
use gradua::weil::{model_algebra, TruncatedAlgebra};
use gradua::{
    component_dimension, weight_of, GradedPolyMap, Multidegree, Polynomial, RankVector, Rational,
    Variable, VariableTable, Weight,
};
use proptest::prelude::*;

fn even_table() -> Arc<VariableTable> {
    Arc::new(VariableTable::from_weights(&[("y", 1), ("z", 2), ("w", 3)]).unwrap())
}

fn super_table() -> Arc<VariableTable> {
    Arc::new(
        VariableTable::new(vec![
            Variable::new("y", Weight::scalar(1).with_parity(Parity::Even)),
            Variable::new("a", Weight::scalar(1).with_parity(Parity::Odd)),
            Variable::new("b", Weight::scalar(1).with_parity(Parity::Odd)),
            Variable::new("c", Weight::scalar(2).with_parity(Parity::Odd)),
        ])
        .unwrap(),
    )
}

fn poly_from(table: &Arc<VariableTable>, terms: &[(Vec<u32>, i64)]) -> Polynomial {
    let t = terms.iter().filter_map(|(exps, c)| {
        let md = Multidegree::from_exponents(exps);
        (!md.violates_odd_rule(table)).then(|| (md, int(*c)))
    });
    Polynomial::from_terms(table, t).unwrap()
}

fn even_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..3, 3), -4i64..=4), 0..5)
        .prop_map(|terms| poly_from(&even_table(), &terms))
}

fn super_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..2, 4), -3i64..=3), 0..5)
        .prop_map(|terms| poly_from(&super_table(), &terms))
}

/// Single-parity super polynomial: all terms share the parity of the first.
fn parity_homogeneous() -> impl Strategy<Value = Polynomial> {
    super_poly().prop_map(|p| {
        let table = p.table().clone();
        let Some((first, _)) = p.terms().next() else { return p };
        let par = gradua::superalg::monomial_parity(first, &table);
        let kept = p
            .terms()
            .filter(|(m, _)| gradua::superalg::monomial_parity(m, &table) == par)
            .map(|(m, c)| (m.clone(), c.clone()));
        Polynomial::from_terms(&table, kept).unwrap()
    })
}

/// Weight-preserving endomorphism of (y, z, w) with integer coefficients.
fn graded_endo() -> impl Strategy<Value = GradedPolyMap> {
    prop::collection::vec(-3i64..=3, 6).prop_map(|c| {
        let t = even_table();
        let y = Polynomial::var(&t, 0);
        let z = Polynomial::var(&t, 1);
        let w = Polynomial::var(&t, 2);
        let k = |i: usize| Polynomial::constant(&t, int(c[i]));
        let comps = vec![
            &k(0) * &y,
            &(&k(1) * &z) + &(&k(2) * &y.pow(2)),
            &(&(&k(3) * &w) + &(&k(4) * &(&y * &z))) + &(&k(5) * &y.pow(3)),
        ];
        GradedPolyMap::new(&t, &t, comps).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(p in even_poly(), q in even_poly(), r in even_poly()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn weight_is_additive(p in even_poly(), q in even_poly()) {
        let table = even_table();
        for (wp, cp) in p.components() {
            for (wq, cq) in q.components() {
                let prod = &cp * &cq;
                let expected = wp.plus(&wq);
                prop_assert!(prod.terms().all(|(m, _)| weight_of(m, &table).unwrap() == expected));
            }
        }
    }

    #[test]
    fn homogeneity_tests_agree(p in even_poly()) {
        let by_weight = p.homogeneous_weight();
        prop_assert_eq!(by_weight.clone(), p.euler_degree());
        prop_assert_eq!(by_weight, p.homogeneity_via_action());
    }

    #[test]
    fn pullback_is_a_homomorphism(f in graded_endo(), p in even_poly(), q in even_poly()) {
        let lhs = f.pullback(&(&p * &q)).unwrap();
        let rhs = &f.pullback(&p).unwrap() * &f.pullback(&q).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_is_associative(f in graded_endo(), g in graded_endo(), h in graded_endo()) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(f.compose(&g).unwrap().is_graded());
    }

    #[test]
    fn graded_maps_intertwine(f in graded_endo()) {
        prop_assert!(f.check_intertwining_symbolic().is_empty());
    }

    #[test]
    fn monoid_law(
        coords in prop::collection::vec(-5i64..=5, 3),
        t in (-4i64..=4, 1i64..=3),
        s in (-4i64..=4, 1i64..=3),
    ) {
        let v = GradedSpace::from_table(even_table()).unwrap();
        let p = Point::from_ints(&coords);
        let t = Rational::new(t.0.into(), t.1.into());
        let s = Rational::new(s.0.into(), s.1.into());
        prop_assert!(monoid_law_holds(&v, &t, &s, &p));
    }

    #[test]
    fn truncated_product_kills_high_weights(p in even_poly(), q in even_poly(), k in 1u32..5) {
        let alg = TruncatedAlgebra::new(even_table(), k);
        let prod = alg.mul(&alg.truncate(&p), &alg.truncate(&q)).unwrap();
        prop_assert!(alg.contains(&prod));
        prop_assert_eq!(prod, alg.truncate(&(&p * &q)));
    }

    #[test]
    fn supercommutativity(p in parity_homogeneous(), q in parity_homogeneous()) {
        let pq = super_mul(&p, &q).unwrap();
        let qp = super_mul(&q, &p).unwrap();
        match (homogeneous_parity(&p), homogeneous_parity(&q)) {
            (Some(Parity::Odd), Some(Parity::Odd)) => prop_assert_eq!(pq, -&qp),
            _ => prop_assert_eq!(pq, qp),
        }
    }

    #[test]
    fn super_associativity(p in super_poly(), q in super_poly(), r in super_poly()) {
        let left = super_mul(&super_mul(&p, &q).unwrap(), &r).unwrap();
        let right = super_mul(&p, &super_mul(&q, &r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn odd_squares_vanish(p in parity_homogeneous()) {
        if homogeneous_parity(&p) == Some(Parity::Odd) {
            prop_assert!(super_mul(&p, &p).unwrap().is_zero());
        }
    }

    #[test]
    fn dimension_law(d in prop::collection::vec(0usize..3, 0..4), w in 0u32..7) {
        let rank = RankVector::new(d);
        let table = VariableTable::from_rank(&rank);
        let count = enumerate_monomials(&table, &Weight::scalar(w), None).len() as u64;
        prop_assert_eq!(component_dimension(&rank, w), count);
    }

    #[test]
    fn super_dimension_law(
        even in prop::collection::vec(0usize..3, 0..3),
        odd in prop::collection::vec(0usize..3, 0..3),
        w in 0u32..7,
    ) {
        let rank = SuperRankVector::new(even, odd);
        let table = VariableTable::from_super_rank(&rank);
        let count = enumerate_monomials(&table, &Weight::scalar(w), None).len() as u64;
        prop_assert_eq!(super_component_dimension(&rank, w), count);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coalgebra_laws(d in prop::collection::vec(0usize..3, 1..3), k in 1u32..5) {
        let rank = RankVector::new(d);
        let alg = model_algebra(&rank, k);
        let co = GradedCoalgebra::dualize_structure(&alg);
        prop_assert!(co.check_axioms().is_ok());
        prop_assert!(co.check_pairing(&alg).is_ok());
        prop_assert_eq!(co.to_algebra().unwrap(), alg);
    }

    #[test]
    fn free_model_is_free(d in prop::collection::vec(0usize..3, 1..4), k in 1u32..4) {
        let rank = RankVector::new(d);
        let v = model_algebra(&rank, k).check_free(k).unwrap();
        prop_assert!(v.free);
        prop_assert_eq!(v.rank_vector, rank.truncated(k as usize));
    }
}
