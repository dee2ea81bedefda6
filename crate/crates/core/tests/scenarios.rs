//! End-to-end flows across modules on small worked examples.

use std::sync::Arc;

use gradua::bundle::{g_dual_bundle, GradedBundleAtlas};
use gradua::characterization::{check_degree_k, reconstruct, SymAlgData};
use gradua::coalgebra::{shuffle_coproduct, GradedCoalgebra};
use gradua::duality::{
    alg_dual, check_functoriality, ev_point, g_dual_morphism, k_alg_dual, k_dual_space, roundtrip,
};
use gradua::rational::{frac, int};
use gradua::space::{check_intertwines_pointwise, GradedSpace, Point, SampleGrid};
use gradua::weil::model_algebra;
use gradua::{GradedPolyMap, Matrix, Multidegree, Polynomial, RankVector, VariableTable};

fn yz() -> Arc<VariableTable> {
    Arc::new(VariableTable::from_weights(&[("y", 1), ("z", 2)]).unwrap())
}

#[test]
fn graded_automorphism_and_its_dual() {
    let t = yz();
    let phi = GradedPolyMap::parse_endo(&t, &["y", "z + y^2"]).unwrap();
    let psi = GradedPolyMap::parse_endo(&t, &["y", "z - y^2"]).unwrap();
    assert!(phi.is_graded());
    assert_eq!(phi.compose(&psi).unwrap(), GradedPolyMap::identity(&t));
    assert_eq!(
        phi.compose(&phi).unwrap(),
        GradedPolyMap::parse_endo(&t, &["y", "z + 2*y^2"]).unwrap()
    );
    assert!(check_intertwines_pointwise(&phi, &SampleGrid::default()).unwrap().pass);

    let dual = g_dual_morphism(&phi).unwrap();
    assert_eq!(dual.images()[1].to_string(), "y^2 + z");
    assert!(check_functoriality(&phi, &psi).unwrap().pass);
    let composite = g_dual_morphism(&phi.compose(&psi).unwrap()).unwrap();
    assert_eq!(composite.images(), GradedPolyMap::identity(&t).components());

    let zero = GradedPolyMap::parse_endo(&t, &["0", "0"]).unwrap();
    assert!(g_dual_morphism(&zero).unwrap().images().iter().all(Polynomial::is_zero));
}

#[test]
fn duality_round_trip() {
    let v = GradedSpace::new(RankVector::new(vec![1, 1]));
    let p = Point::from_ints(&[2, 3]);
    let e = ev_point(&v, &p).unwrap();
    assert_eq!(e.lambdas, vec![int(2), int(3)]);
    assert_eq!(e.act(&int(2)).lambdas, vec![int(4), int(12)]);
    let ts = [int(0), int(1), int(-1), int(2), frac(1, 2)];
    assert!(roundtrip(&v, 2, &[p, Point::from_ints(&[1, 1])], &ts).unwrap().pass());
    assert_eq!(k_dual_space(&v, 2).dims(), vec![1, 1, 2]);
    let kd = k_alg_dual(&model_algebra(&RankVector::new(vec![1, 1]), 2)).unwrap();
    assert_eq!(kd.space.rank(), &RankVector::new(vec![1, 1]));
    let vec_space = alg_dual(&Arc::new(VariableTable::from_weights(&[("y1", 1), ("y2", 1)]).unwrap())).unwrap();
    assert_eq!(vec_space.rank(), &RankVector::new(vec![2]));
}

#[test]
fn coalgebra_of_two_variables() {
    let table = Arc::new(VariableTable::from_weights(&[("a", 1), ("b", 1)]).unwrap());
    let co = GradedCoalgebra::graded_dual(&table, 4);
    assert!(co.check_axioms().is_ok());
    let ab = Multidegree::from_indices(&[0, 1]);
    let mut delta = co.comultiply_monomial(&ab).unwrap();
    let mut shuffle = shuffle_coproduct(&ab);
    delta.sort();
    shuffle.sort();
    assert_eq!(delta, shuffle);
    let aa = Multidegree::from_indices(&[0, 0]);
    let middle: Vec<_> = co
        .comultiply_monomial(&aa)
        .unwrap()
        .into_iter()
        .filter(|(l, r, _)| !l.is_one() && !r.is_one())
        .collect();
    assert_eq!(middle, vec![(Multidegree::var(0), Multidegree::var(0), int(1))]);
}

#[test]
fn characterization_reconstructs_a_bundle() {
    let alg = model_algebra(&RankVector::new(vec![1, 1]), 2);
    let p2 = Matrix::from_rows(vec![vec![int(1), int(1)], vec![int(0), int(1)]], 2);
    let conj = alg.change_basis(&[Matrix::identity(1), Matrix::identity(1), p2]).unwrap();
    let data = SymAlgData::from_algebra(conj).unwrap();
    let verdict = check_degree_k(&data, 2).unwrap();
    assert!(verdict.accepted && verdict.oracle_agrees());
    let rec = reconstruct(&data, 2).unwrap();
    assert!(rec.structure_recovered);
    assert_eq!(rec.atlas.rank(), RankVector::new(vec![1, 1]));
    assert!(rec.atlas.check_cocycle().unwrap().pass());
    let dual = g_dual_bundle(&rec.atlas, 2).unwrap();
    assert_eq!(dual.dims(), vec![1, 1, 2]);
}

#[test]
fn vector_bundle_dual_cocycle_is_transposed_inverse() {
    let base = GradedBundleAtlas::base_table(&["x"]).unwrap();
    let fiber = Arc::new(VariableTable::from_weights(&[("u", 1), ("v", 1)]).unwrap());
    let mut at = GradedBundleAtlas::new(vec!["A".into(), "B".into()], base, fiber).unwrap();
    let g = at.parse_map(&["x"], &["u + v", "v"]).unwrap();
    let h = at.parse_map(&["x"], &["u - v", "v"]).unwrap();
    at.set_transition_with_inverse("A", "B", g, h).unwrap();
    let split = at.split_form().unwrap();
    assert!(split.atlas.check_cocycle().unwrap().pass());
    let d = g_dual_bundle(&at, 1).unwrap();
    let m = Matrix::from_rows(vec![vec![int(1), int(1)], vec![int(0), int(1)]], 2);
    let pullback = d.algebra.blocks[&(1, 0)][1].constant().unwrap();
    // covector coordinates change from A to B by the inverse of the pullback
    assert_eq!(pullback.inverse().unwrap(), m.inverse().unwrap().transpose());
}
