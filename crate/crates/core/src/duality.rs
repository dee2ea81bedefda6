//! Duals of graded spaces and polynomial algebras relative to the model
//! algebra 𝔸 = ℝ[ε], and their weight-k truncations.
//!
//! Hom_G(ℝ^𝐝, 𝔸) is represented directly by the polynomial algebra 𝒜(ℝ^𝐝):
//! an element Σ f_j ε^j corresponds to the weight-j components f_j. Graded
//! algebra homomorphisms 𝒜 → 𝔸 are determined by the values λ ε^w on the
//! generators, so the algebraic dual of 𝒜 is again a graded space with
//! coordinates λ.

use std::sync::Arc;


use crate::error::{Error, Result};
use crate::grading::{component_dimension, weight_of, Variable, VariableTable, Weight};
use crate::poly::{GradedPolyMap, Polynomial};
use crate::rational::{self, Rational};
use crate::space::{GradedSpace, Point};
use crate::weil::{PresentedGradedAlgebra, TruncatedAlgebra, WeilIsomorphism};

/// 𝔸 = ℝ[ε] with w(ε) = 1, truncated to 𝔸^[k] on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelAlgebra {
    table: Arc<VariableTable>,
}

impl Default for ModelAlgebra {
    fn default() -> Self {
        Self::new()
    }
}

impl ModelAlgebra {
    pub fn new() -> Self {
        ModelAlgebra {
            table: Arc::new(VariableTable::from_weights(&[("eps", 1)]).expect("valid")),
        }
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn eps_power(&self, i: u32) -> Polynomial {
        Polynomial::var(&self.table, 0).pow(i)
    }

    /// h_t(ε^i) = t^i ε^i, extended linearly.
    pub fn act(&self, t: &Rational, p: &Polynomial) -> Polynomial {
        let images = vec![Polynomial::var(&self.table, 0).scale(t)];
        p.substitute(&images, &self.table).expect("one image")
    }

    pub fn truncated(&self, k: u32) -> TruncatedAlgebra {
        TruncatedAlgebra::new(self.table.clone(), k)
    }
}

/// V*_G = Hom_G(V, 𝔸), modeled by 𝒜(ℝ^𝐝) over the space's coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GDual {
    space: GradedSpace,
}

impl GDual {
    pub fn table(&self) -> &Arc<VariableTable> {
        self.space.table()
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn component_dimension(&self, w: u32) -> u64 {
        component_dimension(self.space.rank(), w)
    }

    pub fn component_basis(&self, w: u32) -> Vec<Polynomial> {
        crate::grading::enumerate_monomials(self.table(), &Weight::scalar(w), None)
            .into_iter()
            .map(|m| Polynomial::monomial(self.table(), m, rational::one()).expect("valid"))
            .collect()
    }

    /// Dimensions of the components of weight 0..=w.
    pub fn dimensions_up_to(&self, w: u32) -> Vec<u64> {
        (0..=w).map(|i| self.component_dimension(i)).collect()
    }

    /// Σ f_j ε^j ↦ its value at a point: the 𝔸-valued function it names.
    pub fn as_model_valued(&self, f: &Polynomial, p: &Point) -> Result<Polynomial> {
        let model = ModelAlgebra::new();
        let mut out = Polynomial::zero(model.table());
        for (w, comp) in f.components() {
            let v = comp.evaluate(&p.coords)?;
            out = &out + &model.eps_power(w.degree()).scale(&v);
        }
        Ok(out)
    }
}

pub fn g_dual_space(v: &GradedSpace) -> GDual {
    GDual { space: v.clone() }
}

/// A*_alg for A = 𝒜 on the given generator table: coordinates `lam_{name}`
/// of the weights of the generators.
pub fn alg_dual(generators: &Arc<VariableTable>) -> Result<GradedSpace> {
    let vars: Vec<Variable> = generators
        .vars()
        .iter()
        .map(|v| Variable::new(format!("lam_{}", v.name), v.weight.clone()))
        .collect();
    let table = if vars.is_empty() {
        VariableTable::empty(1)
    } else {
        VariableTable::new(vars)?
    };
    GradedSpace::from_table(Arc::new(table))
}

/// Graded algebra homomorphism A → 𝔸 given by generator values y_i ↦ λ_i ε^{w_i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPoint {
    generators: Arc<VariableTable>,
    pub lambdas: Vec<Rational>,
}

impl DualPoint {
    pub fn new(generators: &Arc<VariableTable>, lambdas: Vec<Rational>) -> Result<Self> {
        if lambdas.len() != generators.len() {
            return Err(Error::Shape(format!(
                "{} values for {} generators",
                lambdas.len(),
                generators.len()
            )));
        }
        Ok(DualPoint {
            generators: generators.clone(),
            lambdas,
        })
    }

    /// The homomorphism applied to a polynomial: Σ_w p_w(λ) ε^w.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if **p.table() != *self.generators {
            return Err(Error::TableMismatch);
        }
        let model = ModelAlgebra::new();
        let mut out = Polynomial::zero(model.table());
        for (m, c) in p.terms() {
            let w = weight_of(m, &self.generators)?.degree();
            let mut v = c.clone();
            for &(i, e) in m.pairs() {
                v *= rational::pow(&self.lambdas[i], e);
            }
            out = &out + &model.eps_power(w).scale(&v);
        }
        Ok(out)
    }

    /// Induced action (h_t φ)(a) = h_t(φ(a)): λ_i ↦ t^{w_i} λ_i.
    pub fn act(&self, t: &Rational) -> DualPoint {
        DualPoint {
            generators: self.generators.clone(),
            lambdas: self
                .lambdas
                .iter()
                .enumerate()
                .map(|(i, l)| l * rational::pow(t, self.generators.weight(i).degree()))
                .collect(),
        }
    }

    pub fn as_point(&self) -> Point {
        Point::new(self.lambdas.clone())
    }
}

/// ev_P: f ↦ f(P), as a point of (V*_G)*_alg.
pub fn ev_point(v: &GradedSpace, p: &Point) -> Result<DualPoint> {
    if p.coords.len() != v.dim() {
        return Err(Error::Shape("point does not belong to the space".into()));
    }
    DualPoint::new(v.table(), p.coords.clone())
}

/// ev as a polynomial map A → (A*_alg)*_G, sending each generator to the
/// coordinate function of its dual coordinate.
pub fn ev_algebra(generators: &Arc<VariableTable>) -> Result<GradedPolyMap> {
    let dual = alg_dual(generators)?;
    let comps = (0..generators.len())
        .map(|i| Polynomial::var(dual.table(), i))
        .collect();
    GradedPolyMap::new(dual.table(), generators, comps)
}

/// Generator substitution between polynomial algebras, stored by the
/// images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraHom {
    source: Arc<VariableTable>,
    target: Arc<VariableTable>,
    images: Vec<Polynomial>,
}

impl AlgebraHom {
    pub fn new(source: &Arc<VariableTable>, target: &Arc<VariableTable>, images: Vec<Polynomial>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::Shape("one image per generator".into()));
        }
        if images.iter().any(|p| **p.table() != **target) {
            return Err(Error::TableMismatch);
        }
        Ok(AlgebraHom {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    pub fn identity(table: &Arc<VariableTable>) -> Self {
        AlgebraHom {
            source: table.clone(),
            target: table.clone(),
            images: (0..table.len()).map(|i| Polynomial::var(table, i)).collect(),
        }
    }

    pub fn source(&self) -> &Arc<VariableTable> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VariableTable> {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if **p.table() != *self.source {
            return Err(Error::TableMismatch);
        }
        p.substitute(&self.images, &self.target)
    }

    /// `self` after `first`.
    pub fn after(&self, first: &AlgebraHom) -> Result<AlgebraHom> {
        if *first.target != *self.source {
            return Err(Error::TableMismatch);
        }
        let images = first
            .images
            .iter()
            .map(|q| self.apply(q))
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgebraHom {
            source: first.source.clone(),
            target: self.target.clone(),
            images,
        })
    }

    /// Each generator image is homogeneous of the generator's weight.
    pub fn preserves_weight(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, p)| p.is_zero() || p.is_homogeneous(self.source.weight(i)))
    }
}

/// f*_G: W*_G → V*_G, α ↦ α ∘ f, for a graded map f: V → W.
pub fn g_dual_morphism(f: &GradedPolyMap) -> Result<AlgebraHom> {
    let violations = f.check_graded();
    if let Some(v) = violations.first() {
        return Err(Error::NotGraded(v.to_string()));
    }
    AlgebraHom::new(f.target(), f.source(), f.components().to_vec())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorialityReport {
    pub pass: bool,
    /// Generator of the last space whose images differ, with both sides.
    pub mismatch: Option<(String, Polynomial, Polynomial)>,
}

/// (g∘f)*_G = f*_G ∘ g*_G for f: U → V, g: V → W, compared on generator
/// images and on a probe polynomial mixing all generators.
pub fn check_functoriality(f: &GradedPolyMap, g: &GradedPolyMap) -> Result<FunctorialityReport> {
    let gf = g.compose(f)?;
    let lhs = g_dual_morphism(&gf)?;
    let rhs = g_dual_morphism(f)?.after(&g_dual_morphism(g)?)?;
    let w = g.target();
    for i in 0..w.len() {
        if lhs.images[i] != rhs.images[i] {
            return Ok(FunctorialityReport {
                pass: false,
                mismatch: Some((w.var(i).name.clone(), lhs.images[i].clone(), rhs.images[i].clone())),
            });
        }
    }
    let mut probe = Polynomial::one(w);
    for i in 0..w.len() {
        let v = Polynomial::var(w, i);
        probe = &(&probe * &(&v + &Polynomial::one(w))) + &v;
    }
    let (a, b) = (lhs.apply(&probe)?, rhs.apply(&probe)?);
    if a != b {
        return Ok(FunctorialityReport {
            pass: false,
            mismatch: Some(("probe".into(), a, b)),
        });
    }
    Ok(FunctorialityReport {
        pass: true,
        mismatch: None,
    })
}

/// V*_k = Hom_G(V, 𝔸^[k]) ≅ 𝒜^[k](ℝ^𝐝).
pub fn k_dual_space(v: &GradedSpace, k: u32) -> TruncatedAlgebra {
    TruncatedAlgebra::new(v.table().clone(), k)
}

/// A*_k for a free algebra: the graded space of the extracted generators,
/// with the identifying isomorphism.
#[derive(Clone, Debug)]
pub struct KDual {
    pub space: GradedSpace,
    pub iso: WeilIsomorphism,
}

pub fn k_alg_dual(a: &PresentedGradedAlgebra) -> Result<KDual> {
    let iso = a.iso_to_model()?;
    let space = alg_dual(&iso.generators.table)?;
    Ok(KDual { space, iso })
}

/// V*_G truncated at weight k agrees with V*_k componentwise.
pub fn truncation_agrees(v: &GradedSpace, k: u32) -> bool {
    let full = g_dual_space(v).dimensions_up_to(k);
    let trunc: Vec<u64> = k_dual_space(v, k).dims().iter().map(|&d| d as u64).collect();
    full == trunc
}

/// Round-trip verdict for a space: rank vectors agree, ev is the
/// coordinate identity and intertwines h_t at the given parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrip {
    pub rank_preserved: bool,
    pub ev_identity: bool,
    pub equivariant: bool,
    pub truncation_agrees: bool,
    pub free_k_dual: bool,
}

impl RoundTrip {
    pub fn pass(&self) -> bool {
        self.rank_preserved && self.ev_identity && self.equivariant && self.truncation_agrees && self.free_k_dual
    }
}

pub fn roundtrip(v: &GradedSpace, k: u32, points: &[Point], ts: &[Rational]) -> Result<RoundTrip> {
    let dual = g_dual_space(v);
    let back = alg_dual(dual.table())?;
    let rank_preserved = back.rank() == v.rank();
    let mut ev_identity = true;
    let mut equivariant = true;
    for p in points {
        let e = ev_point(v, p)?;
        ev_identity &= e.as_point() == *p;
        // ev_P(f) = f(P) on a spanning family: the coordinates themselves
        for (i, c) in p.coords.iter().enumerate() {
            let y = Polynomial::var(dual.table(), i);
            let val = e.apply(&y)?;
            let expected = ModelAlgebra::new().eps_power(v.weight(i)).scale(c);
            ev_identity &= val == expected;
        }
        for t in ts {
            equivariant &= ev_point(v, &v.act(t, p))? == e.act(t);
        }
    }
    let truncated = k_dual_space(v, k).to_presented();
    let free_k_dual = match k_alg_dual(&truncated) {
        Ok(kd) => {
            let expected = v.rank().truncated(k as usize).normalized();
            kd.space.rank().normalized() == expected
        }
        Err(_) => false,
    };
    Ok(RoundTrip {
        rank_preserved,
        ev_identity,
        equivariant,
        truncation_agrees: truncation_agrees(v, k),
        free_k_dual,
    })
}

/// Restricts a polynomial to its components of weight ≤ k.
pub fn truncate_to(p: &Polynomial, k: u32) -> Polynomial {
    let mut out = Polynomial::zero(p.table());
    for (w, c) in p.components() {
        if w.degree() <= k {
            out = &out + &c;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::RankVector;
    use crate::rational::{frac, int};

    fn rv(v: &[usize]) -> RankVector {
        RankVector::new(v.to_vec())
    }

    #[test]
    fn g_dual_examples() {
        let d = g_dual_space(&GradedSpace::new(rv(&[1])));
        assert!(d.dimensions_up_to(5).iter().all(|&x| x == 1));
        let d = g_dual_space(&GradedSpace::new(rv(&[1, 1])));
        assert_eq!(d.component_dimension(4), 3);
        let d = g_dual_space(&GradedSpace::point());
        assert_eq!(d.dimensions_up_to(3), vec![1, 0, 0, 0]);
    }

    #[test]
    fn alg_dual_examples() {
        let t = Arc::new(VariableTable::from_weights(&[("y", 1), ("z", 2)]).unwrap());
        let v = alg_dual(&t).unwrap();
        assert_eq!(v.rank(), &rv(&[1, 1]));
        assert_eq!(v.table().var(1).name, "lam_z");
        assert_eq!(alg_dual(&Arc::new(VariableTable::empty(1))).unwrap().dim(), 0);
        let t2 = Arc::new(VariableTable::from_weights(&[("y1", 1), ("y2", 1)]).unwrap());
        assert_eq!(alg_dual(&t2).unwrap().rank(), &rv(&[2]));
        assert!(ev_algebra(&t).unwrap().is_graded());
    }

    #[test]
    fn dual_morphism_examples() {
        let t = Arc::new(VariableTable::from_weights(&[("y", 1), ("z", 2)]).unwrap());
        let id = GradedPolyMap::identity(&t);
        assert_eq!(g_dual_morphism(&id).unwrap(), AlgebraHom::identity(&t));
        let phi = GradedPolyMap::parse_endo(&t, &["y", "z + y^2"]).unwrap();
        let d = g_dual_morphism(&phi).unwrap();
        let z = Polynomial::parse("z", &t).unwrap();
        assert_eq!(d.apply(&z).unwrap(), Polynomial::parse("z + y^2", &t).unwrap());
        let zero = GradedPolyMap::parse_endo(&t, &["0", "0"]).unwrap();
        let d0 = g_dual_morphism(&zero).unwrap();
        assert!(d0.images().iter().all(Polynomial::is_zero));
        let bad = GradedPolyMap::parse_endo(&t, &["y", "z + y"]).unwrap();
        assert!(matches!(g_dual_morphism(&bad), Err(Error::NotGraded(_))));
    }

    #[test]
    fn ev_point_examples() {
        let v = GradedSpace::new(rv(&[1, 1]));
        let e0 = ev_point(&v, &v.origin()).unwrap();
        assert!(e0.lambdas.iter().all(num_traits::Zero::is_zero));
        let p = Point::from_ints(&[2, 3]);
        let e = ev_point(&v, &p).unwrap();
        assert_eq!(e.lambdas, vec![int(2), int(3)]);
        assert_eq!(e.as_point(), p);
        let q = Point::from_ints(&[1, 1]);
        let lhs = ev_point(&v, &v.act(&int(2), &q)).unwrap();
        assert_eq!(lhs, ev_point(&v, &q).unwrap().act(&int(2)));
        assert_eq!(lhs.lambdas, vec![int(2), int(4)]);
    }

    #[test]
    fn k_duals() {
        let v = GradedSpace::new(rv(&[1]));
        assert_eq!(k_dual_space(&v, 1).dims(), vec![1, 1]);
        let v = GradedSpace::new(rv(&[1, 1]));
        assert_eq!(k_dual_space(&v, 2).dims(), vec![1, 1, 2]);
        let kd = k_alg_dual(&k_dual_space(&v, 2).to_presented()).unwrap();
        assert_eq!(kd.space.rank(), &rv(&[1, 1]));
        let nonfree = PresentedGradedAlgebra::from_single(2, &[1, 1, 0], None, vec![]).unwrap();
        assert!(k_alg_dual(&nonfree).is_err());
    }

    #[test]
    fn functoriality_examples() {
        let t = Arc::new(VariableTable::from_weights(&[("y", 1), ("z", 2)]).unwrap());
        let id = GradedPolyMap::identity(&t);
        assert!(check_functoriality(&id, &id).unwrap().pass);
        let phi = GradedPolyMap::parse_endo(&t, &["y", "z + y^2"]).unwrap();
        let psi = GradedPolyMap::parse_endo(&t, &["y", "z - y^2"]).unwrap();
        assert!(check_functoriality(&phi, &psi).unwrap().pass);
        let d = g_dual_morphism(&phi).unwrap().after(&g_dual_morphism(&psi).unwrap()).unwrap();
        assert_eq!(d, AlgebraHom::identity(&t));
    }

    #[test]
    fn roundtrip_small() {
        let v = GradedSpace::new(rv(&[1, 1]));
        let pts = [Point::from_ints(&[1, 1]), Point::from_ints(&[-2, 3])];
        let ts = [int(0), int(1), int(-1), int(2), frac(1, 2)];
        assert!(roundtrip(&v, 2, &pts, &ts).unwrap().pass());
    }

    #[test]
    fn model_action() {
        let m = ModelAlgebra::new();
        let p = &m.eps_power(2) + &m.eps_power(1);
        let acted = m.act(&int(3), &p);
        assert_eq!(acted, &m.eps_power(2).scale(&int(9)) + &m.eps_power(1).scale(&int(3)));
        let t = Arc::new(VariableTable::from_weights(&[("y", 1), ("z", 2)]).unwrap());
        let g = g_dual_space(&GradedSpace::from_table(t.clone()).unwrap());
        let f = Polynomial::parse("y + z + y*z", &t).unwrap();
        let val = g.as_model_valued(&f, &Point::from_ints(&[1, 2])).unwrap();
        assert_eq!(val.to_string(), "eps + 2*eps^2 + 2*eps^3");
        assert_eq!(truncate_to(&f, 2), Polynomial::parse("y + z", &t).unwrap());
    }
}
