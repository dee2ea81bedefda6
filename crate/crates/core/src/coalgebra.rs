//! Graded duals of presented algebras as coalgebras.
//!
//! Δ is the transpose of the multiplication: the coefficient of
//! Y_a ⊗ Y_b in Δ(Y_c) is the coefficient of e_c in e_a · e_b. The counit is
//! projection onto the weight-0 component.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grading::{Multidegree, Parity, VariableTable};
use crate::linalg::Matrix;
use crate::rational::Rational;
use crate::weil::{Element, PresentedGradedAlgebra, Tensor3, TruncatedAlgebra};

/// Basis vector `(component, index)`.
pub type BasisRef = (usize, usize);

/// One summand c·Y_left ⊗ Y_right of a coproduct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoTerm {
    pub left: BasisRef,
    pub right: BasisRef,
    pub coeff: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCoalgebra {
    grades: Vec<Vec<u32>>,
    bound: Vec<u32>,
    dims: Vec<usize>,
    parities: Option<Vec<Vec<Parity>>>,
    /// `delta[comp][i]`: Δ of the i-th dual basis vector of the component.
    delta: Vec<Vec<Vec<CoTerm>>>,
    labels: Option<(Arc<VariableTable>, Vec<Vec<Multidegree>>)>,
}

/// Failed coalgebra law, located on a dual basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoalgebraViolation {
    Coassociativity(BasisRef),
    Cocommutativity(BasisRef),
    LeftCounit(BasisRef),
    RightCounit(BasisRef),
}

impl fmt::Display for CoalgebraViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoalgebraViolation::Coassociativity(c) => write!(f, "coassociativity fails at {c:?}"),
            CoalgebraViolation::Cocommutativity(c) => write!(f, "cocommutativity fails at {c:?}"),
            CoalgebraViolation::LeftCounit(c) => write!(f, "left counit law fails at {c:?}"),
            CoalgebraViolation::RightCounit(c) => write!(f, "right counit law fails at {c:?}"),
        }
    }
}

type Tensor2 = BTreeMap<(BasisRef, BasisRef), Rational>;
type TensorThree = BTreeMap<(BasisRef, BasisRef, BasisRef), Rational>;

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, v: Rational) {
    let slot = map.entry(key).or_insert_with(Rational::zero);
    *slot += v;
}

fn prune<K: Ord + Clone>(map: BTreeMap<K, Rational>) -> BTreeMap<K, Rational> {
    map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

impl GradedCoalgebra {
    /// Transposes the multiplication of `alg`, unit products included.
    pub fn dualize_structure(alg: &PresentedGradedAlgebra) -> Self {
        let n = alg.num_components();
        let mut delta: Vec<Vec<Vec<CoTerm>>> =
            (0..n).map(|c| vec![Vec::new(); alg.dim(c)]).collect();
        for c in 0..n {
            for i in 0..alg.dim(c) {
                delta[c][i].push(CoTerm {
                    left: (0, 0),
                    right: (c, i),
                    coeff: Rational::one(),
                });
                if c != 0 {
                    delta[c][i].push(CoTerm {
                        left: (c, i),
                        right: (0, 0),
                        coeff: Rational::one(),
                    });
                }
            }
        }
        for (&(i, j), t) in alg.products() {
            let k = alg.sum_component(i, j).expect("stored products stay in the box");
            for (a, b, c, v) in t.entries() {
                delta[k][c].push(CoTerm {
                    left: (i, a),
                    right: (j, b),
                    coeff: v.clone(),
                });
            }
        }
        for comp in &mut delta {
            for terms in comp.iter_mut() {
                terms.sort_by(|x, y| (x.left, x.right).cmp(&(y.left, y.right)));
            }
        }
        GradedCoalgebra {
            grades: alg.grades().to_vec(),
            bound: alg.bound().to_vec(),
            dims: alg.dims().to_vec(),
            parities: alg.parities().map(<[Vec<Parity>]>::to_vec),
            delta,
            labels: None,
        }
    }

    /// Graded dual of 𝒜 on `table`, materialized up to weight `max_weight`,
    /// with dual bases Y_m indexed by monomials.
    pub fn graded_dual(table: &Arc<VariableTable>, max_weight: u32) -> Self {
        let trunc = TruncatedAlgebra::new(table.clone(), max_weight);
        let mut c = Self::dualize_structure(&trunc.to_presented());
        let bases = trunc.basis().into_iter().map(|(_, b)| b).collect();
        c.labels = Some((table.clone(), bases));
        c
    }

    /// Inverse of [`GradedCoalgebra::dualize_structure`]: transposes back.
    pub fn to_algebra(&self) -> Result<PresentedGradedAlgebra> {
        let mut tensors: BTreeMap<(usize, usize), Tensor3> = BTreeMap::new();
        for (k, comp) in self.delta.iter().enumerate() {
            for (c, terms) in comp.iter().enumerate() {
                for t in terms {
                    let ((i, a), (j, b)) = (t.left, t.right);
                    if i == 0 || j == 0 {
                        continue;
                    }
                    let entry = tensors
                        .entry((i, j))
                        .or_insert_with(|| Tensor3::zeros(self.dims[i], self.dims[j], self.dims[k]));
                    entry.add_to(a, b, c, &t.coeff);
                }
            }
        }
        let dims = self.grades.iter().cloned().zip(self.dims.iter().copied()).collect();
        let parities = self
            .parities
            .as_ref()
            .map(|ps| self.grades.iter().cloned().zip(ps.iter().cloned()).collect());
        let products = tensors
            .into_iter()
            .map(|((i, j), t)| (self.grades[i].clone(), self.grades[j].clone(), t))
            .collect();
        PresentedGradedAlgebra::from_grades(self.bound.clone(), &dims, parities.as_ref(), products)
    }

    pub fn num_components(&self) -> usize {
        self.grades.len()
    }

    pub fn dim(&self, comp: usize) -> usize {
        self.dims[comp]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn grade(&self, comp: usize) -> &[u32] {
        &self.grades[comp]
    }

    fn parity(&self, (c, i): BasisRef) -> Parity {
        self.parities.as_ref().map_or(Parity::Even, |p| p[c][i])
    }

    /// Monomial labelling the dual basis vector, for graded duals of 𝒜.
    pub fn label(&self, b: BasisRef) -> Option<&Multidegree> {
        self.labels.as_ref().map(|(_, bases)| &bases[b.0][b.1])
    }

    pub fn label_table(&self) -> Option<&Arc<VariableTable>> {
        self.labels.as_ref().map(|(t, _)| t)
    }

    /// Basis vector dual to the monomial `m`.
    pub fn locate(&self, m: &Multidegree) -> Option<BasisRef> {
        let (_, bases) = self.labels.as_ref()?;
        bases
            .iter()
            .enumerate()
            .find_map(|(c, b)| b.iter().position(|x| x == m).map(|i| (c, i)))
    }

    /// Display form `Y[a,b]` of a dual basis vector.
    pub fn label_text(&self, b: BasisRef) -> String {
        match &self.labels {
            Some((t, bases)) => {
                let names: Vec<&str> = bases[b.0][b.1]
                    .indices()
                    .map(|i| t.var(i).name.as_str())
                    .collect();
                format!("Y[{}]", names.join(","))
            }
            None => format!("e*{:?}", b),
        }
    }

    pub fn comultiply(&self, b: BasisRef) -> &[CoTerm] {
        &self.delta[b.0][b.1]
    }

    /// Δ of a labelled basis element, by monomial pairs.
    pub fn comultiply_monomial(&self, m: &Multidegree) -> Result<Vec<(Multidegree, Multidegree, Rational)>> {
        let b = self
            .locate(m)
            .ok_or_else(|| Error::Precondition("element is outside the computed weight range".into()))?;
        Ok(self
            .comultiply(b)
            .iter()
            .map(|t| {
                (
                    self.label(t.left).expect("labelled").clone(),
                    self.label(t.right).expect("labelled").clone(),
                    t.coeff.clone(),
                )
            })
            .collect())
    }

    pub fn counit(&self, b: BasisRef) -> Rational {
        if b.0 == 0 {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    fn delta_map(&self, b: BasisRef) -> Tensor2 {
        let mut out = Tensor2::new();
        for t in self.comultiply(b) {
            accumulate(&mut out, (t.left, t.right), t.coeff.clone());
        }
        prune(out)
    }

    /// Coassociativity, graded cocommutativity and both counit laws on every
    /// dual basis vector.
    pub fn check_axioms(&self) -> std::result::Result<(), CoalgebraViolation> {
        for c in 0..self.num_components() {
            for i in 0..self.dims[c] {
                let b = (c, i);
                let d = self.delta_map(b);
                let mut left = TensorThree::new();
                let mut right = TensorThree::new();
                for ((x, y), v) in &d {
                    for t in self.comultiply(*x) {
                        accumulate(&mut left, (t.left, t.right, *y), v * &t.coeff);
                    }
                    for t in self.comultiply(*y) {
                        accumulate(&mut right, (*x, t.left, t.right), v * &t.coeff);
                    }
                }
                if prune(left) != prune(right) {
                    return Err(CoalgebraViolation::Coassociativity(b));
                }
                let mut swapped = Tensor2::new();
                for ((x, y), v) in &d {
                    let s = if self.parity(*x).is_odd() && self.parity(*y).is_odd() {
                        -v.clone()
                    } else {
                        v.clone()
                    };
                    accumulate(&mut swapped, (*y, *x), s);
                }
                if prune(swapped) != d {
                    return Err(CoalgebraViolation::Cocommutativity(b));
                }
                let mut lc = Tensor2::new();
                let mut rc = Tensor2::new();
                for ((x, y), v) in &d {
                    accumulate(&mut lc, (*y, (0, 0)), v * self.counit(*x));
                    accumulate(&mut rc, (*x, (0, 0)), v * self.counit(*y));
                }
                let expected: Tensor2 = [((b, (0, 0)), Rational::one())].into_iter().collect();
                if prune(lc) != expected {
                    return Err(CoalgebraViolation::LeftCounit(b));
                }
                if prune(rc) != expected {
                    return Err(CoalgebraViolation::RightCounit(b));
                }
            }
        }
        Ok(())
    }

    /// ⟨Δc, a⊗b⟩ = ⟨c, ab⟩ on all basis triples; returns the first failing
    /// `(c, a, b)`.
    pub fn check_pairing(&self, alg: &PresentedGradedAlgebra) -> std::result::Result<(), (BasisRef, BasisRef, BasisRef)> {
        let n = self.num_components();
        for i in 0..n {
            for j in 0..n {
                let Some(k) = alg.sum_component(i, j) else { continue };
                for a in 0..self.dims[i] {
                    for b in 0..self.dims[j] {
                        let prod = alg
                            .mul(
                                &Element::basis(i, self.dims[i], a),
                                &Element::basis(j, self.dims[j], b),
                            )
                            .expect("in box");
                        for c in 0..self.dims[k] {
                            let lhs = self.pair_tensor(&self.delta_map((k, c)), (i, a), (j, b));
                            if lhs != prod.coords[c] {
                                return Err(((k, c), (i, a), (j, b)));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// ⟨c ⊗ c′, a ⊗ b⟩ = ⟨c, a⟩⟨c′, b⟩ in the Kronecker dual basis.
    pub fn pair_tensor(&self, t: &Tensor2, a: BasisRef, b: BasisRef) -> Rational {
        t.iter()
            .map(|((x, y), v)| v * pairing(*x, a) * pairing(*y, b))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn delta_tensor(&self, b: BasisRef) -> Tensor2 {
        self.delta_map(b)
    }

    /// Copy with one coproduct coefficient shifted by `by`; the term is
    /// created if absent.
    pub fn perturbed(&self, b: BasisRef, left: BasisRef, right: BasisRef, by: &Rational) -> Self {
        let mut out = self.clone();
        let terms = &mut out.delta[b.0][b.1];
        match terms.iter_mut().find(|t| t.left == left && t.right == right) {
            Some(t) => t.coeff += by,
            None => terms.push(CoTerm {
                left,
                right,
                coeff: by.clone(),
            }),
        }
        out
    }
}

/// Kronecker pairing of dual basis vectors with basis vectors.
pub fn pairing(c: BasisRef, a: BasisRef) -> Rational {
    if c == a {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// Literal shuffle sum: Y_{a₁…a_k} ↦ Σ over subsets S of positions of
/// Y_{a_S} ⊗ Y_{a_{S^c}}. Agrees with the transpose of μ only when the
/// indices are pairwise distinct; a repeated index is counted once per
/// position.
pub fn shuffle_coproduct(m: &Multidegree) -> Vec<(Multidegree, Multidegree, Rational)> {
    let seq: Vec<usize> = m.indices().collect();
    let n = seq.len();
    let mut acc: BTreeMap<(Multidegree, Multidegree), Rational> = BTreeMap::new();
    for mask in 0u64..(1u64 << n) {
        let left: Vec<usize> = (0..n).filter(|p| mask & (1 << p) != 0).map(|p| seq[p]).collect();
        let right: Vec<usize> = (0..n).filter(|p| mask & (1 << p) == 0).map(|p| seq[p]).collect();
        accumulate(
            &mut acc,
            (Multidegree::from_indices(&left), Multidegree::from_indices(&right)),
            Rational::one(),
        );
    }
    acc.into_iter().map(|((l, r), c)| (l, r, c)).collect()
}

/// Pairing matrices realizing (V⊗W)* ≅ V*⊗W*, one per total weight of the
/// tensor product of graded spaces with the given component dimensions.
/// Rows index V*⊗W* basis pairs, columns index dual vectors of the
/// product basis; each matrix is the identity.
pub fn tensor_dual_identity(v_dims: &[usize], w_dims: &[usize]) -> Vec<Matrix> {
    let top = v_dims.len() + w_dims.len();
    let mut out = Vec::new();
    for n in 0..top.saturating_sub(1) {
        let mut basis: Vec<(BasisRef, BasisRef)> = Vec::new();
        for (i, &dv) in v_dims.iter().enumerate() {
            let Some(j) = n.checked_sub(i) else { continue };
            let Some(&dw) = w_dims.get(j) else { continue };
            for a in 0..dv {
                for b in 0..dw {
                    basis.push(((i, a), (j, b)));
                }
            }
        }
        let mut m = Matrix::zeros(basis.len(), basis.len());
        for (r, (x, y)) in basis.iter().enumerate() {
            for (c, (a, b)) in basis.iter().enumerate() {
                m.set(r, c, pairing(*x, *a) * pairing(*y, *b));
            }
        }
        out.push(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::RankVector;
    use crate::rational::int;
    use crate::weil::model_algebra;

    fn yz() -> Arc<VariableTable> {
        Arc::new(VariableTable::from_weights(&[("y", 1), ("z", 2)]).unwrap())
    }

    #[test]
    fn bases() {
        let y = Arc::new(VariableTable::from_weights(&[("y", 1)]).unwrap());
        let c = GradedCoalgebra::graded_dual(&y, 2);
        assert_eq!(c.dims(), &[1, 1, 1]);
        let c = GradedCoalgebra::graded_dual(&yz(), 2);
        assert_eq!(c.label_text((2, 0)), "Y[y,y]");
        assert_eq!(c.label_text((2, 1)), "Y[z]");
        let r = GradedCoalgebra::graded_dual(&Arc::new(VariableTable::empty(1)), 3);
        assert_eq!(r.comultiply((0, 0)).len(), 1);
        assert!(r.check_axioms().is_ok());
    }

    #[test]
    fn comultiply_examples() {
        let t = Arc::new(VariableTable::from_weights(&[("a", 1), ("b", 1)]).unwrap());
        let c = GradedCoalgebra::graded_dual(&t, 2);
        let a = Multidegree::var(0);
        let d = c.comultiply_monomial(&a).unwrap();
        assert_eq!(d.len(), 2);
        let ab = Multidegree::from_indices(&[0, 1]);
        let mut d = c.comultiply_monomial(&ab).unwrap();
        let mut s = shuffle_coproduct(&ab);
        d.sort();
        s.sort();
        assert_eq!(d, s);
        assert_eq!(d.len(), 4);
        let aa = Multidegree::power(0, 2);
        let d = c.comultiply_monomial(&aa).unwrap();
        let middle = d.iter().find(|(l, r, _)| *l == a && *r == a).unwrap();
        assert_eq!(middle.2, int(1));
        let s = shuffle_coproduct(&aa);
        let literal = s.iter().find(|(l, r, _)| *l == a && *r == a).unwrap();
        assert_eq!(literal.2, int(2));
    }

    #[test]
    fn axioms_and_mutation() {
        let y = Arc::new(VariableTable::from_weights(&[("y", 1)]).unwrap());
        let c = GradedCoalgebra::graded_dual(&y, 6);
        assert!(c.check_axioms().is_ok());
        let bad = c.perturbed((3, 0), (1, 0), (2, 0), &int(1));
        assert!(bad.check_axioms().is_err());
    }

    #[test]
    fn double_transpose_and_pairing() {
        let a = model_algebra(&RankVector::new(vec![1, 1]), 2);
        let c = GradedCoalgebra::dualize_structure(&a);
        assert_eq!(c.to_algebra().unwrap(), a);
        assert!(c.check_pairing(&a).is_ok());
        assert_eq!(c.counit((0, 0)), int(1));
        assert_eq!(c.counit((2, 1)), int(0));
    }

    #[test]
    fn tensor_duals_are_identities() {
        for m in tensor_dual_identity(&[1, 2, 1], &[1, 1]) {
            assert_eq!(m, Matrix::identity(m.rows()));
        }
    }
}
