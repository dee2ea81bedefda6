//! ℕ×ℤ₂-graded (super) arithmetic.

use std::sync::Arc;

use crate::characterization::square_map;
use crate::error::{Error, Result};
use crate::grading::{
    enumerate_monomials, super_component_dimension, weight_of, Multidegree, Parity, SuperRankVector,
    VariableTable, Weight,
};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::weil::{PresentedGradedAlgebra, Tensor3};

/// Sign of m1·m2 brought to ascending normal form, or `None` when an odd
/// variable would be squared. Each transposition of two odd variables
/// contributes −1; even variables commute freely.
pub fn koszul_product_sign(m1: &Multidegree, m2: &Multidegree, table: &VariableTable) -> Option<i32> {
    let mut inversions = 0usize;
    for &(b, _) in m2.pairs() {
        if !table.is_odd(b) {
            continue;
        }
        for &(a, _) in m1.pairs() {
            if !table.is_odd(a) {
                continue;
            }
            if a == b {
                return None;
            }
            if a > b {
                inversions += 1;
            }
        }
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Product in the supercommutative algebra of a shared parity-tagged table.
pub fn super_mul(p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    if !p.table().is_super() {
        return Err(Error::InvalidTable("super products need a parity-tagged table".into()));
    }
    p.checked_mul(q)
}

/// Parity of a monomial: the number of odd factors mod 2.
pub fn monomial_parity(md: &Multidegree, table: &VariableTable) -> Parity {
    md.pairs()
        .iter()
        .filter(|&&(i, _)| table.is_odd(i))
        .fold(Parity::Even, |acc, &(_, e)| acc.add(Parity::Odd.times(e)))
}

/// Parity of a polynomial whose terms all share one parity.
pub fn homogeneous_parity(p: &Polynomial) -> Option<Parity> {
    let mut it = p.terms().map(|(m, _)| monomial_parity(m, p.table()));
    let first = it.next()?;
    it.all(|x| x == first).then_some(first)
}

/// Every variable carries a weight and a parity, and weight and parity
/// add under products of any two variables.
pub fn check_bigrading_compat(table: &Arc<VariableTable>) -> std::result::Result<(), String> {
    if !table.is_super() {
        return Err("table carries no parities".into());
    }
    for (i, v) in table.vars().iter().enumerate() {
        if v.weight.parity().is_none() {
            return Err(format!("variable `{}` has no parity", v.name));
        }
        if table.weight(i).is_zero_grade() && table.is_odd(i) {
            return Err(format!("base variable `{}` is odd", v.name));
        }
    }
    for a in 0..table.len() {
        for b in 0..table.len() {
            let (x, y) = (Polynomial::var(table, a), Polynomial::var(table, b));
            let prod = x.checked_mul(&y).map_err(|e| e.to_string())?;
            let expected_w = table.weight(a).plus(table.weight(b));
            for (m, _) in prod.terms() {
                let w = weight_of(m, table).map_err(|e| e.to_string())?;
                if w != expected_w {
                    return Err(format!(
                        "product of `{}` and `{}` has weight {w}, expected {expected_w}",
                        table.var(a).name,
                        table.var(b).name
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Parity equals weight mod 2 for every variable.
pub fn follows_n_manifold_convention(table: &VariableTable) -> bool {
    (0..table.len()).all(|i| table.is_odd(i) == (table.weight(i).degree() % 2 == 1))
}

/// h_{−1} scales each monomial of weight ≤ `max_weight` by (−1)^{parity}.
pub fn minus_one_acts_as_parity(table: &VariableTable, max_weight: u32) -> bool {
    (0..=max_weight).all(|w| {
        enumerate_monomials(table, &Weight::scalar(w), None)
            .iter()
            .all(|m| (w % 2 == 1) == monomial_parity(m, table).is_odd())
    })
}

/// Odd Ẽ¹ of dim d̃₁, even E² of dim d₂, antisymmetric m̃: Ẽ¹ × Ẽ¹ → E².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NDeg2Data {
    pub m: Tensor3,
}

impl NDeg2Data {
    pub fn new(m: Tensor3) -> Result<Self> {
        let d = NDeg2Data { m };
        square_map(&d.m, true)?;
        Ok(d)
    }

    pub fn odd_dim(&self) -> usize {
        self.m.shape()[0]
    }

    pub fn even_dim(&self) -> usize {
        self.m.shape()[2]
    }

    /// ℝ ⊕ Ẽ¹ ⊕ E² with odd weight-1 and even weight-2 components.
    pub fn to_super_algebra(&self) -> Result<PresentedGradedAlgebra> {
        let (d1, d2) = (self.odd_dim(), self.even_dim());
        let parities = [vec![Parity::Even], vec![Parity::Odd; d1], vec![Parity::Even; d2]];
        PresentedGradedAlgebra::from_single(2, &[1, d1, d2], Some(&parities), vec![(1, 1, self.m.clone())])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NDeg2Verdict {
    pub injective: bool,
    pub rank: usize,
    pub wedge_dim: usize,
    /// The transpose E²* → ⋀²Ẽ¹* is onto.
    pub dual_surjective: bool,
    /// Kernel vector over the pairs (a < b) spanning ⋀²Ẽ¹.
    pub witness: Option<Vec<Rational>>,
    /// Super freeness of the assembled order-2 algebra.
    pub super_free: bool,
}

impl NDeg2Verdict {
    pub fn oracle_agrees(&self) -> bool {
        self.injective == self.super_free
    }
}

pub fn check_n_deg2(d: &NDeg2Data) -> Result<NDeg2Verdict> {
    let (pairs, m) = square_map(&d.m, true)?;
    let rank = m.rank();
    let wedge_dim = pairs.len();
    let super_free = super_check_free(&d.to_super_algebra()?, 2)?.free;
    Ok(NDeg2Verdict {
        injective: rank == wedge_dim,
        rank,
        wedge_dim,
        dual_surjective: m.transpose().rank() == wedge_dim,
        witness: m.kernel().into_iter().next(),
        super_free,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperFreeVerdict {
    pub free: bool,
    pub rank: SuperRankVector,
    /// (weight, dim of the algebra component, model count from the
    /// generating function).
    pub dimensions: Vec<(u32, usize, u64)>,
    pub witness: Option<Polynomial>,
}

/// Dimension comparison of each weight against the super model on the
/// extracted generators.
pub fn super_check_free(alg: &PresentedGradedAlgebra, k: u32) -> Result<SuperFreeVerdict> {
    let verdict = alg.check_free(k)?;
    let table = verdict.generators.table.clone();
    let rank = if table.is_super() {
        table.super_rank_vector()
    } else {
        let r = table.rank_vector();
        SuperRankVector::new(r.entries().to_vec(), Vec::new())
    };
    let mut dimensions = Vec::new();
    for check in &verdict.dimensions {
        let w = check.weight.degree();
        let model = super_component_dimension(&rank, w);
        if model != check.model as u64 {
            return Err(Error::InvalidAlgebra(format!(
                "monomial count {} at weight {w} disagrees with the generating function {model}",
                check.model
            )));
        }
        dimensions.push((w, check.algebra, model));
    }
    Ok(SuperFreeVerdict {
        free: verdict.free,
        rank,
        dimensions,
        witness: verdict.witness.map(|w| w.relation),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::Variable;
    use crate::rational::int;
    use crate::weil::model_algebra;
    use crate::RankVector;

    fn table() -> Arc<VariableTable> {
        Arc::new(
            VariableTable::new(vec![
                Variable::new("y", Weight::scalar(1).with_parity(Parity::Even)),
                Variable::new("a", Weight::scalar(1).with_parity(Parity::Odd)),
                Variable::new("b", Weight::scalar(1).with_parity(Parity::Odd)),
                Variable::new("z", Weight::scalar(2).with_parity(Parity::Even)),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn sign_rules() {
        let t = table();
        let (y, a, b) = (
            Polynomial::var(&t, 0),
            Polynomial::var(&t, 1),
            Polynomial::var(&t, 2),
        );
        assert!(super_mul(&a, &a).unwrap().is_zero());
        assert_eq!(super_mul(&a, &b).unwrap(), -&super_mul(&b, &a).unwrap());
        let ya = super_mul(&y, &a).unwrap();
        assert_eq!(super_mul(&ya, &b).unwrap(), super_mul(&y, &super_mul(&a, &b).unwrap()).unwrap());
        assert_eq!(homogeneous_parity(&super_mul(&a, &b).unwrap()), Some(Parity::Even));
        assert_eq!(homogeneous_parity(&ya), Some(Parity::Odd));
        assert!(super_mul(&Polynomial::var(&Arc::new(VariableTable::from_weights(&[("x", 1)]).unwrap()), 0), &a).is_err());
    }

    #[test]
    fn bigrading() {
        assert!(check_bigrading_compat(&table()).is_ok());
        let even = Arc::new(VariableTable::from_weights(&[("x", 1)]).unwrap());
        assert!(check_bigrading_compat(&even).is_err());
    }

    #[test]
    fn n_manifold_convention() {
        let t = VariableTable::from_super_rank(&SuperRankVector::new(vec![0, 2], vec![3, 0]));
        assert!(follows_n_manifold_convention(&t));
        assert!(minus_one_acts_as_parity(&t, 6));
        let bad = VariableTable::from_super_rank(&SuperRankVector::new(vec![1], vec![1]));
        assert!(!follows_n_manifold_convention(&bad));
        assert!(!minus_one_acts_as_parity(&bad, 2));
    }

    fn wedge(d1: usize, d2: usize, entries: &[(usize, usize, usize, i64)]) -> Tensor3 {
        let mut t = Tensor3::zeros(d1, d1, d2);
        for &(a, b, c, v) in entries {
            t.set(a, b, c, int(v));
            t.set(b, a, c, int(-v));
        }
        t
    }

    #[test]
    fn n_deg2_examples() {
        let v = check_n_deg2(&NDeg2Data::new(wedge(2, 1, &[(0, 1, 0, 1)])).unwrap()).unwrap();
        assert!(v.injective && v.dual_surjective && v.oracle_agrees());
        let v = check_n_deg2(&NDeg2Data::new(Tensor3::zeros(1, 1, 3)).unwrap()).unwrap();
        assert!(v.injective && v.oracle_agrees());
        let v = check_n_deg2(&NDeg2Data::new(wedge(3, 2, &[(0, 1, 0, 1), (1, 2, 1, 1)])).unwrap()).unwrap();
        assert!(!v.injective && v.oracle_agrees());
        let mut sym = Tensor3::zeros(2, 2, 1);
        sym.set(0, 1, 0, int(1));
        sym.set(1, 0, 0, int(1));
        assert!(NDeg2Data::new(sym).is_err());
    }

    #[test]
    fn super_free_examples() {
        let grass = NDeg2Data::new(wedge(2, 1, &[(0, 1, 0, 1)])).unwrap().to_super_algebra().unwrap();
        let v = super_check_free(&grass, 2).unwrap();
        assert!(v.free);
        assert_eq!(v.rank, SuperRankVector::new(vec![0], vec![2]));
        assert_eq!(v.dimensions.iter().map(|d| d.1).collect::<Vec<_>>(), vec![1, 2, 1]);
        let truncated = NDeg2Data::new(Tensor3::zeros(2, 2, 0)).unwrap().to_super_algebra().unwrap();
        let v = super_check_free(&truncated, 2).unwrap();
        assert!(!v.free);
        let w = v.witness.unwrap();
        assert_eq!(w.len(), 1);
        let even = model_algebra(&RankVector::new(vec![1, 1]), 2);
        assert_eq!(super_check_free(&even, 2).unwrap().free, even.check_free(2).unwrap().free);
    }
}
