//! Seeded random inputs. Each case draws from its own stream so results do
//! not depend on scheduling.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gradua::rational::{frac, int};
use gradua::weil::{PresentedGradedAlgebra, Tensor3, TruncatedAlgebra};
use gradua::{Matrix, Multidegree, Polynomial, RankVector, Rational, VariableTable};

use crate::oracle;

pub fn case_rng(seed: u64, criterion: u32, case: usize) -> ChaCha8Rng {
    let mix = seed
        ^ (u64::from(criterion)).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (case as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
    ChaCha8Rng::seed_from_u64(mix)
}

pub fn small_int(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    int(rng.gen_range(-bound..=bound))
}

pub fn nonzero_int(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let v = rng.gen_range(1..=bound);
    int(if rng.gen_bool(0.5) { v } else { -v })
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    frac(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

/// Random combination of the weight-`w` monomials of `table`, whose
/// variables all have positive weight.
pub fn homogeneous(rng: &mut ChaCha8Rng, table: &Arc<VariableTable>, w: u32, density: f64) -> Polynomial {
    let weights: Vec<u32> = table.vars().iter().map(|v| v.weight.degree()).collect();
    let odd: Vec<bool> = (0..table.len()).map(|i| table.is_odd(i)).collect();
    let mut terms = Vec::new();
    for e in oracle::monomials(&weights, &odd, w) {
        if rng.gen_bool(density) {
            terms.push((Multidegree::from_exponents(&e), nonzero_int(rng, 3)));
        }
    }
    Polynomial::from_terms(table, terms).expect("valid monomials")
}

/// Rank vector (index = weight - 1) with a nonzero last entry, or empty.
pub fn rank_vector(rng: &mut ChaCha8Rng, max_len: usize, max_entry: usize, max_total: usize) -> Vec<usize> {
    loop {
        let len = rng.gen_range(1..=max_len);
        let mut d: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max_entry)).collect();
        while d.last() == Some(&0) {
            d.pop();
        }
        let total: usize = d.iter().sum();
        if total > 0 && total <= max_total {
            return d;
        }
    }
}

/// Invertible matrix as unit-lower times upper-triangular with nonzero diagonal.
pub fn invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    for r in 0..n {
        for c in 0..n {
            if r > c {
                l.set(r, c, small_int(rng, 2));
            } else if r < c {
                u.set(r, c, small_int(rng, 2));
            } else {
                u.set(r, c, nonzero_int(rng, 2));
            }
        }
    }
    l.mul(&u)
}

/// Conjugates every positive-weight component by a random invertible matrix.
pub fn conjugate(rng: &mut ChaCha8Rng, alg: &PresentedGradedAlgebra) -> PresentedGradedAlgebra {
    let change: Vec<Matrix> = (0..alg.num_components())
        .map(|c| if c == 0 { Matrix::identity(1) } else { invertible(rng, alg.dim(c)) })
        .collect();
    alg.change_basis(&change).expect("invertible change of basis")
}

/// 𝒜^[k](ℝ^𝐝) modulo the monomial ideal generated by `relation`.
pub fn monomial_quotient(rank: &RankVector, k: u32, relation: &Multidegree) -> PresentedGradedAlgebra {
    let table = Arc::new(VariableTable::from_rank(rank));
    let model = TruncatedAlgebra::new(table, k);
    let basis: Vec<Vec<Multidegree>> = model
        .basis()
        .into_iter()
        .map(|(_, ms)| ms.into_iter().filter(|m| m.divide(relation).is_none()).collect())
        .collect();
    let position: Vec<BTreeMap<Multidegree, usize>> = basis
        .iter()
        .map(|ms| ms.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect())
        .collect();
    let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let mut products = Vec::new();
    for i in 1..=k as usize {
        for j in 1..=k as usize - i {
            let mut t = Tensor3::zeros(dims[i], dims[j], dims[i + j]);
            for (a, ma) in basis[i].iter().enumerate() {
                for (b, mb) in basis[j].iter().enumerate() {
                    if let Some(&c) = position[i + j].get(&ma.times(mb)) {
                        t.set(a, b, c, int(1));
                    }
                }
            }
            products.push((i as u32, j as u32, t));
        }
    }
    PresentedGradedAlgebra::from_single(k, &dims, None, products).expect("monomial quotient is well formed")
}

/// A decomposable monomial of weight at most `k` in the variables of `rank`.
pub fn decomposable_monomial(rng: &mut ChaCha8Rng, rank: &RankVector, k: u32) -> Option<Multidegree> {
    let weights = oracle::weights_of_rank(rank.entries());
    let odd = vec![false; weights.len()];
    let candidates: Vec<Vec<u32>> = (2..=k)
        .flat_map(|w| oracle::monomials(&weights, &odd, w))
        .filter(|e| e.iter().sum::<u32>() >= 2)
        .collect();
    if candidates.is_empty() {
        return None;
    }
    let pick = &candidates[rng.gen_range(0..candidates.len())];
    Some(Multidegree::from_exponents(pick))
}

/// Tensor with entries in {-1, 0, 1}, zero with probability `sparsity`.
pub fn tensor(rng: &mut ChaCha8Rng, shape: [usize; 3], sparsity: f64) -> Tensor3 {
    let mut t = Tensor3::zeros(shape[0], shape[1], shape[2]);
    for a in 0..shape[0] {
        for b in 0..shape[1] {
            for c in 0..shape[2] {
                if !rng.gen_bool(sparsity) {
                    t.set(a, b, c, nonzero_int(rng, 1));
                }
            }
        }
    }
    t
}

/// Symmetric (or antisymmetric) `d × d × e` tensor.
pub fn square_tensor(rng: &mut ChaCha8Rng, d: usize, e: usize, antisymmetric: bool, sparsity: f64) -> Tensor3 {
    let mut t = Tensor3::zeros(d, d, e);
    for a in 0..d {
        for b in a..d {
            if antisymmetric && a == b {
                continue;
            }
            for c in 0..e {
                if rng.gen_bool(sparsity) {
                    continue;
                }
                let v = nonzero_int(rng, 2);
                t.set(a, b, c, v.clone());
                t.set(b, a, c, if antisymmetric { -v } else { v });
            }
        }
    }
    t
}
