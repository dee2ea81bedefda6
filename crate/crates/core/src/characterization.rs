//! Rank conditions deciding when multiplication data on a graded vector
//! space comes from a free graded Weil algebra, plus the bi-graded and
//! double-vector-bundle variants.
//!
//! Data are held as a [`PresentedGradedAlgebra`] ℝ ⊕ E_0 with E_0 = E¹ ⊕ … ⊕ Eᵏ;
//! every verdict is decided by exact rank computations.

use std::sync::Arc;

use num_traits::Zero;

use crate::bundle::GradedBundleAtlas;
use crate::error::{Error, Result};
use crate::grading::{enumerate_monomials, Multidegree, RankVector, VariableTable, Weight};
use crate::linalg::{complement_columns, span_dim, Matrix};
use crate::poly::Polynomial;
use crate::rational::{binomial, Rational};
use crate::space::GradedSpace;
use crate::weil::{AxiomViolation, Element, FreenessVerdict, PresentedGradedAlgebra, Tensor3, WeilIsomorphism};

/// Symmetric multiplication data m_{i,i'}: Eⁱ × E^{i'} → E^{i+i'} up to order k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymAlgData {
    alg: PresentedGradedAlgebra,
}

impl SymAlgData {
    /// `dims[w - 1] = dim E^w`; products `(i, i', tensor)` with i, i' ≥ 1.
    pub fn new(order: u32, dims: &[usize], products: Vec<(u32, u32, Tensor3)>) -> Result<Self> {
        let mut all = vec![1];
        all.extend_from_slice(dims);
        let alg = PresentedGradedAlgebra::from_single(order, &all, None, products)?;
        Ok(SymAlgData { alg })
    }

    pub fn from_algebra(alg: PresentedGradedAlgebra) -> Result<Self> {
        if alg.bound().len() != 1 || alg.is_super() {
            return Err(Error::Precondition("multiplication data must be even and N-graded".into()));
        }
        Ok(SymAlgData { alg })
    }

    pub fn algebra(&self) -> &PresentedGradedAlgebra {
        &self.alg
    }

    pub fn order(&self) -> u32 {
        self.alg.top_weight()
    }

    /// dim E^w for w = 1..=k.
    pub fn dims(&self) -> Vec<usize> {
        self.alg.dims()[1..].to_vec()
    }

    pub fn product(&self, i: u32, j: u32) -> Option<&Tensor3> {
        self.alg.product_tensor(i as usize, j as usize)
    }
}

/// Symmetry and associativity on all basis triples.
pub fn check_assoc_comm(m: &SymAlgData) -> std::result::Result<(), AxiomViolation> {
    m.alg.check_axioms()
}

/// Subspace of a component, stored as a row-reduced basis.
fn reduced(vs: Vec<Vec<Rational>>, dim: usize) -> Vec<Vec<Rational>> {
    if vs.is_empty() || dim == 0 {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_rows(vs, dim).rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Rows projecting a component onto the quotient by `sub`, in the
/// coordinates of the complementary standard basis vectors.
fn quotient_projection(sub: &[Vec<Rational>], dim: usize) -> Matrix {
    let comp = complement_columns(sub, dim);
    let mut cols: Vec<Vec<Rational>> = sub.to_vec();
    for &c in &comp {
        let mut e = vec![Rational::zero(); dim];
        e[c] = Rational::from_integer(1.into());
        cols.push(e);
    }
    if dim == 0 {
        return Matrix::zeros(0, 0);
    }
    let b = Matrix::from_columns(&cols, dim);
    let inv = b.inverse().expect("subspace basis plus complement is a basis");
    let rows: Vec<Vec<Rational>> = (sub.len()..dim).map(|r| inv.row(r).to_vec()).collect();
    if rows.is_empty() {
        Matrix::zeros(0, dim)
    } else {
        Matrix::from_rows(rows, dim)
    }
}

/// Ê = E_0 / (E_0 · E_0) together with the power filtration (E_0)^j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorQuotient {
    /// dim Ê_w for w = 0..=k (entry 0 is always 0).
    pub dims: Vec<usize>,
    /// Basis indices of E^w whose classes form a basis of Ê_w.
    pub representatives: Vec<Vec<usize>>,
    /// E^w → Ê_w in the representative basis.
    pub projections: Vec<Matrix>,
    /// `powers[j - 1][w]` = dim of the weight-w part of (E_0)^j, j = 1..=k+1.
    pub powers: Vec<Vec<usize>>,
    power_bases: Vec<Vec<Vec<Vec<Rational>>>>,
}

impl GeneratorQuotient {
    pub fn rank_vector(&self) -> RankVector {
        RankVector::new(self.dims[1..].to_vec())
    }

    /// Row-reduced basis of the weight-w part of (E_0)^j.
    pub fn power_basis(&self, j: usize, w: usize) -> &[Vec<Rational>] {
        &self.power_bases[j - 1][w]
    }
}

fn basis_vectors(alg: &PresentedGradedAlgebra, w: usize) -> Vec<Element> {
    let d = alg.dim(w);
    (0..d).map(|i| Element::basis(w, d, i)).collect()
}

fn power_filtration(alg: &PresentedGradedAlgebra, top: usize) -> Vec<Vec<Vec<Vec<Rational>>>> {
    let k = alg.top_weight() as usize;
    let mut first: Vec<Vec<Vec<Rational>>> = vec![Vec::new()];
    for w in 1..=k {
        first.push(reduced(basis_vectors(alg, w).into_iter().map(|e| e.coords).collect(), alg.dim(w)));
    }
    let mut powers = vec![first];
    for j in 2..=top {
        let prev = &powers[j - 2];
        let mut next: Vec<Vec<Vec<Rational>>> = vec![Vec::new()];
        for w in 1..=k {
            let mut span = Vec::new();
            for w1 in 1..w {
                for x in &prev[w1] {
                    let xe = Element { component: w1, coords: x.clone() };
                    for y in basis_vectors(alg, w - w1) {
                        if let Some(p) = alg.mul(&xe, &y) {
                            if !p.is_zero() {
                                span.push(p.coords);
                            }
                        }
                    }
                }
            }
            next.push(reduced(span, alg.dim(w)));
        }
        powers.push(next);
    }
    powers
}

fn require_axioms(alg: &PresentedGradedAlgebra) -> Result<()> {
    alg.check_axioms().map_err(|v| Error::InvalidAlgebra(v.to_string()))
}

pub fn compute_e_hat(m: &SymAlgData) -> Result<GeneratorQuotient> {
    e_hat_of(&m.alg)
}

fn e_hat_of(alg: &PresentedGradedAlgebra) -> Result<GeneratorQuotient> {
    require_axioms(alg)?;
    let k = alg.top_weight() as usize;
    let power_bases = power_filtration(alg, k + 1);
    let mut dims = vec![0];
    let mut representatives = vec![Vec::new()];
    let mut projections = vec![Matrix::zeros(0, 1)];
    for w in 1..=k {
        let dec = &power_bases[1][w];
        let reps = complement_columns(dec, alg.dim(w));
        dims.push(reps.len());
        representatives.push(reps);
        projections.push(quotient_projection(dec, alg.dim(w)));
    }
    let powers = power_bases
        .iter()
        .map(|per_w| per_w.iter().map(Vec::len).collect())
        .collect();
    Ok(GeneratorQuotient {
        dims,
        representatives,
        projections,
        powers,
        power_bases,
    })
}

/// Weight-w block of m^j: degree-j generator monomials of weight w against
/// coordinates of E^w / (E_0)^{j+1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedBlock {
    pub weight: u32,
    pub monomials: Vec<Multidegree>,
    pub matrix: Matrix,
}

/// m^j: Sym^j Ê → E_0 / (E_0)^{j+1}, restricted to weights ≤ k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap {
    pub j: u32,
    pub table: Arc<VariableTable>,
    pub blocks: Vec<InducedBlock>,
    /// Products with a factor in (E_0)² land in (E_0)^{j+1}.
    pub well_defined: bool,
}

impl InducedMap {
    pub fn domain_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.monomials.len()).sum()
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.matrix.rank()).sum()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.domain_dim()
    }

    /// A nonzero element of Sym^j Ê in the kernel, as a generator polynomial.
    pub fn kernel_witness(&self) -> Option<Polynomial> {
        for b in &self.blocks {
            if let Some(v) = b.matrix.kernel().into_iter().next() {
                return Polynomial::from_terms(&self.table, b.monomials.iter().cloned().zip(v)).ok();
            }
        }
        None
    }
}

pub fn induced_map(m: &SymAlgData, j: u32) -> Result<InducedMap> {
    induced_map_of(&m.alg, j)
}

fn induced_map_of(alg: &PresentedGradedAlgebra, j: u32) -> Result<InducedMap> {
    if j < 2 {
        return Err(Error::Precondition("induced maps start at j = 2".into()));
    }
    require_axioms(alg)?;
    let space = alg.extract_generators()?;
    let k = alg.top_weight();
    let ju = j as usize;
    let power_bases = power_filtration(alg, ju + 1);
    let mut blocks = Vec::new();
    for w in 1..=k {
        let monomials: Vec<Multidegree> = enumerate_monomials(&space.table, &Weight::scalar(w), None)
            .into_iter()
            .filter(|m| m.total_degree() == j)
            .collect();
        if monomials.is_empty() {
            continue;
        }
        let wu = w as usize;
        let proj = quotient_projection(&power_bases[ju][wu], alg.dim(wu));
        let cols: Vec<Vec<Rational>> = monomials
            .iter()
            .map(|md| {
                let v = alg
                    .evaluate_monomial(&space, md)
                    .map(|e| e.coords)
                    .unwrap_or_else(|| vec![Rational::zero(); alg.dim(wu)]);
                proj.mul_vec(&v)
            })
            .collect();
        let matrix = if proj.rows() == 0 {
            Matrix::zeros(0, monomials.len())
        } else {
            Matrix::from_columns(&cols, proj.rows())
        };
        blocks.push(InducedBlock {
            weight: w,
            monomials,
            matrix,
        });
    }
    let well_defined = check_well_defined(alg, &power_bases, ju);
    Ok(InducedMap {
        j,
        table: space.table,
        blocks,
        well_defined,
    })
}

/// (E_0)² · (E_0)^{j−1} ⊆ (E_0)^{j+1}, checked on spanning vectors.
fn check_well_defined(
    alg: &PresentedGradedAlgebra,
    powers: &[Vec<Vec<Vec<Rational>>>],
    j: usize,
) -> bool {
    let k = alg.top_weight() as usize;
    for w1 in 1..=k {
        for w2 in 1..=k.saturating_sub(w1) {
            let target = &powers[j][w1 + w2];
            let tdim = span_dim(target, alg.dim(w1 + w2));
            for x in &powers[1][w1] {
                for y in &powers[j - 2][w2] {
                    let xe = Element { component: w1, coords: x.clone() };
                    let ye = Element { component: w2, coords: y.clone() };
                    let Some(p) = alg.mul(&xe, &ye) else { continue };
                    if p.is_zero() {
                        continue;
                    }
                    let mut with = target.clone();
                    with.push(p.coords);
                    if span_dim(&with, alg.dim(w1 + w2)) != tdim {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityCheck {
    pub j: u32,
    pub rank: usize,
    pub domain_dim: usize,
    pub well_defined: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeKVerdict {
    pub accepted: bool,
    pub axioms: Option<AxiomViolation>,
    pub rank_vector: Option<RankVector>,
    pub checks: Vec<InjectivityCheck>,
    /// Kernel element of the first non-injective m^j.
    pub witness: Option<Polynomial>,
    /// Freeness verdict of ℝ ⊕ E_0 computed independently.
    pub oracle_free: bool,
}

impl DegreeKVerdict {
    pub fn oracle_agrees(&self) -> bool {
        self.accepted == self.oracle_free
    }
}

/// Associativity, commutativity and injectivity of m^j for j = 2..=k.
pub fn check_degree_k(m: &SymAlgData, k: u32) -> Result<DegreeKVerdict> {
    let alg = m.alg.with_bound(&[k])?;
    let oracle_free = matches!(alg.check_free(k), Ok(v) if v.free);
    if let Err(v) = alg.check_axioms() {
        return Ok(DegreeKVerdict {
            accepted: false,
            axioms: Some(v),
            rank_vector: None,
            checks: Vec::new(),
            witness: None,
            oracle_free,
        });
    }
    let quotient = e_hat_of(&alg)?;
    let mut checks = Vec::new();
    let mut witness = None;
    for j in 2..=k {
        let map = induced_map_of(&alg, j)?;
        if !map.is_injective() && witness.is_none() {
            witness = map.kernel_witness();
        }
        checks.push(InjectivityCheck {
            j,
            rank: map.rank(),
            domain_dim: map.domain_dim(),
            well_defined: map.well_defined,
        });
    }
    let accepted = checks.iter().all(|c| c.rank == c.domain_dim && c.well_defined);
    Ok(DegreeKVerdict {
        accepted,
        axioms: None,
        rank_vector: Some(quotient.rank_vector()),
        checks,
        witness,
        oracle_free,
    })
}

/// Verdict on m₁₁: Sym²E¹ → E² and its transpose E²* → Sym²E¹*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degree2Verdict {
    pub injective: bool,
    pub rank: usize,
    pub sym_dim: usize,
    pub dual_surjective: bool,
    /// Kernel vector over the basis pairs (a ≤ b) of Sym²E¹.
    pub witness: Option<Vec<Rational>>,
}

fn pair_matrix(t: &Tensor3, strict: bool) -> (Vec<(usize, usize)>, Matrix) {
    let [d1, _, d2] = t.shape();
    let pairs: Vec<(usize, usize)> = (0..d1)
        .flat_map(|a| (a..d1).map(move |b| (a, b)))
        .filter(|&(a, b)| !strict || a < b)
        .collect();
    let cols: Vec<Vec<Rational>> = pairs.iter().map(|&(a, b)| t.fiber(a, b).to_vec()).collect();
    let m = if d2 == 0 || cols.is_empty() {
        Matrix::zeros(d2, cols.len())
    } else {
        Matrix::from_columns(&cols, d2)
    };
    (pairs, m)
}

/// The matrix of a bilinear form on a square pairing with prescribed
/// (anti)symmetry, as a map from Sym² (or ⋀²) to the target.
pub(crate) fn square_map(t: &Tensor3, antisymmetric: bool) -> Result<(Vec<(usize, usize)>, Matrix)> {
    let [d1, d1b, _] = t.shape();
    if d1 != d1b {
        return Err(Error::Shape("bilinear data must be square in its inputs".into()));
    }
    for a in 0..d1 {
        for b in 0..d1 {
            let (x, y) = (t.fiber(a, b), t.fiber(b, a));
            let ok = x.iter().zip(y).all(|(u, v)| if antisymmetric { *u == -v.clone() } else { u == v });
            if !ok {
                let kind = if antisymmetric { "antisymmetric" } else { "symmetric" };
                return Err(Error::Precondition(format!("bilinear data is not {kind} at ({a}, {b})")));
            }
        }
    }
    Ok(pair_matrix(t, antisymmetric))
}

pub fn check_degree_2(m11: &Tensor3) -> Result<Degree2Verdict> {
    let (pairs, m) = square_map(m11, false)?;
    let rank = m.rank();
    let sym_dim = pairs.len();
    let dual_surjective = m.transpose().rank() == sym_dim;
    Ok(Degree2Verdict {
        injective: rank == sym_dim,
        rank,
        sym_dim,
        dual_surjective,
        witness: m.kernel().into_iter().next(),
    })
}

/// Order-2 data with the given m₁₁ and no other products.
pub fn degree_2_data(m11: &Tensor3) -> Result<SymAlgData> {
    let [d1, _, d2] = m11.shape();
    SymAlgData::new(2, &[d1, d2], vec![(1, 1, m11.clone())])
}

/// E^{1,0} ⊗ E^{0,1} → E^{1,1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DVBData {
    pub map: Tensor3,
}

impl DVBData {
    pub fn new(map: Tensor3) -> Self {
        DVBData { map }
    }

    /// (dim E^{1,0}, dim E^{0,1}, dim E^{1,1}).
    pub fn dims(&self) -> (usize, usize, usize) {
        let [a, b, c] = self.map.shape();
        (a, b, c)
    }

    /// ℝ ⊕ E^{1,0} ⊕ E^{0,1} ⊕ E^{1,1}, bi-graded and truncated at (1,1).
    pub fn to_bigraded(&self) -> Result<PresentedGradedAlgebra> {
        let (a, b, c) = self.dims();
        let dims = [(vec![1, 0], a), (vec![0, 1], b), (vec![1, 1], c)].into_iter().collect();
        PresentedGradedAlgebra::from_grades(
            vec![1, 1],
            &dims,
            None,
            vec![(vec![1, 0], vec![0, 1], self.map.clone())],
        )
    }

    /// Matrix of E^{1,0} ⊗ E^{0,1} → E^{1,1}, columns indexed by (a, b).
    pub fn tensor_matrix(&self) -> Matrix {
        let (a, b, c) = self.dims();
        let cols: Vec<Vec<Rational>> = (0..a)
            .flat_map(|i| (0..b).map(move |j| (i, j)))
            .map(|(i, j)| self.map.fiber(i, j).to_vec())
            .collect();
        if cols.is_empty() || c == 0 {
            Matrix::zeros(c, cols.len())
        } else {
            Matrix::from_columns(&cols, c)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DvbVerdict {
    pub accepted: bool,
    pub rank: usize,
    /// Basis of the kernel of C^{1,1} → C^{1,0} ⊗ C^{0,1}.
    pub core: Vec<Vec<Rational>>,
    /// dim core = dim E^{1,1} − dim E^{1,0}·dim E^{0,1} whenever accepted.
    pub rank_nullity: bool,
}

impl DvbVerdict {
    pub fn core_dim(&self) -> usize {
        self.core.len()
    }
}

pub fn check_dvb(d: &DVBData) -> DvbVerdict {
    let (a, b, c) = d.dims();
    let m = d.tensor_matrix();
    let rank = m.rank();
    let accepted = rank == a * b;
    let dual = m.transpose();
    let core = dual.kernel();
    let rank_nullity = core.len() + dual.rank() == c && (!accepted || core.len() == c - a * b);
    DvbVerdict {
        accepted,
        rank,
        core,
        rank_nullity,
    }
}

/// Bi-homogeneous freeness against the bi-graded monomial model in box (k, l).
pub fn check_double_graded(alg: &PresentedGradedAlgebra, k: u32, l: u32) -> Result<FreenessVerdict> {
    if alg.bound().len() != 2 {
        return Err(Error::Precondition("bi-graded data needs an N^2 grading".into()));
    }
    alg.with_bound(&[k, l])?.check_free_in_box()
}

/// Image rank of m₁₂: E¹ ⊗ E² → E³ in 𝒜^[3](ℝ^𝐝), next to two closed forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankM12 {
    pub brute_force: u64,
    /// C(d₁+2, 3) + d₁d₂ with d₁, d₂ the new generators per weight.
    pub rank_vector_formula: u64,
    /// C(e₁,3) + 2C(e₁,2) + e₁ + e₁e₂ with e_i = dim Eⁱ.
    pub literal_formula: u64,
}

impl RankM12 {
    pub fn literal_matches(&self) -> bool {
        self.literal_formula == self.brute_force
    }
}

pub fn rank_m12(d: &RankVector) -> RankM12 {
    let alg = crate::weil::model_algebra(d, 3);
    let (c1, c2, c3) = (
        alg.component_index(&[1]).expect("weight 1"),
        alg.component_index(&[2]).expect("weight 2"),
        alg.component_index(&[3]).expect("weight 3"),
    );
    let mut images = Vec::new();
    for x in basis_vectors(&alg, c1) {
        for y in basis_vectors(&alg, c2) {
            if let Some(p) = alg.mul(&x, &y) {
                images.push(p.coords);
            }
        }
    }
    let brute_force = span_dim(&images, alg.dim(c3)) as u64;
    let (d1, d2) = (d.get(1) as u64, d.get(2) as u64);
    let e1 = alg.dim(c1) as u64;
    let e2 = alg.dim(c2) as u64;
    RankM12 {
        brute_force,
        rank_vector_formula: binomial(d1 + 2, 3) + d1 * d2,
        literal_formula: binomial(e1, 3) + 2 * binomial(e1, 2) + e1 + e1 * e2,
    }
}

/// Graded space recovered from accepted data, with the round-trip check.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub rank_vector: RankVector,
    pub space: GradedSpace,
    pub atlas: GradedBundleAtlas,
    pub iso: WeilIsomorphism,
    /// Structure constants of the model, rewritten in the original basis,
    /// equal the input exactly.
    pub structure_recovered: bool,
}

pub fn reconstruct(m: &SymAlgData, k: u32) -> Result<Reconstruction> {
    let verdict = check_degree_k(m, k)?;
    if !verdict.accepted {
        let witness = match (&verdict.axioms, &verdict.witness) {
            (Some(v), _) => v.to_string(),
            (None, Some(w)) => w.to_string(),
            (None, None) => "rejected".into(),
        };
        return Err(Error::NotFree { witness });
    }
    let alg = m.alg.with_bound(&[k])?;
    let iso = alg.iso_to_model()?;
    let table = iso.generators.table.clone();
    let model = iso.model.to_presented();
    let recovered = model.change_basis(&iso.to_model)?;
    let structure_recovered = same_structure(&recovered, &alg);
    let base = GradedBundleAtlas::base_table(&[])?;
    let atlas = GradedBundleAtlas::new(vec!["U".into()], base, table.clone())?;
    Ok(Reconstruction {
        rank_vector: table.rank_vector(),
        space: GradedSpace::from_table(table)?,
        atlas,
        iso,
        structure_recovered,
    })
}

/// Equal dimensions and equal products on every pair of basis vectors.
pub fn same_structure(a: &PresentedGradedAlgebra, b: &PresentedGradedAlgebra) -> bool {
    if a.bound() != b.bound() || a.grades() != b.grades() || a.dims() != b.dims() {
        return false;
    }
    for i in 1..a.num_components() {
        for j in 1..a.num_components() {
            for x in basis_vectors(a, i) {
                for y in basis_vectors(a, j) {
                    let (p, q) = (a.mul(&x, &y), b.mul(&x, &y));
                    if p != q {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Verdict over sampled base points of a family of fiber data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyVerdict {
    pub accepted: bool,
    pub rank_vector: Option<RankVector>,
    /// First point where the data are rejected or the rank vector changes.
    pub witness_point: Option<Vec<Rational>>,
}

/// Pointwise check_degree_k with rank constancy across the samples.
pub fn check_degree_k_family<F>(points: &[Vec<Rational>], k: u32, data_at: F) -> Result<FamilyVerdict>
where
    F: Fn(&[Rational]) -> Result<SymAlgData>,
{
    let mut rank: Option<RankVector> = None;
    for p in points {
        let v = check_degree_k(&data_at(p)?, k)?;
        let same = match (&rank, &v.rank_vector) {
            (Some(r), Some(s)) => r == s,
            _ => true,
        };
        if !v.accepted || !same {
            return Ok(FamilyVerdict {
                accepted: false,
                rank_vector: rank,
                witness_point: Some(p.clone()),
            });
        }
        if rank.is_none() {
            rank = v.rank_vector;
        }
    }
    Ok(FamilyVerdict {
        accepted: true,
        rank_vector: rank,
        witness_point: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::weil::model_algebra;

    fn model_data(d: &[usize], k: u32) -> SymAlgData {
        SymAlgData::from_algebra(model_algebra(&RankVector::new(d.to_vec()), k)).unwrap()
    }

    fn m11(d1: usize, d2: usize, entries: &[(usize, usize, usize, i64)]) -> Tensor3 {
        let mut t = Tensor3::zeros(d1, d1, d2);
        for &(a, b, c, v) in entries {
            t.set(a, b, c, int(v));
            t.set(b, a, c, int(v));
        }
        t
    }

    #[test]
    fn assoc_comm_examples() {
        let m = model_data(&[1, 1], 2);
        assert!(check_assoc_comm(&m).is_ok());
        let three = model_data(&[2], 3);
        let mut p3: Vec<(u32, u32, Tensor3)> = three
            .algebra()
            .product_list()
            .into_iter()
            .filter(|(g, h, _)| g[0] <= h[0])
            .map(|(g, h, t)| (g[0], h[0], t))
            .collect();
        let slot = p3.iter_mut().find(|(i, j, _)| (*i, *j) == (1, 2)).unwrap();
        let bumped = slot.2.get(0, 2, 0) + int(1);
        slot.2.set(0, 2, 0, bumped);
        let bad = SymAlgData::new(3, &three.dims(), p3).unwrap();
        assert!(matches!(check_assoc_comm(&bad), Err(AxiomViolation::Associativity { .. })));
        let mut asym = Tensor3::zeros(2, 2, 1);
        asym.set(0, 1, 0, int(1));
        let d = SymAlgData::new(2, &[2, 1], vec![(1, 1, asym)]).unwrap();
        assert!(matches!(check_assoc_comm(&d), Err(AxiomViolation::Commutativity { .. })));
    }

    #[test]
    fn e_hat_examples() {
        assert_eq!(compute_e_hat(&model_data(&[1, 1], 2)).unwrap().dims, vec![0, 1, 1]);
        assert_eq!(compute_e_hat(&model_data(&[2, 0, 0], 3)).unwrap().dims, vec![0, 2, 0, 0]);
        let zero = SymAlgData::new(2, &[2, 3], Vec::new()).unwrap();
        let q = compute_e_hat(&zero).unwrap();
        assert_eq!(q.dims, vec![0, 2, 3]);
        assert_eq!(q.powers[1], vec![0, 0, 0]);
    }

    #[test]
    fn induced_map_examples() {
        let m = induced_map(&model_data(&[1, 1], 2), 2).unwrap();
        assert!(m.is_injective() && m.well_defined);
        assert_eq!(m.domain_dim(), 1);
        let zero = SymAlgData::new(2, &[1, 1], Vec::new()).unwrap();
        let z = induced_map(&zero, 2).unwrap();
        assert_eq!(z.rank(), 0);
        assert!(!z.is_injective());
        let three = induced_map(&model_data(&[2, 1, 1], 3), 3).unwrap();
        assert!(three.is_injective());
        assert_eq!(three.domain_dim(), 4);
    }

    #[test]
    fn degree_k_examples() {
        let v = check_degree_k(&model_data(&[1, 1], 2), 2).unwrap();
        assert!(v.accepted && v.oracle_agrees());
        assert_eq!(v.rank_vector, Some(RankVector::new(vec![1, 1])));
        let dual_numbers = SymAlgData::new(2, &[1, 0], Vec::new()).unwrap();
        let v = check_degree_k(&dual_numbers, 2).unwrap();
        assert!(!v.accepted && v.oracle_agrees());
        assert_eq!(v.witness.unwrap().to_string(), "y1_1^2");
        let t = m11(2, 2, &[(0, 0, 0, 1), (1, 1, 1, 1), (0, 1, 0, 1)]);
        let v = check_degree_k(&SymAlgData::new(2, &[2, 2], vec![(1, 1, t)]).unwrap(), 2).unwrap();
        assert!(!v.accepted && v.oracle_agrees());
        let v = check_degree_k(&model_data(&[2, 1, 1], 3), 3).unwrap();
        assert!(v.accepted && v.oracle_agrees());
    }

    #[test]
    fn degree_2_examples() {
        let v = check_degree_2(&m11(1, 1, &[(0, 0, 0, 1)])).unwrap();
        assert!(v.injective && v.dual_surjective);
        let v = check_degree_2(&Tensor3::zeros(1, 1, 1)).unwrap();
        assert!(!v.injective && !v.dual_surjective);
        let full = m11(2, 3, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 1, 2, 1)]);
        let v = check_degree_2(&full).unwrap();
        assert!(v.injective && v.dual_surjective);
        let agree = check_degree_k(&degree_2_data(&full).unwrap(), 2).unwrap();
        assert!(agree.accepted);
    }

    #[test]
    fn dvb_examples() {
        let mut t = Tensor3::zeros(1, 1, 1);
        t.set(0, 0, 0, int(1));
        let v = check_dvb(&DVBData::new(t));
        assert!(v.accepted && v.core_dim() == 0 && v.rank_nullity);
        let mut t = Tensor3::zeros(1, 1, 2);
        t.set(0, 0, 0, int(1));
        let d = DVBData::new(t);
        let v = check_dvb(&d);
        assert!(v.accepted && v.core_dim() == 1 && v.rank_nullity);
        assert!(check_double_graded(&d.to_bigraded().unwrap(), 1, 1).unwrap().free);
        let v = check_dvb(&DVBData::new(Tensor3::zeros(2, 2, 3)));
        assert!(!v.accepted && v.rank_nullity);
    }

    #[test]
    fn double_graded_model() {
        let table = Arc::new(
            VariableTable::new(vec![
                crate::grading::Variable::new("u", Weight::new(vec![1, 0])),
                crate::grading::Variable::new("v", Weight::new(vec![0, 1])),
                crate::grading::Variable::new("c", Weight::new(vec![1, 1])),
            ])
            .unwrap(),
        );
        let model = crate::weil::TruncatedAlgebra::with_bound(table, vec![1, 1]).to_presented();
        let v = check_double_graded(&model, 1, 1).unwrap();
        assert!(v.free);
        assert_eq!(model.dim(model.component_index(&[1, 1]).unwrap()), 2);
    }

    #[test]
    fn rank_m12_examples() {
        let r = rank_m12(&RankVector::new(vec![2, 0, 0]));
        assert_eq!((r.brute_force, r.rank_vector_formula), (4, 4));
        let r = rank_m12(&RankVector::new(vec![1, 1, 0]));
        assert_eq!((r.brute_force, r.rank_vector_formula), (2, 2));
        let r = rank_m12(&RankVector::new(vec![2, 1, 0]));
        assert_eq!((r.brute_force, r.rank_vector_formula), (6, 6));
        assert!(!r.literal_matches());
    }

    #[test]
    fn reconstruct_examples() {
        let r = reconstruct(&model_data(&[1, 1], 2), 2).unwrap();
        assert_eq!(r.rank_vector, RankVector::new(vec![1, 1]));
        assert!(r.structure_recovered);
        let vs = SymAlgData::new(1, &[3], Vec::new()).unwrap();
        let r = reconstruct(&vs, 1).unwrap();
        assert_eq!(r.rank_vector, RankVector::new(vec![3]));
        let bad = SymAlgData::new(2, &[1, 0], Vec::new()).unwrap();
        assert!(matches!(reconstruct(&bad, 2), Err(Error::NotFree { .. })));
    }

    #[test]
    fn reconstruct_conjugated() {
        let alg = model_algebra(&RankVector::new(vec![1, 1]), 2);
        let p1 = Matrix::from_rows(vec![vec![int(3)]], 1);
        let p2 = Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(1), int(1)]], 2);
        let conj = alg.change_basis(&[Matrix::identity(1), p1, p2]).unwrap();
        let r = reconstruct(&SymAlgData::from_algebra(conj).unwrap(), 2).unwrap();
        assert_eq!(r.rank_vector, RankVector::new(vec![1, 1]));
        assert!(r.structure_recovered);
    }

    #[test]
    fn family_rank_drop() {
        let points: Vec<Vec<Rational>> = (-2..=2).map(|x| vec![int(x)]).collect();
        let v = check_degree_k_family(&points, 2, |p| {
            let mut t = Tensor3::zeros(1, 1, 1);
            t.set(0, 0, 0, p[0].clone());
            SymAlgData::new(2, &[1, 1], vec![(1, 1, t)])
        })
        .unwrap();
        assert!(!v.accepted);
        assert_eq!(v.witness_point, Some(vec![int(0)]));
        let v = check_degree_k_family(&points, 2, |p| {
            let mut t = Tensor3::zeros(1, 1, 1);
            t.set(0, 0, 0, &p[0] * &p[0] + int(1));
            SymAlgData::new(2, &[1, 1], vec![(1, 1, t)])
        })
        .unwrap();
        assert!(v.accepted);
    }
}
