//! Multi-chart graded bundle atlases over a symbolic polynomial base.
//!
//! Every chart uses the same coordinate table: weight-0 base coordinates
//! followed by the fiber coordinates. The transition stored under
//! `(to, from)` expresses the coordinates of chart `to` as polynomials in
//! those of chart `from`; the cocycle law reads g_{γα} = g_{γβ} ∘ g_{βα}.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::grading::{
    enumerate_monomials, weight_of, Multidegree, RankVector, Variable, VariableTable, Weight,
};
use crate::linalg::Matrix;
use crate::poly::{GradedPolyMap, GradingViolation, Polynomial};
use crate::rational::Rational;

/// Matrix with polynomial entries over a base table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    table: Arc<VariableTable>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(table: &Arc<VariableTable>, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            table: table.clone(),
            rows,
            cols,
            entries: vec![Polynomial::zero(table); rows * cols],
        }
    }

    pub fn identity(table: &Arc<VariableTable>, n: usize) -> Self {
        let mut m = Self::zeros(table, n, n);
        for i in 0..n {
            m.set(i, i, Polynomial::one(table));
        }
        m
    }

    pub fn from_constant(table: &Arc<VariableTable>, m: &Matrix) -> Self {
        let mut out = Self::zeros(table, m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                out.set(r, c, Polynomial::constant(table, m.get(r, c).clone()));
            }
        }
        out
    }

    pub fn from_rows(table: &Arc<VariableTable>, rows: Vec<Vec<Polynomial>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut out = Self::zeros(table, n, cols);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape("ragged polynomial matrix".into()));
            }
            for (c, p) in row.into_iter().enumerate() {
                if **p.table() != **table {
                    return Err(Error::TableMismatch);
                }
                out.set(r, c, p);
            }
        }
        Ok(out)
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Polynomial) {
        self.entries[r * self.cols + c] = p;
    }

    pub fn to_rows(&self) -> Vec<Vec<Polynomial>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).clone()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(&self.table, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.table, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Polynomial::zero(&self.table);
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = &acc + &a.checked_mul(other.get(k, c))?;
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Entries precomposed with a base map x ↦ b(x), whose component
    /// polynomials live over `target`.
    pub fn compose_base(&self, images: &[Polynomial], target: &Arc<VariableTable>) -> Result<PolyMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|p| p.substitute(images, target))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            table: target.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Matrix> {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).evaluate(point)?);
            }
        }
        Ok(m)
    }

    /// The matrix itself when no entry depends on the base.
    pub fn constant(&self) -> Option<Matrix> {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let p = self.get(r, c);
                if p.terms().any(|(md, _)| !md.is_one()) {
                    return None;
                }
                m.set(r, c, p.constant_term());
            }
        }
        Some(m)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let p = self.get(r, c);
                    if r == c {
                        *p == Polynomial::one(&self.table)
                    } else {
                        p.is_zero()
                    }
                })
            })
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("matrix shapes differ".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            table: self.table.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionViolation {
    pub from: String,
    pub to: String,
    pub violation: GradingViolation,
}

impl fmt::Display for TransitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "transition {} -> {}: {}", self.from, self.to, self.violation)
    }
}

/// Located failure of the cocycle law on charts (α, β, γ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleFailure {
    pub triple: (String, String, String),
    pub component: String,
    /// (g_{γβ} ∘ g_{βα} − g_{γα}) in that component.
    pub discrepancy: String,
}

impl fmt::Display for CocycleFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c) = &self.triple;
        write!(
            f,
            "charts ({a}, {b}, {c}), component {}: discrepancy {}",
            self.component, self.discrepancy
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    pub triples_checked: usize,
    pub failure: Option<CocycleFailure>,
}

impl CocycleReport {
    pub fn pass(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBundleAtlas {
    charts: Vec<String>,
    base: Arc<VariableTable>,
    fiber: Arc<VariableTable>,
    table: Arc<VariableTable>,
    transitions: BTreeMap<(usize, usize), GradedPolyMap>,
}

impl GradedBundleAtlas {
    /// `base` holds weight-0 coordinates; `fiber` is an even ℕ-graded table.
    pub fn new(charts: Vec<String>, base: Arc<VariableTable>, fiber: Arc<VariableTable>) -> Result<Self> {
        if charts.is_empty() {
            return Err(Error::Precondition("an atlas needs at least one chart".into()));
        }
        for (i, c) in charts.iter().enumerate() {
            if charts[..i].contains(c) {
                return Err(Error::Precondition(format!("duplicate chart `{c}`")));
            }
        }
        if (0..base.len()).any(|i| !base.weight(i).is_zero_grade()) {
            return Err(Error::InvalidTable("base coordinates must have weight 0".into()));
        }
        if fiber.is_super() || fiber.arity() != 1 {
            return Err(Error::InvalidTable("fiber must be an even N-graded table".into()));
        }
        let table = Arc::new(base.concat(&fiber)?);
        Ok(GradedBundleAtlas {
            charts,
            base,
            fiber,
            table,
            transitions: BTreeMap::new(),
        })
    }

    /// Base variables with weight 0 from names.
    pub fn base_table(names: &[&str]) -> Result<Arc<VariableTable>> {
        let vars = names
            .iter()
            .map(|n| Variable::new(*n, Weight::zero(1)))
            .collect();
        let mut t = VariableTable::with_base(vars)?;
        if names.is_empty() {
            t = VariableTable::empty(1);
        }
        Ok(Arc::new(t))
    }

    pub fn charts(&self) -> &[String] {
        &self.charts
    }

    pub fn base(&self) -> &Arc<VariableTable> {
        &self.base
    }

    pub fn fiber(&self) -> &Arc<VariableTable> {
        &self.fiber
    }

    /// Base coordinates followed by fiber coordinates.
    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn rank(&self) -> RankVector {
        self.fiber.rank_vector()
    }

    pub fn chart_index(&self, id: &str) -> Result<usize> {
        self.charts
            .iter()
            .position(|c| c == id)
            .ok_or_else(|| Error::UnknownChart(id.to_string()))
    }

    pub fn transitions(&self) -> &BTreeMap<(usize, usize), GradedPolyMap> {
        &self.transitions
    }

    /// Transition from chart `from` to chart `to`; identity on the diagonal.
    pub fn transition(&self, to: usize, from: usize) -> Option<GradedPolyMap> {
        if to == from {
            return Some(
                self.transitions
                    .get(&(to, from))
                    .cloned()
                    .unwrap_or_else(|| GradedPolyMap::identity(&self.table)),
            );
        }
        self.transitions.get(&(to, from)).cloned()
    }

    /// Parses base images (over the base table) and fiber images (over the
    /// full table).
    pub fn parse_map(&self, base_map: &[&str], fiber_map: &[&str]) -> Result<GradedPolyMap> {
        if base_map.len() != self.base.len() || fiber_map.len() != self.fiber.len() {
            return Err(Error::Shape("one expression per base and fiber coordinate".into()));
        }
        let comps = base_map
            .iter()
            .chain(fiber_map)
            .map(|e| Polynomial::parse(e, &self.table))
            .collect::<Result<Vec<_>>>()?;
        GradedPolyMap::new(&self.table, &self.table, comps)
    }

    pub fn set_transition(&mut self, from: &str, to: &str, map: GradedPolyMap) -> Result<()> {
        let (f, t) = (self.chart_index(from)?, self.chart_index(to)?);
        if **map.source() != *self.table || **map.target() != *self.table {
            return Err(Error::TableMismatch);
        }
        self.check_base_components(&map)?;
        self.transitions.insert((t, f), map);
        Ok(())
    }

    /// Registers `map` and its declared inverse, verifying both composites
    /// are the identity.
    pub fn set_transition_with_inverse(
        &mut self,
        from: &str,
        to: &str,
        map: GradedPolyMap,
        inverse: GradedPolyMap,
    ) -> Result<()> {
        let id = GradedPolyMap::identity(&self.table);
        if map.compose(&inverse)? != id || inverse.compose(&map)? != id {
            return Err(Error::Precondition(format!(
                "declared inverse of {from} -> {to} does not compose to the identity"
            )));
        }
        self.set_transition(from, to, map)?;
        self.set_transition(to, from, inverse)
    }

    fn check_base_components(&self, map: &GradedPolyMap) -> Result<()> {
        let nb = self.base.len();
        for j in 0..nb {
            if map.component(j).terms().any(|(m, _)| m.pairs().iter().any(|&(i, _)| i >= nb)) {
                return Err(Error::Precondition(format!(
                    "base component `{}` depends on fiber coordinates",
                    self.table.var(j).name
                )));
            }
        }
        Ok(())
    }

    /// Every fiber component is homogeneous of its coordinate's weight,
    /// base coordinates counting as weight 0.
    pub fn check_transition_weights(&self) -> Vec<TransitionViolation> {
        let mut out = Vec::new();
        for (&(t, f), map) in &self.transitions {
            for v in map.check_graded() {
                out.push(TransitionViolation {
                    from: self.charts[f].clone(),
                    to: self.charts[t].clone(),
                    violation: v,
                });
            }
        }
        out
    }

    /// g_{γα} = g_{γβ} ∘ g_{βα} on every triple where both factors are given.
    pub fn check_cocycle(&self) -> Result<CocycleReport> {
        let n = self.charts.len();
        let mut checked = 0;
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let Some(gba) = self.transitions.get(&(b, a)) else { continue };
                for c in 0..n {
                    if c == b {
                        continue;
                    }
                    let Some(gcb) = self.transitions.get(&(c, b)) else { continue };
                    let gca = self.transition(c, a).ok_or_else(|| Error::MissingTransition {
                        from: self.charts[a].clone(),
                        to: self.charts[c].clone(),
                    })?;
                    checked += 1;
                    let composite = gcb.compose(gba)?;
                    for j in 0..self.table.len() {
                        let diff = composite.component(j).checked_sub(gca.component(j))?;
                        if !diff.is_zero() {
                            return Ok(CocycleReport {
                                triples_checked: checked,
                                failure: Some(CocycleFailure {
                                    triple: (
                                        self.charts[a].clone(),
                                        self.charts[b].clone(),
                                        self.charts[c].clone(),
                                    ),
                                    component: self.table.var(j).name.clone(),
                                    discrepancy: diff.to_string(),
                                }),
                            });
                        }
                    }
                }
            }
        }
        Ok(CocycleReport {
            triples_checked: checked,
            failure: None,
        })
    }

    /// Every fiber component is linear in the fiber coordinates.
    pub fn is_linear(&self) -> bool {
        let nb = self.base.len();
        self.transitions.values().all(|map| {
            (nb..self.table.len()).all(|j| {
                map.component(j).terms().all(|(m, _)| {
                    m.pairs().iter().filter(|&&(i, _)| i >= nb).map(|&(_, e)| e).sum::<u32>() == 1
                })
            })
        })
    }

    /// Copy with one coefficient of one transition component shifted.
    pub fn perturbed(&self, to: usize, from: usize, component: usize, monomial: &Multidegree, by: &Rational) -> Result<Self> {
        let mut out = self.clone();
        let map = out
            .transitions
            .get(&(to, from))
            .ok_or_else(|| Error::MissingTransition {
                from: self.charts[from].clone(),
                to: self.charts[to].clone(),
            })?;
        let bump = Polynomial::monomial(&self.table, monomial.clone(), by.clone())?;
        let mut comps = map.components().to_vec();
        comps[component] = comps[component].checked_add(&bump)?;
        let new = GradedPolyMap::new(&self.table, &self.table, comps)?;
        out.transitions.insert((to, from), new);
        Ok(out)
    }

    fn base_images(&self, map: &GradedPolyMap) -> Vec<Polynomial> {
        let nb = self.base.len();
        (0..nb).map(|j| restrict_to_base(map.component(j), &self.base)).collect()
    }

    fn require_cocycle(&self) -> Result<()> {
        if let Some(v) = self.check_transition_weights().first() {
            return Err(Error::NotGraded(v.to_string()));
        }
        match self.check_cocycle()?.failure {
            Some(f) => Err(Error::Precondition(format!("cocycle fails: {f}"))),
            None => Ok(()),
        }
    }

    /// Linear parts of the transitions on generators of each weight, modulo
    /// products of lower-weight coordinates.
    pub fn split_form(&self) -> Result<SplitForm> {
        self.require_cocycle()?;
        let nb = self.base.len();
        let rank = self.rank();
        let weights: Vec<u32> = (1..=rank.degree() as u32).filter(|&w| rank.get(w as usize) > 0).collect();
        let slots: BTreeMap<u32, Vec<usize>> = weights
            .iter()
            .map(|&w| {
                (w, (0..self.fiber.len()).filter(|&i| self.fiber.weight(i).degree() == w).collect())
            })
            .collect();
        let mut blocks = BTreeMap::new();
        let mut split = GradedBundleAtlas::new(self.charts.clone(), self.base.clone(), self.fiber.clone())?;
        for (&key, map) in &self.transitions {
            let mut per_weight = Vec::new();
            let mut comps: Vec<Polynomial> = (0..nb).map(|j| map.component(j).clone()).collect();
            comps.extend((0..self.fiber.len()).map(|_| Polynomial::zero(&self.table)));
            for &w in &weights {
                let idx = &slots[&w];
                let mut m = PolyMatrix::zeros(&self.base, idx.len(), idx.len());
                for (r, &j) in idx.iter().enumerate() {
                    for (mono, coeff) in map.component(nb + j).terms() {
                        let fiber_part: Vec<(usize, u32)> =
                            mono.pairs().iter().copied().filter(|&(i, _)| i >= nb).collect();
                        if let [(i, 1)] = fiber_part[..] {
                            if let Some(c) = idx.iter().position(|&x| x == i - nb) {
                                let base_part = Multidegree::from_pairs(
                                    mono.pairs().iter().copied().filter(|&(i, _)| i < nb),
                                );
                                let term = Polynomial::monomial(&self.base, base_part, coeff.clone())?;
                                let cur = m.get(r, c).checked_add(&term)?;
                                m.set(r, c, cur);
                            }
                        }
                    }
                    let mut lin = Polynomial::zero(&self.table);
                    for (c, &i) in idx.iter().enumerate() {
                        let entry = lift_from_base(m.get(r, c), &self.table);
                        lin = &lin + &(&entry * &Polynomial::var(&self.table, nb + i));
                    }
                    comps[nb + j] = lin;
                }
                per_weight.push(m);
            }
            blocks.insert(key, per_weight);
            split
                .transitions
                .insert(key, GradedPolyMap::new(&self.table, &self.table, comps)?);
        }
        let report = split.check_cocycle()?;
        Ok(SplitForm {
            rank,
            weights,
            blocks,
            atlas: split,
            cocycle: report,
        })
    }

    /// Pullback automorphisms of 𝒜^{≤W}(ℝ^𝐝) induced by the transitions.
    pub fn associated_algebra_bundle(&self, max_weight: u32) -> Result<AlgebraBundle> {
        self.require_cocycle()?;
        let bases: Vec<Vec<Multidegree>> = (0..=max_weight)
            .map(|w| enumerate_monomials(&self.fiber, &Weight::scalar(w), None))
            .collect();
        let mut blocks = BTreeMap::new();
        let mut base_maps = BTreeMap::new();
        for (&key, map) in &self.transitions {
            blocks.insert(key, self.pullback_blocks(map, &bases)?);
            base_maps.insert(key, self.base_images(map));
        }
        let bundle = AlgebraBundle {
            charts: self.charts.clone(),
            base: self.base.clone(),
            fiber: self.fiber.clone(),
            max_weight,
            bases,
            base_maps,
            blocks,
        };
        Ok(bundle)
    }

    /// Per-weight matrices of p ↦ p ∘ map on fiber monomials: column c holds
    /// the image of target monomial c in source monomials, with
    /// coefficients over the base.
    fn pullback_blocks(&self, map: &GradedPolyMap, bases: &[Vec<Multidegree>]) -> Result<Vec<PolyMatrix>> {
        pullback_blocks(map, &self.base, &self.fiber, &self.base, &self.fiber, bases)
    }
}

/// Per-weight pullback matrices of a map between trivialized bundles whose
/// tables are `base ++ fiber`.
pub fn pullback_blocks(
    map: &GradedPolyMap,
    src_base: &Arc<VariableTable>,
    src_fiber: &Arc<VariableTable>,
    tgt_base: &Arc<VariableTable>,
    tgt_fiber: &Arc<VariableTable>,
    max_weight_bases: &[Vec<Multidegree>],
) -> Result<Vec<PolyMatrix>> {
    let (snb, tnb) = (src_base.len(), tgt_base.len());
    let src_bases: Vec<Vec<Multidegree>> = (0..max_weight_bases.len())
        .map(|w| enumerate_monomials(src_fiber, &Weight::scalar(w as u32), None))
        .collect();
    let tgt_bases: Vec<Vec<Multidegree>> = (0..max_weight_bases.len())
        .map(|w| enumerate_monomials(tgt_fiber, &Weight::scalar(w as u32), None))
        .collect();
    let mut out = Vec::with_capacity(tgt_bases.len());
    for (w, tb) in tgt_bases.iter().enumerate() {
        let sb = &src_bases[w];
        let mut m = PolyMatrix::zeros(src_base, sb.len(), tb.len());
        for (c, mono) in tb.iter().enumerate() {
            let shifted = Multidegree::from_pairs(mono.pairs().iter().map(|&(i, e)| (i + tnb, e)));
            let p = Polynomial::monomial(map.target(), shifted, Rational::one())?;
            let image = map.pullback(&p)?;
            for (md, coeff) in image.terms() {
                let fiber_part = Multidegree::from_pairs(
                    md.pairs().iter().copied().filter(|&(i, _)| i >= snb).map(|(i, e)| (i - snb, e)),
                );
                let base_part = Multidegree::from_pairs(md.pairs().iter().copied().filter(|&(i, _)| i < snb));
                let Some(r) = sb.iter().position(|x| *x == fiber_part) else {
                    return Err(Error::NotGraded(format!(
                        "pullback of a weight-{w} monomial leaves weight {w}"
                    )));
                };
                let term = Polynomial::monomial(src_base, base_part, coeff.clone())?;
                let cur = m.get(r, c).checked_add(&term)?;
                m.set(r, c, cur);
            }
        }
        out.push(m);
    }
    Ok(out)
}

/// A polynomial over `base ++ fiber` that involves only base variables,
/// re-expressed over the base table.
fn restrict_to_base(p: &Polynomial, base: &Arc<VariableTable>) -> Polynomial {
    Polynomial::from_terms(base, p.terms().map(|(m, c)| (m.clone(), c.clone())))
        .expect("base components involve base variables only")
}

fn lift_from_base(p: &Polynomial, table: &Arc<VariableTable>) -> Polynomial {
    let map: Vec<usize> = (0..p.table().len()).collect();
    p.embed(table, &map)
}

/// Linearized atlas: per weight, the action on new generators.
#[derive(Clone, Debug)]
pub struct SplitForm {
    pub rank: RankVector,
    pub weights: Vec<u32>,
    /// `(to, from)` ↦ one square matrix per entry of `weights`.
    pub blocks: BTreeMap<(usize, usize), Vec<PolyMatrix>>,
    pub atlas: GradedBundleAtlas,
    pub cocycle: CocycleReport,
}

/// Fiberwise 𝒜^{≤W} glued by pullbacks. The block under `(to, from)` and
/// weight w maps chart-`to` monomials to chart-`from` monomials, so the
/// cocycle reads P_{γα} = P_{βα} · (P_{γβ} ∘ b_{βα}).
#[derive(Clone, Debug)]
pub struct AlgebraBundle {
    pub charts: Vec<String>,
    pub base: Arc<VariableTable>,
    pub fiber: Arc<VariableTable>,
    pub max_weight: u32,
    pub bases: Vec<Vec<Multidegree>>,
    pub base_maps: BTreeMap<(usize, usize), Vec<Polynomial>>,
    pub blocks: BTreeMap<(usize, usize), Vec<PolyMatrix>>,
}

impl AlgebraBundle {
    fn block(&self, to: usize, from: usize, w: usize) -> Option<PolyMatrix> {
        if to == from {
            return Some(
                self.blocks
                    .get(&(to, from))
                    .map(|b| b[w].clone())
                    .unwrap_or_else(|| PolyMatrix::identity(&self.base, self.bases[w].len())),
            );
        }
        self.blocks.get(&(to, from)).map(|b| b[w].clone())
    }

    pub fn check_cocycle(&self) -> Result<CocycleReport> {
        let n = self.charts.len();
        let mut checked = 0;
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let Some(bba) = self.base_maps.get(&(b, a)) else { continue };
                for c in 0..n {
                    if c == b || !self.blocks.contains_key(&(c, b)) {
                        continue;
                    }
                    checked += 1;
                    for w in 0..self.bases.len() {
                        let pba = self.block(b, a, w).expect("present");
                        let pcb = self.block(c, b, w).expect("present");
                        let pca = self.block(c, a, w).ok_or_else(|| Error::MissingTransition {
                            from: self.charts[a].clone(),
                            to: self.charts[c].clone(),
                        })?;
                        let lhs = pba.mul(&pcb.compose_base(bba, &self.base)?)?;
                        let diff = lhs.sub(&pca)?;
                        if let Some(pos) = diff.entries.iter().position(|p| !p.is_zero()) {
                            return Ok(CocycleReport {
                                triples_checked: checked,
                                failure: Some(CocycleFailure {
                                    triple: (
                                        self.charts[a].clone(),
                                        self.charts[b].clone(),
                                        self.charts[c].clone(),
                                    ),
                                    component: format!("weight {w}, entry {pos}"),
                                    discrepancy: diff.entries[pos].to_string(),
                                }),
                            });
                        }
                    }
                }
            }
        }
        Ok(CocycleReport {
            triples_checked: checked,
            failure: None,
        })
    }

    /// Square blocks of full rank at the given base points.
    pub fn blocks_invertible_at(&self, points: &[Vec<Rational>]) -> Result<bool> {
        for blocks in self.blocks.values() {
            for b in blocks {
                if b.rows() != b.cols() {
                    return Ok(false);
                }
                for p in points {
                    if b.evaluate(p)?.rank() != b.rows() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Splits a polynomial function on one chart into weight components,
    /// each a section: coefficient polynomials over the base per fiber monomial.
    pub fn section_of(&self, f: &Polynomial) -> Result<Vec<Vec<Polynomial>>> {
        let nb = self.base.len();
        let mut out: Vec<Vec<Polynomial>> = self
            .bases
            .iter()
            .map(|b| vec![Polynomial::zero(&self.base); b.len()])
            .collect();
        for (md, c) in f.terms() {
            let fiber_part = Multidegree::from_pairs(
                md.pairs().iter().copied().filter(|&(i, _)| i >= nb).map(|(i, e)| (i - nb, e)),
            );
            let w = weight_of(&fiber_part, &self.fiber)?.degree() as usize;
            if w >= self.bases.len() {
                return Err(Error::Precondition(format!(
                    "function has weight {w} above the computed range"
                )));
            }
            let base_part = Multidegree::from_pairs(md.pairs().iter().copied().filter(|&(i, _)| i < nb));
            let pos = self.bases[w]
                .iter()
                .position(|m| *m == fiber_part)
                .expect("every monomial is enumerated");
            let term = Polynomial::monomial(&self.base, base_part, c.clone())?;
            out[w][pos] = out[w][pos].checked_add(&term)?;
        }
        Ok(out)
    }

    /// Inverse of [`AlgebraBundle::section_of`].
    pub fn function_of(&self, section: &[Vec<Polynomial>], table: &Arc<VariableTable>) -> Result<Polynomial> {
        let nb = self.base.len();
        let mut out = Polynomial::zero(table);
        for (w, coeffs) in section.iter().enumerate() {
            for (pos, c) in coeffs.iter().enumerate() {
                let mono = Multidegree::from_pairs(self.bases[w][pos].pairs().iter().map(|&(i, e)| (i + nb, e)));
                let m = Polynomial::monomial(table, mono, Rational::one())?;
                out = &out + &(&lift_from_base(c, table) * &m);
            }
        }
        Ok(out)
    }
}

/// G-dual bundle: the algebra bundle together with its verified cocycle.
#[derive(Clone, Debug)]
pub struct GDualBundle {
    pub algebra: AlgebraBundle,
    pub cocycle: CocycleReport,
}

impl GDualBundle {
    pub fn dims(&self) -> Vec<usize> {
        self.algebra.bases.iter().map(Vec::len).collect()
    }
}

pub fn g_dual_bundle(atlas: &GradedBundleAtlas, max_weight: u32) -> Result<GDualBundle> {
    let algebra = atlas.associated_algebra_bundle(max_weight)?;
    let cocycle = algebra.check_cocycle()?;
    Ok(GDualBundle { algebra, cocycle })
}

/// Morphism of locally finite-rank bundles over x ↦ b(x): per weight a
/// linear map F_w(x) → E_w(b(x)) with entries polynomial in x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardMorphism {
    pub source_base: Arc<VariableTable>,
    pub target_base: Arc<VariableTable>,
    pub base_map: Vec<Polynomial>,
    pub blocks: Vec<PolyMatrix>,
}

/// Relation dual to a standard morphism: the same base map x ↦ b(x), with
/// per-weight fiber maps in the opposite direction, E*_w(b(x)) → F*_w(x).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZakrzewskiMorphism {
    pub source_base: Arc<VariableTable>,
    pub target_base: Arc<VariableTable>,
    pub base_map: Vec<Polynomial>,
    pub blocks: Vec<PolyMatrix>,
}

fn check_morphism_shape(source_base: &Arc<VariableTable>, target_base: &Arc<VariableTable>, base_map: &[Polynomial], blocks: &[PolyMatrix]) -> Result<()> {
    if base_map.len() != target_base.len() {
        return Err(Error::Shape("one base image per target base coordinate".into()));
    }
    if base_map.iter().any(|p| **p.table() != **source_base) || blocks.iter().any(|b| **b.table() != **source_base) {
        return Err(Error::TableMismatch);
    }
    Ok(())
}

impl StandardMorphism {
    pub fn new(
        source_base: &Arc<VariableTable>,
        target_base: &Arc<VariableTable>,
        base_map: Vec<Polynomial>,
        blocks: Vec<PolyMatrix>,
    ) -> Result<Self> {
        check_morphism_shape(source_base, target_base, &base_map, &blocks)?;
        Ok(StandardMorphism {
            source_base: source_base.clone(),
            target_base: target_base.clone(),
            base_map,
            blocks,
        })
    }

    pub fn identity(base: &Arc<VariableTable>, ranks: &[usize]) -> Self {
        StandardMorphism {
            source_base: base.clone(),
            target_base: base.clone(),
            base_map: (0..base.len()).map(|i| Polynomial::var(base, i)).collect(),
            blocks: ranks.iter().map(|&r| PolyMatrix::identity(base, r)).collect(),
        }
    }

    /// `self ∘ first`: blocks (self_w ∘ b_first) · first_w.
    pub fn after(&self, first: &StandardMorphism) -> Result<StandardMorphism> {
        if *first.target_base != *self.source_base || first.blocks.len() != self.blocks.len() {
            return Err(Error::TableMismatch);
        }
        let base_map = self
            .base_map
            .iter()
            .map(|p| p.substitute(&first.base_map, &first.source_base))
            .collect::<Result<Vec<_>>>()?;
        let blocks = self
            .blocks
            .iter()
            .zip(&first.blocks)
            .map(|(s, f)| s.compose_base(&first.base_map, &first.source_base)?.mul(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(StandardMorphism {
            source_base: first.source_base.clone(),
            target_base: self.target_base.clone(),
            base_map,
            blocks,
        })
    }
}

impl ZakrzewskiMorphism {
    pub fn new(
        source_base: &Arc<VariableTable>,
        target_base: &Arc<VariableTable>,
        base_map: Vec<Polynomial>,
        blocks: Vec<PolyMatrix>,
    ) -> Result<Self> {
        check_morphism_shape(source_base, target_base, &base_map, &blocks)?;
        Ok(ZakrzewskiMorphism {
            source_base: source_base.clone(),
            target_base: target_base.clone(),
            base_map,
            blocks,
        })
    }

    /// `self` following `first` in the relation direction: for
    /// first: G* ⇸ E* over N → P and self: E* ⇸ F* over M → N, the
    /// composite G* ⇸ F* has blocks self_w · (first_w ∘ b_self).
    pub fn after(&self, first: &ZakrzewskiMorphism) -> Result<ZakrzewskiMorphism> {
        if *self.target_base != *first.source_base || first.blocks.len() != self.blocks.len() {
            return Err(Error::TableMismatch);
        }
        let base_map = first
            .base_map
            .iter()
            .map(|p| p.substitute(&self.base_map, &self.source_base))
            .collect::<Result<Vec<_>>>()?;
        let blocks = self
            .blocks
            .iter()
            .zip(&first.blocks)
            .map(|(s, f)| s.mul(&f.compose_base(&self.base_map, &self.source_base)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(ZakrzewskiMorphism {
            source_base: self.source_base.clone(),
            target_base: first.target_base.clone(),
            base_map,
            blocks,
        })
    }
}

pub fn dualize_std(sm: &StandardMorphism) -> ZakrzewskiMorphism {
    ZakrzewskiMorphism {
        source_base: sm.source_base.clone(),
        target_base: sm.target_base.clone(),
        base_map: sm.base_map.clone(),
        blocks: sm.blocks.iter().map(PolyMatrix::transpose).collect(),
    }
}

pub fn dualize_zm(zm: &ZakrzewskiMorphism) -> StandardMorphism {
    StandardMorphism {
        source_base: zm.source_base.clone(),
        target_base: zm.target_base.clone(),
        base_map: zm.base_map.clone(),
        blocks: zm.blocks.iter().map(PolyMatrix::transpose).collect(),
    }
}

/// Local graded bundle morphism between trivialized charts, with tables
/// `base ++ fiber` on both sides.
#[derive(Clone, Debug)]
pub struct BundleMorphism {
    pub source_base: Arc<VariableTable>,
    pub source_fiber: Arc<VariableTable>,
    pub target_base: Arc<VariableTable>,
    pub target_fiber: Arc<VariableTable>,
    pub map: GradedPolyMap,
}

impl BundleMorphism {
    pub fn new(
        source_base: &Arc<VariableTable>,
        source_fiber: &Arc<VariableTable>,
        target_base: &Arc<VariableTable>,
        target_fiber: &Arc<VariableTable>,
        map: GradedPolyMap,
    ) -> Result<Self> {
        if map.source().len() != source_base.len() + source_fiber.len()
            || map.target().len() != target_base.len() + target_fiber.len()
        {
            return Err(Error::Shape("map tables must be base ++ fiber".into()));
        }
        if let Some(v) = map.check_graded().first() {
            return Err(Error::NotGraded(v.to_string()));
        }
        let nb = source_base.len();
        for j in 0..target_base.len() {
            if map.component(j).terms().any(|(m, _)| m.pairs().iter().any(|&(i, _)| i >= nb)) {
                return Err(Error::Precondition("base map depends on fiber coordinates".into()));
            }
        }
        Ok(BundleMorphism {
            source_base: source_base.clone(),
            source_fiber: source_fiber.clone(),
            target_base: target_base.clone(),
            target_fiber: target_fiber.clone(),
            map,
        })
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &BundleMorphism) -> Result<BundleMorphism> {
        Ok(BundleMorphism {
            source_base: first.source_base.clone(),
            source_fiber: first.source_fiber.clone(),
            target_base: self.target_base.clone(),
            target_fiber: self.target_fiber.clone(),
            map: self.map.compose(&first.map)?,
        })
    }

    /// Zakrzewski morphism of algebra bundles: per weight ≤ W, the pullback
    /// on fiber monomials with base-dependent coefficients.
    pub fn g_dual(&self, max_weight: u32) -> Result<ZakrzewskiMorphism> {
        let bases: Vec<Vec<Multidegree>> = vec![Vec::new(); max_weight as usize + 1];
        let blocks = pullback_blocks(
            &self.map,
            &self.source_base,
            &self.source_fiber,
            &self.target_base,
            &self.target_fiber,
            &bases,
        )?;
        let base_map = (0..self.target_base.len())
            .map(|j| restrict_to_base(self.map.component(j), &self.source_base))
            .collect();
        ZakrzewskiMorphism::new(&self.source_base, &self.target_base, base_map, blocks)
    }
}

/// (g∘f)* = f* after g* for bundle morphisms, compared blockwise.
pub fn check_bundle_functoriality(f: &BundleMorphism, g: &BundleMorphism, max_weight: u32) -> Result<bool> {
    let lhs = g.after(f)?.g_dual(max_weight)?;
    let rhs = f.g_dual(max_weight)?.after(&g.g_dual(max_weight)?)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn fiber_yz() -> Arc<VariableTable> {
        Arc::new(VariableTable::from_weights(&[("y", 1), ("z", 2)]).unwrap())
    }

    fn two_chart(fiber_to: &[&str], fiber_back: &[&str]) -> GradedBundleAtlas {
        let base = GradedBundleAtlas::base_table(&["x"]).unwrap();
        let mut at = GradedBundleAtlas::new(vec!["U".into(), "V".into()], base, fiber_yz()).unwrap();
        let g = at.parse_map(&["x + 1"], fiber_to).unwrap();
        let h = at.parse_map(&["x - 1"], fiber_back).unwrap();
        at.set_transition_with_inverse("U", "V", g, h).unwrap();
        at
    }

    #[test]
    fn weight_checks() {
        let base = GradedBundleAtlas::base_table(&["x"]).unwrap();
        let at = GradedBundleAtlas::new(vec!["U".into()], base.clone(), fiber_yz()).unwrap();
        assert!(at.check_transition_weights().is_empty());
        let good = two_chart(&["2*y", "z + x*y^2"], &["1/2*y", "z - 1/4*x*y^2 + 1/4*y^2"]);
        assert!(good.check_transition_weights().is_empty());
        let mut bad = GradedBundleAtlas::new(vec!["U".into(), "V".into()], base, fiber_yz()).unwrap();
        let m = bad.parse_map(&["x"], &["y", "z + x*y"]).unwrap();
        bad.set_transition("U", "V", m).unwrap();
        assert_eq!(bad.check_transition_weights().len(), 1);
    }

    #[test]
    fn declared_inverse_is_verified() {
        let base = GradedBundleAtlas::base_table(&["x"]).unwrap();
        let mut at = GradedBundleAtlas::new(vec!["U".into(), "V".into()], base, fiber_yz()).unwrap();
        let g = at.parse_map(&["x + 1"], &["y", "z + y^2"]).unwrap();
        let wrong = at.parse_map(&["x - 1"], &["y", "z + y^2"]).unwrap();
        assert!(at.set_transition_with_inverse("U", "V", g, wrong).is_err());
    }

    fn three_chart() -> GradedBundleAtlas {
        let base = GradedBundleAtlas::base_table(&["x"]).unwrap();
        let mut at = GradedBundleAtlas::new(vec!["1".into(), "2".into(), "3".into()], base, fiber_yz()).unwrap();
        let g21 = at.parse_map(&["x + 1"], &["y", "z + x*y^2"]).unwrap();
        let g12 = at.parse_map(&["x - 1"], &["y", "z - x*y^2 + y^2"]).unwrap();
        let g32 = at.parse_map(&["2*x"], &["3*y", "z"]).unwrap();
        let g23 = at.parse_map(&["1/2*x"], &["1/3*y", "z"]).unwrap();
        at.set_transition_with_inverse("1", "2", g21.clone(), g12.clone()).unwrap();
        at.set_transition_with_inverse("2", "3", g32.clone(), g23.clone()).unwrap();
        at.set_transition_with_inverse("1", "3", g32.compose(&g21).unwrap(), g12.compose(&g23).unwrap())
            .unwrap();
        at
    }

    #[test]
    fn cocycles() {
        let two = two_chart(&["y", "z + y^2"], &["y", "z - y^2"]);
        assert!(two.check_cocycle().unwrap().pass());
        let at = three_chart();
        let rep = at.check_cocycle().unwrap();
        assert!(rep.pass());
        assert!(rep.triples_checked > 0);
        let z = at.table().index_of("z").unwrap();
        let bad = at
            .perturbed(2, 0, z, &Multidegree::power(at.table().index_of("y").unwrap(), 2), &int(1))
            .unwrap();
        let f = bad.check_cocycle().unwrap().failure.unwrap();
        assert!(f.triple.0 == "1" || f.triple.2 == "1");
        assert_eq!(f.component, "z");
    }

    #[test]
    fn missing_composite_is_reported() {
        let base = GradedBundleAtlas::base_table(&["x"]).unwrap();
        let mut at = GradedBundleAtlas::new(vec!["1".into(), "2".into(), "3".into()], base, fiber_yz()).unwrap();
        let id = at.parse_map(&["x"], &["y", "z"]).unwrap();
        at.set_transition("1", "2", id.clone()).unwrap();
        at.set_transition("2", "3", id).unwrap();
        assert!(matches!(at.check_cocycle(), Err(Error::MissingTransition { .. })));
    }

    #[test]
    fn split_forms() {
        let two = two_chart(&["y", "z + y^2"], &["y", "z - y^2"]);
        let s = two.split_form().unwrap();
        assert_eq!(s.rank, RankVector::new(vec![1, 1]));
        assert!(s.cocycle.pass());
        for blocks in s.blocks.values() {
            assert!(blocks.iter().all(PolyMatrix::is_identity));
        }
        let s3 = three_chart().split_form().unwrap();
        assert!(s3.cocycle.pass());
        assert!(s3.atlas.is_linear());
    }

    #[test]
    fn algebra_bundle() {
        let two = two_chart(&["y", "z + y^2"], &["y", "z - y^2"]);
        let a = two.associated_algebra_bundle(2).unwrap();
        let p = &a.blocks[&(1, 0)][2];
        // basis of weight 2 is [y^2, z]: z ↦ z + y^2, y^2 fixed
        assert_eq!(p.constant().unwrap(), Matrix::from_rows(vec![vec![int(1), int(1)], vec![int(0), int(1)]], 2));
        assert!(a.check_cocycle().unwrap().pass());
        let d = g_dual_bundle(&three_chart(), 4).unwrap();
        assert!(d.cocycle.pass());
        assert_eq!(d.dims(), vec![1, 1, 2, 2, 3]);
        assert!(d.algebra.blocks_invertible_at(&[vec![int(0)], vec![int(3)]]).unwrap());
    }

    #[test]
    fn vector_bundle_dual_is_transpose() {
        let base = GradedBundleAtlas::base_table(&[]).unwrap();
        let fiber = Arc::new(VariableTable::from_weights(&[("u", 1), ("v", 1)]).unwrap());
        let mut at = GradedBundleAtlas::new(vec!["A".into(), "B".into()], base, fiber).unwrap();
        let g = at.parse_map(&[], &["2*u + v", "u + v"]).unwrap();
        let h = at.parse_map(&[], &["u - v", "-u + 2*v"]).unwrap();
        at.set_transition_with_inverse("A", "B", g, h).unwrap();
        assert!(at.is_linear());
        let d = g_dual_bundle(&at, 1).unwrap();
        let m = Matrix::from_rows(vec![vec![int(2), int(1)], vec![int(1), int(1)]], 2);
        assert_eq!(d.algebra.blocks[&(1, 0)][1].constant().unwrap(), m.transpose());
    }

    #[test]
    fn sections_are_functions() {
        let two = two_chart(&["y", "z + y^2"], &["y", "z - y^2"]);
        let a = two.associated_algebra_bundle(4).unwrap();
        let f = Polynomial::parse("x^2*y*z + 3*x + y^4 - x*z", two.table()).unwrap();
        let s = a.section_of(&f).unwrap();
        assert_eq!(a.function_of(&s, two.table()).unwrap(), f);
        assert!(s[1].iter().all(Polynomial::is_zero));
    }

    #[test]
    fn zakrzewski_duality() {
        let base = GradedBundleAtlas::base_table(&["x"]).unwrap();
        let x = Polynomial::var(&base, 0);
        let c = &x + &Polynomial::one(&base);
        let sm = StandardMorphism::new(&base, &base, vec![x.clone()], vec![PolyMatrix::from_rows(&base, vec![vec![c.clone()]], 1).unwrap()])
            .unwrap();
        let zm = dualize_std(&sm);
        assert_eq!(zm.blocks[0].get(0, 0), &c);
        assert_eq!(dualize_zm(&zm), sm);
        let id = StandardMorphism::identity(&base, &[2, 1]);
        assert_eq!(dualize_zm(&dualize_std(&id)), id);
    }

    #[test]
    fn zakrzewski_contravariance() {
        let base = GradedBundleAtlas::base_table(&["x"]).unwrap();
        let x = Polynomial::var(&base, 0);
        let one = Polynomial::one(&base);
        let f = StandardMorphism::new(
            &base,
            &base,
            vec![x.pow(2)],
            vec![PolyMatrix::from_rows(&base, vec![vec![x.clone(), one.clone()], vec![one.clone(), x.clone()], vec![x.clone(), x.clone()]], 2).unwrap()],
        )
        .unwrap();
        let g = StandardMorphism::new(
            &base,
            &base,
            vec![&x + &one],
            vec![PolyMatrix::from_rows(&base, vec![vec![x.clone(), one.clone(), x.pow(3)]], 3).unwrap()],
        )
        .unwrap();
        let lhs = dualize_std(&g.after(&f).unwrap());
        let rhs = dualize_std(&f).after(&dualize_std(&g)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bundle_morphism_functoriality() {
        let base = GradedBundleAtlas::base_table(&["x"]).unwrap();
        let fiber = fiber_yz();
        let at = GradedBundleAtlas::new(vec!["U".into()], base.clone(), fiber.clone()).unwrap();
        let f = at.parse_map(&["x^2"], &["x*y", "z + y^2"]).unwrap();
        let g = at.parse_map(&["x + 1"], &["2*y", "x*z - y^2"]).unwrap();
        let bf = BundleMorphism::new(&base, &fiber, &base, &fiber, f).unwrap();
        let bg = BundleMorphism::new(&base, &fiber, &base, &fiber, g).unwrap();
        assert!(check_bundle_functoriality(&bf, &bg, 4).unwrap());
    }
}
