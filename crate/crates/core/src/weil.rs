//! Truncated model algebras 𝒜^[k](ℝ^𝐝), finite-dimensional presented graded
//! algebras, generator extraction and the freeness test.
//!
//! A [`PresentedGradedAlgebra`] is given by the dimensions of its graded
//! components and rational structure constants. Components are indexed by
//! grade vectors inside a box `g ≤ bound` (one entry for ℕ-gradings, two
//! for bi-gradings); the weight-0 component is the field itself. Basis
//! vectors may carry a parity, in which case commutativity is checked with
//! Koszul signs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grading::{
    enumerate_monomials, grades_in_box, weight_of, Multidegree, Parity, RankVector, Variable,
    VariableTable, Weight,
};
use crate::linalg::{complement_columns, span_dim, Matrix};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::superalg::koszul_product_sign;

/// Dense `n_a × n_b × n_c` array of structure constants: entry `[a][b][c]`
/// is the coefficient of basis vector `c` in the product `e_a · e_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor3 {
    shape: [usize; 3],
    data: Vec<Rational>,
}

impl Tensor3 {
    pub fn zeros(a: usize, b: usize, c: usize) -> Self {
        Tensor3 {
            shape: [a, b, c],
            data: vec![Rational::zero(); a * b * c],
        }
    }

    pub fn shape(&self) -> [usize; 3] {
        self.shape
    }

    fn offset(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.shape[1] + b) * self.shape[2] + c
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &Rational {
        &self.data[self.offset(a, b, c)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, v: Rational) {
        let o = self.offset(a, b, c);
        self.data[o] = v;
    }

    pub fn add_to(&mut self, a: usize, b: usize, c: usize, v: &Rational) {
        let o = self.offset(a, b, c);
        self.data[o] += v;
    }

    /// Output vector of `e_a · e_b`.
    pub fn fiber(&self, a: usize, b: usize) -> &[Rational] {
        let o = self.offset(a, b, 0);
        &self.data[o..o + self.shape[2]]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn from_nested(nested: &[Vec<Vec<Rational>>], shape: [usize; 3]) -> Result<Self> {
        let bad = || Error::Shape(format!("tensor must have shape {shape:?}"));
        if nested.len() != shape[0] {
            return Err(bad());
        }
        let mut t = Tensor3::zeros(shape[0], shape[1], shape[2]);
        for (a, plane) in nested.iter().enumerate() {
            if plane.len() != shape[1] {
                return Err(bad());
            }
            for (b, row) in plane.iter().enumerate() {
                if row.len() != shape[2] {
                    return Err(bad());
                }
                for (c, v) in row.iter().enumerate() {
                    t.set(a, b, c, v.clone());
                }
            }
        }
        Ok(t)
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<Rational>>> {
        (0..self.shape[0])
            .map(|a| {
                (0..self.shape[1])
                    .map(|b| self.fiber(a, b).to_vec())
                    .collect()
            })
            .collect()
    }

    /// Nonzero entries `(a, b, c, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        let [_, nb, nc] = self.shape;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(o, v)| (o / (nb * nc), (o / nc) % nb, o % nc, v))
    }
}

/// Homogeneous element of a presented algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub component: usize,
    pub coords: Vec<Rational>,
}

impl Element {
    pub fn basis(component: usize, dim: usize, i: usize) -> Self {
        let mut coords = vec![Rational::zero(); dim];
        coords[i] = Rational::one();
        Element { component, coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Failed algebra axiom, located on basis vectors `(component, index)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    Parity {
        left: (usize, usize),
        right: (usize, usize),
        output: (usize, usize),
    },
    Commutativity {
        left: (usize, usize),
        right: (usize, usize),
    },
    Associativity {
        a: (usize, usize),
        b: (usize, usize),
        c: (usize, usize),
    },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Parity { left, right, output } => write!(
                f,
                "product of {left:?} and {right:?} has a component {output:?} of the wrong parity"
            ),
            AxiomViolation::Commutativity { left, right } => {
                write!(f, "{left:?} and {right:?} do not (super)commute")
            }
            AxiomViolation::Associativity { a, b, c } => {
                write!(f, "({a:?}·{b:?})·{c:?} differs from {a:?}·({b:?}·{c:?})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedGradedAlgebra {
    bound: Vec<u32>,
    grades: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
    dims: Vec<usize>,
    parities: Option<Vec<Vec<Parity>>>,
    mu: BTreeMap<(usize, usize), Tensor3>,
}

impl PresentedGradedAlgebra {
    /// General constructor. `dims` lists component dimensions by grade;
    /// grades inside the box that are absent have dimension 0. Products
    /// given only as `(g, h)` are completed to `(h, g)` by (super)commutativity.
    pub fn from_grades(
        bound: Vec<u32>,
        dims: &BTreeMap<Vec<u32>, usize>,
        parities: Option<&BTreeMap<Vec<u32>, Vec<Parity>>>,
        products: Vec<(Vec<u32>, Vec<u32>, Tensor3)>,
    ) -> Result<Self> {
        let grades = grades_in_box(&bound);
        let index: BTreeMap<Vec<u32>, usize> =
            grades.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        for g in dims.keys() {
            if !index.contains_key(g) {
                return Err(Error::Shape(format!("component {g:?} lies outside the bound {bound:?}")));
            }
        }
        let zero = vec![0u32; bound.len()];
        let dim_vec: Vec<usize> = grades
            .iter()
            .map(|g| dims.get(g).copied().unwrap_or(if *g == zero { 1 } else { 0 }))
            .collect();
        if dim_vec[0] != 1 {
            return Err(Error::NotConnected(dim_vec[0]));
        }
        let parity_vec = match parities {
            None => None,
            Some(p) => {
                let mut out = Vec::with_capacity(grades.len());
                for (i, g) in grades.iter().enumerate() {
                    let default = if i == 0 { vec![Parity::Even] } else { Vec::new() };
                    let ps = p.get(g).cloned().unwrap_or(default);
                    if ps.len() != dim_vec[i] {
                        return Err(Error::Shape(format!(
                            "component {g:?} has {} parities for dimension {}",
                            ps.len(),
                            dim_vec[i]
                        )));
                    }
                    out.push(ps);
                }
                if out[0] != [Parity::Even] {
                    return Err(Error::InvalidAlgebra("the unit must be even".into()));
                }
                Some(out)
            }
        };
        let mut alg = PresentedGradedAlgebra {
            bound,
            grades,
            index,
            dims: dim_vec,
            parities: parity_vec,
            mu: BTreeMap::new(),
        };
        for (g, h, t) in products {
            let (i, j) = match (alg.index.get(&g), alg.index.get(&h)) {
                (Some(&i), Some(&j)) => (i, j),
                _ => {
                    return Err(Error::Shape(format!(
                        "product ({g:?}, {h:?}) refers to a component outside the bound"
                    )))
                }
            };
            if i == 0 || j == 0 {
                return Err(Error::InvalidAlgebra(
                    "products with the weight-0 component are fixed by the unit law".into(),
                ));
            }
            let Some(k) = alg.sum_component(i, j) else {
                if t.is_zero() {
                    continue;
                }
                return Err(Error::Shape(format!(
                    "product ({g:?}, {h:?}) lands outside the bound"
                )));
            };
            let shape = [alg.dims[i], alg.dims[j], alg.dims[k]];
            if t.shape() != shape {
                return Err(Error::Shape(format!(
                    "product ({g:?}, {h:?}) needs a tensor of shape {shape:?}, got {:?}",
                    t.shape()
                )));
            }
            if t.is_zero() {
                continue;
            }
            if alg.mu.insert((i, j), t).is_some() {
                return Err(Error::Shape(format!("product ({g:?}, {h:?}) given twice")));
            }
        }
        let given: Vec<(usize, usize)> = alg.mu.keys().copied().collect();
        for (i, j) in given {
            if alg.mu.contains_key(&(j, i)) {
                continue;
            }
            let t = &alg.mu[&(i, j)];
            let mut swapped = Tensor3::zeros(alg.dims[j], alg.dims[i], t.shape()[2]);
            for (a, b, c, v) in t.entries() {
                let s = alg.swap_sign(i, a, j, b);
                swapped.set(b, a, c, if s < 0 { -v.clone() } else { v.clone() });
            }
            alg.mu.insert((j, i), swapped);
        }
        Ok(alg)
    }

    /// ℕ-graded constructor: `dims = [n_0, …, n_k]`, products `(i, j, tensor)`.
    pub fn from_single(
        order: u32,
        dims: &[usize],
        parities: Option<&[Vec<Parity>]>,
        products: Vec<(u32, u32, Tensor3)>,
    ) -> Result<Self> {
        if dims.len() != order as usize + 1 {
            return Err(Error::Shape(format!(
                "expected {} dimensions for order {order}, got {}",
                order + 1,
                dims.len()
            )));
        }
        let dim_map = dims
            .iter()
            .enumerate()
            .map(|(w, &d)| (vec![w as u32], d))
            .collect();
        let par_map: Option<BTreeMap<Vec<u32>, Vec<Parity>>> = parities.map(|ps| {
            ps.iter()
                .enumerate()
                .map(|(w, p)| (vec![w as u32], p.clone()))
                .collect()
        });
        let prods = products
            .into_iter()
            .map(|(i, j, t)| (vec![i], vec![j], t))
            .collect();
        Self::from_grades(vec![order], &dim_map, par_map.as_ref(), prods)
    }

    pub fn bound(&self) -> &[u32] {
        &self.bound
    }

    /// Truncation order of an ℕ-graded algebra.
    pub fn top_weight(&self) -> u32 {
        self.bound[0]
    }

    pub fn grades(&self) -> &[Vec<u32>] {
        &self.grades
    }

    pub fn grade(&self, comp: usize) -> &[u32] {
        &self.grades[comp]
    }

    pub fn component_weight(&self, comp: usize) -> Weight {
        Weight::new(self.grades[comp].clone())
    }

    pub fn component_index(&self, grade: &[u32]) -> Option<usize> {
        self.index.get(grade).copied()
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

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_super(&self) -> bool {
        self.parities.is_some()
    }

    pub fn parity(&self, comp: usize, i: usize) -> Parity {
        self.parities
            .as_ref()
            .map_or(Parity::Even, |p| p[comp][i])
    }

    pub fn parities(&self) -> Option<&[Vec<Parity>]> {
        self.parities.as_deref()
    }

    pub fn product_tensor(&self, i: usize, j: usize) -> Option<&Tensor3> {
        self.mu.get(&(i, j))
    }

    /// All stored product tensors keyed by component pair.
    pub fn products(&self) -> &BTreeMap<(usize, usize), Tensor3> {
        &self.mu
    }

    fn swap_sign(&self, i: usize, a: usize, j: usize, b: usize) -> i32 {
        if self.parity(i, a).is_odd() && self.parity(j, b).is_odd() {
            -1
        } else {
            1
        }
    }

    /// Component of grade `g_i + g_j`, if it lies in the box.
    pub fn sum_component(&self, i: usize, j: usize) -> Option<usize> {
        let g: Vec<u32> = self.grades[i]
            .iter()
            .zip(&self.grades[j])
            .map(|(a, b)| a + b)
            .collect();
        self.index.get(&g).copied()
    }

    pub fn unit(&self) -> Element {
        Element::basis(0, 1, 0)
    }

    /// Product of homogeneous elements; `None` when the grade leaves the box.
    pub fn mul(&self, x: &Element, y: &Element) -> Option<Element> {
        if x.component == 0 {
            let s = &x.coords[0];
            return Some(Element {
                component: y.component,
                coords: y.coords.iter().map(|v| v * s).collect(),
            });
        }
        if y.component == 0 {
            let s = &y.coords[0];
            return Some(Element {
                component: x.component,
                coords: x.coords.iter().map(|v| v * s).collect(),
            });
        }
        let k = self.sum_component(x.component, y.component)?;
        let mut out = vec![Rational::zero(); self.dims[k]];
        if let Some(t) = self.mu.get(&(x.component, y.component)) {
            for (a, xa) in x.coords.iter().enumerate() {
                if xa.is_zero() {
                    continue;
                }
                for (b, yb) in y.coords.iter().enumerate() {
                    if yb.is_zero() {
                        continue;
                    }
                    let f = xa * yb;
                    for (c, v) in t.fiber(a, b).iter().enumerate() {
                        if !v.is_zero() {
                            out[c] += &f * v;
                        }
                    }
                }
            }
        }
        Some(Element {
            component: k,
            coords: out,
        })
    }

    fn basis_product(&self, i: usize, a: usize, j: usize, b: usize) -> Option<Element> {
        self.mul(
            &Element::basis(i, self.dims[i], a),
            &Element::basis(j, self.dims[j], b),
        )
    }

    /// Parity compatibility, (super)commutativity and associativity on all
    /// basis vectors. The unit law holds by construction.
    pub fn check_axioms(&self) -> std::result::Result<(), AxiomViolation> {
        if self.parities.is_some() {
            for (&(i, j), t) in &self.mu {
                let k = self.sum_component(i, j).expect("stored products stay in the box");
                for (a, b, c, _) in t.entries() {
                    if self.parity(i, a).add(self.parity(j, b)) != self.parity(k, c) {
                        return Err(AxiomViolation::Parity {
                            left: (i, a),
                            right: (j, b),
                            output: (k, c),
                        });
                    }
                }
            }
        }
        let n = self.num_components();
        for i in 1..n {
            for j in 1..n {
                if self.sum_component(i, j).is_none() {
                    continue;
                }
                for a in 0..self.dims[i] {
                    for b in 0..self.dims[j] {
                        let ab = self.basis_product(i, a, j, b).expect("in box");
                        let ba = self.basis_product(j, b, i, a).expect("in box");
                        let s = self.swap_sign(i, a, j, b);
                        let ok = ab
                            .coords
                            .iter()
                            .zip(&ba.coords)
                            .all(|(x, y)| if s < 0 { *x == -y.clone() } else { x == y });
                        if !ok {
                            return Err(AxiomViolation::Commutativity {
                                left: (i, a),
                                right: (j, b),
                            });
                        }
                    }
                }
            }
        }
        for i in 1..n {
            for j in 1..n {
                let Some(ij) = self.sum_component(i, j) else { continue };
                for l in 1..n {
                    if self.sum_component(j, l).is_none() {
                        continue;
                    }
                    if self.sum_component(ij, l).is_none() {
                        continue;
                    }
                    for a in 0..self.dims[i] {
                        for b in 0..self.dims[j] {
                            let ab = self.basis_product(i, a, j, b).expect("in box");
                            for c in 0..self.dims[l] {
                                let left = self
                                    .mul(&ab, &Element::basis(l, self.dims[l], c))
                                    .expect("in box");
                                let bc = self.basis_product(j, b, l, c).expect("in box");
                                let right = self
                                    .mul(&Element::basis(i, self.dims[i], a), &bc)
                                    .expect("in box");
                                if left.coords != right.coords {
                                    return Err(AxiomViolation::Associativity {
                                        a: (i, a),
                                        b: (j, b),
                                        c: (l, c),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// N_A = ⊕_{w≠0} A_w, verified to be an ideal.
    pub fn nilradical(&self) -> Nilradical {
        let components: Vec<(Weight, usize)> = (1..self.num_components())
            .filter(|&c| self.dims[c] > 0)
            .map(|c| (self.component_weight(c), self.dims[c]))
            .collect();
        // A·N ⊆ N: products never land in the weight-0 component.
        let is_ideal = self
            .mu
            .keys()
            .all(|&(i, j)| self.sum_component(i, j).is_some_and(|k| k != 0));
        Nilradical {
            dim: components.iter().map(|(_, d)| d).sum(),
            components,
            is_ideal,
        }
    }

    /// Minimal r with N^{r+1} = 0, from iterated products of components.
    pub fn order(&self) -> usize {
        let n = self.num_components();
        // basis of N^p per component, as coordinate rows
        let mut power: Vec<Vec<Vec<Rational>>> = (0..n)
            .map(|c| {
                if c == 0 {
                    Vec::new()
                } else {
                    (0..self.dims[c])
                        .map(|i| Element::basis(c, self.dims[c], i).coords)
                        .collect()
                }
            })
            .collect();
        let mut p = 0;
        while power.iter().any(|b| !b.is_empty()) {
            p += 1;
            let mut next: Vec<Vec<Vec<Rational>>> = vec![Vec::new(); n];
            for i in 1..n {
                for x in &power[i] {
                    let xe = Element {
                        component: i,
                        coords: x.clone(),
                    };
                    for j in 1..n {
                        for b in 0..self.dims[j] {
                            if let Some(prod) =
                                self.mul(&xe, &Element::basis(j, self.dims[j], b))
                            {
                                if !prod.is_zero() {
                                    next[prod.component].push(prod.coords);
                                }
                            }
                        }
                    }
                }
            }
            power = next
                .into_iter()
                .enumerate()
                .map(|(c, vs)| reduce_basis(vs, self.dims[c]))
                .collect();
        }
        p
    }

    /// Span of Σ μ(A_g, A_h) over g + h = grade of `comp`, both nonzero.
    pub fn decomposables(&self, comp: usize) -> Vec<Vec<Rational>> {
        let mut out = Vec::new();
        for (&(i, j), t) in &self.mu {
            if self.sum_component(i, j) != Some(comp) {
                continue;
            }
            for a in 0..self.dims[i] {
                for b in 0..self.dims[j] {
                    let v = t.fiber(a, b);
                    if v.iter().any(|x| !x.is_zero()) {
                        out.push(v.to_vec());
                    }
                }
            }
        }
        reduce_basis(out, self.dims[comp])
    }

    /// Homogeneous generators: per component, standard basis vectors at the
    /// non-pivot columns of the decomposable subspace.
    pub fn extract_generators(&self) -> Result<GeneratorSpace> {
        let mut gens: Vec<Generator> = Vec::new();
        for comp in 1..self.num_components() {
            if self.dims[comp] == 0 {
                continue;
            }
            let dec = self.decomposables(comp);
            let mut cols = complement_columns(&dec, self.dims[comp]);
            cols.sort_by_key(|&c| (self.parity(comp, c), c));
            for c in cols {
                gens.push(Generator {
                    component: comp,
                    basis_index: c,
                    parity: self.parity(comp, c),
                    name: String::new(),
                    lift: Element::basis(comp, self.dims[comp], c),
                });
            }
        }
        let mut counters: HashMap<(usize, Parity), usize> = HashMap::new();
        for g in &mut gens {
            let n = counters.entry((g.component, g.parity)).or_insert(0);
            *n += 1;
            g.name = generator_name(&self.grades[g.component], g.parity, *n);
        }
        let vars: Vec<Variable> = gens
            .iter()
            .map(|g| {
                let w = Weight::new(self.grades[g.component].clone());
                let w = if self.is_super() { w.with_parity(g.parity) } else { w };
                Variable::new(g.name.clone(), w)
            })
            .collect();
        let table = if vars.is_empty() {
            let mut t = VariableTable::empty(self.bound.len());
            if self.is_super() {
                t = VariableTable::new(Vec::new()).expect("empty table");
            }
            t
        } else {
            VariableTable::new(vars)?
        };
        let space = GeneratorSpace {
            generators: gens,
            table: Arc::new(table),
        };
        for comp in 1..self.num_components() {
            if self.dims[comp] == 0 {
                continue;
            }
            let (_, m) = self.evaluation_matrix(&space, comp);
            if m.rank() != self.dims[comp] {
                return Err(Error::InvalidAlgebra(format!(
                    "generators do not span the component of weight {}",
                    self.component_weight(comp)
                )));
            }
        }
        Ok(space)
    }

    /// Value of a monomial in the generators (ascending-order product).
    pub fn evaluate_monomial(&self, space: &GeneratorSpace, md: &Multidegree) -> Option<Element> {
        let mut memo = HashMap::new();
        self.eval_memo(space, md, &mut memo)
    }

    fn eval_memo(
        &self,
        space: &GeneratorSpace,
        md: &Multidegree,
        memo: &mut HashMap<Multidegree, Option<Element>>,
    ) -> Option<Element> {
        if md.is_one() {
            return Some(self.unit());
        }
        if let Some(v) = memo.get(md) {
            return v.clone();
        }
        let first = md.pairs()[0].0;
        let rest = md.divide(&Multidegree::var(first)).expect("divides");
        let tail = self.eval_memo(space, &rest, memo);
        let v = tail.and_then(|t| self.mul(&space.generators[first].lift, &t));
        memo.insert(md.clone(), v.clone());
        v
    }

    /// Value of a polynomial over the generator table, one element per
    /// component it touches (zero components included).
    pub fn evaluate_polynomial(&self, space: &GeneratorSpace, p: &Polynomial) -> Vec<Element> {
        let mut memo = HashMap::new();
        let mut acc: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
        for (m, c) in p.terms() {
            if let Some(e) = self.eval_memo(space, m, &mut memo) {
                let slot = acc
                    .entry(e.component)
                    .or_insert_with(|| vec![Rational::zero(); self.dims[e.component]]);
                for (s, v) in slot.iter_mut().zip(&e.coords) {
                    *s += c * v;
                }
            }
        }
        acc.into_iter()
            .map(|(component, coords)| Element { component, coords })
            .collect()
    }

    /// Columns: generator monomials of the component's grade, valued in A.
    pub fn evaluation_matrix(&self, space: &GeneratorSpace, comp: usize) -> (Vec<Multidegree>, Matrix) {
        let w = Weight::new(self.grades[comp].clone());
        let monos = enumerate_monomials(&space.table, &w, None);
        let mut memo = HashMap::new();
        let cols: Vec<Vec<Rational>> = monos
            .iter()
            .map(|m| match self.eval_memo(space, m, &mut memo) {
                Some(e) if e.component == comp => e.coords,
                _ => vec![Rational::zero(); self.dims[comp]],
            })
            .collect();
        let m = Matrix::from_columns(&cols, self.dims[comp]);
        (monos, m)
    }

    /// Restriction or zero-padding to a new bound.
    pub fn with_bound(&self, bound: &[u32]) -> Result<Self> {
        if bound.len() != self.bound.len() {
            return Err(Error::Shape("bound arity mismatch".into()));
        }
        for (c, g) in self.grades.iter().enumerate() {
            if self.dims[c] > 0 && !g.iter().zip(bound).all(|(a, b)| a <= b) {
                return Err(Error::ComponentAboveOrder {
                    weight: Weight::new(g.clone()).to_string(),
                    bound: bound[0],
                });
            }
        }
        let dims: BTreeMap<Vec<u32>, usize> = self
            .grades
            .iter()
            .cloned()
            .zip(self.dims.iter().copied())
            .filter(|(g, _)| g.iter().zip(bound).all(|(a, b)| a <= b))
            .collect();
        let parities = self.parities.as_ref().map(|ps| {
            self.grades
                .iter()
                .cloned()
                .zip(ps.iter().cloned())
                .filter(|(g, _)| g.iter().zip(bound).all(|(a, b)| a <= b))
                .collect::<BTreeMap<_, _>>()
        });
        let products = self
            .mu
            .iter()
            .filter_map(|(&(i, j), t)| {
                let k = self.sum_component(i, j)?;
                let fits = self.grades[k].iter().zip(bound).all(|(a, b)| a <= b);
                fits.then(|| (self.grades[i].clone(), self.grades[j].clone(), t.clone()))
            })
            .collect();
        Self::from_grades(bound.to_vec(), &dims, parities.as_ref(), products)
    }

    /// Freeness of order `k` for an ℕ-graded algebra.
    pub fn check_free(&self, k: u32) -> Result<FreenessVerdict> {
        if self.bound.len() != 1 {
            return Err(Error::Precondition(
                "check_free needs an N-graded algebra; use check_free_in_box".into(),
            ));
        }
        let alg = self.with_bound(&[k])?;
        let order = alg.order();
        if order > k as usize {
            return Err(Error::OrderExceeds { order, bound: k });
        }
        alg.check_free_in_box()
    }

    /// Freeness with respect to the algebra's own truncation box: every
    /// component has the dimension of the model on the extracted generators.
    pub fn check_free_in_box(&self) -> Result<FreenessVerdict> {
        self.check_axioms()
            .map_err(|v| Error::InvalidAlgebra(v.to_string()))?;
        let space = self.extract_generators()?;
        let mut dimensions = Vec::new();
        let mut witness = None;
        for comp in 0..self.num_components() {
            let (monos, m) = self.evaluation_matrix(&space, comp);
            let check = DimensionCheck {
                weight: self.component_weight(comp),
                algebra: self.dims[comp],
                model: monos.len(),
            };
            if check.algebra > check.model {
                return Err(Error::InvalidAlgebra(format!(
                    "component of weight {} is larger than the free model",
                    check.weight
                )));
            }
            if check.algebra < check.model && witness.is_none() {
                let kernel = m.kernel();
                let v = kernel.first().expect("deficient component has a kernel");
                let relation = Polynomial::from_terms(
                    &space.table,
                    monos.iter().cloned().zip(v.iter().cloned()),
                )?;
                witness = Some(Witness {
                    weight: check.weight.clone(),
                    relation,
                });
            }
            dimensions.push(check);
        }
        Ok(FreenessVerdict {
            free: witness.is_none(),
            rank_vector: space.table.rank_vector(),
            generators: space,
            dimensions,
            witness,
        })
    }

    /// Explicit isomorphism with 𝒜^[k](ℝ^𝐝) on the extracted generators.
    pub fn iso_to_model(&self) -> Result<WeilIsomorphism> {
        let verdict = self.check_free_in_box()?;
        if let Some(w) = verdict.witness {
            return Err(Error::NotFree {
                witness: w.relation.to_string(),
            });
        }
        let space = verdict.generators;
        let model = TruncatedAlgebra::with_bound(space.table.clone(), self.bound.clone());
        let mut to_algebra = Vec::with_capacity(self.num_components());
        let mut to_model = Vec::with_capacity(self.num_components());
        let mut monomials = Vec::with_capacity(self.num_components());
        for comp in 0..self.num_components() {
            let (monos, m) = self.evaluation_matrix(&space, comp);
            let inv = m.inverse().ok_or_else(|| {
                Error::InvalidAlgebra("evaluation map is not invertible".into())
            })?;
            monomials.push(monos);
            to_algebra.push(m);
            to_model.push(inv);
        }
        let iso = WeilIsomorphism {
            model,
            generators: space,
            monomials,
            to_algebra,
            to_model,
        };
        if !iso.intertwines(self) {
            return Err(Error::InvalidAlgebra(
                "evaluation map does not intertwine the products".into(),
            ));
        }
        Ok(iso)
    }

    /// The same algebra in a new basis: column `a` of `change[c]` holds the
    /// old coordinates of the new basis vector `a` of component `c`.
    pub fn change_basis(&self, change: &[Matrix]) -> Result<Self> {
        if change.len() != self.num_components() {
            return Err(Error::Shape("one matrix per component".into()));
        }
        let mut inverses = Vec::with_capacity(change.len());
        for (c, p) in change.iter().enumerate() {
            if p.rows() != self.dims[c] || p.cols() != self.dims[c] {
                return Err(Error::Shape(format!("component {c} needs a square matrix")));
            }
            let inv = p
                .inverse()
                .ok_or_else(|| Error::Precondition(format!("basis change {c} is singular")))?;
            inverses.push(inv);
        }
        if change[0] != Matrix::identity(1) {
            return Err(Error::Precondition("basis change must fix the unit".into()));
        }
        if self.is_super() {
            for (c, p) in change.iter().enumerate() {
                for r in 0..p.rows() {
                    for col in 0..p.cols() {
                        if !p.get(r, col).is_zero() && self.parity(c, r) != self.parity(c, col) {
                            return Err(Error::Precondition(
                                "basis change must preserve parity".into(),
                            ));
                        }
                    }
                }
            }
        }
        let mut products = Vec::new();
        for (&(i, j), _) in &self.mu {
            let k = self.sum_component(i, j).expect("stored in box");
            let mut t = Tensor3::zeros(self.dims[i], self.dims[j], self.dims[k]);
            for a in 0..self.dims[i] {
                let x = Element {
                    component: i,
                    coords: change[i].column(a),
                };
                for b in 0..self.dims[j] {
                    let y = Element {
                        component: j,
                        coords: change[j].column(b),
                    };
                    let prod = self.mul(&x, &y).expect("in box");
                    let new = inverses[k].mul_vec(&prod.coords);
                    for (c, v) in new.into_iter().enumerate() {
                        t.set(a, b, c, v);
                    }
                }
            }
            products.push((self.grades[i].clone(), self.grades[j].clone(), t));
        }
        let dims = self.dim_map();
        let parities = self.parity_map();
        Self::from_grades(self.bound.clone(), &dims, parities.as_ref(), products)
    }

    pub fn dim_map(&self) -> BTreeMap<Vec<u32>, usize> {
        self.grades.iter().cloned().zip(self.dims.iter().copied()).collect()
    }

    pub fn parity_map(&self) -> Option<BTreeMap<Vec<u32>, Vec<Parity>>> {
        self.parities
            .as_ref()
            .map(|ps| self.grades.iter().cloned().zip(ps.iter().cloned()).collect())
    }

    /// Product tensors keyed by grade pairs (both orders present).
    pub fn product_list(&self) -> Vec<(Vec<u32>, Vec<u32>, Tensor3)> {
        self.mu
            .iter()
            .map(|(&(i, j), t)| (self.grades[i].clone(), self.grades[j].clone(), t.clone()))
            .collect()
    }
}

fn generator_name(grade: &[u32], parity: Parity, n: usize) -> String {
    let prefix = if parity.is_odd() { "th" } else { "y" };
    let g: Vec<String> = grade.iter().map(u32::to_string).collect();
    format!("{prefix}{}_{n}", g.join("_"))
}

/// Row-reduced basis of the span of `vs`.
fn reduce_basis(vs: Vec<Vec<Rational>>, dim: usize) -> Vec<Vec<Rational>> {
    if vs.is_empty() || dim == 0 {
        return Vec::new();
    }
    let m = Matrix::from_rows(vs, dim);
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nilradical {
    pub components: Vec<(Weight, usize)>,
    pub dim: usize,
    pub is_ideal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub component: usize,
    pub basis_index: usize,
    pub parity: Parity,
    pub name: String,
    pub lift: Element,
}

/// Basis of N_A/N_A² with homogeneous lifts, and the variable table that
/// names the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpace {
    pub generators: Vec<Generator>,
    pub table: Arc<VariableTable>,
}

impl GeneratorSpace {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generator count per weight (ℕ-graded algebras).
    pub fn rank_vector(&self) -> RankVector {
        self.table.rank_vector()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionCheck {
    pub weight: Weight,
    pub algebra: usize,
    pub model: usize,
}

/// Nonzero homogeneous polynomial in the generators that vanishes in A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub weight: Weight,
    pub relation: Polynomial,
}

#[derive(Clone, Debug)]
pub struct FreenessVerdict {
    pub free: bool,
    pub rank_vector: RankVector,
    pub generators: GeneratorSpace,
    pub dimensions: Vec<DimensionCheck>,
    pub witness: Option<Witness>,
}

/// A ≅ 𝒜^[k](ℝ^𝐝): per component, the evaluation matrix from model monomials
/// to A's basis and its inverse.
#[derive(Clone, Debug)]
pub struct WeilIsomorphism {
    pub model: TruncatedAlgebra,
    pub generators: GeneratorSpace,
    pub monomials: Vec<Vec<Multidegree>>,
    pub to_algebra: Vec<Matrix>,
    pub to_model: Vec<Matrix>,
}

impl WeilIsomorphism {
    /// Image of a homogeneous element as a model polynomial.
    pub fn to_model_polynomial(&self, x: &Element) -> Polynomial {
        let coeffs = self.to_model[x.component].mul_vec(&x.coords);
        Polynomial::from_terms(
            &self.generators.table,
            self.monomials[x.component].iter().cloned().zip(coeffs),
        )
        .expect("model monomials are valid")
    }

    /// Image of a model polynomial, one element per component.
    pub fn to_algebra_elements(&self, p: &Polynomial, alg: &PresentedGradedAlgebra) -> Vec<Element> {
        (0..alg.num_components())
            .map(|comp| {
                let coeffs: Vec<Rational> =
                    self.monomials[comp].iter().map(|m| p.coeff(m)).collect();
                Element {
                    component: comp,
                    coords: self.to_algebra[comp].mul_vec(&coeffs),
                }
            })
            .collect()
    }

    /// E(m₁·m₂) = μ(E m₁, E m₂) for all model basis pairs.
    pub fn intertwines(&self, alg: &PresentedGradedAlgebra) -> bool {
        let n = alg.num_components();
        let table = &self.generators.table;
        for i in 0..n {
            for j in 0..n {
                let Some(k) = alg.sum_component(i, j) else { continue };
                for (a, ma) in self.monomials[i].iter().enumerate() {
                    for (b, mb) in self.monomials[j].iter().enumerate() {
                        let x = Element {
                            component: i,
                            coords: self.to_algebra[i].column(a),
                        };
                        let y = Element {
                            component: j,
                            coords: self.to_algebra[j].column(b),
                        };
                        let lhs = alg.mul(&x, &y).expect("in box");
                        let mp = &Polynomial::monomial(table, ma.clone(), Rational::one())
                            .expect("valid")
                            * &Polynomial::monomial(table, mb.clone(), Rational::one()).expect("valid");
                        let coeffs: Vec<Rational> =
                            self.monomials[k].iter().map(|m| mp.coeff(m)).collect();
                        let rhs = self.to_algebra[k].mul_vec(&coeffs);
                        if lhs.coords != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// 𝒜/𝒜^{>bound}: polynomials whose monomial grades fit in the bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedAlgebra {
    table: Arc<VariableTable>,
    bound: Vec<u32>,
}

impl TruncatedAlgebra {
    pub fn new(table: Arc<VariableTable>, order: u32) -> Self {
        Self::with_bound(table, vec![order])
    }

    pub fn with_bound(table: Arc<VariableTable>, bound: Vec<u32>) -> Self {
        TruncatedAlgebra { table, bound }
    }

    /// The one-variable model 𝔸^[k] = ℝ[ε]/⟨ε^{k+1}⟩.
    pub fn model(order: u32) -> Self {
        let t = VariableTable::from_weights(&[("eps", 1)]).expect("valid");
        Self::new(Arc::new(t), order)
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn bound(&self) -> &[u32] {
        &self.bound
    }

    pub fn order(&self) -> u32 {
        self.bound[0]
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        p.terms().all(|(m, _)| self.fits(m))
    }

    fn fits(&self, m: &Multidegree) -> bool {
        weight_of(m, &self.table)
            .map(|w| w.fits_in(&self.bound))
            .unwrap_or(false)
    }

    pub fn truncate(&self, p: &Polynomial) -> Polynomial {
        Polynomial::from_terms(
            &self.table,
            p.terms()
                .filter(|(m, _)| self.fits(m))
                .map(|(m, c)| (m.clone(), c.clone())),
        )
        .expect("terms of a valid polynomial")
    }

    pub fn mul(&self, p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
        Ok(self.truncate(&p.checked_mul(q)?))
    }

    /// Monomial basis of every component, in the canonical grade order.
    pub fn basis(&self) -> Vec<(Vec<u32>, Vec<Multidegree>)> {
        grades_in_box(&self.bound)
            .into_iter()
            .map(|g| {
                let monos = enumerate_monomials(&self.table, &Weight::new(g.clone()), None);
                (g, monos)
            })
            .collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis().iter().map(|(_, b)| b.len()).collect()
    }

    /// Structure constants on the monomial basis.
    pub fn to_presented(&self) -> PresentedGradedAlgebra {
        let basis = self.basis();
        let lookup: Vec<HashMap<&Multidegree, usize>> = basis
            .iter()
            .map(|(_, b)| b.iter().enumerate().map(|(i, m)| (m, i)).collect())
            .collect();
        let index: HashMap<&[u32], usize> = basis
            .iter()
            .enumerate()
            .map(|(i, (g, _))| (g.as_slice(), i))
            .collect();
        let mut products = Vec::new();
        for (gi, bi) in basis.iter().skip(1) {
            for (gj, bj) in basis.iter().skip(1) {
                let g: Vec<u32> = gi.iter().zip(gj).map(|(a, b)| a + b).collect();
                let Some(&k) = index.get(g.as_slice()) else { continue };
                let mut t = Tensor3::zeros(bi.len(), bj.len(), basis[k].1.len());
                for (a, ma) in bi.iter().enumerate() {
                    for (b, mb) in bj.iter().enumerate() {
                        let sign = if self.table.has_odd() {
                            koszul_product_sign(ma, mb, &self.table)
                        } else {
                            Some(1)
                        };
                        if let Some(s) = sign {
                            let c = lookup[k][&ma.times(mb)];
                            t.set(a, b, c, Rational::from_integer(s.into()));
                        }
                    }
                }
                products.push((gi.clone(), gj.clone(), t));
            }
        }
        let dims: BTreeMap<Vec<u32>, usize> =
            basis.iter().map(|(g, b)| (g.clone(), b.len())).collect();
        let parities: Option<BTreeMap<Vec<u32>, Vec<Parity>>> = self.table.is_super().then(|| {
            basis
                .iter()
                .map(|(g, b)| {
                    let ps = b
                        .iter()
                        .map(|m| {
                            weight_of(m, &self.table)
                                .expect("valid")
                                .parity()
                                .unwrap_or(Parity::Even)
                        })
                        .collect();
                    (g.clone(), ps)
                })
                .collect()
        });
        PresentedGradedAlgebra::from_grades(self.bound.clone(), &dims, parities.as_ref(), products)
            .expect("model algebra is well formed")
    }

    /// Homogeneous element ↦ polynomial on the monomial basis.
    pub fn element_polynomial(&self, x: &Element) -> Polynomial {
        let basis = self.basis();
        Polynomial::from_terms(
            &self.table,
            basis[x.component].1.iter().cloned().zip(x.coords.iter().cloned()),
        )
        .expect("valid")
    }
}

/// mul(p, q) with every monomial of weight above `k` removed.
pub fn truncate_mul(p: &Polynomial, q: &Polynomial, k: u32) -> Result<Polynomial> {
    TruncatedAlgebra::new(p.table().clone(), k).mul(p, q)
}

/// Model algebra 𝒜^[k](ℝ^𝐝) on the canonical table, presented.
pub fn model_algebra(rank: &RankVector, k: u32) -> PresentedGradedAlgebra {
    TruncatedAlgebra::new(Arc::new(VariableTable::from_rank(rank)), k).to_presented()
}

/// Dimension of the span of products landing in `comp`; used by callers that
/// need only sizes.
pub fn decomposable_dim(alg: &PresentedGradedAlgebra, comp: usize) -> usize {
    span_dim(&alg.decomposables(comp), alg.dim(comp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn rv(v: &[usize]) -> RankVector {
        RankVector::new(v.to_vec())
    }

    fn yz() -> Arc<VariableTable> {
        Arc::new(VariableTable::from_weights(&[("y", 1), ("z", 2)]).unwrap())
    }

    #[test]
    fn truncated_products() {
        let eps = TruncatedAlgebra::model(3);
        let t = eps.table().clone();
        let e = Polynomial::var(&t, 0);
        assert!(eps.mul(&e, &e.pow(3)).unwrap().is_zero());
        let tb = yz();
        let y = Polynomial::parse("y", &tb).unwrap();
        assert_eq!(truncate_mul(&y, &y, 2).unwrap(), Polynomial::parse("y^2", &tb).unwrap());
        let s = Polynomial::parse("y + z", &tb).unwrap();
        assert_eq!(truncate_mul(&s, &s, 2).unwrap(), Polynomial::parse("y^2", &tb).unwrap());
    }

    #[test]
    fn nilradical_examples() {
        let a = model_algebra(&rv(&[1, 1]), 2);
        let n = a.nilradical();
        assert_eq!(n.dim, 3);
        assert!(n.is_ideal);
        let r = model_algebra(&rv(&[]), 0);
        assert_eq!(r.nilradical().dim, 0);
        assert_eq!(model_algebra(&rv(&[1]), 3).nilradical().dim, 3);
    }

    #[test]
    fn non_connected_is_rejected() {
        let err = PresentedGradedAlgebra::from_single(1, &[2, 1], None, vec![]).unwrap_err();
        assert_eq!(err, Error::NotConnected(2));
    }

    #[test]
    fn order_examples() {
        assert_eq!(model_algebra(&rv(&[1]), 3).order(), 3);
        assert_eq!(model_algebra(&rv(&[]), 0).order(), 0);
        assert_eq!(model_algebra(&rv(&[0, 1]), 2).order(), 1);
    }

    #[test]
    fn generator_examples() {
        let a = model_algebra(&rv(&[1, 1]), 2);
        let g = a.extract_generators().unwrap();
        assert_eq!(g.rank_vector(), rv(&[1, 1]));
        // weight-2 basis is [y^2, z]; the lift is z
        assert_eq!(g.generators[1].basis_index, 1);
        let b = model_algebra(&rv(&[2]), 2);
        assert_eq!(b.extract_generators().unwrap().rank_vector(), rv(&[2]));
        let r = model_algebra(&rv(&[]), 0);
        assert!(r.extract_generators().unwrap().is_empty());
    }

    #[test]
    fn free_model_is_free() {
        let a = model_algebra(&rv(&[1, 1]), 2);
        let v = a.check_free(2).unwrap();
        assert!(v.free);
        assert_eq!(v.rank_vector, rv(&[1, 1]));
        assert_eq!(
            v.dimensions.iter().map(|d| d.algebra).collect::<Vec<_>>(),
            vec![1, 1, 2]
        );
    }

    #[test]
    fn dual_numbers_are_not_free_at_order_two() {
        // ℝ[y]/⟨y²⟩ with w(y) = 1
        let a = PresentedGradedAlgebra::from_single(1, &[1, 1], None, vec![]).unwrap();
        let v = a.check_free(2).unwrap();
        assert!(!v.free);
        let w = v.witness.unwrap();
        assert_eq!(w.weight, Weight::scalar(2));
        assert_eq!(w.relation.to_string(), "y1_1^2");
        assert!(a.check_free(1).unwrap().free);
    }

    #[test]
    fn conjugated_model_is_free() {
        let a = model_algebra(&rv(&[1, 1]), 2);
        // new weight-2 basis [y² + z, z]
        let mut p2 = Matrix::identity(2);
        p2.set(1, 0, int(1));
        let b = a
            .change_basis(&[Matrix::identity(1), Matrix::identity(1), p2])
            .unwrap();
        assert_ne!(a, b);
        let v = b.check_free(2).unwrap();
        assert!(v.free);
        assert_eq!(v.rank_vector, rv(&[1, 1]));
        let iso = b.iso_to_model().unwrap();
        assert!(iso.intertwines(&b));
    }

    #[test]
    fn iso_of_model_is_identity() {
        let a = model_algebra(&rv(&[2, 1]), 3);
        let iso = a.iso_to_model().unwrap();
        for m in &iso.to_algebra {
            assert_eq!(*m, Matrix::identity(m.rows()));
        }
    }

    #[test]
    fn iso_of_non_free_is_error() {
        let a = PresentedGradedAlgebra::from_single(2, &[1, 1, 0], None, vec![]).unwrap();
        assert!(matches!(a.iso_to_model(), Err(Error::NotFree { .. })));
    }

    #[test]
    fn order_bound_errors() {
        let a = model_algebra(&rv(&[1]), 3);
        assert!(matches!(a.check_free(2), Err(Error::ComponentAboveOrder { .. })));
    }

    #[test]
    fn axioms_detect_perturbation() {
        let a = model_algebra(&rv(&[2]), 2);
        assert!(a.check_axioms().is_ok());
        let mut prods = a.product_list();
        let (_, _, t) = &mut prods[0];
        t.add_to(0, 1, 0, &int(1));
        let bad = PresentedGradedAlgebra::from_grades(vec![2], &a.dim_map(), None, prods).unwrap();
        assert!(matches!(
            bad.check_axioms(),
            Err(AxiomViolation::Commutativity { .. })
        ));
        assert!(bad.check_free(2).is_err());
    }

    #[test]
    fn evaluate_witness_vanishes() {
        let a = PresentedGradedAlgebra::from_single(2, &[1, 1, 0], None, vec![]).unwrap();
        let v = a.check_free(2).unwrap();
        let w = v.witness.unwrap();
        let vals = a.evaluate_polynomial(&v.generators, &w.relation);
        assert!(vals.iter().all(Element::is_zero));
    }
}
