//! Sparse graded polynomials over ℚ and weight-preserving polynomial maps.
//!
//! A [`GradedPolyMap`] is stored as pullback data: one polynomial over the
//! source table for every target variable. Composition is substitution.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grading::{weight_of, Multidegree, Variable, VariableTable, Weight};
use crate::rational::{self, Rational};
use crate::superalg::koszul_product_sign;

pub(crate) fn same_table(a: &Arc<VariableTable>, b: &Arc<VariableTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    table: Arc<VariableTable>,
    terms: BTreeMap<Multidegree, Rational>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Polynomial {
    pub fn zero(table: &Arc<VariableTable>) -> Self {
        Polynomial {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: &Arc<VariableTable>) -> Self {
        Self::constant(table, Rational::one())
    }

    pub fn constant(table: &Arc<VariableTable>, c: Rational) -> Self {
        let mut p = Self::zero(table);
        if !c.is_zero() {
            p.terms.insert(Multidegree::one(), c);
        }
        p
    }

    pub fn var(table: &Arc<VariableTable>, i: usize) -> Self {
        assert!(i < table.len(), "variable index out of range");
        let mut p = Self::zero(table);
        p.terms.insert(Multidegree::var(i), Rational::one());
        p
    }

    pub fn var_named(table: &Arc<VariableTable>, name: &str) -> Result<Self> {
        let i = table
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariableName(name.into()))?;
        Ok(Self::var(table, i))
    }

    /// Single term; odd variables must be squarefree.
    pub fn monomial(table: &Arc<VariableTable>, md: Multidegree, c: Rational) -> Result<Self> {
        validate_multidegree(&md, table)?;
        let mut p = Self::zero(table);
        if !c.is_zero() {
            p.terms.insert(md, c);
        }
        Ok(p)
    }

    pub fn from_terms(
        table: &Arc<VariableTable>,
        terms: impl IntoIterator<Item = (Multidegree, Rational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(table);
        for (md, c) in terms {
            validate_multidegree(&md, table)?;
            p.add_term(md, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, md: Multidegree, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(md);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multidegree, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, md: &Multidegree) -> Rational {
        self.terms.get(md).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&Multidegree::one())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        if !same_table(&self.table, &other.table) {
            return Err(Error::TableMismatch);
        }
        let mut out = self.clone();
        for (md, c) in &other.terms {
            out.add_term(md.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.checked_add(&-other)
    }

    /// Product; with odd variables the Koszul sign of reordering is applied
    /// and odd squares vanish.
    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        if !same_table(&self.table, &other.table) {
            return Err(Error::TableMismatch);
        }
        let graded_signs = self.table.has_odd();
        let mut out = Self::zero(&self.table);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let sign = if graded_signs {
                    match koszul_product_sign(m1, m2, &self.table) {
                        Some(s) => s,
                        None => continue,
                    }
                } else {
                    1
                };
                let c = c1 * c2;
                out.add_term(m1.times(m2), if sign < 0 { -c } else { c });
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::one(&self.table);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Part of weight `w` (grades compared; parity too when `w` carries one).
    pub fn graded_component(&self, w: &Weight) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| {
                let mw = weight_of(m, &self.table).expect("validated multidegree");
                mw.same_grades(w) && (w.parity().is_none() || mw.parity() == w.parity())
            })
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Polynomial {
            table: self.table.clone(),
            terms,
        }
    }

    /// Decomposition into homogeneous pieces keyed by weight (grades only).
    pub fn components(&self) -> BTreeMap<Weight, Polynomial> {
        let mut out: BTreeMap<Weight, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let w = weight_of(m, &self.table)
                .expect("validated multidegree")
                .without_parity();
            out.entry(w)
                .or_insert_with(|| Self::zero(&self.table))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Weight shared by all stored monomials (monomial inspection); `None`
    /// for the zero polynomial and for inhomogeneous polynomials.
    pub fn homogeneous_weight(&self) -> Option<Weight> {
        let mut weights = self.terms.keys().map(|m| {
            weight_of(m, &self.table)
                .expect("validated multidegree")
                .without_parity()
        });
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }

    pub fn is_homogeneous(&self, w: &Weight) -> bool {
        self.terms.keys().all(|m| {
            weight_of(m, &self.table)
                .expect("validated multidegree")
                .same_grades(w)
        })
    }

    /// Left partial derivative ∂/∂x_i (odd variables anticommute past odd factors).
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = Self::zero(&self.table);
        let odd = self.table.is_odd(i);
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let rest = m.divide(&Multidegree::var(i)).expect("exponent checked");
            let mut coeff = c * Rational::from_integer(e.into());
            if odd {
                let preceding_odd = m
                    .pairs()
                    .iter()
                    .filter(|&&(j, _)| j < i && self.table.is_odd(j))
                    .count();
                if preceding_odd % 2 == 1 {
                    coeff = -coeff;
                }
            }
            out.add_term(rest, coeff);
        }
        out
    }

    /// ∇_c p = Σ_i w_i[c]·x_i·∂_i p for grade index `c`.
    pub fn euler_operator(&self, grade: usize) -> Polynomial {
        let mut out = Self::zero(&self.table);
        for i in 0..self.table.len() {
            let wi = self.table.weight(i).grades()[grade];
            if wi == 0 {
                continue;
            }
            let d = self.partial(i);
            if d.is_zero() {
                continue;
            }
            let term = &Polynomial::var(&self.table, i) * &d;
            out = &out + &term.scale(&Rational::from_integer(wi.into()));
        }
        out
    }

    /// `w` iff p is an eigenvector of every weight vector field with
    /// eigenvalues `w`; `None` for inhomogeneous or zero `p`.
    pub fn euler_degree(&self) -> Option<Weight> {
        let (lead_m, lead_c) = self.terms.iter().next()?;
        let mut grades = Vec::with_capacity(self.table.arity());
        for g in 0..self.table.arity() {
            let e = self.euler_operator(g);
            let ratio = e.coeff(lead_m) / lead_c;
            if !ratio.is_integer() || ratio < Rational::zero() {
                return None;
            }
            if e != self.scale(&ratio) {
                return None;
            }
            let n: u32 = ratio.to_integer().try_into().ok()?;
            grades.push(n);
        }
        Some(Weight::new(grades))
    }

    /// Weight `w` such that p(h_t x) = t^w·p(x) as a polynomial identity in
    /// fresh indeterminates t (one per grade), if it exists.
    pub fn homogeneity_via_action(&self) -> Option<Weight> {
        if self.is_zero() {
            return None;
        }
        let ext = ActionExtension::new(&self.table);
        let acted = ext.act(self);
        let (m, _) = acted.terms.iter().next()?;
        let grades: Vec<u32> = ext.t_indices.iter().map(|&t| m.exponent(t)).collect();
        let w = Weight::new(grades);
        let rhs = &ext.t_power(&w) * &ext.embed(self);
        (acted == rhs).then_some(w)
    }

    /// Substitutes `images[j]` for variable `j`; images live over a common table.
    pub fn substitute(&self, images: &[Polynomial], target: &Arc<VariableTable>) -> Result<Polynomial> {
        if images.len() != self.table.len() {
            return Err(Error::Shape(format!(
                "{} images for {} variables",
                images.len(),
                self.table.len()
            )));
        }
        if images.iter().any(|p| !same_table(&p.table, target)) {
            return Err(Error::TableMismatch);
        }
        let mut cache: BTreeMap<(usize, u32), Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for &(i, e) in m.pairs() {
                let pw = cache
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(e))
                    .clone();
                term = &term * &pw;
                if term.is_zero() {
                    break;
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over a larger table; `map[i]` is the index
    /// of variable `i` in `table`.
    pub fn embed(&self, table: &Arc<VariableTable>, map: &[usize]) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                (
                    Multidegree::from_pairs(m.pairs().iter().map(|&(i, e)| (map[i], e))),
                    c.clone(),
                )
            })
            .collect();
        Polynomial {
            table: table.clone(),
            terms,
        }
    }

    /// Exact value at a rational point (even tables only).
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if self.table.has_odd() {
            return Err(Error::Precondition(
                "numeric evaluation needs an even variable table".into(),
            ));
        }
        if point.len() != self.table.len() {
            return Err(Error::Shape(format!(
                "point has {} coordinates, table has {} variables",
                point.len(),
                self.table.len()
            )));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for &(i, e) in m.pairs() {
                v *= rational::pow(&point[i], e);
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Largest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(i)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Multidegree::total_degree).max().unwrap_or(0)
    }

    /// Largest monomial weight (first grade).
    pub fn max_weight(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| weight_of(m, &self.table).expect("validated").degree())
            .max()
            .unwrap_or(0)
    }

    /// Terms ordered by (weight, graded-lex).
    pub fn sorted_terms(&self) -> Vec<(&Multidegree, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let wa = weight_of(a, &self.table).expect("validated");
            let wb = weight_of(b, &self.table).expect("validated");
            wa.cmp(&wb).then_with(|| a.cmp(b))
        });
        v
    }

    /// Parses text like `3/2*y1^2*z - y + 1` against `table`.
    pub fn parse(text: &str, table: &Arc<VariableTable>) -> Result<Polynomial> {
        Parser::new(text, table).parse()
    }
}

fn validate_multidegree(md: &Multidegree, table: &VariableTable) -> Result<()> {
    for &(i, _) in md.pairs() {
        if i >= table.len() {
            return Err(Error::UnknownVariable(i));
        }
    }
    if md.violates_odd_rule(table) {
        return Err(Error::Precondition(format!(
            "odd variable squared in {}",
            md.format(table)
        )));
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = *c < Rational::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.format(&self.table))?;
            } else {
                write!(f, "{abs}*{}", m.format(&self.table))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomials over different tables")
    }
}

impl<'a> Sub for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomials over different tables")
    }
}

impl<'a> Mul for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomials over different tables")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

/// A table extended by fresh weight-irrelevant indeterminates t_c, one per
/// grade, used to state intertwining identities symbolically.
pub(crate) struct ActionExtension {
    pub table: Arc<VariableTable>,
    pub t_indices: Vec<usize>,
    source_len: usize,
}

impl ActionExtension {
    pub fn new(source: &Arc<VariableTable>) -> Self {
        let arity = source.arity();
        let mut vars: Vec<Variable> = source.vars().to_vec();
        let mut t_indices = Vec::new();
        for c in 0..arity {
            let mut name = format!("_t{c}");
            while source.index_of(&name).is_some() {
                name.push('_');
            }
            t_indices.push(vars.len());
            let mut w = Weight::zero(arity);
            if source.is_super() {
                w = w.with_parity(crate::grading::Parity::Even);
            }
            vars.push(Variable::new(name, w));
        }
        let table = Arc::new(VariableTable::with_base(vars).expect("fresh names are unique"));
        ActionExtension {
            table,
            t_indices,
            source_len: source.len(),
        }
    }

    pub fn embed(&self, p: &Polynomial) -> Polynomial {
        let map: Vec<usize> = (0..self.source_len).collect();
        p.embed(&self.table, &map)
    }

    /// t^w = ∏_c t_c^{w_c}.
    pub fn t_power(&self, w: &Weight) -> Polynomial {
        let md = Multidegree::from_pairs(
            self.t_indices
                .iter()
                .zip(w.grades())
                .map(|(&t, &g)| (t, g)),
        );
        Polynomial::monomial(&self.table, md, Rational::one()).expect("even indeterminates")
    }

    /// The images t^{w_i}·x_i of the source variables under h_t.
    pub fn scaled_variables(&self, source: &VariableTable) -> Vec<Polynomial> {
        (0..self.source_len)
            .map(|i| &self.t_power(source.weight(i)) * &Polynomial::var(&self.table, i))
            .collect()
    }

    /// p ∘ h_t, over the extended table.
    pub fn act(&self, p: &Polynomial) -> Polynomial {
        let images = self.scaled_variables(p.table());
        p.substitute(&images, &self.table).expect("image count matches")
    }
}

/// A component that is not homogeneous of its slot's weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingViolation {
    pub target_variable: String,
    pub expected: Weight,
    pub monomial: String,
    pub found: Weight,
}

impl fmt::Display for GradingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "component `{}` (weight {}) contains {} of weight {}",
            self.target_variable, self.expected, self.monomial, self.found
        )
    }
}

/// Polynomial map given by pullbacks of the target coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPolyMap {
    source: Arc<VariableTable>,
    target: Arc<VariableTable>,
    components: Vec<Polynomial>,
}

impl GradedPolyMap {
    /// Builds the map without checking weights; see [`GradedPolyMap::check_graded`].
    pub fn new(
        source: &Arc<VariableTable>,
        target: &Arc<VariableTable>,
        components: Vec<Polynomial>,
    ) -> Result<Self> {
        if components.len() != target.len() {
            return Err(Error::Shape(format!(
                "{} components for {} target variables",
                components.len(),
                target.len()
            )));
        }
        if components.iter().any(|p| !same_table(p.table(), source)) {
            return Err(Error::TableMismatch);
        }
        Ok(GradedPolyMap {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    /// Endomorphism from component texts, in table order.
    pub fn parse_endo(table: &Arc<VariableTable>, components: &[&str]) -> Result<Self> {
        let comps = components
            .iter()
            .map(|c| Polynomial::parse(c, table))
            .collect::<Result<Vec<_>>>()?;
        Self::new(table, table, comps)
    }

    pub fn identity(table: &Arc<VariableTable>) -> Self {
        let components = (0..table.len()).map(|i| Polynomial::var(table, i)).collect();
        GradedPolyMap {
            source: table.clone(),
            target: table.clone(),
            components,
        }
    }

    pub fn source(&self) -> &Arc<VariableTable> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VariableTable> {
        &self.target
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &Polynomial {
        &self.components[j]
    }

    /// f*(p) = p ∘ f for p over the target table.
    pub fn pullback(&self, p: &Polynomial) -> Result<Polynomial> {
        if !same_table(p.table(), &self.target) {
            return Err(Error::TableMismatch);
        }
        p.substitute(&self.components, &self.source)
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &GradedPolyMap) -> Result<GradedPolyMap> {
        if !same_table(&inner.target, &self.source) {
            return Err(Error::TableMismatch);
        }
        let components = self
            .components
            .iter()
            .map(|c| inner.pullback(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedPolyMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    /// Monomial inspection: every component homogeneous of its target weight.
    pub fn check_graded(&self) -> Vec<GradingViolation> {
        let mut out = Vec::new();
        for (j, comp) in self.components.iter().enumerate() {
            let expected = self.target.weight(j);
            for (m, _) in comp.sorted_terms() {
                let found = weight_of(m, &self.source).expect("validated");
                let parity_bad = self.target.is_super()
                    && self.source.is_super()
                    && found.parity() != expected.parity();
                if !found.same_grades(expected) || parity_bad {
                    out.push(GradingViolation {
                        target_variable: self.target.var(j).name.clone(),
                        expected: expected.clone(),
                        monomial: m.format(&self.source),
                        found,
                    });
                }
            }
        }
        out
    }

    pub fn is_graded(&self) -> bool {
        self.check_graded().is_empty()
    }

    /// Symbolic intertwining check f ∘ h_t = h_t ∘ f, with t adjoined as
    /// fresh indeterminates. Returns the names of failing target components.
    pub fn check_intertwining_symbolic(&self) -> Vec<String> {
        let ext = ActionExtension::new(&self.source);
        let mut failing = Vec::new();
        for (j, comp) in self.components.iter().enumerate() {
            let lhs = ext.act(comp);
            let rhs = &ext.t_power(self.target.weight(j)) * &ext.embed(comp);
            if lhs != rhs {
                failing.push(self.target.var(j).name.clone());
            }
        }
        failing
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        self.components.iter().map(|c| c.evaluate(point)).collect()
    }
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    table: &'a Arc<VariableTable>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, table: &'a Arc<VariableTable>) -> Self {
        Parser {
            text,
            bytes: text.as_bytes(),
            pos: 0,
            table,
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Polynomial> {
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let mut acc = Polynomial::zero(self.table);
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(_) if first => false,
                Some(_) => return Err(self.err("expected `+` or `-`")),
                None => break,
            };
            first = false;
            let term = self.term()?;
            acc = if negative { &acc - &term } else { &acc + &term };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                self.digits();
                if self.bytes.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    if !self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
                        return Err(self.err("expected denominator"));
                    }
                    self.digits();
                }
                let q = rational::parse(&self.text[start..self.pos]).map_err(|_| Error::Parse {
                    offset: start,
                    message: "invalid rational".into(),
                })?;
                Ok(Polynomial::constant(self.table, q))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                let i = self.table.index_of(name).ok_or_else(|| Error::Parse {
                    offset: start,
                    message: format!("unknown variable `{name}`"),
                })?;
                let mut e = 1u32;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.skip_ws();
                    let s = self.pos;
                    self.digits();
                    if s == self.pos {
                        return Err(self.err("expected exponent"));
                    }
                    e = self.text[s..self.pos]
                        .parse()
                        .map_err(|_| self.err("exponent too large"))?;
                }
                Ok(Polynomial::var(self.table, i).pow(e))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn digits(&mut self) {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn yz() -> Arc<VariableTable> {
        Arc::new(VariableTable::from_weights(&[("y", 1), ("z", 2)]).unwrap())
    }

    fn p(text: &str, t: &Arc<VariableTable>) -> Polynomial {
        Polynomial::parse(text, t).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let t = yz();
        assert_eq!(&p("y", &t) * &p("y", &t), p("y^2", &t));
        let prod = &p("y^2", &t) * &p("z", &t);
        assert_eq!(prod, p("y^2*z", &t));
        assert_eq!(prod.homogeneous_weight(), Some(Weight::scalar(4)));
        let q = p("3/2*y^2*z - y + 1", &t);
        assert!((&q + &-&q).is_zero());
    }

    #[test]
    fn table_mismatch_is_an_error() {
        let a = p("y", &yz());
        let other = Arc::new(VariableTable::from_weights(&[("y", 1)]).unwrap());
        let b = p("y", &other);
        assert_eq!(a.checked_mul(&b), Err(Error::TableMismatch));
        assert_eq!(a.checked_add(&b), Err(Error::TableMismatch));
    }

    #[test]
    fn graded_components() {
        let t = yz();
        let s = p("y + z", &t);
        assert_eq!(s.graded_component(&Weight::scalar(1)), p("y", &t));
        assert_eq!(s.graded_component(&Weight::scalar(2)), p("z", &t));
        let q = p("y^2 + z", &t);
        assert_eq!(q.graded_component(&Weight::scalar(2)), q);
        let c = p("3", &t);
        assert_eq!(c.graded_component(&Weight::scalar(0)), c);
        assert!(c.graded_component(&Weight::scalar(1)).is_zero());
    }

    #[test]
    fn euler_degree_examples() {
        let t = yz();
        assert_eq!(p("y*z", &t).euler_degree(), Some(Weight::scalar(3)));
        assert_eq!(p("y + z", &t).euler_degree(), None);
        assert_eq!(p("5", &t).euler_degree(), Some(Weight::scalar(0)));
        assert_eq!(p("y*z", &t).homogeneity_via_action(), Some(Weight::scalar(3)));
        assert_eq!(p("y + z", &t).homogeneity_via_action(), None);
    }

    #[test]
    fn composition_examples() {
        let t = yz();
        let phi = GradedPolyMap::parse_endo(&t, &["y", "z + y^2"]).unwrap();
        let phi2 = phi.compose(&phi).unwrap();
        assert_eq!(phi2, GradedPolyMap::parse_endo(&t, &["y", "z + 2*y^2"]).unwrap());
        let id = GradedPolyMap::identity(&t);
        assert_eq!(id.compose(&phi).unwrap(), phi);
        let psi = GradedPolyMap::parse_endo(&t, &["y", "z - y^2"]).unwrap();
        assert_eq!(phi.compose(&psi).unwrap(), id);
    }

    #[test]
    fn graded_map_checks() {
        let t = yz();
        let phi = GradedPolyMap::parse_endo(&t, &["y", "z + y^2"]).unwrap();
        assert!(phi.is_graded());
        assert!(phi.check_intertwining_symbolic().is_empty());
        for bad in ["z + y", "z + y^3"] {
            let f = GradedPolyMap::parse_endo(&t, &["y", bad]).unwrap();
            let v = f.check_graded();
            assert_eq!(v.len(), 1, "{bad}");
            assert_eq!(v[0].target_variable, "z");
            assert_eq!(f.check_intertwining_symbolic(), vec!["z".to_string()]);
        }
    }

    #[test]
    fn parse_and_display() {
        let t = yz();
        let q = p("3/2*y^2*z - y + 1", &t);
        assert_eq!(q.coeff(&Multidegree::from_pairs([(0, 2), (1, 1)])), crate::rational::frac(3, 2));
        assert_eq!(q.to_string(), "1 - y + 3/2*y^2*z");
        assert_eq!(p(&q.to_string(), &t), q);
        assert!(matches!(Polynomial::parse("y + w", &t), Err(Error::Parse { offset: 4, .. })));
        assert!(Polynomial::parse("", &t).is_err());
        assert!(Polynomial::parse("y ^", &t).is_err());
        assert_eq!(p("0", &t), Polynomial::zero(&t));
    }

    #[test]
    fn evaluation() {
        let t = yz();
        assert_eq!(p("y^2 + z", &t).evaluate(&[int(1), int(1)]).unwrap(), int(2));
        assert!(p("y", &t).evaluate(&[int(1)]).is_err());
    }
}
