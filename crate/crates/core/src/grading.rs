//! Weights, variable tables and weighted monomial combinatorics.
//!
//! A weight is a tuple of natural numbers (one entry for an ℕ-grading, two
//! for a bi-grading) together with an optional parity bit for super
//! contexts. Monomials are sparse multidegrees over a [`VariableTable`];
//! odd variables never carry an exponent above one.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Parity of `n` copies of an element of this parity.
    pub fn times(self, n: u32) -> Parity {
        if self.is_odd() && n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Tuple weight with optional parity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    grades: Vec<u32>,
    parity: Option<Parity>,
}

impl Weight {
    pub fn new(grades: Vec<u32>) -> Self {
        assert!(!grades.is_empty(), "weights have at least one grade");
        Weight {
            grades,
            parity: None,
        }
    }

    pub fn scalar(w: u32) -> Self {
        Weight::new(vec![w])
    }

    pub fn zero(arity: usize) -> Self {
        Weight::new(vec![0; arity])
    }

    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.parity = Some(parity);
        self
    }

    pub fn without_parity(mut self) -> Self {
        self.parity = None;
        self
    }

    pub fn grades(&self) -> &[u32] {
        &self.grades
    }

    pub fn arity(&self) -> usize {
        self.grades.len()
    }

    pub fn parity(&self) -> Option<Parity> {
        self.parity
    }

    pub fn total(&self) -> u32 {
        self.grades.iter().sum()
    }

    /// The first grade; the weight itself for ℕ-gradings.
    pub fn degree(&self) -> u32 {
        self.grades[0]
    }

    pub fn is_zero_grade(&self) -> bool {
        self.grades.iter().all(|&g| g == 0)
    }

    /// Componentwise comparison against a truncation bound.
    pub fn fits_in(&self, bound: &[u32]) -> bool {
        self.grades.len() == bound.len() && self.grades.iter().zip(bound).all(|(g, b)| g <= b)
    }

    pub fn scaled(&self, n: u32) -> Weight {
        Weight {
            grades: self.grades.iter().map(|g| g * n).collect(),
            parity: self.parity.map(|p| p.times(n)),
        }
    }

    pub fn plus(&self, other: &Weight) -> Weight {
        assert_eq!(self.arity(), other.arity(), "weight arity mismatch");
        let parity = match (self.parity, other.parity) {
            (Some(a), Some(b)) => Some(a.add(b)),
            (a, None) => a,
            (None, b) => b,
        };
        Weight {
            grades: self.grades.iter().zip(&other.grades).map(|(a, b)| a + b).collect(),
            parity,
        }
    }

    /// Equality of grades, ignoring parity.
    pub fn same_grades(&self, other: &Weight) -> bool {
        self.grades == other.grades
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.grades.cmp(&other.grades))
            .then_with(|| self.parity.cmp(&other.parity))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.grades.len() == 1 {
            write!(f, "{}", self.grades[0])?;
        } else {
            let parts: Vec<String> = self.grades.iter().map(u32::to_string).collect();
            write!(f, "({})", parts.join(","))?;
        }
        if let Some(p) = self.parity {
            write!(f, "/{}", p.name())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub weight: Weight,
}

impl Variable {
    pub fn new(name: impl Into<String>, weight: Weight) -> Self {
        Variable {
            name: name.into(),
            weight,
        }
    }

    pub fn parity(&self) -> Parity {
        self.weight.parity().unwrap_or(Parity::Even)
    }
}

/// Ordered, uniquely named, weighted coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableTable {
    vars: Vec<Variable>,
    arity: usize,
    is_super: bool,
}

impl VariableTable {
    /// Fiber-type table: every weight must be nonzero.
    pub fn new(vars: Vec<Variable>) -> Result<Self> {
        Self::build(vars, None, false)
    }

    /// Table that also admits weight-0 (base) coordinates.
    pub fn with_base(vars: Vec<Variable>) -> Result<Self> {
        Self::build(vars, None, true)
    }

    pub fn empty(arity: usize) -> Self {
        VariableTable {
            vars: Vec::new(),
            arity,
            is_super: false,
        }
    }

    /// Shorthand for ℕ-graded even tables: `[("y", 1), ("z", 2)]`.
    pub fn from_weights(entries: &[(&str, u32)]) -> Result<Self> {
        Self::new(
            entries
                .iter()
                .map(|&(n, w)| Variable::new(n, Weight::scalar(w)))
                .collect(),
        )
    }

    fn build(vars: Vec<Variable>, arity: Option<usize>, allow_base: bool) -> Result<Self> {
        let arity = arity
            .or_else(|| vars.first().map(|v| v.weight.arity()))
            .unwrap_or(1);
        let mut seen = HashSet::new();
        let is_super = vars.first().is_some_and(|v| v.weight.parity().is_some());
        for v in &vars {
            if v.name.is_empty() || !valid_name(&v.name) {
                return Err(Error::InvalidTable(format!("invalid variable name `{}`", v.name)));
            }
            if !seen.insert(v.name.clone()) {
                return Err(Error::InvalidTable(format!("duplicate variable `{}`", v.name)));
            }
            if v.weight.arity() != arity {
                return Err(Error::InvalidTable(format!(
                    "variable `{}` has a weight with {} grades, expected {arity}",
                    v.name,
                    v.weight.arity()
                )));
            }
            if v.weight.parity().is_some() != is_super {
                return Err(Error::InvalidTable(format!(
                    "variable `{}`: parity must be given for all variables or none",
                    v.name
                )));
            }
            if v.weight.is_zero_grade() {
                if !allow_base {
                    return Err(Error::InvalidTable(format!(
                        "variable `{}` has weight 0, allowed only for base coordinates",
                        v.name
                    )));
                }
                if v.parity().is_odd() {
                    return Err(Error::InvalidTable(format!(
                        "base coordinate `{}` must be even",
                        v.name
                    )));
                }
            }
        }
        Ok(VariableTable {
            vars,
            arity,
            is_super,
        })
    }

    /// Canonical table of ℝ^𝐝: `y{w}_{a}` for the `a`-th generator of weight `w`.
    pub fn from_rank(rank: &RankVector) -> Self {
        let mut vars = Vec::new();
        for (i, &d) in rank.entries().iter().enumerate() {
            let w = i as u32 + 1;
            for a in 1..=d {
                vars.push(Variable::new(format!("y{w}_{a}"), Weight::scalar(w)));
            }
        }
        VariableTable {
            vars,
            arity: 1,
            is_super: false,
        }
    }

    /// Canonical super table: even `y{w}_{a}` then odd `th{w}_{a}`, weight by weight.
    pub fn from_super_rank(rank: &SuperRankVector) -> Self {
        let mut vars = Vec::new();
        for w in 1..=rank.len() {
            for a in 1..=rank.even(w) {
                vars.push(Variable::new(
                    format!("y{w}_{a}"),
                    Weight::scalar(w as u32).with_parity(Parity::Even),
                ));
            }
            for a in 1..=rank.odd(w) {
                vars.push(Variable::new(
                    format!("th{w}_{a}"),
                    Weight::scalar(w as u32).with_parity(Parity::Odd),
                ));
            }
        }
        VariableTable {
            vars,
            arity: 1,
            is_super: true,
        }
    }

    /// Concatenation; names must stay unique.
    pub fn concat(&self, other: &VariableTable) -> Result<VariableTable> {
        if !self.vars.is_empty() && !other.vars.is_empty() {
            if self.arity != other.arity {
                return Err(Error::InvalidTable("arity mismatch in concatenation".into()));
            }
        }
        let mut vars = self.vars.clone();
        vars.extend(other.vars.iter().cloned());
        let arity = if self.vars.is_empty() { other.arity } else { self.arity };
        let mut t = Self::build(vars, Some(arity), true)?;
        if t.vars.is_empty() {
            t.is_super = self.is_super || other.is_super;
        }
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_super(&self) -> bool {
        self.is_super
    }

    pub fn var(&self, i: usize) -> &Variable {
        &self.vars[i]
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn weight(&self, i: usize) -> &Weight {
        &self.vars[i].weight
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.vars[i].parity().is_odd()
    }

    pub fn has_odd(&self) -> bool {
        self.vars.iter().any(|v| v.parity().is_odd())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn zero_weight(&self) -> Weight {
        let w = Weight::zero(self.arity);
        if self.is_super {
            w.with_parity(Parity::Even)
        } else {
            w
        }
    }

    /// Number of fiber generators per weight (ℕ-graded tables only).
    pub fn rank_vector(&self) -> RankVector {
        let mut counts: Vec<usize> = Vec::new();
        for v in &self.vars {
            let w = v.weight.degree() as usize;
            if w == 0 {
                continue;
            }
            if counts.len() < w {
                counts.resize(w, 0);
            }
            counts[w - 1] += 1;
        }
        RankVector::new(counts)
    }

    /// Even/odd generator counts per weight (ℕ-graded tables only).
    pub fn super_rank_vector(&self) -> SuperRankVector {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for v in &self.vars {
            let w = v.weight.degree() as usize;
            if w == 0 {
                continue;
            }
            let slot = if v.parity().is_odd() { &mut odd } else { &mut even };
            if slot.len() < w {
                slot.resize(w, 0);
            }
            slot[w - 1] += 1;
        }
        SuperRankVector::new(even, odd)
    }

    /// Largest grade-wise weight of a single variable (its degree for ℕ-grading).
    pub fn degree(&self) -> u32 {
        self.vars.iter().map(|v| v.weight.degree()).max().unwrap_or(0)
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    let first_ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    first_ok && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Sparse exponent vector, sorted by variable index, exponents > 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Multidegree(Vec<(usize, u32)>);

impl Multidegree {
    pub fn one() -> Self {
        Multidegree(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        Multidegree(vec![(i, 1)])
    }

    pub fn power(i: usize, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Multidegree(vec![(i, e)])
        }
    }

    /// Normalizes arbitrary `(index, exponent)` pairs (merging repeats, dropping zeros).
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut v: Vec<(usize, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_by_key(|&(i, _)| i);
        let mut out: Vec<(usize, u32)> = Vec::with_capacity(v.len());
        for (i, e) in v {
            match out.last_mut() {
                Some((j, f)) if *j == i => *f += e,
                _ => out.push((i, e)),
            }
        }
        Multidegree(out)
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Self::from_pairs(exps.iter().enumerate().map(|(i, &e)| (i, e)))
    }

    /// Monomial with the given variable indices (with multiplicity).
    pub fn from_indices(indices: &[usize]) -> Self {
        Self::from_pairs(indices.iter().map(|&i| (i, 1)))
    }

    pub fn pairs(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0
            .iter()
            .find(|&&(j, _)| j == i)
            .map_or(0, |&(_, e)| e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn max_exponent(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).max().unwrap_or(0)
    }

    /// Exponent-wise sum (the product of monomials, ignoring signs).
    pub fn times(&self, other: &Multidegree) -> Multidegree {
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(i, e)), Some(&&(j, f))) => match i.cmp(&j) {
                    Ordering::Less => {
                        out.push((i, e));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((j, f));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((i, e + f));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&p), None) => {
                    out.push(p);
                    a.next();
                }
                (None, Some(&&p)) => {
                    out.push(p);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Multidegree(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn divide(&self, other: &Multidegree) -> Option<Multidegree> {
        let mut out = self.0.clone();
        for &(i, f) in &other.0 {
            let slot = out.iter_mut().find(|(j, _)| *j == i)?;
            if slot.1 < f {
                return None;
            }
            slot.1 -= f;
        }
        Some(Multidegree::from_pairs(out))
    }

    /// Variable indices with multiplicity, ascending.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .flat_map(|&(i, e)| std::iter::repeat_n(i, e as usize))
    }

    /// Whether some odd variable of `table` appears squared.
    pub fn violates_odd_rule(&self, table: &VariableTable) -> bool {
        self.0.iter().any(|&(i, e)| e > 1 && i < table.len() && table.is_odd(i))
    }

    pub fn format(&self, table: &VariableTable) -> String {
        if self.is_one() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&(i, e)| {
                let name = table.vars.get(i).map_or("?", |v| v.name.as_str());
                if e == 1 {
                    name.to_string()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Lexicographic on the ascending variable-index sequence; combined with a
/// weight-first sort this is the global graded-lexicographic order.
impl Ord for Multidegree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.indices().cmp(other.indices())
    }
}

impl PartialOrd for Multidegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sum of exponent·weight; parity is the number of odd factors mod 2.
pub fn weight_of(md: &Multidegree, table: &VariableTable) -> Result<Weight> {
    let mut w = table.zero_weight();
    for &(i, e) in md.pairs() {
        if i >= table.len() {
            return Err(Error::UnknownVariable(i));
        }
        w = w.plus(&table.weight(i).scaled(e));
    }
    Ok(w)
}

/// Monomials of weight exactly `w` in graded-lexicographic order.
///
/// Weight-0 (base) variables are skipped since their powers are unbounded.
/// When `w` carries a parity only monomials of that parity are returned.
/// With a truncation bound, weights outside the bound yield no monomials.
pub fn enumerate_monomials(
    table: &VariableTable,
    w: &Weight,
    truncation: Option<&Weight>,
) -> Vec<Multidegree> {
    if w.arity() != table.arity() {
        return Vec::new();
    }
    if let Some(t) = truncation {
        if !w.fits_in(t.grades()) {
            return Vec::new();
        }
    }
    let vars: Vec<usize> = (0..table.len())
        .filter(|&i| !table.weight(i).is_zero_grade())
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut remaining = w.grades().to_vec();
    enumerate_rec(table, &vars, 0, &mut remaining, &mut current, &mut out);
    if let Some(p) = w.parity() {
        out.retain(|md| weight_of(md, table).map(|x| x.parity() == Some(p)).unwrap_or(false));
    }
    out.sort();
    out
}

fn enumerate_rec(
    table: &VariableTable,
    vars: &[usize],
    pos: usize,
    remaining: &mut Vec<u32>,
    current: &mut Vec<(usize, u32)>,
    out: &mut Vec<Multidegree>,
) {
    if remaining.iter().all(|&r| r == 0) {
        out.push(Multidegree(current.clone()));
        return;
    }
    if pos == vars.len() {
        return;
    }
    let i = vars[pos];
    let wi = table.weight(i).grades();
    let cap = if table.is_odd(i) { 1 } else { u32::MAX };
    let mut e = 0u32;
    loop {
        if e > 0 {
            current.push((i, e));
        }
        enumerate_rec(table, vars, pos + 1, remaining, current, out);
        if e > 0 {
            current.pop();
        }
        if e == cap || !wi.iter().zip(remaining.iter()).all(|(a, r)| a <= r) {
            break;
        }
        for (r, a) in remaining.iter_mut().zip(wi) {
            *r -= a;
        }
        e += 1;
    }
    for (r, a) in remaining.iter_mut().zip(wi) {
        *r += a * e;
    }
}

/// All grade vectors `g ≤ bound` in canonical order (total weight, then lexicographic).
pub fn grades_in_box(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=b).map(move |g| {
                    let mut p = prefix.clone();
                    p.push(g);
                    p
                })
            })
            .collect();
    }
    out.sort_by(|a, b| {
        let (sa, sb): (u32, u32) = (a.iter().sum(), b.iter().sum());
        sa.cmp(&sb).then_with(|| a.cmp(b))
    });
    out
}

/// 𝐝 = (d_1, …, d_k): generator count per weight 1..k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RankVector(Vec<usize>);

impl RankVector {
    pub fn new(entries: Vec<usize>) -> Self {
        RankVector(entries)
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// `d_w` (zero outside the stored range).
    pub fn get(&self, w: usize) -> usize {
        if w == 0 {
            0
        } else {
            self.0.get(w - 1).copied().unwrap_or(0)
        }
    }

    /// Largest weight with a nonzero count, or 0.
    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&d| d > 0).map_or(0, |i| i + 1)
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Trailing zeros removed.
    pub fn normalized(&self) -> RankVector {
        RankVector(self.0[..self.degree()].to_vec())
    }

    pub fn truncated(&self, k: usize) -> RankVector {
        RankVector(self.0.iter().take(k).copied().collect()).normalized()
    }
}

impl fmt::Display for RankVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// 𝐝̄ = (d_{0̄,1}, … | d_{1̄,1}, …).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SuperRankVector {
    even: Vec<usize>,
    odd: Vec<usize>,
}

impl SuperRankVector {
    pub fn new(mut even: Vec<usize>, mut odd: Vec<usize>) -> Self {
        let n = even.len().max(odd.len());
        even.resize(n, 0);
        odd.resize(n, 0);
        let mut r = SuperRankVector { even, odd };
        let deg = r.degree();
        r.even.truncate(deg);
        r.odd.truncate(deg);
        r
    }

    pub fn len(&self) -> usize {
        self.even.len()
    }

    pub fn is_empty(&self) -> bool {
        self.even.is_empty()
    }

    pub fn even(&self, w: usize) -> usize {
        if w == 0 { 0 } else { self.even.get(w - 1).copied().unwrap_or(0) }
    }

    pub fn odd(&self, w: usize) -> usize {
        if w == 0 { 0 } else { self.odd.get(w - 1).copied().unwrap_or(0) }
    }

    pub fn even_part(&self) -> &[usize] {
        &self.even
    }

    pub fn odd_part(&self) -> &[usize] {
        &self.odd
    }

    pub fn degree(&self) -> usize {
        (0..self.even.len())
            .rev()
            .find(|&i| self.even[i] + self.odd[i] > 0)
            .map_or(0, |i| i + 1)
    }

    pub fn is_even(&self) -> bool {
        self.odd.iter().all(|&d| d == 0)
    }
}

impl fmt::Display for SuperRankVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.even.iter().map(usize::to_string).collect();
        let o: Vec<String> = self.odd.iter().map(usize::to_string).collect();
        write!(f, "({}|{})", e.join(","), o.join(","))
    }
}

/// dim 𝒜^w(ℝ^𝐝): the coefficient of t^w in ∏_i (1 − t^i)^{−d_i}.
pub fn component_dimension(rank: &RankVector, w: u32) -> u64 {
    series_coefficients(rank.entries(), &[], w as usize)[w as usize]
}

/// Super version: coefficient of t^w in ∏_i (1 + t^i)^{d_{1̄,i}} / (1 − t^i)^{d_{0̄,i}}.
pub fn super_component_dimension(rank: &SuperRankVector, w: u32) -> u64 {
    series_coefficients(rank.even_part(), rank.odd_part(), w as usize)[w as usize]
}

/// Truncated power-series product; entry `n` of the result is the number of
/// monomials of weight `n`.
fn series_coefficients(even: &[usize], odd: &[usize], max: usize) -> Vec<u64> {
    let mut c = vec![0u64; max + 1];
    c[0] = 1;
    for (i, &d) in even.iter().enumerate() {
        let step = i + 1;
        for _ in 0..d {
            // multiply by 1/(1 - t^step)
            for n in step..=max {
                c[n] += c[n - step];
            }
        }
    }
    for (i, &d) in odd.iter().enumerate() {
        let step = i + 1;
        for _ in 0..d {
            // multiply by (1 + t^step)
            for n in (step..=max).rev() {
                c[n] += c[n - step];
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yz() -> VariableTable {
        VariableTable::from_weights(&[("y", 1), ("z", 2)]).unwrap()
    }

    #[test]
    fn weight_of_examples() {
        let t = yz();
        assert_eq!(weight_of(&Multidegree::one(), &t).unwrap(), Weight::scalar(0));
        assert_eq!(weight_of(&Multidegree::power(0, 2), &t).unwrap(), Weight::scalar(2));
        assert_eq!(
            weight_of(&Multidegree::from_indices(&[0, 1]), &t).unwrap(),
            Weight::scalar(3)
        );
        assert_eq!(
            weight_of(&Multidegree::var(7), &t),
            Err(Error::UnknownVariable(7))
        );
    }

    #[test]
    fn enumeration_examples() {
        let t = yz();
        let w2 = enumerate_monomials(&t, &Weight::scalar(2), None);
        assert_eq!(w2, vec![Multidegree::power(0, 2), Multidegree::var(1)]);
        assert_eq!(
            enumerate_monomials(&t, &Weight::scalar(0), None),
            vec![Multidegree::one()]
        );
        let yy = VariableTable::from_weights(&[("y1", 1), ("y2", 1)]).unwrap();
        assert_eq!(enumerate_monomials(&yy, &Weight::scalar(3), None).len(), 4);
        let trunc = Weight::scalar(1);
        assert!(enumerate_monomials(&t, &Weight::scalar(2), Some(&trunc)).is_empty());
    }

    #[test]
    fn graded_lex_order() {
        let t = VariableTable::from_rank(&RankVector::new(vec![2, 1]));
        let names: Vec<String> = enumerate_monomials(&t, &Weight::scalar(2), None)
            .iter()
            .map(|m| m.format(&t))
            .collect();
        assert_eq!(names, ["y1_1^2", "y1_1*y1_2", "y1_2^2", "y2_1"]);
    }

    #[test]
    fn component_dimension_examples() {
        assert_eq!(component_dimension(&RankVector::new(vec![2, 1]), 2), 4);
        assert_eq!(component_dimension(&RankVector::new(vec![1]), 5), 1);
        assert_eq!(component_dimension(&RankVector::new(vec![1, 1]), 4), 3);
        assert_eq!(component_dimension(&RankVector::new(vec![]), 0), 1);
        assert_eq!(component_dimension(&RankVector::new(vec![]), 3), 0);
    }

    #[test]
    fn super_dimensions() {
        let r = SuperRankVector::new(vec![0], vec![2]);
        assert_eq!(super_component_dimension(&r, 2), 1);
        let total: u64 = (0..=2).map(|w| super_component_dimension(&r, w)).sum();
        assert_eq!(total, 4);
        let r11 = SuperRankVector::new(vec![1], vec![1]);
        assert_eq!(super_component_dimension(&r11, 2), 2);
        let t = VariableTable::from_super_rank(&r11);
        assert_eq!(enumerate_monomials(&t, &Weight::scalar(2), None).len(), 2);
    }

    #[test]
    fn odd_variables_stay_squarefree() {
        let t = VariableTable::from_super_rank(&SuperRankVector::new(vec![0], vec![1]));
        assert_eq!(enumerate_monomials(&t, &Weight::scalar(2), None).len(), 0);
        let odd_only = Weight::scalar(1).with_parity(Parity::Odd);
        assert_eq!(enumerate_monomials(&t, &odd_only, None).len(), 1);
    }

    #[test]
    fn table_validation() {
        assert!(VariableTable::from_weights(&[("y", 1), ("y", 2)]).is_err());
        assert!(VariableTable::from_weights(&[("x", 0)]).is_err());
        assert!(VariableTable::with_base(vec![Variable::new("x", Weight::scalar(0))]).is_ok());
        let mixed = vec![
            Variable::new("y", Weight::scalar(1).with_parity(Parity::Even)),
            Variable::new("z", Weight::scalar(2)),
        ];
        assert!(VariableTable::new(mixed).is_err());
        assert!(VariableTable::from_weights(&[("1y", 1)]).is_err());
    }

    #[test]
    fn bigraded_enumeration() {
        let t = VariableTable::new(vec![
            Variable::new("x", Weight::new(vec![1, 0])),
            Variable::new("y", Weight::new(vec![0, 1])),
            Variable::new("z", Weight::new(vec![1, 1])),
        ])
        .unwrap();
        let m = enumerate_monomials(&t, &Weight::new(vec![1, 1]), None);
        assert_eq!(m.len(), 2);
        assert_eq!(grades_in_box(&[1, 1]), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn rank_vector_degree() {
        assert_eq!(RankVector::new(vec![2, 0, 1, 0]).degree(), 3);
        assert_eq!(RankVector::new(vec![0, 0]).degree(), 0);
        assert_eq!(RankVector::new(vec![1, 2, 3]).truncated(2), RankVector::new(vec![1, 2]));
    }
}
