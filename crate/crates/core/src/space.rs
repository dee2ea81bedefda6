//! Graded spaces (ℝ^𝐝, h) with the monoid action h_t and point-level
//! intertwining checks.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grading::{RankVector, VariableTable};
use crate::poly::{GradedPolyMap, Polynomial};
use crate::rational::{self, frac, int, Rational};

/// ℝ^𝐝 with its canonical (or a supplied) coordinate table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    rank: RankVector,
    table: Arc<VariableTable>,
}

impl GradedSpace {
    pub fn new(rank: RankVector) -> Self {
        let table = Arc::new(VariableTable::from_rank(&rank));
        GradedSpace { rank, table }
    }

    /// Space coordinatized by an even ℕ-graded fiber table.
    pub fn from_table(table: Arc<VariableTable>) -> Result<Self> {
        if table.arity() != 1 || table.is_super() {
            return Err(Error::Precondition(
                "graded spaces need an even N-graded table".into(),
            ));
        }
        if (0..table.len()).any(|i| table.weight(i).is_zero_grade()) {
            return Err(Error::Precondition("graded spaces have no weight-0 coordinates".into()));
        }
        Ok(GradedSpace {
            rank: table.rank_vector(),
            table,
        })
    }

    pub fn point() -> Self {
        Self::new(RankVector::new(Vec::new()))
    }

    pub fn rank(&self) -> &RankVector {
        &self.rank
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn dim(&self) -> usize {
        self.table.len()
    }

    pub fn degree(&self) -> usize {
        self.rank.degree()
    }

    pub fn origin(&self) -> Point {
        Point::new(vec![Rational::zero(); self.dim()])
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.table.weight(i).degree()
    }

    /// h_t: a coordinate of weight w scales by t^w.
    pub fn act(&self, t: &Rational, p: &Point) -> Point {
        assert_eq!(p.coords.len(), self.dim(), "point does not belong to the space");
        Point::new(
            p.coords
                .iter()
                .enumerate()
                .map(|(i, c)| c * rational::pow(t, self.weight(i)))
                .collect(),
        )
    }

    pub fn evaluate(&self, f: &Polynomial, p: &Point) -> Result<Rational> {
        if **f.table() != *self.table {
            return Err(Error::TableMismatch);
        }
        f.evaluate(&p.coords)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| int(c)).collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(rational::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A sample where f(h_t P) and h_t f(P) differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointwiseFailure {
    pub t: Rational,
    pub point: Point,
    pub lhs: Vec<Rational>,
    pub rhs: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointwiseReport {
    pub pass: bool,
    pub samples: usize,
    /// The grid was exhaustive and large enough to decide the polynomial
    /// identity in (t, P).
    pub complete: bool,
    pub failure: Option<PointwiseFailure>,
}

/// Grid of parameters and coordinates for pointwise checks.
#[derive(Clone, Debug)]
pub struct SampleGrid {
    pub ts: Vec<Rational>,
    pub coords: Vec<Rational>,
    pub max_points: usize,
}

impl Default for SampleGrid {
    fn default() -> Self {
        SampleGrid {
            ts: vec![int(0), int(1), int(-1), int(2), int(3), frac(1, 2)],
            coords: (-2..=2).map(int).collect(),
            max_points: 20_000,
        }
    }
}

impl SampleGrid {
    /// Extends the grids until they exceed the given degree bounds.
    fn widened(&self, t_degree: u32, coord_degree: u32) -> SampleGrid {
        let mut g = self.clone();
        let mut n = 4i64;
        while g.ts.len() <= t_degree as usize {
            let v = int(n);
            if !g.ts.contains(&v) {
                g.ts.push(v);
            }
            n += 1;
        }
        let mut n = 3i64;
        while g.coords.len() <= coord_degree as usize {
            for v in [int(n), int(-n)] {
                if !g.coords.contains(&v) {
                    g.coords.push(v);
                }
            }
            n += 1;
        }
        g
    }
}

/// f(h_t P) against h_t f(P) at one sample; `None` when they agree.
pub fn intertwining_defect(
    f: &GradedPolyMap,
    t: &Rational,
    p: &Point,
) -> Result<Option<(Vec<Rational>, Vec<Rational>)>> {
    let source = GradedSpace::from_table(f.source().clone())?;
    let target = GradedSpace::from_table(f.target().clone())?;
    let lhs = f.evaluate(&source.act(t, p).coords)?;
    let rhs = target.act(t, &Point::new(f.evaluate(&p.coords)?)).coords;
    Ok((lhs != rhs).then_some((lhs, rhs)))
}

/// Point-level intertwining check on a grid. The grid is widened past the
/// degrees in t and in each coordinate, so an exhaustive run decides the
/// identity; larger grids are strided deterministically.
pub fn check_intertwines_pointwise(f: &GradedPolyMap, grid: &SampleGrid) -> Result<PointwiseReport> {
    let source = GradedSpace::from_table(f.source().clone())?;
    let target = GradedSpace::from_table(f.target().clone())?;
    let n = source.dim();
    let t_degree = f
        .components()
        .iter()
        .enumerate()
        .map(|(j, c)| c.max_weight().max(target.weight(j)))
        .max()
        .unwrap_or(0);
    let coord_degree = (0..n)
        .map(|i| f.components().iter().map(|c| c.degree_in(i)).max().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let grid = grid.widened(t_degree, coord_degree);
    let base = grid.coords.len();
    let total_points = (base as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let budget = (grid.max_points / grid.ts.len().max(1)).max(1) as u128;
    let exhaustive = total_points <= budget;
    let count = if exhaustive { total_points } else { budget };
    let stride = if exhaustive { 1 } else { total_points / budget };
    let mut samples = 0;
    for s in 0..count {
        let mut code = s * stride;
        let coords: Vec<Rational> = (0..n)
            .map(|_| {
                let d = (code % base as u128) as usize;
                code /= base as u128;
                grid.coords[d].clone()
            })
            .collect();
        let p = Point::new(coords);
        let fp = Point::new(f.evaluate(&p.coords)?);
        for t in &grid.ts {
            samples += 1;
            let lhs = f.evaluate(&source.act(t, &p).coords)?;
            let rhs = target.act(t, &fp).coords;
            if lhs != rhs {
                return Ok(PointwiseReport {
                    pass: false,
                    samples,
                    complete: exhaustive,
                    failure: Some(PointwiseFailure {
                        t: t.clone(),
                        point: p,
                        lhs,
                        rhs,
                    }),
                });
            }
        }
    }
    Ok(PointwiseReport {
        pass: true,
        samples,
        complete: exhaustive,
        failure: None,
    })
}

/// h_t ∘ h_s = h_{ts} at a point.
pub fn monoid_law_holds(space: &GradedSpace, t: &Rational, s: &Rational, p: &Point) -> bool {
    space.act(t, &space.act(s, p)) == space.act(&(t * s), p)
}

/// h_1 = id at a point.
pub fn unit_law_holds(space: &GradedSpace, p: &Point) -> bool {
    space.act(&Rational::one(), p) == *p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yz() -> Arc<VariableTable> {
        Arc::new(VariableTable::from_weights(&[("y", 1), ("z", 2)]).unwrap())
    }

    #[test]
    fn act_examples() {
        let v = GradedSpace::new(RankVector::new(vec![1, 1]));
        let p = Point::from_ints(&[1, 1]);
        assert_eq!(v.act(&int(2), &p), Point::from_ints(&[2, 4]));
        assert_eq!(v.act(&int(1), &p), p);
        assert_eq!(v.act(&int(0), &p), v.origin());
        assert!(monoid_law_holds(&v, &frac(2, 3), &int(-5), &Point::from_ints(&[3, -1])));
    }

    #[test]
    fn evaluate_examples() {
        let t = yz();
        let v = GradedSpace::from_table(t.clone()).unwrap();
        let f = Polynomial::parse("y^2 + z", &t).unwrap();
        assert_eq!(v.evaluate(&f, &Point::from_ints(&[1, 1])).unwrap(), int(2));
        let one = Polynomial::one(&t);
        assert_eq!(v.evaluate(&one, &Point::from_ints(&[7, -3])).unwrap(), int(1));
        let h = Polynomial::parse("y*z + 2*y^3", &t).unwrap();
        let p = Point::from_ints(&[2, -1]);
        let lhs = v.evaluate(&h, &v.act(&int(3), &p)).unwrap();
        let rhs = rational::pow(&int(3), 3) * v.evaluate(&h, &p).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pointwise_examples() {
        let t = yz();
        let phi = GradedPolyMap::parse_endo(&t, &["y", "z + y^2"]).unwrap();
        let r = check_intertwines_pointwise(&phi, &SampleGrid::default()).unwrap();
        assert!(r.pass && r.complete);
        let bad = GradedPolyMap::parse_endo(&t, &["y", "z + y"]).unwrap();
        let (lhs, rhs) = intertwining_defect(&bad, &int(2), &Point::from_ints(&[1, 0]))
            .unwrap()
            .unwrap();
        assert_eq!(lhs, vec![int(2), int(2)]);
        assert_eq!(rhs, vec![int(2), int(4)]);
        assert!(!check_intertwines_pointwise(&bad, &SampleGrid::default()).unwrap().pass);
        let id = GradedPolyMap::identity(&t);
        assert!(check_intertwines_pointwise(&id, &SampleGrid::default()).unwrap().pass);
    }

    #[test]
    fn failures_need_nontrivial_parameters() {
        let t = yz();
        let bad = GradedPolyMap::parse_endo(&t, &["y", "z + y^4"]).unwrap();
        let r = check_intertwines_pointwise(&bad, &SampleGrid::default()).unwrap();
        let failure = r.failure.unwrap();
        assert!(failure.t != int(0) && failure.t != int(1));
    }
}
