//! Reference computations written from first principles, sharing no
//! algorithm with the library under test.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use gradua::Rational;

/// Exponent vectors of weight exactly `w` for variables of the given
/// weights; odd variables appear at most once. Zero-weight variables are
/// not allowed.
pub fn monomials(weights: &[u32], odd: &[bool], w: u32) -> Vec<Vec<u32>> {
    fn go(weights: &[u32], odd: &[bool], pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let cap = if odd[pos] { 1 } else { left / weights[pos] };
        for e in 0..=cap.min(left / weights[pos]) {
            cur.push(e);
            go(weights, odd, pos + 1, left - e * weights[pos], cur, out);
            cur.pop();
        }
    }
    assert!(weights.iter().all(|&x| x > 0));
    let mut out = Vec::new();
    go(weights, odd, 0, w, &mut Vec::new(), &mut out);
    out
}

/// Weight of every variable listed per grade: `rank[i]` variables of weight i+1.
pub fn weights_of_rank(rank: &[usize]) -> Vec<u32> {
    rank.iter()
        .enumerate()
        .flat_map(|(i, &d)| std::iter::repeat(i as u32 + 1).take(d))
        .collect()
}

/// Rank by plain Gauss-Jordan elimination on rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &pivot;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &m[r][j] * &f;
                    m[i][j] -= d;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

pub fn transpose(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    (0..cols).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect()
}

/// Dense polynomial as exponent vector → coefficient.
pub type Dense = BTreeMap<Vec<u32>, Rational>;

pub fn eval(p: &Dense, x: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (e, c) in p {
        let mut t = c.clone();
        for (xi, &ei) in x.iter().zip(e) {
            for _ in 0..ei {
                t *= xi;
            }
        }
        acc += t;
    }
    acc
}

pub fn power(x: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * x)
}

/// Product of two monomials in a Grassmann-extended ring: odd variables
/// anticommute and square to zero. Returns the sign and the product.
pub fn grassmann(a: &[u32], b: &[u32], odd: &[bool]) -> Option<(i32, Vec<u32>)> {
    let mut sign = 1;
    for i in 0..a.len() {
        if !odd[i] {
            continue;
        }
        if a[i] > 0 && b[i] > 0 {
            return None;
        }
        if b[i] > 0 {
            // b's odd variable i moves left past a's odd variables of larger index
            let passes = (i + 1..a.len()).filter(|&j| odd[j] && a[j] > 0).count();
            if passes % 2 == 1 {
                sign = -sign;
            }
        }
    }
    Some((sign, a.iter().zip(b).map(|(x, y)| x + y).collect()))
}

pub fn grassmann_mul(p: &Dense, q: &Dense, odd: &[bool]) -> Dense {
    let mut out = Dense::new();
    for (a, ca) in p {
        for (b, cb) in q {
            if let Some((s, e)) = grassmann(a, b, odd) {
                let c = ca * cb * Rational::from_integer(s.into());
                let slot = out.entry(e).or_insert_with(Rational::zero);
                *slot += c;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Dual-basis comultiplication in a monomial basis: Δ Y_m = Σ_{a+b=m} Y_a ⊗ Y_b.
pub fn divisor_coproduct(m: &[u32]) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut out = vec![(Vec::new(), Vec::new())];
    for &e in m {
        out = out
            .into_iter()
            .flat_map(|(a, b)| {
                (0..=e).map(move |x| {
                    let mut a = a.clone();
                    let mut b = b.clone();
                    a.push(x);
                    b.push(e - x);
                    (a, b)
                })
            })
            .collect();
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use gradua::rational::int;

    #[test]
    fn counts_small_cases() {
        assert_eq!(monomials(&[1, 1], &[false, false], 2).len(), 3);
        assert_eq!(monomials(&[1, 1], &[true, true], 2).len(), 1);
        assert_eq!(monomials(&[1, 2], &[false, false], 4).len(), 3);
    }

    #[test]
    fn grassmann_signs() {
        let odd = [true, true];
        assert_eq!(grassmann(&[1, 0], &[0, 1], &odd), Some((1, vec![1, 1])));
        assert_eq!(grassmann(&[0, 1], &[1, 0], &odd), Some((-1, vec![1, 1])));
        assert_eq!(grassmann(&[1, 0], &[1, 0], &odd), None);
    }

    #[test]
    fn rank_of_small_matrices() {
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(rank(&m), 1);
        assert_eq!(rank(&transpose(&m, 2)), 1);
        assert_eq!(divisor_coproduct(&[2]).len(), 3);
        assert_eq!(binomial(5, 3), 10);
    }
}
