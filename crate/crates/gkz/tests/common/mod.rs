//! Fixtures, random instances and brute-force oracles shared by the
//! integration tests. Oracles here avoid the library's own algorithms.
#![allow(dead_code)]

use gkz::semigroup::SemigroupView;
use gkz::umbrella::WeightSpec;
use gkz::{BigInt, IntMatrix, Rational};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn mat(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows).unwrap()
}

pub fn view(rows: &[Vec<i64>]) -> SemigroupView {
    SemigroupView::new(mat(rows)).unwrap()
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn qs(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| qi(x)).collect()
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub mod fixtures {
    use super::*;

    pub fn a1() -> IntMatrix {
        mat(&[vec![1, 2]])
    }

    pub fn a2() -> IntMatrix {
        mat(&[vec![1, 1, 1, 1], vec![0, 1, 3, 4]])
    }

    /// The 3×7 matrix whose exceptional set is two lines through (1,0,0).
    pub fn three_block() -> IntMatrix {
        mat(&[vec![2, 3, 0, 0, 0, 0, 1], vec![0, 0, 1, 3, 0, 0, 1], vec![0, 0, 0, 0, 1, 2, 1]])
    }

    pub fn three_block_weight() -> WeightSpec<Rational> {
        let ld = [1, 4, 1, 4, 1, 3, 1];
        WeightSpec::from_ld(qi(5), qs(&ld)).unwrap()
    }

    /// The non-simplicial 3×7 matrix with a single exceptional point (0,0,-1).
    pub fn skew() -> IntMatrix {
        mat(&[vec![2, 3, 1, 0, 0, 0, 1], vec![0, 0, 0, 2, 3, 1, 1], vec![0, 0, 1, 0, 0, 1, 0]])
    }

    pub fn sum_a1_a2() -> IntMatrix {
        mat(&[vec![1, 2, 0, 0, 0, 0], vec![0, 0, 1, 1, 1, 1], vec![0, 0, 0, 1, 3, 4]])
    }

    pub fn all() -> Vec<(&'static str, IntMatrix)> {
        vec![
            ("a1", a1()),
            ("a2", a2()),
            ("three_block", three_block()),
            ("skew", skew()),
            ("sum_a1_a2", sum_a1_a2()),
        ]
    }
}

/// A random matrix satisfying the standing hypotheses, `d <= max_d`, `n <= max_n`.
pub fn random_instance<R: Rng>(rng: &mut R, max_d: usize, max_n: usize) -> (IntMatrix, SemigroupView) {
    loop {
        let d = rng.gen_range(1..=max_d);
        let n = rng.gen_range(d + 1..=max_n.max(d + 1));
        let rows: Vec<Vec<i64>> = (0..d)
            .map(|r| (0..n).map(|_| if r == 0 { rng.gen_range(0..4) } else { rng.gen_range(-1..4) }).collect())
            .collect();
        let m = mat(&rows);
        if let Ok(v) = SemigroupView::new(m.clone()) {
            return (m, v);
        }
    }
}

/// Homogeneous instance: first row all ones.
pub fn random_homogeneous<R: Rng>(rng: &mut R, max_d: usize, max_n: usize) -> (IntMatrix, SemigroupView) {
    loop {
        let d = rng.gen_range(2..=max_d.max(2));
        let n = rng.gen_range(d + 1..=max_n.max(d + 1));
        let rows: Vec<Vec<i64>> = (0..d)
            .map(|r| (0..n).map(|_| if r == 0 { 1 } else { rng.gen_range(0..4) }).collect())
            .collect();
        let m = mat(&rows);
        if let Ok(v) = SemigroupView::new(m.clone()) {
            return (m, v);
        }
    }
}

/// Random projective weight with `L_∂ >= 0`.
pub fn random_weight<R: Rng>(rng: &mut R, n: usize) -> WeightSpec<Rational> {
    let c = q(rng.gen_range(1..6), rng.gen_range(1..3));
    let ld: Vec<Rational> = (0..n).map(|_| q(rng.gen_range(0..7), rng.gen_range(1..4))).collect();
    WeightSpec::from_ld(c, ld).unwrap()
}

// ---------- Fourier–Motzkin feasibility ----------

#[derive(Clone, Debug)]
pub struct Ineq {
    /// `coeffs · x >= rhs`, or `=` when `eq`.
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub eq: bool,
}

pub fn fm_feasible(nvars: usize, mut cons: Vec<Ineq>) -> bool {
    // substitute equalities away first
    let mut alive: Vec<bool> = vec![true; nvars];
    while let Some(pos) = cons.iter().position(|c| c.eq && c.coeffs.iter().any(|x| !x.is_zero())) {
        let e = cons.remove(pos);
        let k = e.coeffs.iter().position(|x| !x.is_zero()).unwrap();
        alive[k] = false;
        for c in cons.iter_mut() {
            if c.coeffs[k].is_zero() {
                continue;
            }
            let f = &c.coeffs[k] / &e.coeffs[k];
            for i in 0..nvars {
                c.coeffs[i] = &c.coeffs[i] - &f * &e.coeffs[i];
            }
            c.rhs = &c.rhs - &f * &e.rhs;
        }
    }
    let mut ge: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for c in cons {
        if c.eq {
            if !c.rhs.is_zero() {
                return false;
            }
        } else {
            ge.push((c.coeffs, c.rhs));
        }
    }
    for k in 0..nvars {
        if !alive[k] {
            continue;
        }
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for (c, r) in ge {
            if c[k].is_positive() {
                pos.push((c, r));
            } else if c[k].is_negative() {
                neg.push((c, r));
            } else {
                zero.push((c, r));
            }
        }
        for (pc, pr) in &pos {
            for (nc, nr) in &neg {
                let a = pc[k].clone();
                let b = -nc[k].clone();
                let c: Vec<Rational> = pc.iter().zip(nc).map(|(x, y)| x * &b + y * &a).collect();
                let r = pr * &b + nr * &a;
                zero.push(normalize(c, r));
            }
        }
        zero.sort();
        zero.dedup();
        ge = zero;
    }
    ge.iter().all(|(_, r)| !r.is_positive())
}

fn normalize(c: Vec<Rational>, r: Rational) -> (Vec<Rational>, Rational) {
    let scale = c.iter().chain(std::iter::once(&r)).find(|x| !x.is_zero()).map(|x| x.abs());
    match scale {
        Some(s) => (c.iter().map(|x| x / &s).collect(), r / s),
        None => (c, r),
    }
}

/// Umbrella faces and their dimensions from the L-polyhedron directly:
/// `τ` is a face iff some `h` has `h·a_j = L_∂j` on `τ` and `h·a_j < L_∂j` off it.
pub fn umbrella_oracle(a: &IntMatrix, ld: &[Rational]) -> Vec<(Vec<usize>, isize)> {
    let d = a.rows();
    let n = a.cols();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let tau: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        // variables h (d of them) and u; h·a_j - u·ld_j (= 0 | <= -1), u >= 1
        let mut cons = Vec::new();
        for j in 0..n {
            let mut c: Vec<Rational> = (0..d).map(|r| Rational::from_integer(a.get(r, j).clone())).collect();
            c.push(-ld[j].clone());
            if tau.contains(&j) {
                cons.push(Ineq { coeffs: c, rhs: Rational::zero(), eq: true });
            } else {
                cons.push(Ineq { coeffs: c.iter().map(|x| -x).collect(), rhs: Rational::one(), eq: false });
            }
        }
        let mut u = vec![Rational::zero(); d + 1];
        u[d] = Rational::one();
        cons.push(Ineq { coeffs: u, rhs: Rational::one(), eq: false });
        if fm_feasible(d + 1, cons) {
            let dim = rank_oracle(&tau.iter().map(|&j| a.column(j)).collect::<Vec<_>>()) as isize - 1;
            out.push((tau, dim));
        }
    }
    out.sort();
    out
}

// ---------- integer linear algebra by minors ----------

pub fn det_int(m: &[Vec<BigInt>]) -> BigInt {
    let k = m.len();
    if k == 0 {
        return BigInt::one();
    }
    if k == 1 {
        return m[0][0].clone();
    }
    let mut total = BigInt::zero();
    for c in 0..k {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(i, _)| *i != c).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][c] * det_int(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// gcd of all k×k minors of the matrix with the given columns.
pub fn minor_gcd(cols: &[Vec<BigInt>], k: usize) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    let rows = cols.first().map_or(0, |c| c.len());
    let mut g = BigInt::zero();
    for rs in subsets(rows, k) {
        for cs in subsets(cols.len(), k) {
            let m: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| cols[c][r].clone()).collect()).collect();
            g = g.gcd(&det_int(&m));
        }
    }
    g
}

pub fn rank_oracle(cols: &[Vec<BigInt>]) -> usize {
    let rows = cols.first().map_or(0, |c| c.len());
    (1..=rows.min(cols.len())).rev().find(|&k| !minor_gcd(cols, k).is_zero()).unwrap_or(0)
}

/// Invariant factors as ratios of determinantal divisors.
pub fn invariant_factors_oracle(cols: &[Vec<BigInt>]) -> Vec<BigInt> {
    let r = rank_oracle(cols);
    (1..=r).map(|k| minor_gcd(cols, k) / minor_gcd(cols, k - 1)).collect()
}

/// Is `v` a sum of at most `max_terms` columns?
pub fn naive_member(a: &IntMatrix, v: &[BigInt], max_terms: usize) -> bool {
    let cols = a.columns();
    let mut frontier = vec![vec![BigInt::zero(); a.rows()]];
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..=max_terms {
        if frontier.iter().any(|p| p.as_slice() == v) {
            return true;
        }
        let mut next = Vec::new();
        for p in &frontier {
            for c in &cols {
                let s: Vec<BigInt> = p.iter().zip(c).map(|(x, y)| x + y).collect();
                if seen.insert(s.clone()) {
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    false
}

/// Twice the area of the convex hull of 2-D points (monotone chain + shoelace).
pub fn shoelace_double_area(points: &[(Rational, Rational)]) -> Rational {
    let mut p = points.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return Rational::zero();
    }
    let cross = |o: &(Rational, Rational), a: &(Rational, Rational), b: &(Rational, Rational)| {
        (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
    };
    let mut hull: Vec<(Rational, Rational)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(Rational, Rational)>> =
            if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for pt in iter {
            while hull.len() >= start + 2 && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], pt).is_positive() {
                hull.pop();
            }
            hull.push(pt.clone());
        }
        hull.pop();
    }
    let mut s = Rational::zero();
    for i in 0..hull.len() {
        let (a, b) = (&hull[i], &hull[(i + 1) % hull.len()]);
        s += &a.0 * &b.1 - &a.1 * &b.0;
    }
    s.abs()
}
