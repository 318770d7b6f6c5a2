//! Dense exact rational linear algebra on small matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type QVec = Vec<BigRational>;

pub fn to_q(v: &[BigInt]) -> QVec {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[BigRational], b: &[BigRational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_zero_vec(a: &[BigRational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Determinant of a square matrix given by rows.
pub fn det(m: &[QVec]) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut a: Vec<QVec> = m.to_vec();
    let mut sign = BigRational::one();
    let mut acc = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            a.swap(p, col);
            sign = -sign;
        }
        let piv = a[col][col].clone();
        acc *= &piv;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &piv;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    sign * acc
}

/// Row-reduced echelon form; returns the pivot columns.
pub fn rref(a: &mut [QVec]) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = BigRational::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..cols {
                    let t = &f * &a[r][k];
                    a[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a family of vectors.
pub fn rank(vectors: &[QVec]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut m = vectors.to_vec();
    rref(&mut m).len()
}

/// Indices of a maximal linearly independent subfamily, chosen greedily in order.
pub fn independent_subset(vectors: &[QVec]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<QVec> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        basis.push(v.clone());
        if rank(&basis) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    chosen
}

/// Some solution of `M x = b` where `M` is given by rows, if one exists.
pub fn solve(m: &[QVec], b: &[BigRational], nvars: usize) -> Option<QVec> {
    let mut aug: Vec<QVec> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&nvars) {
        return None;
    }
    let mut x = vec![BigRational::zero(); nvars];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][nvars].clone();
    }
    Some(x)
}

/// Coefficients expressing `v` in terms of the given vectors, if `v` lies in their span.
pub fn coords_in_span(vectors: &[QVec], v: &[BigRational]) -> Option<QVec> {
    let dim = v.len();
    let k = vectors.len();
    let rows: Vec<QVec> = (0..dim).map(|i| (0..k).map(|j| vectors[j][i].clone()).collect()).collect();
    solve(&rows, v, k)
}

/// Determinant of a square matrix whose columns are given.
pub fn det_cols(cols: &[QVec]) -> BigRational {
    let n = cols.len();
    let rows: Vec<QVec> = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    det(&rows)
}
