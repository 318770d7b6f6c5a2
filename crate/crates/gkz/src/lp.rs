//! Exact linear-programming feasibility by a phase-one simplex with Bland's rule.

use num_rational::BigRational;
use num_traits::{Signed, Zero, One};

use crate::linalg::QVec;

/// A linear constraint `coeffs · x (>= | =) rhs` on free variables.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: QVec,
    pub rhs: BigRational,
    pub equality: bool,
}

impl Constraint {
    pub fn ge(coeffs: QVec, rhs: BigRational) -> Self {
        Constraint { coeffs, rhs, equality: false }
    }

    pub fn eq(coeffs: QVec, rhs: BigRational) -> Self {
        Constraint { coeffs, rhs, equality: true }
    }
}

/// Find some `x ∈ Q^nvars` satisfying all constraints, or `None` if infeasible.
pub fn feasible_point(nvars: usize, constraints: &[Constraint]) -> Option<QVec> {
    let m = constraints.len();
    if m == 0 {
        return Some(vec![BigRational::zero(); nvars]);
    }
    let n_slack = constraints.iter().filter(|c| !c.equality).count();
    // columns: x+ (nvars), x- (nvars), slacks, artificials (m), then rhs
    let n_struct = 2 * nvars + n_slack;
    let ncols = n_struct + m;
    let mut tab: Vec<QVec> = Vec::with_capacity(m);
    let mut slack_col = 2 * nvars;
    for (i, c) in constraints.iter().enumerate() {
        let mut row = vec![BigRational::zero(); ncols + 1];
        for k in 0..nvars {
            row[k] = c.coeffs[k].clone();
            row[nvars + k] = -c.coeffs[k].clone();
        }
        if !c.equality {
            row[slack_col] = -BigRational::one();
            slack_col += 1;
        }
        row[ncols] = c.rhs.clone();
        if row[ncols].is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[n_struct + i] = BigRational::one();
        tab.push(row);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| n_struct + i).collect();
    // objective: minimise the sum of artificials; reduced costs of structural columns
    let mut cost = vec![BigRational::zero(); ncols + 1];
    for row in &tab {
        for k in 0..n_struct {
            cost[k] -= &row[k];
        }
        cost[ncols] -= &row[ncols];
    }
    loop {
        let Some(enter) = (0..ncols).find(|&k| cost[k].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for r in 0..m {
            if !tab[r][enter].is_positive() {
                continue;
            }
            let ratio = &tab[r][ncols] / &tab[r][enter];
            match leave {
                None => leave = Some(r),
                Some(l) => {
                    let lr = &tab[l][ncols] / &tab[l][enter];
                    if ratio < lr || (ratio == lr && basis[r] < basis[l]) {
                        leave = Some(r);
                    }
                }
            }
        }
        let Some(l) = leave else {
            // unbounded below cannot happen for a sum of nonnegative artificials
            break;
        };
        pivot(&mut tab, &mut cost, l, enter);
        basis[l] = enter;
    }
    if !cost[ncols].is_zero() {
        return None;
    }
    let mut vals = vec![BigRational::zero(); ncols];
    for (r, &b) in basis.iter().enumerate() {
        vals[b] = tab[r][ncols].clone();
    }
    let x: QVec = (0..nvars).map(|k| &vals[k] - &vals[nvars + k]).collect();
    debug_assert!(constraints.iter().all(|c| satisfies(c, &x)));
    Some(x)
}

fn pivot(tab: &mut [QVec], cost: &mut QVec, r: usize, c: usize) {
    let inv = BigRational::one() / &tab[r][c];
    for x in tab[r].iter_mut() {
        *x *= &inv;
    }
    let prow = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (x, p) in row.iter_mut().zip(&prow) {
            *x -= &f * p;
        }
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        for (x, p) in cost.iter_mut().zip(&prow) {
            *x -= &f * p;
        }
    }
}

pub fn satisfies(c: &Constraint, x: &[BigRational]) -> bool {
    let lhs = crate::linalg::dot(&c.coeffs, x);
    if c.equality {
        lhs == c.rhs
    } else {
        lhs >= c.rhs
    }
}
