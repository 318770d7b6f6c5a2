//! Integer matrices and lattices: Hermite and Smith normal forms, indices,
//! saturation and coset enumeration.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{GkzError, Result};
use crate::linalg::{self, QVec};

/// A dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(GkzError::Dimension(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(GkzError::Dimension("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|x| x.iter().cloned().map(Into::into)).collect();
        Self::new(r, c, data)
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Result<Self> {
        if cols.iter().any(|c| c.len() != rows) {
            return Err(GkzError::Dimension("column length mismatch".into()));
        }
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<BigInt> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn column_q(&self, c: usize) -> QVec {
        linalg::to_q(&self.column(c))
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    /// Submatrix on the given column indices, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = idx.iter().map(|&j| self.column(j)).collect();
        IntMatrix::from_columns(self.rows, &cols).expect("consistent shape")
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(GkzError::Dimension("product shape mismatch".into()));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(BigInt::zero(), |acc, k| acc + self.get(i, k) * &v[k]))
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Exact determinant of a square matrix.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let rows: Vec<QVec> = self.to_rows().iter().map(|r| linalg::to_q(r)).collect();
        linalg::det(&rows).to_integer()
    }

    pub fn rank(&self) -> usize {
        let cols: Vec<QVec> = (0..self.cols).map(|c| self.column_q(c)).collect();
        linalg::rank(&cols)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let t = self.get(src, c) * f;
            self.data[dst * self.cols + c] += t;
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let t = self.get(r, src) * f;
            self.data[r * self.cols + dst] += t;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c).clone();
            self.set(r, c, v);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self.get(r, c).clone();
            self.set(r, c, v);
        }
    }
}

/// Result of [`smith_normal_form`]: `u * m * v == s`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `u`, tracked alongside it.
    pub u_inv: IntMatrix,
}

impl Smith {
    /// Nonzero diagonal entries of `s`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (r, c) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    // Row operations are mirrored on u (left) and on u_inv (right, inverted).
    let row_add = |s: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, dst: usize, src: usize, f: &BigInt| {
        s.add_row(dst, src, f);
        u.add_row(dst, src, f);
        ui.add_col(src, dst, &-f.clone());
    };

    for t in 0..r.min(c) {
        loop {
            // smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = s.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < s.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(u, s, v, u_inv);
            };
            s.swap_rows(t, bi);
            u.swap_rows(t, bi);
            u_inv.swap_cols(t, bi);
            s.swap_cols(t, bj);
            v.swap_cols(t, bj);

            let mut dirty = false;
            for i in t + 1..r {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = s.get(i, t).div_floor(s.get(t, t));
                row_add(&mut s, &mut u, &mut u_inv, i, t, &-q);
                if !s.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..c {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = s.get(t, j).div_floor(s.get(t, t));
                s.add_col(j, t, &-q.clone());
                v.add_col(j, t, &-q);
                if !s.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let p = s.get(t, t).clone();
            let mut fixed = false;
            'outer: for i in t + 1..r {
                for j in t + 1..c {
                    if !s.get(i, j).is_multiple_of(&p) {
                        row_add(&mut s, &mut u, &mut u_inv, t, i, &BigInt::one());
                        fixed = true;
                        break 'outer;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    finish(u, s, v, u_inv)
}

fn finish(u: IntMatrix, s: IntMatrix, v: IntMatrix, u_inv: IntMatrix) -> Smith {
    Smith { u, s, v, u_inv }
}

/// Finite or infinite lattice index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            LatticeIndex::Finite(k) => Some(k),
            LatticeIndex::Infinite => None,
        }
    }
}

/// A subgroup of `Z^d`, stored by a canonical column Hermite basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    ambient: usize,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn new(ambient: usize, generators: &[Vec<BigInt>]) -> Result<Self> {
        if generators.iter().any(|g| g.len() != ambient) {
            return Err(GkzError::Dimension("generator length differs from ambient rank".into()));
        }
        let (basis, pivots) = hermite_basis(ambient, generators);
        Ok(Lattice { ambient, basis, pivots })
    }

    pub fn full(d: usize) -> Self {
        let gens: Vec<Vec<BigInt>> = (0..d)
            .map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Lattice::new(d, &gens).expect("identity generators")
    }

    pub fn zero(d: usize) -> Self {
        Lattice { ambient: d, basis: Vec::new(), pivots: Vec::new() }
    }

    /// Lattice spanned by the selected columns of a matrix.
    pub fn from_columns(m: &IntMatrix, idx: &[usize]) -> Self {
        let gens: Vec<Vec<BigInt>> = idx.iter().map(|&j| m.column(j)).collect();
        Lattice::new(m.rows(), &gens).expect("columns have matrix height")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Canonical basis vectors (column Hermite normal form).
    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn basis_q(&self) -> Vec<QVec> {
        self.basis.iter().map(|b| linalg::to_q(b)).collect()
    }

    /// Integer coordinates of `v` in the canonical basis, if `v` belongs to the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient {
            return None;
        }
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (k, b) in self.basis.iter().enumerate() {
            let p = self.pivots[k];
            let (q, r) = rest[p].div_rem(&b[p]);
            if !r.is_zero() {
                return None;
            }
            for i in 0..self.ambient {
                rest[i] -= &q * &b[i];
            }
            coords.push(q);
        }
        if rest.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// True if the rational vector lies in the rational span of the lattice.
    pub fn spans_rational(&self, v: &[BigRational]) -> bool {
        linalg::coords_in_span(&self.basis_q(), v).is_some()
    }

    /// Canonical representative of `v` modulo this lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = v.to_vec();
        for (k, b) in self.basis.iter().enumerate() {
            let p = self.pivots[k];
            let q = out[p].div_floor(&b[p]);
            if q.is_zero() {
                continue;
            }
            for i in 0..self.ambient {
                out[i] -= &q * &b[i];
            }
        }
        out
    }

    /// `[self : sub]`.
    pub fn index_of(&self, sub: &Lattice) -> Result<LatticeIndex> {
        lattice_index(self, sub)
    }

    /// `Z^d ∩ Q·self`.
    pub fn saturate(&self) -> Lattice {
        saturate(self)
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Lattice::new(self.ambient, &gens).expect("same ambient")
    }
}

/// Column Hermite basis: pivot rows strictly increase, pivots are positive and
/// entries of earlier columns in a pivot row are reduced into `[0, pivot)`.
fn hermite_basis(d: usize, gens: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut cols: Vec<Vec<BigInt>> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut pivots = Vec::new();
    for row in 0..d {
        // gcd-reduce the remaining columns at this row into a single column
        loop {
            let nz: Vec<usize> = (0..cols.len()).filter(|&j| !cols[j][row].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let m = *nz.iter().min_by_key(|&&j| cols[j][row].abs()).unwrap();
            let pivot = cols[m].clone();
            for &j in &nz {
                if j == m {
                    continue;
                }
                let q = cols[j][row].div_floor(&pivot[row]);
                for i in 0..d {
                    cols[j][i] -= &q * &pivot[i];
                }
            }
        }
        if let Some(j) = (0..cols.len()).find(|&j| !cols[j][row].is_zero()) {
            let mut p = cols.remove(j);
            if p[row].is_negative() {
                for x in p.iter_mut() {
                    *x = -x.clone();
                }
            }
            for b in basis.iter_mut() {
                let q = b[row].div_floor(&p[row]);
                if !q.is_zero() {
                    for i in 0..d {
                        b[i] -= &q * &p[i];
                    }
                }
            }
            basis.push(p);
            pivots.push(row);
        }
        cols.retain(|c| c.iter().any(|x| !x.is_zero()));
    }
    (basis, pivots)
}

/// `[superset : subset]`.
pub fn lattice_index(superset: &Lattice, subset: &Lattice) -> Result<LatticeIndex> {
    if superset.ambient != subset.ambient || !superset.contains_lattice(subset) {
        return Err(GkzError::NotASublattice);
    }
    if superset.rank() != subset.rank() {
        return Ok(LatticeIndex::Infinite);
    }
    let r = superset.rank();
    if r == 0 {
        return Ok(LatticeIndex::Finite(BigInt::one()));
    }
    let cols: Vec<Vec<BigInt>> =
        subset.basis.iter().map(|b| superset.coordinates(b).expect("contained")).collect();
    let m = IntMatrix::from_columns(r, &cols)?;
    Ok(LatticeIndex::Finite(m.det().abs()))
}

/// `Z^d ∩ Q·L` with its canonical basis.
pub fn saturate(l: &Lattice) -> Lattice {
    let r = l.rank();
    if r == 0 {
        return Lattice::zero(l.ambient);
    }
    let m = IntMatrix::from_columns(l.ambient, &l.basis).expect("basis shape");
    let snf = smith_normal_form(&m);
    let gens: Vec<Vec<BigInt>> = (0..r).map(|i| snf.u_inv.column(i)).collect();
    Lattice::new(l.ambient, &gens).expect("same ambient")
}

/// One representative per coset of `subset` in `superset`, taken from the Hermite
/// fundamental domain and listed in lexicographic order of their coordinates.
pub fn coset_reps(superset: &Lattice, subset: &Lattice) -> Result<Vec<Vec<BigInt>>> {
    match lattice_index(superset, subset)? {
        LatticeIndex::Infinite => return Err(GkzError::InfiniteIndex),
        LatticeIndex::Finite(_) => {}
    }
    let r = superset.rank();
    if r == 0 {
        return Ok(vec![vec![BigInt::zero(); superset.ambient]]);
    }
    let cols: Vec<Vec<BigInt>> =
        subset.basis.iter().map(|b| superset.coordinates(b).expect("contained")).collect();
    let (h, pivots) = hermite_basis(r, &cols);
    // full rank in coordinates, so the pivots are rows 0..r
    debug_assert_eq!(pivots, (0..r).collect::<Vec<_>>());
    let bounds: Vec<BigInt> = (0..r).map(|i| h[i][i].clone()).collect();
    let mut out = Vec::new();
    let mut c = vec![BigInt::zero(); r];
    loop {
        let mut v = vec![BigInt::zero(); superset.ambient];
        for (k, ck) in c.iter().enumerate() {
            for i in 0..superset.ambient {
                v[i] += ck * &superset.basis[k][i];
            }
        }
        out.push(v);
        // odometer over 0 <= c_i < bounds_i, last coordinate fastest
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            c[i] += 1;
            if c[i] < bounds[i] {
                break;
            }
            c[i] = BigInt::zero();
        }
    }
}

/// Is `v` an integer combination of the columns of `m`?
pub fn in_integer_image(m: &IntMatrix, v: &[BigInt]) -> bool {
    let idx: Vec<usize> = (0..m.cols()).collect();
    Lattice::from_columns(m, &idx).contains(v)
}

/// Integer point `p` with `beta - p ∈ Q·l`, if one exists.
pub fn integral_point_mod_span(l: &Lattice, beta: &[BigRational]) -> Option<Vec<BigInt>> {
    let d = l.ambient;
    let sat = saturate(l);
    let r = sat.rank();
    if r == 0 {
        return if beta.iter().all(|x| x.is_integer()) {
            Some(beta.iter().map(|x| x.to_integer()).collect())
        } else {
            None
        };
    }
    let m = IntMatrix::from_columns(d, sat.basis()).expect("basis shape");
    let snf = smith_normal_form(&m);
    // u maps the saturated span onto the first r coordinates
    let ub: Vec<BigRational> = (0..d)
        .map(|i| (0..d).fold(BigRational::zero(), |acc, k| acc + BigRational::from_integer(snf.u.get(i, k).clone()) * &beta[k]))
        .collect();
    if ub[r..].iter().any(|x| !x.is_integer()) {
        return None;
    }
    let mut y = vec![BigInt::zero(); d];
    for i in r..d {
        y[i] = ub[i].to_integer();
    }
    Some(snf.u_inv.mul_vec(&y))
}
