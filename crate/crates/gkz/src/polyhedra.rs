//! Exact polyhedral geometry: cone faces, facet descriptions, lattice volumes
//! and unions of polytopes.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{GkzError, Result};
use crate::lattice::{IntMatrix, Lattice};
use crate::linalg::{self, QVec};
use crate::lp::{self, Constraint};
use crate::scalar::OrderedField;

/// A sorted set of column indices (0-based).
pub type FaceSet = Vec<usize>;

pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

pub fn intersect(a: &[usize], b: &[usize]) -> FaceSet {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

pub fn union(a: &[usize], b: &[usize]) -> FaceSet {
    let s: BTreeSet<usize> = a.iter().chain(b).copied().collect();
    s.into_iter().collect()
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Determinant of the square matrix whose columns are the generators `cols`,
/// where generator `k` is `(weights[k], rest[0][k], rest[1][k], ...)`.
/// Expanded along the weight row, so the infinitesimal degree never grows.
pub fn weighted_det<S: OrderedField>(weights: &[S], rest: &[QVec], cols: &[usize]) -> S {
    let dim = rest.len() + 1;
    debug_assert_eq!(cols.len(), dim);
    let mut acc = S::zero();
    for (pos, &k) in cols.iter().enumerate() {
        if weights[k].is_zero() {
            continue;
        }
        let others: Vec<usize> = cols.iter().enumerate().filter(|(p, _)| *p != pos).map(|(_, &c)| c).collect();
        let minor: Vec<QVec> = rest.iter().map(|row| others.iter().map(|&c| row[c].clone()).collect()).collect();
        let m = linalg::det(&minor);
        if m.is_zero() {
            continue;
        }
        let term = weights[k].scale(&m);
        if pos % 2 == 0 {
            acc = acc + term;
        } else {
            acc = acc - term;
        }
    }
    acc
}

/// Index sets of the facets of the full-dimensional pointed cone spanned by
/// the generators `(weights[k], rest[.][k])`.
pub fn cone_facet_supports<S: OrderedField>(weights: &[S], rest: &[QVec]) -> Vec<FaceSet> {
    let n = weights.len();
    let dim = rest.len() + 1;
    let mut found: BTreeSet<FaceSet> = BTreeSet::new();
    for sub in combinations(n, dim - 1) {
        let mut pos = false;
        let mut neg = false;
        let mut zeros = Vec::new();
        for k in 0..n {
            let mut cols = sub.clone();
            cols.push(k);
            let s = if sub.contains(&k) { S::zero() } else { weighted_det(weights, rest, &cols) };
            match s.signum_ord() {
                std::cmp::Ordering::Greater => pos = true,
                std::cmp::Ordering::Less => neg = true,
                std::cmp::Ordering::Equal => zeros.push(k),
            }
            if pos && neg {
                break;
            }
        }
        if (pos || neg) && !(pos && neg) {
            found.insert(zeros);
        }
    }
    found.into_iter().collect()
}

/// Closure of a family of facet supports under intersection, together with the full set.
pub fn face_closure(facets: &[FaceSet], n: usize) -> BTreeSet<FaceSet> {
    let mut faces: BTreeSet<FaceSet> = facets.iter().cloned().collect();
    faces.insert((0..n).collect());
    loop {
        let list: Vec<FaceSet> = faces.iter().cloned().collect();
        let mut added = false;
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                let x = intersect(&list[i], &list[j]);
                if faces.insert(x) {
                    added = true;
                }
            }
        }
        if !added {
            return faces;
        }
    }
}

fn matrix_rows_q(a: &IntMatrix) -> Vec<QVec> {
    a.to_rows().iter().map(|r| linalg::to_q(r)).collect()
}

/// A rational `h` with `h·a_i >= 1` for every column, certifying a pointed cone.
pub fn pointedness_certificate(a: &IntMatrix) -> Result<QVec> {
    let d = a.rows();
    let cols: Vec<QVec> = (0..a.cols()).map(|j| a.column_q(j)).collect();
    for i in 0..d {
        for sign in [1i64, -1] {
            let mut h = vec![BigRational::zero(); d];
            h[i] = BigRational::from_integer(BigInt::from(sign));
            let vals: Vec<BigRational> = cols.iter().map(|c| linalg::dot(&h, c)).collect();
            if vals.iter().all(|v| v.is_positive()) {
                let min = vals.iter().min().cloned().unwrap_or_else(BigRational::one);
                return Ok(h.iter().map(|x| x / &min).collect());
            }
        }
    }
    let cons: Vec<Constraint> = cols.iter().map(|c| Constraint::ge(c.clone(), BigRational::one())).collect();
    lp::feasible_point(d, &cons).ok_or(GkzError::NotPointed)
}

/// A functional vanishing on the columns of `g` and `>= 1` on every other column,
/// which exists exactly when `g` is a face.
pub fn face_functional(a: &IntMatrix, g: &[usize]) -> Option<QVec> {
    let d = a.rows();
    let cons: Vec<Constraint> = (0..a.cols())
        .map(|j| {
            let c = a.column_q(j);
            if g.binary_search(&j).is_ok() {
                Constraint::eq(c, BigRational::zero())
            } else {
                Constraint::ge(c, BigRational::one())
            }
        })
        .collect();
    lp::feasible_point(d, &cons)
}

/// A face of the cone over the columns, with `dim` the dimension of its span.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face {
    pub dim: usize,
    pub indices: FaceSet,
}

/// All faces of the cone spanned by the columns of `a`, ordered by dimension.
pub fn cone_face_lattice(a: &IntMatrix) -> Result<Vec<Face>> {
    let d = a.rows();
    let n = a.cols();
    pointedness_certificate(a)?;
    if a.rank() != d {
        return Err(GkzError::Dimension(format!("columns span rank {} < {}", a.rank(), d)));
    }
    let rows = matrix_rows_q(a);
    let facets = cone_facet_supports(&rows[0], &rows[1..]);
    let mut faces: Vec<Face> = face_closure(&facets, n)
        .into_iter()
        .map(|idx| Face { dim: a.select_columns(&idx).rank(), indices: idx })
        .collect();
    if !faces.iter().any(|f| f.indices.is_empty()) {
        faces.push(Face { dim: 0, indices: Vec::new() });
    }
    faces.sort();
    Ok(faces)
}

/// A polytope `conv(points) + cone(rays)` in `Q^ambient`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    ambient: usize,
    points: Vec<QVec>,
    rays: Vec<QVec>,
}

impl Polytope {
    pub fn new(ambient: usize, points: Vec<QVec>, rays: Vec<QVec>) -> Result<Self> {
        if points.iter().chain(&rays).any(|p| p.len() != ambient) {
            return Err(GkzError::Dimension("point length differs from ambient dimension".into()));
        }
        let mut uniq: Vec<QVec> = Vec::new();
        for p in points {
            if !uniq.contains(&p) {
                uniq.push(p);
            }
        }
        let rays: Vec<QVec> = rays.into_iter().filter(|r| !linalg::is_zero_vec(r)).collect();
        Ok(Polytope { ambient, points: uniq, rays })
    }

    pub fn from_int_points(ambient: usize, points: &[Vec<BigInt>]) -> Result<Self> {
        Self::new(ambient, points.iter().map(|p| linalg::to_q(p)).collect(), Vec::new())
    }

    /// `conv(columns of a indexed by idx, optionally with the origin)`.
    pub fn from_columns(a: &IntMatrix, idx: &[usize], with_origin: bool) -> Self {
        let mut pts: Vec<QVec> = Vec::new();
        if with_origin {
            pts.push(vec![BigRational::zero(); a.rows()]);
        }
        pts.extend(idx.iter().map(|&j| a.column_q(j)));
        Polytope::new(a.rows(), pts, Vec::new()).expect("matrix columns")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn points(&self) -> &[QVec] {
        &self.points
    }

    pub fn rays(&self) -> &[QVec] {
        &self.rays
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Dimension of the affine hull (`-1` encoded as `None` for the empty set).
    pub fn affine_dim(&self) -> Option<usize> {
        let p0 = self.points.first()?;
        let dirs: Vec<QVec> =
            self.points.iter().map(|p| linalg::sub(p, p0)).chain(self.rays.iter().cloned()).collect();
        Some(linalg::rank(&dirs))
    }
}

/// A facet inequality `normal · x <= offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub normal: QVec,
    pub offset: BigRational,
    /// Indices of the generating points lying on the facet.
    pub support: Vec<usize>,
    /// Indices of the rays parallel to the facet.
    pub ray_support: Vec<usize>,
}

impl Hyperplane {
    /// The same hyperplane written as `h · x = 1`, when it misses the origin.
    pub fn unit_form(&self) -> Option<QVec> {
        if self.offset.is_zero() {
            return None;
        }
        Some(self.normal.iter().map(|x| x / &self.offset).collect())
    }
}

/// Affine frame of a point configuration: base point, direction basis and
/// coordinates of every point and ray in that basis.
struct AffineFrame {
    base: QVec,
    basis: Vec<QVec>,
    point_coords: Vec<QVec>,
    ray_coords: Vec<QVec>,
}

fn affine_frame(points: &[QVec], rays: &[QVec]) -> AffineFrame {
    let base = points[0].clone();
    let dirs: Vec<QVec> = points.iter().map(|p| linalg::sub(p, &base)).chain(rays.iter().cloned()).collect();
    let basis: Vec<QVec> = linalg::independent_subset(&dirs).into_iter().map(|i| dirs[i].clone()).collect();
    let coord = |v: &QVec| linalg::coords_in_span(&basis, v).expect("in affine span");
    let point_coords = points.iter().map(|p| coord(&linalg::sub(p, &base))).collect();
    let ray_coords = rays.iter().map(coord).collect();
    AffineFrame { base, basis, point_coords, ray_coords }
}

/// Cofactor normal `n` with `n·x = det[v_1, ..., v_{D-1}, x]`.
fn cofactor_normal(vs: &[QVec], dim: usize) -> QVec {
    (0..dim)
        .map(|c| {
            let minor: Vec<QVec> = (0..dim)
                .filter(|&r| r != c)
                .map(|r| vs.iter().map(|v| v[r].clone()).collect())
                .collect();
            let m = linalg::det(&minor);
            if (c + dim - 1).is_multiple_of(2) {
                m
            } else {
                -m
            }
        })
        .collect()
}

fn primitive_scale(normal: &QVec, offset: &BigRational) -> (QVec, BigRational) {
    let mut l = BigInt::one();
    for x in normal.iter() {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = normal.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return (normal.clone(), offset.clone());
    }
    let f = BigRational::new(l, g);
    (normal.iter().map(|x| x * &f).collect(), offset * &f)
}

/// Irredundant facet description of a polytope inside its affine span.
pub fn facet_hyperplanes(p: &Polytope) -> Vec<Hyperplane> {
    if p.points.is_empty() {
        return Vec::new();
    }
    let frame = affine_frame(&p.points, &p.rays);
    let k = frame.basis.len();
    if k == 0 {
        return Vec::new();
    }
    let np = p.points.len();
    let weights: Vec<BigRational> = (0..np)
        .map(|_| BigRational::one())
        .chain(p.rays.iter().map(|_| BigRational::zero()))
        .collect();
    let gens: Vec<QVec> = frame.point_coords.iter().chain(&frame.ray_coords).cloned().collect();
    let rest: Vec<QVec> = (0..k).map(|i| gens.iter().map(|g| g[i].clone()).collect()).collect();
    let homog = |j: usize| -> QVec {
        let mut v = vec![weights[j].clone()];
        v.extend(gens[j].iter().cloned());
        v
    };
    let mut out = Vec::new();
    for support in cone_facet_supports(&weights, &rest) {
        let vs: Vec<QVec> = support.iter().map(|&j| homog(j)).collect();
        let chosen: Vec<QVec> = linalg::independent_subset(&vs).into_iter().map(|i| vs[i].clone()).collect();
        let mut nu = cofactor_normal(&chosen, k + 1);
        let orient = (0..gens.len()).map(|j| linalg::dot(&nu, &homog(j))).find(|x| !x.is_zero());
        if orient.is_some_and(|x| x.is_negative()) {
            nu = nu.into_iter().map(|x| -x).collect();
        }
        if nu[1..].iter().all(|x| x.is_zero()) {
            // the face at infinity of an unbounded polyhedron
            continue;
        }
        // nu0 + nu'·y >= 0 on the polytope, i.e. (-nu')·y <= nu0
        let target: QVec = nu[1..].iter().map(|x| -x.clone()).collect();
        let basis_rows: Vec<QVec> = frame.basis.clone();
        let normal = linalg::solve(&basis_rows, &target, p.ambient).expect("independent basis");
        let offset = nu[0].clone() + linalg::dot(&normal, &frame.base);
        let (normal, offset) = primitive_scale(&normal, &offset);
        let pts: Vec<usize> = support.iter().copied().filter(|&j| j < np).collect();
        let rays: Vec<usize> = support.iter().copied().filter(|&j| j >= np).map(|j| j - np).collect();
        out.push(Hyperplane { normal, offset, support: pts, ray_support: rays });
    }
    out.sort_by(|a, b| a.support.cmp(&b.support).then(a.ray_support.cmp(&b.ray_support)));
    out
}

/// How a point configuration is cut into simplices for volume computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triangulation {
    /// Insert points one at a time, coning each over the visible boundary.
    Placing,
    /// Cone the first point over a recursive triangulation of the facets it misses.
    Pulling,
}

fn simplex_abs_det(points: &[QVec], simplex: &[usize]) -> BigRational {
    let q0 = &points[simplex[0]];
    let cols: Vec<QVec> = simplex[1..].iter().map(|&i| linalg::sub(&points[i], q0)).collect();
    linalg::det_cols(&cols).abs()
}

fn orientation(points: &[QVec], facet: &[usize], p: &QVec) -> std::cmp::Ordering {
    let q0 = &points[facet[0]];
    let mut cols: Vec<QVec> = facet[1..].iter().map(|&i| linalg::sub(&points[i], q0)).collect();
    cols.push(linalg::sub(p, q0));
    linalg::det_cols(&cols).cmp(&BigRational::zero())
}

fn placing_triangulation(points: &[QVec], dim: usize) -> Vec<Vec<usize>> {
    let mut init = vec![0usize];
    let mut dirs: Vec<QVec> = Vec::new();
    for i in 1..points.len() {
        if init.len() == dim + 1 {
            break;
        }
        dirs.push(linalg::sub(&points[i], &points[0]));
        if linalg::rank(&dirs) == dirs.len() {
            init.push(i);
        } else {
            dirs.pop();
        }
    }
    if init.len() < dim + 1 {
        return Vec::new();
    }
    let mut simplices = vec![init.clone()];
    for i in 0..points.len() {
        if init.contains(&i) {
            continue;
        }
        let mut boundary: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
        for s in &simplices {
            for (pos, &v) in s.iter().enumerate() {
                let mut f: Vec<usize> = s.iter().enumerate().filter(|(q, _)| *q != pos).map(|(_, &x)| x).collect();
                f.sort_unstable();
                boundary.entry(f).and_modify(|e| e.0 += 1).or_insert((1, v));
            }
        }
        let mut new = Vec::new();
        for (f, (count, opp)) in boundary {
            if count != 1 {
                continue;
            }
            let sp = orientation(points, &f, &points[i]);
            let so = orientation(points, &f, &points[opp]);
            if sp != std::cmp::Ordering::Equal && so != std::cmp::Ordering::Equal && sp != so {
                let mut s = f.clone();
                s.push(i);
                new.push(s);
            }
        }
        simplices.extend(new);
    }
    simplices
}

fn pulling_triangulation(points: &[QVec], idx: &[usize]) -> Vec<Vec<usize>> {
    let local: Vec<QVec> = idx.iter().map(|&i| points[i].clone()).collect();
    let frame = affine_frame(&local, &[]);
    let k = frame.basis.len();
    if k == 0 {
        return vec![vec![idx[0]]];
    }
    let weights: Vec<BigRational> = vec![BigRational::one(); local.len()];
    let rest: Vec<QVec> = (0..k).map(|i| frame.point_coords.iter().map(|c| c[i].clone()).collect()).collect();
    let mut out = Vec::new();
    for support in cone_facet_supports(&weights, &rest) {
        if support.contains(&0) {
            continue;
        }
        let sub: Vec<usize> = support.iter().map(|&j| idx[j]).collect();
        for mut s in pulling_triangulation(points, &sub) {
            s.insert(0, idx[0]);
            out.push(s);
        }
    }
    out
}

/// Full-dimensional simplices (as point indices) of a triangulation of
/// `conv(points)` in `Q^dim`; empty when the hull is lower-dimensional.
pub fn triangulate(points: &[QVec], dim: usize, strategy: Triangulation) -> Vec<Vec<usize>> {
    if points.is_empty() {
        return Vec::new();
    }
    let p0 = &points[0];
    let dirs: Vec<QVec> = points.iter().map(|p| linalg::sub(p, p0)).collect();
    if linalg::rank(&dirs) < dim {
        return Vec::new();
    }
    match strategy {
        Triangulation::Placing => placing_triangulation(points, dim),
        Triangulation::Pulling => pulling_triangulation(points, &(0..points.len()).collect::<Vec<_>>()),
    }
}

/// Coordinates of the polytope's points in a basis of the lattice.
fn lattice_coords(p: &Polytope, lattice: &Lattice) -> Result<Vec<QVec>> {
    let basis = lattice.basis_q();
    p.points
        .iter()
        .map(|x| {
            linalg::coords_in_span(&basis, x)
                .ok_or_else(|| GkzError::Dimension("polytope leaves the span of the lattice".into()))
        })
        .collect()
}

/// Normalized volume of `p` with respect to `lattice` (unit simplex = 1).
pub fn normalized_volume(p: &Polytope, lattice: &Lattice) -> Result<BigRational> {
    normalized_volume_with(p, lattice, Triangulation::Placing)
}

pub fn normalized_volume_with(p: &Polytope, lattice: &Lattice, strategy: Triangulation) -> Result<BigRational> {
    if !p.is_bounded() {
        return Err(GkzError::UnboundedPolytope);
    }
    if p.is_empty() {
        return Ok(BigRational::zero());
    }
    let coords = lattice_coords(p, lattice)?;
    let r = lattice.rank();
    if r == 0 {
        return Ok(BigRational::one());
    }
    let simplices = triangulate(&coords, r, strategy);
    Ok(simplices.iter().fold(BigRational::zero(), |acc, s| acc + simplex_abs_det(&coords, s)))
}

/// Options for [`union_volume`].
#[derive(Clone, Debug)]
pub struct UnionOptions {
    /// Largest subfamily size used by the inclusion–exclusion fallback.
    pub max_depth: usize,
}

impl Default for UnionOptions {
    fn default() -> Self {
        UnionOptions { max_depth: 3 }
    }
}

/// Facet inequalities of a full-dimensional bounded polytope given in coordinates.
fn h_rep(coords: &[QVec]) -> Vec<(QVec, BigRational)> {
    let dim = coords[0].len();
    let p = Polytope::new(dim, coords.to_vec(), Vec::new()).expect("consistent");
    facet_hyperplanes(&p).into_iter().map(|h| (h.normal, h.offset)).collect()
}

/// Do the interiors of the polytopes cut out by these inequality systems meet?
fn interiors_meet(systems: &[&Vec<(QVec, BigRational)>], dim: usize) -> bool {
    // -n·x + c·λ >= 1 for all facets, λ >= 0; x/λ is then a common interior point
    let mut cons = Vec::new();
    for sys in systems {
        for (n, c) in sys.iter() {
            let mut row: QVec = n.iter().map(|x| -x.clone()).collect();
            row.push(c.clone());
            cons.push(Constraint::ge(row, BigRational::one()));
        }
    }
    let mut lam = vec![BigRational::zero(); dim + 1];
    lam[dim] = BigRational::one();
    cons.push(Constraint::ge(lam, BigRational::zero()));
    lp::feasible_point(dim + 1, &cons).is_some()
}

fn intersection_volume(systems: &[&Vec<(QVec, BigRational)>], dim: usize) -> BigRational {
    let all: Vec<(QVec, BigRational)> = systems.iter().flat_map(|s| s.iter().cloned()).collect();
    let mut verts: Vec<QVec> = Vec::new();
    for sub in combinations(all.len(), dim) {
        let rows: Vec<QVec> = sub.iter().map(|&i| all[i].0.clone()).collect();
        if linalg::det(&rows).is_zero() {
            continue;
        }
        let rhs: QVec = sub.iter().map(|&i| all[i].1.clone()).collect();
        let x = linalg::solve(&rows, &rhs, dim).expect("nonsingular");
        if all.iter().all(|(n, c)| &linalg::dot(n, &x) <= c) && !verts.contains(&x) {
            verts.push(x);
        }
    }
    let simplices = triangulate(&verts, dim, Triangulation::Placing);
    simplices.iter().fold(BigRational::zero(), |acc, s| acc + simplex_abs_det(&verts, s))
}

/// Volume of `∪ (Δ_i \ C_i)` for pairs with `C_i ⊆ Δ_i`.
pub fn union_volume(pieces: &[(Polytope, Polytope)], lattice: &Lattice) -> Result<BigRational> {
    union_volume_with(pieces, lattice, &UnionOptions::default())
}

pub fn union_volume_with(pieces: &[(Polytope, Polytope)], lattice: &Lattice, opts: &UnionOptions) -> Result<BigRational> {
    let r = lattice.rank();
    let mut total = BigRational::zero();
    let mut full: Vec<Vec<(QVec, BigRational)>> = Vec::new();
    let mut carved = false;
    for (outer, inner) in pieces {
        let vo = normalized_volume_with(outer, lattice, Triangulation::Pulling)?;
        let vi = normalized_volume_with(inner, lattice, Triangulation::Pulling)?;
        if vi > vo {
            return Err(GkzError::Dimension("subtracted polytope is larger than its container".into()));
        }
        if vo.is_zero() {
            continue;
        }
        if !vi.is_zero() {
            carved = true;
        }
        total += vo - vi;
        full.push(h_rep(&lattice_coords(outer, lattice)?));
    }
    if r == 0 {
        return Ok(if pieces.iter().any(|(o, i)| !o.is_empty() && i.is_empty()) {
            BigRational::one()
        } else {
            BigRational::zero()
        });
    }
    let mut overlapping = false;
    'pairs: for i in 0..full.len() {
        for j in i + 1..full.len() {
            if interiors_meet(&[&full[i], &full[j]], r) {
                overlapping = true;
                break 'pairs;
            }
        }
    }
    if !overlapping {
        return Ok(total);
    }
    if carved {
        return Err(GkzError::OverlapUnresolved(
            "overlapping pieces with full-dimensional holes".into(),
        ));
    }
    // inclusion–exclusion over the outer polytopes
    let m = full.len();
    let mut vol = BigRational::zero();
    for size in 1..=m {
        let mut any_nonempty = false;
        for sub in combinations(m, size) {
            let sys: Vec<&Vec<(QVec, BigRational)>> = sub.iter().map(|&i| &full[i]).collect();
            if size > 1 && !interiors_meet(&sys, r) {
                continue;
            }
            any_nonempty = true;
            if size > opts.max_depth {
                return Err(GkzError::OverlapUnresolved(format!(
                    "{} pieces share interior points, depth limit is {}",
                    size, opts.max_depth
                )));
            }
            let v = intersection_volume(&sys, r);
            if size % 2 == 1 {
                vol += v;
            } else {
                vol -= v;
            }
        }
        if !any_nonempty {
            break;
        }
    }
    Ok(vol)
}
