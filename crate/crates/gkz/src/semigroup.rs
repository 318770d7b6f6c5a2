//! The affine semigroup of a matrix: membership, holes, ranking lattices and
//! the pair set built from them.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{GkzError, Result};
use crate::lattice::{self, IntMatrix, Lattice};
use crate::linalg::{self, QVec};
use crate::polyhedra::{self, is_subset, Face, FaceSet, Polytope};

/// Checks that the columns span a pointed cone and generate `Z^d`.
pub fn standing_hypotheses(a: &IntMatrix) -> Result<()> {
    polyhedra::pointedness_certificate(a)?;
    let d = a.rows();
    let snf = lattice::smith_normal_form(a);
    let factors = snf.invariant_factors();
    if factors.len() != d || factors.iter().any(|f| !f.is_one()) {
        let shown: Vec<String> = factors.iter().map(|f| f.to_string()).collect();
        return Err(GkzError::NotFullLattice(format!("({}) for rank {}", shown.join(", "), d)));
    }
    Ok(())
}

/// `β` given exactly, or as a generic point of `b + C·G`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Parameter {
    Explicit(Vec<BigRational>),
    Stratum { b: Vec<BigInt>, face: FaceSet },
}

impl Parameter {
    pub fn integral(v: &[i64]) -> Self {
        Parameter::Explicit(v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
    }

    pub fn stratum(b: &[i64], face: &[usize]) -> Self {
        let mut f = face.to_vec();
        f.sort_unstable();
        f.dedup();
        Parameter::Stratum { b: b.iter().map(|&x| BigInt::from(x)).collect(), face: f }
    }

    /// A generic parameter: a generic point of the whole space.
    pub fn generic(d: usize, n: usize) -> Self {
        Parameter::Stratum { b: vec![BigInt::zero(); d], face: (0..n).collect() }
    }

    pub fn dim(&self) -> usize {
        match self {
            Parameter::Explicit(v) => v.len(),
            Parameter::Stratum { b, .. } => b.len(),
        }
    }

    /// Does the parameter lie in the closure of the stratum `b + C·G`?
    pub fn lies_on(&self, a: &IntMatrix, b: &[BigInt], g: &[usize]) -> bool {
        let span = Lattice::from_columns(a, g);
        match self {
            Parameter::Explicit(beta) => {
                let diff: QVec = beta.iter().zip(b).map(|(x, y)| x - BigRational::from_integer(y.clone())).collect();
                span.spans_rational(&diff)
            }
            Parameter::Stratum { b: b2, face } => {
                let diff: QVec = b2.iter().zip(b).map(|(x, y)| BigRational::from_integer(x - y)).collect();
                is_subset(face, g) && span.spans_rational(&diff)
            }
        }
    }
}

/// Region for [`holes`].
#[derive(Clone, Debug)]
pub enum Region {
    /// Integer box `lo <= x <= hi`.
    Box { lo: Vec<BigInt>, hi: Vec<BigInt> },
    /// Points of the cone whose degree under the pointedness functional is at most this.
    Degree(BigRational),
}

/// A matrix together with its cone faces and a shared membership cache.
#[derive(Debug)]
pub struct SemigroupView {
    a: IntMatrix,
    faces: Vec<Face>,
    cone_ineqs: Vec<QVec>,
    functionals: RwLock<HashMap<FaceSet, QVec>>,
    cache: RwLock<HashMap<(FaceSet, Vec<BigInt>), bool>>,
    bound_override: Option<BigInt>,
}

impl SemigroupView {
    pub fn new(a: IntMatrix) -> Result<Self> {
        standing_hypotheses(&a)?;
        let faces = polyhedra::cone_face_lattice(&a)?;
        let d = a.rows();
        let cone = Polytope::new(d, vec![vec![BigRational::zero(); d]], (0..a.cols()).map(|j| a.column_q(j)).collect())?;
        let cone_ineqs = polyhedra::facet_hyperplanes(&cone).into_iter().map(|h| h.normal).collect();
        Ok(SemigroupView {
            a,
            faces,
            cone_ineqs,
            functionals: RwLock::new(HashMap::new()),
            cache: RwLock::new(HashMap::new()),
            bound_override: None,
        })
    }

    /// Use `bound` instead of the certified step bound for membership searches.
    pub fn with_bound(mut self, bound: BigInt) -> Self {
        self.bound_override = Some(bound);
        self
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn d(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// Cone faces ordered by dimension.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn is_face(&self, g: &[usize]) -> bool {
        self.faces.iter().any(|f| f.indices == g)
    }

    pub fn face_dim(&self, g: &[usize]) -> Result<usize> {
        self.faces.iter().find(|f| f.indices == g).map(|f| f.dim).ok_or_else(|| GkzError::NotAFace(g.to_vec()))
    }

    pub fn codim(&self, g: &[usize]) -> Result<usize> {
        Ok(self.d() - self.face_dim(g)?)
    }

    pub fn in_cone(&self, v: &[BigInt]) -> bool {
        let vq = linalg::to_q(v);
        self.cone_ineqs.iter().all(|n| !linalg::dot(n, &vq).is_positive())
    }

    /// Functional vanishing on `g` and at least one on every other column.
    pub fn face_functional(&self, g: &[usize]) -> Result<QVec> {
        if let Some(h) = self.functionals.read().expect("lock").get(g) {
            return Ok(h.clone());
        }
        if !self.is_face(g) {
            return Err(GkzError::NotAFace(g.to_vec()));
        }
        let h = polyhedra::face_functional(&self.a, g).ok_or_else(|| GkzError::NotAFace(g.to_vec()))?;
        self.functionals.write().expect("lock").entry(g.to_vec()).or_insert_with(|| h.clone());
        Ok(h)
    }

    /// Largest number of columns off `g` any witness for `v ∈ NA + ZG` can use.
    pub fn certified_bound(&self, g: &[usize], v: &[BigInt]) -> Result<BigInt> {
        let h = self.face_functional(g)?;
        Ok(linalg::dot(&h, &linalg::to_q(v)).floor().to_integer())
    }

    pub fn in_semigroup(&self, v: &[BigInt]) -> Result<bool> {
        self.in_shifted_semigroup(&[], v)
    }

    /// Is `v ∈ NA + ZG`?
    pub fn in_shifted_semigroup(&self, g: &[usize], v: &[BigInt]) -> Result<bool> {
        if v.len() != self.d() {
            return Err(GkzError::Dimension(format!("vector of length {} for {} rows", v.len(), self.d())));
        }
        let lat = Lattice::from_columns(&self.a, g);
        let start = lat.reduce(v);
        let key = (g.to_vec(), start.clone());
        if let Some(&ans) = self.cache.read().expect("lock").get(&key) {
            return Ok(ans);
        }
        let certified = self.certified_bound(g, &start)?;
        let limit = match &self.bound_override {
            Some(b) if *b < certified => b.clone(),
            _ => certified.clone(),
        };
        let h = self.face_functional(g)?;
        let off: Vec<Vec<BigInt>> = (0..self.n()).filter(|j| g.binary_search(j).is_err()).map(|j| self.a.column(j)).collect();
        let found = search(&lat, &h, &off, start, &limit);
        if !found && limit < certified {
            return Err(GkzError::BoundInsufficient { given: limit.to_string(), certified: certified.to_string() });
        }
        self.cache.write().expect("lock").entry(key).or_insert(found);
        Ok(found)
    }
}

/// Breadth-first search for `start ≡ Σ u_j a_j (mod lat)` with at most `limit` steps.
fn search(lat: &Lattice, h: &QVec, off: &[Vec<BigInt>], start: Vec<BigInt>, limit: &BigInt) -> bool {
    let zero = vec![BigInt::zero(); start.len()];
    if start == zero {
        return true;
    }
    if linalg::dot(h, &linalg::to_q(&start)).is_negative() {
        return false;
    }
    let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
    let mut frontier = vec![start];
    let mut steps = BigInt::zero();
    while !frontier.is_empty() && &steps < limit {
        steps += 1;
        let mut next = Vec::new();
        for w in &frontier {
            for col in off {
                let x: Vec<BigInt> = w.iter().zip(col).map(|(p, q)| p - q).collect();
                let x = lat.reduce(&x);
                if x == zero {
                    return true;
                }
                if linalg::dot(h, &linalg::to_q(&x)).is_negative() {
                    continue;
                }
                if seen.insert(x.clone()) {
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    false
}

/// An integer point `p` with `β - p ∈ C·G`, if any.
pub fn base_point(view: &SemigroupView, beta: &Parameter, g: &[usize]) -> Option<Vec<BigInt>> {
    match beta {
        Parameter::Explicit(v) => lattice::integral_point_mod_span(&Lattice::from_columns(view.matrix(), g), v),
        Parameter::Stratum { b, face } => {
            if is_subset(face, g) {
                Some(b.clone())
            } else {
                None
            }
        }
    }
}

fn validate(view: &SemigroupView, beta: &Parameter) -> Result<()> {
    if beta.dim() != view.d() {
        return Err(GkzError::Dimension(format!("parameter of length {} for {} rows", beta.dim(), view.d())));
    }
    if let Parameter::Stratum { face, .. } = beta {
        if !view.is_face(face) {
            return Err(GkzError::NotAFace(face.clone()));
        }
    }
    Ok(())
}

/// Representatives of the cosets of `ZG` in `Z^d ∩ (β + C·G)` missing from `NA + ZG`.
pub fn ranking_lattice(view: &SemigroupView, beta: &Parameter, g: &[usize]) -> Result<Vec<Vec<BigInt>>> {
    validate(view, beta)?;
    if !view.is_face(g) {
        return Err(GkzError::NotAFace(g.to_vec()));
    }
    let Some(p0) = base_point(view, beta, g) else {
        return Ok(Vec::new());
    };
    let lat = Lattice::from_columns(view.matrix(), g);
    let reps = lattice::coset_reps(&lat.saturate(), &lat)?;
    let mut out = Vec::new();
    for r in reps {
        let x: Vec<BigInt> = p0.iter().zip(&r).map(|(p, q)| p + q).collect();
        let x = lat.reduce(&x);
        if !view.in_shifted_semigroup(g, &x)? {
            out.push(x);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// One translate `b + ZG` of the ranking data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankingPair {
    pub face: FaceSet,
    pub b: Vec<BigInt>,
    pub maximal: bool,
}

/// Is `b + ZG ⊊ b2 + ZG2`?
pub fn pair_strictly_below(a: &IntMatrix, g: &[usize], b: &[BigInt], g2: &[usize], b2: &[BigInt]) -> bool {
    if g == g2 || !is_subset(g, g2) {
        return false;
    }
    let diff: Vec<BigInt> = b.iter().zip(b2).map(|(x, y)| x - y).collect();
    Lattice::from_columns(a, g2).contains(&diff)
}

/// All pairs `(G, b)` with `b ∈ B_G^β`, with maximality flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankingData {
    pub pairs: Vec<RankingPair>,
}

impl RankingData {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn count(&self, g: &[usize]) -> usize {
        self.pairs.iter().filter(|p| p.face == g).count()
    }

    pub fn counts(&self) -> BTreeMap<FaceSet, usize> {
        let mut m = BTreeMap::new();
        for p in &self.pairs {
            *m.entry(p.face.clone()).or_insert(0) += 1;
        }
        m
    }

    pub fn maximal_pairs(&self) -> Vec<&RankingPair> {
        self.pairs.iter().filter(|p| p.maximal).collect()
    }

    /// Maximal elements among the pairs accepted by `keep`.
    pub fn maximal_among<'a>(&'a self, a: &IntMatrix, keep: impl Fn(&RankingPair) -> bool) -> Vec<&'a RankingPair> {
        let sub: Vec<&RankingPair> = self.pairs.iter().filter(|p| keep(p)).collect();
        sub.iter()
            .copied()
            .filter(|p| !sub.iter().any(|q| pair_strictly_below(a, &p.face, &p.b, &q.face, &q.b)))
            .collect()
    }

    /// Distinct faces carrying a maximal pair.
    pub fn maximal_faces(&self) -> Vec<FaceSet> {
        let mut f: Vec<FaceSet> = self.maximal_pairs().iter().map(|p| p.face.clone()).collect();
        f.sort();
        f.dedup();
        f
    }
}

pub fn ranking_data(view: &SemigroupView, beta: &Parameter) -> Result<RankingData> {
    validate(view, beta)?;
    let mut pairs = Vec::new();
    for face in view.faces() {
        for b in ranking_lattice(view, beta, &face.indices)? {
            pairs.push(RankingPair { face: face.indices.clone(), b, maximal: true });
        }
    }
    let a = view.matrix();
    let flags: Vec<bool> = pairs
        .iter()
        .map(|p| !pairs.iter().any(|q| pair_strictly_below(a, &p.face, &p.b, &q.face, &q.b)))
        .collect();
    for (p, m) in pairs.iter_mut().zip(flags) {
        p.maximal = m;
    }
    Ok(RankingData { pairs })
}

fn box_points(lo: &[BigInt], hi: &[BigInt]) -> Vec<Vec<BigInt>> {
    let d = lo.len();
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut c = lo.to_vec();
    loop {
        out.push(c.clone());
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            c[i] += 1;
            if c[i] <= hi[i] {
                break;
            }
            c[i] = lo[i].clone();
        }
    }
}

/// Lattice points of the cone within a region, sorted.
pub fn region_points(view: &SemigroupView, region: &Region) -> Result<Vec<Vec<BigInt>>> {
    let d = view.d();
    let candidates = match region {
        Region::Box { lo, hi } => {
            if lo.len() != d || hi.len() != d {
                return Err(GkzError::Dimension("box corners have the wrong length".into()));
            }
            box_points(lo, hi)
        }
        Region::Degree(k) => {
            let h = view.face_functional(&[])?;
            let tips: Vec<QVec> = (0..view.n())
                .map(|j| {
                    let c = view.matrix().column_q(j);
                    let s = k / linalg::dot(&h, &c);
                    c.iter().map(|x| x * &s).collect()
                })
                .collect();
            let lo: Vec<BigInt> = (0..d)
                .map(|i| tips.iter().map(|t| t[i].floor().to_integer()).fold(BigInt::zero(), |m, x| m.min(x)))
                .collect();
            let hi: Vec<BigInt> = (0..d)
                .map(|i| tips.iter().map(|t| t[i].ceil().to_integer()).fold(BigInt::zero(), |m, x| m.max(x)))
                .collect();
            box_points(&lo, &hi)
                .into_iter()
                .filter(|x| &linalg::dot(&h, &linalg::to_q(x)) <= k)
                .collect()
        }
    };
    let mut out: Vec<Vec<BigInt>> = candidates.into_iter().filter(|x| view.in_cone(x)).collect();
    out.sort();
    Ok(out)
}

/// Points of the saturation `R≥0 A ∩ ZA` outside `NA` within a region, sorted.
pub fn holes(view: &SemigroupView, region: &Region) -> Result<Vec<Vec<BigInt>>> {
    let mut out = Vec::new();
    for x in region_points(view, region)? {
        if !view.in_semigroup(&x)? {
            out.push(x);
        }
    }
    Ok(out)
}

/// `|B_G^β|` for one face.
pub fn ranking_count(view: &SemigroupView, beta: &Parameter, g: &[usize]) -> Result<usize> {
    Ok(ranking_lattice(view, beta, g)?.len())
}

/// `[Z^d ∩ Q·G : ZG]`.
pub fn saturation_index(a: &IntMatrix, g: &[usize]) -> BigInt {
    let lat = Lattice::from_columns(a, g);
    match lattice::lattice_index(&lat.saturate(), &lat) {
        Ok(lattice::LatticeIndex::Finite(k)) => k,
        _ => BigInt::one(),
    }
}
