//! Umbrellas of a matrix with respect to a projective weight, possibly with
//! infinitesimal entries.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{GkzError, Result};
use crate::lattice::{IntMatrix, Lattice};
use crate::linalg::{self, QVec};
use crate::polyhedra::{self, is_subset, FaceSet, Polytope};
use crate::scalar::OrderedField;

/// A projective weight `(L_x, L_∂)` with `L_x + L_∂ = c·1`, `c > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpec<S> {
    lx: Vec<S>,
    ld: Vec<S>,
}

impl<S: OrderedField> WeightSpec<S> {
    pub fn new(lx: Vec<S>, ld: Vec<S>) -> Result<Self> {
        if lx.len() != ld.len() || lx.is_empty() {
            return Err(GkzError::InvalidWeight(format!(
                "L_x has {} entries and L_d has {}",
                lx.len(),
                ld.len()
            )));
        }
        let c = lx[0].clone() + ld[0].clone();
        for (i, (x, p)) in lx.iter().zip(&ld).enumerate() {
            if x.clone() + p.clone() != c {
                return Err(GkzError::InvalidWeight(format!(
                    "L_x + L_d is not constant: entry 1 sums to {}, entry {} to {}",
                    c,
                    i + 1,
                    x.clone() + p.clone()
                )));
            }
        }
        if c <= S::zero() {
            return Err(GkzError::InvalidWeight(format!("L_x + L_d = {} must be positive", c)));
        }
        Ok(WeightSpec { lx, ld })
    }

    /// Weight from `L_∂` alone, with `L_x = c - L_∂`.
    pub fn from_ld(c: S, ld: Vec<S>) -> Result<Self> {
        let lx = ld.iter().map(|p| c.clone() - p.clone()).collect();
        Self::new(lx, ld)
    }

    /// The order filtration `(0, 1)`.
    pub fn f(n: usize) -> Self {
        WeightSpec { lx: vec![S::zero(); n], ld: vec![S::one(); n] }
    }

    /// `F + (s - 1)·V` where `V` moves weight from `x_j` to `∂_j`.
    pub fn l_of_s(n: usize, j: usize, s: S) -> Result<Self> {
        if j >= n {
            return Err(GkzError::InvalidWeight(format!("hyperplane index {} out of range", j + 1)));
        }
        let mut w = Self::f(n);
        w.lx[j] = S::one() - s.clone();
        w.ld[j] = s;
        Ok(w)
    }

    pub fn n(&self) -> usize {
        self.ld.len()
    }

    pub fn lx(&self) -> &[S] {
        &self.lx
    }

    pub fn ld(&self) -> &[S] {
        &self.ld
    }

    /// `L + δ·(1, -1)`.
    pub fn perturbed(&self, delta: &S) -> Result<Self> {
        Self::new(
            self.lx.iter().map(|x| x.clone() + delta.clone()).collect(),
            self.ld.iter().map(|x| x.clone() - delta.clone()).collect(),
        )
    }

    pub fn map<T: OrderedField>(&self, f: impl Fn(&S) -> T) -> Result<WeightSpec<T>> {
        WeightSpec::new(self.lx.iter().map(&f).collect(), self.ld.iter().map(&f).collect())
    }
}

impl<S: OrderedField> fmt::Display for WeightSpec<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[S]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "L_x = ({}); L_d = ({})", join(&self.lx), join(&self.ld))
    }
}

/// One face of an umbrella: column indices and its dimension (`rank - 1`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UmbrellaFace {
    pub dim: isize,
    pub indices: FaceSet,
}

/// The faces of the weighted polyhedron that avoid the origin point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Umbrella {
    d: usize,
    n: usize,
    faces: Vec<UmbrellaFace>,
}

impl Umbrella {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// All faces, ordered by dimension then indices; `∅` comes first.
    pub fn faces(&self) -> &[UmbrellaFace] {
        &self.faces
    }

    pub fn faces_of_dim(&self, k: isize) -> Vec<&FaceSet> {
        self.faces.iter().filter(|f| f.dim == k).map(|f| &f.indices).collect()
    }

    pub fn facets(&self) -> Vec<&FaceSet> {
        self.faces_of_dim(self.d as isize - 1)
    }

    pub fn contains(&self, tau: &[usize]) -> bool {
        self.faces.iter().any(|f| f.indices == tau)
    }

    pub fn dim_of(&self, tau: &[usize]) -> Option<isize> {
        self.faces.iter().find(|f| f.indices == tau).map(|f| f.dim)
    }

    pub fn require(&self, tau: &[usize]) -> Result<()> {
        if self.contains(tau) {
            Ok(())
        } else {
            Err(GkzError::FaceNotInUmbrella(tau.to_vec()))
        }
    }

    /// The sub-umbrella of faces inside the column set `g`.
    pub fn restrict(&self, g: &[usize]) -> Vec<UmbrellaFace> {
        self.faces.iter().filter(|f| is_subset(&f.indices, g)).cloned().collect()
    }
}

/// The umbrella of `a` with respect to `l`.
///
/// Realized as the faces of the cone spanned by `(1, 0)` and `(L_∂j, a_j)`
/// that miss the first generator.
pub fn compute_umbrella<S: OrderedField>(a: &IntMatrix, l: &WeightSpec<S>) -> Result<Umbrella> {
    let d = a.rows();
    let n = a.cols();
    if l.n() != n {
        return Err(GkzError::InvalidWeight(format!("weight has {} entries for {} columns", l.n(), n)));
    }
    polyhedra::pointedness_certificate(a)?;
    if a.rank() != d {
        return Err(GkzError::Dimension(format!("columns span rank {} < {}", a.rank(), d)));
    }
    let mut weights = vec![S::one()];
    weights.extend(l.ld().iter().cloned());
    let rest: Vec<QVec> = a
        .to_rows()
        .iter()
        .map(|row| {
            let mut r = vec![BigRational::zero()];
            r.extend(linalg::to_q(row));
            r
        })
        .collect();
    let facets = polyhedra::cone_facet_supports(&weights, &rest);
    let mut sets: BTreeSet<FaceSet> = polyhedra::face_closure(&facets, n + 1)
        .into_iter()
        .filter(|f| !f.contains(&0))
        .map(|f| f.into_iter().map(|j| j - 1).collect())
        .collect();
    sets.insert(Vec::new());
    let mut faces: Vec<UmbrellaFace> = sets
        .into_iter()
        .map(|idx| UmbrellaFace { dim: a.select_columns(&idx).rank() as isize - 1, indices: idx })
        .collect();
    faces.sort();
    Ok(Umbrella { d, n, faces })
}

/// Do the columns in `tau` lie on an affine hyperplane missing the origin?
pub fn is_f_homogeneous(a: &IntMatrix, tau: &[usize]) -> bool {
    let rows: Vec<QVec> = tau.iter().map(|&j| a.column_q(j)).collect();
    let ones = vec![BigRational::one(); tau.len()];
    linalg::solve(&rows, &ones, a.rows()).is_some()
}

/// Columns lying on umbrella facets, optionally only those facets containing `tau`.
pub fn restricted_columns(umb: &Umbrella, tau: Option<&[usize]>) -> Result<FaceSet> {
    if let Some(t) = tau {
        umb.require(t)?;
    }
    let mut cols = BTreeSet::new();
    for f in umb.facets() {
        if tau.is_none_or(|t| is_subset(t, f)) {
            cols.extend(f.iter().copied());
        }
    }
    Ok(cols.into_iter().collect())
}

pub fn restricted_matrix(a: &IntMatrix, umb: &Umbrella, tau: Option<&[usize]>) -> Result<(FaceSet, IntMatrix)> {
    let cols = restricted_columns(umb, tau)?;
    let m = a.select_columns(&cols);
    Ok((cols, m))
}

/// Convexity of the weight relative to `A`, to `τ`, and the pyramid condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexityReport {
    pub is_convex: bool,
    pub is_tau_convex: bool,
    pub pyramid_ok: bool,
}

fn star_is_convex(a: &IntMatrix, umb: &Umbrella, tau: Option<&[usize]>) -> Result<bool> {
    let facets: Vec<&FaceSet> = umb.facets().into_iter().filter(|f| tau.is_none_or(|t| is_subset(t, f))).collect();
    if facets.iter().any(|f| !is_f_homogeneous(a, f)) {
        return Ok(false);
    }
    let zd = Lattice::full(a.rows());
    let empty = Polytope::new(a.rows(), vec![], vec![])?;
    let pieces: Vec<(Polytope, Polytope)> =
        facets.iter().map(|f| (Polytope::from_columns(a, f, true), empty.clone())).collect();
    let star = polyhedra::union_volume(&pieces, &zd)?;
    let cols = restricted_columns(umb, tau)?;
    let hull = polyhedra::normalized_volume(&Polytope::from_columns(a, &cols, true), &zd)?;
    Ok(star == hull)
}

/// Is the facet `facet` a pyramid over `facet \ tau`?
pub fn is_pyramid_over_complement(a: &IntMatrix, facet: &[usize], tau: &[usize]) -> bool {
    let rest: Vec<usize> = facet.iter().copied().filter(|j| !tau.contains(j)).collect();
    a.select_columns(&rest).rank() + tau.len() == a.rows()
}

pub fn convexity_report(a: &IntMatrix, umb: &Umbrella, tau: &[usize]) -> Result<ConvexityReport> {
    umb.require(tau)?;
    let is_convex = star_is_convex(a, umb, None)?;
    let is_tau_convex = star_is_convex(a, umb, Some(tau))?;
    let pyramid_ok = umb
        .facets()
        .into_iter()
        .filter(|f| is_subset(tau, f))
        .all(|f| is_pyramid_over_complement(a, f, tau));
    Ok(ConvexityReport { is_convex, is_tau_convex, pyramid_ok })
}
