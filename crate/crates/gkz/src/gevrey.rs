//! Slopes along coordinate hyperplanes and dimensions of Gevrey
//! irregularity, generic and at special parameters.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::charcycle::{self, CycleEngine};
use crate::error::{GkzError, Result};
use crate::lattice::{IntMatrix, Lattice};
use crate::linalg::{self, QVec};
use crate::polyhedra::{self, FaceSet, Polytope};
use crate::scalar::PerturbedScalar;
use crate::semigroup::{self, Parameter, RankingData, SemigroupView};
use crate::umbrella::{self, compute_umbrella, Umbrella, WeightSpec};

fn weight_at(n: usize, j: usize, s: PerturbedScalar) -> Result<WeightSpec<PerturbedScalar>> {
    WeightSpec::l_of_s(n, j, s)
}

fn shifted(s: &BigRational, sign: i64) -> PerturbedScalar {
    PerturbedScalar::linear(s.clone(), BigRational::from_integer(BigInt::from(sign)))
}

fn check_column(a: &IntMatrix, j: usize) -> Result<()> {
    if j >= a.cols() {
        return Err(GkzError::Dimension(format!("column {} out of range", j + 1)));
    }
    Ok(())
}

fn check_s(s: &BigRational) -> Result<()> {
    if *s <= BigRational::one() {
        return Err(GkzError::InvalidWeight(format!("s must exceed 1, got {}", s)));
    }
    Ok(())
}

/// A slope with a facet hyperplane `h·x = 1` of `conv(A' ∪ 0)` through `a_j / s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slope {
    pub s: BigRational,
    pub hyperplane: QVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeReport {
    pub j: usize,
    pub slopes: Vec<Slope>,
}

impl SlopeReport {
    pub fn values(&self) -> Vec<BigRational> {
        self.slopes.iter().map(|s| s.s.clone()).collect()
    }
}

/// Facets of the umbrella at `L(s)` not lying on a hyperplane off the origin.
pub fn non_homogeneous_facets(a: &IntMatrix, j: usize, s: &BigRational) -> Result<Vec<FaceSet>> {
    let umb = compute_umbrella(a, &WeightSpec::l_of_s(a.cols(), j, s.clone())?)?;
    Ok(umb.facets().into_iter().filter(|f| !umbrella::is_f_homogeneous(a, f)).cloned().collect())
}

pub fn slopes_along(a: &IntMatrix, j: usize) -> Result<SlopeReport> {
    check_column(a, j)?;
    let d = a.rows();
    let n = a.cols();
    let rest: Vec<usize> = (0..n).filter(|&k| k != j).collect();
    if a.select_columns(&rest).rank() < d {
        return Ok(SlopeReport { j, slopes: Vec::new() });
    }
    let hull = Polytope::from_columns(a, &rest, true);
    let aj = a.column_q(j);
    let mut cands: Vec<Slope> = Vec::new();
    for hp in polyhedra::facet_hyperplanes(&hull) {
        let Some(h) = hp.unit_form() else { continue };
        let s = linalg::dot(&h, &aj);
        if s > BigRational::one() && !cands.iter().any(|c| c.s == s) {
            cands.push(Slope { s, hyperplane: h });
        }
    }
    cands.sort_by(|x, y| x.s.cmp(&y.s));
    let mut slopes = Vec::new();
    for c in cands {
        if non_homogeneous_facets(a, j, &c.s)?.is_empty() {
            continue;
        }
        let below = compute_umbrella(a, &weight_at(n, j, shifted(&c.s, -1))?)?;
        let above = compute_umbrella(a, &weight_at(n, j, shifted(&c.s, 1))?)?;
        if below != above {
            slopes.push(c);
        }
    }
    Ok(SlopeReport { j, slopes })
}

fn new_facets(above: &Umbrella, below: &Umbrella, g: &[usize], rank: usize, j: usize) -> Vec<FaceSet> {
    let top = rank as isize - 1;
    let old: Vec<FaceSet> = below.restrict(g).into_iter().filter(|f| f.dim == top).map(|f| f.indices).collect();
    above
        .restrict(g)
        .into_iter()
        .filter(|f| f.dim == top && !f.indices.contains(&j) && !old.contains(&f.indices))
        .map(|f| f.indices)
        .collect()
}

/// `d_s(G)`, with the volume taken in `ZG`; zero when `a_j ∉ G`.
pub fn generic_irregularity_face(a: &IntMatrix, g: &[usize], j: usize, s: &BigRational) -> Result<BigInt> {
    check_column(a, j)?;
    check_s(s)?;
    if !g.contains(&j) {
        return Ok(BigInt::zero());
    }
    let n = a.cols();
    let above = compute_umbrella(a, &weight_at(n, j, shifted(s, 1))?)?;
    let below = compute_umbrella(a, &weight_at(n, j, shifted(&BigRational::one(), 1))?)?;
    let lat = Lattice::from_columns(a, g);
    let mut total = BigRational::zero();
    for tau in new_facets(&above, &below, g, lat.rank(), j) {
        total += polyhedra::normalized_volume(&Polytope::from_columns(a, &tau, true), &lat)?;
    }
    if !total.is_integer() {
        return Err(GkzError::Inconsistent(format!("fractional irregularity {}", total)));
    }
    Ok(total.to_integer())
}

/// `d_s(A)`.
pub fn generic_irregularity(a: &IntMatrix, j: usize, s: &BigRational) -> Result<BigInt> {
    let all: Vec<usize> = (0..a.cols()).collect();
    generic_irregularity_face(a, &all, j, s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GevreyReport {
    pub j: usize,
    pub s: BigRational,
    pub generic: BigInt,
    /// `d_s(A,β)`, or `None` when unsupported.
    pub value: Option<BigInt>,
    /// The multiplicities at `(s+ε, ∅)`, `(1+ε, ∅)`, `(1+ε, {j})`, `(s+ε, {j})`.
    pub terms: Option<[BigInt; 4]>,
    /// Closed form for `d <= 3`, when it applies.
    pub shortcut: Option<BigInt>,
    pub reason: Option<String>,
}

impl GevreyReport {
    pub fn require(&self) -> Result<BigInt> {
        self.value.clone().ok_or_else(|| {
            GkzError::UnsupportedConfiguration(self.reason.clone().unwrap_or_else(|| "unsupported".into()))
        })
    }
}

fn four_terms(view: &SemigroupView, j: usize, s: &BigRational, rd: &RankingData) -> Result<[BigInt; 4]> {
    let n = view.n();
    let hi = CycleEngine::new(view, &weight_at(n, j, shifted(s, 1))?)?;
    let lo = CycleEngine::new(view, &weight_at(n, j, shifted(&BigRational::one(), 1))?)?;
    Ok([hi.mult_at(&[], rd)?, lo.mult_at(&[], rd)?, lo.mult_at(&[j], rd)?, hi.mult_at(&[j], rd)?])
}

fn shortcut(view: &SemigroupView, j: usize, s: &BigRational, rd: &RankingData, generic: &BigInt) -> Result<Option<BigInt>> {
    match view.d() {
        2 => Ok(Some(generic.clone())),
        3 => {
            let mut faces: Vec<FaceSet> = rd
                .maximal_faces()
                .into_iter()
                .filter(|g| g.contains(&j) && view.face_dim(g).ok() == Some(1))
                .collect();
            faces.dedup();
            match faces.len() {
                0 => Ok(Some(generic.clone())),
                1 => {
                    let g = &faces[0];
                    let extra = BigInt::from(rd.count(g)) * generic_irregularity_face(view.matrix(), g, j, s)?;
                    Ok(Some(generic + extra))
                }
                _ => Ok(None),
            }
        }
        _ => Ok(None),
    }
}

/// `d_s(A,β)` along `x_j`.
pub fn irregularity_at(view: &SemigroupView, j: usize, s: &BigRational, beta: &Parameter) -> Result<GevreyReport> {
    check_column(view.matrix(), j)?;
    check_s(s)?;
    let generic = generic_irregularity(view.matrix(), j, s)?;
    let rd = semigroup::ranking_data(view, beta)?;
    let short = shortcut(view, j, s, &rd, &generic)?;
    let (terms, reason) = match four_terms(view, j, s, &rd) {
        Ok(t) => (Some(t), None),
        Err(e) if e.is_unsupported() => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let value = match &terms {
        Some([a, b, c, d]) => Some(a - b + c - d),
        None => short.clone(),
    };
    if let Some(v) = &value {
        if v < &generic {
            return Err(GkzError::Inconsistent(format!("d_s(A,beta) = {} below d_s(A) = {}", v, generic)));
        }
    }
    let reason = if value.is_some() { None } else { reason };
    Ok(GevreyReport { j, s: s.clone(), generic, value, terms, shortcut: short, reason })
}

/// The block matrix `[[A1, 0], [0, A2]]`.
pub fn direct_sum(a1: &IntMatrix, a2: &IntMatrix) -> IntMatrix {
    let (d1, n1, d2, n2) = (a1.rows(), a1.cols(), a2.rows(), a2.cols());
    let mut m = IntMatrix::zeros(d1 + d2, n1 + n2);
    for r in 0..d1 {
        for c in 0..n1 {
            m.set(r, c, a1.get(r, c).clone());
        }
    }
    for r in 0..d2 {
        for c in 0..n2 {
            m.set(d1 + r, n1 + c, a2.get(r, c).clone());
        }
    }
    m
}

fn as_stratum(p: &Parameter) -> Result<(Vec<BigInt>, FaceSet)> {
    match p {
        Parameter::Stratum { b, face } => Ok((b.clone(), face.clone())),
        Parameter::Explicit(v) if v.iter().all(|x| x.is_integer()) => {
            Ok((v.iter().map(|x| x.to_integer()).collect(), Vec::new()))
        }
        Parameter::Explicit(_) => Err(GkzError::InvalidParameter(
            "a non-integral explicit parameter cannot be combined with a stratum".into(),
        )),
    }
}

/// The parameter `(β1, β2)` of a direct sum.
pub fn sum_parameter(p1: &Parameter, n1: usize, p2: &Parameter) -> Result<Parameter> {
    if let (Parameter::Explicit(x), Parameter::Explicit(y)) = (p1, p2) {
        return Ok(Parameter::Explicit(x.iter().chain(y).cloned().collect()));
    }
    let (b1, f1) = as_stratum(p1)?;
    let (b2, f2) = as_stratum(p2)?;
    let face = f1.into_iter().chain(f2.into_iter().map(|k| k + n1)).collect();
    Ok(Parameter::Stratum { b: b1.into_iter().chain(b2).collect(), face })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductReport {
    pub factor: BigInt,
    pub rank: BigInt,
    pub value: BigInt,
    /// The same quantity computed on the direct sum, when supported.
    pub direct: Option<BigInt>,
}

/// `d_s(A1,β1,j)·rank(A2,β2)`, checked against the direct sum.
pub fn product_rule(
    a1: &IntMatrix,
    beta1: &Parameter,
    j: usize,
    s: &BigRational,
    a2: &IntMatrix,
    beta2: &Parameter,
) -> Result<ProductReport> {
    let v1 = SemigroupView::new(a1.clone())?;
    let v2 = SemigroupView::new(a2.clone())?;
    let factor = irregularity_at(&v1, j, s, beta1)?.require()?;
    let rank = charcycle::rank(&v2, beta2)?;
    let value = &factor * &rank;
    let sum = SemigroupView::new(direct_sum(a1, a2))?;
    let beta = sum_parameter(beta1, a1.cols(), beta2)?;
    let direct = irregularity_at(&sum, j, s, &beta)?.value;
    if let Some(v) = &direct {
        if v != &value {
            return Err(GkzError::Inconsistent(format!("product rule gives {}, the direct sum gives {}", value, v)));
        }
    }
    Ok(ProductReport { factor, rank, value, direct })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlopeStatus {
    Ok,
    HypothesisFailed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeScan {
    pub s: BigRational,
    pub status: SlopeStatus,
    pub non_homogeneous: Vec<FaceSet>,
    /// `d(A,β,s)` per stratum, `None` when unsupported. Only compared when the status is `Ok`.
    pub values: Vec<Option<BigInt>>,
}

/// A stratum whose value exceeds that of one of its specializations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub s: BigRational,
    pub general: usize,
    pub special: usize,
    pub general_value: BigInt,
    pub special_value: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub j: usize,
    pub s: BigRational,
    pub slopes: Vec<SlopeScan>,
    pub findings: Vec<Finding>,
}

/// `d(A,β,s) = d_{s+ε}(A,β) - d_{s-ε}(A,β)`.
pub fn jump_at_slope(view: &SemigroupView, j: usize, s: &BigRational, beta: &Parameter) -> Result<BigInt> {
    let n = view.n();
    let rd = semigroup::ranking_data(view, beta)?;
    let hi = CycleEngine::new(view, &weight_at(n, j, shifted(s, 1))?)?;
    let lo = CycleEngine::new(view, &weight_at(n, j, shifted(s, -1))?)?;
    Ok(hi.mult_at(&[], &rd)? - lo.mult_at(&[], &rd)? + lo.mult_at(&[j], &rd)? - hi.mult_at(&[j], &rd)?)
}

/// Does `q` lie in the closure of the stratum `p`?
pub fn specializes(a: &IntMatrix, q: &Parameter, p: &Parameter) -> bool {
    match p {
        Parameter::Stratum { b, face } => q.lies_on(a, b, face),
        Parameter::Explicit(_) => q == p,
    }
}

/// Upper semicontinuity of `d(A,β,s')` over the given strata for every slope `s' <= s`.
pub fn semicontinuity_scan(view: &SemigroupView, j: usize, s: &BigRational, strata: &[Parameter]) -> Result<ScanReport> {
    let a = view.matrix();
    let mut report = ScanReport { j, s: s.clone(), slopes: Vec::new(), findings: Vec::new() };
    if strata.is_empty() {
        return Ok(report);
    }
    for slope in slopes_along(a, j)?.slopes.into_iter().filter(|x| &x.s <= s) {
        let nh = non_homogeneous_facets(a, j, &slope.s)?;
        let mut values = Vec::with_capacity(strata.len());
        for p in strata {
            match jump_at_slope(view, j, &slope.s, p) {
                Ok(v) => values.push(Some(v)),
                Err(e) if e.is_unsupported() => values.push(None),
                Err(e) => return Err(e),
            }
        }
        if nh.len() != 1 {
            report.slopes.push(SlopeScan { s: slope.s, status: SlopeStatus::HypothesisFailed, non_homogeneous: nh, values });
            continue;
        }
        for (gi, p) in strata.iter().enumerate() {
            for (si, q) in strata.iter().enumerate() {
                if gi == si || p == q || !specializes(a, q, p) {
                    continue;
                }
                if let (Some(vp), Some(vq)) = (&values[gi], &values[si]) {
                    if vp > vq {
                        report.findings.push(Finding {
                            s: slope.s.clone(),
                            general: gi,
                            special: si,
                            general_value: vp.clone(),
                            special_value: vq.clone(),
                        });
                    }
                }
            }
        }
        report.slopes.push(SlopeScan { s: slope.s, status: SlopeStatus::Ok, non_homogeneous: nh, values });
    }
    Ok(report)
}
