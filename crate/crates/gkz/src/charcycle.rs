//! Multiplicities of characteristic cycles, their jumps at special
//! parameters, and the consequences drawn from them.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{GkzError, Result};
use crate::lattice::{self, IntMatrix, Lattice, LatticeIndex};
use crate::polyhedra::{self, intersect, is_subset, union, Face, FaceSet, Polytope};
use crate::scalar::OrderedField;
use crate::semigroup::{self, Parameter, RankingData, SemigroupView};
use crate::umbrella::{self, compute_umbrella, Umbrella, WeightSpec};

fn finite_index(sup: &Lattice, sub: &Lattice) -> Result<BigInt> {
    match lattice::lattice_index(sup, sub)? {
        LatticeIndex::Finite(k) => Ok(k),
        LatticeIndex::Infinite => Err(GkzError::InfiniteIndex),
    }
}

fn to_int(r: &BigRational, what: &str) -> Result<BigInt> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(GkzError::Inconsistent(format!("{} is not an integer: {}", what, r)))
    }
}

/// Generic multiplicities `μ_G^{L,τ}` for one matrix and one weight.
#[derive(Debug)]
pub struct Multiplicities {
    a: IntMatrix,
    faces: Vec<Face>,
    umb: Umbrella,
    cache: RwLock<HashMap<(FaceSet, FaceSet), BigInt>>,
}

impl Multiplicities {
    pub fn new<S: OrderedField>(a: &IntMatrix, l: &WeightSpec<S>) -> Result<Self> {
        let umb = compute_umbrella(a, l)?;
        Self::from_umbrella(a, umb)
    }

    pub fn from_umbrella(a: &IntMatrix, umb: Umbrella) -> Result<Self> {
        let faces = polyhedra::cone_face_lattice(a)?;
        Ok(Multiplicities { a: a.clone(), faces, umb, cache: RwLock::new(HashMap::new()) })
    }

    pub fn umbrella(&self) -> &Umbrella {
        &self.umb
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    fn all(&self) -> FaceSet {
        (0..self.a.cols()).collect()
    }

    /// `μ_G^{L,τ}`; the empty face has `μ = 1` at `τ = ∅`.
    pub fn generic_mult(&self, g: &[usize], tau: &[usize]) -> Result<BigInt> {
        let key = (g.to_vec(), tau.to_vec());
        if let Some(v) = self.cache.read().expect("lock").get(&key) {
            return Ok(v.clone());
        }
        if !self.faces.iter().any(|f| f.indices == g) {
            return Err(GkzError::NotAFace(g.to_vec()));
        }
        if !self.umb.contains(tau) || !is_subset(tau, g) {
            return Err(GkzError::FaceNotInUmbrella(tau.to_vec()));
        }
        let value = if g.is_empty() {
            BigInt::one()
        } else {
            let g_lat = Lattice::from_columns(&self.a, g);
            let r = g_lat.rank() as isize;
            let mut total = BigInt::zero();
            for f in self.umb.restrict(g) {
                if f.dim == r - 1 && is_subset(tau, &f.indices) {
                    total += self.facet_term(&g_lat, tau, &f.indices)?;
                }
            }
            total
        };
        self.cache.write().expect("lock").entry(key).or_insert_with(|| value.clone());
        Ok(value)
    }

    /// Contribution of one facet `τ' ⊇ τ`, computed in coordinates of `Zτ'`.
    fn facet_term(&self, g_lat: &Lattice, tau: &[usize], facet: &[usize]) -> Result<BigInt> {
        let lt = Lattice::from_columns(&self.a, facet);
        let outer = finite_index(g_lat, &lt)?;
        let r = lt.rank();
        let coords: HashMap<usize, Vec<BigInt>> = facet
            .iter()
            .map(|&j| (j, lt.coordinates(&self.a.column(j)).expect("column of the facet")))
            .collect();
        let tau_coords: Vec<Vec<BigInt>> = tau.iter().map(|j| coords[j].clone()).collect();
        let tl = Lattice::new(r, &tau_coords)?;
        let k = tl.rank();
        let ksat = tl.saturate();
        let inner = finite_index(&ksat, &tl)?;
        let proj: Vec<Vec<BigInt>> = if k == 0 {
            IntMatrix::identity(r).to_rows()
        } else {
            let m = IntMatrix::from_columns(r, ksat.basis())?;
            let snf = lattice::smith_normal_form(&m);
            (k..r).map(|i| snf.u.row(i)).collect()
        };
        let q = r - k;
        let project = |v: &Vec<BigInt>| -> Vec<BigRational> {
            proj.iter()
                .map(|row| BigRational::from_integer(row.iter().zip(v).map(|(x, y)| x * y).sum()))
                .collect()
        };
        let mut p_pts = vec![vec![BigRational::zero(); q]];
        p_pts.extend(facet.iter().map(|j| project(&coords[j])));
        let q_pts: Vec<Vec<BigRational>> =
            facet.iter().filter(|j| !tau.contains(j)).map(|j| project(&coords[j])).collect();
        let full = Lattice::full(q);
        let vp = polyhedra::normalized_volume(&Polytope::new(q, p_pts, vec![])?, &full)?;
        let vq = polyhedra::normalized_volume(&Polytope::new(q, q_pts, vec![])?, &full)?;
        let vol = to_int(&(vp - vq), "quotient volume")?;
        Ok(outer * inner * vol)
    }

    /// `μ_A^{L,∅}` as the volume of the union of the facet pyramids minus their bases.
    pub fn union_volume_formula(&self) -> Result<BigInt> {
        let d = self.a.rows();
        let pieces: Vec<(Polytope, Polytope)> = self
            .umb
            .facets()
            .into_iter()
            .map(|f| (Polytope::from_columns(&self.a, f, true), Polytope::from_columns(&self.a, f, false)))
            .collect();
        let v = polyhedra::union_volume(&pieces, &Lattice::full(d))?;
        to_int(&v, "union volume")
    }

    pub fn generic_total(&self, tau: &[usize]) -> Result<BigInt> {
        self.generic_mult(&self.all(), tau)
    }
}

/// `μ_G^{L,τ}` for a weight given directly.
pub fn generic_mult<S: OrderedField>(a: &IntMatrix, g: &[usize], l: &WeightSpec<S>, tau: &[usize]) -> Result<BigInt> {
    Multiplicities::new(a, l)?.generic_mult(g, tau)
}

/// Which closed-form case produced a jump.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JumpCase {
    EmptyJ,
    NoCodim2,
    UniqueCodim2,
    Simple,
    TwoFace,
    D2,
    D3,
    Unsupported,
}

impl fmt::Display for JumpCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            JumpCase::EmptyJ => "EMPTY_J",
            JumpCase::NoCodim2 => "NO_CODIM2",
            JumpCase::UniqueCodim2 => "UNIQUE_CODIM2",
            JumpCase::Simple => "SIMPLE",
            JumpCase::TwoFace => "TWO_FACE",
            JumpCase::D2 => "D2",
            JumpCase::D3 => "D3",
            JumpCase::Unsupported => "UNSUPPORTED",
        };
        f.write_str(s)
    }
}

/// Data of the two-face formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoFaceData {
    pub f1: FaceSet,
    pub f2: FaceSet,
    pub meet: FaceSet,
    pub constant: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpReport {
    pub tau: FaceSet,
    pub generic: BigInt,
    /// `None` exactly when the case is unsupported.
    pub jump: Option<BigInt>,
    pub case: JumpCase,
    pub two_face: Option<TwoFaceData>,
    pub reason: Option<String>,
    /// For unsupported cases whose maximal pairs all sit on facets: whether
    /// every intersection of those facets is again a face.
    pub facets_meet_in_faces: Option<bool>,
}

impl JumpReport {
    pub fn total(&self) -> Option<BigInt> {
        self.jump.as_ref().map(|j| j + &self.generic)
    }

    pub fn require(&self) -> Result<BigInt> {
        self.jump.clone().ok_or_else(|| {
            GkzError::UnsupportedConfiguration(self.reason.clone().unwrap_or_else(|| "unsupported".into()))
        })
    }
}

fn binom2(k: usize) -> BigInt {
    BigInt::from(k * k.saturating_sub(1) / 2)
}

/// Outcome of the case analysis, before generic values are attached.
struct Dispatch {
    case: JumpCase,
    jump: Option<BigInt>,
    two_face: Option<TwoFaceData>,
    reason: Option<String>,
    facets_meet_in_faces: Option<bool>,
}

fn facets_meet_in_faces(view: &SemigroupView, faces: &[FaceSet]) -> Result<Option<bool>> {
    for f in faces {
        if view.codim(f)? != 1 {
            return Ok(None);
        }
    }
    for k in 2..=faces.len() {
        for pick in polyhedra::combinations(faces.len(), k) {
            let meet = pick[1..].iter().fold(faces[pick[0]].clone(), |acc, &i| intersect(&acc, &faces[i]));
            if !view.is_face(&meet) {
                return Ok(Some(false));
            }
        }
    }
    Ok(Some(true))
}

/// Case analysis on the pairs whose face contains `τ`. `term(G)` must return
/// `|B_G|·μ_G^{L,τ}`.
fn dispatch(
    view: &SemigroupView,
    rd: &RankingData,
    tau: &[usize],
    term: &dyn Fn(&FaceSet) -> Result<BigInt>,
) -> Result<Dispatch> {
    let a = view.matrix();
    let d = view.d();
    let ok = |case, v: BigInt| Dispatch { case, jump: Some(v), two_face: None, reason: None, facets_meet_in_faces: None };
    if !rd.pairs.iter().any(|p| is_subset(tau, &p.face)) {
        return Ok(ok(JumpCase::EmptyJ, BigInt::zero()));
    }
    let codim2: Vec<&Face> =
        view.faces().iter().filter(|f| d - f.dim == 2 && is_subset(tau, &f.indices)).collect();
    if codim2.is_empty() {
        return Ok(ok(JumpCase::NoCodim2, BigInt::zero()));
    }
    if codim2.len() == 1 {
        let g = &codim2[0].indices;
        let v = if rd.maximal_pairs().iter().any(|p| &p.face == g) { term(g)? } else { BigInt::zero() };
        return Ok(ok(JumpCase::UniqueCodim2, v));
    }
    let maxi = rd.maximal_among(a, |p| is_subset(tau, &p.face));
    let mut faces: Vec<FaceSet> = maxi.iter().map(|p| p.face.clone()).collect();
    faces.sort();
    faces.dedup();
    let unsupported = |reason: String, meet: Option<bool>| Dispatch {
        case: JumpCase::Unsupported,
        jump: None,
        two_face: None,
        reason: Some(reason),
        facets_meet_in_faces: meet,
    };
    let result = match faces.len() {
        1 => {
            let g = &faces[0];
            let c = view.codim(g)?;
            (JumpCase::Simple, BigInt::from(c as i64 - 1) * term(g)?, None)
        }
        2 => {
            let (f1, f2) = (&faces[0], &faces[1]);
            let meet = intersect(f1, f2);
            let c1 = view.codim(f1)?;
            let c2 = view.codim(f2)?;
            let cg = view.codim(&meet)?;
            let span_codim = d - a.select_columns(&union(f1, f2)).rank();
            let constant = binom2(cg) - BigInt::from(cg) + BigInt::one() - binom2(c1) - binom2(c2) + binom2(span_codim);
            let v = BigInt::from(c1 as i64 - 1) * term(f1)?
                + BigInt::from(c2 as i64 - 1) * term(f2)?
                + &constant * term(&meet)?;
            let case = if d == 2 {
                JumpCase::D2
            } else if d == 3 && c1 == 1 && c2 == 1 && cg == 2 {
                JumpCase::D3
            } else {
                JumpCase::TwoFace
            };
            (case, v, Some(TwoFaceData { f1: f1.clone(), f2: f2.clone(), meet, constant }))
        }
        k => {
            let meet = facets_meet_in_faces(view, &faces)?;
            return Ok(unsupported(
                format!(
                    "maximal ranking pairs over {} faces containing tau; general spectral sequence case \
                     (the jump equals mu_1 - mu_0 of the ranking toric module on these faces, not evaluated)",
                    k
                ),
                meet,
            ));
        }
    };
    let (case, v, two_face) = result;
    if v.is_negative() {
        return Ok(unsupported(format!("closed form gives a negative jump {} in case {}", v, case), None));
    }
    Ok(Dispatch { case, jump: Some(v), two_face, reason: None, facets_meet_in_faces: None })
}

/// Jumps and cycles for one matrix and one weight.
#[derive(Debug)]
pub struct CycleEngine<'v> {
    view: &'v SemigroupView,
    mults: Multiplicities,
}

impl<'v> CycleEngine<'v> {
    pub fn new<S: OrderedField>(view: &'v SemigroupView, l: &WeightSpec<S>) -> Result<Self> {
        Ok(CycleEngine { view, mults: Multiplicities::new(view.matrix(), l)? })
    }

    pub fn from_umbrella(view: &'v SemigroupView, umb: Umbrella) -> Result<Self> {
        Ok(CycleEngine { view, mults: Multiplicities::from_umbrella(view.matrix(), umb)? })
    }

    pub fn view(&self) -> &SemigroupView {
        self.view
    }

    pub fn umbrella(&self) -> &Umbrella {
        self.mults.umbrella()
    }

    pub fn multiplicities(&self) -> &Multiplicities {
        &self.mults
    }

    pub fn generic_mult(&self, g: &[usize], tau: &[usize]) -> Result<BigInt> {
        self.mults.generic_mult(g, tau)
    }

    pub fn jump_with(&self, tau: &[usize], rd: &RankingData) -> Result<JumpReport> {
        self.umbrella().require(tau)?;
        let generic = self.mults.generic_total(tau)?;
        let term = |g: &FaceSet| -> Result<BigInt> {
            Ok(BigInt::from(rd.count(g)) * self.mults.generic_mult(g, tau)?)
        };
        let out = dispatch(self.view, rd, tau, &term)?;
        Ok(JumpReport {
            tau: tau.to_vec(),
            generic,
            jump: out.jump,
            case: out.case,
            two_face: out.two_face,
            reason: out.reason,
            facets_meet_in_faces: out.facets_meet_in_faces,
        })
    }

    pub fn jump(&self, tau: &[usize], beta: &Parameter) -> Result<JumpReport> {
        let rd = semigroup::ranking_data(self.view, beta)?;
        self.jump_with(tau, &rd)
    }

    /// `μ_{A,0}^{L,τ}(β)`; zero when `τ` is not in the umbrella.
    pub fn mult_at(&self, tau: &[usize], rd: &RankingData) -> Result<BigInt> {
        if !self.umbrella().contains(tau) {
            return Ok(BigInt::zero());
        }
        let r = self.jump_with(tau, rd)?;
        Ok(&r.generic + r.require()?)
    }

    pub fn char_cycle(&self, beta: &Parameter) -> Result<Vec<CycleComponent>> {
        let rd = semigroup::ranking_data(self.view, beta)?;
        let mut out = Vec::new();
        for f in self.umbrella().faces() {
            let r = self.jump_with(&f.indices, &rd)?;
            let jump = r.require()?;
            out.push(CycleComponent { tau: f.indices.clone(), dim: f.dim, multiplicity: &r.generic + jump, jump: r.jump.clone().unwrap_or_default() });
        }
        Ok(out)
    }

    /// Is `β` in the `(L, τ)`-exceptional set?
    pub fn exceptional_query(&self, tau: &[usize], beta: &Parameter) -> Result<bool> {
        Ok(self.jump(tau, beta)?.require()?.is_positive())
    }
}

/// One component of a characteristic cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleComponent {
    pub tau: FaceSet,
    pub dim: isize,
    pub multiplicity: BigInt,
    pub jump: BigInt,
}

pub fn char_cycle<S: OrderedField>(view: &SemigroupView, l: &WeightSpec<S>, beta: &Parameter) -> Result<Vec<CycleComponent>> {
    CycleEngine::new(view, l)?.char_cycle(beta)
}

pub fn jump<S: OrderedField>(view: &SemigroupView, l: &WeightSpec<S>, tau: &[usize], beta: &Parameter) -> Result<JumpReport> {
    CycleEngine::new(view, l)?.jump(tau, beta)
}

/// Normalized volume of `conv(A ∪ 0)` in `Z^d`.
pub fn volume(a: &IntMatrix) -> Result<BigInt> {
    let all: Vec<usize> = (0..a.cols()).collect();
    let v = polyhedra::normalized_volume(&Polytope::from_columns(a, &all, true), &Lattice::full(a.rows()))?;
    to_int(&v, "volume")
}

/// Holonomic rank at `β`.
pub fn rank(view: &SemigroupView, beta: &Parameter) -> Result<BigInt> {
    let n = view.n();
    let engine = CycleEngine::new(view, &WeightSpec::<BigRational>::f(n))?;
    let r = engine.jump(&[], beta)?;
    let value = &r.generic + r.require()?;
    let cap = BigInt::from(4).pow((view.d() + 1) as u32) * volume(view.matrix())?;
    if value > cap {
        return Err(GkzError::Inconsistent(format!("rank {} exceeds the bound {}", value, cap)));
    }
    Ok(value)
}

fn stratum_key(p: &Parameter) -> (usize, Vec<usize>, Vec<BigInt>, Vec<BigRational>) {
    match p {
        Parameter::Stratum { b, face } => (usize::MAX - face.len(), face.clone(), b.clone(), Vec::new()),
        Parameter::Explicit(v) => (usize::MAX, Vec::new(), Vec::new(), v.clone()),
    }
}

/// The strata `b + C·G` over the ranking pairs of each seed, plus the seeds,
/// from largest to smallest.
pub fn candidate_strata(view: &SemigroupView, seeds: &[Parameter]) -> Result<Vec<Parameter>> {
    let mut out: Vec<Parameter> = Vec::new();
    for seed in seeds {
        for p in semigroup::ranking_data(view, seed)?.pairs {
            out.push(if p.face.is_empty() {
                Parameter::Explicit(p.b.into_iter().map(BigRational::from_integer).collect())
            } else {
                Parameter::Stratum { b: p.b, face: p.face }
            });
        }
        out.push(seed.clone());
    }
    out.sort_by_key(stratum_key);
    out.dedup();
    Ok(out)
}

/// Candidate strata with a positive jump at `τ`, with that jump.
pub fn exceptional_strata(engine: &CycleEngine, tau: &[usize], seeds: &[Parameter]) -> Result<Vec<(Parameter, BigInt)>> {
    let mut out = Vec::new();
    for p in candidate_strata(engine.view(), seeds)? {
        let j = engine.jump(tau, &p)?.require()?;
        if j.is_positive() {
            out.push((p, j));
        }
    }
    Ok(out)
}

/// Result of the simplicial Cohen–Macaulay test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmReport {
    pub is_simplicial: bool,
    pub exceptional_empty: bool,
    /// A face and point certifying a nonempty exceptional set.
    pub witness: Option<(FaceSet, Vec<BigInt>)>,
    /// Degree bound of the searched region.
    pub searched_degree: BigRational,
}

/// Searches faces `G ⊇ τ` of codimension at least two for a translate that
/// is missing from `NA + ZG` yet present in `NA + ZF` for every larger face.
pub fn simplicial_cm_test(view: &SemigroupView, tau: &[usize], degree: Option<BigRational>) -> Result<CmReport> {
    let d = view.d();
    let rays = view.faces().iter().filter(|f| f.dim == 1).count();
    if rays != d {
        return Err(GkzError::NotSimplicial);
    }
    let h = view.face_functional(&[])?;
    let degree = degree.unwrap_or_else(|| {
        let s: BigRational = (0..view.n()).map(|j| crate::linalg::dot(&h, &view.matrix().column_q(j))).sum();
        s * BigRational::from_integer(BigInt::from(2))
    });
    let candidates_faces: Vec<&Face> =
        view.faces().iter().filter(|f| d - f.dim >= 2 && is_subset(tau, &f.indices)).collect();
    let points = semigroup::region_points(view, &semigroup::Region::Degree(degree.clone()))?;
    for g in candidates_faces {
        let larger: Vec<&Face> =
            view.faces().iter().filter(|f| f.indices != g.indices && is_subset(&g.indices, &f.indices)).collect();
        for v in &points {
            if view.in_shifted_semigroup(&g.indices, v)? {
                continue;
            }
            let mut all_in = true;
            for f in &larger {
                if !view.in_shifted_semigroup(&f.indices, v)? {
                    all_in = false;
                    break;
                }
            }
            if all_in {
                return Ok(CmReport {
                    is_simplicial: true,
                    exceptional_empty: false,
                    witness: Some((g.indices.clone(), v.clone())),
                    searched_degree: degree,
                });
            }
        }
    }
    Ok(CmReport { is_simplicial: true, exceptional_empty: true, witness: None, searched_degree: degree })
}

/// Both computations of `μ_{A,0}^{L,∅}(β)` for a convex filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexReduction {
    pub value: BigInt,
    pub via_matrix: BigInt,
    pub via_restricted: BigInt,
    pub case: JumpCase,
}

/// `μ_{A,0}^{L,∅}(β)` for a convex filtration, cross-checked against the
/// computation on the submatrix of columns lying on umbrella facets.
pub fn convex_reduction<S: OrderedField>(view: &SemigroupView, l: &WeightSpec<S>, beta: &Parameter) -> Result<ConvexReduction> {
    let a = view.matrix();
    let engine = CycleEngine::new(view, l)?;
    let umb = engine.umbrella();
    let report = umbrella::convexity_report(a, umb, &[])?;
    if !report.is_convex {
        return Err(GkzError::NotConvexFiltration("umbrella facets do not form a convex star".into()));
    }
    let rd = semigroup::ranking_data(view, beta)?;
    let direct = engine.jump_with(&[], &rd)?;
    let via_matrix = &direct.generic + direct.require()?;

    let restricted = umbrella::restricted_columns(umb, None)?;
    let restricted_term = |g: &FaceSet| -> Result<BigInt> {
        let gl = intersect(g, &restricted);
        let lat_g = Lattice::from_columns(a, g);
        let lat_gl = Lattice::from_columns(a, &gl);
        if lat_g.rank() != lat_gl.rank() {
            return Err(GkzError::Inconsistent(format!("restricted face of {:?} loses rank", g)));
        }
        let count = match semigroup::base_point(view, beta, g) {
            None => 0usize,
            Some(p0) => {
                let mut k = 0;
                for r in lattice::coset_reps(&lat_g.saturate(), &lat_gl)? {
                    let x: Vec<BigInt> = p0.iter().zip(&r).map(|(p, q)| p + q).collect();
                    if !view.in_shifted_semigroup(g, &x)? {
                        k += 1;
                    }
                }
                k
            }
        };
        let vol = if gl.is_empty() {
            BigInt::one()
        } else {
            let v = polyhedra::normalized_volume(&Polytope::from_columns(a, &gl, true), &lat_gl)?;
            to_int(&v, "restricted face volume")?
        };
        Ok(BigInt::from(count) * vol)
    };
    let out = dispatch(view, &rd, &[], &restricted_term)?;
    let jump = out.jump.ok_or_else(|| GkzError::UnsupportedConfiguration(out.reason.clone().unwrap_or_default()))?;
    let generic = polyhedra::normalized_volume(&Polytope::from_columns(a, &restricted, true), &Lattice::full(a.rows()))?;
    let via_restricted = to_int(&generic, "restricted volume")? + jump;
    if via_matrix != via_restricted {
        return Err(GkzError::Inconsistent(format!(
            "convex reduction disagrees: {} on the matrix, {} on the restricted matrix",
            via_matrix, via_restricted
        )));
    }
    Ok(ConvexReduction { value: via_matrix.clone(), via_matrix, via_restricted, case: direct.case })
}

/// `Σ_q (-1)^q |B|·C(c, q)·μ`, which vanishes for `c >= 1`.
pub fn simple_alternating_sum(codim: usize, count: &BigInt, mu: &BigInt) -> BigInt {
    let mut total = BigInt::zero();
    let mut binom = BigInt::one();
    for q in 0..=codim {
        let term = count * &binom * mu;
        if q % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        binom = binom * BigInt::from(codim - q) / BigInt::from(q + 1);
    }
    total
}

/// Upper bound `4^{d+1}·vol(A)` on every `μ_{A,0}^{L,∅}(β)`.
pub fn rank_upper_bound(a: &IntMatrix) -> Result<BigInt> {
    Ok(BigInt::from(4).pow((a.rows() + 1) as u32) * volume(a)?)
}
