use thiserror::Error;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GkzError {
    #[error("lattice is not contained in the claimed superlattice")]
    NotASublattice,
    #[error("sublattice has infinite index (ranks differ)")]
    InfiniteIndex,
    #[error("the cone spanned by the columns is not pointed")]
    NotPointed,
    #[error("columns do not generate the full integer lattice (invariant factors {0})")]
    NotFullLattice(String),
    #[error("polytope is unbounded")]
    UnboundedPolytope,
    #[error("union pieces overlap and inclusion-exclusion could not resolve them: {0}")]
    OverlapUnresolved(String),
    #[error("invalid weight vector: {0}")]
    InvalidWeight(String),
    #[error("face {0:?} is not in the umbrella")]
    FaceNotInUmbrella(Vec<usize>),
    #[error("{0:?} is not a face of the cone")]
    NotAFace(Vec<usize>),
    #[error("search bound {given} is below the certified bound {certified}; membership undecided")]
    BoundInsufficient { given: String, certified: String },
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),
    #[error("the cone is not simplicial")]
    NotSimplicial,
    #[error("weight is not a convex filtration: {0}")]
    NotConvexFiltration(String),
    #[error("infinitesimal degree {0} exceeds the bound {1}")]
    DegreeOverflow(usize, usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl GkzError {
    /// True for violations of the standing hypotheses on the matrix.
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(self, GkzError::NotPointed | GkzError::NotFullLattice(_))
    }

    pub fn is_unsupported(&self) -> bool {
        matches!(self, GkzError::UnsupportedConfiguration(_))
    }
}

pub type Result<T> = std::result::Result<T, GkzError>;
