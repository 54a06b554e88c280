use thiserror::Error;

/// Everything that can go wrong inside the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("symmetry constraint violated (residual {residual:e})")]
    SymmetryViolation { residual: f64 },
    #[error("point lies on or outside the domain boundary")]
    OutsideDomain,
    #[error("point is closer to the domain boundary than the finite-difference stencil")]
    BoundaryTooClose,
    #[error("points belong to different manifolds")]
    SpecMismatch,
    #[error("invalid manifold: {0}")]
    InvalidSpec(String),
    #[error("invalid level: {0}")]
    InvalidLevel(String),
    #[error("non-finite input")]
    NonFinite,
    #[error("kernel vanishes: vertices lie in non-overlapping charts")]
    KernelZero,
    #[error("kernel increment too close to the principal-branch cut")]
    BranchCut,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("trajectory is not closed (residual {residual:e} > tolerance {tol:e})")]
    NotClosed { residual: f64, tol: f64 },
    #[error("trajectory and schedule do not share a usable time grid: {0}")]
    GridMismatch(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("generator is not in the manifold's Lie algebra (residual {residual:e})")]
    GeneratorNotInAlgebra { residual: f64 },
    #[error("schedule does not cover t = {t}")]
    ScheduleGap { t: f64 },
    #[error("orbit left the coordinate chart{}", .t.map(|t| format!(" at t = {t}")).unwrap_or_default())]
    ChartOverflow { t: Option<f64> },
    #[error("Möbius and Riccati evolutions disagree (defect {defect:e})")]
    CrossCheckFailure { defect: f64 },
    #[error("expectation value has imaginary part {imag:e}")]
    NonRealExpectation { imag: f64 },
    #[error("no cycle found within the trajectory span")]
    NoCycleFound,
    #[error("invalid spin j = {0}")]
    InvalidSpin(f64),
    #[error("state is not cyclic in ray space (|overlap| = {overlap})")]
    NotCyclic { overlap: f64 },
    #[error("state is not coherent (distance to nearest coherent ray {distance:e})")]
    NotCoherent { distance: f64 },
    #[error("invalid rank for {0}")]
    InvalidRank(String),
    #[error("rank mismatch: G has rank {g}, H has rank {h}")]
    RankMismatch { g: usize, h: usize },
    #[error("numerator is not divisible by the isotropy denominator")]
    NonDivisible,
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("minor of order {order} vanishes")]
    SingularMinor { order: usize },
    #[error("{0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
