//! Coordinate points on the classical Hermitian symmetric spaces and their
//! two-point kernels `K(Z, W̄)`.
//!
//! Four families are covered, each with a compact form and a non-compact
//! bounded-domain dual:
//!
//! | family | point            | compact kernel                    | non-compact kernel                |
//! |--------|------------------|-----------------------------------|-----------------------------------|
//! | AIII   | `p×q`            | `det(I + Z W†)`                   | `det(I − Z W†)`                   |
//! | CI     | `p×p`, `Z = Zᵀ`  | `det(I + Z W†)`                   | `det(I − Z W†)`                   |
//! | DIII   | `p×p`, `Z = −Zᵀ` | `det(I + Z W†)`                   | `det(I − Z W†)`                   |
//! | BDI    | `1×p` row        | `1 + (z·z)(w̄·w̄) + 2 z·w̄`          | `1 + (z·z)(w̄·w̄) − 2 z·w̄`          |
//!
//! The complex projective line is `AIII` with `p = q = 1`, where the kernel
//! reduces to `1 + z w̄`.

pub mod flag;
pub mod frame;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{identity, is_finite, max_abs, CMat, C64};

/// Residual above which a symmetric/skew input is rejected instead of projected.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Smallest admissible eigenvalue of `I − ZZ†` for a non-compact point.
pub const DOMAIN_EPS: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    AIII,
    CI,
    DIII,
    BDI,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::AIII, Family::CI, Family::DIII, Family::BDI];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::AIII => "AIII",
            Family::CI => "CI",
            Family::DIII => "DIII",
            Family::BDI => "BDI",
        };
        f.write_str(s)
    }
}

#[derive(Deserialize)]
struct RawSpec {
    family: Family,
    p: usize,
    #[serde(default = "one")]
    q: usize,
    compact: bool,
}

fn one() -> usize {
    1
}

/// Which symmetric space, its size, and whether it is the compact form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct ManifoldSpec {
    family: Family,
    p: usize,
    q: usize,
    compact: bool,
}

impl TryFrom<RawSpec> for ManifoldSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        ManifoldSpec::new(raw.family, raw.p, raw.q, raw.compact)
    }
}

impl ManifoldSpec {
    /// `q` is only meaningful for AIII; other families store it as given.
    pub fn new(family: Family, p: usize, q: usize, compact: bool) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidSpec("p and q must be positive".into()));
        }
        if family == Family::AIII && p < q {
            return Err(Error::InvalidSpec(format!("AIII requires p ≥ q, got p={p}, q={q}")));
        }
        if family == Family::DIII && p < 2 {
            return Err(Error::InvalidSpec("DIII requires p ≥ 2".into()));
        }
        Ok(ManifoldSpec { family, p, q, compact })
    }

    /// The Riemann sphere `CP¹ = SU(2)/U(1)`.
    pub fn cp1() -> Self {
        ManifoldSpec { family: Family::AIII, p: 1, q: 1, compact: true }
    }

    /// The unit disc `SU(1,1)/U(1)`.
    pub fn disc() -> Self {
        ManifoldSpec { family: Family::AIII, p: 1, q: 1, compact: false }
    }

    pub fn grassmannian(p: usize, q: usize) -> Result<Self> {
        Self::new(Family::AIII, p, q, true)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn compact(&self) -> bool {
        self.compact
    }

    /// `+1` for compact forms, `−1` for bounded domains.
    pub fn sign(&self) -> f64 {
        if self.compact {
            1.0
        } else {
            -1.0
        }
    }

    /// Shape of a coordinate matrix.
    pub fn point_shape(&self) -> (usize, usize) {
        match self.family {
            Family::AIII => (self.p, self.q),
            Family::CI | Family::DIII => (self.p, self.p),
            Family::BDI => (1, self.p),
        }
    }

    /// Number of independent complex coordinates.
    pub fn complex_dim(&self) -> usize {
        let p = self.p;
        match self.family {
            Family::AIII => p * self.q,
            Family::CI => p * (p + 1) / 2,
            Family::DIII => p * (p - 1) / 2,
            Family::BDI => p,
        }
    }

    /// The independent coordinates, each as the list of matrix entries it fills
    /// and the factor it enters with (CI: upper triangle with diagonal,
    /// DIII: strict upper triangle, mirrored with a sign flip).
    pub fn coordinates(&self) -> Vec<Vec<(usize, usize, f64)>> {
        let p = self.p;
        match self.family {
            Family::AIII => (0..p)
                .flat_map(|i| (0..self.q).map(move |j| vec![(i, j, 1.0)]))
                .collect(),
            Family::CI => (0..p)
                .flat_map(|i| {
                    (i..p).map(move |j| {
                        if i == j {
                            vec![(i, i, 1.0)]
                        } else {
                            vec![(i, j, 1.0), (j, i, 1.0)]
                        }
                    })
                })
                .collect(),
            Family::DIII => (0..p)
                .flat_map(|i| (i + 1..p).map(move |j| vec![(i, j, 1.0), (j, i, -1.0)]))
                .collect(),
            Family::BDI => (0..p).map(|j| vec![(0, j, 1.0)]).collect(),
        }
    }

    /// Builds a coordinate matrix from independent coordinates.
    pub fn embed(&self, coords: &[C64]) -> Result<CMat> {
        let slots = self.coordinates();
        if coords.len() != slots.len() {
            return Err(Error::DimensionMismatch {
                expected: (slots.len(), 1),
                found: (coords.len(), 1),
            });
        }
        let (r, c) = self.point_shape();
        let mut m = CMat::zeros(r, c);
        for (slot, &u) in slots.iter().zip(coords) {
            for &(i, j, f) in slot {
                m[(i, j)] = u * f;
            }
        }
        Ok(m)
    }

    /// Reads the independent coordinates back out of a coordinate matrix.
    pub fn flatten(&self, z: &CMat) -> Vec<C64> {
        self.coordinates().iter().map(|slot| z[(slot[0].0, slot[0].1)]).collect()
    }

    /// Size of the defining representation the coordinates embed into.
    pub fn frame_size(&self) -> usize {
        match self.family {
            Family::AIII => self.p + self.q,
            Family::CI | Family::DIII => 2 * self.p,
            Family::BDI => self.p + 2,
        }
    }

    /// Rows of the top block of the defining representation.
    pub fn top_rows(&self) -> usize {
        self.p
    }

    pub fn origin(&self) -> PointMatrix {
        let (r, c) = self.point_shape();
        PointMatrix { spec: *self, z: CMat::zeros(r, c) }
    }
}

impl fmt::Display for ManifoldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = if self.compact { "compact" } else { "non-compact" };
        match self.family {
            Family::AIII => write!(f, "AIII(p={}, q={}) {form}", self.p, self.q),
            fam => write!(f, "{fam}(p={}) {form}", self.p),
        }
    }
}

/// A validated coordinate matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PointMatrix {
    spec: ManifoldSpec,
    z: CMat,
}

impl PointMatrix {
    pub fn spec(&self) -> &ManifoldSpec {
        &self.spec
    }

    pub fn entries(&self) -> &CMat {
        &self.z
    }

    pub fn into_entries(self) -> CMat {
        self.z
    }

    /// Validates with a symmetry tolerance relative to the entry scale; used
    /// for points produced by the flow rather than supplied by callers.
    pub(crate) fn from_flow(spec: &ManifoldSpec, z: CMat, rel_tol: f64) -> Result<Self> {
        let scale = 1.0 + max_abs(&z);
        validate_with(spec, z, rel_tol * scale)
    }
}

/// Positive highest weight for single-level operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Level(u32);

impl Level {
    pub const ONE: Level = Level(1);

    pub fn new(lambda: u32) -> Result<Self> {
        if lambda == 0 {
            return Err(Error::InvalidLevel("level must be positive".into()));
        }
        Ok(Level(lambda))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }
}

impl TryFrom<u32> for Level {
    type Error = Error;
    fn try_from(v: u32) -> Result<Self> {
        Level::new(v)
    }
}

impl From<Level> for u32 {
    fn from(l: Level) -> u32 {
        l.0
    }
}

/// A single level λ, or a weight vector for the flag-minor kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LevelSpec {
    Single(Level),
    Weights(Vec<u32>),
}

impl LevelSpec {
    pub fn weights(w: Vec<u32>) -> Result<Self> {
        if w.iter().all(|&x| x == 0) {
            return Err(Error::InvalidLevel("at least one weight must be positive".into()));
        }
        Ok(LevelSpec::Weights(w))
    }

    pub fn single(&self) -> Result<Level> {
        match self {
            LevelSpec::Single(l) => Ok(*l),
            LevelSpec::Weights(_) => {
                Err(Error::InvalidLevel("operation needs a single level".into()))
            }
        }
    }
}

impl Default for LevelSpec {
    fn default() -> Self {
        LevelSpec::Single(Level::ONE)
    }
}

/// Checks shape, symmetry and (for bounded domains) strict interior membership.
pub fn validate_point(spec: &ManifoldSpec, z: CMat) -> Result<PointMatrix> {
    validate_with(spec, z, SYMMETRY_TOL)
}

fn validate_with(spec: &ManifoldSpec, mut z: CMat, sym_tol: f64) -> Result<PointMatrix> {
    let shape = spec.point_shape();
    if z.shape() != shape {
        return Err(Error::DimensionMismatch { expected: shape, found: z.shape() });
    }
    if !is_finite(&z) {
        return Err(Error::NonFinite);
    }
    let flip = match spec.family {
        Family::CI => Some(1.0),
        Family::DIII => Some(-1.0),
        _ => None,
    };
    if let Some(f) = flip {
        let zt = z.transpose();
        let residual = max_abs(&(&z - &zt * C64::new(f, 0.0)));
        if residual > sym_tol {
            return Err(Error::SymmetryViolation { residual });
        }
        z = (&z + zt * C64::new(f, 0.0)) * C64::new(0.5, 0.0);
    }
    if !in_domain(spec, &z) {
        return Err(Error::OutsideDomain);
    }
    Ok(PointMatrix { spec: *spec, z })
}

/// Strict interior test; always true for compact forms.
pub fn in_domain(spec: &ManifoldSpec, z: &CMat) -> bool {
    if spec.compact {
        return true;
    }
    match spec.family {
        Family::BDI => {
            let zz: C64 = z.iter().map(|&x| x * x).sum();
            let norm2: f64 = z.iter().map(|x| x.norm_sqr()).sum();
            zz.norm() < 1.0 && 1.0 + zz.norm_sqr() - 2.0 * norm2 > 0.0
        }
        _ => {
            let m = identity(z.nrows()) - z * z.adjoint();
            m.symmetric_eigenvalues().iter().all(|&e| e > DOMAIN_EPS)
        }
    }
}

/// Kernel on raw coordinate matrices; no validation.
pub fn kernel_raw(spec: &ManifoldSpec, z: &CMat, w: &CMat) -> C64 {
    let s = spec.sign();
    match spec.family {
        Family::BDI => {
            let zz: C64 = z.iter().map(|&x| x * x).sum();
            let ww: C64 = w.iter().map(|&x| x * x).sum();
            let zw: C64 = z.iter().zip(w.iter()).map(|(&a, &b)| a * b.conj()).sum();
            C64::new(1.0, 0.0) + zz * ww.conj() + zw * (2.0 * s)
        }
        _ => {
            let p = z.nrows();
            let m = z * w.adjoint() * C64::new(s, 0.0);
            if p == 1 {
                C64::new(1.0, 0.0) + m[(0, 0)]
            } else {
                (identity(p) + m).determinant()
            }
        }
    }
}

/// `K(Z, W̄)`: holomorphic in `Z`, antiholomorphic in `W`.
pub fn kernel(z: &PointMatrix, w: &PointMatrix) -> Result<C64> {
    if z.spec != w.spec {
        return Err(Error::SpecMismatch);
    }
    Ok(kernel_raw(&z.spec, &z.z, &w.z))
}

/// `K(Z,W̄)^e / (K(Z,Z̄)^e K(W,W̄)^e)^{1/2}` with `e = ±λ` (minus for bounded
/// domains, where the reproducing kernel of the holomorphic discrete series is
/// `K^{−λ}`). This is the coherent-state overlap `⟨W|Z⟩`, of modulus at most one.
pub fn normalized_overlap(level: Level, z: &PointMatrix, w: &PointMatrix) -> Result<C64> {
    let kzw = kernel(z, w)?;
    let kzz = kernel_raw(&z.spec, &z.z, &z.z).re;
    let kww = kernel_raw(&w.spec, &w.z, &w.z).re;
    let ratio = kzw / (kzz * kww).sqrt();
    let e = level.get() as i32;
    Ok(if z.spec.compact { ratio.powi(e) } else { ratio.powi(-e) })
}

/// Fubini–Study distance `arccos |⟨W|Z⟩|` at level one.
///
/// Both compact forms (principal angles between the frames) and bounded
/// domains (a cancellation-free Gram identity) keep full relative precision
/// for nearby rays.
pub fn projective_distance(z: &PointMatrix, w: &PointMatrix) -> Result<f64> {
    if z.spec != w.spec {
        return Err(Error::SpecMismatch);
    }
    if z.z == w.z {
        return Ok(0.0);
    }
    if z.spec.compact {
        Ok(frame::principal_angle_distance(&frame::frame(z), &frame::frame(w)))
    } else {
        Ok(frame::indefinite_distance(&z.spec, &frame::frame(z), &frame::frame(w)))
    }
}
