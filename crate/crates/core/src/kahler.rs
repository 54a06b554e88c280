//! Kähler potential `F = s·λ·ln K(Z, Z̄)`, its metric, and the connection
//! one-form `θ(v) = Im(∂F·v)`.
//!
//! The sign `s` is `+1` on compact forms and `−1` on bounded domains, so the
//! metric is positive definite on both. Derivatives are taken by central
//! differences over the independent complex coordinates of the family.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{in_domain, kernel_raw, Family, Level, ManifoldSpec, PointMatrix};
use crate::matrix::{max_abs, CMat, C64};

/// Step for the four-point second-derivative stencil.
pub const METRIC_STEP: f64 = 1e-4;
/// Step for the directional gradient.
pub const GRADIENT_STEP: f64 = 1e-6;
/// Eigenvalue floor for [`positivity_check`].
pub const POSITIVITY_FLOOR: f64 = 1e-10;

/// `s ln K(Z, Z̄)`, or `None` off the domain.
fn base_potential(spec: &ManifoldSpec, z: &CMat) -> Option<f64> {
    if !in_domain(spec, z) {
        return None;
    }
    let k = kernel_raw(spec, z, z).re;
    (k > 0.0).then(|| spec.sign() * k.ln())
}

pub fn potential(level: Level, z: &PointMatrix) -> Result<f64> {
    let f = base_potential(z.spec(), z.entries()).ok_or(Error::OutsideDomain)?;
    Ok(level.as_f64() * f)
}

fn shifted(z: &CMat, slot: &[(usize, usize, f64)], du: C64) -> CMat {
    let mut out = z.clone();
    for &(i, j, f) in slot {
        out[(i, j)] += du * f;
    }
    out
}

/// Hermitian metric `h_{μν̄} = ∂_μ ∂̄_ν F` over the flattened coordinates.
pub fn metric(level: Level, z: &PointMatrix) -> Result<CMat> {
    metric_with_step(level, z, METRIC_STEP)
}

pub fn metric_with_step(level: Level, z: &PointMatrix, h: f64) -> Result<CMat> {
    let spec = z.spec();
    let slots = spec.coordinates();
    let n = slots.len();
    let z0 = z.entries();
    let eval = |m: &CMat| base_potential(spec, m).ok_or(Error::BoundaryTooClose);

    // Real directions: (slot, 0 for Re / 1 for Im).
    let dirs: Vec<(usize, C64)> = (0..n)
        .flat_map(|k| [(k, C64::new(h, 0.0)), (k, C64::new(0.0, h))])
        .collect();
    let m = dirs.len();
    let mut hess = vec![0.0; m * m];
    for a in 0..m {
        for b in a..m {
            let mut acc = 0.0;
            for (sa, sb, w) in [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0)] {
                let pa = shifted(z0, &slots[dirs[a].0], dirs[a].1 * sa);
                let pab = shifted(&pa, &slots[dirs[b].0], dirs[b].1 * sb);
                acc += w * eval(&pab)?;
            }
            let v = acc / (4.0 * h * h);
            hess[a * m + b] = v;
            hess[b * m + a] = v;
        }
    }
    let lam = level.as_f64();
    let at = |a: usize, b: usize| hess[a * m + b];
    let mut g = CMat::from_fn(n, n, |mu, nu| {
        let (xm, ym, xn, yn) = (2 * mu, 2 * mu + 1, 2 * nu, 2 * nu + 1);
        C64::new(at(xm, xn) + at(ym, yn), at(xm, yn) - at(ym, xn)) * 0.25
    });
    g = (&g + g.adjoint()) * C64::new(0.5 * lam, 0.0);
    Ok(g)
}

fn check_tangent(spec: &ManifoldSpec, dz: &CMat) -> Result<()> {
    let shape = spec.point_shape();
    if dz.shape() != shape {
        return Err(Error::DimensionMismatch { expected: shape, found: dz.shape() });
    }
    let flip = match spec.family() {
        Family::CI => 1.0,
        Family::DIII => -1.0,
        _ => return Ok(()),
    };
    let residual = max_abs(&(dz - dz.transpose() * C64::new(flip, 0.0)));
    if residual > 1e-9 * (1.0 + max_abs(dz)) {
        return Err(Error::SymmetryViolation { residual });
    }
    Ok(())
}

/// `θ(dZ) = Im(∂F·dZ)`, from `Im(∂F·v) = −½ D_{iv} F`.
pub fn connection_eval(level: Level, z: &PointMatrix, dz: &CMat) -> Result<f64> {
    let spec = z.spec();
    check_tangent(spec, dz)?;
    let scale = max_abs(dz);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let eps = GRADIENT_STEP / scale;
    let step = dz * C64::new(0.0, eps);
    let z0 = z.entries();
    let fp = base_potential(spec, &(z0 + &step)).ok_or(Error::BoundaryTooClose)?;
    let fm = base_potential(spec, &(z0 - &step)).ok_or(Error::BoundaryTooClose)?;
    Ok(-0.5 * level.as_f64() * (fp - fm) / (2.0 * eps))
}

/// Closed form `Im(∂F·dZ)` for the determinant families,
/// `λ Im tr((I + sZZ†)⁻¹ dZ Z†)`. Used to validate the difference scheme.
pub fn connection_exact(level: Level, z: &PointMatrix, dz: &CMat) -> Result<f64> {
    let spec = z.spec();
    check_tangent(spec, dz)?;
    let zm = z.entries();
    let lam = level.as_f64();
    let s = spec.sign();
    let val = match spec.family() {
        Family::BDI => {
            let zz: C64 = zm.iter().map(|&u| u * u).sum();
            let k = kernel_raw(spec, zm, zm).re;
            // ∂K·dz = 2(z̄·z̄)(z·dz) + 2s(z̄·dz)
            let z_dz: C64 = zm.iter().zip(dz.iter()).map(|(&a, &b)| a * b).sum();
            let zb_dz: C64 = zm.iter().zip(dz.iter()).map(|(&a, &b)| a.conj() * b).sum();
            (zz.conj() * z_dz * 2.0 + zb_dz * (2.0 * s)) * (s / k)
        }
        _ => {
            let p = zm.nrows();
            let mm = CMat::identity(p, p) + zm * zm.adjoint() * C64::new(s, 0.0);
            let inv = mm.try_inverse().ok_or(Error::OutsideDomain)?;
            (inv * dz * zm.adjoint()).trace()
        }
    };
    Ok(lam * val.im)
}

pub fn positivity_check(level: Level, z: &PointMatrix) -> Result<bool> {
    let g = metric(level, z)?;
    Ok(g.symmetric_eigenvalues().iter().all(|&e| e > POSITIVITY_FLOOR))
}

/// Potential and metric at a point.
#[derive(Clone, Debug, Serialize)]
pub struct KahlerSample {
    pub spec: ManifoldSpec,
    #[serde(with = "crate::matrix::json")]
    pub point: CMat,
    pub potential: f64,
    #[serde(with = "crate::matrix::json")]
    pub metric: CMat,
    pub sign: f64,
}

impl KahlerSample {
    pub fn at(level: Level, z: &PointMatrix) -> Result<Self> {
        Ok(KahlerSample {
            spec: *z.spec(),
            point: z.entries().clone(),
            potential: potential(level, z)?,
            metric: metric(level, z)?,
            sign: z.spec().sign(),
        })
    }
}
