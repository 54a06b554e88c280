//! Every family embeds its chart in a defining representation `C^n`:
//! a point `Z` becomes a frame `F(Z)` whose column span is the coherent ray,
//! and the kernel is the Gram determinant `det(F(W)† G F(Z))` for the
//! invariant Hermitian form `G`.
//!
//! * AIII, CI, DIII: `F(Z) = [Z; I]`, top block of `p` rows.
//! * BDI: the null vector `x(z) = (√2 z, 1, z·z)` of the quadric
//!   `2 z·z − 2 x₊ x₋ = 0`.
//!
//! Group elements act on frames by left multiplication and the chart is
//! recovered by [`dechart`], which is how the fractional-linear action is
//! realized uniformly.

use std::f64::consts::SQRT_2;

use super::{Family, ManifoldSpec, PointMatrix};
use crate::error::{Error, Result};
use crate::matrix::{frobenius, identity, max_abs, CMat, C64};

/// Relative size below which the chart determinant counts as zero.
pub const CHART_EPS: f64 = 1e-12;

pub fn frame(z: &PointMatrix) -> CMat {
    frame_raw(z.spec(), z.entries())
}

pub fn frame_raw(spec: &ManifoldSpec, z: &CMat) -> CMat {
    match spec.family() {
        Family::BDI => {
            let p = spec.p();
            let mut x = CMat::zeros(p + 2, 1);
            for j in 0..p {
                x[(j, 0)] = z[(0, j)] * SQRT_2;
            }
            x[(p, 0)] = C64::new(1.0, 0.0);
            x[(p + 1, 0)] = z.iter().map(|&u| u * u).sum();
            x
        }
        _ => {
            let (r, c) = (z.nrows(), z.ncols());
            let mut f = CMat::zeros(r + c, c);
            f.view_mut((0, 0), (r, c)).copy_from(z);
            f.view_mut((r, 0), (c, c)).fill_with_identity();
            f
        }
    }
}

/// Diagonal of the invariant Hermitian form: all `+1` for compact forms,
/// `−1` on the first `p` coordinates otherwise.
pub fn hermitian_signs(spec: &ManifoldSpec) -> Vec<f64> {
    let n = spec.frame_size();
    (0..n)
        .map(|i| if !spec.compact() && i < spec.p() { -1.0 } else { 1.0 })
        .collect()
}

pub fn hermitian_form(spec: &ManifoldSpec) -> CMat {
    let s = hermitian_signs(spec);
    CMat::from_fn(s.len(), s.len(), |i, j| if i == j { C64::new(s[i], 0.0) } else { C64::new(0.0, 0.0) })
}

/// The complex bilinear form `B` preserved by the structure group
/// (`Uᵀ B U = B`), if the family has one.
pub fn structure_form(spec: &ManifoldSpec) -> Option<CMat> {
    let p = spec.p();
    let one = C64::new(1.0, 0.0);
    match spec.family() {
        Family::AIII => None,
        Family::CI | Family::DIII => {
            let flip = if spec.family() == Family::CI { -one } else { one };
            let mut b = CMat::zeros(2 * p, 2 * p);
            for i in 0..p {
                b[(i, p + i)] = one;
                b[(p + i, i)] = flip;
            }
            Some(b)
        }
        Family::BDI => {
            let mut b = CMat::identity(p + 2, p + 2);
            b[(p, p)] = C64::new(0.0, 0.0);
            b[(p + 1, p + 1)] = C64::new(0.0, 0.0);
            b[(p, p + 1)] = -one;
            b[(p + 1, p)] = -one;
            Some(b)
        }
    }
}

/// Projects `h` onto the Lie algebra of the structure group and returns the
/// projection with the size of the discarded part.
///
/// The algebra is cut out by two commuting involutions: `h ↦ G h† G`
/// (Hermitian with respect to `G`) and `h ↦ −B⁻¹ hᵀ B`.
pub fn project_generator(spec: &ManifoldSpec, h: &CMat) -> Result<(CMat, f64)> {
    let n = spec.frame_size();
    if h.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: (n, n), found: h.shape() });
    }
    let half = C64::new(0.5, 0.0);
    let g = hermitian_form(spec);
    let mut out = (h + &g * h.adjoint() * &g) * half;
    if let Some(b) = structure_form(spec) {
        // B is orthogonal and ±symmetric, so B⁻¹ = Bᵀ.
        let binv = b.transpose();
        out = (&out - &binv * out.transpose() * &b) * half;
    }
    let residual = max_abs(&(h - &out));
    Ok((out, residual))
}

/// Chart coordinates of a frame, with the gauge factor by which the frame
/// differs from the canonical [`frame`] of the result.
pub fn dechart(spec: &ManifoldSpec, f: &CMat) -> Result<(CMat, C64)> {
    let p = spec.p();
    let scale = frobenius(f).max(1.0);
    match spec.family() {
        Family::BDI => {
            let g = f[(p, 0)];
            if g.norm() <= CHART_EPS * scale {
                return Err(Error::ChartOverflow { t: None });
            }
            let z = CMat::from_fn(1, p, |_, j| f[(j, 0)] / (g * SQRT_2));
            Ok((z, g))
        }
        _ => {
            let k = f.ncols();
            let bottom = f.rows(p, k).clone_owned();
            let det = bottom.determinant();
            if !(det.norm() > CHART_EPS * scale.powi(k as i32)) {
                return Err(Error::ChartOverflow { t: None });
            }
            let inv = bottom.try_inverse().ok_or(Error::ChartOverflow { t: None })?;
            Ok((f.rows(0, p) * inv, det))
        }
    }
}

/// `det(F_w† G F_z)`.
pub fn frame_kernel(spec: &ManifoldSpec, fz: &CMat, fw: &CMat) -> C64 {
    let g = hermitian_form(spec);
    (fw.adjoint() * g * fz).determinant()
}

/// Fubini–Study distance between the column spans of two frames, from the
/// principal angles between them.
pub fn principal_angle_distance(fz: &CMat, fw: &CMat) -> f64 {
    if fz.ncols() == 1 {
        // a single angle between unit vectors
        let u = fz / C64::new(fz.norm(), 0.0);
        let v = fw / C64::new(fw.norm(), 0.0);
        let ov = v.dotc(&u);
        return (&u - &v * ov).norm().atan2(ov.norm());
    }
    let qz = fz.clone().qr().q();
    let qw = fw.clone().qr().q();
    let resid = &qz - &qw * (qw.adjoint() * &qz);
    let mut sines: Vec<f64> = resid.svd(false, false).singular_values.iter().copied().collect();
    let mut cosines: Vec<f64> = (qw.adjoint() * &qz).svd(false, false).singular_values.iter().copied().collect();
    sines.sort_by(f64::total_cmp);
    cosines.sort_by(|a, b| b.total_cmp(a));
    // ln cos θ per angle, from whichever of sin or cos is well conditioned
    let log_c: f64 = sines
        .iter()
        .zip(&cosines)
        .map(|(&s, &c)| if s < 0.5 { 0.5 * (-(s * s)).ln_1p() } else { c.ln() })
        .sum();
    let s2 = -(2.0 * log_c).exp_m1();
    s2.max(0.0).sqrt().atan2(log_c.exp())
}

/// Distance `arccos |⟨W|Z⟩|` on a bounded domain, from the frames.
///
/// With `A = F_z†GF_z`, `B = F_w†GF_w` and `C = F_w†GF_z` the level-one
/// overlap is `|ov|² = det A det B / |det C|²`. Writing `C†B⁻¹C − A` as
/// `E†B⁻¹E − ΔF†GΔF` with `ΔF = F_z − F_w`, `E = F_w†GΔF` avoids the
/// cancellation between O(1) terms, so nearby points keep full relative
/// precision.
pub fn indefinite_distance(spec: &ManifoldSpec, fz: &CMat, fw: &CMat) -> f64 {
    let g = hermitian_form(spec);
    let a = fz.adjoint() * &g * fz;
    let b = fw.adjoint() * &g * fw;
    let df = fz - fw;
    let e = fw.adjoint() * &g * &df;
    let (Some(binv), Some(chol)) = (b.clone().try_inverse(), a.clone().cholesky()) else {
        return f64::INFINITY;
    };
    let n = e.adjoint() * binv * &e - df.adjoint() * &g * &df;
    let linv = chol.l().try_inverse().unwrap_or_else(|| CMat::zeros(a.nrows(), a.ncols()));
    let y = &linv * n * linv.adjoint();
    let y = (&y + y.adjoint()) * C64::new(0.5, 0.0);
    let log_sec2: f64 = y.symmetric_eigenvalues().iter().map(|&mu| mu.max(0.0).ln_1p()).sum();
    log_sec2.exp_m1().max(0.0).sqrt().atan()
}

/// Checks that `u` preserves the Hermitian form, returning `‖G U† G U − I‖`.
pub fn unitarity_defect(spec: &ManifoldSpec, u: &CMat) -> f64 {
    let g = hermitian_form(spec);
    max_abs(&(&g * u.adjoint() * &g * u - identity(u.nrows())))
}
