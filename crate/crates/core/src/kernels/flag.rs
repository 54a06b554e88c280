//! Kernels on flag manifolds of `SU(n)` from corner minors.
//!
//! A point of the big cell is an upper-unipotent matrix `ζ`; for two points
//! the kernel at weight `(λ₁, …, λ_{n−1})` is `Π Δ_j(ζ₁†ζ₂)^{λ_j}` with `Δ_j`
//! the lower-right principal minor of order `j`. With `ζ(z) = [[1, z], [0, 1]]`
//! this reduces to the projective-line kernel `1 + z̄₁ z₂`.

use crate::error::{Error, Result};
use crate::matrix::{identity, CMat, C64};

/// Minors smaller than this (relative to the entry scale) count as zero.
pub const MINOR_EPS: f64 = 1e-14;

/// `n×n` upper-unipotent matrix filled row by row from the strict upper triangle.
pub fn upper_unipotent(n: usize, entries: &[C64]) -> Result<CMat> {
    let want = n * n.saturating_sub(1) / 2;
    if entries.len() != want {
        return Err(Error::DimensionMismatch { expected: (want, 1), found: (entries.len(), 1) });
    }
    let mut m = identity(n);
    let mut it = entries.iter();
    for i in 0..n {
        for j in i + 1..n {
            m[(i, j)] = *it.next().unwrap();
        }
    }
    Ok(m)
}

/// Lower-right principal minor of order `j`.
pub fn corner_minor(m: &CMat, j: usize) -> C64 {
    let n = m.nrows();
    m.view((n - j, n - j), (j, j)).determinant()
}

pub fn flag_minor_kernel(weights: &[u32], m: &CMat) -> Result<C64> {
    let n = m.nrows();
    if m.ncols() != n || weights.len() + 1 != n {
        return Err(Error::DimensionMismatch { expected: (weights.len() + 1, weights.len() + 1), found: m.shape() });
    }
    if weights.iter().all(|&w| w == 0) {
        return Err(Error::InvalidLevel("at least one weight must be positive".into()));
    }
    let scale = m.iter().fold(1.0f64, |a, z| a.max(z.norm()));
    let mut out = C64::new(1.0, 0.0);
    for (idx, &w) in weights.iter().enumerate() {
        if w == 0 {
            continue;
        }
        let order = idx + 1;
        let d = corner_minor(m, order);
        if d.norm() <= MINOR_EPS * scale.powi(order as i32) {
            return Err(Error::SingularMinor { order });
        }
        out *= d.powi(w as i32);
    }
    Ok(out)
}

/// Normalized coherent-state overlap `⟨ζ₁|ζ₂⟩` on the flag manifold.
pub fn flag_overlap(weights: &[u32], zeta1: &CMat, zeta2: &CMat) -> Result<C64> {
    let k12 = flag_minor_kernel(weights, &(zeta1.adjoint() * zeta2))?;
    let k11 = flag_minor_kernel(weights, &(zeta1.adjoint() * zeta1))?.re;
    let k22 = flag_minor_kernel(weights, &(zeta2.adjoint() * zeta2))?.re;
    Ok(k12 / (k11 * k22).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{kernel, validate_point, ManifoldSpec};
    use crate::matrix::{c64, scalar};

    #[test]
    fn identity_has_unit_kernel() {
        assert_eq!(flag_minor_kernel(&[1], &identity(2)).unwrap(), c64(1.0, 0.0));
        assert_eq!(flag_minor_kernel(&[2, 3], &identity(3)).unwrap(), c64(1.0, 0.0));
    }

    #[test]
    fn two_by_two_reproduces_projective_line() {
        let (z1, z2) = (c64(0.4, -0.9), c64(-1.3, 0.2));
        let m = upper_unipotent(2, &[z1]).unwrap().adjoint() * upper_unipotent(2, &[z2]).unwrap();
        let k = flag_minor_kernel(&[1], &m).unwrap();
        assert!((k - (1.0 + z1.conj() * z2)).norm() < 1e-15);
        let k2 = flag_minor_kernel(&[2], &m).unwrap();
        assert!((k2 - (1.0 + z1.conj() * z2).powi(2)).norm() < 1e-14);

        let spec = ManifoldSpec::cp1();
        let zp = validate_point(&spec, scalar(z2)).unwrap();
        let wp = validate_point(&spec, scalar(z1)).unwrap();
        assert!((kernel(&zp, &wp).unwrap() - k).norm() < 1e-15);
    }

    #[test]
    fn antipodal_charts_give_singular_minor() {
        // 1 + z̄₁z₂ = 0
        let m = upper_unipotent(2, &[c64(1.0, 0.0)]).unwrap().adjoint()
            * upper_unipotent(2, &[c64(-1.0, 0.0)]).unwrap();
        assert_eq!(flag_minor_kernel(&[1], &m), Err(Error::SingularMinor { order: 1 }));
        // a zero weight skips the minor
        assert!(flag_minor_kernel(&[1, 0], &identity(3)).is_ok());
    }

    #[test]
    fn flag_overlap_is_bounded_and_normalized() {
        let a = upper_unipotent(3, &[c64(0.2, 0.1), c64(-0.5, 0.3), c64(0.7, -0.4)]).unwrap();
        let b = upper_unipotent(3, &[c64(1.1, 0.0), c64(0.0, 0.6), c64(-0.2, -0.9)]).unwrap();
        let same = flag_overlap(&[1, 2], &a, &a).unwrap();
        assert!((same - c64(1.0, 0.0)).norm() < 1e-14);
        let ov = flag_overlap(&[1, 2], &a, &b).unwrap();
        assert!(ov.norm() < 1.0);
    }

    #[test]
    fn shape_checks() {
        assert!(upper_unipotent(3, &[c64(0.0, 0.0)]).is_err());
        assert!(flag_minor_kernel(&[1, 1], &identity(2)).is_err());
        assert!(flag_minor_kernel(&[0], &identity(2)).is_err());
    }
}
