//! Geometric phases from kernel arguments and line integrals, the dynamical
//! phase, and their bookkeeping in [`PhaseReport`].
//!
//! The geodesic triangle with vertices `(0, Z, W)` carries phase
//! `s·λ·Arg K(W, Z̄)`. Summing triangles over a fan from the origin gives the
//! symplectic area of any polygon, which is compared against the line integral
//! of `θ = Im(∂F·dZ)` as a Stokes check.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::dynamics::{expectation, HamiltonianSchedule, Trajectory};
use crate::error::{Error, Result};
use crate::kahler::connection_eval;
use crate::kernels::{kernel, kernel_raw, projective_distance, Level, PointMatrix};
use crate::matrix::{CMat, C64};

/// Default tolerance on the Fubini–Study gap between a loop's endpoints.
pub const CLOSURE_TOL: f64 = 1e-6;
/// Bound on `|wrap(α − β − γ)|` for a report to count as consistent.
pub const CONSISTENCY_TOL: f64 = 1e-6;
/// How close a kernel argument may come to `±π` inside a loop sum.
pub const BRANCH_MARGIN: f64 = 1e-3;
/// Relative modulus below which a kernel counts as zero.
pub const KERNEL_EPS: f64 = 1e-14;

/// Maps an angle into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    PI - (PI - x).rem_euclid(TAU)
}

fn kernel_arg(level: Level, z: &PointMatrix, w: &PointMatrix, margin: Option<f64>) -> Result<f64> {
    let k = kernel(w, z)?;
    let norm = (kernel_raw(z.spec(), z.entries(), z.entries()).re
        * kernel_raw(w.spec(), w.entries(), w.entries()).re)
        .sqrt();
    if k.norm() <= KERNEL_EPS * norm {
        return Err(Error::KernelZero);
    }
    let arg = k.arg();
    if let Some(m) = margin {
        if arg.abs() > PI - m {
            return Err(Error::BranchCut);
        }
    }
    Ok(z.spec().sign() * level.as_f64() * arg)
}

/// Phase of the geodesic triangle `(0, z, w)`, principal branch.
pub fn triangle_phase(level: Level, z: &PointMatrix, w: &PointMatrix) -> Result<f64> {
    kernel_arg(level, z, w, None)
}

/// Fan sum of triangle phases around a closed polygon (the last vertex joins
/// back to the first).
pub fn polygon_phase(level: Level, vertices: &[PointMatrix]) -> Result<f64> {
    fan_sum(level, vertices, None)
}

fn fan_sum(level: Level, vertices: &[PointMatrix], margin: Option<f64>) -> Result<f64> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    let mut total = 0.0;
    for i in 0..n {
        total += kernel_arg(level, &vertices[i], &vertices[(i + 1) % n], margin)?;
    }
    Ok(total)
}

/// Fan sum for a loop given by a sampler over `[0, 1)`, doubling the sample
/// count (up to three times) whenever an increment lands near the branch cut.
pub fn loop_phase<F>(level: Level, samples: usize, mut sampler: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<PointMatrix>,
{
    let mut n = samples;
    for attempt in 0..4 {
        let pts = (0..n).map(|k| sampler(k as f64 / n as f64)).collect::<Result<Vec<_>>>()?;
        match fan_sum(level, &pts, Some(BRANCH_MARGIN)) {
            Err(Error::BranchCut) if attempt < 3 => n *= 2,
            other => return other,
        }
    }
    unreachable!()
}

/// Fourth-order derivative of equally spaced samples with respect to the
/// sample index; one-sided stencils at both ends.
fn index_derivative(points: &[PointMatrix], k: usize) -> CMat {
    let n = points.len() - 1;
    let z = |i: usize| points[i].entries();
    let (idx, w): ([usize; 5], [f64; 5]) = if k < 2 {
        if k == 0 {
            ([0, 1, 2, 3, 4], [-25.0, 48.0, -36.0, 16.0, -3.0])
        } else {
            ([0, 1, 2, 3, 4], [-3.0, -10.0, 18.0, -6.0, 1.0])
        }
    } else if k + 2 > n {
        if k == n {
            ([n, n - 1, n - 2, n - 3, n - 4], [25.0, -48.0, 36.0, -16.0, 3.0])
        } else {
            ([n, n - 1, n - 2, n - 3, n - 4], [3.0, 10.0, -18.0, 6.0, -1.0])
        }
    } else {
        ([k - 2, k - 1, k, k + 1, k + 2], [1.0, -8.0, 0.0, 8.0, -1.0])
    };
    let mut d = CMat::zeros(z(k).nrows(), z(k).ncols());
    for (i, wi) in idx.iter().zip(w) {
        // differences keep a constant loop exactly stationary
        if wi != 0.0 {
            d += (z(*i) - z(k)) * C64::new(wi / 12.0, 0.0);
        }
    }
    d
}

/// `∮ θ` along a loop sampled at equally spaced parameter values, the last
/// sample closing onto the first. Tangents come from fourth-order differences
/// of the samples and the integral from the trapezoid rule with Gregory end
/// corrections. Loops with fewer than 8 samples fall back to chords. Returns
/// the raw (unwrapped) value.
pub fn line_integral_phase(level: Level, points: &[PointMatrix], tol: f64) -> Result<f64> {
    let n = points.len();
    if n < 2 {
        return Ok(0.0);
    }
    let gap = projective_distance(&points[n - 1], &points[0])?;
    if gap > tol {
        return Err(Error::NotClosed { residual: gap, tol });
    }
    if n < 8 {
        let mut total = 0.0;
        for k in 0..n {
            let (a, b) = (&points[k], &points[(k + 1) % n]);
            let chord = b.entries() - a.entries();
            total += 0.5 * (connection_eval(level, a, &chord)? + connection_eval(level, b, &chord)?);
        }
        return Ok(total);
    }
    let vals = (0..n)
        .map(|k| connection_eval(level, &points[k], &index_derivative(points, k)))
        .collect::<Result<Vec<_>>>()?;
    Ok(gregory_sum(&vals, 1.0, &[]))
}

const GREGORY: [f64; 3] = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];

/// Trapezoid rule with Gregory end corrections on a uniform grid of spacing
/// `h`, applied separately on each piece between the `breaks` (node indices
/// where the integrand may have a kink). Pieces shorter than six intervals
/// use the plain trapezoid rule.
pub(crate) fn gregory_sum(values: &[f64], h: f64, breaks: &[usize]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mut cuts = vec![0];
    cuts.extend(breaks.iter().copied().filter(|&b| b > 0 && b < n - 1));
    cuts.push(n - 1);
    cuts.dedup();
    let mut total = 0.0;
    for piece in cuts.windows(2) {
        let (a, b) = (piece[0], piece[1]);
        if b - a >= 6 {
            for (k, v) in values.iter().enumerate().take(b + 1).skip(a) {
                let edge = (k - a).min(b - k);
                total += GREGORY.get(edge).copied().unwrap_or(1.0) * v;
            }
        } else {
            total += values[a..=b].windows(2).map(|w| 0.5 * (w[0] + w[1])).sum::<f64>();
        }
    }
    total * h
}

/// `∫ f dt` over sampled values. Uniform grids get the Gregory rule, split at
/// the schedule's sample times (where the coefficients have kinks);
/// anything else gets the trapezoid rule.
pub(crate) fn time_integral(times: &[f64], values: &[f64], schedule: &HamiltonianSchedule) -> f64 {
    let n = times.len();
    if n < 2 {
        return 0.0;
    }
    let h = (times[n - 1] - times[0]) / (n - 1) as f64;
    let uniform = times.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h);
    if !uniform || !(h > 0.0) {
        return times.windows(2).zip(values.windows(2)).map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1])).sum();
    }
    let breaks: Vec<usize> = if schedule.is_constant() {
        Vec::new()
    } else {
        schedule
            .samples()
            .iter()
            .filter_map(|row| {
                let k = ((row[0] - times[0]) / h).round();
                (k > 0.0 && k < (n - 1) as f64).then_some(k as usize)
            })
            .collect()
    };
    gregory_sum(values, h, &breaks)
}

/// `∫ ⟨H(t)⟩ dt` on the trajectory's own grid, with Gregory end corrections
/// on each piece between schedule samples.
pub fn dynamical_phase(level: Level, traj: &Trajectory, schedule: &HamiltonianSchedule) -> Result<f64> {
    let (t, z) = (traj.times(), traj.points());
    if t.len() != z.len() {
        return Err(Error::GridMismatch("times and points differ in length".into()));
    }
    if t.len() < 2 {
        return Ok(0.0);
    }
    let (lo, hi) = schedule.span();
    if !schedule.is_constant() && (t[0] < lo - 1e-12 || t[t.len() - 1] > hi + 1e-12) {
        return Err(Error::GridMismatch(format!(
            "trajectory covers [{}, {}], schedule covers [{lo}, {hi}]",
            t[0],
            t[t.len() - 1]
        )));
    }
    let bound = schedule.bind(traj.spec())?;
    let vals = t
        .iter()
        .zip(z)
        .map(|(&tk, zk)| expectation(level, zk, &bound.at(tk)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(time_integral(t, &vals, schedule))
}

/// Total, dynamical and geometric phase of one cyclic run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub alpha_raw: f64,
    pub beta_raw: f64,
    pub gamma_raw: f64,
    pub residual: f64,
    /// `wrap(α − β − γ)`.
    pub defect: f64,
    pub consistent: bool,
    pub method: String,
}

pub fn assemble_report(alpha: f64, beta: f64, gamma: f64, residual: f64) -> PhaseReport {
    let defect = wrap_angle(alpha - beta - gamma);
    PhaseReport {
        alpha: wrap_angle(alpha),
        beta: wrap_angle(beta),
        gamma: wrap_angle(gamma),
        alpha_raw: alpha,
        beta_raw: beta,
        gamma_raw: gamma,
        residual,
        defect,
        consistent: defect.abs() < CONSISTENCY_TOL,
        method: "classical".into(),
    }
}

impl PhaseReport {
    pub fn with_method(mut self, method: &str) -> Self {
        self.method = method.into();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{validate_point, ManifoldSpec};
    use crate::loops::latitude;
    use crate::matrix::{c64, from_rows, scalar, C64};
    use std::f64::consts::FRAC_PI_4;

    fn cp1(z: C64) -> PointMatrix {
        validate_point(&ManifoldSpec::cp1(), scalar(z)).unwrap()
    }

    #[test]
    fn wrap_is_half_open() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(TAU) - 0.0).abs() < 1e-15);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_angle(0.25), 0.25);
    }

    #[test]
    fn octant_triangle() {
        let (z, w) = (cp1(c64(1.0, 0.0)), cp1(c64(0.0, 1.0)));
        let g = triangle_phase(Level::ONE, &z, &w).unwrap();
        assert!((g - FRAC_PI_4).abs() < 1e-12);
        assert_eq!(triangle_phase(Level::ONE, &w, &z).unwrap(), -g);
        let g2 = triangle_phase(Level::new(2).unwrap(), &z, &w).unwrap();
        assert!((g2 - 2.0 * FRAC_PI_4).abs() < 1e-12);
        assert_eq!(triangle_phase(Level::ONE, &z, &z).unwrap(), 0.0);
    }

    #[test]
    fn grassmannian_triangle_reduces_to_octant() {
        let spec = ManifoldSpec::grassmannian(2, 2).unwrap();
        let (o, l, i) = (c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 1.0));
        let z = validate_point(&spec, from_rows(&[&[l, o], &[o, o]])).unwrap();
        let w = validate_point(&spec, from_rows(&[&[i, o], &[o, o]])).unwrap();
        assert!((triangle_phase(Level::ONE, &z, &w).unwrap() - FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn antipodal_vertices_have_zero_kernel() {
        let r = triangle_phase(Level::ONE, &cp1(c64(1.0, 0.0)), &cp1(c64(-1.0, 0.0)));
        assert_eq!(r, Err(Error::KernelZero));
    }

    #[test]
    fn polygons() {
        let (z, w) = (cp1(c64(1.0, 0.0)), cp1(c64(0.0, 1.0)));
        let o = ManifoldSpec::cp1().origin();
        assert_eq!(polygon_phase(Level::ONE, &[z.clone(), w.clone(), z.clone()]).unwrap(), 0.0);
        let tri = polygon_phase(Level::ONE, &[o, z.clone(), w]).unwrap();
        assert!((tri - FRAC_PI_4).abs() < 1e-12);
        assert_eq!(polygon_phase(Level::ONE, &[z.clone(), z]), Err(Error::TooFewVertices(2)));
    }

    #[test]
    fn regular_polygon_on_equator() {
        let n = 2000;
        let pts: Vec<_> = (0..n)
            .map(|k| cp1(C64::from_polar(1.0, TAU * k as f64 / n as f64)))
            .collect();
        let g = polygon_phase(Level::ONE, &pts).unwrap();
        assert!((g - PI).abs() < 1e-4, "{g}");
    }

    #[test]
    fn loop_phase_resamples_near_the_cut() {
        // With three samples the first edge spans almost half a turn on |z| = 2.
        let g = |t: f64| {
            let s = if t <= 1.0 / 3.0 { t * 3.0 * (0.5 - 1e-4) } else { 0.5 - 1e-4 + (t - 1.0 / 3.0) * 1.5 * (0.5 + 1e-4) };
            Ok(cp1(C64::from_polar(2.0, TAU * s)))
        };
        let three: Vec<_> = (0..3).map(|k| g(k as f64 / 3.0).unwrap()).collect();
        assert_eq!(fan_sum(Level::ONE, &three, Some(BRANCH_MARGIN)), Err(Error::BranchCut));
        let six: Vec<_> = (0..6).map(|k| g(k as f64 / 6.0).unwrap()).collect();
        let direct = polygon_phase(Level::ONE, &six).unwrap();
        assert_eq!(loop_phase(Level::ONE, 3, g).unwrap(), direct);
    }

    #[test]
    fn latitude_line_integral() {
        let spec = ManifoldSpec::cp1();
        let pts = latitude(&spec, 1.0, 4000).unwrap();
        let g = line_integral_phase(Level::ONE, &pts, CLOSURE_TOL).unwrap();
        assert!((g - PI).abs() < 1e-5, "{g}");
        let g2 = line_integral_phase(Level::new(2).unwrap(), &pts, CLOSURE_TOL).unwrap();
        assert!((g2 - TAU).abs() < 2e-5);
        assert!(wrap_angle(g2).abs() < 2e-5);
    }

    #[test]
    fn open_path_is_rejected() {
        let pts = vec![cp1(c64(0.0, 0.0)), cp1(c64(0.5, 0.0))];
        assert!(matches!(line_integral_phase(Level::ONE, &pts, CLOSURE_TOL), Err(Error::NotClosed { .. })));
        let still = vec![cp1(c64(0.3, 0.2)); 10];
        assert_eq!(line_integral_phase(Level::ONE, &still, CLOSURE_TOL).unwrap(), 0.0);
    }

    #[test]
    fn report_bookkeeping() {
        let r = assemble_report(PI, 0.0, PI, 0.0);
        assert!(r.consistent && r.defect == 0.0);
        let r = assemble_report(PI, PI / 2.0, PI / 2.0, 1e-9);
        assert!(r.consistent);
        let r = assemble_report(PI, 0.0, 0.0, 0.0);
        assert!(!r.consistent && (r.defect - PI).abs() < 1e-15);
        let r = assemble_report(3.0 * PI, PI, TAU, 0.0);
        assert_eq!(r.gamma_raw, TAU);
        assert!(r.gamma.abs() < 1e-15 && r.consistent);
    }
}
