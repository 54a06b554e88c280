use serde::Serialize;

use super::schedule::HamiltonianSchedule;
use crate::error::{Error, Result};
use crate::kernels::frame::{dechart, frame, frame_raw, hermitian_form, unitarity_defect};
use crate::kernels::{kernel_raw, projective_distance, Family, Level, ManifoldSpec, PointMatrix};
use crate::matrix::{identity, max_abs, propagator, CMat, C64};

/// Steps between re-projections of the propagator onto the group.
pub const REPROJECT_EVERY: usize = 50;
/// Bound on `‖G U† G U − I‖` for an accepted propagator.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Step of the central difference in [`expectation`].
pub const EXPECTATION_STEP: f64 = 1e-5;
/// Default bound for the Möbius/Riccati cross-check.
pub const CROSS_CHECK_TOL: f64 = 1e-6;
/// Relative symmetry slack for points produced by the flow.
const FLOW_SYMMETRY_TOL: f64 = 1e-9;

const MINUS_I: C64 = C64::new(0.0, -1.0);

/// `(H11, H12, H21, H22)` with `H11` of size `p×p`.
pub fn block_split(spec: &ManifoldSpec, h: &CMat) -> Result<(CMat, CMat, CMat, CMat)> {
    let n = spec.frame_size();
    if h.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: (n, n), found: h.shape() });
    }
    let p = spec.top_rows();
    let k = n - p;
    Ok((
        h.view((0, 0), (p, p)).clone_owned(),
        h.view((0, p), (p, k)).clone_owned(),
        h.view((p, 0), (k, p)).clone_owned(),
        h.view((p, p), (k, k)).clone_owned(),
    ))
}

/// Uniform grid with `n` steps covering `[t0, t1]` as closely as `dt` allows.
pub fn time_grid(t0: f64, t1: f64, dt: f64) -> Result<(usize, f64)> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidSchedule(format!("time step must be positive, got {dt}")));
    }
    if !(t1 >= t0) || !t1.is_finite() || !t0.is_finite() {
        return Err(Error::InvalidSchedule(format!("invalid time span [{t0}, {t1}]")));
    }
    let span = t1 - t0;
    let n = (span / dt).round() as usize;
    if n == 0 {
        return Ok((if span > 0.0 { 1 } else { 0 }, span));
    }
    Ok((n, span / n as f64))
}

/// `U ← U (I + E)^{-1/2}` to second order, with `E = G U† G U − I`.
fn reproject(g: &CMat, u: &CMat) -> CMat {
    let n = u.nrows();
    let e = g * u.adjoint() * g * u - identity(n);
    let corr = identity(n) - &e * C64::new(0.5, 0.0) + &e * &e * C64::new(0.375, 0.0);
    u * corr
}

fn rk4_unitary_step(s: &HamiltonianSchedule, t: f64, dt: f64, u: &CMat) -> Result<CMat> {
    let f = |t: f64, u: &CMat| -> Result<CMat> { Ok(s.at(t)? * u * MINUS_I) };
    let h = C64::new(dt, 0.0);
    let half = C64::new(0.5 * dt, 0.0);
    let k1 = f(t, u)?;
    let k2 = f(t + 0.5 * dt, &(u + &k1 * half))?;
    let k3 = f(t + 0.5 * dt, &(u + &k2 * half))?;
    let k4 = f(t + dt, &(u + &k3 * h))?;
    Ok(u + (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(dt / 6.0, 0.0))
}

/// Propagators on the grid `t0 + k·dt'`, `k = 0..=n`, for a bound schedule.
fn unitary_path(spec: &ManifoldSpec, s: &HamiltonianSchedule, t0: f64, n: usize, dt: f64) -> Result<Vec<CMat>> {
    let g = hermitian_form(spec);
    let mut u = identity(spec.frame_size());
    let mut out = Vec::with_capacity(n + 1);
    out.push(u.clone());
    for k in 0..n {
        u = rk4_unitary_step(s, t0 + k as f64 * dt, dt, &u)?;
        if (k + 1) % REPROJECT_EVERY == 0 || k + 1 == n {
            u = reproject(&g, &u);
        }
        out.push(u.clone());
    }
    Ok(out)
}

/// Propagator `U(t1, t0)` of `i dU/dt = H(t) U` by fixed-step RK4.
pub fn evolve_unitary(spec: &ManifoldSpec, schedule: &HamiltonianSchedule, t0: f64, t1: f64, dt: f64) -> Result<CMat> {
    let s = schedule.bind(spec)?;
    let (n, dt) = time_grid(t0, t1, dt)?;
    let u = unitary_path(spec, &s, t0, n, dt)?.pop().unwrap();
    let defect = unitarity_defect(spec, &u);
    if defect > UNITARITY_TOL {
        return Err(Error::CrossCheckFailure { defect });
    }
    Ok(u)
}

/// Fractional-linear action `Z ↦ (AZ + B)(CZ + D)⁻¹`, also returning the
/// chart factor `det(CZ + D)`.
pub fn mobius_act_gauge(u: &CMat, z: &PointMatrix) -> Result<(PointMatrix, C64)> {
    let spec = z.spec();
    let n = spec.frame_size();
    if u.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: (n, n), found: u.shape() });
    }
    let (zn, gauge) = dechart(spec, &(u * frame(z)))?;
    Ok((PointMatrix::from_flow(spec, zn, FLOW_SYMMETRY_TOL)?, gauge))
}

pub fn mobius_act(u: &CMat, z: &PointMatrix) -> Result<PointMatrix> {
    mobius_act_gauge(u, z).map(|(p, _)| p)
}

fn rhs_raw(spec: &ManifoldSpec, h: &CMat, z: &CMat) -> CMat {
    let p = spec.p();
    match spec.family() {
        Family::BDI => {
            // ż_j = (ẋ_j − √2 z_j ẋ_p) / √2 with ẋ = −iHx and x_p = 1
            let xd = h * frame_raw(spec, z) * MINUS_I;
            let r2 = std::f64::consts::SQRT_2;
            CMat::from_fn(1, p, |_, j| (xd[(j, 0)] - z[(0, j)] * xd[(p, 0)] * r2) / r2)
        }
        _ => {
            let k = h.nrows() - p;
            let h11 = h.view((0, 0), (p, p));
            let h12 = h.view((0, p), (p, k));
            let h21 = h.view((p, 0), (k, p));
            let h22 = h.view((p, p), (k, k));
            (h12 + h11 * z - z * h22 - z * h21 * z) * MINUS_I
        }
    }
}

/// `Ż = −i(H12 + H11 Z − Z H22 − Z H21 Z)`, the infinitesimal Möbius flow.
pub fn riccati_rhs(h: &CMat, z: &PointMatrix) -> Result<CMat> {
    let spec = z.spec();
    let n = spec.frame_size();
    if h.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: (n, n), found: h.shape() });
    }
    Ok(rhs_raw(spec, h, z.entries()))
}

fn rk4_riccati_step(spec: &ManifoldSpec, s: &HamiltonianSchedule, t: f64, dt: f64, z: &CMat) -> Result<CMat> {
    let f = |t: f64, z: &CMat| -> Result<CMat> { Ok(rhs_raw(spec, &s.at(t)?, z)) };
    let half = C64::new(0.5 * dt, 0.0);
    let k1 = f(t, z)?;
    let k2 = f(t + 0.5 * dt, &(z + &k1 * half))?;
    let k3 = f(t + 0.5 * dt, &(z + &k2 * half))?;
    let k4 = f(t + dt, &(z + &k3 * C64::new(dt, 0.0)))?;
    Ok(z + (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(dt / 6.0, 0.0))
}

/// Largest number of Riccati substeps per grid step.
const MAX_SUBSTEPS: usize = 4096;

/// One grid step of the Riccati equation. The right-hand side is quadratic
/// in `Z`, so the local Lipschitz constant grows like `‖Z‖`; the step is split
/// to keep `‖Z‖·dt` at its value near the origin.
fn riccati_step(spec: &ManifoldSpec, s: &HamiltonianSchedule, t: f64, dt: f64, z: &CMat) -> Result<CMat> {
    let subs = (max_abs(z).ceil() as usize).clamp(1, MAX_SUBSTEPS);
    let h = dt / subs as f64;
    let mut z = z.clone();
    for i in 0..subs {
        z = rk4_riccati_step(spec, s, t + i as f64 * h, h, &z)?;
    }
    Ok(z)
}

#[derive(Clone, Copy, Debug)]
pub struct TrajectoryOptions {
    /// Integrate the Riccati equation alongside and compare.
    pub cross_check: bool,
    pub cross_check_tol: f64,
    pub store_unitaries: bool,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        TrajectoryOptions { cross_check: true, cross_check_tol: CROSS_CHECK_TOL, store_unitaries: true }
    }
}

/// Largest disagreement between the Möbius and Riccati paths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    /// Fubini–Study distance; chart independent.
    pub projective: f64,
    /// Entrywise `max |Z_mobius − Z_riccati|`.
    pub entrywise: f64,
}

/// Samples of the classical flow on a uniform grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    spec: ManifoldSpec,
    times: Vec<f64>,
    points: Vec<PointMatrix>,
    unitaries: Option<Vec<CMat>>,
    cross_check: Option<CrossCheck>,
}

impl Trajectory {
    /// A trajectory assembled from given samples, e.g. a parametrized loop.
    pub fn from_samples(times: Vec<f64>, points: Vec<PointMatrix>) -> Result<Self> {
        let first = points.first().ok_or_else(|| Error::GridMismatch("empty trajectory".into()))?;
        let spec = *first.spec();
        if times.len() != points.len() {
            return Err(Error::GridMismatch("times and points differ in length".into()));
        }
        if points.iter().any(|p| *p.spec() != spec) {
            return Err(Error::SpecMismatch);
        }
        Ok(Trajectory { spec, times, points, unitaries: None, cross_check: None })
    }

    pub fn spec(&self) -> &ManifoldSpec {
        &self.spec
    }
    pub fn times(&self) -> &[f64] {
        &self.times
    }
    pub fn points(&self) -> &[PointMatrix] {
        &self.points
    }
    pub fn unitaries(&self) -> Option<&[CMat]> {
        self.unitaries.as_deref()
    }
    pub fn cross_check(&self) -> Option<CrossCheck> {
        self.cross_check
    }
    pub fn len(&self) -> usize {
        self.times.len()
    }
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Classical trajectory on `[0, t_end]` with the default options.
pub fn trajectory(z0: &PointMatrix, schedule: &HamiltonianSchedule, t_end: f64, dt: f64) -> Result<Trajectory> {
    trajectory_with(z0, schedule, t_end, dt, TrajectoryOptions::default())
}

pub fn trajectory_with(
    z0: &PointMatrix,
    schedule: &HamiltonianSchedule,
    t_end: f64,
    dt: f64,
    opts: TrajectoryOptions,
) -> Result<Trajectory> {
    let spec = *z0.spec();
    let s = schedule.bind(&spec)?;
    let (n, dt) = time_grid(0.0, t_end, dt)?;
    let us = unitary_path(&spec, &s, 0.0, n, dt)?;
    let times: Vec<f64> = (0..=n).map(|k| k as f64 * dt).collect();
    let mut points = Vec::with_capacity(n + 1);
    for (u, &t) in us.iter().zip(&times) {
        let defect = unitarity_defect(&spec, u);
        if defect > UNITARITY_TOL {
            return Err(Error::CrossCheckFailure { defect });
        }
        points.push(mobius_act(u, z0).map_err(|e| match e {
            Error::ChartOverflow { .. } => Error::ChartOverflow { t: Some(t) },
            other => other,
        })?);
    }
    let cross_check = if opts.cross_check {
        let mut z = z0.entries().clone();
        let mut worst = CrossCheck { projective: 0.0, entrywise: 0.0 };
        for k in 0..n {
            z = riccati_step(&spec, &s, times[k], dt, &z)?;
            let mob = &points[k + 1];
            worst.entrywise = worst.entrywise.max(max_abs(&(&z - mob.entries())));
            let d = match PointMatrix::from_flow(&spec, z.clone(), FLOW_SYMMETRY_TOL) {
                Ok(zr) => projective_distance(mob, &zr)?,
                Err(_) => f64::INFINITY,
            };
            if !(d <= opts.cross_check_tol) {
                return Err(Error::CrossCheckFailure { defect: d });
            }
            worst.projective = worst.projective.max(d);
        }
        Some(worst)
    } else {
        None
    };
    Ok(Trajectory {
        spec,
        times,
        points,
        unitaries: opts.store_unitaries.then_some(us),
        cross_check,
    })
}

/// `r(U) = det(CZ + D) · K(Z', Z̄) / K(Z, Z̄)`; the coherent-state amplitude
/// `⟨Z|U|Z⟩` is `r^{±λ}`.
fn amplitude_base(u: &CMat, z: &PointMatrix) -> Result<C64> {
    let (zn, gauge) = mobius_act_gauge(u, z)?;
    let spec = z.spec();
    let k0 = kernel_raw(spec, z.entries(), z.entries());
    Ok(gauge * kernel_raw(spec, zn.entries(), z.entries()) / k0)
}

fn exponent(level: Level, spec: &ManifoldSpec) -> i32 {
    let l = level.get() as i32;
    if spec.compact() {
        l
    } else {
        -l
    }
}

/// `⟨Z|U|Z⟩` for the normalized coherent state at level λ.
pub fn amplitude(level: Level, u: &CMat, z: &PointMatrix) -> Result<C64> {
    Ok(amplitude_base(u, z)?.powi(exponent(level, z.spec())))
}

/// Total phase `α = Arg⟨ψ(T)|ψ(0)⟩` of the coherent state carried by `u`.
pub fn total_phase(level: Level, u: &CMat, z0: &PointMatrix) -> Result<f64> {
    Ok(-amplitude(level, u, z0)?.arg())
}

/// `⟨Z|H|Z⟩` at level λ from `i d/ds ln⟨Z|e^{−isH}|Z⟩` at `s = 0`.
pub fn expectation(level: Level, z: &PointMatrix, h: &CMat) -> Result<f64> {
    let spec = z.spec();
    let n = spec.frame_size();
    if h.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: (n, n), found: h.shape() });
    }
    let e = exponent(level, spec) as f64;
    let step = EXPECTATION_STEP;
    let rp = amplitude_base(&propagator(h, step), z)?;
    let rm = amplitude_base(&propagator(h, -step), z)?;
    let d = C64::new(0.0, e) * (rp / rm).ln() / (2.0 * step);
    let scale = (e.abs() * max_abs(h) * n as f64).max(1.0).powi(3);
    if d.im.abs() > 1e-8 * scale {
        return Err(Error::NonRealExpectation { imag: d.im });
    }
    Ok(d.re)
}

/// Closed form `±λ tr((F†GF)⁻¹ F†GHF)` of [`expectation`].
pub fn expectation_exact(level: Level, z: &PointMatrix, h: &CMat) -> Result<f64> {
    let spec = z.spec();
    let n = spec.frame_size();
    if h.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: (n, n), found: h.shape() });
    }
    let f = frame(z);
    let g = hermitian_form(spec);
    let gram = f.adjoint() * &g * &f;
    let inv = gram.try_inverse().ok_or(Error::OutsideDomain)?;
    let tr = (inv * f.adjoint() * g * h * f).trace();
    Ok(exponent(level, spec) as f64 * tr.re)
}

/// Return detected by [`find_cycle`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cycle {
    /// Grid index of the sample closest to the return.
    pub index: usize,
    /// Return time refined between grid samples by interpolating the orbit.
    pub period: f64,
    /// Fubini–Study distance to the start at the refined time.
    pub residual: f64,
    /// The trajectory never left the start.
    pub stationary: bool,
}

/// Samples on each side of a grid minimum used to interpolate the orbit.
const RETURN_STENCIL: usize = 3;

/// Locates the return near grid index `k` to sub-step accuracy: the chart
/// points are interpolated by a Lagrange polynomial through up to seven
/// neighbouring samples, and the distance to the start is minimized over
/// `[t_{k−1}, t_{k+1}]` by golden-section search.
fn refine_return(traj: &Trajectory, k: usize) -> Result<(f64, f64)> {
    let (pts, t) = (traj.points(), traj.times());
    let lo = k.saturating_sub(RETURN_STENCIL);
    let hi = (k + RETURN_STENCIL).min(pts.len() - 1);
    let h = t[k + 1] - t[k];
    let nodes: Vec<f64> = (lo..=hi).map(|i| i as f64 - k as f64).collect();
    let at = |tau: f64| -> Result<f64> {
        let mut z = CMat::zeros(pts[k].entries().nrows(), pts[k].entries().ncols());
        for (a, &xa) in nodes.iter().enumerate() {
            let w: f64 = nodes
                .iter()
                .enumerate()
                .filter(|&(b, _)| b != a)
                .map(|(_, &xb)| (tau - xb) / (xa - xb))
                .product();
            z += pts[lo + a].entries() * C64::new(w, 0.0);
        }
        let p = PointMatrix::from_flow(traj.spec(), z, FLOW_SYMMETRY_TOL)?;
        projective_distance(&p, &pts[0])
    };
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (-1.0f64, 1.0f64);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (at(c)?, at(d)?);
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = at(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = at(d)?;
        }
        if b - a < 1e-12 {
            break;
        }
    }
    let (tau, best) = if fc < fd { (c, fc) } else { (d, fd) };
    Ok((t[k] + tau * h, best))
}

/// First return of the trajectory to its starting ray.
pub fn find_cycle(traj: &Trajectory, tol: f64) -> Result<Cycle> {
    let pts = traj.points();
    let t = traj.times();
    if pts.len() < 2 {
        return Err(Error::NoCycleFound);
    }
    let d: Vec<f64> = pts.iter().map(|p| projective_distance(p, &pts[0])).collect::<Result<_>>()?;
    let max_d = d.iter().cloned().fold(0.0, f64::max);
    if max_d <= tol {
        return Ok(Cycle { index: 1, period: t[1], residual: d[1], stationary: true });
    }
    let depart = (0.5 * max_d).min((100.0 * tol).max(1e-4));
    let Some(armed) = d.iter().position(|&x| x > depart) else {
        return Err(Error::NoCycleFound);
    };
    let last = d.len() - 1;
    for k in armed + 1..=last {
        if k == last {
            if d[k] < tol && d[k] <= d[k - 1] {
                return Ok(Cycle { index: k, period: t[k], residual: d[k], stationary: false });
            }
            break;
        }
        if !(d[k] <= d[k - 1] && d[k] <= d[k + 1]) {
            continue;
        }
        let (period, residual) = refine_return(traj, k)?;
        if residual < tol {
            return Ok(Cycle { index: k, period, residual, stationary: false });
        }
    }
    Err(Error::NoCycleFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::validate_point;
    use crate::matrix::{c64, pauli, scalar, frobenius};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn cp1(z: C64) -> PointMatrix {
        validate_point(&ManifoldSpec::cp1(), scalar(z)).unwrap()
    }

    fn constant(h: CMat) -> HamiltonianSchedule {
        HamiltonianSchedule::constant(vec![h], &[1.0]).unwrap()
    }

    #[test]
    fn blocks_of_pauli_matrices() {
        let [sx, _, sz] = pauli();
        let spec = ManifoldSpec::cp1();
        let (a, b, c, d) = block_split(&spec, &sz).unwrap();
        assert_eq!((a[(0, 0)], b[(0, 0)], c[(0, 0)], d[(0, 0)]), (c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)));
        let (_, b, c, _) = block_split(&spec, &sx).unwrap();
        assert_eq!((b[(0, 0)], c[(0, 0)]), (c64(1.0, 0.0), c64(1.0, 0.0)));
        let g = ManifoldSpec::grassmannian(2, 2).unwrap();
        let h = CMat::from_fn(4, 4, |i, j| c64((i * 4 + j) as f64, 0.0));
        let (a, b, _, d) = block_split(&g, &h).unwrap();
        assert_eq!(a.shape(), (2, 2));
        assert_eq!(b[(0, 0)], c64(2.0, 0.0));
        assert_eq!(d[(1, 1)], c64(15.0, 0.0));
        assert!(block_split(&g, &sz).is_err());
    }

    #[test]
    fn propagators() {
        let [sx, _, sz] = pauli();
        let spec = ManifoldSpec::cp1();
        let (b, t) = (0.7, 2.3);
        let u = evolve_unitary(&spec, &constant(&sz * c64(b, 0.0)), 0.0, t, 1e-3).unwrap();
        let exact = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::from_polar(1.0, -b * t),
            C64::from_polar(1.0, b * t),
        ]));
        assert!(max_abs(&(u - exact)) < 1e-10);
        let zero = evolve_unitary(&spec, &constant(CMat::zeros(2, 2)), 0.0, 5.0, 1e-2).unwrap();
        assert_eq!(zero, identity(2));
        let u = evolve_unitary(&spec, &constant(sx), 0.0, PI, 1e-3).unwrap();
        assert!(max_abs(&(u + identity(2))) < 1e-9);
    }

    #[test]
    fn mobius_examples() {
        let z = cp1(c64(0.4, -0.3));
        assert_eq!(mobius_act(&identity(2), &z).unwrap().entries(), z.entries());
        let t = 0.37;
        let u = propagator(&pauli()[2], t);
        let zn = mobius_act(&u, &z).unwrap();
        assert!((zn.entries()[(0, 0)] - C64::from_polar(1.0, -2.0 * t) * c64(0.4, -0.3)).norm() < 1e-14);
        // a quarter turn about x takes the origin to the equator
        let q = propagator(&pauli()[0], PI / 4.0);
        let w = mobius_act(&q, &ManifoldSpec::cp1().origin()).unwrap().entries()[(0, 0)];
        assert!((w - c64(0.0, -1.0)).norm() < 1e-14);
        // a half turn takes it to the antipode, off the chart
        let half = propagator(&pauli()[0], PI / 2.0);
        assert!(matches!(mobius_act(&half, &ManifoldSpec::cp1().origin()), Err(Error::ChartOverflow { .. })));
    }

    #[test]
    fn riccati_examples() {
        let [sx, _, sz] = pauli();
        let z = c64(0.3, 0.8);
        let r = riccati_rhs(&sz, &cp1(z)).unwrap()[(0, 0)];
        assert!((r - c64(0.0, -2.0) * z).norm() < 1e-15);
        assert_eq!(riccati_rhs(&CMat::zeros(2, 2), &cp1(z)).unwrap()[(0, 0)], c64(0.0, 0.0));
        let r = riccati_rhs(&sx, &cp1(c64(0.0, 0.0))).unwrap()[(0, 0)];
        assert_eq!(r, c64(0.0, -1.0));
    }

    #[test]
    fn riccati_is_the_derivative_of_the_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for fam in Family::ALL {
            let spec = ManifoldSpec::new(fam, 2, 2, true).unwrap();
            let n = spec.frame_size();
            let raw = CMat::from_fn(n, n, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let (h, _) = crate::kernels::frame::project_generator(&spec, &raw).unwrap();
            let c: Vec<C64> = (0..spec.complex_dim()).map(|_| c64(rng.random_range(-0.5..0.5), 0.2)).collect();
            let z = validate_point(&spec, spec.embed(&c).unwrap()).unwrap();
            let eps = 1e-6;
            let zp = mobius_act(&propagator(&h, eps), &z).unwrap();
            let zm = mobius_act(&propagator(&h, -eps), &z).unwrap();
            let fd = (zp.entries() - zm.entries()) / C64::new(2.0 * eps, 0.0);
            let rhs = riccati_rhs(&h, &z).unwrap();
            assert!(max_abs(&(fd - rhs)) < 1e-8, "{fam}");
        }
    }

    #[test]
    fn equator_orbit_keeps_modulus_and_closes() {
        let b = 1.3;
        let sched = constant(&pauli()[2] * c64(b, 0.0));
        let z0 = cp1(C64::from_polar(1.0, 0.4));
        let tr = trajectory(&z0, &sched, 4.0, 1e-3).unwrap();
        assert!(tr.points().iter().all(|p| (p.entries()[(0, 0)].norm() - 1.0).abs() < 1e-12));
        let cyc = find_cycle(&tr, 1e-6).unwrap();
        assert!((cyc.period - PI / b).abs() < 1e-3, "{cyc:?}");
        assert!(tr.cross_check().unwrap().projective < 1e-9);
    }

    #[test]
    fn zero_hamiltonian_is_stationary() {
        let z0 = cp1(c64(0.3, -0.2));
        let tr = trajectory(&z0, &constant(CMat::zeros(2, 2)), 1.0, 0.1).unwrap();
        assert!(tr.points().iter().all(|p| p.entries() == z0.entries()));
        let cyc = find_cycle(&tr, 1e-6).unwrap();
        assert!(cyc.stationary && cyc.index == 1 && cyc.residual == 0.0);
    }

    #[test]
    fn short_generic_span_has_no_cycle() {
        let [sx, sy, sz] = pauli();
        let s = HamiltonianSchedule::new(
            vec![sx, sy, sz],
            vec![vec![0.0, 0.3, -0.8, 0.5], vec![1.0, -0.6, 0.2, 1.1], vec![2.0, 0.9, 0.4, -0.3]],
        )
        .unwrap();
        let tr = trajectory(&cp1(c64(0.2, 0.1)), &s, 2.0, 1e-3).unwrap();
        assert_eq!(find_cycle(&tr, 1e-6), Err(Error::NoCycleFound));
    }

    #[test]
    fn grassmannian_first_step() {
        let spec = ManifoldSpec::grassmannian(2, 2).unwrap();
        let mut h = CMat::zeros(4, 4);
        h[(0, 2)] = c64(0.5, 0.2);
        h[(2, 0)] = c64(0.5, -0.2);
        h[(1, 3)] = c64(-0.3, 0.0);
        h[(3, 1)] = c64(-0.3, 0.0);
        let dt = 1e-4;
        let tr = trajectory(&spec.origin(), &constant(h.clone()), dt, dt).unwrap();
        let h12 = h.view((0, 2), (2, 2)).clone_owned();
        let first = tr.points()[1].entries();
        assert!(max_abs(&(first - h12 * c64(0.0, -dt))) < 1e-7);
    }

    #[test]
    fn symmetric_families_stay_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for (fam, flip) in [(Family::CI, 1.0), (Family::DIII, -1.0)] {
            let spec = ManifoldSpec::new(fam, 2, 1, true).unwrap();
            let raw = CMat::from_fn(4, 4, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let (h, _) = crate::kernels::frame::project_generator(&spec, &raw).unwrap();
            let c: Vec<C64> = (0..spec.complex_dim()).map(|_| c64(0.3, -0.1)).collect();
            let z0 = validate_point(&spec, spec.embed(&c).unwrap()).unwrap();
            let tr = trajectory(&z0, &constant(h), 2.0, 1e-3).unwrap();
            for p in tr.points() {
                let z = p.entries();
                assert!(max_abs(&(z - z.transpose() * C64::new(flip, 0.0))) < 1e-10);
            }
        }
    }

    #[test]
    fn group_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let spec = ManifoldSpec::grassmannian(2, 2).unwrap();
        let mut herm = || {
            let a = CMat::from_fn(4, 4, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            (&a + a.adjoint()) * C64::new(0.5, 0.0)
        };
        let (u1, u2) = (propagator(&herm(), 0.4), propagator(&herm(), 0.3));
        let z = validate_point(&spec, spec.embed(&[c64(0.1, 0.2), c64(-0.3, 0.0), c64(0.2, 0.2), c64(0.0, -0.4)]).unwrap()).unwrap();
        let a = mobius_act(&u2, &mobius_act(&u1, &z).unwrap()).unwrap();
        let b = mobius_act(&(&u2 * &u1), &z).unwrap();
        assert!(max_abs(&(a.entries() - b.entries())) < 1e-10);
    }

    #[test]
    fn expectation_examples() {
        let [_, _, sz] = pauli();
        let o = ManifoldSpec::cp1().origin();
        // the origin is the σ_z = −1 eigenline
        assert!((expectation(Level::ONE, &o, &sz).unwrap() + 1.0).abs() < 1e-9);
        let eq = cp1(C64::from_polar(1.0, 0.9));
        assert!(expectation(Level::ONE, &eq, &sz).unwrap().abs() < 1e-9);
        let z = cp1(c64(0.5, 0.3));
        let id = identity(2) * c64(2.5, 0.0);
        assert!((expectation(Level::new(3).unwrap(), &z, &id).unwrap() - 7.5).abs() < 1e-8);
    }

    #[test]
    fn expectation_matches_closed_form_in_all_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for fam in Family::ALL {
            for compact in [true, false] {
                let spec = ManifoldSpec::new(fam, 2, 2, compact).unwrap();
                let n = spec.frame_size();
                let raw = CMat::from_fn(n, n, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
                let (h, _) = crate::kernels::frame::project_generator(&spec, &raw).unwrap();
                let amp = if compact { 0.8 } else { 0.2 };
                let c: Vec<C64> = (0..spec.complex_dim())
                    .map(|_| c64(rng.random_range(-amp..amp), rng.random_range(-amp..amp)))
                    .collect();
                let z = validate_point(&spec, spec.embed(&c).unwrap()).unwrap();
                let lv = Level::new(2).unwrap();
                let a = expectation(lv, &z, &h).unwrap();
                let b = expectation_exact(lv, &z, &h).unwrap();
                assert!((a - b).abs() < 1e-7 * (1.0 + frobenius(&h)), "{spec}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn amplitude_is_unimodular_on_a_return() {
        let b = 0.8;
        let sz = &pauli()[2] * c64(b, 0.0);
        let u = propagator(&sz, PI / b);
        let z = cp1(c64(0.6, 0.0));
        let a = amplitude(Level::ONE, &u, &z).unwrap();
        assert!((a.norm() - 1.0).abs() < 1e-12);
    }
}
