//! Exact spin-`j` quantum evolution, used as ground truth for the classical
//! flow on the projective line.
//!
//! Basis vectors are ordered from `m = j` down to `m = −j` and the coherent
//! state `|z⟩` has components `√C(2j,k) z^k / (1+|z|²)^j`, so `z = 0` is the
//! highest-weight vector. The classical chart puts `z = 0` on the second basis
//! vector of `C²`, which is the lowest weight of `σ_z`; the two pictures are
//! related by the swap `P = σ_x`, and a defining-representation generator `h`
//! acts on spin `j` as the lift of `P h P` (see [`SpinRep::lift`]).

use nalgebra::DVector;

use crate::dynamics::{time_grid, HamiltonianSchedule};
use crate::error::{Error, Result};
use crate::matrix::{identity, max_abs, pauli, CMat, C64};
use crate::phase::{assemble_report, time_integral, PhaseReport};

pub type CVec = DVector<C64>;

/// Steps between renormalizations of the state.
pub const RENORMALIZE_EVERY: usize = 50;
/// `1 − |⟨ψ(0)|ψ(T)⟩|` above which a run is not cyclic.
pub const CYCLIC_TOL: f64 = 1e-8;
/// Largest distance to a coherent ray accepted by [`bloch_projection`].
pub const COHERENT_TOL: f64 = 1e-6;

/// Spin-`j` matrices `J1, J2, J3`.
#[derive(Clone, Debug)]
pub struct SpinRep {
    j: f64,
    dim: usize,
    ops: [CMat; 3],
}

pub fn spin_operators(j: f64) -> Result<SpinRep> {
    let twice = 2.0 * j;
    if !(twice >= 1.0) || (twice - twice.round()).abs() > 1e-12 || twice > 1e6 {
        return Err(Error::InvalidSpin(j));
    }
    let dim = twice.round() as usize + 1;
    let j = (dim - 1) as f64 / 2.0;
    let m = |k: usize| j - k as f64;
    let mut jp = CMat::zeros(dim, dim);
    for k in 0..dim - 1 {
        // J+ |m⟩ = √(j(j+1) − m(m+1)) |m+1⟩, with |m+1⟩ one index up
        let mk = m(k + 1);
        jp[(k, k + 1)] = C64::new((j * (j + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let j1 = (&jp + &jm) * C64::new(0.5, 0.0);
    let j2 = (&jp - &jm) * C64::new(0.0, -0.5);
    let j3 = CMat::from_fn(dim, dim, |a, b| if a == b { C64::new(m(a), 0.0) } else { C64::new(0.0, 0.0) });
    Ok(SpinRep { j, dim, ops: [j1, j2, j3] })
}

impl SpinRep {
    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[CMat; 3] {
        &self.ops
    }

    pub fn casimir(&self) -> CMat {
        self.ops.iter().map(|o| o * o).fold(CMat::zeros(self.dim, self.dim), |a, b| a + b)
    }

    /// Spin-`j` operator of the spin-½ matrix `m₀ I + m·σ`: `2j m₀ I + 2 m·J`.
    pub fn spin_half(&self, h: &CMat) -> CMat {
        let s = pauli();
        let half = |a: &CMat| (h * a).trace().re * 0.5;
        let m0 = h.trace().re * 0.5;
        let mut out = identity(self.dim) * C64::new(2.0 * self.j * m0, 0.0);
        for (sk, jk) in s.iter().zip(&self.ops) {
            out += jk * C64::new(2.0 * half(sk), 0.0);
        }
        out
    }

    /// Spin-`j` operator corresponding to a generator of the classical flow
    /// on the projective line.
    pub fn lift(&self, h: &CMat) -> CMat {
        self.spin_half(&swap(h))
    }
}

/// `P h P` with `P = σ_x`; exchanges the classical and quantum orientations.
pub fn swap(h: &CMat) -> CMat {
    let p = &pauli()[0];
    p * h * p
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn coherent_vector(j: f64, z: C64) -> Result<CVec> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite);
    }
    let rep_dim = spin_operators(j)?.dim;
    let n = rep_dim - 1;
    let norm = (1.0 + z.norm_sqr()).powf(-0.5 * n as f64);
    Ok(CVec::from_fn(rep_dim, |k, _| z.powu(k as u32) * (binomial(n, k).sqrt() * norm)))
}

/// `⟨z|w⟩` for normalized coherent states.
pub fn coherent_overlap(j: f64, z: C64, w: C64) -> Result<C64> {
    Ok(coherent_vector(j, z)?.dotc(&coherent_vector(j, w)?))
}

fn expect(op: &CMat, psi: &CVec) -> C64 {
    psi.dotc(&(op * psi))
}

/// Fubini–Study distance from `ψ` (normalized) to the ray of `c`.
fn ray_distance(c: &CVec, psi: &CVec) -> f64 {
    let ov = c.dotc(psi);
    let perp = psi - c * ov;
    perp.norm().atan2(ov.norm())
}

/// Chart coordinate of the coherent ray closest to `ψ`, with its distance.
pub fn nearest_coherent(rep: &SpinRep, psi: &CVec) -> Result<(C64, f64)> {
    if psi.len() != rep.dim {
        return Err(Error::DimensionMismatch { expected: (rep.dim, 1), found: (psi.len(), 1) });
    }
    let nrm = psi.norm();
    if !(nrm > 0.0) || !nrm.is_finite() {
        return Err(Error::NonFinite);
    }
    let psi = psi / C64::new(nrm, 0.0);
    let [j1, j2, j3] = &rep.ops;
    let up = expect(j1, &psi) + C64::i() * expect(j2, &psi);
    let den = rep.j + expect(j3, &psi).re;
    if !(den > 1e-300) {
        return Err(Error::ChartOverflow { t: None });
    }
    let mut z = up / den;
    let score = |z: C64| -> Result<f64> { Ok(coherent_vector(rep.j, z)?.dotc(&psi).norm_sqr()) };
    let mut best = score(z)?;
    // Newton on ln|⟨z|ψ⟩|² when the Bloch-vector estimate is not already optimal
    if best > 0.5 && best < 1.0 - 1e-15 {
        for _ in 0..5 {
            let h = 1e-4 * (1.0 + z.norm());
            let f = |dx: f64, dy: f64| -> Result<f64> { Ok(score(z + C64::new(dx, dy))?.ln()) };
            let f0 = f(0.0, 0.0)?;
            let (fxp, fxm, fyp, fym) = (f(h, 0.0)?, f(-h, 0.0)?, f(0.0, h)?, f(0.0, -h)?);
            let fxy = (f(h, h)? - f(h, -h)? - f(-h, h)? + f(-h, -h)?) / (4.0 * h * h);
            let (gx, gy) = ((fxp - fxm) / (2.0 * h), (fyp - fym) / (2.0 * h));
            let (hxx, hyy) = ((fxp - 2.0 * f0 + fxm) / (h * h), (fyp - 2.0 * f0 + fym) / (h * h));
            let det = hxx * hyy - fxy * fxy;
            if !(det > 0.0) || hxx >= 0.0 {
                break;
            }
            let dx = -(hyy * gx - fxy * gy) / det;
            let dy = -(hxx * gy - fxy * gx) / det;
            let cand = z + C64::new(dx, dy);
            let s = score(cand)?;
            if s <= best {
                break;
            }
            z = cand;
            best = s;
        }
    }
    let c = coherent_vector(rep.j, z)?;
    Ok((z, ray_distance(&c, &psi)))
}

/// Inverse of [`coherent_vector`] on coherent rays.
pub fn bloch_projection(rep: &SpinRep, psi: &CVec) -> Result<C64> {
    let (z, distance) = nearest_coherent(rep, psi)?;
    if distance > COHERENT_TOL {
        return Err(Error::NotCoherent { distance });
    }
    Ok(z)
}

/// States on a uniform time grid.
#[derive(Clone, Debug)]
pub struct StateTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<CVec>,
}

fn lifted(rep: &SpinRep, s: &HamiltonianSchedule, t: f64) -> Result<CMat> {
    Ok(rep.lift(&s.at(t)?))
}

/// RK4 for `i dψ/dt = Ĥ(t) ψ` with `Ĥ(t)` the lift of the classical
/// schedule, on `[0, t_end]`.
pub fn schrodinger_evolve(
    rep: &SpinRep,
    psi0: &CVec,
    schedule: &HamiltonianSchedule,
    t_end: f64,
    dt: f64,
) -> Result<StateTrajectory> {
    if schedule.dimension() != 2 {
        return Err(Error::DimensionMismatch { expected: (2, 2), found: (schedule.dimension(), schedule.dimension()) });
    }
    if psi0.len() != rep.dim {
        return Err(Error::DimensionMismatch { expected: (rep.dim, 1), found: (psi0.len(), 1) });
    }
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::Parse("initial state must have unit norm".into()));
    }
    let s = schedule.bind(&crate::kernels::ManifoldSpec::cp1())?;
    let (n, dt) = time_grid(0.0, t_end, dt)?;
    let mi = C64::new(0.0, -1.0);
    let f = |t: f64, psi: &CVec| -> Result<CVec> { Ok(lifted(rep, &s, t)? * psi * mi) };
    let mut psi = psi0.clone();
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    times.push(0.0);
    states.push(psi.clone());
    for k in 0..n {
        let t = k as f64 * dt;
        let half = C64::new(0.5 * dt, 0.0);
        let k1 = f(t, &psi)?;
        let k2 = f(t + 0.5 * dt, &(&psi + &k1 * half))?;
        let k3 = f(t + 0.5 * dt, &(&psi + &k2 * half))?;
        let k4 = f(t + dt, &(&psi + &k3 * C64::new(dt, 0.0)))?;
        psi += (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(dt / 6.0, 0.0);
        if (k + 1) % RENORMALIZE_EVERY == 0 || k + 1 == n {
            let nrm = psi.norm();
            psi /= C64::new(nrm, 0.0);
        }
        times.push((k + 1) as f64 * dt);
        states.push(psi.clone());
    }
    Ok(StateTrajectory { times, states })
}

/// `α = Arg⟨ψ(T)|ψ(0)⟩`, `β = ∫⟨ψ|Ĥ|ψ⟩dt`, `γ = α − β`.
pub fn quantum_phases(rep: &SpinRep, traj: &StateTrajectory, schedule: &HamiltonianSchedule) -> Result<PhaseReport> {
    let (first, last) = match (traj.states.first(), traj.states.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::GridMismatch("empty state trajectory".into())),
    };
    let ov = first.dotc(last);
    if ov.norm() < 1.0 - CYCLIC_TOL {
        return Err(Error::NotCyclic { overlap: ov.norm() });
    }
    let s = schedule.bind(&crate::kernels::ManifoldSpec::cp1())?;
    let vals = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, psi)| Ok(expect(&lifted(rep, &s, t)?, psi).re))
        .collect::<Result<Vec<_>>>()?;
    let beta = time_integral(&traj.times, &vals, schedule);
    let alpha = -ov.arg();
    let residual = ov.norm().min(1.0).acos();
    Ok(assemble_report(alpha, beta, alpha - beta, residual).with_method("quantum-oracle"))
}

/// Largest `‖[J_a, J_b] − i ε_abc J_c‖` and `‖J² − j(j+1)‖`.
pub fn algebra_defect(rep: &SpinRep) -> f64 {
    let [a, b, c] = &rep.ops;
    let i = C64::i();
    let comm = |x: &CMat, y: &CMat| x * y - y * x;
    let d1 = max_abs(&(comm(a, b) - c * i));
    let d2 = max_abs(&(comm(b, c) - a * i));
    let d3 = max_abs(&(comm(c, a) - b * i));
    let cas = max_abs(&(rep.casimir() - identity(rep.dim) * C64::new(rep.j * (rep.j + 1.0), 0.0)));
    d1.max(d2).max(d3).max(cas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{normalized_overlap, validate_point, Level, ManifoldSpec};
    use crate::matrix::{c64, scalar};
    use crate::phase::wrap_angle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn spin_half_is_half_pauli() {
        let rep = spin_operators(0.5).unwrap();
        for (jk, sk) in rep.ops().iter().zip(pauli()) {
            assert!(max_abs(&(jk - sk * C64::new(0.5, 0.0))) < 1e-15);
        }
        assert!(max_abs(&(rep.casimir() - identity(2) * c64(0.75, 0.0))) < 1e-15);
    }

    #[test]
    fn algebra_holds_for_several_spins() {
        for j in [0.5, 1.0, 1.5, 2.0, 3.5] {
            let rep = spin_operators(j).unwrap();
            assert!(algebra_defect(&rep) < 1e-12, "j = {j}");
        }
        let one = spin_operators(1.0).unwrap();
        assert_eq!(one.ops()[2][(0, 0)], c64(1.0, 0.0));
        assert_eq!(one.ops()[2][(2, 2)], c64(-1.0, 0.0));
        assert!(max_abs(&(one.casimir() - identity(3) * c64(2.0, 0.0))) < 1e-14);
    }

    #[test]
    fn bad_spins() {
        for j in [0.0, -0.5, 0.3, f64::NAN] {
            assert!(matches!(spin_operators(j), Err(Error::InvalidSpin(_))));
        }
    }

    #[test]
    fn coherent_vectors() {
        let v = coherent_vector(1.5, c64(0.0, 0.0)).unwrap();
        assert_eq!(v[0], c64(1.0, 0.0));
        assert!(v.iter().skip(1).all(|x| *x == c64(0.0, 0.0)));
        let e = coherent_vector(0.5, c64(1.0, 0.0)).unwrap();
        assert!((e[0] - c64(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((e[1] - c64(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn overlap_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let spec = ManifoldSpec::cp1();
        for j in [0.5, 1.0, 1.5] {
            for _ in 0..20 {
                let z = c64(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                let w = c64(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                let q = coherent_overlap(j, z, w).unwrap();
                let closed = (1.0 + z.conj() * w).powi((2.0 * j) as i32)
                    / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).powf(j);
                assert!((q - closed).norm() < 1e-12);
                let lv = Level::new((2.0 * j) as u32).unwrap();
                let zp = validate_point(&spec, scalar(z)).unwrap();
                let wp = validate_point(&spec, scalar(w)).unwrap();
                let c = normalized_overlap(lv, &wp, &zp).unwrap();
                assert!((q - c).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn projection_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for j in [0.5, 1.0, 1.5, 3.0] {
            let rep = spin_operators(j).unwrap();
            for _ in 0..10 {
                let z = c64(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
                let psi = coherent_vector(j, z).unwrap() * C64::from_polar(1.0, 0.7);
                let back = bloch_projection(&rep, &psi).unwrap();
                assert!((back - z).norm() < 1e-10 * (1.0 + z.norm_sqr()), "{z} -> {back}");
            }
        }
        let half = spin_operators(0.5).unwrap();
        let e = CVec::from_vec(vec![c64(FRAC_1_SQRT_2, 0.0), c64(FRAC_1_SQRT_2, 0.0)]);
        assert!((bloch_projection(&half, &e).unwrap() - c64(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn m_zero_state_is_not_coherent() {
        let rep = spin_operators(1.0).unwrap();
        let psi = CVec::from_vec(vec![c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);
        assert!(matches!(bloch_projection(&rep, &psi), Err(Error::NotCoherent { .. })));
    }

    #[test]
    fn newton_finds_the_nearest_ray_for_perturbed_states() {
        let rep = spin_operators(1.5).unwrap();
        let z = c64(0.4, -0.7);
        let mut psi = coherent_vector(1.5, z).unwrap();
        psi[2] += c64(1e-4, 0.0);
        let (zn, d) = nearest_coherent(&rep, &psi).unwrap();
        // no nearby ray does better
        let psi_n = &psi / C64::new(psi.norm(), 0.0);
        for dz in [c64(1e-3, 0.0), c64(0.0, 1e-3), c64(-1e-3, 0.0), c64(0.0, -1e-3)] {
            let other = ray_distance(&coherent_vector(1.5, zn + dz).unwrap(), &psi_n);
            assert!(other >= d);
        }
        assert!(d < 1e-4);
    }

    #[test]
    fn precession_about_z() {
        // quantum B σ_z is the classical generator −B σ_z
        let b = 0.9;
        let t = 1.7;
        let h = swap(&(pauli()[2].clone() * c64(b, 0.0)));
        let sched = HamiltonianSchedule::constant(vec![h], &[1.0]).unwrap();
        let rep = spin_operators(0.5).unwrap();
        let psi0 = CVec::from_vec(vec![c64(0.6, 0.0), c64(0.0, 0.8)]);
        let tr = schrodinger_evolve(&rep, &psi0, &sched, t, 1e-3).unwrap();
        let end = tr.states.last().unwrap();
        assert!((end[0] - psi0[0] * C64::from_polar(1.0, -b * t)).norm() < 1e-10);
        assert!((end[1] - psi0[1] * C64::from_polar(1.0, b * t)).norm() < 1e-10);

        let one = spin_operators(1.0).unwrap();
        let phi = 2.0 * b * t;
        let psi1 = CVec::from_vec(vec![c64(0.5, 0.0), c64(0.5, 0.5), c64(0.5, 0.0)]);
        let tr = schrodinger_evolve(&one, &psi1, &sched, t, 1e-3).unwrap();
        let end = tr.states.last().unwrap();
        for (k, m) in [1.0, 0.0, -1.0].iter().enumerate() {
            assert!((end[k] - psi1[k] * C64::from_polar(1.0, -m * phi)).norm() < 1e-9);
        }
    }

    #[test]
    fn zero_hamiltonian_keeps_state() {
        let rep = spin_operators(1.5).unwrap();
        let psi0 = coherent_vector(1.5, c64(0.2, 0.3)).unwrap();
        let sched = HamiltonianSchedule::constant(vec![CMat::zeros(2, 2)], &[0.0]).unwrap();
        let tr = schrodinger_evolve(&rep, &psi0, &sched, 1.0, 0.01).unwrap();
        assert_eq!(tr.states.last().unwrap(), &psi0);
    }

    #[test]
    fn spin_half_phases_in_a_constant_field() {
        let b = 1.0;
        let h = swap(&(pauli()[2].clone() * c64(b, 0.0)));
        let sched = HamiltonianSchedule::constant(vec![h], &[1.0]).unwrap();
        let rep = spin_operators(0.5).unwrap();
        for (theta, beta, gamma) in [(PI / 2.0, 0.0, PI), (PI / 3.0, PI / 2.0, PI / 2.0)] {
            let z = C64::from_polar((theta / 2.0).tan(), 0.3);
            let psi0 = coherent_vector(0.5, z).unwrap();
            let tr = schrodinger_evolve(&rep, &psi0, &sched, PI / b, 1e-3).unwrap();
            let r = quantum_phases(&rep, &tr, &sched).unwrap();
            // α and γ sit on the branch point at θ = π/2
            assert!(wrap_angle(r.alpha - PI).abs() < 1e-9, "{theta} {r:?}");
            assert!((r.beta - beta).abs() < 1e-9, "{theta} {r:?}");
            assert!(wrap_angle(r.gamma - gamma).abs() < 1e-9);
            assert_eq!(r.method, "quantum-oracle");
        }
    }

    #[test]
    fn half_cycle_is_not_cyclic() {
        let h = pauli()[0].clone();
        let sched = HamiltonianSchedule::constant(vec![h], &[1.0]).unwrap();
        let rep = spin_operators(0.5).unwrap();
        let psi0 = coherent_vector(0.5, c64(0.0, 0.0)).unwrap();
        let tr = schrodinger_evolve(&rep, &psi0, &sched, PI / 4.0, 1e-3).unwrap();
        assert!(matches!(quantum_phases(&rep, &tr, &sched), Err(Error::NotCyclic { .. })));
    }
}
