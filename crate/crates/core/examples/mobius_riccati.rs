//! The classical flow two ways: the propagator `U(t)` of the defining
//! representation acting by fractional-linear maps, and the matrix Riccati
//! equation integrated directly.
//!
//! Runs a time-dependent schedule on CP2 and on its non-compact dual, the
//! complex ball, and prints the largest disagreement between the two paths.
//! Also checks that the Möbius action composes like the group.

use kahler_phase::dynamics::{evolve_unitary, mobius_act, trajectory, HamiltonianSchedule};
use kahler_phase::kernels::{frame::hermitian_form, projective_distance, validate_point, ManifoldSpec};
use kahler_phase::matrix::{c64, from_rows, CMat, C64};

/// Gell-Mann-like basis of su(3): three symmetric, three antisymmetric
/// off-diagonals and two diagonals.
fn generators(spec: &ManifoldSpec) -> Vec<CMat> {
    let g = hermitian_form(spec);
    let mut out = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let mut x = CMat::zeros(3, 3);
        x[(i, j)] = c64(1.0, 0.0);
        x[(j, i)] = c64(1.0, 0.0);
        out.push(x.clone());
        x[(i, j)] = c64(0.0, -1.0);
        x[(j, i)] = c64(0.0, 1.0);
        out.push(x);
    }
    for d in [[1.0, -1.0, 0.0], [1.0, 1.0, -2.0]] {
        out.push(CMat::from_fn(3, 3, |i, j| if i == j { C64::new(d[i], 0.0) } else { C64::new(0.0, 0.0) }));
    }
    // generators of the non-compact real form are G X with X Hermitian
    out.into_iter().map(|x| &g * x).collect()
}

fn main() -> kahler_phase::Result<()> {
    for compact in [true, false] {
        let spec = ManifoldSpec::new(kahler_phase::Family::AIII, 2, 1, compact)?;
        let samples = (0..=4)
            .map(|k| {
                let t = k as f64;
                let mut row = vec![t];
                row.extend((0..8).map(|i| 0.3 * ((i as f64 + 1.0) * 0.7 * t).sin()));
                row
            })
            .collect();
        let schedule = HamiltonianSchedule::new(generators(&spec), samples)?;
        let z0 = validate_point(&spec, from_rows(&[&[c64(0.1, 0.05)], &[c64(-0.2, 0.1)]]))?;
        let traj = trajectory(&z0, &schedule, 4.0, 1e-3)?;
        let cc = traj.cross_check().expect("cross-check runs by default");
        println!(
            "{}: {} samples, Möbius vs Riccati projective {:.2e}, entrywise {:.2e}",
            if compact { "CP2 " } else { "ball" },
            traj.len(),
            cc.projective,
            cc.entrywise
        );

        // U(2) applied after U(1) equals U(1→2) applied once
        let u1 = evolve_unitary(&spec, &schedule, 0.0, 1.5, 1e-3)?;
        let u2 = evolve_unitary(&spec, &schedule, 1.5, 3.0, 1e-3)?;
        let two_step = mobius_act(&u2, &mobius_act(&u1, &z0)?)?;
        let one_step = mobius_act(&(&u2 * &u1), &z0)?;
        println!("      composition defect {:.1e}", projective_distance(&two_step, &one_step)?);
    }
    Ok(())
}
