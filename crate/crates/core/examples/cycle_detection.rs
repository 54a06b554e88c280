//! Detecting the period of a closed orbit from grid samples.
//!
//! On the unit disc the generator `σz` rotates `z ↦ e^{2it} z`, so every
//! orbit closes at `T = π`. Adding a boost `b·iσx` with `|b| < 1` keeps the
//! element elliptic and stretches the period to `π / √(1 − b²)`. The grid minimum of the distance to the start is
//! refined by interpolating the orbit; a stationary start is reported as
//! such instead of as a period.

use std::f64::consts::PI;

use kahler_phase::dynamics::{find_cycle, trajectory, HamiltonianSchedule};
use kahler_phase::kernels::{validate_point, ManifoldSpec};
use kahler_phase::matrix::{c64, pauli, scalar};

fn main() -> kahler_phase::Result<()> {
    let spec = ManifoldSpec::disc();
    let [sx, _, sz] = pauli();
    let rotation = HamiltonianSchedule::constant(vec![sz.clone()], &[1.0])?;
    // an elliptic element mixing a rotation with a boost
    let elliptic = HamiltonianSchedule::constant(vec![sz, sx * c64(0.0, 1.0)], &[1.0, 0.4])?;
    let expected = [PI, PI / (1.0f64 - 0.16).sqrt()];
    for ((name, sched), want) in [("rotation", &rotation), ("elliptic", &elliptic)].into_iter().zip(expected) {
        for dt in [1e-2, 1e-3] {
            let z0 = validate_point(&spec, scalar(c64(0.5, 0.2)))?;
            let traj = trajectory(&z0, sched, 4.0, dt)?;
            let c = find_cycle(&traj, 1e-6)?;
            println!(
                "{name:<9} dt={dt:<6} period {:.12} (expected {want:.12})  residual {:.1e}",
                c.period, c.residual
            );
        }
    }
    // the origin is fixed by the rotation
    let traj = trajectory(&spec.origin(), &rotation, 4.0, 1e-3)?;
    println!("origin stationary: {}", find_cycle(&traj, 1e-6)?.stationary);
    Ok(())
}
