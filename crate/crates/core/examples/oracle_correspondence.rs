//! Exact spin-j quantum evolution as a ground truth for the classical CP1 flow.
//!
//! The Schrödinger equation is integrated in the `2j+1`-dimensional irrep,
//! the state is projected back to the Bloch sphere at every step and compared
//! with the classical trajectory. Spin `j` matches the classical flow at
//! level `λ = 2j`.
//!
//! Notes:
//! - the quantum Hamiltonian `B·σ` corresponds to the classical generator
//!   `−B·σ` (see [`kahler_phase::su2::swap`]);
//! - the cross-check is a Fubini–Study distance, so it is chart independent.

use kahler_phase::cli::{cmd_oracle_compare, pauli_schedule, Integration, RunConfig};
use kahler_phase::kernels::{Level, LevelSpec, ManifoldSpec};
use kahler_phase::matrix::{c64, scalar};
use kahler_phase::su2::{algebra_defect, spin_operators};

fn main() -> kahler_phase::Result<()> {
    for two_j in 1..=4u32 {
        let rep = spin_operators(two_j as f64 / 2.0)?;
        let cfg = RunConfig {
            manifold: Some(ManifoldSpec::cp1()),
            level: LevelSpec::Single(Level::new(two_j)?),
            schedule: Some(pauli_schedule([0.3, -0.5, 0.8])?),
            integration: Integration { dt: 1e-3, t: 6.0, ..Integration::default() },
            z0: Some(scalar(c64(0.4, -0.2))),
            ..RunConfig::default()
        };
        let cmp = cmd_oracle_compare(&cfg)?;
        println!(
            "j={:<3} dim={}  algebra defect {:.1e}  max quantum-classical distance {:.2e}  passed {}",
            rep.j(),
            rep.dim(),
            algebra_defect(&rep),
            cmp.quantum_distance,
            cmp.passed
        );
    }
    Ok(())
}
