//! Parallel parameter sweep through the same entry point the `kphase` binary
//! uses. Results come back in input order regardless of scheduling.

use std::f64::consts::PI;

use kahler_phase::cli::{sweep, to_line, Command, Integration, RunConfig};
use kahler_phase::dynamics::HamiltonianSchedule;
use kahler_phase::kernels::ManifoldSpec;
use kahler_phase::matrix::{c64, pauli, scalar};

fn main() -> kahler_phase::Result<()> {
    let schedule = HamiltonianSchedule::constant(vec![pauli()[2].clone()], &[-1.0])?;
    let configs: Vec<RunConfig> = (1..=8)
        .map(|k| RunConfig {
            manifold: Some(ManifoldSpec::cp1()),
            schedule: Some(schedule.clone()),
            integration: Integration { dt: 1e-3, t: PI, stride: 10_000, ..Integration::default() },
            z0: Some(scalar(c64(0.25 * k as f64, 0.0))),
            period: Some(PI),
            ..RunConfig::default()
        })
        .collect();
    for (k, result) in sweep(Command::Evolve, &configs).into_iter().enumerate() {
        let out = result?;
        // the last record of an evolve run is the summary
        let summary = out.records.last().expect("evolve emits a summary");
        println!("{k}: gamma = {}", to_line(&summary["gamma"]));
    }
    Ok(())
}
