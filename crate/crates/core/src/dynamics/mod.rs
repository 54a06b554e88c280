//! Classical flow of coherent-state parameters: the propagator of a linear
//! Hamiltonian in the defining representation acts on chart coordinates by
//! fractional-linear maps, and the Riccati equation is its infinitesimal form.

mod evolve;
mod schedule;

pub use evolve::{
    amplitude, block_split, evolve_unitary, expectation, expectation_exact, find_cycle, mobius_act,
    mobius_act_gauge, riccati_rhs, time_grid, total_phase, trajectory, trajectory_with, CrossCheck, Cycle,
    Trajectory, TrajectoryOptions, CROSS_CHECK_TOL, EXPECTATION_STEP, REPROJECT_EVERY, UNITARITY_TOL,
};
pub use schedule::{HamiltonianSchedule, ALGEBRA_TOL};
