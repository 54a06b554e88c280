//! Reproducing kernels of the four classical families, compact and
//! non-compact, at a pair of random chart points.
//!
//! For each manifold the example prints `K(Z, W̄)`, checks the Hermitian
//! symmetry `K(W, Z̄) = conj K(Z, W̄)` and reports the Fubini–Study distance
//! between the two rays.
//!
//! Run with `cargo run --example kernel_values`.

use kahler_phase::kernels::{kernel, projective_distance, validate_point, Family, ManifoldSpec};
use kahler_phase::matrix::{c64, CMat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(spec: &ManifoldSpec, rng: &mut ChaCha8Rng, scale: f64) -> CMat {
    let coords: Vec<_> =
        (0..spec.complex_dim()).map(|_| c64(rng.random_range(-scale..scale), rng.random_range(-scale..scale))).collect();
    spec.embed(&coords).expect("coordinate count matches the chart")
}

fn main() -> kahler_phase::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let shapes = [(Family::AIII, 2, 2), (Family::CI, 2, 2), (Family::DIII, 3, 3), (Family::BDI, 3, 1)];
    for (family, p, q) in shapes {
        for compact in [true, false] {
            let spec = ManifoldSpec::new(family, p, q, compact)?;
            // small entries keep non-compact points inside the domain
            let scale = if compact { 1.0 } else { 0.2 };
            let z = validate_point(&spec, random_point(&spec, &mut rng, scale))?;
            let w = validate_point(&spec, random_point(&spec, &mut rng, scale))?;
            let k = kernel(&z, &w)?;
            let hermitian = (kernel(&w, &z)? - k.conj()).norm();
            let d = projective_distance(&z, &w)?;
            println!(
                "{:?}({p},{q}) {:<11} K = {:+.6} {:+.6}i   |K(W,Z)-conj K| = {hermitian:.1e}   d = {d:.6}",
                family,
                if compact { "compact" } else { "non-compact" },
                k.re,
                k.im
            );
        }
    }
    Ok(())
}
