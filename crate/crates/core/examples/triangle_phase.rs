//! Phase of the geodesic triangle `(0, z, w)`, i.e. the symplectic area it
//! bounds, from the cocycle `λ Arg K(z, w̄)`.
//!
//! The octant triangle on CP1 (vertices `0`, `1`, `i`) covers an eighth of the
//! sphere, so at level λ its phase is `λπ/4`. Swapping the vertices flips the
//! sign. A polygon is a fan of such triangles.

use std::f64::consts::FRAC_PI_4;

use kahler_phase::kernels::{validate_point, Level, ManifoldSpec};
use kahler_phase::matrix::{c64, scalar};
use kahler_phase::phase::{polygon_phase, triangle_phase};

fn main() -> kahler_phase::Result<()> {
    let spec = ManifoldSpec::cp1();
    let z = validate_point(&spec, scalar(c64(1.0, 0.0)))?;
    let w = validate_point(&spec, scalar(c64(0.0, 1.0)))?;
    for lambda in 1..=4 {
        let level = Level::new(lambda)?;
        let g = triangle_phase(level, &z, &w)?;
        let back = triangle_phase(level, &w, &z)?;
        println!("λ={lambda}  γ(0,1,i) = {g:+.15}  expected {:+.15}  reversed {back:+.15}", lambda as f64 * FRAC_PI_4);
    }

    // square with corners on the unit circle: four octant-like fans
    let square: Vec<_> = [c64(1.0, 0.0), c64(0.0, 1.0), c64(-1.0, 0.0), c64(0.0, -1.0)]
        .into_iter()
        .map(|v| validate_point(&spec, scalar(v)))
        .collect::<Result<_, _>>()?;
    println!("polygon through ±1, ±i: {:+.15}", polygon_phase(Level::ONE, &square)?);
    Ok(())
}
