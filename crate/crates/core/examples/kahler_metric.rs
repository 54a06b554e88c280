//! Kähler potential `λ ln K(Z, Z̄)` and its Hessian metric.
//!
//! On CP1 the metric at `z` is `λ / (1 + |z|²)²`; on the unit disc the same
//! formula holds with `1 − |z|²`. The example prints the finite-difference
//! metric against that closed form, then shows the metric eigenvalues on a
//! Grassmannian point.

use kahler_phase::kahler::{metric, positivity_check, potential};
use kahler_phase::kernels::{validate_point, Level, ManifoldSpec};
use kahler_phase::matrix::{c64, from_rows, scalar};

fn main() -> kahler_phase::Result<()> {
    let level = Level::new(2)?;
    for (spec, s) in [(ManifoldSpec::cp1(), 1.0), (ManifoldSpec::disc(), -1.0)] {
        for r in [0.0, 0.3, 0.6] {
            let z = validate_point(&spec, scalar(c64(r, 0.5 * r)))?;
            let n = z.entries()[(0, 0)].norm_sqr();
            let exact = level.as_f64() / (1.0 + s * n).powi(2);
            let g = metric(level, &z)?[(0, 0)].re;
            println!(
                "{} r={r:.1}  potential {:+.6}  metric {g:.9}  closed form {exact:.9}",
                if s > 0.0 { "cp1 " } else { "disc" },
                potential(level, &z)?
            );
        }
    }

    let spec = ManifoldSpec::grassmannian(2, 2)?;
    let z = validate_point(
        &spec,
        from_rows(&[&[c64(0.4, 0.1), c64(-0.2, 0.3)], &[c64(0.0, -0.5), c64(0.7, 0.0)]]),
    )?;
    let g = metric(Level::ONE, &z)?;
    println!("Gr(2,4) metric eigenvalues: {:?}", g.symmetric_eigenvalues().as_slice());
    println!("positive definite: {}", positivity_check(Level::ONE, &z)?);
    Ok(())
}
