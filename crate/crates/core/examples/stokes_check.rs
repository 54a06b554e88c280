//! Two routes to the geometric phase of a closed loop:
//!
//! - the line integral of the connection `∮ θ` along the sampled curve;
//! - a fan of geodesic triangles from the origin through consecutive samples.
//!
//! Both must agree, because the cocycle of each triangle is the symplectic
//! area it encloses. The example runs a latitude circle on CP1 and a random
//! Fourier loop on a Grassmannian.

use kahler_phase::kernels::{Level, ManifoldSpec};
use kahler_phase::loops::{latitude, SmoothLoop};
use kahler_phase::phase::{line_integral_phase, polygon_phase};

fn main() -> kahler_phase::Result<()> {
    let cp1 = ManifoldSpec::cp1();
    for n in [250, 1000, 4000] {
        let pts = latitude(&cp1, 0.7, n)?;
        let li = line_integral_phase(Level::ONE, &pts, 1e-9)?;
        let fan = polygon_phase(Level::ONE, &pts)?;
        println!("latitude r=0.7  n={n:<5} ∮θ = {li:+.12}  fan = {fan:+.12}  diff {:.1e}", (li - fan).abs());
    }

    let gr = ManifoldSpec::grassmannian(2, 1)?;
    let curve = SmoothLoop::random(&gr, 2024, 3, 0.4);
    for n in [500, 2000] {
        let pts = curve.samples(n)?;
        let li = line_integral_phase(Level::ONE, &pts, 1e-9)?;
        let fan = polygon_phase(Level::ONE, &pts)?;
        println!("Gr(2,3) fourier n={n:<5} ∮θ = {li:+.12}  fan = {fan:+.12}  diff {:.1e}", (li - fan).abs());
    }
    Ok(())
}
