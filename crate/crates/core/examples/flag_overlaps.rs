//! Coherent-state overlaps on the full flag manifold of SU(3).
//!
//! Points are upper-unipotent matrices `ζ`; the kernel is a product of
//! lower-right principal minors of `ζ₁†ζ₂` raised to the weights. With a
//! single non-zero weight the flag kernel reduces to a projective one.

use kahler_phase::kernels::flag::{flag_minor_kernel, flag_overlap, upper_unipotent};
use kahler_phase::matrix::c64;

fn main() -> kahler_phase::Result<()> {
    let a = upper_unipotent(3, &[c64(0.3, 0.1), c64(-0.2, 0.4), c64(0.5, -0.3)])?;
    let b = upper_unipotent(3, &[c64(-0.1, 0.2), c64(0.6, 0.0), c64(0.1, 0.1)])?;
    for weights in [[1, 0], [0, 1], [1, 1], [2, 1]] {
        let ov = flag_overlap(&weights, &a, &b)?;
        let self_ov = flag_overlap(&weights, &a, &a)?;
        println!(
            "weights {weights:?}  <a|b> = {:+.9} {:+.9}i   |<a|b>| = {:.9}   <a|a> = {:.3}",
            ov.re,
            ov.im,
            ov.norm(),
            self_ov.re
        );
    }
    // kernels multiply across weights
    let m = a.adjoint() * &b;
    let k10 = flag_minor_kernel(&[1, 0], &m)?;
    let k01 = flag_minor_kernel(&[0, 1], &m)?;
    let k11 = flag_minor_kernel(&[1, 1], &m)?;
    println!("K(1,1) − K(1,0)·K(0,1) = {:.1e}", (k11 - k10 * k01).norm());
    Ok(())
}
