//! Poincaré polynomials of homogeneous spaces `G/H` from Weyl-group degrees,
//! `P(t) = Π(1 − t^{2e_H}) / Π(1 − t^{2e_G})` for equal-rank pairs, with a
//! Betti-number sanity check and the minimal-orbit table.

use kahler_phase::topology::{betti_validate, min_orbit, parse_simple, poincare};

fn main() -> kahler_phase::Result<()> {
    for q in [
        "SU(2)/U(1)",
        "SU(3)/U(1)xU(1)",
        "SU(4)/SU(2)xSU(2)xU(1)",
        "SO(5)/U(2)",
        "Sp(3)/U(3)",
        "SO(8)/U(4)",
        "G2/U(2)",
        "E6/SO(10)xU(1)",
    ] {
        let p = poincare(q)?;
        let report = betti_validate(&p);
        println!("{q:<24} χ = {:<4} ok = {}  P = {}", p.eval(1), report.ok(), p.render());
    }
    // rank mismatch is an error, not a wrong answer
    if let Err(e) = poincare("SU(3)/U(1)") {
        println!("SU(3)/U(1): {e}");
    }

    println!();
    for g in ["A3", "B3", "C3", "D4", "G2", "F4", "E6", "E7", "E8"] {
        let o = min_orbit(&parse_simple(g)?)?;
        println!("{g}: minimal orbit dim {:<3} isotropy {}", o.dimension, o.isotropy);
    }
    Ok(())
}
