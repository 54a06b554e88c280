use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::frame::project_generator;
use crate::kernels::ManifoldSpec;
use crate::matrix::{is_finite, max_abs, CMat, C64};

/// Relative residual up to which a generator is snapped onto the Lie algebra.
pub const ALGEBRA_TOL: f64 = 1e-12;

#[derive(Deserialize)]
struct RawSchedule {
    #[serde(with = "crate::matrix::json_vec")]
    generators: Vec<CMat>,
    samples: Vec<Vec<f64>>,
}

/// `H(t) = Σ_j a_j(t) X_j` with the coefficients sampled on a time grid and
/// interpolated linearly. A single sample row is a constant schedule valid for
/// all times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSchedule")]
pub struct HamiltonianSchedule {
    #[serde(with = "crate::matrix::json_vec")]
    generators: Vec<CMat>,
    samples: Vec<Vec<f64>>,
}

impl TryFrom<RawSchedule> for HamiltonianSchedule {
    type Error = Error;
    fn try_from(raw: RawSchedule) -> Result<Self> {
        HamiltonianSchedule::new(raw.generators, raw.samples)
    }
}

impl HamiltonianSchedule {
    pub fn new(generators: Vec<CMat>, samples: Vec<Vec<f64>>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidSchedule("at least one generator is required".into()))?;
        let n = first.nrows();
        for g in &generators {
            if g.shape() != (n, n) {
                return Err(Error::DimensionMismatch { expected: (n, n), found: g.shape() });
            }
            if !is_finite(g) {
                return Err(Error::NonFinite);
            }
        }
        if samples.is_empty() {
            return Err(Error::InvalidSchedule("no coefficient samples".into()));
        }
        let width = generators.len() + 1;
        for row in &samples {
            if row.len() != width {
                return Err(Error::InvalidSchedule(format!(
                    "sample row has {} entries, expected t plus {} coefficients",
                    row.len(),
                    generators.len()
                )));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        if samples.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(Error::InvalidSchedule("sample times must increase strictly".into()));
        }
        Ok(HamiltonianSchedule { generators, samples })
    }

    /// Time-independent `Σ_j a_j X_j`.
    pub fn constant(generators: Vec<CMat>, coefficients: &[f64]) -> Result<Self> {
        let mut row = vec![0.0];
        row.extend_from_slice(coefficients);
        Self::new(generators, vec![row])
    }

    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn dimension(&self) -> usize {
        self.generators[0].nrows()
    }

    pub fn is_constant(&self) -> bool {
        self.samples.len() == 1
    }

    /// First and last sample time (unbounded for constant schedules).
    pub fn span(&self) -> (f64, f64) {
        if self.is_constant() {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            (self.samples[0][0], self.samples[self.samples.len() - 1][0])
        }
    }

    pub fn coefficients(&self, t: f64) -> Result<Vec<f64>> {
        if self.is_constant() {
            return Ok(self.samples[0][1..].to_vec());
        }
        let (lo, hi) = self.span();
        let slack = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
        if !(t >= lo - slack && t <= hi + slack) {
            return Err(Error::ScheduleGap { t });
        }
        let t = t.clamp(lo, hi);
        let k = self.samples.partition_point(|row| row[0] <= t).clamp(1, self.samples.len() - 1);
        let (a, b) = (&self.samples[k - 1], &self.samples[k]);
        let w = (t - a[0]) / (b[0] - a[0]);
        Ok(a[1..].iter().zip(&b[1..]).map(|(x, y)| x + w * (y - x)).collect())
    }

    pub fn at(&self, t: f64) -> Result<CMat> {
        let coeffs = self.coefficients(t)?;
        let n = self.dimension();
        let mut h = CMat::zeros(n, n);
        for (g, &a) in self.generators.iter().zip(&coeffs) {
            if a != 0.0 {
                h += g * C64::new(a, 0.0);
            }
        }
        Ok(h)
    }

    /// Checks every generator against the manifold's Lie algebra and snaps it
    /// on exactly.
    pub fn bind(&self, spec: &ManifoldSpec) -> Result<Self> {
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let (proj, residual) = project_generator(spec, g)?;
                if residual > ALGEBRA_TOL * (1.0 + max_abs(g)) {
                    return Err(Error::GeneratorNotInAlgebra { residual });
                }
                Ok(proj)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HamiltonianSchedule { generators, samples: self.samples.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::Family;
    use crate::matrix::{c64, pauli};

    #[test]
    fn linear_interpolation_and_gaps() {
        let [sx, _, sz] = pauli();
        let s = HamiltonianSchedule::new(vec![sx, sz], vec![vec![0.0, 1.0, 0.0], vec![2.0, 3.0, 4.0]]).unwrap();
        assert_eq!(s.coefficients(1.0).unwrap(), vec![2.0, 2.0]);
        assert_eq!(s.coefficients(2.0).unwrap(), vec![3.0, 4.0]);
        assert_eq!(s.coefficients(2.5), Err(Error::ScheduleGap { t: 2.5 }));
        let h = s.at(0.5).unwrap();
        assert_eq!(h[(0, 1)], c64(1.5, 0.0));
        assert_eq!(h[(0, 0)], c64(1.0, 0.0));
    }

    #[test]
    fn constant_schedule_covers_all_times() {
        let [_, _, sz] = pauli();
        let s = HamiltonianSchedule::constant(vec![sz], &[0.7]).unwrap();
        assert_eq!(s.at(1e6).unwrap()[(1, 1)], c64(-0.7, 0.0));
    }

    #[test]
    fn malformed_schedules() {
        let [sx, _, _] = pauli();
        assert!(HamiltonianSchedule::new(vec![], vec![vec![0.0]]).is_err());
        assert!(HamiltonianSchedule::new(vec![sx.clone()], vec![vec![0.0]]).is_err());
        assert!(HamiltonianSchedule::new(vec![sx], vec![vec![1.0, 0.0], vec![1.0, 1.0]]).is_err());
    }

    #[test]
    fn bind_rejects_non_hermitian() {
        let spec = ManifoldSpec::cp1();
        let bad = CMat::from_fn(2, 2, |i, j| if i < j { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
        let s = HamiltonianSchedule::constant(vec![bad], &[1.0]).unwrap();
        assert!(matches!(s.bind(&spec), Err(Error::GeneratorNotInAlgebra { .. })));
        let [sx, _, _] = pauli();
        let ok = HamiltonianSchedule::constant(vec![sx], &[1.0]).unwrap();
        assert!(ok.bind(&spec).is_ok());
    }

    #[test]
    fn bind_uses_the_indefinite_form_on_the_disc() {
        let [sx, sy, sz] = pauli();
        let disc = ManifoldSpec::disc();
        // su(1,1): σ_z and iσ_x, iσ_y
        let i = c64(0.0, 1.0);
        let good = HamiltonianSchedule::constant(vec![sz, &sx * i, &sy * i], &[1.0, 1.0, 1.0]).unwrap();
        assert!(good.bind(&disc).is_ok());
        let bad = HamiltonianSchedule::constant(vec![sx], &[1.0]).unwrap();
        assert!(bad.bind(&disc).is_err());
        let ci = ManifoldSpec::new(Family::CI, 1, 1, true).unwrap();
        assert!(bad.bind(&ci).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let [sx, _, _] = pauli();
        let s = HamiltonianSchedule::new(vec![sx], vec![vec![0.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: HamiltonianSchedule = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"generators": [[[[1,0]]]], "samples": [[1, 0], [0, 1]]}"#;
        assert!(serde_json::from_str::<HamiltonianSchedule>(bad).is_err());
    }
}
