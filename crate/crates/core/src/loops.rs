//! Closed test loops in chart coordinates.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::kernels::{validate_point, Family, ManifoldSpec, PointMatrix};
use crate::matrix::{CMat, C64};

/// `n + 1` samples of `z = r e^{iφ}` on a one-dimensional chart, the last
/// sample repeating the first.
pub fn latitude(spec: &ManifoldSpec, r: f64, n: usize) -> Result<Vec<PointMatrix>> {
    let mut pts = (0..n)
        .map(|k| {
            let z = C64::from_polar(r, TAU * k as f64 / n as f64);
            validate_point(spec, CMat::from_element(1, 1, z))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(first) = pts.first().cloned() {
        pts.push(first);
    }
    Ok(pts)
}

/// A trigonometric loop `Z(t) = Z_c + Σ_k (A_k cos 2πkt + B_k sin 2πkt)`.
#[derive(Clone, Debug)]
pub struct SmoothLoop {
    spec: ManifoldSpec,
    center: Vec<C64>,
    cos: Vec<Vec<C64>>,
    sin: Vec<Vec<C64>>,
}

impl SmoothLoop {
    /// Random coefficients in the independent coordinates; mode `k` has
    /// amplitude `amplitude / k`.
    pub fn random(spec: &ManifoldSpec, seed: u64, modes: usize, amplitude: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = spec.complex_dim();
        let mut draw = |a: f64| -> Vec<C64> {
            (0..dim).map(|_| C64::new(rng.random_range(-a..a), rng.random_range(-a..a))).collect()
        };
        let center = draw(0.5 * amplitude);
        let cos = (1..=modes).map(|k| draw(amplitude / k as f64)).collect();
        let sin = (1..=modes).map(|k| draw(amplitude / k as f64)).collect();
        SmoothLoop { spec: *spec, center, cos, sin }
    }

    pub fn spec(&self) -> &ManifoldSpec {
        &self.spec
    }

    pub fn at(&self, t: f64) -> Result<PointMatrix> {
        let mut c = self.center.clone();
        for (k, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let w = TAU * (k + 1) as f64 * t;
            let (cw, sw) = (w.cos(), w.sin());
            for (i, ci) in c.iter_mut().enumerate() {
                *ci += a[i] * cw + b[i] * sw;
            }
        }
        validate_point(&self.spec, self.spec.embed(&c)?)
    }

    /// `n + 1` samples over one period, the last repeating the first.
    pub fn samples(&self, n: usize) -> Result<Vec<PointMatrix>> {
        let mut pts = (0..n).map(|k| self.at(k as f64 / n as f64)).collect::<Result<Vec<_>>>()?;
        if let Some(first) = pts.first().cloned() {
            pts.push(first);
        }
        Ok(pts)
    }
}

/// Loop shapes accepted by the Stokes check.
#[derive(Clone, Debug, PartialEq, serde::Deserialize, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LoopSpec {
    Latitude { r: f64 },
    Fourier { seed: u64, modes: usize, amplitude: f64 },
    Constant {
        #[serde(with = "crate::matrix::json")]
        point: CMat,
    },
}

impl LoopSpec {
    pub fn samples(&self, spec: &ManifoldSpec, n: usize) -> Result<Vec<PointMatrix>> {
        match self {
            LoopSpec::Latitude { r } => {
                if spec.complex_dim() != 1 || spec.family() == Family::DIII {
                    return Err(crate::Error::InvalidSpec("latitude loops need a one-dimensional chart".into()));
                }
                latitude(spec, *r, n)
            }
            LoopSpec::Fourier { seed, modes, amplitude } => SmoothLoop::random(spec, *seed, *modes, *amplitude).samples(n),
            LoopSpec::Constant { point } => {
                let p = validate_point(spec, point.clone())?;
                Ok(vec![p; n + 1])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::projective_distance;

    #[test]
    fn samples_close_exactly() {
        let spec = ManifoldSpec::grassmannian(2, 2).unwrap();
        let l = SmoothLoop::random(&spec, 5, 3, 0.4);
        let pts = l.samples(100).unwrap();
        assert_eq!(pts.len(), 101);
        assert_eq!(projective_distance(&pts[0], &pts[100]).unwrap(), 0.0);
        let a = l.at(0.0).unwrap();
        let b = l.at(1.0).unwrap();
        assert!(projective_distance(&a, &b).unwrap() < 1e-12);
    }

    #[test]
    fn seeds_are_reproducible() {
        let spec = ManifoldSpec::grassmannian(2, 2).unwrap();
        let a = SmoothLoop::random(&spec, 9, 2, 0.3).at(0.3).unwrap();
        let b = SmoothLoop::random(&spec, 9, 2, 0.3).at(0.3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn loop_spec_json() {
        let l: LoopSpec = serde_json::from_str(r#"{"kind": "latitude", "r": 1.0}"#).unwrap();
        assert_eq!(l.samples(&ManifoldSpec::cp1(), 8).unwrap().len(), 9);
        let bad = l.samples(&ManifoldSpec::grassmannian(2, 2).unwrap(), 8);
        assert!(bad.is_err());
    }
}
