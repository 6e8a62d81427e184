//! Deterministic sample sets on a ball in C^n.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::GeometryError;

/// Ball |z| ≤ radius in C^n, sampled by a tensor grid clipped to the ball
/// followed by `fill` seeded random points.
///
/// Points are generated as one fixed sequence, so a domain with a larger
/// `fill` (same grid and seed) contains every point of a smaller one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledDomain {
    pub n: usize,
    pub radius: f64,
    pub grid_per_axis: usize,
    pub fill: usize,
    pub seed: u64,
    #[serde(skip)]
    points: Vec<Vec<Complex64>>,
}

impl SampledDomain {
    pub fn ball(n: usize, radius: f64, grid_per_axis: usize, fill: usize, seed: u64) -> Result<SampledDomain, GeometryError> {
        if !(1..=4).contains(&n) {
            return Err(GeometryError::BadDomain(format!("n = {n} is outside 1..=4")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeometryError::BadDomain(format!("radius {radius} must be positive")));
        }
        if grid_per_axis > 0 && grid_per_axis.pow(2 * n as u32) > 1_000_000 {
            return Err(GeometryError::BadDomain("tensor grid exceeds 10^6 points".into()));
        }
        let mut points = Vec::new();
        if grid_per_axis > 0 {
            let g = grid_per_axis;
            let coord = |i: usize| if g == 1 { 0.0 } else { -radius + 2.0 * radius * i as f64 / (g - 1) as f64 };
            let total = g.pow(2 * n as u32);
            for idx in 0..total {
                let mut rest = idx;
                let mut z = Vec::with_capacity(n);
                for _ in 0..n {
                    let re = coord(rest % g);
                    rest /= g;
                    let im = coord(rest % g);
                    rest /= g;
                    z.push(Complex64::new(re, im));
                }
                if norm(&z) <= radius {
                    points.push(z);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..fill {
            // uniform in the ball: Gaussian direction, radius ∝ U^{1/2n}
            let v: Vec<f64> = (0..2 * n).map(|_| rng.sample(StandardNormal)).collect();
            let len = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            let r = radius * rng.gen::<f64>().powf(1.0 / (2 * n) as f64);
            let z = (0..n).map(|j| Complex64::new(v[2 * j], v[2 * j + 1]) * (r / len)).collect();
            points.push(z);
        }
        Ok(SampledDomain { n, radius, grid_per_axis, fill, seed, points })
    }

    pub fn points(&self) -> &[Vec<Complex64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Rebuilds the point set after deserialization.
    pub fn regenerate(&self) -> Result<SampledDomain, GeometryError> {
        Self::ball(self.n, self.radius, self.grid_per_axis, self.fill, self.seed)
    }
}

pub(crate) fn norm(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// A point as (re, im) pairs, for reports.
pub fn point_pairs(z: &[Complex64]) -> Vec<[f64; 2]> {
    z.iter().map(|c| [c.re, c.im]).collect()
}
