use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Weighted point cloud: the empirical law of a random vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
    uniform: bool,
}

impl Sample {
    /// Uniformly weighted sample.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::InvalidInput("sample must contain at least one point".into()));
        }
        Self::with_weights(points, vec![1.0 / n as f64; n])
    }

    /// Weighted sample. Weights must be nonnegative and sum to one within
    /// `1e-9`; they are rescaled to sum to one exactly up to rounding.
    pub fn with_weights(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let dim = points.first().map(Vec::len).unwrap_or(0);
        if dim == 0 {
            return Err(Error::InvalidInput("sample must contain points of dimension >= 1".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::dim(dim, p.len()));
        }
        let coords: Vec<f64> = points.into_iter().flatten().collect();
        Self::from_flat(dim, coords, Some(weights))
    }

    /// Row-major coordinates; `None` weights means uniform.
    pub fn from_flat(dim: usize, coords: Vec<f64>, weights: Option<Vec<f64>>) -> Result<Self> {
        if dim == 0 || coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidInput(format!(
                "{} coordinates do not form points of dimension {dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("sample coordinates must be finite".into()));
        }
        let n = coords.len() / dim;
        let weights = match weights {
            None => vec![1.0 / n as f64; n],
            Some(w) => {
                if w.len() != n {
                    return Err(Error::InvalidInput(format!("{} weights for {n} points", w.len())));
                }
                if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
                    return Err(Error::InvalidInput("weights must be finite and nonnegative".into()));
                }
                let total: f64 = w.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidInput(format!("weights sum to {total}, not 1")));
                }
                if total == 1.0 {
                    w
                } else {
                    w.into_iter().map(|x| x / total).collect()
                }
            }
        };
        let uniform = weights.iter().all(|&w| (w - weights[0]).abs() <= 1e-15);
        Ok(Sample { dim, coords, weights, uniform })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// All weights equal.
    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// Total weight of the points selected by `keep`. Uniform samples count
    /// and divide, which avoids summation noise.
    pub fn mass(&self, mut keep: impl FnMut(&[f64]) -> bool) -> f64 {
        if self.uniform {
            let count = self.points().filter(|x| keep(x)).count();
            count as f64 / self.len() as f64
        } else {
            self.points().zip(&self.weights).filter(|(x, _)| keep(x)).map(|(_, w)| w).sum()
        }
    }

    pub(crate) fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::dim(self.dim, len));
        }
        Ok(())
    }

    /// Coordinate-wise bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.points() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    fn clone_shape(&self) -> Sample {
        Sample { dim: self.dim, coords: Vec::new(), weights: self.weights.clone(), uniform: self.uniform }
    }

    /// `X + c` for a fixed vector `c`.
    pub fn translated(&self, c: &[f64]) -> Result<Sample> {
        self.check_dim(c.len())?;
        let coords = self.coords.iter().enumerate().map(|(i, x)| x + c[i % self.dim]).collect();
        Ok(Sample { coords, ..self.clone_shape() })
    }

    /// `t X`.
    pub fn scaled(&self, t: f64) -> Sample {
        Sample { coords: self.coords.iter().map(|x| x * t).collect(), ..self.clone_shape() }
    }

    /// `-X`.
    pub fn negated(&self) -> Sample {
        self.scaled(-1.0)
    }

    /// `A X + b` for planar samples (row-major `A`).
    pub fn map_affine_2d(&self, a: [[f64; 2]; 2], b: [f64; 2]) -> Result<Sample> {
        self.check_dim(2)?;
        let coords = self
            .points()
            .flat_map(|p| {
                [a[0][0] * p[0] + a[0][1] * p[1] + b[0], a[1][0] * p[0] + a[1][1] * p[1] + b[1]]
            })
            .collect();
        Ok(Sample { coords, ..self.clone_shape() })
    }
}

/// A probability level in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ProbabilityLevel(f64);

impl ProbabilityLevel {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::LevelDomain(format!("{value} is not in [0, 1]")));
        }
        Ok(ProbabilityLevel(value))
    }

    /// `num / den`, e.g. `ratio(3, 8)`.
    pub fn ratio(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::LevelDomain("zero denominator".into()));
        }
        Self::new(num as f64 / den as f64)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - p`.
    pub fn complement(self) -> Self {
        ProbabilityLevel(1.0 - self.0)
    }
}

impl fmt::Display for ProbabilityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Accepts decimals (`0.375`) and ratios (`3/8`).
impl FromStr for ProbabilityLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::LevelDomain(format!("cannot parse probability level {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: f64 = n.trim().parse().map_err(|_| bad())?;
                let d: f64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0.0 {
                    return Err(bad());
                }
                Self::new(n / d)
            }
            None => Self::new(s.parse().map_err(|_| bad())?),
        }
    }
}

impl TryFrom<f64> for ProbabilityLevel {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_samples() {
        assert!(Sample::new(vec![]).is_err());
        assert!(Sample::new(vec![vec![1.0, 2.0], vec![1.0]]).is_err());
        assert!(Sample::new(vec![vec![f64::NAN]]).is_err());
        assert!(Sample::with_weights(vec![vec![0.0], vec![1.0]], vec![0.5, 0.6]).is_err());
        assert!(Sample::with_weights(vec![vec![0.0], vec![1.0]], vec![-0.5, 1.5]).is_err());
    }

    #[test]
    fn uniform_weights_sum_to_one() {
        let s = Sample::new((0..7).map(|i| vec![i as f64]).collect()).unwrap();
        let total: f64 = s.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(s.is_uniform());
    }

    #[test]
    fn levels_parse() {
        assert_eq!("3/8".parse::<ProbabilityLevel>().unwrap().value(), 0.375);
        assert_eq!("0.5".parse::<ProbabilityLevel>().unwrap().value(), 0.5);
        assert!(matches!("1.5".parse::<ProbabilityLevel>(), Err(Error::LevelDomain(_))));
        assert!("x".parse::<ProbabilityLevel>().is_err());
    }
}
