use serde::{Deserialize, Serialize};

use super::TOL;
use crate::error::{Error, Result};

/// A unit vector. Zero and non-finite input is rejected at construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Direction(Vec<f64>);

impl Direction {
    pub fn new(v: Vec<f64>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidInput("direction has no components".into()));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("direction has non-finite components".into()));
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidInput("direction must be nonzero".into()));
        }
        Ok(Direction(v.into_iter().map(|x| x / norm).collect()))
    }

    /// Unit vector `(cos theta, sin theta)`, snapped to the axes when a
    /// component is rounding noise.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        if c.abs() < 1e-15 {
            return Direction(vec![0.0, s.signum()]);
        }
        if s.abs() < 1e-15 {
            return Direction(vec![c.signum(), 0.0]);
        }
        Direction(vec![c, s])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[axis] = 1.0;
        Direction(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, z: &[f64]) -> f64 {
        self.0.iter().zip(z).map(|(a, b)| a * b).sum()
    }

    pub fn negated(&self) -> Self {
        Direction(self.0.iter().map(|x| -x).collect())
    }

    /// Polar angle in `[0, 2pi)`; planar directions only.
    pub fn angle(&self) -> f64 {
        debug_assert_eq!(self.dim(), 2);
        normalize_angle(self.0[1].atan2(self.0[0]))
    }

    pub(crate) fn xy(&self) -> [f64; 2] {
        [self.0[0], self.0[1]]
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        Direction::new(v).map_err(serde::de::Error::custom)
    }
}

/// Maps an angle into `[0, 2pi)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let r = theta.rem_euclid(tau);
    if r >= tau {
        0.0
    } else {
        r
    }
}

/// The closed halfspace `{z : normal . z >= offset}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Direction,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Direction, offset: f64) -> Self {
        Halfspace { normal, offset }
    }

    /// Halfspace whose boundary passes through `point`.
    pub fn through(normal: Direction, point: &[f64]) -> Self {
        let offset = normal.dot(point);
        Halfspace { normal, offset }
    }

    /// Signed slack `normal . z - offset`; nonnegative inside.
    pub fn slack(&self, z: &[f64]) -> f64 {
        self.normal.dot(z) - self.offset
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        self.slack(z) >= -TOL
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }
}

/// Membership in an intersection of halfspaces, any dimension.
pub fn all_contain(halfspaces: &[Halfspace], z: &[f64]) -> bool {
    halfspaces.iter().all(|h| h.contains(z))
}
