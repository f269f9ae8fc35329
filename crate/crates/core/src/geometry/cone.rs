use std::f64::consts::{FRAC_PI_2, PI, TAU};

use statrs::distribution::{ContinuousCDF, Normal};

use super::direction::{normalize_angle, Direction};
use super::{ANGLE_TOL, TOL};
use crate::error::{Error, Result};

/// Number of dual directions sampled for cones in dimension three and up.
pub const DEFAULT_DIRECTION_COUNT: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub enum ConeKind {
    /// `C = {0}`; the order is trivial and `C+` is the whole space.
    Zero,
    /// The nonnegative orthant.
    Orthant,
    /// The nonpositive orthant, the reflection of [`ConeKind::Orthant`].
    NegativeOrthant,
    /// Planar cone spanned by the listed generators.
    Generators2d(Vec<[f64; 2]>),
    /// `C = {z : w . z >= 0}`, whose dual is the single ray through `w`.
    Halfspace(Direction),
    /// `C = {z : w . z >= 0 for every listed w}`; the list doubles as the
    /// finite direction set used for infima over `C+`.
    DualDirections(Vec<Direction>),
}

/// A closed convex ordering cone together with the resolution used when its
/// dual has to be sampled (dimension three and up).
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingCone {
    dim: usize,
    kind: ConeKind,
    direction_count: usize,
}

/// Admissible scalarization directions: the unit vectors of `C+`.
#[derive(Debug, Clone, PartialEq)]
pub enum DualArc {
    /// Every planar direction (`C = {0}`).
    Full,
    /// Unit normals with polar angle in `[lo, hi]`, `hi - lo <= pi`. `lo` lies
    /// in `[0, 2pi)`; `hi` may exceed `2pi`. A degenerate arc has `lo == hi`.
    Interval { lo: f64, hi: f64 },
    /// Finite direction list; exact for `d = 1`, an outer sample otherwise.
    Directions(Vec<Direction>),
}

impl DualArc {
    /// Arc length in radians for planar arcs.
    pub fn width(&self) -> Option<f64> {
        match self {
            DualArc::Full => Some(TAU),
            DualArc::Interval { lo, hi } => Some(hi - lo),
            DualArc::Directions(_) => None,
        }
    }

    pub fn contains_angle(&self, theta: f64) -> bool {
        match self {
            DualArc::Full => true,
            DualArc::Interval { lo, hi } => {
                let rel = normalize_angle(theta - lo);
                rel <= hi - lo + ANGLE_TOL || rel >= TAU - ANGLE_TOL
            }
            DualArc::Directions(ds) => {
                let w = Direction::from_angle(theta);
                ds.iter().any(|d| d.dim() == 2 && d.dot(w.as_slice()) >= 1.0 - ANGLE_TOL)
            }
        }
    }

    /// Rotates a planar arc by `pi`, which is the dual of `-C`.
    pub fn rotated_half_turn(&self) -> DualArc {
        match self {
            DualArc::Full => DualArc::Full,
            DualArc::Interval { lo, hi } => {
                let nlo = normalize_angle(lo + PI);
                DualArc::Interval { lo: nlo, hi: nlo + (hi - lo) }
            }
            DualArc::Directions(ds) => DualArc::Directions(ds.iter().map(Direction::negated).collect()),
        }
    }

    /// Finite direction list: the explicit list, or `samples` evenly spaced
    /// angles covering a planar arc (endpoints included).
    pub fn sample_directions(&self, samples: usize) -> Vec<Direction> {
        match self {
            DualArc::Directions(ds) => ds.clone(),
            DualArc::Full => (0..samples)
                .map(|k| Direction::from_angle(TAU * k as f64 / samples as f64))
                .collect(),
            DualArc::Interval { lo, hi } => {
                if samples <= 1 || hi - lo <= ANGLE_TOL {
                    return vec![Direction::from_angle(*lo)];
                }
                (0..samples)
                    .map(|k| Direction::from_angle(lo + (hi - lo) * k as f64 / (samples - 1) as f64))
                    .collect()
            }
        }
    }
}

impl OrderingCone {
    pub fn zero(dim: usize) -> Result<Self> {
        Self::build(dim, ConeKind::Zero)
    }

    pub fn orthant(dim: usize) -> Result<Self> {
        Self::build(dim, ConeKind::Orthant)
    }

    pub fn negative_orthant(dim: usize) -> Result<Self> {
        Self::build(dim, ConeKind::NegativeOrthant)
    }

    /// Planar cone spanned by `generators`. All-zero generator lists give the
    /// zero cone. Generators spanning more than a halfplane, or exactly a
    /// line, are rejected because `C+` is then `{0}` or not an arc.
    pub fn generators_2d(generators: Vec<[f64; 2]>) -> Result<Self> {
        if generators.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidCone("non-finite generator".into()));
        }
        let cone = OrderingCone {
            dim: 2,
            kind: ConeKind::Generators2d(generators),
            direction_count: DEFAULT_DIRECTION_COUNT,
        };
        cone.dual_arc()?;
        Ok(cone)
    }

    pub fn halfspace(normal: Direction) -> Result<Self> {
        Self::build(normal.dim(), ConeKind::Halfspace(normal))
    }

    pub fn dual_directions(directions: Vec<Direction>) -> Result<Self> {
        let first = directions
            .first()
            .ok_or_else(|| Error::InvalidCone("dual direction list is empty".into()))?;
        let dim = first.dim();
        if let Some(bad) = directions.iter().find(|d| d.dim() != dim) {
            return Err(Error::dim(dim, bad.dim()));
        }
        Self::build(dim, ConeKind::DualDirections(directions))
    }

    fn build(dim: usize, kind: ConeKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidCone("dimension must be at least 1".into()));
        }
        Ok(OrderingCone { dim, kind, direction_count: DEFAULT_DIRECTION_COUNT })
    }

    /// Sets the sample size used for the dual of `zero`/`orthant` cones when
    /// `d >= 3`.
    pub fn with_direction_count(mut self, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidInput("direction count must be at least 1".into()));
        }
        self.direction_count = count;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    pub fn direction_count(&self) -> usize {
        self.direction_count
    }

    /// Finite generators of `C` when they are known.
    pub fn generators(&self) -> Option<Vec<Vec<f64>>> {
        let d = self.dim;
        let basis = |sign: f64| {
            (0..d)
                .map(|k| {
                    let mut v = vec![0.0; d];
                    v[k] = sign;
                    v
                })
                .collect::<Vec<_>>()
        };
        match &self.kind {
            ConeKind::Zero => Some(Vec::new()),
            ConeKind::Orthant => Some(basis(1.0)),
            ConeKind::NegativeOrthant => Some(basis(-1.0)),
            ConeKind::Generators2d(g) => Some(g.iter().map(|v| v.to_vec()).collect()),
            ConeKind::Halfspace(w) if d == 1 => Some(vec![w.as_slice().to_vec()]),
            ConeKind::Halfspace(w) if d == 2 => {
                let [a, b] = w.xy();
                Some(vec![vec![b, -a], vec![-b, a], vec![a, b]])
            }
            _ => None,
        }
    }

    /// Whether the vector `v` lies in `C` (within tolerance).
    pub fn contains(&self, v: &[f64]) -> Result<bool> {
        if v.len() != self.dim {
            return Err(Error::dim(self.dim, v.len()));
        }
        Ok(match &self.kind {
            ConeKind::Zero => v.iter().all(|x| x.abs() <= TOL),
            ConeKind::Orthant => v.iter().all(|&x| x >= -TOL),
            ConeKind::NegativeOrthant => v.iter().all(|&x| x <= TOL),
            ConeKind::Halfspace(w) => w.dot(v) >= -TOL,
            ConeKind::DualDirections(ds) => ds.iter().all(|w| w.dot(v) >= -TOL),
            ConeKind::Generators2d(_) => match self.dual_arc()? {
                DualArc::Full => v.iter().all(|x| x.abs() <= TOL),
                DualArc::Interval { lo, hi } => {
                    Direction::from_angle(lo).dot(v) >= -TOL && Direction::from_angle(hi).dot(v) >= -TOL
                }
                DualArc::Directions(_) => unreachable!("planar generators give an arc"),
            },
        })
    }

    /// Admissible directions of `C+`. See [`DualArc`].
    pub fn dual_arc(&self) -> Result<DualArc> {
        match self.dim {
            1 => self.dual_arc_1d(),
            2 => self.dual_arc_2d(),
            _ => self.dual_arc_nd(),
        }
    }

    fn dual_arc_1d(&self) -> Result<DualArc> {
        let plus = Direction::unit(1, 0);
        Ok(DualArc::Directions(match &self.kind {
            ConeKind::Zero => vec![plus.clone(), plus.negated()],
            ConeKind::Orthant => vec![plus],
            ConeKind::NegativeOrthant => vec![plus.negated()],
            ConeKind::Halfspace(w) => vec![w.clone()],
            ConeKind::DualDirections(ds) => ds.clone(),
            ConeKind::Generators2d(_) => {
                return Err(Error::InvalidCone("generators2d requires dimension 2".into()))
            }
        }))
    }

    fn dual_arc_2d(&self) -> Result<DualArc> {
        match &self.kind {
            ConeKind::Zero => Ok(DualArc::Full),
            ConeKind::Orthant => Ok(DualArc::Interval { lo: 0.0, hi: FRAC_PI_2 }),
            ConeKind::NegativeOrthant => Ok(DualArc::Interval { lo: PI, hi: PI + FRAC_PI_2 }),
            ConeKind::Halfspace(w) => {
                let a = w.angle();
                Ok(DualArc::Interval { lo: a, hi: a })
            }
            ConeKind::DualDirections(ds) => Ok(DualArc::Directions(ds.clone())),
            ConeKind::Generators2d(g) => planar_dual(g),
        }
    }

    fn dual_arc_nd(&self) -> Result<DualArc> {
        let d = self.dim;
        let n = self.direction_count;
        Ok(DualArc::Directions(match &self.kind {
            ConeKind::Zero => sphere_lattice(d, n, false),
            ConeKind::Orthant => sphere_lattice(d, n, true),
            ConeKind::NegativeOrthant => sphere_lattice(d, n, true).iter().map(Direction::negated).collect(),
            ConeKind::Halfspace(w) => vec![w.clone()],
            ConeKind::DualDirections(ds) => ds.clone(),
            ConeKind::Generators2d(_) => {
                return Err(Error::InvalidCone("generators2d requires dimension 2".into()))
            }
        }))
    }

    /// The reflected cone `-C`.
    pub fn negated(&self) -> OrderingCone {
        let kind = match &self.kind {
            ConeKind::Zero => ConeKind::Zero,
            ConeKind::Orthant if self.dim == 2 => ConeKind::Generators2d(vec![[-1.0, 0.0], [0.0, -1.0]]),
            ConeKind::Orthant => ConeKind::NegativeOrthant,
            ConeKind::NegativeOrthant if self.dim == 2 => ConeKind::Generators2d(vec![[1.0, 0.0], [0.0, 1.0]]),
            ConeKind::NegativeOrthant => ConeKind::Orthant,
            ConeKind::Generators2d(g) => ConeKind::Generators2d(g.iter().map(|[a, b]| [-a, -b]).collect()),
            ConeKind::Halfspace(w) => ConeKind::Halfspace(w.negated()),
            ConeKind::DualDirections(ds) => ConeKind::DualDirections(ds.iter().map(Direction::negated).collect()),
        };
        OrderingCone { dim: self.dim, kind, direction_count: self.direction_count }
    }

    /// Image `A C` of a planar cone under an invertible matrix (row-major).
    pub fn linear_image_2d(&self, a: [[f64; 2]; 2]) -> Result<OrderingCone> {
        if self.dim != 2 {
            return Err(Error::dim(2, self.dim));
        }
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det.abs() < 1e-300 || !det.is_finite() {
            return Err(Error::InvalidInput("matrix is singular".into()));
        }
        let apply = |v: [f64; 2]| [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]];
        // (AC)+ = A^{-T} C+
        let inv_t = |w: &Direction| {
            let [x, y] = w.xy();
            Direction::new(vec![(a[1][1] * x - a[1][0] * y) / det, (-a[0][1] * x + a[0][0] * y) / det])
        };
        let kind = match &self.kind {
            ConeKind::Zero => ConeKind::Zero,
            ConeKind::Orthant => ConeKind::Generators2d(vec![apply([1.0, 0.0]), apply([0.0, 1.0])]),
            ConeKind::NegativeOrthant => ConeKind::Generators2d(vec![apply([-1.0, 0.0]), apply([0.0, -1.0])]),
            ConeKind::Generators2d(g) => ConeKind::Generators2d(g.iter().map(|v| apply(*v)).collect()),
            ConeKind::Halfspace(w) => ConeKind::Halfspace(inv_t(w)?),
            ConeKind::DualDirections(ds) => ConeKind::DualDirections(ds.iter().map(inv_t).collect::<Result<_>>()?),
        };
        let cone = OrderingCone { dim: 2, kind, direction_count: self.direction_count };
        cone.dual_arc()?;
        Ok(cone)
    }
}

/// Dual arc of a planar cone given by generators.
fn planar_dual(generators: &[[f64; 2]]) -> Result<DualArc> {
    let mut angles: Vec<f64> = generators
        .iter()
        .filter(|g| g[0].hypot(g[1]) > 0.0)
        .map(|g| normalize_angle(g[1].atan2(g[0])))
        .collect();
    if angles.is_empty() {
        return Ok(DualArc::Full);
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() <= ANGLE_TOL);

    // The cone spans the complement of the widest circular gap between
    // consecutive generator angles.
    let m = angles.len();
    let (mut gap, mut after_gap) = (TAU - (angles[m - 1] - angles[0]), angles[0]);
    for k in 1..m {
        let g = angles[k] - angles[k - 1];
        if g > gap {
            gap = g;
            after_gap = angles[k];
        }
    }
    let span = TAU - gap;
    if span > PI + ANGLE_TOL {
        return Err(Error::InvalidCone(format!(
            "generators span an angle of {span:.6} rad > pi; the dual cone is {{0}}"
        )));
    }
    if (span - PI).abs() <= ANGLE_TOL {
        // Halfplane, unless every generator sits on the two boundary rays.
        let interior = angles.iter().any(|&t| {
            let rel = normalize_angle(t - after_gap);
            rel > ANGLE_TOL && rel < PI - ANGLE_TOL
        });
        if !interior {
            return Err(Error::InvalidCone(
                "generators span a line; its dual is not a connected arc".into(),
            ));
        }
        let a = normalize_angle(after_gap + FRAC_PI_2);
        return Ok(DualArc::Interval { lo: a, hi: a });
    }
    let lo = normalize_angle(after_gap + span - FRAC_PI_2);
    Ok(DualArc::Interval { lo, hi: lo + (PI - span) })
}

/// Generalized golden ratio for an `m`-dimensional Kronecker sequence: the
/// positive root of `x^(m+1) = x + 1`.
fn kronecker_alphas(m: usize) -> Vec<f64> {
    let mut phi = 2.0f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (m as f64 + 1.0));
    }
    (1..=m).map(|k| (1.0 / phi).powi(k as i32).fract()).collect()
}

/// Deterministic, prefix-nested direction set on the unit sphere (or on its
/// intersection with the nonnegative orthant). The first entries are the
/// signed coordinate axes; the rest come from a golden-ratio Kronecker
/// lattice pushed onto the sphere through the normal quantile function, so
/// a smaller count is always a prefix of a larger one.
pub fn sphere_lattice(dim: usize, count: usize, orthant: bool) -> Vec<Direction> {
    let mut out = Vec::with_capacity(count);
    for k in 0..dim {
        out.push(Direction::unit(dim, k));
        if !orthant {
            out.push(Direction::unit(dim, k).negated());
        }
    }
    out.truncate(count);
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let alphas = kronecker_alphas(dim);
    let mut i = 0u64;
    while out.len() < count {
        i += 1;
        let v: Vec<f64> = alphas
            .iter()
            .map(|a| {
                let u = (0.5 + a * i as f64).fract().clamp(1e-12, 1.0 - 1e-12);
                if orthant {
                    normal.inverse_cdf(0.5 + 0.5 * u)
                } else {
                    normal.inverse_cdf(u)
                }
            })
            .collect();
        if let Ok(d) = Direction::new(v) {
            out.push(d);
        }
    }
    out
}
