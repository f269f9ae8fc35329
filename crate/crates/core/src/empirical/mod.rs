//! Empirical laws and the distribution objects evaluated on them.

mod sample;
mod sweep;

pub use sample::{ProbabilityLevel, Sample};

use crate::error::{Error, Result};
use crate::geometry::{Direction, DualArc, OrderingCone, ANGLE_TOL, LEVEL_TOL, TOL};

/// `w . x_i` for every sample point.
pub(crate) fn projections(s: &Sample, w: &Direction) -> Vec<f64> {
    s.points().map(|x| w.dot(x)).collect()
}

fn check_direction(s: &Sample, w: &Direction) -> Result<()> {
    s.check_dim(w.dim())
}

/// `P(w . X <= t)`, closed with tolerance `1e-9`.
pub fn projected_cdf(s: &Sample, w: &Direction, t: f64) -> Result<f64> {
    check_direction(s, w)?;
    Ok(closed_mass(s, w, t))
}

/// `P(w . X < t)`, strict with tolerance `1e-9`.
pub fn projected_strict_cdf(s: &Sample, w: &Direction, t: f64) -> Result<f64> {
    check_direction(s, w)?;
    Ok(strict_mass(s, w, t))
}

pub(crate) fn closed_mass(s: &Sample, w: &Direction, t: f64) -> f64 {
    s.mass(|x| w.dot(x) <= t + TOL)
}

pub(crate) fn strict_mass(s: &Sample, w: &Direction, t: f64) -> f64 {
    s.mass(|x| w.dot(x) < t - TOL)
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx
}

/// Index of the sample point realising the lower quantile of `values` at
/// level `p`: the first point, in increasing order, at which the cumulative
/// weight reaches `p`.
pub(crate) fn lower_quantile_index(values: &[f64], weights: &[f64], p: f64) -> usize {
    let order = sorted_order(values);
    let mut cum = 0.0;
    for &i in &order {
        cum += weights[i];
        if cum >= p - LEVEL_TOL {
            return i;
        }
    }
    *order.last().expect("nonempty sample")
}

/// Index realising the upper quantile: the first point at which the
/// cumulative weight exceeds `p`. `None` when the quantile is `+inf`.
pub(crate) fn upper_quantile_index(values: &[f64], weights: &[f64], p: f64) -> Option<usize> {
    let mut cum = 0.0;
    for i in sorted_order(values) {
        cum += weights[i];
        if cum > p + LEVEL_TOL {
            return Some(i);
        }
    }
    None
}

/// `q-(p) = inf { t : P(w . X <= t) >= p }` for `0 < p <= 1`.
pub fn scalar_lower_quantile(s: &Sample, w: &Direction, p: ProbabilityLevel) -> Result<f64> {
    check_direction(s, w)?;
    if p.value() <= 0.0 {
        return Err(Error::LevelDomain("lower quantile at level 0 is -infinity".into()));
    }
    let proj = projections(s, w);
    Ok(proj[lower_quantile_index(&proj, s.weights(), p.value())])
}

/// `q+(p) = sup { t : P(w . X < t) <= p }` for `0 <= p < 1`.
pub fn scalar_upper_quantile(s: &Sample, w: &Direction, p: ProbabilityLevel) -> Result<f64> {
    check_direction(s, w)?;
    let proj = projections(s, w);
    match upper_quantile_index(&proj, s.weights(), p.value()) {
        Some(i) if p.value() < 1.0 => Ok(proj[i]),
        _ => Err(Error::LevelDomain(format!("upper quantile at level {p} is +infinity"))),
    }
}

/// Value of the cone distribution function together with a direction
/// attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeCdf {
    pub value: f64,
    /// Minimising direction in `C+`.
    pub argmin: Direction,
    /// `false` when the infimum was taken over a finite direction sample,
    /// making `value` an upper bound.
    pub exact: bool,
    /// Directions inspected (sweep windows count once each in the plane).
    pub directions: usize,
}

/// `F_{X,C}(z) = inf_{w in C+} P(w . X <= w . z)` with its minimiser.
///
/// Planar arcs are swept exactly; finite direction lists (dimension three
/// and up, or explicit dual directions) give an upper bound.
pub fn cone_cdf_detailed(s: &Sample, cone: &OrderingCone, z: &[f64]) -> Result<ConeCdf> {
    s.check_dim(cone.dim())?;
    s.check_dim(z.len())?;
    let arc = cone.dual_arc()?;
    Ok(match &arc {
        DualArc::Directions(ds) => {
            let mut best: Option<(f64, &Direction)> = None;
            for w in ds {
                let m = closed_mass(s, w, w.dot(z));
                if best.is_none_or(|(b, _)| m < b) {
                    best = Some((m, w));
                }
            }
            let (value, w) = best.ok_or_else(|| Error::InvalidCone("empty dual direction list".into()))?;
            ConeCdf { value, argmin: w.clone(), exact: s.dim() == 1, directions: ds.len() }
        }
        DualArc::Full | DualArc::Interval { .. } => {
            let (lo, len, full) = match arc {
                DualArc::Interval { lo, hi } => (lo, hi - lo, false),
                _ => (0.0, 0.0, true),
            };
            let angle = if !full && len <= ANGLE_TOL {
                lo
            } else {
                sweep::min_closed_mass(s, [z[0], z[1]], lo, len, full).angle
            };
            // Re-evaluate directly so the value is an attained F_w(z).
            let w = Direction::from_angle(angle);
            ConeCdf { value: closed_mass(s, &w, w.dot(z)), argmin: w, exact: true, directions: 2 * s.len() + 1 }
        }
    })
}

/// `F_{X,C}(z)`.
pub fn cone_cdf(s: &Sample, cone: &OrderingCone, z: &[f64]) -> Result<f64> {
    cone_cdf_detailed(s, cone, z).map(|r| r.value)
}

/// `sup_w P(w . X > w . z) = 1 - F_{X,C}(z)`.
pub fn cone_survival(s: &Sample, cone: &OrderingCone, z: &[f64]) -> Result<f64> {
    cone_cdf(s, cone, z).map(|f| 1.0 - f)
}

/// Halfspace (Tukey) depth: the cone distribution function of the zero cone.
pub fn tukey_depth(s: &Sample, z: &[f64]) -> Result<f64> {
    cone_cdf(s, &OrderingCone::zero(s.dim())?, z)
}

/// `P(X <= z)` componentwise, closed with tolerance `1e-9`.
pub fn joint_cdf(s: &Sample, z: &[f64]) -> Result<f64> {
    s.check_dim(z.len())?;
    Ok(s.mass(|x| x.iter().zip(z).all(|(a, b)| *a <= b + TOL)))
}

/// `sup_{w in C+} P(w . X < w . z)`, the mass tested by upper quantiles.
/// Equals `1 - F_{X,-C}(z)`.
pub fn sup_strict_mass(s: &Sample, cone: &OrderingCone, z: &[f64]) -> Result<f64> {
    cone_cdf(s, &cone.negated(), z).map(|f| 1.0 - f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four() -> Sample {
        Sample::new(vec![vec![-1.0, 2.0], vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, -1.0]]).unwrap()
    }

    fn dir(v: [f64; 2]) -> Direction {
        Direction::new(v.to_vec()).unwrap()
    }

    fn lvl(p: f64) -> ProbabilityLevel {
        ProbabilityLevel::new(p).unwrap()
    }

    #[test]
    fn projected_cdfs() {
        let s = four();
        assert_eq!(projected_cdf(&s, &dir([2.0, 1.0]), 0.0).unwrap(), 0.5);
        assert_eq!(projected_strict_cdf(&s, &dir([1.0, 1.0]), 1.0 / 2f64.sqrt()).unwrap(), 0.25);
        assert_eq!(projected_cdf(&s, &dir([1.0, 0.0]), 2.0).unwrap(), 1.0);
        assert_eq!(projected_cdf(&s, &dir([1.0, 0.0]), -1.5).unwrap(), 0.0);
    }

    #[test]
    fn scalar_quantiles() {
        let s = four();
        let q = scalar_lower_quantile(&s, &dir([2.0, 1.0]), lvl(0.375)).unwrap();
        assert!(q.abs() < 1e-12);
        let q = scalar_lower_quantile(&s, &dir([1.0, 1.0]), lvl(0.375)).unwrap();
        assert!((q - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(scalar_upper_quantile(&s, &dir([1.0, 0.0]), lvl(0.25)).unwrap(), 0.0);
        assert_eq!(scalar_upper_quantile(&s, &dir([1.0, 0.0]), lvl(0.0)).unwrap(), -1.0);
        assert_eq!(scalar_lower_quantile(&s, &dir([1.0, 0.0]), lvl(1.0)).unwrap(), 2.0);
        assert!(matches!(scalar_lower_quantile(&s, &dir([1.0, 0.0]), lvl(0.0)), Err(Error::LevelDomain(_))));
        assert!(matches!(scalar_upper_quantile(&s, &dir([1.0, 0.0]), lvl(1.0)), Err(Error::LevelDomain(_))));
    }

    #[test]
    fn four_point_cone_cdf() {
        let s = four();
        let c = OrderingCone::orthant(2).unwrap();
        assert_eq!(cone_cdf(&s, &c, &[0.0, 0.0]).unwrap(), 0.25);
        assert_eq!(cone_cdf(&s, &c, &[1.0, 1.0]).unwrap(), 0.75);
        assert_eq!(cone_survival(&s, &c, &[0.0, 0.0]).unwrap(), 0.75);
        assert_eq!(tukey_depth(&s, &[0.0, 0.0]).unwrap(), 0.25);
        assert_eq!(tukey_depth(&s, &[5.0, 5.0]).unwrap(), 0.0);
        assert_eq!(joint_cdf(&s, &[0.0, 0.0]).unwrap(), 0.25);
        let single = Sample::new(vec![vec![0.3, 0.4]]).unwrap();
        assert_eq!(tukey_depth(&single, &[0.3, 0.4]).unwrap(), 1.0);
    }

    #[test]
    fn minimiser_isolates_origin() {
        let r = cone_cdf_detailed(&four(), &OrderingCone::orthant(2).unwrap(), &[0.0, 0.0]).unwrap();
        let [a, b] = [r.argmin.as_slice()[0], r.argmin.as_slice()[1]];
        assert!(a > 0.0 && b > 0.0);
        assert!(r.exact);
    }

    #[test]
    fn halfspace_cone_is_projection() {
        let s = four();
        let w = dir([1.0, 3.0]);
        let c = OrderingCone::halfspace(w.clone()).unwrap();
        for z in [[0.0, 0.0], [1.0, 0.5], [-2.0, 0.3]] {
            assert_eq!(cone_cdf(&s, &c, &z).unwrap(), projected_cdf(&s, &w, w.dot(&z)).unwrap());
        }
    }

    #[test]
    fn one_dimensional_orthant_is_ordinary_cdf() {
        let s = Sample::new(vec![vec![1.0], vec![2.0], vec![3.0], vec![4.0]]).unwrap();
        let c = OrderingCone::orthant(1).unwrap();
        assert_eq!(cone_cdf(&s, &c, &[2.5]).unwrap(), 0.5);
        assert_eq!(tukey_depth(&s, &[2.5]).unwrap(), 0.5);
        assert_eq!(tukey_depth(&s, &[1.0]).unwrap(), 0.25);
    }
}
