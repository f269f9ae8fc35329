//! Set-valued lower and upper quantiles, membership tests and exclusion
//! certificates.

mod planar;

use serde::{Deserialize, Serialize};

use crate::empirical::{
    cone_cdf, cone_cdf_detailed, joint_cdf, projected_strict_cdf, scalar_lower_quantile,
    scalar_upper_quantile, strict_mass, sup_strict_mass, ProbabilityLevel, Sample,
};
use crate::error::{Error, Result};
use crate::geometry::{
    all_contain, intersect_halfspaces_2d, ConvexRegion2D, Direction, DualArc, Halfspace, OrderingCone, ANGLE_TOL,
    LEVEL_TOL, TOL,
};
use planar::{arc_halfspaces, Selector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// Geometric payload of a quantile region.
#[derive(Debug, Clone, PartialEq)]
pub enum RegionGeometry {
    /// Exact planar region.
    Planar(ConvexRegion2D),
    /// Intersection of the listed halfspaces (`d != 2`). The empty list is
    /// the whole space.
    Halfspaces(Vec<Halfspace>),
}

/// A lower region `{z : F_{X,C}(z) >= p}` or an upper region
/// `{z : sup_w P(w . X < w . z) <= p}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileRegion {
    pub geometry: RegionGeometry,
    pub side: Side,
    pub level: ProbabilityLevel,
    pub cone: OrderingCone,
    /// `false` when the region was cut out by a finite direction sample and
    /// is therefore an outer approximation.
    pub exact: bool,
}

impl QuantileRegion {
    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        match &self.geometry {
            RegionGeometry::Planar(r) => z.len() == 2 && r.contains([z[0], z[1]]),
            RegionGeometry::Halfspaces(hs) => z.len() == self.dim() && all_contain(hs, z),
        }
    }

    pub fn planar(&self) -> Option<&ConvexRegion2D> {
        match &self.geometry {
            RegionGeometry::Planar(r) => Some(r),
            RegionGeometry::Halfspaces(_) => None,
        }
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        match &self.geometry {
            RegionGeometry::Planar(r) => r.halfspaces(),
            RegionGeometry::Halfspaces(hs) => hs,
        }
    }
}

/// `{z : w . z >= q-_{w.X}(p)}`.
pub fn lower_w_halfspace(s: &Sample, w: &Direction, p: ProbabilityLevel) -> Result<Halfspace> {
    Ok(Halfspace::new(w.clone(), scalar_lower_quantile(s, w, p)?))
}

/// `{z : w . z <= q+_{w.X}(p)}`, or `None` when `q+` is infinite.
fn upper_w_halfspace(s: &Sample, w: &Direction, p: ProbabilityLevel) -> Result<Option<Halfspace>> {
    match scalar_upper_quantile(s, w, p) {
        Ok(q) => Ok(Some(Halfspace::new(w.negated(), -q))),
        Err(Error::LevelDomain(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn side_halfspaces(s: &Sample, arc: &DualArc, p: ProbabilityLevel, side: Side) -> Result<(Vec<Halfspace>, bool)> {
    let trivial = match side {
        Side::Lower => p.value() <= 0.0,
        Side::Upper => p.value() >= 1.0,
    };
    if trivial {
        return Ok((Vec::new(), true));
    }
    let sel = match side {
        Side::Lower => Selector::Lower,
        Side::Upper => Selector::Upper,
    };
    let per_direction = |ws: &[Direction]| -> Result<Vec<Halfspace>> {
        let mut out = Vec::with_capacity(ws.len());
        for w in ws {
            match side {
                Side::Lower => out.push(lower_w_halfspace(s, w, p)?),
                Side::Upper => out.extend(upper_w_halfspace(s, w, p)?),
            }
        }
        Ok(out)
    };
    Ok(match arc {
        DualArc::Directions(ws) => (per_direction(ws)?, s.dim() == 1),
        DualArc::Interval { lo, hi } if hi - lo <= ANGLE_TOL => (per_direction(&[Direction::from_angle(*lo)])?, true),
        DualArc::Interval { lo, hi } => (arc_halfspaces(s, *lo, hi - lo, false, p.value(), sel), true),
        DualArc::Full => (arc_halfspaces(s, 0.0, 0.0, true, p.value(), sel), true),
    })
}

fn build(s: &Sample, cone: &OrderingCone, p: ProbabilityLevel, side: Side) -> Result<QuantileRegion> {
    s.check_dim(cone.dim())?;
    let arc = cone.dual_arc()?;
    let (hs, exact) = side_halfspaces(s, &arc, p, side)?;
    let geometry = if s.dim() == 2 {
        RegionGeometry::Planar(intersect_halfspaces_2d(&hs)?)
    } else {
        RegionGeometry::Halfspaces(hs)
    };
    Ok(QuantileRegion { geometry, side, level: p, cone: cone.clone(), exact })
}

fn require_planar(s: &Sample) -> Result<()> {
    if s.dim() != 2 {
        return Err(Error::dim(2, s.dim()));
    }
    Ok(())
}

/// Exact planar lower quantile `Q-_{X,C}(p)`.
pub fn lower_quantile_region_2d(s: &Sample, cone: &OrderingCone, p: ProbabilityLevel) -> Result<QuantileRegion> {
    require_planar(s)?;
    build(s, cone, p, Side::Lower)
}

/// Exact planar upper quantile `Q+_{X,C}(p)`, from upper scalar quantiles.
pub fn upper_quantile_region_2d(s: &Sample, cone: &OrderingCone, p: ProbabilityLevel) -> Result<QuantileRegion> {
    require_planar(s)?;
    build(s, cone, p, Side::Upper)
}

/// Lower quantile in any dimension: exact for `d <= 2`, an outer
/// approximation over the cone's direction sample otherwise.
pub fn lower_quantile_region(s: &Sample, cone: &OrderingCone, p: ProbabilityLevel) -> Result<QuantileRegion> {
    build(s, cone, p, Side::Lower)
}

/// Upper quantile in any dimension; see [`lower_quantile_region`].
pub fn upper_quantile_region(s: &Sample, cone: &OrderingCone, p: ProbabilityLevel) -> Result<QuantileRegion> {
    build(s, cone, p, Side::Upper)
}

/// Upper quantile through the reflection `Q+_{X,C}(p) = Q-_{X,-C}(1 - p)`.
/// Both paths count `w . X < w . z` with the same tolerance, so membership
/// agrees with [`upper_quantile_region`] away from the region boundary,
/// atoms included; the halfspace lists themselves may differ.
pub fn upper_quantile_region_via_reflection(
    s: &Sample,
    cone: &OrderingCone,
    p: ProbabilityLevel,
) -> Result<QuantileRegion> {
    let mut r = build(s, &cone.negated(), p.complement(), Side::Lower)?;
    r.side = Side::Upper;
    r.level = p;
    r.cone = cone.clone();
    Ok(r)
}

/// Membership without building the region: `F_{X,C}(z) >= p` for the lower
/// side, `sup_w P(w . X < w . z) <= p` for the upper side.
pub fn quantile_membership(
    s: &Sample,
    cone: &OrderingCone,
    p: ProbabilityLevel,
    z: &[f64],
    side: Side,
) -> Result<bool> {
    match side {
        Side::Lower => Ok(p.value() <= 0.0 || cone_cdf(s, cone, z)? >= p.value() - LEVEL_TOL),
        Side::Upper => Ok(p.value() >= 1.0 || sup_strict_mass(s, cone, z)? <= p.value() + LEVEL_TOL),
    }
}

/// Witness that `z` lies outside `Q-_{X,C}(p)`: a direction `w` in `C+` and
/// a point `y` with `w . z < w . y` and `P(w . X < w . y) < p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExclusionCertificate {
    pub w: Direction,
    pub y: Vec<f64>,
    pub strict_mass: f64,
}

impl ExclusionCertificate {
    /// Re-checks both defining inequalities against the sample.
    pub fn verify(&self, s: &Sample, z: &[f64], p: ProbabilityLevel) -> Result<bool> {
        let mass = projected_strict_cdf(s, &self.w, self.w.dot(&self.y))?;
        Ok(mass < p.value() && self.w.dot(z) < self.w.dot(&self.y))
    }
}

/// Builds an exclusion certificate for a point outside the lower region.
///
/// `w` minimises the cone distribution function at `z`, and
/// `y = z + eps * w` with `eps` halved from 1 until the mass strictly below
/// `w . y`, counted generously (`< w . y + 1e-9`), drops under `p`.
pub fn exclusion_certificate(
    s: &Sample,
    cone: &OrderingCone,
    p: ProbabilityLevel,
    z: &[f64],
) -> Result<ExclusionCertificate> {
    let f = cone_cdf_detailed(s, cone, z)?;
    if p.value() <= 0.0 || f.value >= p.value() - LEVEL_TOL {
        return Err(Error::NotExcluded);
    }
    let w = f.argmin;
    let wz = w.dot(z);
    let mut eps = 1.0;
    for _ in 0..80 {
        let y: Vec<f64> = z.iter().zip(w.as_slice()).map(|(a, b)| a + eps * b).collect();
        let wy = w.dot(&y);
        if wy > wz && strict_mass(s, &w, wy + 2.0 * TOL) < p.value() {
            let strict_mass = projected_strict_cdf(s, &w, wy)?;
            return Ok(ExclusionCertificate { w, y, strict_mass });
        }
        eps *= 0.5;
    }
    Err(Error::Unsupported("exclusion certificate did not converge".into()))
}

/// `(q_{X_1}(p), ..., q_{X_d}(p))`, the corner of the componentwise quantile
/// region `corner + R^d_+`.
pub fn componentwise_quantile_corner(s: &Sample, p: ProbabilityLevel) -> Result<Vec<f64>> {
    (0..s.dim()).map(|k| scalar_lower_quantile(s, &Direction::unit(s.dim(), k), p)).collect()
}

/// `F^jdf_X(z) >= p`. Joint-cdf quantile sets need not be convex.
pub fn joint_quantile_membership(s: &Sample, p: ProbabilityLevel, z: &[f64]) -> Result<bool> {
    Ok(joint_cdf(s, z)? >= p.value() - LEVEL_TOL)
}

/// `{z : w . z >= q-_{w.X}(p)}` for each listed direction: a superset of
/// the lower region whenever the directions lie in `C+`, shrinking as the
/// list grows.
pub fn outer_approx_region(s: &Sample, directions: &[Direction], p: ProbabilityLevel) -> Result<Vec<Halfspace>> {
    if directions.is_empty() {
        return Err(Error::InvalidInput("direction list is empty".into()));
    }
    if p.value() <= 0.0 {
        for w in directions {
            s.check_dim(w.dim())?;
        }
        return Ok(Vec::new());
    }
    directions.iter().map(|w| lower_w_halfspace(s, w, p)).collect()
}

/// Support value `inf { w . z : z in region }` of a planar region.
pub fn support_value(region: &QuantileRegion, w: &Direction) -> Result<f64> {
    let r = region.planar().ok_or_else(|| Error::Unsupported("support value needs a planar region".into()))?;
    Ok(r.inf_linear(w.xy()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four() -> Sample {
        Sample::new(vec![vec![-1.0, 2.0], vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, -1.0]]).unwrap()
    }

    fn lvl(num: u64, den: u64) -> ProbabilityLevel {
        ProbabilityLevel::ratio(num, den).unwrap()
    }

    #[test]
    fn four_point_lower_region_membership() {
        let s = four();
        let c = OrderingCone::orthant(2).unwrap();
        for p in [lvl(3, 8), lvl(1, 2)] {
            let r = lower_quantile_region_2d(&s, &c, p).unwrap();
            assert!(r.contains(&[1.0, 1.0]));
            assert!(!r.contains(&[0.0, 0.0]));
            r.planar().unwrap().check_invariants().unwrap();
        }
    }

    #[test]
    fn halfspace_cone_gives_single_halfspace() {
        let s = four();
        let w = Direction::new(vec![1.0, 2.0]).unwrap();
        let c = OrderingCone::halfspace(w.clone()).unwrap();
        let r = lower_quantile_region_2d(&s, &c, lvl(1, 2)).unwrap();
        let q = scalar_lower_quantile(&s, &w, lvl(1, 2)).unwrap();
        assert_eq!(r.halfspaces().len(), 1);
        assert!((r.halfspaces()[0].offset - q).abs() < 1e-12);
        let u = upper_quantile_region_2d(&s, &c, lvl(1, 2)).unwrap();
        assert_eq!(u.halfspaces().len(), 1);
    }

    #[test]
    fn support_gap_example() {
        let s = four();
        let c = OrderingCone::orthant(2).unwrap();
        let r = lower_quantile_region_2d(&s, &c, lvl(3, 8)).unwrap();
        let w11 = Direction::new(vec![1.0, 1.0]).unwrap();
        let w21 = Direction::new(vec![2.0, 1.0]).unwrap();
        assert!((support_value(&r, &w11).unwrap() - 1.0 / 2f64.sqrt()).abs() < 1e-9);
        assert!((support_value(&r, &w21).unwrap() - 1.0 / 5f64.sqrt()).abs() < 1e-9);
        assert!(scalar_lower_quantile(&s, &w21, lvl(3, 8)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn level_zero_and_one() {
        let s = four();
        let c = OrderingCone::orthant(2).unwrap();
        let r = lower_quantile_region_2d(&s, &c, lvl(0, 1)).unwrap();
        assert!(r.contains(&[-100.0, -100.0]));
        let u = upper_quantile_region_2d(&s, &c, lvl(1, 1)).unwrap();
        assert!(u.contains(&[100.0, 100.0]));
        let u = upper_quantile_region_2d(&s, &c, lvl(3, 4)).unwrap();
        for x in s.points() {
            assert!(u.contains(x));
        }
    }

    #[test]
    fn borderline_levels() {
        let s = four();
        let c = OrderingCone::orthant(2).unwrap();
        for k in 1..8 {
            let p = lvl(k, 8);
            let lo = lower_quantile_region_2d(&s, &c, p).unwrap();
            let up = upper_quantile_region_2d(&s, &c, p).unwrap();
            let meet = lo.planar().unwrap().intersection(up.planar().unwrap()).unwrap();
            assert_eq!(!meet.is_empty(), k % 2 == 0, "p = {k}/8");
        }
    }

    #[test]
    fn membership_examples() {
        let s = four();
        let c = OrderingCone::orthant(2).unwrap();
        assert!(quantile_membership(&s, &c, lvl(1, 2), &[1.0, 1.0], Side::Lower).unwrap());
        assert!(!quantile_membership(&s, &c, lvl(1, 2), &[0.0, 0.0], Side::Lower).unwrap());
        assert!(quantile_membership(&s, &c, lvl(0, 1), &[-9.0, -9.0], Side::Lower).unwrap());
        assert!(joint_quantile_membership(&s, lvl(1, 4), &[0.0, 0.0]).unwrap());
        assert_eq!(componentwise_quantile_corner(&s, lvl(1, 2)).unwrap(), vec![0.0, 0.0]);
        assert_eq!(componentwise_quantile_corner(&s, lvl(1, 1)).unwrap(), vec![2.0, 2.0]);
    }

    #[test]
    fn certificate_examples() {
        let s = four();
        let c = OrderingCone::orthant(2).unwrap();
        let cert = exclusion_certificate(&s, &c, lvl(1, 2), &[0.0, 0.0]).unwrap();
        assert!(cert.strict_mass <= 0.25);
        assert!(cert.verify(&s, &[0.0, 0.0], lvl(1, 2)).unwrap());
        let cert = exclusion_certificate(&s, &c, lvl(1, 2), &[-5.0, -5.0]).unwrap();
        assert_eq!(cert.strict_mass, 0.0);
        assert!(matches!(exclusion_certificate(&s, &c, lvl(1, 2), &[1.0, 1.0]), Err(Error::NotExcluded)));
    }

    #[test]
    fn univariate_regions_are_rays() {
        let s = Sample::new(vec![vec![3.0], vec![1.0], vec![2.0], vec![4.0]]).unwrap();
        let c = OrderingCone::orthant(1).unwrap();
        let lo = lower_quantile_region(&s, &c, lvl(1, 2)).unwrap();
        assert!(lo.exact);
        assert!(lo.contains(&[2.0]) && !lo.contains(&[1.9]));
        let up = upper_quantile_region(&s, &c, lvl(1, 2)).unwrap();
        assert!(up.contains(&[3.0]) && !up.contains(&[3.1]));
    }
}
