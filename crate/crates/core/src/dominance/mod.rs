//! First-order stochastic dominance with respect to an ordering cone.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::empirical::{cone_cdf, ProbabilityLevel, Sample};
use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, Halfspace, OrderingCone, LEVEL_TOL};
use crate::quantile::{lower_quantile_region, RegionGeometry};
use crate::risk::var_region;

/// A point where `F_{Y,C}` exceeds `F_{X,C}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub z: Vec<f64>,
    pub f_y: f64,
    pub f_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FsdVerdict {
    /// `F_{Y,C}(z) <= F_{X,C}(z)` for every `z`.
    pub dominates: bool,
    pub counterexample: Option<Counterexample>,
    /// `false` for the grid-based check used in dimension three and up.
    pub exact: bool,
}

/// Levels `p > 0` that the cone distribution function of `s` can attain.
///
/// Every value is the weight of some closed halfplane, hence a prefix sum
/// of the sample sorted along some direction. Uniform weights give the
/// multiples of `1/n`; otherwise the prefix sums are collected over every
/// ordering of the projections.
pub fn attainable_levels(s: &Sample) -> Vec<f64> {
    let n = s.len();
    let mut levels: Vec<f64> = if s.is_uniform() {
        (1..=n).map(|k| k as f64 / n as f64).collect()
    } else {
        let mut angles = vec![0.0];
        if s.dim() == 2 {
            for i in 0..n {
                for j in i + 1..n {
                    let (a, b) = (s.point(i), s.point(j));
                    let phi = (b[1] - a[1]).atan2(b[0] - a[0]);
                    angles.push(normalize_angle(phi + FRAC_PI_2));
                    angles.push(normalize_angle(phi - FRAC_PI_2));
                }
            }
        }
        angles.sort_by(f64::total_cmp);
        angles.dedup();
        let mut out = Vec::new();
        for (k, &a) in angles.iter().enumerate() {
            let b = angles.get(k + 1).copied().unwrap_or(std::f64::consts::TAU);
            let t = 0.5 * (a + b);
            let proj: Vec<f64> = if s.dim() == 2 {
                s.points().map(|x| t.cos() * x[0] + t.sin() * x[1]).collect()
            } else {
                s.points().map(|x| x[0]).collect()
            };
            for sign in [1.0, -1.0] {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&i, &j| (sign * proj[i]).total_cmp(&(sign * proj[j])));
                let mut cum = 0.0;
                for i in idx {
                    cum += s.weight(i);
                    out.push(cum);
                }
            }
        }
        out
    };
    levels.retain(|&p| p > LEVEL_TOL);
    levels.sort_by(f64::total_cmp);
    levels.dedup_by(|a, b| (*a - *b).abs() <= LEVEL_TOL);
    levels
}

fn verified(sy: &Sample, sx: &Sample, cone: &OrderingCone, z: Vec<f64>) -> Result<Option<Counterexample>> {
    let f_y = cone_cdf(sy, cone, &z)?;
    let f_x = cone_cdf(sx, cone, &z)?;
    Ok((f_y > f_x + LEVEL_TOL).then_some(Counterexample { z, f_y, f_x }))
}

/// Does `Y` dominate `X` (`F_{Y,C} <= F_{X,C}` everywhere)?
///
/// In the plane the check is exact: for every attainable level of `F_{Y,C}`
/// the lower region of `Y` must lie inside that of `X`. A failing level
/// yields its lexicographically smallest violating vertex, confirmed by
/// re-evaluating both cone distribution functions. On the line the two
/// step functions are compared at every breakpoint. In dimension three and
/// up the comparison runs on a finite point set and is labelled inexact.
pub fn fsd_dominates(sy: &Sample, sx: &Sample, cone: &OrderingCone) -> Result<FsdVerdict> {
    if sy.dim() != sx.dim() {
        return Err(Error::dim(sx.dim(), sy.dim()));
    }
    sy.check_dim(cone.dim())?;
    match sy.dim() {
        2 => fsd_planar(sy, sx, cone),
        _ => fsd_pointwise(sy, sx, cone),
    }
}

fn fsd_planar(sy: &Sample, sx: &Sample, cone: &OrderingCone) -> Result<FsdVerdict> {
    let mut levels = attainable_levels(sy);
    levels.extend(attainable_levels(sx));
    levels.sort_by(f64::total_cmp);
    levels.dedup_by(|a, b| (*a - *b).abs() <= LEVEL_TOL);
    let exact = cone.dual_arc().map(|a| a.width().is_some())?;
    for p in levels {
        let p = ProbabilityLevel::new(p.min(1.0))?;
        let qy = lower_quantile_region(sy, cone, p)?;
        let qx = lower_quantile_region(sx, cone, p)?;
        let (Some(ry), Some(rx)) = (qy.planar(), qx.planar()) else {
            unreachable!("planar samples give planar regions");
        };
        for v in rx.violations(ry) {
            if let Some(c) = verified(sy, sx, cone, v.to_vec())? {
                return Ok(FsdVerdict { dominates: false, counterexample: Some(c), exact });
            }
        }
    }
    Ok(FsdVerdict { dominates: true, counterexample: None, exact })
}

/// Candidate points: both samples, midpoints between consecutive sorted
/// coordinates on the line, and a small grid over the joint bounding box in
/// higher dimension.
fn fsd_pointwise(sy: &Sample, sx: &Sample, cone: &OrderingCone) -> Result<FsdVerdict> {
    let d = sy.dim();
    let mut candidates: Vec<Vec<f64>> = sy.points().chain(sx.points()).map(<[f64]>::to_vec).collect();
    if d == 1 {
        let mut xs: Vec<f64> = candidates.iter().map(|p| p[0]).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        candidates.push(vec![xs[0] - 1.0]);
        candidates.push(vec![xs[xs.len() - 1] + 1.0]);
        candidates.extend(xs.windows(2).map(|w| vec![0.5 * (w[0] + w[1])]));
    } else {
        let (mut lo, mut hi) = sy.bounding_box();
        let (lo2, hi2) = sx.bounding_box();
        for k in 0..d {
            lo[k] = lo[k].min(lo2[k]);
            hi[k] = hi[k].max(hi2[k]);
        }
        let steps = 5usize;
        let total = steps.pow(d as u32);
        for mut idx in 0..total {
            let mut z = vec![0.0; d];
            for k in 0..d {
                let t = (idx % steps) as f64 / (steps - 1) as f64;
                idx /= steps;
                z[k] = lo[k] + t * (hi[k] - lo[k]);
            }
            candidates.push(z);
        }
    }
    let mut found: Vec<Counterexample> = Vec::new();
    for z in candidates {
        found.extend(verified(sy, sx, cone, z)?);
    }
    found.sort_by(|a, b| a.z.iter().zip(&b.z).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    let exact = d == 1;
    Ok(match found.into_iter().next() {
        Some(c) => FsdVerdict { dominates: false, counterexample: Some(c), exact },
        None => FsdVerdict { dominates: true, counterexample: None, exact },
    })
}

fn interval_1d(hs: &[Halfspace]) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for h in hs {
        let w = h.normal.as_slice()[0];
        if w > 0.0 {
            lo = lo.max(h.offset / w);
        } else {
            hi = hi.min(h.offset / w);
        }
    }
    (lo, hi)
}

/// `VaR_alpha(X) ⊆ VaR_alpha(Y)` for every listed `alpha`, which holds at
/// all levels when `Y` dominates `X`. Exact in dimensions one and two.
pub fn var_consistency_check(
    sy: &Sample,
    sx: &Sample,
    cone: &OrderingCone,
    alphas: &[ProbabilityLevel],
) -> Result<bool> {
    if sy.dim() != sx.dim() {
        return Err(Error::dim(sx.dim(), sy.dim()));
    }
    if sy.dim() > 2 {
        return Err(Error::Unsupported("VaR inclusion is only decided in dimensions one and two".into()));
    }
    for &a in alphas {
        let vx = var_region(sx, cone, a)?;
        let vy = var_region(sy, cone, a)?;
        let inside = match (&vx.region.geometry, &vy.region.geometry) {
            (RegionGeometry::Planar(rx), RegionGeometry::Planar(ry)) => ry.includes(rx),
            (RegionGeometry::Halfspaces(hx), RegionGeometry::Halfspaces(hy)) => {
                let (xl, xh) = interval_1d(hx);
                let (yl, yh) = interval_1d(hy);
                xl > xh || (yl <= xl + 1e-9 && xh <= yh + 1e-9)
            }
            _ => unreachable!("both regions share the dimension"),
        };
        if !inside {
            return Ok(false);
        }
    }
    Ok(true)
}
