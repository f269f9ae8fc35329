//! Set-valued Value at Risk and its scalar and lower-orthant companions.

use crate::empirical::{joint_cdf, scalar_lower_quantile, ProbabilityLevel, Sample};
use crate::error::{Error, Result};
use crate::geometry::{Direction, Halfspace, OrderingCone, LEVEL_TOL};
use crate::quantile::{
    lower_quantile_region, quantile_membership, upper_quantile_region, QuantileRegion, RegionGeometry, Side,
};

/// `VaR_alpha(X) = Q-_{-X,C}(1 - alpha)`: every deterministic position `z`
/// such that `X + z` goes bankrupt with probability at most `alpha` in
/// every direction of `C+`.
#[derive(Debug, Clone, PartialEq)]
pub struct VaRResult {
    /// Lower quantile region of the negated sample at level `1 - alpha`.
    pub region: QuantileRegion,
    pub alpha: ProbabilityLevel,
}

impl VaRResult {
    pub fn contains(&self, z: &[f64]) -> bool {
        self.region.contains(z)
    }
}

fn check_alpha(alpha: ProbabilityLevel) -> Result<()> {
    if alpha.value() <= 0.0 {
        return Err(Error::LevelDomain("VaR needs alpha > 0".into()));
    }
    Ok(())
}

pub fn var_region(s: &Sample, cone: &OrderingCone, alpha: ProbabilityLevel) -> Result<VaRResult> {
    check_alpha(alpha)?;
    let region = lower_quantile_region(&s.negated(), cone, alpha.complement())?;
    Ok(VaRResult { region, alpha })
}

/// The same set through upper quantiles: `-Q+_{X,C}(alpha)`. Matches
/// [`var_region`] up to boundary effects of atoms.
pub fn var_region_via_upper(s: &Sample, cone: &OrderingCone, alpha: ProbabilityLevel) -> Result<VaRResult> {
    check_alpha(alpha)?;
    let up = upper_quantile_region(s, cone, alpha)?;
    let geometry = match &up.geometry {
        RegionGeometry::Planar(r) => RegionGeometry::Planar(r.negated()?),
        RegionGeometry::Halfspaces(hs) => RegionGeometry::Halfspaces(
            hs.iter().map(|h| Halfspace::new(h.normal.negated(), h.offset)).collect(),
        ),
    };
    let region = QuantileRegion { geometry, side: Side::Lower, level: alpha.complement(), cone: cone.clone(), exact: up.exact };
    Ok(VaRResult { region, alpha })
}

/// `z` belongs to `VaR_alpha(X)`, evaluated through the cone distribution
/// function of `-X`.
pub fn var_membership(s: &Sample, cone: &OrderingCone, alpha: ProbabilityLevel, z: &[f64]) -> Result<bool> {
    check_alpha(alpha)?;
    quantile_membership(&s.negated(), cone, alpha.complement(), z, Side::Lower)
}

/// Scalar VaR of `w . X`: `q-_{-w.X}(1 - alpha)`; `-inf` at `alpha = 1`.
pub fn scalar_var(s: &Sample, w: &Direction, alpha: ProbabilityLevel) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha.value() >= 1.0 {
        s.check_dim(w.dim())?;
        return Ok(f64::NEG_INFINITY);
    }
    scalar_lower_quantile(&s.negated(), w, alpha.complement())
}

/// Corner of the componentwise VaR box `corner + R^d_+`, which contains the
/// set-valued VaR for the orthant.
pub fn componentwise_var_box(s: &Sample, alpha: ProbabilityLevel) -> Result<Vec<f64>> {
    (0..s.dim()).map(|k| scalar_var(s, &Direction::unit(s.dim(), k), alpha)).collect()
}

/// Lower-orthant VaR membership: `P(-X <= z) >= 1 - alpha`.
pub fn lo_var_membership(s: &Sample, alpha: ProbabilityLevel, z: &[f64]) -> Result<bool> {
    check_alpha(alpha)?;
    Ok(joint_cdf(&s.negated(), z)? >= 1.0 - alpha.value() - LEVEL_TOL)
}
