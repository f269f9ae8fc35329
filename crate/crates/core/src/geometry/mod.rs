//! Ordering cones, their duals, halfspaces and planar convex regions.

mod cone;
mod direction;
mod region;

pub use cone::{sphere_lattice, ConeKind, DualArc, OrderingCone, DEFAULT_DIRECTION_COUNT};
pub use direction::{all_contain, normalize_angle, Direction, Halfspace};
pub use region::{intersect_halfspaces_2d, ConvexRegion2D, Point2, RegionShape, RegionStatus};

/// Incidence and comparison tolerance for coordinates.
pub const TOL: f64 = 1e-9;

/// Tolerance for arc endpoints, in radians.
pub const ANGLE_TOL: f64 = 1e-12;

/// Tolerance when comparing probabilities against levels.
pub const LEVEL_TOL: f64 = 1e-12;

/// The dual arc of `cone`.
pub fn dual_arc(cone: &OrderingCone) -> crate::Result<DualArc> {
    cone.dual_arc()
}

/// `-C`.
pub fn negate_cone(cone: &OrderingCone) -> OrderingCone {
    cone.negated()
}

pub fn region_contains(region: &ConvexRegion2D, z: Point2) -> bool {
    region.contains(z)
}

pub fn region_includes(outer: &ConvexRegion2D, inner: &ConvexRegion2D) -> bool {
    outer.includes(inner)
}
