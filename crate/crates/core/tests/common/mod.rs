//! Brute-force oracles and random instance generators shared by the
//! integration tests. Nothing here calls into the sweep or region builders.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use conequant::{Direction, OrderingCone, Sample};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const TOL: f64 = 1e-9;

fn wrap(a: f64) -> f64 {
    a.rem_euclid(TAU)
}

/// Admissible direction angles of a planar cone, as `(lo, len)`; `None`
/// when every direction is admissible.
#[derive(Debug, Clone, Copy)]
pub struct Arc {
    pub lo: f64,
    pub len: f64,
}

impl Arc {
    pub fn contains(&self, theta: f64) -> bool {
        let d = wrap(theta - self.lo);
        d <= self.len + 1e-12 || d >= TAU - 1e-12
    }
}

/// Planar test cone with its dual arc worked out by hand.
#[derive(Debug, Clone)]
pub struct TestCone {
    pub cone: OrderingCone,
    pub arc: Option<Arc>,
    /// A vector in the interior of `C` (or of `C` itself for halfspaces),
    /// `None` for the zero cone.
    pub interior: Option<[f64; 2]>,
    pub label: String,
}

/// Mass of the closed halfplane `{x : w . x <= w . z + TOL}`, summed in
/// index order.
pub fn halfplane_mass(s: &Sample, theta: f64, z: &[f64]) -> f64 {
    let (c, si) = (theta.cos(), theta.sin());
    let t = c * z[0] + si * z[1];
    (0..s.len())
        .filter(|&i| {
            let x = s.point(i);
            c * x[0] + si * x[1] <= t + TOL
        })
        .map(|i| s.weight(i))
        .sum()
}

/// Critical angles of `(s, z)`: normals perpendicular to every `x_i - z`
/// and to every `x_i - x_j`.
pub fn critical_angles(s: &Sample, z: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut push = |dx: f64, dy: f64| {
        if dx.hypot(dy) > 1e-15 {
            let phi = dy.atan2(dx);
            out.push(wrap(phi + FRAC_PI_2));
            out.push(wrap(phi - FRAC_PI_2));
        }
    };
    for i in 0..s.len() {
        let a = s.point(i);
        push(a[0] - z[0], a[1] - z[1]);
        for j in i + 1..s.len() {
            let b = s.point(j);
            push(b[0] - a[0], b[1] - a[1]);
        }
    }
    out
}

/// `min` of the closed halfplane mass over every critical angle inside the
/// arc, the arc endpoints and the midpoints between consecutive candidates.
pub fn brute_cone_cdf(s: &Sample, arc: Option<Arc>, z: &[f64]) -> f64 {
    let mut cand: Vec<f64> = critical_angles(s, z);
    match arc {
        None => {
            cand.push(0.0);
            cand.sort_by(f64::total_cmp);
            let mut all = cand.clone();
            for k in 0..cand.len() {
                let a = cand[k];
                let b = if k + 1 < cand.len() { cand[k + 1] } else { cand[0] + TAU };
                all.push(0.5 * (a + b));
            }
            all.iter().map(|&t| halfplane_mass(s, t, z)).fold(f64::INFINITY, f64::min)
        }
        Some(arc) => {
            let mut rel: Vec<f64> = cand
                .iter()
                .map(|&a| wrap(a - arc.lo))
                .filter(|&d| d <= arc.len)
                .collect();
            rel.push(0.0);
            rel.push(arc.len);
            rel.sort_by(f64::total_cmp);
            let mut all = rel.clone();
            for w in rel.windows(2) {
                all.push(0.5 * (w[0] + w[1]));
            }
            all.iter().map(|&d| halfplane_mass(s, arc.lo + d, z)).fold(f64::INFINITY, f64::min)
        }
    }
}

/// `P(X <= z)` componentwise.
pub fn brute_joint_cdf(s: &Sample, z: &[f64]) -> f64 {
    (0..s.len())
        .filter(|&i| s.point(i).iter().zip(z).all(|(a, b)| *a <= b + TOL))
        .map(|i| s.weight(i))
        .sum()
}

/// Scalar lower quantile by definition: the smallest projected value whose
/// closed mass reaches `p`.
pub fn brute_lower_quantile(values: &[f64], weights: &[f64], p: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    for &t in &sorted {
        let mass: f64 = values.iter().zip(weights).filter(|(v, _)| **v <= t + TOL).map(|(_, w)| w).sum();
        if mass >= p - 1e-12 {
            return t;
        }
    }
    f64::INFINITY
}

pub fn normal_points(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()).collect()
}

pub fn normal_sample(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Sample {
    Sample::new(normal_points(rng, n, dim)).unwrap()
}

/// Random positive weights summing to one.
pub fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|r| r / total).collect();
    let head: f64 = w[..n - 1].iter().sum();
    w[n - 1] = 1.0 - head;
    w
}

/// Normal sample, weighted at random about a third of the time.
pub fn random_sample(rng: &mut ChaCha8Rng, n: usize) -> Sample {
    let pts = normal_points(rng, n, 2);
    if rng.gen_bool(0.33) {
        let w = random_weights(rng, n);
        Sample::with_weights(pts, w).unwrap()
    } else {
        Sample::new(pts).unwrap()
    }
}

pub fn orthant() -> TestCone {
    TestCone {
        cone: OrderingCone::orthant(2).unwrap(),
        arc: Some(Arc { lo: 0.0, len: FRAC_PI_2 }),
        interior: Some([1.0, 1.0]),
        label: "orthant".into(),
    }
}

pub fn zero_cone() -> TestCone {
    TestCone { cone: OrderingCone::zero(2).unwrap(), arc: None, interior: None, label: "zero".into() }
}

pub fn halfspace_cone(theta: f64) -> TestCone {
    TestCone {
        cone: OrderingCone::halfspace(Direction::from_angle(theta)).unwrap(),
        arc: Some(Arc { lo: wrap(theta), len: 0.0 }),
        interior: Some([theta.cos(), theta.sin()]),
        label: format!("halfspace({theta:.3})"),
    }
}

/// Cone spanned by generators at angles `a` and `a + span`, `0 < span < pi`.
/// Its dual is the arc from `a + span - pi/2` to `a + pi/2`.
pub fn generator_cone(a: f64, span: f64) -> TestCone {
    let g1 = [a.cos(), a.sin()];
    let g2 = [(a + span).cos(), (a + span).sin()];
    let mid = a + 0.5 * span;
    TestCone {
        cone: OrderingCone::generators_2d(vec![g1, g2]).unwrap(),
        arc: Some(Arc { lo: wrap(a + span - FRAC_PI_2), len: PI - span }),
        interior: Some([mid.cos(), mid.sin()]),
        label: format!("generators({a:.3}, {span:.3})"),
    }
}

pub fn random_cone(rng: &mut ChaCha8Rng) -> TestCone {
    match rng.gen_range(0..5) {
        0 => orthant(),
        1 => zero_cone(),
        2 => halfspace_cone(rng.gen_range(0.0..TAU)),
        _ => generator_cone(rng.gen_range(0.0..TAU), rng.gen_range(0.2..PI - 0.2)),
    }
}

/// Random cone other than `{0}`.
pub fn random_proper_cone(rng: &mut ChaCha8Rng) -> TestCone {
    loop {
        let c = random_cone(rng);
        if c.interior.is_some() {
            return c;
        }
    }
}

/// Random point of `C` (scaled by `scale`) for a planar test cone.
pub fn random_cone_vector(rng: &mut ChaCha8Rng, c: &TestCone, scale: f64) -> [f64; 2] {
    match &c.arc {
        None => [0.0, 0.0],
        Some(arc) if arc.len == 0.0 => {
            // Halfspace cone: w . v >= 0.
            let w = [arc.lo.cos(), arc.lo.sin()];
            let a = rng.gen_range(0.0..scale);
            let b = rng.gen_range(-scale..scale);
            [a * w[0] - b * w[1], a * w[1] + b * w[0]]
        }
        Some(arc) => {
            // Generators sit at lo + len + pi/2 ... expressed through the arc ends.
            let g1 = arc.lo + arc.len - FRAC_PI_2;
            let g2 = arc.lo + FRAC_PI_2;
            let (a, b) = (rng.gen_range(0.0..scale), rng.gen_range(0.0..scale));
            [a * g1.cos() + b * g2.cos(), a * g1.sin() + b * g2.sin()]
        }
    }
}

/// Bounding box of a planar sample widened by `pad` times its extent.
pub fn padded_box(s: &Sample, pad: f64) -> [f64; 4] {
    let (lo, hi) = s.bounding_box();
    let wx = (hi[0] - lo[0]).max(1.0);
    let wy = (hi[1] - lo[1]).max(1.0);
    [lo[0] - pad * wx, lo[1] - pad * wy, hi[0] + pad * wx, hi[1] + pad * wy]
}

/// `nx * ny` grid over a box, row by row.
pub fn grid(b: [f64; 4], nx: usize, ny: usize) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let x = b[0] + (b[2] - b[0]) * i as f64 / (nx - 1) as f64;
            let y = b[1] + (b[3] - b[1]) * j as f64 / (ny - 1) as f64;
            out.push([x, y]);
        }
    }
    out
}

pub mod strategies {
    use super::*;
    use proptest::prelude::*;

    pub fn point(scale: f64) -> impl Strategy<Value = [f64; 2]> {
        (-scale..scale, -scale..scale).prop_map(|(x, y)| [x, y])
    }

    /// Uniform sample of continuous points in `[-5, 5]^2`.
    pub fn sample(max_n: usize) -> impl Strategy<Value = Sample> {
        prop::collection::vec(point(5.0), 1..=max_n)
            .prop_map(|pts| Sample::new(pts.into_iter().map(|p| p.to_vec()).collect()).unwrap())
    }

    /// Sample with random positive weights.
    pub fn weighted_sample(max_n: usize) -> impl Strategy<Value = Sample> {
        prop::collection::vec((point(5.0), 0.1..1.0f64), 1..=max_n).prop_map(|rows| {
            let total: f64 = rows.iter().map(|r| r.1).sum();
            let pts = rows.iter().map(|r| r.0.to_vec()).collect();
            let mut w: Vec<f64> = rows.iter().map(|r| r.1 / total).collect();
            let n = w.len();
            let head: f64 = w[..n - 1].iter().sum();
            w[n - 1] = 1.0 - head;
            Sample::with_weights(pts, w).unwrap()
        })
    }

    /// Points on the integer grid `{-3..3}^2`: repeated points and exact
    /// collinearities are common.
    pub fn atomic_sample(max_n: usize) -> impl Strategy<Value = Sample> {
        prop::collection::vec((-3i32..=3, -3i32..=3), 1..=max_n).prop_map(|pts| {
            Sample::new(pts.into_iter().map(|(a, b)| vec![a as f64, b as f64]).collect()).unwrap()
        })
    }

    pub fn any_sample(max_n: usize) -> impl Strategy<Value = Sample> {
        prop_oneof![sample(max_n), weighted_sample(max_n), atomic_sample(max_n)]
    }

    pub fn cone() -> impl Strategy<Value = TestCone> {
        prop_oneof![
            Just(orthant()),
            Just(zero_cone()),
            (0.0..TAU).prop_map(halfspace_cone),
            (0.0..TAU, 0.2..PI - 0.2).prop_map(|(a, s)| generator_cone(a, s)),
        ]
    }

    pub fn proper_cone() -> impl Strategy<Value = TestCone> {
        prop_oneof![
            Just(orthant()),
            (0.0..TAU).prop_map(halfspace_cone),
            (0.0..TAU, 0.2..PI - 0.2).prop_map(|(a, s)| generator_cone(a, s)),
        ]
    }

    /// Nonnegative combination of the cone's extreme directions, as
    /// `(a, b)` coefficients in `[0, scale)`.
    pub fn cone_coeffs(scale: f64) -> impl Strategy<Value = (f64, f64)> {
        (0.0..scale, 0.0..scale)
    }

    /// Point of `C` from coefficients drawn by [`cone_coeffs`]; for a
    /// halfspace cone `b - a` is the signed boundary component.
    pub fn cone_vector(c: &TestCone, (a, b): (f64, f64)) -> [f64; 2] {
        match &c.arc {
            None => [0.0, 0.0],
            Some(arc) if arc.len == 0.0 => {
                let w = [arc.lo.cos(), arc.lo.sin()];
                let b = b - a;
                [a * w[0] - b * w[1], a * w[1] + b * w[0]]
            }
            Some(arc) => {
                let g1 = arc.lo + arc.len - FRAC_PI_2;
                let g2 = arc.lo + FRAC_PI_2;
                [a * g1.cos() + b * g2.cos(), a * g1.sin() + b * g2.sin()]
            }
        }
    }

    /// Well-conditioned invertible 2x2 matrix: rotation times a positive
    /// diagonal, optionally reflected.
    pub fn matrix() -> impl Strategy<Value = [[f64; 2]; 2]> {
        (0.0..TAU, 0.3..3.0f64, 0.3..3.0f64, any::<bool>()).prop_map(|(t, s1, s2, flip)| {
            let (c, s) = (t.cos(), t.sin());
            let f = if flip { -1.0 } else { 1.0 };
            [[c * s1, -s * s2 * f], [s * s1, c * s2 * f]]
        })
    }

    /// Level in `(0, 1]`: either a multiple of `1/n` for some small `n` or
    /// a generic value.
    pub fn level() -> impl Strategy<Value = f64> {
        prop_oneof![(1u64..=8, 8u64..=8).prop_map(|(k, n)| k as f64 / n as f64), 0.01..1.0f64]
    }
}
