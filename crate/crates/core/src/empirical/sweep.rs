use std::f64::consts::TAU;

use super::Sample;
use crate::geometry::{normalize_angle, TOL};

/// Result of an angular sweep: the smallest closed mass seen and the polar
/// angle of an open window attaining it.
pub(crate) struct SweepMin {
    pub mass: f64,
    pub angle: f64,
}

/// Minimises `theta -> P((x - z) . w(theta) <= TOL)` over the closed arc
/// `[lo, lo + len]` (`full` means the whole circle) in `O(n log n)`.
///
/// Each point is counted on a closed arc of angles, so the count is
/// piecewise constant and upper semicontinuous: its minimum is attained on
/// an open window between consecutive arc endpoints. Only those windows
/// are inspected and the returned angle is the midpoint of the first
/// minimising window.
pub(crate) fn min_closed_mass(s: &Sample, z: [f64; 2], lo: f64, len: f64, full: bool) -> SweepMin {
    let len = if full { TAU } else { len };
    // (position, weight, is_start)
    let mut events: Vec<(f64, f64, bool)> = Vec::with_capacity(2 * s.len() + 2);
    let mut always = 0.0;
    let mut open = 0.0;
    for (i, x) in s.points().enumerate() {
        let w = s.weight(i);
        if w == 0.0 {
            continue;
        }
        let v = [x[0] - z[0], x[1] - z[1]];
        let r = v[0].hypot(v[1]);
        if r <= TOL {
            always += w;
            continue;
        }
        // counted iff cos(theta - psi) <= TOL / r
        let half = (TOL / r).min(1.0).acos();
        let start = normalize_angle(v[1].atan2(v[0]) + half - lo);
        let end = start + (TAU - 2.0 * half);
        if end <= TAU {
            events.push((start, w, true));
            events.push((end, w, false));
        } else {
            // wraps past the arc origin: active from 0 and again from `start`
            open += w;
            events.push((end - TAU, w, false));
            events.push((start, w, true));
        }
    }
    events.push((0.0, 0.0, true));
    events.push((len, 0.0, true));
    events.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut best = SweepMin { mass: f64::INFINITY, angle: lo };
    let mut k = 0;
    while k < events.len() {
        let pos = events[k].0;
        if pos >= len {
            break;
        }
        let (mut starts, mut ends) = (0.0, 0.0);
        while k < events.len() && events[k].0 == pos {
            if events[k].2 {
                starts += events[k].1;
            } else {
                ends += events[k].1;
            }
            k += 1;
        }
        open += starts - ends;
        let next = events.get(k).map_or(len, |e| e.0).min(len);
        if next > pos {
            let mass = open + always;
            if mass < best.mass - 1e-15 {
                best = SweepMin { mass, angle: lo + 0.5 * (pos + next) };
            }
        }
    }
    if !best.mass.is_finite() {
        best = SweepMin { mass: always + open, angle: lo };
    }
    best
}
