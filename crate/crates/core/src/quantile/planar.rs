use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, TAU};

use crate::empirical::{lower_quantile_index, upper_quantile_index, Sample};
use crate::geometry::{normalize_angle, Direction, Halfspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Selector {
    Lower,
    Upper,
}

/// Angles at which the projection order of point `k` against some other
/// point changes, relative to `lo` and restricted to `(0, len)`, sorted.
/// Each pair is oriented by index so that both endpoints of the pair see
/// bit-identical angles.
fn critical_angles(s: &Sample, k: usize, lo: f64, len: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for j in 0..s.len() {
        if j == k {
            continue;
        }
        let (a, b) = if k < j { (s.point(k), s.point(j)) } else { (s.point(j), s.point(k)) };
        let d = [b[0] - a[0], b[1] - a[1]];
        if d == [0.0, 0.0] {
            continue;
        }
        let phi = d[1].atan2(d[0]);
        for t in [phi + FRAC_PI_2, phi - FRAC_PI_2] {
            let rel = normalize_angle(t - lo);
            if rel > 0.0 && rel < len {
                out.push(rel);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

fn select(s: &Sample, theta: f64, p: f64, sel: Selector) -> Option<usize> {
    let (sn, cs) = theta.sin_cos();
    let proj: Vec<f64> = s.points().map(|x| cs * x[0] + sn * x[1]).collect();
    match sel {
        Selector::Lower => Some(lower_quantile_index(&proj, s.weights(), p)),
        Selector::Upper => upper_quantile_index(&proj, s.weights(), p),
    }
}

/// Halfspaces whose intersection is the quantile region over the arc of
/// directions `[lo, lo + len]` (or the full circle).
///
/// The arc is cut into pieces on which one sample point realises the scalar
/// quantile. On a piece `[a, b]` with `b - a < pi` the halfspaces
/// `w(t) . z >= w(t) . x_k` for `t` in `[a, b]` intersect to the two at the
/// endpoints. The realising point can only change at a critical angle of
/// the current realiser, so each piece costs one sort plus a lookup in that
/// point's critical list.
pub(crate) fn arc_halfspaces(s: &Sample, lo: f64, len: f64, full: bool, p: f64, sel: Selector) -> Vec<Halfspace> {
    let len = if full { TAU } else { len };
    let mut breaks: Vec<f64> = (1..4).map(|q| q as f64 * FRAC_PI_2).filter(|&b| b < len).collect();
    breaks.push(len);

    let mut crit: HashMap<usize, Vec<f64>> = HashMap::new();
    let mut next_crit = |k: usize, pos: f64| -> f64 {
        let list = crit.entry(k).or_insert_with(|| critical_angles(s, k, lo, len));
        let at = list.partition_point(|&a| a <= pos);
        list.get(at).copied().unwrap_or(f64::INFINITY)
    };

    let mut pieces: Vec<(f64, f64, usize)> = Vec::new();
    let mut pos = 0.0;
    while pos < len {
        let mut end = breaks[breaks.partition_point(|&b| b <= pos)];
        let Some(mut k) = select(s, lo + 0.5 * (pos + end), p, sel) else {
            return Vec::new();
        };
        loop {
            let c = next_crit(k, pos);
            if c >= end {
                break;
            }
            end = c;
            match select(s, lo + 0.5 * (pos + end), p, sel) {
                Some(k2) if k2 != k => k = k2,
                _ => break,
            }
        }
        match pieces.last_mut() {
            Some(last) if last.2 == k && last.1 == pos && end - last.0 <= FRAC_PI_2 => last.1 = end,
            _ => pieces.push((pos, end, k)),
        }
        pos = end;
    }

    let mut out = Vec::with_capacity(2 * pieces.len());
    for (a, b, k) in pieces {
        for t in [a, b] {
            let w = Direction::from_angle(lo + t);
            let w = if sel == Selector::Upper { w.negated() } else { w };
            out.push(Halfspace::through(w, s.point(k)));
        }
    }
    out
}
