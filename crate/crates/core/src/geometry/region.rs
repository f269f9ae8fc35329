//! Possibly unbounded convex polygons described by halfplanes.
//!
//! Intersection clips a large box, keeping track of which edge comes from
//! which line so that every reported vertex is recomputed from the two real
//! lines meeting there. Box edges that survive clipping mark the region as
//! unbounded and are converted into recession rays.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::direction::{Direction, Halfspace};
use super::TOL;
use crate::error::{Error, Result};

pub type Point2 = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionStatus {
    Empty,
    FullPlane,
    Proper,
}

/// Combinatorial type of a proper region; decides the recession cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionShape {
    /// Polygon, segment or point. No rays.
    Bounded,
    /// Vertex chain between an incoming and an outgoing ray (`rays = [out, in]`).
    Pointed,
    /// A single halfplane: one anchor on the boundary line, `rays = [d, -d]`.
    Halfplane,
    /// Two antiparallel boundary lines (possibly coincident), one anchor each.
    Slab,
}

/// Convex region in the plane. Vertices run counter-clockwise. Bounded
/// regions start at the lexicographically smallest vertex; unbounded ones
/// start at the vertex where the incoming ray attaches.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexRegion2D {
    status: RegionStatus,
    shape: RegionShape,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<Point2>,
    rays: Vec<Point2>,
}

#[derive(Debug, Clone, Copy)]
struct Line {
    n: Point2,
    c: f64,
    real: bool,
}

impl Line {
    fn slack(&self, p: Point2) -> f64 {
        self.n[0] * p[0] + self.n[1] * p[1] - self.c
    }

    /// Travel direction along the boundary with the interior on the left.
    fn dir(&self) -> Point2 {
        [self.n[1], -self.n[0]]
    }
}

fn cross(a: Point2, b: Point2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: Point2, b: Point2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn dist(a: Point2, b: Point2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn meet(a: &Line, b: &Line) -> Option<Point2> {
    let det = cross(a.n, b.n);
    if det.abs() < 1e-14 {
        return None;
    }
    Some([(a.c * b.n[1] - b.c * a.n[1]) / det, (a.n[0] * b.c - b.n[0] * a.c) / det])
}

/// Counter-clockwise angle from `a` to `b` in `[0, 2pi)`.
fn ccw_angle(a: Point2, b: Point2) -> f64 {
    super::direction::normalize_angle(cross(a, b).atan2(dot(a, b)))
}

fn lex_cmp(a: &Point2, b: &Point2) -> Ordering {
    a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1]))
}

/// Cyclic edge list; `verts[k]` is where edge `k` ends and edge `k+1` begins.
struct Polygon {
    lines: Vec<Line>,
    edges: Vec<usize>,
    verts: Vec<Point2>,
}

impl Polygon {
    fn boxed(half_width: f64) -> Self {
        let b = half_width;
        let lines = vec![
            Line { n: [0.0, 1.0], c: -b, real: false },
            Line { n: [-1.0, 0.0], c: -b, real: false },
            Line { n: [0.0, -1.0], c: -b, real: false },
            Line { n: [1.0, 0.0], c: -b, real: false },
        ];
        Polygon { lines, edges: vec![0, 1, 2, 3], verts: vec![[b, -b], [b, b], [-b, b], [-b, -b]] }
    }

    /// Clips by a real line. Returns `false` when nothing survives.
    fn clip(&mut self, line: Line) -> bool {
        let m = self.edges.len();
        let slack: Vec<f64> = self.verts.iter().map(|&v| line.slack(v)).collect();
        let mut inside: Vec<bool> = slack.iter().map(|&s| s >= -TOL).collect();
        if inside.iter().all(|&b| b) {
            return true;
        }
        if !inside.iter().any(|&b| b) {
            return false;
        }
        let runs = |flags: &[bool]| (0..m).filter(|&k| flags[k] && !flags[(k + 1) % m]).count();
        if runs(&inside) > 1 {
            // Numerical noise on a collapsed polygon: widen the band once.
            inside = slack.iter().map(|&s| s >= -10.0 * TOL).collect();
        }
        // Exit: inside v_k, outside v_{k+1}; entry: outside v_j, inside v_{j+1}.
        let exit = (0..m).find(|&k| inside[k] && !inside[(k + 1) % m]).expect("exit vertex");
        let entry = (0..m).find(|&j| !inside[j] && inside[(j + 1) % m]).expect("entry vertex");

        self.lines.push(line);
        let h = self.lines.len() - 1;
        let first = (entry + 1) % m;
        let last = (exit + 1) % m;
        let mut edges = Vec::with_capacity(m + 1);
        let mut verts = Vec::with_capacity(m + 1);
        let mut k = first;
        loop {
            edges.push(self.edges[k]);
            if k == last {
                break;
            }
            verts.push(self.verts[k]);
            k = (k + 1) % m;
        }
        let exit_edge = &self.lines[self.edges[last]];
        let out_pt = meet(exit_edge, &line).unwrap_or_else(|| {
            interpolate(self.verts[exit], self.verts[last], slack[exit], slack[last])
        });
        let entry_edge = &self.lines[self.edges[first]];
        let in_pt = meet(&line, entry_edge).unwrap_or_else(|| {
            interpolate(self.verts[entry], self.verts[first], slack[entry], slack[first])
        });
        verts.push(out_pt);
        edges.push(h);
        verts.push(in_pt);
        self.edges = edges;
        self.verts = verts;
        true
    }

    /// Drops real edges of (near) zero length when the two neighbouring real
    /// edges already turn by less than pi, i.e. the edge is redundant.
    fn drop_degenerate_edges(&mut self) {
        loop {
            let m = self.edges.len();
            if m <= 3 {
                return;
            }
            let found = (0..m).find(|&k| {
                let prev = (k + m - 1) % m;
                let next = (k + 1) % m;
                let (lp, lk, ln) = (
                    &self.lines[self.edges[prev]],
                    &self.lines[self.edges[k]],
                    &self.lines[self.edges[next]],
                );
                lp.real
                    && lk.real
                    && ln.real
                    && dist(self.verts[prev], self.verts[k]) < TOL
                    && ccw_angle(lp.n, ln.n) < std::f64::consts::PI - 1e-9
            });
            let Some(k) = found else { return };
            let prev = (k + m - 1) % m;
            let next = (k + 1) % m;
            let merged = meet(&self.lines[self.edges[prev]], &self.lines[self.edges[next]])
                .filter(|p| dist(*p, self.verts[prev]) < 1e3 * TOL)
                .unwrap_or(self.verts[prev]);
            self.verts[prev] = merged;
            self.edges.remove(k);
            self.verts.remove(k);
        }
    }
}

fn interpolate(a: Point2, b: Point2, sa: f64, sb: f64) -> Point2 {
    let t = if (sa - sb).abs() > 0.0 { sa / (sa - sb) } else { 0.5 };
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// Makes normals that are opposite within `1e-12` exactly opposite, so the
/// pair bounds a slab instead of crossing at a far, ill-conditioned point.
/// `lines` is sorted by normal angle; the partner of the line at angle `a`
/// sits near `a + pi` and takes the exact negation of its normal.
fn snap_antiparallel(lines: &mut [Line]) {
    let angle = |l: &Line| super::direction::normalize_angle(l.n[1].atan2(l.n[0]));
    let angles: Vec<f64> = lines.iter().map(angle).collect();
    for i in 0..lines.len() {
        if angles[i] >= std::f64::consts::PI {
            break;
        }
        let target = angles[i] + std::f64::consts::PI;
        let k = angles.partition_point(|&a| a < target);
        for j in [k.wrapping_sub(1), k, (k + 1) % lines.len()] {
            let Some(&lj) = lines.get(j) else { continue };
            if j != i && dot(lines[i].n, lj.n) < 0.0 && cross(lines[i].n, lj.n).abs() <= 1e-12 {
                lines[j].n = [-lines[i].n[0], -lines[i].n[1]];
            }
        }
    }
}

/// Handles a pair of exactly opposite lines whose slab is at most `TOL`
/// wide. The region then lies on one line and is cut down to a point,
/// segment, ray or the whole line by the remaining halfspaces, solved as
/// interval constraints on the line parameter. Clipping such a sliver
/// against the bounding box would lose the far vertices to rounding.
fn thin_slab(lines: &[Line]) -> Option<ConvexRegion2D> {
    let (a, b) = lines.iter().enumerate().find_map(|(i, a)| {
        lines[i + 1..]
            .iter()
            .find(|b| b.n == [-a.n[0], -a.n[1]] && (a.c + b.c).abs() <= TOL)
            .map(|b| (*a, *b))
    })?;
    let cm = 0.5 * (a.c - b.c);
    let p0 = [cm * a.n[0], cm * a.n[1]];
    let d = a.dir();
    let at = |t: f64| [p0[0] + t * d[0], p0[1] + t * d[1]];
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let (mut lo_line, mut hi_line) = (None, None);
    for l in lines {
        let rate = dot(l.n, d);
        let need = l.c - dot(l.n, p0);
        if rate.abs() <= 1e-12 {
            if need > TOL {
                return Some(ConvexRegion2D::empty());
            }
        } else if rate > 0.0 && need / rate > lo {
            lo = need / rate;
            lo_line = Some(*l);
        } else if rate < 0.0 && need / rate < hi {
            hi = need / rate;
            hi_line = Some(*l);
        }
    }
    if lo > hi {
        if dist(at(lo), at(hi)) > TOL {
            return Some(ConvexRegion2D::empty());
        }
        (lo, hi) = (0.5 * (lo + hi), 0.5 * (lo + hi));
    }
    let pair = [Line { c: cm, ..a }, Line { c: -cm, ..b }];
    let mut halfspaces: Vec<Halfspace> = pair
        .iter()
        .chain(lo_line.iter())
        .chain(hi_line.iter())
        .map(|l| Halfspace { normal: Direction::new(l.n.to_vec()).expect("unit normal"), offset: l.c })
        .collect();
    let proper = |shape, halfspaces, vertices, rays| ConvexRegion2D {
        status: RegionStatus::Proper,
        shape,
        halfspaces,
        vertices,
        rays,
    };
    Some(match (lo.is_finite(), hi.is_finite()) {
        (false, false) => {
            halfspaces.sort_by(|x, y| x.normal.angle().total_cmp(&y.normal.angle()));
            let vertices = halfspaces.iter().map(|h| [h.offset * h.normal.xy()[0], h.offset * h.normal.xy()[1]]).collect();
            proper(RegionShape::Slab, halfspaces, vertices, vec![d, [-d[0], -d[1]]])
        }
        (true, false) => proper(RegionShape::Pointed, halfspaces, vec![at(lo)], vec![d, d]),
        (false, true) => {
            let back = [-d[0], -d[1]];
            proper(RegionShape::Pointed, halfspaces, vec![at(hi)], vec![back, back])
        }
        (true, true) => {
            let mut vertices = vec![at(lo)];
            if dist(at(lo), at(hi)) >= TOL {
                vertices.push(at(hi));
                vertices.sort_by(lex_cmp);
            }
            proper(RegionShape::Bounded, halfspaces, vertices, Vec::new())
        }
    })
}

/// Exact intersection of planar halfspaces. An empty list gives the full
/// plane; infeasible lists give an empty region. Redundant and duplicate
/// halfspaces are dropped and the output order is deterministic.
pub fn intersect_halfspaces_2d(halfspaces: &[Halfspace]) -> Result<ConvexRegion2D> {
    if let Some(h) = halfspaces.iter().find(|h| h.dim() != 2) {
        return Err(Error::dim(2, h.dim()));
    }
    if halfspaces.iter().any(|h| !h.offset.is_finite()) {
        return Err(Error::InvalidInput("halfspace offset must be finite".into()));
    }
    if halfspaces.is_empty() {
        return Ok(ConvexRegion2D::full_plane());
    }

    // Sort by normal angle, keep the tightest of each group of parallel,
    // equally oriented normals.
    let mut lines: Vec<(f64, Line)> = halfspaces
        .iter()
        .map(|h| (h.normal.angle(), Line { n: h.normal.xy(), c: h.offset, real: true }))
        .collect();
    lines.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.c.total_cmp(&a.1.c)));
    let mut unique: Vec<Line> = Vec::with_capacity(lines.len());
    for (_, l) in lines {
        if let Some(last) = unique.last() {
            if cross(last.n, l.n).abs() <= 1e-12 && dot(last.n, l.n) > 0.0 {
                continue;
            }
        }
        unique.push(l);
    }
    if unique.len() > 1 {
        let (first, last) = (unique[0], unique[unique.len() - 1]);
        if cross(first.n, last.n).abs() <= 1e-12 && dot(first.n, last.n) > 0.0 {
            if last.c > first.c {
                unique[0] = last;
            }
            unique.pop();
        }
    }

    snap_antiparallel(&mut unique);
    if let Some(r) = thin_slab(&unique) {
        return Ok(r);
    }

    let scale = unique.iter().fold(1.0f64, |s, l| s.max(l.c.abs()));
    let mut poly = Polygon::boxed(1e8 * scale);
    for l in unique {
        if !poly.clip(l) {
            return Ok(ConvexRegion2D::empty());
        }
    }
    poly.drop_degenerate_edges();
    Ok(ConvexRegion2D::from_polygon(poly))
}

impl ConvexRegion2D {
    pub fn full_plane() -> Self {
        ConvexRegion2D {
            status: RegionStatus::FullPlane,
            shape: RegionShape::Bounded,
            halfspaces: Vec::new(),
            vertices: Vec::new(),
            rays: Vec::new(),
        }
    }

    /// The empty region, described by the contradictory pair `x >= 1`,
    /// `-x >= 0` so that its halfspace list still defines the set.
    pub fn empty() -> Self {
        let h = |v: f64, c: f64| Halfspace { normal: Direction::new(vec![v, 0.0]).expect("unit normal"), offset: c };
        ConvexRegion2D { status: RegionStatus::Empty, halfspaces: vec![h(1.0, 1.0), h(-1.0, 0.0)], ..Self::full_plane() }
    }

    fn from_polygon(poly: Polygon) -> Self {
        let m = poly.edges.len();
        let line = |k: usize| poly.lines[poly.edges[k % m]];
        let to_hs = |l: &Line| Halfspace {
            normal: Direction::new(l.n.to_vec()).expect("unit normal"),
            offset: l.c,
        };

        let Some(start) = (0..m).find(|&k| !line(k).real && line(k + 1).real) else {
            // Bounded: every vertex is real.
            let start = (0..m)
                .min_by(|&a, &b| lex_cmp(&poly.verts[a], &poly.verts[b]))
                .expect("nonempty polygon");
            let mut vertices: Vec<Point2> = Vec::with_capacity(m);
            let mut halfspaces = Vec::with_capacity(m);
            for i in 0..m {
                let k = (start + i) % m;
                halfspaces.push(to_hs(&line(k + 1)));
                let v = poly.verts[k];
                if vertices.last().is_none_or(|&p| dist(p, v) >= TOL) {
                    vertices.push(v);
                }
            }
            if vertices.len() > 1 && dist(vertices[0], vertices[vertices.len() - 1]) < TOL {
                vertices.pop();
            }
            return ConvexRegion2D {
                status: RegionStatus::Proper,
                shape: RegionShape::Bounded,
                halfspaces,
                vertices,
                rays: Vec::new(),
            };
        };

        // Real runs, walking from just after a box edge.
        let mut runs: Vec<Vec<usize>> = Vec::new();
        let mut current: Vec<usize> = Vec::new();
        for i in 1..=m {
            let k = (start + i) % m;
            if line(k).real {
                current.push(k);
            } else if !current.is_empty() {
                runs.push(std::mem::take(&mut current));
            }
        }
        if !current.is_empty() {
            runs.push(current);
        }

        match runs.as_slice() {
            [] => Self::full_plane(),
            [run] if run.len() == 1 => {
                let l = line(run[0]);
                let d = l.dir();
                ConvexRegion2D {
                    status: RegionStatus::Proper,
                    shape: RegionShape::Halfplane,
                    halfspaces: vec![to_hs(&l)],
                    vertices: vec![[l.c * l.n[0], l.c * l.n[1]]],
                    rays: vec![d, [-d[0], -d[1]]],
                }
            }
            [run] => {
                let mut vertices: Vec<Point2> = Vec::with_capacity(run.len() - 1);
                for w in run.windows(2) {
                    let v = poly.verts[w[0]];
                    if vertices.last().is_none_or(|&p| dist(p, v) >= TOL) {
                        vertices.push(v);
                    }
                }
                let first = line(run[0]);
                let last = line(run[run.len() - 1]);
                let din = first.dir();
                ConvexRegion2D {
                    status: RegionStatus::Proper,
                    shape: RegionShape::Pointed,
                    halfspaces: run.iter().map(|&k| to_hs(&line(k))).collect(),
                    vertices,
                    rays: vec![last.dir(), [-din[0], -din[1]]],
                }
            }
            runs => {
                // Two antiparallel lines. Order them by normal angle.
                let mut ls: Vec<Line> = runs.iter().flatten().map(|&k| line(k)).collect();
                ls.sort_by(|a, b| {
                    super::direction::normalize_angle(a.n[1].atan2(a.n[0]))
                        .total_cmp(&super::direction::normalize_angle(b.n[1].atan2(b.n[0])))
                });
                let d = ls[0].dir();
                ConvexRegion2D {
                    status: RegionStatus::Proper,
                    shape: RegionShape::Slab,
                    halfspaces: ls.iter().map(to_hs).collect(),
                    vertices: ls.iter().map(|l| [l.c * l.n[0], l.c * l.n[1]]).collect(),
                    rays: vec![d, [-d[0], -d[1]]],
                }
            }
        }
    }

    pub fn status(&self) -> RegionStatus {
        self.status
    }

    pub fn shape(&self) -> RegionShape {
        self.shape
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Point2] {
        &self.rays
    }

    pub fn is_empty(&self) -> bool {
        self.status == RegionStatus::Empty
    }

    pub fn is_bounded(&self) -> bool {
        match self.status {
            RegionStatus::Empty => true,
            RegionStatus::FullPlane => false,
            RegionStatus::Proper => self.shape == RegionShape::Bounded,
        }
    }

    /// Membership within tolerance `1e-9` on every halfspace.
    pub fn contains(&self, z: Point2) -> bool {
        match self.status {
            RegionStatus::Empty => false,
            RegionStatus::FullPlane => true,
            RegionStatus::Proper => self.halfspaces.iter().all(|h| h.contains(&z)),
        }
    }

    /// Generators of the recession cone (with both signs of any lineality).
    pub fn recession_generators(&self) -> Vec<Point2> {
        match (self.status, self.shape) {
            (RegionStatus::Proper, RegionShape::Bounded) | (RegionStatus::Empty, _) => Vec::new(),
            (RegionStatus::FullPlane, _) => vec![[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]],
            (RegionStatus::Proper, RegionShape::Halfplane) => {
                let n = self.halfspaces[0].normal.xy();
                vec![self.rays[0], self.rays[1], n]
            }
            (RegionStatus::Proper, _) => self.rays.clone(),
        }
    }

    /// `inf { u . z : z in region }`: `+inf` for the empty region and
    /// `-inf` when the infimum is unbounded.
    pub fn inf_linear(&self, u: Point2) -> f64 {
        match self.status {
            RegionStatus::Empty => f64::INFINITY,
            RegionStatus::FullPlane => {
                if u == [0.0, 0.0] {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
            RegionStatus::Proper => {
                let norm = u[0].hypot(u[1]).max(1.0);
                if self.recession_generators().iter().any(|&g| dot(u, g) < -TOL * norm) {
                    return f64::NEG_INFINITY;
                }
                self.vertices.iter().map(|&v| dot(u, v)).fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// `inner` is contained in `self`.
    pub fn includes(&self, inner: &ConvexRegion2D) -> bool {
        match (self.status, inner.status) {
            (_, RegionStatus::Empty) => true,
            (RegionStatus::Empty, _) => false,
            (RegionStatus::FullPlane, _) => true,
            (_, RegionStatus::FullPlane) => false,
            _ => self
                .halfspaces
                .iter()
                .all(|h| inner.inf_linear(h.normal.xy()) >= h.offset - TOL),
        }
    }

    /// Points of `inner` outside `self`: violating vertices first, then far
    /// points along rays that leave `self`'s recession cone.
    pub fn violations(&self, inner: &ConvexRegion2D) -> Vec<Point2> {
        if self.includes(inner) {
            return Vec::new();
        }
        match inner.status {
            RegionStatus::Empty => return Vec::new(),
            RegionStatus::FullPlane => {
                // Any point outside a proper/empty outer region.
                let h = self.halfspaces.first();
                return vec![match h {
                    Some(h) => {
                        let n = h.normal.xy();
                        [n[0] * (h.offset - 1.0), n[1] * (h.offset - 1.0)]
                    }
                    None => [0.0, 0.0],
                }];
            }
            RegionStatus::Proper => {}
        }
        let mut out: Vec<Point2> = inner.vertices.iter().copied().filter(|&v| !self.contains(v)).collect();
        out.sort_by(lex_cmp);
        let mut far = Vec::new();
        for h in &self.halfspaces {
            let n = h.normal.xy();
            for &g in &inner.recession_generators() {
                let rate = dot(n, g);
                if rate < -TOL {
                    for &v in &inner.vertices {
                        let t = (h.offset - dot(n, v)) / rate;
                        let t = t.max(0.0) + 1.0;
                        far.push([v[0] + t * g[0], v[1] + t * g[1]]);
                    }
                }
            }
        }
        far.sort_by(lex_cmp);
        out.extend(far.into_iter().filter(|&p| !self.contains(p)));
        out
    }

    pub fn intersection(&self, other: &ConvexRegion2D) -> Result<ConvexRegion2D> {
        if self.is_empty() || other.is_empty() {
            return Ok(Self::empty());
        }
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        intersect_halfspaces_2d(&hs)
    }

    /// Image under `z -> A z + b` for an invertible row-major `A`.
    pub fn map_affine(&self, a: [[f64; 2]; 2], b: Point2) -> Result<ConvexRegion2D> {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::InvalidInput("matrix is singular".into()));
        }
        if self.status != RegionStatus::Proper {
            return Ok(self.clone());
        }
        let inv = [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]];
        let inv_b = [inv[0][0] * b[0] + inv[0][1] * b[1], inv[1][0] * b[0] + inv[1][1] * b[1]];
        // w . A^{-1}(y - b) >= c  <=>  (A^{-T} w) . y >= c + w . A^{-1} b
        let hs = self
            .halfspaces
            .iter()
            .map(|h| {
                let w = h.normal.xy();
                let n = [inv[0][0] * w[0] + inv[1][0] * w[1], inv[0][1] * w[0] + inv[1][1] * w[1]];
                let norm = n[0].hypot(n[1]);
                Ok(Halfspace::new(Direction::new(n.to_vec())?, (h.offset + dot(w, inv_b)) / norm))
            })
            .collect::<Result<Vec<_>>>()?;
        intersect_halfspaces_2d(&hs)
    }

    /// Point reflection `z -> -z`.
    pub fn negated(&self) -> Result<ConvexRegion2D> {
        self.map_affine([[-1.0, 0.0], [0.0, -1.0]], [0.0, 0.0])
    }

    /// Geometric equality up to `tol`: same status, shape and vertex/ray
    /// sets (order-insensitive).
    pub fn approx_eq(&self, other: &ConvexRegion2D, tol: f64) -> bool {
        if self.status != other.status {
            return false;
        }
        if self.status != RegionStatus::Proper {
            return true;
        }
        if self.shape != other.shape {
            return false;
        }
        let same_set = |a: &[Point2], b: &[Point2], tol: f64| {
            a.len() == b.len()
                && a.iter().all(|p| b.iter().any(|q| dist(*p, *q) <= tol))
                && b.iter().all(|p| a.iter().any(|q| dist(*p, *q) <= tol))
        };
        match self.shape {
            // Anchors of halfplanes/slabs are not canonical under maps;
            // compare boundary lines instead.
            RegionShape::Halfplane | RegionShape::Slab => {
                self.halfspaces.len() == other.halfspaces.len()
                    && self.halfspaces.iter().all(|h| {
                        other.halfspaces.iter().any(|g| {
                            dist(h.normal.xy(), g.normal.xy()) <= tol && (h.offset - g.offset).abs() <= tol
                        })
                    })
            }
            _ => same_set(&self.vertices, &other.vertices, tol) && same_set(&self.rays, &other.rays, tol),
        }
    }

    /// Vertices/rays/halfspaces are consistent (used by tests and debug checks).
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        if self.status != RegionStatus::Proper {
            return Ok(());
        }
        for v in &self.vertices {
            let mut tight = 0;
            for h in &self.halfspaces {
                let s = h.slack(v);
                if s < -TOL * 10.0 {
                    return Err(format!("vertex {v:?} violates {h:?} by {s}"));
                }
                if s.abs() <= 1e-7 {
                    tight += 1;
                }
            }
            let needed = match self.shape {
                RegionShape::Bounded if self.vertices.len() >= 3 => 2,
                RegionShape::Pointed => 2,
                _ => 1,
            };
            if tight < needed {
                return Err(format!("vertex {v:?} is tight on {tight} halfspaces"));
            }
        }
        if self.shape == RegionShape::Bounded && self.vertices.len() >= 3 {
            let m = self.vertices.len();
            for k in 0..m {
                let (a, b, c) = (self.vertices[k], self.vertices[(k + 1) % m], self.vertices[(k + 2) % m]);
                let turn = cross([b[0] - a[0], b[1] - a[1]], [c[0] - b[0], c[1] - b[1]]);
                if turn < -1e-9 {
                    return Err(format!("clockwise turn at {b:?}"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RegionRepr {
    status: RegionStatus,
    vertices: Vec<Point2>,
    rays: Vec<Point2>,
    halfspaces: Vec<Halfspace>,
}

impl Serialize for ConvexRegion2D {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RegionRepr {
            status: self.status,
            vertices: self.vertices.clone(),
            rays: self.rays.clone(),
            halfspaces: self.halfspaces.clone(),
        }
        .serialize(s)
    }
}

/// Deserialization rebuilds the region from its halfspaces; the vertex and
/// ray fields are derived data.
impl<'de> Deserialize<'de> for ConvexRegion2D {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = RegionRepr::deserialize(d)?;
        match repr.status {
            RegionStatus::Empty => Ok(ConvexRegion2D::empty()),
            RegionStatus::FullPlane => Ok(ConvexRegion2D::full_plane()),
            RegionStatus::Proper => {
                let region = intersect_halfspaces_2d(&repr.halfspaces).map_err(serde::de::Error::custom)?;
                if region.status != RegionStatus::Proper {
                    return Err(serde::de::Error::custom(format!(
                        "halfspaces describe a {:?} region, not a proper one",
                        region.status
                    )));
                }
                Ok(region)
            }
        }
    }
}
