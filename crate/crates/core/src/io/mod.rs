//! File formats: sample CSV, cone JSON, region JSON, and the canonical JSON
//! writer (sorted keys, 17 significant digits).

mod json;

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use json::{format_g17, to_canonical_json};

use crate::empirical::Sample;
use crate::error::{Error, Result};
use crate::geometry::{ConeKind, ConvexRegion2D, Direction, OrderingCone, Point2, RegionShape, RegionStatus};
use crate::quantile::{QuantileRegion, RegionGeometry};

fn parse_error(line: u64, column: u64, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Reads a sample from CSV with header `x1,...,xd[,weight]`.
///
/// Rows must all have the header's width and contain finite numbers. A
/// trailing `weight` column gives the point weights; otherwise they are
/// uniform. Errors report 1-based line and column.
pub fn read_sample_csv<R: Read>(reader: R) -> Result<Sample> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(|e| csv_error(&e))?.clone();
    let width = header.len();
    let weighted = header.iter().next_back().is_some_and(|h| h.eq_ignore_ascii_case("weight"));
    let dim = if weighted { width - 1 } else { width };
    if dim == 0 || header.iter().all(str::is_empty) {
        return Err(parse_error(1, 1, "header must name at least one coordinate column"));
    }
    let mut coords = Vec::new();
    let mut weights = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => return Err(csv_error(&e)),
        }
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != width {
            return Err(parse_error(
                line,
                (record.len().min(width) + 1) as u64,
                format!("expected {width} fields, found {}", record.len()),
            ));
        }
        for (k, field) in record.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| parse_error(line, k as u64 + 1, format!("{field:?} is not a number")))?;
            if !v.is_finite() {
                return Err(parse_error(line, k as u64 + 1, format!("{field:?} is not finite")));
            }
            if weighted && k == dim {
                weights.push(v);
            } else {
                coords.push(v);
            }
        }
    }
    if coords.is_empty() {
        return Err(parse_error(2, 1, "sample has no rows"));
    }
    let weights = weighted.then_some(weights);
    Sample::from_flat(dim, coords, weights).map_err(|e| match e {
        Error::InvalidInput(m) => parse_error(1, width as u64, m),
        other => other,
    })
}

fn csv_error(e: &csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    parse_error(line, 1, e.to_string())
}

pub fn load_sample(path: &Path) -> Result<Sample> {
    read_sample_csv(std::fs::File::open(path)?)
}

/// Writes a sample as CSV; the weight column is included on request.
pub fn write_sample_csv<W: Write>(s: &Sample, writer: W, with_weights: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (1..=s.dim()).map(|k| format!("x{k}")).collect();
    if with_weights {
        header.push("weight".into());
    }
    w.write_record(&header).map_err(|e| Error::Io(e.into()))?;
    for (i, p) in s.points().enumerate() {
        let mut row: Vec<String> = p.iter().map(|&x| format_g17(x)).collect();
        if with_weights {
            row.push(format_g17(s.weight(i)));
        }
        w.write_record(&row).map_err(|e| Error::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

/// On-disk cone description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    pub kind: String,
    #[serde(default)]
    pub vectors: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction_count: Option<usize>,
}

impl ConeSpec {
    /// Builds the cone in dimension `dim` (taken from the sample).
    pub fn to_cone(&self, dim: usize) -> Result<OrderingCone> {
        let check = |v: &Vec<f64>| -> Result<()> {
            if v.len() != dim {
                return Err(Error::InvalidCone(format!("vector {v:?} does not have dimension {dim}")));
            }
            Ok(())
        };
        let dirs = || -> Result<Vec<Direction>> {
            self.vectors
                .iter()
                .map(|v| {
                    check(v)?;
                    Direction::new(v.clone()).map_err(|e| Error::InvalidCone(e.to_string()))
                })
                .collect()
        };
        let fixed = matches!(self.kind.as_str(), "zero" | "orthant" | "negative_orthant");
        if fixed && !self.vectors.is_empty() {
            return Err(Error::InvalidCone(format!("{} cone takes no vectors", self.kind)));
        }
        let cone = match self.kind.as_str() {
            "zero" => OrderingCone::zero(dim),
            "orthant" => OrderingCone::orthant(dim),
            "negative_orthant" => OrderingCone::negative_orthant(dim),
            "halfspace" => {
                let ds = dirs()?;
                match ds.as_slice() {
                    [w] => OrderingCone::halfspace(w.clone()),
                    _ => Err(Error::InvalidCone("halfspace cone needs exactly one normal vector".into())),
                }
            }
            "generators2d" => {
                if dim != 2 {
                    return Err(Error::InvalidCone(format!("generators2d needs dimension 2, sample has {dim}")));
                }
                let mut g = Vec::with_capacity(self.vectors.len());
                for v in &self.vectors {
                    check(v)?;
                    g.push([v[0], v[1]]);
                }
                OrderingCone::generators_2d(g)
            }
            "dual_directions" => OrderingCone::dual_directions(dirs()?),
            other => Err(Error::InvalidCone(format!("unknown cone kind {other:?}"))),
        }
        .map_err(|e| match e {
            Error::InvalidCone(_) => e,
            other => Error::InvalidCone(other.to_string()),
        })?;
        match self.direction_count {
            Some(n) => cone.with_direction_count(n).map_err(|e| Error::InvalidCone(e.to_string())),
            None => Ok(cone),
        }
    }

    pub fn from_cone(cone: &OrderingCone) -> Self {
        let (kind, vectors) = match cone.kind() {
            ConeKind::Zero => ("zero", Vec::new()),
            ConeKind::Orthant => ("orthant", Vec::new()),
            ConeKind::NegativeOrthant => ("negative_orthant", Vec::new()),
            ConeKind::Generators2d(g) => ("generators2d", g.iter().map(|v| v.to_vec()).collect()),
            ConeKind::Halfspace(w) => ("halfspace", vec![w.as_slice().to_vec()]),
            ConeKind::DualDirections(ds) => ("dual_directions", ds.iter().map(|d| d.as_slice().to_vec()).collect()),
        };
        let direction_count = (cone.dim() >= 3).then_some(cone.direction_count());
        ConeSpec { kind: kind.into(), vectors, direction_count }
    }
}

fn json_error(e: &serde_json::Error) -> Error {
    parse_error(e.line() as u64, e.column() as u64, e.to_string())
}

/// Parses a cone JSON document for samples of dimension `dim`.
pub fn parse_cone_json(text: &str, dim: usize) -> Result<OrderingCone> {
    let spec: ConeSpec = serde_json::from_str(text).map_err(|e| json_error(&e))?;
    spec.to_cone(dim)
}

pub fn load_cone(path: &Path, dim: usize) -> Result<OrderingCone> {
    parse_cone_json(&std::fs::read_to_string(path)?, dim)
}

/// JSON value of a quantile region: the region fields plus `side`,
/// `level`, `cone` and `exact`.
pub fn quantile_region_json(r: &QuantileRegion) -> Result<Value> {
    let mut v = match &r.geometry {
        RegionGeometry::Planar(region) => serde_json::to_value(region)?,
        RegionGeometry::Halfspaces(hs) => json!({
            "status": if hs.is_empty() { "full_plane" } else { "proper" },
            "vertices": [],
            "rays": [],
            "halfspaces": hs,
        }),
    };
    let obj = v.as_object_mut().expect("region serializes to an object");
    obj.insert("side".into(), serde_json::to_value(r.side)?);
    obj.insert("level".into(), json!(r.level.value()));
    obj.insert("cone".into(), serde_json::to_value(ConeSpec::from_cone(&r.cone))?);
    obj.insert("dimension".into(), json!(r.dim()));
    obj.insert("exact".into(), json!(r.exact));
    Ok(v)
}

/// Reads a planar region JSON (extra quantile fields are ignored). The
/// region is rebuilt from its halfspaces.
pub fn parse_region_json(text: &str) -> Result<ConvexRegion2D> {
    serde_json::from_str(text).map_err(|e| json_error(&e))
}

/// Boundary of a planar region as CSV polylines `path,x,y`. Rays are cut
/// where they leave `bbox = [xmin, ymin, xmax, ymax]`; a slab gives two
/// paths, a bounded region a closed one, the full plane the box itself.
pub fn region_plot_csv(region: &ConvexRegion2D, bbox: [f64; 4]) -> String {
    let mut out = String::from("path,x,y\n");
    let mut emit = |path: usize, pts: &[Point2]| {
        for p in pts {
            out.push_str(&format!("{path},{},{}\n", format_g17(p[0]), format_g17(p[1])));
        }
    };
    let exit = |v: Point2, d: Point2| -> Point2 {
        let mut t = f64::INFINITY;
        for (k, (lo, hi)) in [(bbox[0], bbox[2]), (bbox[1], bbox[3])].into_iter().enumerate() {
            if d[k] > 0.0 {
                t = t.min((hi - v[k]) / d[k]);
            } else if d[k] < 0.0 {
                t = t.min((lo - v[k]) / d[k]);
            }
        }
        let t = if t.is_finite() { t.max(0.0) } else { 0.0 };
        [v[0] + t * d[0], v[1] + t * d[1]]
    };
    let (vs, rays) = (region.vertices(), region.rays());
    match (region.status(), region.shape()) {
        (RegionStatus::Empty, _) => {}
        (RegionStatus::FullPlane, _) => emit(
            0,
            &[[bbox[0], bbox[1]], [bbox[2], bbox[1]], [bbox[2], bbox[3]], [bbox[0], bbox[3]], [bbox[0], bbox[1]]],
        ),
        (_, RegionShape::Bounded) => {
            let mut pts = vs.to_vec();
            pts.extend(vs.first().copied());
            emit(0, &pts);
        }
        (_, RegionShape::Pointed) => {
            let mut pts = vec![exit(vs[0], rays[1])];
            pts.extend_from_slice(vs);
            pts.push(exit(vs[vs.len() - 1], rays[0]));
            emit(0, &pts);
        }
        (_, RegionShape::Halfplane | RegionShape::Slab) => {
            let neg = |d: Point2| [-d[0], -d[1]];
            for (k, &a) in vs.iter().enumerate() {
                emit(k, &[exit(a, neg(rays[0])), exit(a, rays[0])]);
            }
        }
    }
    out
}
