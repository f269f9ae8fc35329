//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::dominance::fsd_dominates;
use crate::empirical::{cone_cdf_detailed, joint_cdf, ProbabilityLevel, Sample};
use crate::error::{Error, Result};
use crate::generate::{generate, GenerateKind};
use crate::geometry::OrderingCone;
use crate::io::{
    load_cone, load_sample, quantile_region_json, region_plot_csv, to_canonical_json, write_sample_csv,
};
use crate::quantile::{
    componentwise_quantile_corner, joint_quantile_membership, lower_quantile_region, upper_quantile_region,
};
use crate::risk::{componentwise_var_box, var_region};

/// Exit status for malformed sample, cone or region files and arguments.
pub const EXIT_PARSE: i32 = 2;
/// Exit status for cones whose dual is trivial or malformed.
pub const EXIT_INVALID_CONE: i32 = 3;
/// Exit status for probability levels outside an operation's domain.
pub const EXIT_LEVEL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "conequant", version, about = "Cone distribution functions, set-valued quantiles, VaR and dominance")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cone distribution function at one or more points.
    Cdf(CdfArgs),
    /// Halfspace depth at one or more points.
    Depth(DepthArgs),
    /// Lower or upper quantile region.
    Quantile(QuantileArgs),
    /// Set-valued Value at Risk.
    Var(VarArgs),
    /// First-order stochastic dominance of Y over X.
    Fsd(FsdArgs),
    /// Cone quantile region, joint-cdf raster and componentwise corner side by side.
    Compare(CompareArgs),
    /// Write a deterministic sample.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct ConeArgs {
    /// Cone JSON file.
    #[arg(long)]
    pub cone: PathBuf,
    /// Number of dual directions sampled in dimension three and up.
    #[arg(long)]
    pub directions: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CdfArgs {
    #[arg(long)]
    pub sample: PathBuf,
    #[command(flatten)]
    pub cone: ConeArgs,
    /// Query point, comma separated; repeatable.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub z: Vec<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct DepthArgs {
    #[arg(long)]
    pub sample: PathBuf,
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub z: Vec<String>,
    #[arg(long)]
    pub directions: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Plot,
}

#[derive(Debug, Args)]
pub struct QuantileArgs {
    #[arg(long)]
    pub sample: PathBuf,
    #[command(flatten)]
    pub cone: ConeArgs,
    /// Level in [0, 1], decimal or ratio such as 3/8.
    #[arg(long, allow_hyphen_values = true)]
    pub p: String,
    #[arg(long, value_enum, default_value_t = SideArg::Lower)]
    pub side: SideArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Plot window `xmin,ymin,xmax,ymax` for truncating rays.
    #[arg(long, allow_hyphen_values = true)]
    pub bbox: Option<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct VarArgs {
    #[arg(long)]
    pub sample: PathBuf,
    #[command(flatten)]
    pub cone: ConeArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, allow_hyphen_values = true)]
    pub bbox: Option<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct FsdArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    /// Sample of the candidate dominating variable Y.
    #[arg(long)]
    pub y: PathBuf,
    /// Sample of the dominated variable X.
    #[arg(long)]
    pub x: PathBuf,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub sample: PathBuf,
    #[command(flatten)]
    pub cone: ConeArgs,
    /// Levels; repeatable.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub p: Vec<String>,
    /// Raster resolution per axis.
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub bbox: Option<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// uniform2d, normal2d or fourpoint.
    #[arg(long)]
    pub kind: String,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Maps an error to the process exit status.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Json(_) => EXIT_PARSE,
        Error::InvalidCone(_) => EXIT_INVALID_CONE,
        Error::LevelDomain(_) => EXIT_LEVEL,
        _ => 1,
    }
}

/// Parses arguments, runs the command and returns the exit status. Results
/// go to `--out` or `stdout`; diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&config, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Comma-separated finite numbers.
pub fn parse_point(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .enumerate()
        .map(|(k, f)| {
            let v: f64 = f.trim().parse().map_err(|_| Error::Parse {
                line: 1,
                column: k as u64 + 1,
                message: format!("{f:?} is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse { line: 1, column: k as u64 + 1, message: format!("{f:?} is not finite") });
            }
            Ok(v)
        })
        .collect()
}

fn parse_bbox(text: &str) -> Result<[f64; 4]> {
    let v = parse_point(text)?;
    match v.as_slice() {
        &[x0, y0, x1, y1] if x0 < x1 && y0 < y1 => Ok([x0, y0, x1, y1]),
        _ => Err(Error::Parse { line: 1, column: 1, message: "bbox must be xmin,ymin,xmax,ymax with min < max".into() }),
    }
}

/// Sample bounding box widened by half its diameter on each side.
fn default_bbox(s: &Sample) -> [f64; 4] {
    let (lo, hi) = s.bounding_box();
    let pad = 0.5 * (hi[0] - lo[0]).hypot(hi[1] - lo[1]).max(1.0);
    [lo[0] - pad, lo[1] - pad, hi[0] + pad, hi[1] + pad]
}

fn load_cone_for(args: &ConeArgs, dim: usize) -> Result<OrderingCone> {
    let cone = load_cone(&args.cone, dim)?;
    match args.directions {
        Some(n) => cone.with_direction_count(n),
        None => Ok(cone),
    }
}

fn emit(out: &OutArgs, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn level(text: &str) -> Result<ProbabilityLevel> {
    text.parse()
}

fn check_planar(s: &Sample, what: &str) -> Result<()> {
    if s.dim() != 2 {
        return Err(Error::Unsupported(format!("{what} needs a planar sample, found dimension {}", s.dim())));
    }
    Ok(())
}

fn cdf_json(s: &Sample, cone: &OrderingCone, zs: &[String]) -> Result<Value> {
    let mut results = Vec::with_capacity(zs.len());
    for text in zs {
        let z = parse_point(text)?;
        let r = cone_cdf_detailed(s, cone, &z)?;
        results.push(json!({
            "z": z,
            "value": r.value,
            "survival": 1.0 - r.value,
            "joint_cdf": joint_cdf(s, &z)?,
            "argmin": r.argmin,
            "exact": r.exact,
            "directions": r.directions,
        }));
    }
    Ok(if results.len() == 1 { results.pop().expect("one result") } else { json!({ "results": results }) })
}

fn execute(config: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    match &config.command {
        Command::Cdf(a) => {
            let s = load_sample(&a.sample)?;
            let cone = load_cone_for(&a.cone, s.dim())?;
            emit(&a.out, stdout, &to_canonical_json(&cdf_json(&s, &cone, &a.z)?)?)
        }
        Command::Depth(a) => {
            let s = load_sample(&a.sample)?;
            let mut cone = OrderingCone::zero(s.dim())?;
            if let Some(n) = a.directions {
                cone = cone.with_direction_count(n)?;
            }
            emit(&a.out, stdout, &to_canonical_json(&cdf_json(&s, &cone, &a.z)?)?)
        }
        Command::Quantile(a) => {
            let s = load_sample(&a.sample)?;
            let cone = load_cone_for(&a.cone, s.dim())?;
            let p = level(&a.p)?;
            let region = match a.side {
                SideArg::Lower => lower_quantile_region(&s, &cone, p)?,
                SideArg::Upper => upper_quantile_region(&s, &cone, p)?,
            };
            let text = match a.format {
                Format::Json => to_canonical_json(&quantile_region_json(&region)?)?,
                Format::Plot => {
                    check_planar(&s, "plot output")?;
                    let bbox = a.bbox.as_deref().map(parse_bbox).transpose()?.unwrap_or_else(|| default_bbox(&s));
                    region_plot_csv(region.planar().expect("planar region"), bbox)
                }
            };
            emit(&a.out, stdout, &text)
        }
        Command::Var(a) => {
            let s = load_sample(&a.sample)?;
            let cone = load_cone_for(&a.cone, s.dim())?;
            let alpha = level(&a.alpha)?;
            let v = var_region(&s, &cone, alpha)?;
            let text = match a.format {
                Format::Json => {
                    let mut j = quantile_region_json(&v.region)?;
                    j["alpha"] = json!(alpha.value());
                    j["componentwise_box"] = json!(componentwise_var_box(&s, alpha)?);
                    to_canonical_json(&j)?
                }
                Format::Plot => {
                    check_planar(&s, "plot output")?;
                    let bbox =
                        a.bbox.as_deref().map(parse_bbox).transpose()?.unwrap_or_else(|| default_bbox(&s.negated()));
                    region_plot_csv(v.region.planar().expect("planar region"), bbox)
                }
            };
            emit(&a.out, stdout, &text)
        }
        Command::Fsd(a) => {
            let y = load_sample(&a.y)?;
            let x = load_sample(&a.x)?;
            let cone = load_cone_for(&a.cone, y.dim())?;
            let verdict = fsd_dominates(&y, &x, &cone)?;
            emit(&a.out, stdout, &to_canonical_json(&verdict)?)
        }
        Command::Compare(a) => {
            let s = load_sample(&a.sample)?;
            check_planar(&s, "compare")?;
            let cone = load_cone_for(&a.cone, 2)?;
            let bbox = a.bbox.as_deref().map(parse_bbox).transpose()?.unwrap_or_else(|| default_bbox(&s));
            if a.grid < 2 {
                return Err(Error::InvalidInput("grid needs at least 2 nodes per axis".into()));
            }
            let node = |k: usize, lo: f64, hi: f64| lo + (hi - lo) * k as f64 / (a.grid - 1) as f64;
            let mut levels = Vec::with_capacity(a.p.len());
            for text in &a.p {
                let p = level(text)?;
                let region = lower_quantile_region(&s, &cone, p)?;
                let mut raster = Vec::with_capacity(a.grid);
                for j in 0..a.grid {
                    let y = node(j, bbox[1], bbox[3]);
                    let mut row = String::with_capacity(a.grid);
                    for i in 0..a.grid {
                        let z = [node(i, bbox[0], bbox[2]), y];
                        row.push(if joint_quantile_membership(&s, p, &z)? { '1' } else { '0' });
                    }
                    raster.push(row);
                }
                let corner = if p.value() > 0.0 { Some(componentwise_quantile_corner(&s, p)?) } else { None };
                levels.push(json!({
                    "p": p.value(),
                    "region": quantile_region_json(&region)?,
                    "joint_raster": raster,
                    "componentwise_corner": corner,
                }));
            }
            let doc = json!({
                "bbox": bbox,
                "grid": a.grid,
                "raster_rows": "row j is y = ymin + j (ymax - ymin) / (grid - 1); column i likewise for x",
                "levels": levels,
            });
            emit(&a.out, stdout, &to_canonical_json(&doc)?)
        }
        Command::Generate(a) => {
            let kind: GenerateKind = a.kind.parse()?;
            let s = generate(kind, a.n, a.seed)?;
            let mut buf = Vec::new();
            write_sample_csv(&s, &mut buf, kind == GenerateKind::FourPoint)?;
            emit(&a.out, stdout, std::str::from_utf8(&buf).expect("CSV is UTF-8"))
        }
    }
}
