//! Command-line front end.
//!
//! Every subcommand takes the same system flags (`--r1`, `--r2`, repeated
//! `--vortex x,y,kappa`, truncation limits) or a JSON file via `--config`.
//! Flags override the file. `--dump-config` prints the merged configuration
//! instead of running.
//!
//! Exit codes: 0 success, 1 usage/validation/domain error or failed check,
//! 2 truncation did not converge.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::dynamics::{
    default_step, integrate, limit_convergence, limit_sample_points, orbit_frequency, LimitCase,
};
use crate::error::{Error, Result};
use crate::flow::{
    boundary_residual_with, potential, sample_points, stream, FlowModel, Representation,
};
use crate::geometry::{AnnulusGeometry, Vortex, VortexSystem};
use crate::images::cascade;
use crate::qcalc::TruncationPolicy;
use crate::theta::{rescale_to_unit_outer, stream_theta};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConfig {
    pub r1: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VortexConfig {
    pub x: f64,
    pub y: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FieldRepresentation {
    Laurent,
    Images,
    Qlog,
    /// q-log velocity with the stream function from the theta ratio.
    Theta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldOptions {
    pub representation: FieldRepresentation,
    pub nx: usize,
    pub ny: usize,
    pub laurent_order: Option<usize>,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions {
            representation: FieldRepresentation::Qlog,
            nx: 41,
            ny: 41,
            laurent_order: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrbitOptions {
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImagesOptions {
    pub depth: usize,
}

impl Default for ImagesOptions {
    fn default() -> Self {
        ImagesOptions { depth: 4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateOptions {
    pub tolerance: f64,
    pub samples: usize,
    pub samples_per_circle: usize,
    pub laurent_order: Option<usize>,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            tolerance: 1e-8,
            samples: 50,
            samples_per_circle: 256,
            laurent_order: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimitsOptions {
    pub points: usize,
}

impl Default for LimitsOptions {
    fn default() -> Self {
        LimitsOptions { points: 20 }
    }
}

/// Everything a run needs. Unset sections take their defaults.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: Option<GeometryConfig>,
    pub vortices: Vec<VortexConfig>,
    pub truncation: TruncationPolicy,
    pub field: FieldOptions,
    pub orbit: OrbitOptions,
    pub images: ImagesOptions,
    pub validate: ValidateOptions,
    pub limits: LimitsOptions,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid("config", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid("config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
            .map_err(|e| Error::invalid("config", format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks geometry, vortices and truncation, naming the offending field.
    pub fn system(&self) -> Result<VortexSystem> {
        self.truncation
            .validate()
            .map_err(|e| Error::invalid("truncation", e.to_string()))?;
        let g = self
            .geometry
            .ok_or_else(|| Error::invalid("geometry", "r1 and r2 are required"))?;
        let geom = AnnulusGeometry::new(g.r1, g.r2)
            .map_err(|e| Error::invalid("geometry", e.to_string()))?;
        if self.vortices.is_empty() {
            return Err(Error::invalid("vortices", "at least one vortex is required"));
        }
        let vortices = self
            .vortices
            .iter()
            .enumerate()
            .map(|(k, v)| {
                Vortex::at(v.x, v.y, v.kappa).map_err(|e| {
                    Error::invalid("vortices", format!("vortices[{k}]: {e}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        VortexSystem::new(geom, vortices)
    }
}

#[derive(Debug, Parser)]
#[command(name = "qvortex", version, about = "Point vortices between two coaxial cylinders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Velocity and stream function on a grid, as CSV.
    Field(FieldArgs),
    /// Integrate vortex motion, as CSV with a JSON summary.
    Orbit(OrbitArgs),
    /// Image cascade of each vortex, as JSON.
    Images(ImagesArgs),
    /// Compare the annulus with its one-cylinder and one-disk limits.
    Limits(LimitsArgs),
    /// Cross-check the representations and the wall conditions, as JSON.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    r1: Option<f64>,
    #[arg(long)]
    r2: Option<f64>,
    /// `x,y,kappa`; repeat for several vortices.
    #[arg(long = "vortex", value_parser = parse_vortex, allow_hyphen_values = true)]
    vortices: Vec<VortexConfig>,
    #[arg(long)]
    max_terms: Option<usize>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    image_pairs: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Print the merged configuration as JSON and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Debug, Args)]
struct FieldArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum)]
    representation: Option<FieldRepresentation>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    laurent_order: Option<usize>,
}

#[derive(Debug, Args)]
struct OrbitArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
}

#[derive(Debug, Args)]
struct ImagesArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Debug, Args)]
struct LimitsArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    samples_per_circle: Option<usize>,
    #[arg(long)]
    laurent_order: Option<usize>,
}

fn parse_vortex(s: &str) -> std::result::Result<VortexConfig, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,kappa, got {s:?}"));
    }
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    Ok(VortexConfig {
        x: num(parts[0])?,
        y: num(parts[1])?,
        kappa: num(parts[2])?,
    })
}

impl CommonArgs {
    fn merge(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        match (self.r1, self.r2, cfg.geometry) {
            (Some(r1), Some(r2), _) => cfg.geometry = Some(GeometryConfig { r1, r2 }),
            (Some(r1), None, Some(g)) => cfg.geometry = Some(GeometryConfig { r1, ..g }),
            (None, Some(r2), Some(g)) => cfg.geometry = Some(GeometryConfig { r2, ..g }),
            (Some(_), None, None) => return Err(Error::invalid("geometry", "--r2 is missing")),
            (None, Some(_), None) => return Err(Error::invalid("geometry", "--r1 is missing")),
            (None, None, _) => {}
        }
        if !self.vortices.is_empty() {
            cfg.vortices = self.vortices.clone();
        }
        if let Some(v) = self.max_terms {
            cfg.truncation.max_terms = v;
        }
        if let Some(v) = self.abs_tol {
            cfg.truncation.abs_tol = v;
        }
        if let Some(v) = self.image_pairs {
            cfg.truncation.image_pairs = v;
        }
        if self.output.is_some() {
            cfg.output = self.output.clone();
        }
        Ok(cfg)
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

/// Shortest round-trip decimal form.
fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Runs the command line and returns the exit code, printing to the process
/// stdout and stderr.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit streams.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_convergence() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let (common, cfg) = match &cli.command {
        Command::Field(a) => {
            let mut cfg = a.common.merge()?;
            set(&mut cfg.field.representation, a.representation);
            set(&mut cfg.field.nx, a.nx);
            set(&mut cfg.field.ny, a.ny);
            if a.laurent_order.is_some() {
                cfg.field.laurent_order = a.laurent_order;
            }
            (&a.common, cfg)
        }
        Command::Orbit(a) => {
            let mut cfg = a.common.merge()?;
            if a.t_end.is_some() {
                cfg.orbit.t_end = a.t_end;
            }
            if a.dt.is_some() {
                cfg.orbit.dt = a.dt;
            }
            (&a.common, cfg)
        }
        Command::Images(a) => {
            let mut cfg = a.common.merge()?;
            set(&mut cfg.images.depth, a.depth);
            (&a.common, cfg)
        }
        Command::Limits(a) => {
            let mut cfg = a.common.merge()?;
            set(&mut cfg.limits.points, a.points);
            (&a.common, cfg)
        }
        Command::Validate(a) => {
            let mut cfg = a.common.merge()?;
            set(&mut cfg.validate.tolerance, a.tolerance);
            set(&mut cfg.validate.samples, a.samples);
            set(&mut cfg.validate.samples_per_circle, a.samples_per_circle);
            if a.laurent_order.is_some() {
                cfg.validate.laurent_order = a.laurent_order;
            }
            (&a.common, cfg)
        }
    };
    if common.dump_config {
        writeln!(out, "{}", cfg.to_json()).map_err(io_err)?;
        return Ok(0);
    }
    let sys = cfg.system()?;
    let mut buf = Vec::new();
    let code = match cli.command {
        Command::Field(_) => field(&cfg, &sys, &mut buf)?,
        Command::Orbit(_) => orbit(&cfg, &sys, &mut buf)?,
        Command::Images(_) => images(&cfg, &sys, &mut buf)?,
        Command::Limits(_) => limits(&cfg, &sys, &mut buf)?,
        Command::Validate(_) => validate(&cfg, &sys, &mut buf)?,
    };
    match &cfg.output {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path).map_err(io_err)?);
            f.write_all(&buf).and_then(|_| f.flush()).map_err(io_err)?;
        }
        None => out.write_all(&buf).map_err(io_err)?,
    }
    Ok(code)
}

fn io_err(e: io::Error) -> Error {
    Error::invalid("io", e.to_string())
}

fn system_json(sys: &VortexSystem) -> serde_json::Value {
    let g = sys.geom();
    json!({
        "r1": g.r1(),
        "r2": g.r2(),
        "q": g.q(),
        "vortices": sys.vortices().iter().map(|v| json!({
            "x": v.position.re, "y": v.position.im, "kappa": v.strength
        })).collect::<Vec<_>>(),
    })
}

fn field(cfg: &RunConfig, sys: &VortexSystem, w: &mut Vec<u8>) -> Result<i32> {
    let opts = cfg.field;
    if opts.nx < 2 || opts.ny < 2 {
        return Err(Error::invalid("field", "nx and ny must be at least 2"));
    }
    let repr = match opts.representation {
        FieldRepresentation::Laurent => Representation::Laurent,
        FieldRepresentation::Images => Representation::Images,
        FieldRepresentation::Qlog | FieldRepresentation::Theta => Representation::Qlog,
    };
    let policy = cfg.truncation;
    let model = match opts.laurent_order {
        Some(m) => FlowModel::with_laurent_order(sys, repr, policy, Some(m)),
        None => FlowModel::new(sys, repr, policy),
    };
    let (unit, scale) = rescale_to_unit_outer(sys);
    let theta = opts.representation == FieldRepresentation::Theta;
    let r2 = sys.geom().r2();
    let grid: Vec<Complex64> = (0..opts.ny)
        .flat_map(|j| {
            (0..opts.nx).map(move |i| {
                let x = -r2 + 2.0 * r2 * i as f64 / (opts.nx - 1) as f64;
                let y = -r2 + 2.0 * r2 * j as f64 / (opts.ny - 1) as f64;
                Complex64::new(x, y)
            })
        })
        .filter(|&z| sys.geom().contains_closed(z))
        .collect();
    let rows: Vec<Option<(f64, f64, f64)>> = grid
        .par_iter()
        .map(|&z| -> Result<Option<(f64, f64, f64)>> {
            let vbar = match model.velocity(z) {
                Ok(v) => v,
                Err(Error::Singularity { .. }) | Err(Error::ImagePole { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let psi = if theta {
                stream_theta(&unit, z * scale, &policy)?
            } else {
                stream(sys, z, &policy)?
            };
            Ok(Some((vbar.re, -vbar.im, psi)))
        })
        .collect::<Result<_>>()?;
    let count = rows.iter().flatten().count();
    let meta = json!({
        "command": "field",
        "representation": opts.representation,
        "system": system_json(sys),
        "truncation": policy,
        "laurent_order": model.laurent_order(),
        "grid": {"nx": opts.nx, "ny": opts.ny},
        "rows": count,
    });
    let mut text = format!("# {meta}\nx,y,u,v,psi\n");
    for (z, row) in grid.iter().zip(&rows) {
        if let Some((u, v, psi)) = row {
            text.push_str(&format!(
                "{},{},{},{},{}\n",
                num(z.re),
                num(z.im),
                num(*u),
                num(*v),
                num(*psi)
            ));
        }
    }
    w.extend_from_slice(text.as_bytes());
    Ok(0)
}

fn orbit(cfg: &RunConfig, sys: &VortexSystem, w: &mut Vec<u8>) -> Result<i32> {
    let policy = cfg.truncation;
    let single = if sys.len() == 1 {
        let v = sys.vortices()[0];
        Some(orbit_frequency(sys.geom(), v.strength, v.position.norm(), &policy)?)
    } else {
        None
    };
    let t_end = cfg.orbit.t_end.unwrap_or_else(|| match single {
        Some(o) if o.omega != 0.0 => o.period(),
        _ => 1.0,
    });
    let dt = cfg.orbit.dt.unwrap_or_else(|| match single {
        Some(o) => default_step(&o, t_end / 1000.0),
        None => t_end / 1000.0,
    });
    let traj = integrate(sys, t_end, dt, &policy)?;
    let start: Vec<Complex64> = sys.vortices().iter().map(|v| v.position).collect();
    let return_error = traj
        .final_positions()
        .iter()
        .zip(&start)
        .map(|(a, b)| (a - b).norm() / b.norm())
        .fold(0.0, f64::max);
    let summary = json!({
        "command": "orbit",
        "system": system_json(sys),
        "t_end": t_end,
        "dt": dt,
        "steps": traj.times.len() - 1,
        "omega": single.map(|o| o.omega),
        "omega1": single.map(|o| o.omega1),
        "omega2": single.map(|o| o.omega2),
        "period": single.and_then(|o| (o.omega != 0.0).then(|| o.period())),
        "radius_drift": traj.radius_drift(),
        "return_error": return_error,
        "halt": traj.halt,
    });
    let mut text = format!("# {summary}\nt");
    for k in 1..=sys.len() {
        text.push_str(&format!(",x{k},y{k}"));
    }
    text.push('\n');
    for (i, t) in traj.times.iter().enumerate() {
        text.push_str(&num(*t));
        for path in &traj.positions {
            text.push_str(&format!(",{},{}", num(path[i].re), num(path[i].im)));
        }
        text.push('\n');
    }
    w.extend_from_slice(text.as_bytes());
    Ok(if traj.halt.is_some() { 1 } else { 0 })
}

fn images(cfg: &RunConfig, sys: &VortexSystem, w: &mut Vec<u8>) -> Result<i32> {
    let depth = cfg.images.depth;
    let mut list = Vec::new();
    for (k, v) in sys.vortices().iter().enumerate() {
        let set = cascade(v, sys.geom(), depth)?;
        for im in &set.images {
            list.push(json!({
                "vortex": k,
                "re": im.position.re,
                "im": im.position.im,
                "sign": im.strength_sign,
                "generation": im.generation,
                "family": im.family,
            }));
        }
    }
    let doc = json!({"system": system_json(sys), "depth": depth, "images": list});
    writeln!(w, "{}", serde_json::to_string_pretty(&doc).expect("json")).map_err(io_err)?;
    Ok(0)
}

const LIMIT_QS: [f64; 4] = [1e3, 1e4, 1e5, 1e6];

fn limits(cfg: &RunConfig, sys: &VortexSystem, w: &mut Vec<u8>) -> Result<i32> {
    let v = sys.vortices()[0];
    let g = sys.geom();
    let mut text = String::from("case,q,velocity_rel_err,omega_rel_err\n");
    for (case, name, radius) in [
        (LimitCase::OneCylinder, "one-cylinder", g.r1()),
        (LimitCase::OneDisk, "one-disk", g.r2()),
    ] {
        let pts = limit_sample_points(case, radius, v.position, cfg.limits.points);
        let rows = limit_convergence(case, radius, v, &pts, &LIMIT_QS, &cfg.truncation)?;
        for r in rows {
            text.push_str(&format!(
                "{name},{},{},{}\n",
                num(r.q),
                num(r.velocity_rel_err),
                num(r.omega_rel_err)
            ));
        }
    }
    w.extend_from_slice(text.as_bytes());
    Ok(0)
}

/// Result of the `validate` subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub samples: usize,
    pub tolerance: f64,
    pub laurent_order: usize,
    pub laurent_images: f64,
    pub laurent_qlog: f64,
    pub images_qlog: f64,
    pub max_discrepancy: f64,
    pub boundary_laurent: f64,
    pub boundary_images: f64,
    pub boundary_qlog: f64,
    pub theta_spread: f64,
    pub pass: bool,
}

/// Three-way velocity comparison at interior points, wall residuals of each
/// representation and the spread of `Ψ_theta - Im F`.
pub fn validation_report(
    sys: &VortexSystem,
    policy: &TruncationPolicy,
    opts: &ValidateOptions,
) -> Result<ValidationReport> {
    let geom = sys.geom();
    let laurent = match opts.laurent_order {
        Some(m) => FlowModel::with_laurent_order(sys, Representation::Laurent, *policy, Some(m)),
        None => FlowModel::new(sys, Representation::Laurent, *policy),
    };
    let images = FlowModel::new(sys, Representation::Images, *policy);
    let qlog = FlowModel::new(sys, Representation::Qlog, *policy);
    let avoid: Vec<Complex64> = sys.vortices().iter().map(|v| v.position).collect();
    let pts = sample_points(geom, opts.samples, &avoid, 0.05 * (geom.r2() - geom.r1()));
    let (unit, scale) = rescale_to_unit_outer(sys);
    let per_point: Vec<[f64; 4]> = pts
        .par_iter()
        .map(|&z| -> Result<[f64; 4]> {
            let l = laurent.velocity(z)?;
            let i = images.velocity(z)?;
            let q = qlog.velocity(z)?;
            let offset = stream_theta(&unit, z * scale, policy)? - potential(sys, z, policy)?.im;
            Ok([(l - i).norm(), (l - q).norm(), (i - q).norm(), offset])
        })
        .collect::<Result<_>>()?;
    let max_of = |k: usize| per_point.iter().map(|p| p[k]).fold(0.0, f64::max);
    let (lo, hi) = per_point.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p[3]), hi.max(p[3]))
    });
    let n = opts.samples_per_circle;
    let b = |m: &FlowModel| boundary_residual_with(sys, n, |z| m.velocity(z)).map(|r| r.max());
    let (bl, bi, bq) = (b(&laurent)?, b(&images)?, b(&qlog)?);
    let (li, lq, iq) = (max_of(0), max_of(1), max_of(2));
    let max_discrepancy = li.max(lq).max(iq);
    let theta_spread = if pts.is_empty() { 0.0 } else { hi - lo };
    let tol = opts.tolerance;
    let pass = [max_discrepancy, bl, bi, bq, theta_spread].iter().all(|&x| x < tol);
    Ok(ValidationReport {
        samples: pts.len(),
        tolerance: tol,
        laurent_order: laurent.laurent_order().unwrap_or(0),
        laurent_images: li,
        laurent_qlog: lq,
        images_qlog: iq,
        max_discrepancy,
        boundary_laurent: bl,
        boundary_images: bi,
        boundary_qlog: bq,
        theta_spread,
        pass,
    })
}

fn validate(cfg: &RunConfig, sys: &VortexSystem, w: &mut Vec<u8>) -> Result<i32> {
    let report = validation_report(sys, &cfg.truncation, &cfg.validate)?;
    let doc = json!({"system": system_json(sys), "report": report});
    writeln!(w, "{}", serde_json::to_string_pretty(&doc).expect("json")).map_err(io_err)?;
    Ok(if report.pass { 0 } else { 1 })
}
