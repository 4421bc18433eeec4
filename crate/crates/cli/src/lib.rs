//! Command-line front end: curve validation, end classification, mesh
//! export for CMC-1 surfaces and faces, period solving, and end models.
//!
//! Exit codes: 0 success, 1 domain failure, 2 input error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use nullsl2::invariants::{classify_end, omega, EndReport, InducedMetric, InvariantError};
use nullsl2::periods::{period_solve, Cycle, PeriodError, PeriodReport, SolveOptions, SprayFamily};
use nullsl2::series::SeriesError;
use nullsl2::sl2curve::{check_null_sl2, end_model, EndModelSpec, Mat2, SL2NullCurve, Sl2Error};
use nullsl2::spaceforms::{ball_hyperboloid_defect, poincare_ball, project_h3, project_s31, SpaceformError};
use nullsl2::spinor::{check_null_c3, C3NullCurve};
use nullsl2::{Execution, MeroFunction};

pub const SEED_ENV: &str = "NULLSL2_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("grid vertex ({}, {}) hits a pole", .0.re, .0.im)]
    PoleOnGrid(Complex64),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error(transparent)]
    Spaceform(#[from] SpaceformError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Argument(_) => 2,
            CliError::Sl2(Sl2Error::InvalidMultiplicity(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    H3,
    S31,
}

/// Log-polar sampling grid on the annulus `inner <= |z - center| <= outer`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub radial: usize,
    pub angular: usize,
    pub inner: f64,
    pub outer: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            radial: 32,
            angular: 64,
            inner: 0.05,
            outer: 0.5,
        }
    }
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if self.radial < 2 || self.angular < 3 {
            return Err(CliError::Argument("grid needs at least 2x3 divisions".into()));
        }
        if !(self.inner > 0.0 && self.inner < self.outer && self.outer.is_finite()) {
            return Err(CliError::Argument("grid radii must satisfy 0 < inner < outer".into()));
        }
        Ok(())
    }

    /// Vertex `(i, j)` sits at radius index `i` and angle index `j`.
    pub fn points(&self, center: Complex64) -> Vec<Complex64> {
        let ratio = (self.outer / self.inner).ln();
        let mut out = Vec::with_capacity(self.radial * self.angular);
        for i in 0..self.radial {
            let r = self.inner * (ratio * i as f64 / (self.radial - 1) as f64).exp();
            for j in 0..self.angular {
                let t = 2.0 * std::f64::consts::PI * j as f64 / self.angular as f64;
                out.push(center + Complex64::from_polar(r, t));
            }
        }
        out
    }

    /// Two triangles per cell, periodic in the angle.
    pub fn faces(&self) -> Vec<[usize; 3]> {
        let a = self.angular;
        let idx = |i: usize, j: usize| i * a + j % a;
        let mut out = Vec::with_capacity(2 * (self.radial - 1) * a);
        for i in 0..self.radial - 1 {
            for j in 0..a {
                out.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
                out.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
            }
        }
        out
    }
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (r, a) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected RxA, got {s:?}"))?;
    let r = r.trim().parse().map_err(|_| format!("bad radial count {r:?}"))?;
    let a = a.trim().parse().map_err(|_| format!("bad angular count {a:?}"))?;
    Ok((r, a))
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re: f64 = re.trim().parse().map_err(|_| format!("bad real part {re:?}"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part {im:?}"))?;
    Ok(Complex64::new(re, im))
}

/// Settings shared by all commands. Loaded from `--config`, then
/// overridden by flags and by `NULLSL2_SEED`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub tol: f64,
    /// When set, curves are expanded into Laurent windows of this length
    /// before analysis instead of using exact rational arithmetic.
    pub truncation_order: Option<usize>,
    pub grid: Grid,
    pub seed: u64,
    pub max_iter: usize,
    pub max_step: Option<f64>,
    pub sequential: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol: 1e-10,
            truncation_order: None,
            grid: Grid::default(),
            seed: 0,
            max_iter: 20,
            max_step: None,
            sequential: false,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }

    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nullsl2", version, about = "Null curves in SL2(C) and C^3, CMC-1 ends, and periods")]
pub struct Cli {
    /// JSON run configuration
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Work with Laurent windows of this length
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Sampling grid as RxA (radial x angular divisions)
    #[arg(long, global = true, value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check unimodularity, nullity, immersion and nonflatness
    Validate { input: PathBuf },
    /// Classify the end at a point
    Classify {
        input: PathBuf,
        /// End point as re,im (defaults to the first declared pole)
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        at: Option<Complex64>,
    },
    /// Export the projected surface as an OBJ mesh
    Mesh {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "h3")]
        target: Target,
        /// Grid center as re,im (defaults to the first declared pole)
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        center: Option<Complex64>,
        #[arg(long)]
        inner: Option<f64>,
        #[arg(long)]
        outer: Option<f64>,
    },
    /// Kill periods of a spray over the given cycles
    Solve { spray: PathBuf, cycles: PathBuf },
    /// Write the explicit end of multiplicity m
    Endmodel {
        #[arg(allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        center: Option<Complex64>,
    },
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

/// Curve file: either picture, told apart by the slot names.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum CurveFile {
    Sl2(SL2NullCurve),
    C3(C3NullCurve),
}

fn windowed(f: &MeroFunction, trunc: Option<usize>) -> Result<MeroFunction> {
    match trunc {
        Some(n) if f.is_rational() => Ok(f.to_laurent(n)?),
        _ => Ok(f.clone()),
    }
}

fn load_sl2(path: &Path, trunc: Option<usize>) -> Result<SL2NullCurve> {
    let c: SL2NullCurve = read_json(path)?;
    Ok(SL2NullCurve {
        f1: windowed(&c.f1, trunc)?,
        f2: windowed(&c.f2, trunc)?,
        f3: windowed(&c.f3, trunc)?,
        f4: windowed(&c.f4, trunc)?,
        ..c
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub picture: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unimodular: Option<bool>,
    pub null: bool,
    pub immersion: bool,
    pub nonflat: bool,
    #[serde(with = "pairs")]
    pub pole_set: Vec<Complex64>,
    pub seed: u64,
}

impl ValidateReport {
    pub fn passed(&self) -> bool {
        self.unimodular.unwrap_or(true) && self.null && self.immersion && self.nonflat
    }
}

mod pairs {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Complex64>, D::Error> {
        let rows = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(rows.into_iter().map(|[a, b]| Complex64::new(a, b)).collect())
    }
}

pub fn cmd_validate(input: &Path, cfg: &RunConfig) -> Result<ValidateReport> {
    let curve: CurveFile = read_json(input)?;
    let t = cfg.truncation_order;
    Ok(match curve {
        CurveFile::Sl2(_) => {
            let f = load_sl2(input, t)?;
            let r = check_null_sl2(&f);
            ValidateReport {
                picture: "sl2".into(),
                unimodular: Some(r.unimodular),
                null: r.null,
                immersion: r.immersion,
                nonflat: r.nonflat,
                pole_set: f.poles.clone(),
                seed: cfg.seed,
            }
        }
        CurveFile::C3(x) => {
            let x = C3NullCurve {
                x1: windowed(&x.x1, t)?,
                x2: windowed(&x.x2, t)?,
                x3: windowed(&x.x3, t)?,
                ..x
            };
            let r = check_null_c3(&x);
            ValidateReport {
                picture: "c3".into(),
                unimodular: None,
                null: r.null,
                immersion: r.immersion,
                nonflat: !r.flat,
                pole_set: x.poles.clone(),
                seed: cfg.seed,
            }
        }
    })
}

fn default_point(f: &SL2NullCurve) -> Complex64 {
    f.poles.first().copied().unwrap_or_default()
}

pub fn cmd_classify(input: &Path, at: Option<Complex64>, cfg: &RunConfig) -> Result<EndReport> {
    let f = load_sl2(input, cfg.truncation_order)?;
    let p = at.unwrap_or_else(|| default_point(&f));
    Ok(classify_end(&f, p)?)
}

/// Triangulated surface with one conformal factor per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
    pub metric: Vec<f64>,
    /// Time coordinate per vertex (de Sitter target only).
    pub x0: Option<Vec<f64>>,
}

impl Mesh {
    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let _ = writeln!(s, "v {:.12} {:.12} {:.12}", v[0], v[1], v[2]);
        }
        for f in &self.faces {
            let _ = writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
        }
        s
    }

    pub fn is_degenerate(&self) -> bool {
        let Some(first) = self.vertices.first() else {
            return true;
        };
        self.vertices
            .iter()
            .all(|v| (0..3).all(|k| (v[k] - first[k]).abs() < 1e-12))
    }
}

/// Sidecar written next to the OBJ file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshSidecar {
    pub target: Target,
    pub grid: Grid,
    pub center: [f64; 2],
    pub metric: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    pub degenerate: bool,
    pub seed: u64,
}

/// Reads vertices back from OBJ text.
pub fn parse_obj_vertices(text: &str) -> Vec<[f64; 3]> {
    text.lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|rest| {
            let mut it = rest.split_whitespace().map(|t| t.parse::<f64>().unwrap_or(f64::NAN));
            [
                it.next().unwrap_or(f64::NAN),
                it.next().unwrap_or(f64::NAN),
                it.next().unwrap_or(f64::NAN),
            ]
        })
        .collect()
}

/// Largest hyperboloid defect over ball-model vertices, infinite if a vertex
/// leaves the open ball.
pub fn recheck_ball(vertices: &[[f64; 3]]) -> f64 {
    vertices
        .iter()
        .map(|b| {
            if b.iter().map(|x| x * x).sum::<f64>() >= 1.0 {
                f64::INFINITY
            } else {
                ball_hyperboloid_defect(*b)
            }
        })
        .fold(0.0, f64::max)
}

pub fn build_mesh(f: &SL2NullCurve, grid: &Grid, center: Complex64, target: Target, exec: Execution) -> Result<Mesh> {
    grid.validate()?;
    let points = grid.points(center);
    for z in &points {
        if f.poles.iter().any(|p| (p - z).norm() <= 1e-12 * (1.0 + p.norm())) {
            return Err(CliError::PoleOnGrid(*z));
        }
    }
    let flat = omega(f)?.is_zero();
    let metric = if flat { None } else { Some(InducedMetric::new(f)?) };
    let rows = exec.map_slice(&points, |&z| -> Result<([f64; 3], f64, f64)> {
        let a: Mat2 = f.evaluate(z).map_err(|_| CliError::PoleOnGrid(z))?;
        let (v, x0) = match target {
            Target::H3 => {
                let x = project_h3(&a)?;
                (poincare_ball(&x), x.x0)
            }
            Target::S31 => {
                let x = project_s31(&a)?;
                (x.spatial(), x.x0)
            }
        };
        let m = match (&metric, target) {
            (None, _) => 0.0,
            (Some(m), Target::H3) => m.at(z).map_err(|_| CliError::PoleOnGrid(z))?,
            (Some(m), Target::S31) => m.de_sitter_at(z).map_err(|_| CliError::PoleOnGrid(z))?,
        };
        Ok((v, x0, m))
    });
    let rows: Vec<_> = rows.into_iter().collect::<Result<_>>()?;
    Ok(Mesh {
        vertices: rows.iter().map(|r| r.0).collect(),
        faces: grid.faces(),
        metric: rows.iter().map(|r| r.2).collect(),
        x0: (target == Target::S31).then(|| rows.iter().map(|r| r.1).collect()),
    })
}

pub fn cmd_mesh(
    input: &Path,
    target: Target,
    center: Option<Complex64>,
    cfg: &RunConfig,
) -> Result<(Mesh, MeshSidecar)> {
    let f = load_sl2(input, cfg.truncation_order)?;
    let c = center.unwrap_or_else(|| default_point(&f));
    let mesh = build_mesh(&f, &cfg.grid, c, target, cfg.exec())?;
    let sidecar = MeshSidecar {
        target,
        grid: cfg.grid,
        center: [c.re, c.im],
        metric: mesh.metric.clone(),
        x0: mesh.x0.clone(),
        degenerate: mesh.is_degenerate(),
        seed: cfg.seed,
    };
    Ok((mesh, sidecar))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    #[serde(with = "pairs")]
    pub zeta0: Vec<Complex64>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub report: PeriodReport,
}

pub fn cmd_solve(spray: &Path, cycles: &Path, cfg: &RunConfig) -> Result<SolveSummary> {
    let s: SprayFamily = read_json(spray)?;
    let c: Vec<Cycle> = read_json(cycles)?;
    let opts = SolveOptions {
        tol: cfg.tol,
        max_iter: cfg.max_iter,
        max_step: cfg.max_step,
        exec: cfg.exec(),
        ..SolveOptions::default()
    };
    let out = period_solve(&s, &c, opts)?;
    Ok(SolveSummary {
        converged: out.residual < cfg.tol,
        zeta0: out.zeta0,
        residual: out.residual,
        iterations: out.iterations,
        report: out.report,
    })
}

pub fn cmd_endmodel(m: i64, center: Option<Complex64>) -> Result<SL2NullCurve> {
    Ok(end_model(EndModelSpec {
        m,
        center: center.unwrap_or_default(),
    })?)
}

/// Builds the effective configuration for a parsed command line; `seed_env`
/// is the value of `NULLSL2_SEED`, if set.
pub fn resolve_config(cli: &Cli, seed_env: Option<&str>) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(t) = cli.tol {
        cfg.tol = t;
    }
    if let Some(n) = cli.trunc {
        cfg.truncation_order = Some(n);
    }
    if let Some((r, a)) = cli.grid {
        cfg.grid.radial = r;
        cfg.grid.angular = a;
    }
    if let Command::Mesh { inner, outer, .. } = &cli.command {
        if let Some(v) = inner {
            cfg.grid.inner = *v;
        }
        if let Some(v) = outer {
            cfg.grid.outer = *v;
        }
    }
    if let Some(s) = seed_env {
        cfg.seed = s
            .trim()
            .parse()
            .map_err(|_| CliError::Argument(format!("{SEED_ENV} must be an unsigned integer")))?;
    }
    Ok(cfg)
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn std::io::Write) -> Result<()> {
    match out {
        Some(p) => write_text(p, text),
        None => {
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn sidecar_path(obj: &Path) -> PathBuf {
    obj.with_extension("metric.json")
}

/// Runs a parsed command, writing reports to `stdout` (or `--out`) and
/// diagnostics to `stderr`. Returns the exit code.
pub fn execute(
    cli: &Cli,
    seed_env: Option<&str>,
    stdout: &mut dyn std::io::Write,
    stderr: &mut dyn std::io::Write,
) -> i32 {
    match execute_inner(cli, seed_env, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute_inner(
    cli: &Cli,
    seed_env: Option<&str>,
    stdout: &mut dyn std::io::Write,
    stderr: &mut dyn std::io::Write,
) -> Result<i32> {
    let cfg = resolve_config(cli, seed_env)?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Validate { input } => {
            let r = cmd_validate(input, &cfg)?;
            emit(out, &to_json(&r), stdout)?;
            Ok(if r.passed() { 0 } else { 1 })
        }
        Command::Classify { input, at } => {
            let r = cmd_classify(input, *at, &cfg)?;
            emit(out, &to_json(&r), stdout)?;
            Ok(0)
        }
        Command::Mesh {
            input,
            target,
            center,
            ..
        } => {
            let (mesh, sidecar) = cmd_mesh(input, *target, *center, &cfg)?;
            if sidecar.degenerate {
                let _ = writeln!(stderr, "warning: degenerate mesh, all vertices coincide");
            }
            emit(out, &mesh.to_obj(), stdout)?;
            if let Some(p) = out {
                write_text(&sidecar_path(p), &to_json(&sidecar))?;
            }
            Ok(0)
        }
        Command::Solve { spray, cycles } => {
            let r = cmd_solve(spray, cycles, &cfg)?;
            emit(out, &to_json(&r), stdout)?;
            if let Some(p) = out {
                write_text(&p.with_extension("csv"), &r.report.to_csv())?;
            }
            Ok(if r.converged { 0 } else { 1 })
        }
        Command::Endmodel { m, center } => {
            let f = cmd_endmodel(*m, *center)?;
            emit(out, &to_json(&f), stdout)?;
            Ok(0)
        }
    }
}

/// Parses `args` (including the program name) and runs the command, taking
/// the seed override from the process environment.
pub fn run<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let seed = std::env::var(SEED_ENV).ok();
    run_with_env(args, seed.as_deref(), stdout, stderr)
}

/// As [`run`], with an explicit value for `NULLSL2_SEED`.
pub fn run_with_env<I, T>(
    args: I,
    seed_env: Option<&str>,
    stdout: &mut dyn std::io::Write,
    stderr: &mut dyn std::io::Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, seed_env, stdout, stderr),
        Err(e) if e.use_stderr() => {
            let _ = write!(stderr, "{}", e.render());
            2
        }
        Err(e) => {
            let _ = write!(stdout, "{}", e.render());
            0
        }
    }
}
