//! Periods of direction fields over closed cycles, a parametric spray of
//! spinor data, and a Newton solver that kills periods.
//!
//! The spray multiplies `eta` by `exp(sum zeta_i h_i)` and keeps `f3`. Every
//! member stays null, and `f3` keeps its (zero) periods, so only the `f1`
//! and `f2` periods have to be driven to zero.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::series::{Domain, MeroFunction, SeriesError};
use crate::spinor::{from_spinor, DirectionField, SpinorData, SpinorError};
use crate::wire;

/// Relative agreement required between quadrature and residue sums.
pub const CROSS_CHECK_TOL: f64 = 1e-8;

/// Largest admissible condition number of the period Jacobian.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PeriodError {
    #[error("pole on the contour near ({}, {})", .0.re, .0.im)]
    PoleOnContour(Complex64),
    #[error("quadrature gives ({}, {}) but residues give ({}, {})", .quadrature.re, .quadrature.im, .residues.re, .residues.im)]
    CrossCheckFailed {
        quadrature: Complex64,
        residues: Complex64,
    },
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("period Jacobian is singular (condition number {0:.3e})")]
    SingularJacobian(f64),
    #[error("no convergence in {iterations} iterations (best residual {residual:.3e})")]
    MaxIterExceeded {
        iterations: usize,
        residual: f64,
        best: Vec<Complex64>,
    },
    #[error("f3 has nonzero periods (max {0:.3e}); the spray cannot remove them")]
    F3NotExact(f64),
    #[error(transparent)]
    Spinor(#[from] SpinorError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, PeriodError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Equally spaced nodes on a circle.
    Trapezoid,
    /// Gauss–Legendre nodes on every polyline segment.
    GaussLegendre,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub nodes: usize,
    pub rule: Rule,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CycleKind {
    Circle {
        #[serde(with = "wire::c64")]
        center: Complex64,
        radius: f64,
    },
    /// Closed polygon; the last point connects back to the first.
    Polyline {
        #[serde(with = "wire::c64_vec")]
        points: Vec<Complex64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cycle {
    #[serde(flatten)]
    pub kind: CycleKind,
    #[serde(default = "default_orientation")]
    pub orientation: i8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<Quadrature>,
}

fn default_orientation() -> i8 {
    1
}

impl Cycle {
    pub fn circle(center: Complex64, radius: f64) -> Self {
        Cycle {
            kind: CycleKind::Circle { center, radius },
            orientation: 1,
            quadrature: None,
        }
    }

    pub fn polyline(points: Vec<Complex64>) -> Self {
        Cycle {
            kind: CycleKind::Polyline { points },
            orientation: 1,
            quadrature: None,
        }
    }

    pub fn reversed(mut self) -> Self {
        self.orientation = -self.orientation;
        self
    }

    pub fn with_quadrature(mut self, q: Quadrature) -> Self {
        self.quadrature = Some(q);
        self
    }

    /// Quadrature in effect: 512 trapezoid nodes on circles, 16
    /// Gauss–Legendre nodes per polyline segment.
    pub fn effective_quadrature(&self) -> Quadrature {
        self.quadrature.unwrap_or(match self.kind {
            CycleKind::Circle { .. } => Quadrature {
                nodes: 512,
                rule: Rule::Trapezoid,
            },
            CycleKind::Polyline { .. } => Quadrature {
                nodes: 16,
                rule: Rule::GaussLegendre,
            },
        })
    }

    fn validate(&self) -> Result<()> {
        if self.orientation != 1 && self.orientation != -1 {
            return Err(PeriodError::InvalidCycle("orientation must be +1 or -1".into()));
        }
        if self.effective_quadrature().nodes == 0 {
            return Err(PeriodError::InvalidCycle("quadrature needs nodes".into()));
        }
        match &self.kind {
            CycleKind::Circle { center, radius } => {
                if !(*radius > 0.0 && radius.is_finite() && center.is_finite()) {
                    return Err(PeriodError::InvalidCycle("radius must be positive".into()));
                }
            }
            CycleKind::Polyline { points } => {
                if points.len() < 3 {
                    return Err(PeriodError::InvalidCycle(
                        "polyline needs at least three points".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Nodes `z_j` and weights `w_j` with `sum f(z_j) w_j ~ int f dz`.
    pub fn nodes_and_weights(&self) -> Result<Vec<(Complex64, Complex64)>> {
        self.validate()?;
        let q = self.effective_quadrature();
        let sign = self.orientation as f64;
        let mut out = Vec::new();
        match &self.kind {
            CycleKind::Circle { center, radius } => match q.rule {
                Rule::Trapezoid => {
                    let n = q.nodes;
                    for j in 0..n {
                        let t = 2.0 * PI * j as f64 / n as f64;
                        let u = Complex64::from_polar(*radius, t);
                        out.push((center + u, Complex64::i() * u * (2.0 * PI * sign / n as f64)));
                    }
                }
                Rule::GaussLegendre => {
                    let gl = gauss_legendre(q.nodes);
                    for &(x, w) in gl.as_node_weight_pairs() {
                        let t = PI * (x + 1.0);
                        let u = Complex64::from_polar(*radius, t);
                        out.push((center + u, Complex64::i() * u * (PI * w * sign)));
                    }
                }
            },
            CycleKind::Polyline { points } => {
                let gl = gauss_legendre(q.nodes);
                let n = points.len();
                for k in 0..n {
                    let (a, b) = (points[k], points[(k + 1) % n]);
                    let half = (b - a) * 0.5;
                    let mid = (a + b) * 0.5;
                    match q.rule {
                        Rule::GaussLegendre => {
                            for &(x, w) in gl.as_node_weight_pairs() {
                                out.push((mid + half * x, half * (w * sign)));
                            }
                        }
                        Rule::Trapezoid => {
                            let m = q.nodes;
                            for j in 0..=m {
                                let t = j as f64 / m as f64;
                                let w = if j == 0 || j == m { 0.5 } else { 1.0 };
                                out.push((a + (b - a) * t, (b - a) * (w * sign / m as f64)));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Winding number of the cycle about `p` (including orientation).
    pub fn winding_number(&self, p: Complex64) -> i32 {
        let w = match &self.kind {
            CycleKind::Circle { center, radius } => i32::from((p - center).norm() < *radius),
            CycleKind::Polyline { points } => {
                let n = points.len();
                let total: f64 = (0..n)
                    .map(|k| ((points[(k + 1) % n] - p) / (points[k] - p)).arg())
                    .sum();
                (total / (2.0 * PI)).round() as i32
            }
        };
        w * self.orientation as i32
    }

    /// Distance from `p` to the contour.
    pub fn distance(&self, p: Complex64) -> f64 {
        match &self.kind {
            CycleKind::Circle { center, radius } => ((p - center).norm() - radius).abs(),
            CycleKind::Polyline { points } => {
                let n = points.len();
                (0..n)
                    .map(|k| {
                        let (a, b) = (points[k], points[(k + 1) % n]);
                        let d = b - a;
                        let t = if d.norm_sqr() == 0.0 {
                            0.0
                        } else {
                            (((p - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0)
                        };
                        (a + d * t - p).norm()
                    })
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

fn gauss_legendre(n: usize) -> GaussLegendre {
    GaussLegendre::new(NonZeroUsize::new(n.max(1)).unwrap())
}

/// `int_c f dz` by quadrature. For rational `f` the result is checked
/// against `2 pi i` times the enclosed residues.
pub fn period(f: &MeroFunction, c: &Cycle) -> Result<Complex64> {
    let nodes = c.nodes_and_weights()?;
    let poles = f.poles();
    for p in &poles {
        if c.distance(*p) <= 1e-9 * (1.0 + p.norm()) {
            return Err(PeriodError::PoleOnContour(*p));
        }
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (z, w) in &nodes {
        let v = f.evaluate(*z).map_err(|_| PeriodError::PoleOnContour(*z))?;
        sum += v * w;
    }
    if f.is_rational() {
        let mut expected = Complex64::new(0.0, 0.0);
        for p in &poles {
            let k = c.winding_number(*p);
            if k != 0 {
                expected += f.residue(*p)? * k as f64;
            }
        }
        expected *= Complex64::new(0.0, 2.0 * PI);
        if (sum - expected).norm() > CROSS_CHECK_TOL * sum.norm().max(1.0) {
            return Err(PeriodError::CrossCheckFailed {
                quadrature: sum,
                residues: expected,
            });
        }
    }
    Ok(sum)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    /// `(int f1 dz, int f2 dz, int f3 dz)` for each cycle.
    #[serde(with = "triples")]
    pub periods: Vec<[Complex64; 3]>,
    pub max_norm: f64,
}

mod triples {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[[Complex64; 3]], s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<[[f64; 2]; 3]> = v.iter().map(|t| t.map(wire::to_pair)).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<[Complex64; 3]>, D::Error> {
        let rows = Vec::<[[f64; 2]; 3]>::deserialize(d)?;
        Ok(rows.into_iter().map(|t| t.map(wire::from_pair)).collect())
    }
}

impl PeriodReport {
    pub fn from_periods(periods: Vec<[Complex64; 3]>) -> Self {
        let max_norm = periods
            .iter()
            .flat_map(|t| t.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        PeriodReport { periods, max_norm }
    }

    pub fn is_exact(&self, tol: f64) -> bool {
        self.max_norm < tol
    }

    /// One line per cycle: `cycle,re1,im1,re2,im2,re3,im3`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cycle,re1,im1,re2,im2,re3,im3\n");
        for (j, t) in self.periods.iter().enumerate() {
            out.push_str(&format!(
                "{j},{},{},{},{},{},{}\n",
                t[0].re, t[0].im, t[1].re, t[1].im, t[2].re, t[2].im
            ));
        }
        out
    }
}

pub fn period_map(f: &DirectionField, cycles: &[Cycle], exec: Execution) -> Result<PeriodReport> {
    let rows = exec.map_slice(cycles, |c| -> Result<[Complex64; 3]> {
        Ok([period(&f.f1, c)?, period(&f.f2, c)?, period(&f.f3, c)?])
    });
    Ok(PeriodReport::from_periods(rows.into_iter().collect::<Result<_>>()?))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SprayMode {
    #[default]
    EtaOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SprayFamily {
    pub base: SpinorData,
    pub multiplier_basis: Vec<MeroFunction>,
    #[serde(default)]
    pub mode: SprayMode,
    /// Domain on which `exp(sum zeta_i h_i)` is expanded. Leave as the plane
    /// only when every multiplier is constant.
    #[serde(default = "plane")]
    pub domain: Domain,
}

fn plane() -> Domain {
    Domain::Plane
}

/// `(eta exp(sum zeta_i h_i), f3)`; `zeta = 0` returns the base unchanged.
pub fn spray_apply(s: &SprayFamily, zeta: &[Complex64]) -> Result<SpinorData> {
    assert_eq!(zeta.len(), s.multiplier_basis.len(), "one parameter per multiplier");
    if zeta.iter().all(|z| z.norm() == 0.0) {
        return Ok(s.base.clone());
    }
    let mut exponent = MeroFunction::zero();
    for (h, z) in s.multiplier_basis.iter().zip(zeta) {
        exponent = exponent.add(&h.scale_c64(*z))?;
    }
    if s.domain != Domain::Plane && !exponent.is_constant() {
        exponent = exponent.with_domain(s.domain);
    }
    let factor = exponent.exp()?;
    Ok(SpinorData {
        eta: s.base.eta.mul(&factor)?,
        f3: s.base.f3.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub fd_step: f64,
    /// Upper bound on the Euclidean length of a single Newton step.
    pub max_step: Option<f64>,
    pub exec: Execution,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-10,
            max_iter: 20,
            fd_step: 1e-6,
            max_step: None,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome {
    #[serde(with = "wire::c64_vec")]
    pub zeta0: Vec<Complex64>,
    pub report: PeriodReport,
    pub residual: f64,
    pub iterations: usize,
    /// Residual at the start of every iteration, ending with the final one.
    pub history: Vec<f64>,
}

fn evaluate_spray(s: &SprayFamily, zeta: &[Complex64], cycles: &[Cycle], exec: Execution) -> Result<PeriodReport> {
    let f = from_spinor(&spray_apply(s, zeta)?)?;
    period_map(&f, cycles, exec)
}

/// Residual vector: real and imaginary parts of the `f1`, `f2` periods.
fn residual_vector(r: &PeriodReport) -> DVector<f64> {
    DVector::from_iterator(
        4 * r.periods.len(),
        r.periods
            .iter()
            .flat_map(|t| [t[0].re, t[0].im, t[1].re, t[1].im]),
    )
}

fn f12_norm(r: &PeriodReport) -> f64 {
    r.periods
        .iter()
        .flat_map(|t| [t[0].norm(), t[1].norm()])
        .fold(0.0, f64::max)
}

fn perturbed(zeta: &[Complex64], idx: usize, h: f64) -> Vec<Complex64> {
    let mut z = zeta.to_vec();
    let d = if idx % 2 == 0 {
        Complex64::new(h, 0.0)
    } else {
        Complex64::new(0.0, h)
    };
    z[idx / 2] += d;
    z
}

/// Damped Gauss–Newton on the real and imaginary parts of `zeta`, driving
/// the `f1` and `f2` periods to zero. The Jacobian comes from central
/// differences; steps are halved up to 8 times while the residual grows.
pub fn period_solve(s: &SprayFamily, cycles: &[Cycle], opts: SolveOptions) -> Result<SolveOutcome> {
    let m = s.multiplier_basis.len();
    let mut zeta = vec![Complex64::new(0.0, 0.0); m];
    let mut report = evaluate_spray(s, &zeta, cycles, opts.exec)?;
    let f3_max = report.periods.iter().map(|t| t[2].norm()).fold(0.0, f64::max);
    if f3_max >= opts.tol.max(1e-10) {
        return Err(PeriodError::F3NotExact(f3_max));
    }
    let mut history = Vec::new();
    let mut best = (zeta.clone(), f64::INFINITY);
    for iteration in 1..=opts.max_iter {
        let res = f12_norm(&report);
        history.push(res);
        if res < best.1 {
            best = (zeta.clone(), res);
        }
        if res < opts.tol {
            return Ok(SolveOutcome {
                zeta0: zeta,
                residual: report.max_norm,
                report,
                iterations: iteration,
                history,
            });
        }
        let h = opts.fd_step;
        let columns = opts.exec.map_range(2 * m, |j| -> Result<DVector<f64>> {
            let plus = evaluate_spray(s, &perturbed(&zeta, j, h), cycles, Execution::Sequential)?;
            let minus = evaluate_spray(s, &perturbed(&zeta, j, -h), cycles, Execution::Sequential)?;
            Ok((residual_vector(&plus) - residual_vector(&minus)) / (2.0 * h))
        });
        let columns: Vec<DVector<f64>> = columns.into_iter().collect::<Result<_>>()?;
        let jac = DMatrix::from_columns(&columns);
        let svd = jac.clone().svd(true, true);
        let r = residual_vector(&report);
        // Differences below this level are rounding noise, not signal.
        let noise = 1e3 * f64::EPSILON * r.amax().max(1.0) / h;
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        let cond = if smin > noise { smax / smin } else { f64::INFINITY };
        if !(cond <= MAX_CONDITION) {
            return Err(PeriodError::SingularJacobian(cond));
        }
        let mut step = svd
            .solve(&(-r), 0.0)
            .map_err(|_| PeriodError::SingularJacobian(cond))?;
        if let Some(cap) = opts.max_step {
            let len = step.norm();
            if len > cap {
                step *= cap / len;
            }
        }
        let mut scale = 1.0;
        let mut next = None;
        for _ in 0..=8 {
            let trial: Vec<Complex64> = (0..m)
                .map(|i| zeta[i] + Complex64::new(step[2 * i], step[2 * i + 1]) * scale)
                .collect();
            // A trial that leaves the domain of definition counts as a failure.
            if let Ok(rep) = evaluate_spray(s, &trial, cycles, opts.exec) {
                let better = f12_norm(&rep) < res;
                next = Some((trial, rep));
                if better {
                    break;
                }
            }
            scale *= 0.5;
        }
        match next {
            Some((z, rep)) => {
                zeta = z;
                report = rep;
            }
            None => break,
        }
    }
    let res = f12_norm(&report);
    if res < best.1 {
        best = (zeta, res);
    }
    Err(PeriodError::MaxIterExceeded {
        iterations: opts.max_iter,
        residual: best.1,
        best: best.0,
    })
}

/// True when every consecutive pair of residuals with `r_k < threshold`
/// satisfies `r_{k+1} <= c r_k^2` (or `r_{k+1}` is already below `floor`).
pub fn quadratic_tail(history: &[f64], threshold: f64, c: f64, floor: f64) -> bool {
    history
        .windows(2)
        .filter(|w| w[0] < threshold)
        .all(|w| w[1] <= c * w[0] * w[0] || w[1] <= floor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_from_c64, exact_int};
    use crate::poly::Poly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit() -> Cycle {
        Cycle::circle(c(0.0, 0.0), 1.0)
    }

    fn annulus() -> Domain {
        Domain::Annulus {
            inner: 0.5,
            outer: 2.0,
        }
    }

    fn inv_z() -> MeroFunction {
        MeroFunction::monomial(exact_int(1, 0), -1)
    }

    #[test]
    fn simple_periods() {
        let two_pi_i = c(0.0, 2.0 * PI);
        assert!((period(&inv_z(), &unit()).unwrap() - two_pi_i).norm() < 1e-13);
        let zeta = c(0.25, -0.125);
        let f = MeroFunction::rational(Poly::z(), &Poly::z() + &Poly::constant(exact_from_c64(zeta))).unwrap();
        let p = period(&f, &unit()).unwrap();
        assert!((p + two_pi_i * zeta).norm() < 1e-12);
        let d = f.derivative();
        assert!(period(&d, &unit()).unwrap().norm() < 1e-12);
        let square = Cycle::polyline(vec![c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0)]);
        let square = square.with_quadrature(Quadrature {
            nodes: 40,
            rule: Rule::GaussLegendre,
        });
        assert!((period(&inv_z(), &square).unwrap() - two_pi_i).norm() < 1e-12);
        assert!((period(&inv_z(), &square.reversed()).unwrap() + two_pi_i).norm() < 1e-12);
    }

    #[test]
    fn pole_on_contour() {
        let f = MeroFunction::rational(Poly::one(), Poly::linear_root(&exact_int(1, 0))).unwrap();
        assert!(matches!(period(&f, &unit()), Err(PeriodError::PoleOnContour(_))));
    }

    #[test]
    fn period_map_examples() {
        let entire = from_spinor(&SpinorData {
            eta: MeroFunction::constant(exact_int(2, 0)),
            f3: MeroFunction::zero(),
        })
        .unwrap();
        let r = period_map(&entire, &[unit()], Execution::Sequential).unwrap();
        assert!(r.is_exact(1e-14));
        // eta = 1 + zeta/z, f3 = 1
        let zeta = 0.2;
        let eta = MeroFunction::one()
            .add(&inv_z().scale_c64(c(zeta, 0.0)))
            .unwrap();
        let f = from_spinor(&SpinorData {
            eta,
            f3: MeroFunction::one(),
        })
        .unwrap();
        let r = period_map(&f, &[unit()], Execution::Parallel).unwrap();
        assert!((r.periods[0][0] - c(0.0, 2.0 * PI * zeta)).norm() < 1e-12);
        assert!(r.periods[0][1].norm() < 1e-12 && r.periods[0][2].norm() < 1e-12);
    }

    fn toy() -> SprayFamily {
        let eta = MeroFunction::one()
            .add(&inv_z().scale_c64(c(0.3, 0.0)))
            .unwrap()
            .with_domain(annulus());
        SprayFamily {
            base: SpinorData {
                eta,
                f3: MeroFunction::one(),
            },
            multiplier_basis: vec![inv_z()],
            mode: SprayMode::EtaOnly,
            domain: annulus(),
        }
    }

    #[test]
    fn spray_core_and_sign_flip() {
        let s = toy();
        assert_eq!(spray_apply(&s, &[c(0.0, 0.0)]).unwrap(), s.base);
        let flip = SprayFamily {
            multiplier_basis: vec![MeroFunction::one()],
            domain: Domain::Plane,
            ..toy()
        };
        let out = spray_apply(&flip, &[c(0.0, PI)]).unwrap();
        let z = c(0.7, 0.2);
        let a = out.eta.evaluate(z).unwrap();
        let b = flip.base.eta.evaluate(z).unwrap();
        assert!((a + b).norm() < 1e-14);
    }

    #[test]
    fn spray_members_are_null() {
        let s = toy();
        let p = spray_apply(&s, &[c(0.1, -0.05)]).unwrap();
        let f = from_spinor(&p).unwrap();
        assert!(f.quadric().unwrap().is_zero());
    }

    #[test]
    fn toy_solve() {
        let out = period_solve(&toy(), &[unit()], SolveOptions::default()).unwrap();
        assert!(out.residual < 1e-10, "{out:?}");
        assert!((out.zeta0[0] - c(-0.3, 0.0)).norm() < 1e-9);
        assert!(quadratic_tail(&out.history, 1e-2, 10.0, 1e-12));
    }

    #[test]
    fn exact_base_needs_no_step() {
        let s = SprayFamily {
            base: SpinorData {
                eta: MeroFunction::one().add(&MeroFunction::z()).unwrap(),
                f3: MeroFunction::z(),
            },
            multiplier_basis: vec![MeroFunction::z()],
            mode: SprayMode::EtaOnly,
            domain: Domain::Disk { radius: 2.0 },
        };
        let out = period_solve(&s, &[unit().with_quadrature(Quadrature { nodes: 64, rule: Rule::Trapezoid })], SolveOptions::default());
        // eta = 1 + z vanishes at -1, on the contour; use a smaller circle
        assert!(out.is_err());
        let small = Cycle::circle(c(0.0, 0.0), 0.5);
        let out = period_solve(&s, &[small], SolveOptions::default()).unwrap();
        assert_eq!(out.iterations, 1);
        assert_eq!(out.zeta0, vec![c(0.0, 0.0)]);
    }

    #[test]
    fn orthogonal_basis_is_singular() {
        let s = SprayFamily {
            base: SpinorData {
                eta: inv_z().with_domain(annulus()),
                f3: MeroFunction::zero(),
            },
            multiplier_basis: vec![MeroFunction::z()],
            mode: SprayMode::EtaOnly,
            domain: annulus(),
        };
        let out = period_solve(&s, &[unit()], SolveOptions::default());
        assert!(matches!(out, Err(PeriodError::SingularJacobian(_))), "{out:?}");
    }
}
