//! Null curves in `C^3` built from spinor data `(eta, f3)`.
//!
//! The direction field is
//!
//! ```text
//! f1 = (eta - f3^2/eta) / 2,   f2 = -i (eta + f3^2/eta) / 2
//! ```
//!
//! so `f1^2 + f2^2 + f3^2 = 0` holds identically and `eta = f1 + i f2`.
//! The alternate chart uses `eta' = f1 - i f2` instead.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{exact_i, exact_ratio, try_exact_from_c64};
use crate::poly::Poly;
use crate::series::{align_windows, Domain, MeroFunction, SeriesError, ZERO_TOL};
use crate::wire;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinorError {
    #[error("eta is identically zero")]
    EtaIdenticallyZero,
    #[error("f1 + i f2 vanishes identically on this chart")]
    DegenerateEta,
    #[error("component {component} has period ({}, {}) around {cycle}", .period.re, .period.im)]
    NonExactField {
        component: usize,
        cycle: String,
        period: Complex64,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, SpinorError>;

/// Which chart of the null quadric the spinor coordinate lives on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    /// `eta = f1 + i f2`
    #[default]
    Standard,
    /// `eta = f1 - i f2`
    Alternate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinorData {
    pub eta: MeroFunction,
    pub f3: MeroFunction,
}

/// A direction field `f = dX/dz`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionField {
    pub f1: MeroFunction,
    pub f2: MeroFunction,
    pub f3: MeroFunction,
}

impl DirectionField {
    pub fn components(&self) -> [&MeroFunction; 3] {
        [&self.f1, &self.f2, &self.f3]
    }

    /// `f1^2 + f2^2 + f3^2`.
    pub fn quadric(&self) -> std::result::Result<MeroFunction, SeriesError> {
        sum_of_squares(&self.components())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct C3NullCurve {
    #[serde(rename = "X1")]
    pub x1: MeroFunction,
    #[serde(rename = "X2")]
    pub x2: MeroFunction,
    #[serde(rename = "X3")]
    pub x3: MeroFunction,
    #[serde(default, with = "wire::c64_vec")]
    pub poles: Vec<Complex64>,
    #[serde(default, with = "wire::c64_vec", skip_serializing_if = "Vec::is_empty")]
    pub singular: Vec<Complex64>,
}

impl C3NullCurve {
    pub fn new(x1: MeroFunction, x2: MeroFunction, x3: MeroFunction) -> Self {
        let mut poles = Vec::new();
        for x in [&x1, &x2, &x3] {
            merge_points(&mut poles, &x.poles());
        }
        C3NullCurve {
            x1,
            x2,
            x3,
            poles,
            singular: Vec::new(),
        }
    }

    pub fn components(&self) -> [&MeroFunction; 3] {
        [&self.x1, &self.x2, &self.x3]
    }

    pub fn derivative(&self) -> DirectionField {
        DirectionField {
            f1: self.x1.derivative(),
            f2: self.x2.derivative(),
            f3: self.x3.derivative(),
        }
    }

    pub fn evaluate(&self, z: Complex64) -> std::result::Result<[Complex64; 3], SeriesError> {
        Ok([self.x1.evaluate(z)?, self.x2.evaluate(z)?, self.x3.evaluate(z)?])
    }
}

/// Findings of [`check_null_c3`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C3Report {
    pub null: bool,
    pub immersion: bool,
    pub flat: bool,
}

pub(crate) fn merge_points(into: &mut Vec<Complex64>, new: &[Complex64]) {
    for p in new {
        if !into.iter().any(|q| (q - p).norm() <= 1e-9 * (1.0 + p.norm())) {
            into.push(*p);
        }
    }
}

pub(crate) fn sum_of_squares(v: &[&MeroFunction]) -> std::result::Result<MeroFunction, SeriesError> {
    let mut acc = v[0].square()?;
    for f in &v[1..] {
        acc = acc.add(&f.square()?)?;
    }
    Ok(acc)
}

pub fn from_spinor(s: &SpinorData) -> Result<DirectionField> {
    from_spinor_chart(s, Chart::Standard)
}

pub fn from_spinor_chart(s: &SpinorData, chart: Chart) -> Result<DirectionField> {
    if s.eta.is_zero() {
        return Err(SpinorError::EtaIdenticallyZero);
    }
    let ratio = s.f3.square()?.div(&s.eta)?;
    let half = exact_ratio(1, 2);
    let i_half = exact_i() * &half;
    let f1 = s.eta.sub(&ratio)?.scale(&half);
    let sum = s.eta.add(&ratio)?;
    let f2 = match chart {
        Chart::Standard => sum.scale(&-i_half),
        Chart::Alternate => sum.scale(&i_half),
    };
    Ok(DirectionField {
        f1,
        f2,
        f3: s.f3.clone(),
    })
}

pub fn extract_spinor(f: &DirectionField) -> Result<SpinorData> {
    extract_spinor_chart(f, Chart::Standard)
}

pub fn extract_spinor_chart(f: &DirectionField, chart: Chart) -> Result<SpinorData> {
    let i = match chart {
        Chart::Standard => exact_i(),
        Chart::Alternate => -exact_i(),
    };
    let eta = f.f1.add(&f.f2.scale(&i))?;
    if eta.is_zero() {
        return Err(SpinorError::DegenerateEta);
    }
    Ok(SpinorData {
        eta,
        f3: f.f3.clone(),
    })
}

/// True when the projectivized vector `[v_1 : ... : v_n]` is constant, i.e.
/// the curve with derivative `v` lies in an affine complex line.
///
/// Rational input: all Wronskians `v_i v_j' - v_j v_i'` vanish exactly.
/// Windows: every coefficient row is parallel to the leading row.
pub(crate) fn projectively_constant(v: &[&MeroFunction]) -> bool {
    match align_windows(v) {
        Ok(None) => {
            let d: Vec<MeroFunction> = v.iter().map(|f| f.derivative()).collect();
            for i in 0..v.len() {
                for j in i + 1..v.len() {
                    let w = v[i]
                        .mul(&d[j])
                        .and_then(|a| Ok(a.sub(&v[j].mul(&d[i])?)?));
                    match w {
                        Ok(w) if w.is_zero() => {}
                        _ => return false,
                    }
                }
            }
            true
        }
        Ok(Some((ws, _, _))) => {
            let lo = ws.iter().map(|w| w.min_exp()).min().unwrap_or(0);
            let hi = ws.iter().map(|w| w.truncation_order()).min().unwrap_or(0);
            let rows: Vec<Vec<Complex64>> = (lo..hi)
                .map(|k| ws.iter().map(|w| w.coeff(k).unwrap_or_default()).collect())
                .collect();
            let Some(lead) = rows
                .iter()
                .find(|r| r.iter().any(|c| c.norm() > ZERO_TOL))
            else {
                return true;
            };
            let scale = lead.iter().map(|c| c.norm()).fold(0.0, f64::max);
            rows.iter().all(|r| {
                (0..r.len()).all(|a| {
                    (a + 1..r.len())
                        .all(|b| (lead[a] * r[b] - lead[b] * r[a]).norm() <= ZERO_TOL * scale.max(1.0))
                })
            })
        }
        Err(_) => false,
    }
}

/// True when the functions `v` have no common zero outside `excluded`.
///
/// Rational input is decided exactly through the gcd of the numerators.
/// Windows are checked at the base point (germs) or on the reference
/// circle (annuli).
pub(crate) fn no_common_zero(v: &[&MeroFunction], excluded: &[Complex64]) -> bool {
    if v.iter().all(|f| f.is_zero()) {
        return false;
    }
    let is_excluded =
        |p: Complex64| excluded.iter().any(|q| (q - p).norm() <= 1e-9 * (1.0 + p.norm()));
    match align_windows(v) {
        Ok(None) => {
            let mut g = Poly::zero();
            for f in v {
                let r = f.as_rational().unwrap();
                g = Poly::gcd(&g, r.num());
            }
            g.roots().into_iter().all(|(z, _)| is_excluded(z))
        }
        Ok(Some((ws, base, domain))) => {
            if let Domain::Annulus { inner, outer } = domain {
                let r = (inner * outer).sqrt();
                (0..256).all(|j| {
                    let z = base + Complex64::from_polar(r, 2.0 * PI * j as f64 / 256.0);
                    v.iter()
                        .filter_map(|f| f.evaluate(z).ok())
                        .any(|x| x.norm() > ZERO_TOL)
                })
            } else {
                if is_excluded(base) {
                    return true;
                }
                let lead = ws.iter().filter_map(|w| w.leading(ZERO_TOL)).map(|(k, _)| k).min();
                matches!(lead, Some(k) if k <= 0)
            }
        }
        Err(_) => false,
    }
}

pub fn check_null_c3(x: &C3NullCurve) -> C3Report {
    let d = x.derivative();
    let null = d.quadric().map(|q| q.is_zero()).unwrap_or(false);
    let mut excluded = x.poles.clone();
    merge_points(&mut excluded, &x.singular);
    let comps = d.components();
    C3Report {
        null,
        immersion: no_common_zero(&comps, &excluded),
        flat: projectively_constant(&comps),
    }
}

/// Integrates `f dz` from `base`, with `X(base) = value`.
pub fn integrate_null(f: &DirectionField, base: Complex64, value: [Complex64; 3]) -> Result<C3NullCurve> {
    let mut xs = Vec::with_capacity(3);
    for (idx, c) in f.components().into_iter().enumerate() {
        let a = match c.antiderivative() {
            Ok(a) => a,
            Err(SeriesError::NonExact(_)) => return Err(obstruction(idx + 1, c)),
            Err(e) => return Err(e.into()),
        };
        // exact data stays exact: dyadic base points and values convert losslessly
        let shift = match (try_exact_from_c64(base), try_exact_from_c64(value[idx])) {
            (Some(b), Some(v)) if a.is_rational() => {
                MeroFunction::constant(v - a.evaluate_exact(&b).unwrap()?)
            }
            _ => MeroFunction::constant_c64(value[idx] - a.evaluate(base)?),
        };
        xs.push(a.add(&shift)?);
    }
    let x3 = xs.pop().unwrap();
    let x2 = xs.pop().unwrap();
    let x1 = xs.pop().unwrap();
    Ok(C3NullCurve::new(x1, x2, x3))
}

fn obstruction(component: usize, f: &MeroFunction) -> SpinorError {
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    if f.is_rational() {
        for p in f.poles() {
            if let Ok(r) = f.residue(p) {
                if r.norm() > ZERO_TOL {
                    return SpinorError::NonExactField {
                        component,
                        cycle: format!("small circle about ({}, {})", p.re, p.im),
                        period: two_pi_i * r,
                    };
                }
            }
        }
    }
    let r = f
        .as_laurent()
        .and_then(|w| w.coeff(-1))
        .unwrap_or_default();
    SpinorError::NonExactField {
        component,
        cycle: "reference circle".into(),
        period: two_pi_i * r,
    }
}
