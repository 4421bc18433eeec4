//! Gauss maps, the form `omega`, the Hopf differential and end analysis for
//! the CMC-1 surfaces represented by null curves in `SL2(C)`.
//!
//! With `F = [[F1, F2], [F3, F4]]` and primes for `d/dz`:
//!
//! ```text
//! G = F1'/F3' = F2'/F4'       g = -F2'/F1' = -F4'/F3'
//! omega = F1 F3' - F3 F1'     Q = omega g'
//! ```
//!
//! At an end `p` with `k = ord F1`, `l = ord (F3/F1)'` the multiplicity is
//! `m = |l + 1|`, and `ord omega = l + 2k`, `q_-2 = -k(k + 1 + l)`,
//! `m^2 = (ord omega + 1)^2 + 4 q_-2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{MeroFunction, SeriesError};
use crate::sl2curve::{aux_rotations, SL2NullCurve};
use crate::wire;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantError {
    #[error("both defining denominators vanish identically")]
    DegenerateDenominator,
    #[error("the two quotients defining the Gauss map differ; input is not null")]
    GaussMapMismatch,
    #[error("the two computations of the Hopf differential disagree")]
    HopfMismatch,
    #[error("curve extends holomorphically at ({}, {})", .0.re, .0.im)]
    NotAnEnd(Complex64),
    #[error("Hopf differential vanishes identically")]
    UmbilicInput,
    #[error("secondary Gauss map has a pole of order {0} at the end")]
    HypothesisViolation(i32),
    #[error("multiplicity formulas disagree: |l+1| = {from_l}, other formula gives {other}")]
    MultiplicityMismatch { from_l: i64, other: f64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, InvariantError>;

fn quotient_pair(
    a: &MeroFunction,
    b: &MeroFunction,
    c: &MeroFunction,
    d: &MeroFunction,
) -> Result<MeroFunction> {
    let first = (!b.is_zero()).then(|| a.div(b)).transpose()?;
    let second = (!d.is_zero()).then(|| c.div(d)).transpose()?;
    match (first, second) {
        (None, None) => Err(InvariantError::DegenerateDenominator),
        (Some(q), None) | (None, Some(q)) => Ok(q),
        (Some(q1), Some(q2)) => {
            if q1.sub(&q2)?.is_zero() {
                Ok(q1)
            } else {
                Err(InvariantError::GaussMapMismatch)
            }
        }
    }
}

/// `G = F1'/F3'`, cross-checked against `F2'/F4'`.
pub fn hyperbolic_gauss(f: &SL2NullCurve) -> Result<MeroFunction> {
    let [d1, d2, d3, d4] = f.derivative_slots();
    quotient_pair(&d1, &d3, &d2, &d4)
}

/// `g = -F2'/F1'`, cross-checked against `-F4'/F3'`.
pub fn secondary_gauss(f: &SL2NullCurve) -> Result<MeroFunction> {
    let [d1, d2, d3, d4] = f.derivative_slots();
    Ok(quotient_pair(&d2, &d1, &d4, &d3)?.neg())
}

/// `omega / dz = F1 F3' - F3 F1'`.
pub fn omega(f: &SL2NullCurve) -> Result<MeroFunction> {
    Ok(f.f1.mul(&f.f3.derivative())?.sub(&f.f3.mul(&f.f1.derivative())?)?)
}

/// `Q / dz^2`, computed as `omega g'` and, when `F1` and `omega` are not
/// identically zero, also as
/// `F1''/F1 - (F1'/F1) (F3'' F1 - F3 F1'') / (F3' F1 - F3 F1')`.
pub fn hopf(f: &SL2NullCurve) -> Result<MeroFunction> {
    let w = omega(f)?;
    let g = secondary_gauss(f)?;
    let q = w.mul(&g.derivative())?;
    if f.f1.is_zero() || w.is_zero() {
        return Ok(q);
    }
    let d1 = f.f1.derivative();
    let dd1 = d1.derivative();
    let dd3 = f.f3.derivative().derivative();
    let ratio = dd3.mul(&f.f1)?.sub(&f.f3.mul(&dd1)?)?.div(&w)?;
    let alt = dd1.div(&f.f1)?.sub(&d1.div(&f.f1)?.mul(&ratio)?)?;
    if q.sub(&alt)?.is_zero() {
        Ok(q)
    } else {
        Err(InvariantError::HopfMismatch)
    }
}

/// `F' F^{-1}` with the inverse taken as the adjugate `[[F4, -F2], [-F3, F1]]`.
pub fn maurer_cartan(f: &SL2NullCurve) -> Result<[MeroFunction; 4]> {
    let [d1, d2, d3, d4] = f.derivative_slots();
    let cross = |a: &MeroFunction, b: &MeroFunction, c: &MeroFunction, d: &MeroFunction| {
        a.mul(b).and_then(|x| x.sub(&c.mul(d)?))
    };
    Ok([
        cross(&d1, &f.f4, &d2, &f.f3)?,
        cross(&d2, &f.f1, &d1, &f.f2)?,
        cross(&d3, &f.f4, &d4, &f.f3)?,
        cross(&d4, &f.f1, &d3, &f.f2)?,
    ])
}

/// Smallest order at `p` among the slots that are not identically zero.
pub fn min_slot_ord(slots: &[&MeroFunction], p: Complex64) -> Result<i32> {
    let mut best: Option<i32> = None;
    for s in slots {
        if s.is_zero() {
            continue;
        }
        let k = s.ord(p)?;
        best = Some(best.map_or(k, |b| b.min(k)));
    }
    best.ok_or(InvariantError::Series(SeriesError::IdenticallyZero))
}

/// `F` or one of its [`aux_rotations`], chosen so that `F1` carries the
/// smallest order at `p`.
pub fn normalize_at(f: &SL2NullCurve, p: Complex64) -> Result<SL2NullCurve> {
    let target = min_slot_ord(&f.slots(), p)?;
    if !f.f1.is_zero() && f.f1.ord(p)? == target {
        return Ok(f.clone());
    }
    for r in aux_rotations(f) {
        if !r.f1.is_zero() && r.f1.ord(p)? == target {
            return Ok(r);
        }
    }
    unreachable!("every slot appears at position 1 in some rotation")
}

/// Order data of an end, read off without normalization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndInvariants {
    pub k: i32,
    pub l: i32,
    pub ord_omega: i32,
    #[serde(with = "wire::c64")]
    pub q_hat_minus2: Complex64,
}

impl EndInvariants {
    /// `ord omega == l + 2k`
    pub fn omega_identity(&self) -> bool {
        self.ord_omega == self.l + 2 * self.k
    }

    /// `q_-2 == -k(k + 1 + l)`
    pub fn hopf_identity(&self, tol: f64) -> bool {
        let expect = -(self.k as f64) * (self.k + 1 + self.l) as f64;
        (self.q_hat_minus2 - expect).norm() <= tol
    }

    pub fn multiplicity_from_l(&self) -> i64 {
        (self.l as i64 + 1).abs()
    }

    /// `sqrt((ord omega + 1)^2 + 4 q_-2)`, from the real part of `q_-2`.
    pub fn multiplicity_from_hopf(&self) -> f64 {
        let s = ((self.ord_omega + 1) as f64).powi(2) + 4.0 * self.q_hat_minus2.re;
        s.max(0.0).sqrt()
    }
}

pub fn end_invariants(f: &SL2NullCurve, p: Complex64) -> Result<EndInvariants> {
    let k = f.f1.ord(p)?;
    let l = f.f3.div(&f.f1)?.derivative().ord(p)?;
    let ord_omega = omega(f)?.ord(p)?;
    let q = hopf(f)?;
    let q_hat_minus2 = q.laurent_coefficients(p, -2, -2)?[0];
    Ok(EndInvariants {
        k,
        l,
        ord_omega,
        q_hat_minus2,
    })
}

/// `|ord F3 - ord F1|` at `p`, or `None` when the two orders coincide (a
/// shear can align them, and then the difference says nothing).
pub fn multiplicity_from_orders(f: &SL2NullCurve, p: Complex64) -> Result<Option<i64>> {
    let a = f.f1.ord(p)?;
    let b = f.f3.ord(p)?;
    Ok((a != b).then(|| (b as i64 - a as i64).abs()))
}

fn check_is_end(f: &SL2NullCurve, p: Complex64) -> Result<()> {
    if min_slot_ord(&f.slots(), p)? >= 0 {
        return Err(InvariantError::NotAnEnd(p));
    }
    Ok(())
}

/// Multiplicity `|l + 1|` of the end at `p`, after normalizing with
/// [`normalize_at`]. The Hopf formula must agree, and so must
/// `|ord F3 - ord F1|` whenever those orders differ.
pub fn end_multiplicity(f: &SL2NullCurve, p: Complex64) -> Result<u32> {
    check_is_end(f, p)?;
    if hopf(f)?.is_zero() {
        return Err(InvariantError::UmbilicInput);
    }
    let n = normalize_at(f, p)?;
    let inv = end_invariants(&n, p)?;
    let m = inv.multiplicity_from_l();
    let from_hopf = inv.multiplicity_from_hopf();
    if (from_hopf - m as f64).abs() > 1e-6 {
        return Err(InvariantError::MultiplicityMismatch {
            from_l: m,
            other: from_hopf,
        });
    }
    if let Some(d) = multiplicity_from_orders(&n, p)? {
        if d != m {
            return Err(InvariantError::MultiplicityMismatch {
                from_l: m,
                other: d as f64,
            });
        }
    }
    Ok(m as u32)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndReport {
    #[serde(with = "wire::c64")]
    pub center: Complex64,
    pub k: i32,
    pub l: i32,
    pub ord_omega: i32,
    #[serde(with = "wire::c64")]
    pub q_hat_minus2: Complex64,
    pub multiplicity: u32,
    pub regular: bool,
    pub finite_total_curvature: bool,
    pub smooth_candidate: bool,
    pub min_maurer_cartan_ord: i32,
    /// Coefficients of `Q` for exponents `-2..=2`.
    #[serde(with = "wire::c64_vec")]
    pub q_head: Vec<Complex64>,
}

/// Classifies the end at `p`. Orders and Hopf data refer to the curve after
/// [`normalize_at`].
pub fn classify_end(f: &SL2NullCurve, p: Complex64) -> Result<EndReport> {
    check_is_end(f, p)?;
    let g = secondary_gauss(f)?;
    if !g.is_zero() {
        let k = g.ord(p)?;
        if k < 0 {
            return Err(InvariantError::HypothesisViolation(-k));
        }
    }
    let multiplicity = end_multiplicity(f, p)?;
    let n = normalize_at(f, p)?;
    let inv = end_invariants(&n, p)?;
    let mc = maurer_cartan(&n)?;
    let min_maurer_cartan_ord = min_slot_ord(&mc.each_ref(), p)?;
    let q_head = hopf(&n)?.laurent_coefficients(p, -2, 2)?;
    // G is a quotient of meromorphic data, so it extends meromorphically
    let regular = hyperbolic_gauss(&n).is_ok();
    Ok(EndReport {
        center: p,
        k: inv.k,
        l: inv.l,
        ord_omega: inv.ord_omega,
        q_hat_minus2: inv.q_hat_minus2,
        multiplicity,
        regular,
        finite_total_curvature: regular,
        smooth_candidate: multiplicity == 1 && min_maurer_cartan_ord == -2,
        min_maurer_cartan_ord,
        q_head,
    })
}

/// Conformal factor `(1 + |g|^2)^2 |omega|^2` of the induced metric, with
/// `g` and `omega` computed once.
#[derive(Clone, Debug)]
pub struct InducedMetric {
    g: MeroFunction,
    omega: MeroFunction,
}

impl InducedMetric {
    pub fn new(f: &SL2NullCurve) -> Result<Self> {
        Ok(InducedMetric {
            g: secondary_gauss(f)?,
            omega: omega(f)?,
        })
    }

    pub fn at(&self, z: Complex64) -> Result<f64> {
        let g = self.g.evaluate(z)?.norm_sqr();
        let w = self.omega.evaluate(z)?.norm_sqr();
        Ok((1.0 + g).powi(2) * w)
    }

    /// The de Sitter counterpart `(1 - |g|^2)^2 |omega|^2`; it vanishes on
    /// the singular set `|g| = 1`.
    pub fn de_sitter_at(&self, z: Complex64) -> Result<f64> {
        let g = self.g.evaluate(z)?.norm_sqr();
        let w = self.omega.evaluate(z)?.norm_sqr();
        Ok((1.0 - g).powi(2) * w)
    }
}

pub fn induced_metric_factor(f: &SL2NullCurve, z: Complex64) -> Result<f64> {
    InducedMetric::new(f)?.at(z)
}
