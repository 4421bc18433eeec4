//! Null curves in `SL2(C)`, the transforms `T` and `T^{-1}`, shears and the
//! explicit end models.
//!
//! A curve is a matrix `[[F1, F2], [F3, F4]]` of meromorphic functions with
//! `det F = 1` and `det F' = 0`.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{exact_from_c64, exact_i, exact_int, exact_ratio, Exact};
use crate::exec::Execution;
use crate::series::{Domain, MeroFunction, SeriesError};
use crate::spinor::{merge_points, no_common_zero, projectively_constant, C3NullCurve};
use crate::wire;

pub type Mat2 = Matrix2<Complex64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Sl2Error {
    #[error("third coordinate is zero")]
    ThirdCoordinateZero,
    #[error("entry z11 is zero")]
    FirstEntryZero,
    #[error("multiplicity must be at least 1, got {0}")]
    InvalidMultiplicity(i64),
    #[error("no shear parameter found in {draws} draws (best margin {best_margin:.3e} at lambda = ({}, {}))", .best_lambda.re, .best_lambda.im)]
    SearchFailed {
        draws: usize,
        best_lambda: Complex64,
        best_margin: f64,
    },
    #[error("pole on the sampling contour near ({}, {})", .0.re, .0.im)]
    PoleOnContour(Complex64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, Sl2Error>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SL2NullCurve {
    #[serde(rename = "F1")]
    pub f1: MeroFunction,
    #[serde(rename = "F2")]
    pub f2: MeroFunction,
    #[serde(rename = "F3")]
    pub f3: MeroFunction,
    #[serde(rename = "F4")]
    pub f4: MeroFunction,
    #[serde(default, with = "wire::c64_vec")]
    pub poles: Vec<Complex64>,
    #[serde(default, with = "wire::c64_vec")]
    pub singular: Vec<Complex64>,
}

/// Findings of [`check_null_sl2`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2Report {
    pub unimodular: bool,
    pub null: bool,
    pub immersion: bool,
    pub nonflat: bool,
}

impl Sl2Report {
    pub fn all(&self) -> bool {
        self.unimodular && self.null && self.immersion && self.nonflat
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShearKind {
    /// `R1 += lambda R2`
    #[serde(rename = "R1+=R2")]
    Row1PlusRow2,
    /// `R2 += lambda R1`
    #[serde(rename = "R2+=R1")]
    Row2PlusRow1,
    /// `C1 += lambda C2`
    #[serde(rename = "C1+=C2")]
    Col1PlusCol2,
    /// `C2 += lambda C1`
    #[serde(rename = "C2+=C1")]
    Col2PlusCol1,
}

impl ShearKind {
    pub const ALL: [ShearKind; 4] = [
        ShearKind::Row1PlusRow2,
        ShearKind::Row2PlusRow1,
        ShearKind::Col1PlusCol2,
        ShearKind::Col2PlusCol1,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndModelSpec {
    pub m: i64,
    #[serde(with = "wire::c64")]
    pub center: Complex64,
}

impl SL2NullCurve {
    /// Builds a curve and records the poles of its slots.
    pub fn new(f1: MeroFunction, f2: MeroFunction, f3: MeroFunction, f4: MeroFunction) -> Self {
        let mut poles = Vec::new();
        for f in [&f1, &f2, &f3, &f4] {
            merge_points(&mut poles, &f.poles());
        }
        SL2NullCurve {
            f1,
            f2,
            f3,
            f4,
            poles,
            singular: Vec::new(),
        }
    }

    pub fn identity() -> Self {
        Self::new(
            MeroFunction::one(),
            MeroFunction::zero(),
            MeroFunction::zero(),
            MeroFunction::one(),
        )
    }

    pub fn slots(&self) -> [&MeroFunction; 4] {
        [&self.f1, &self.f2, &self.f3, &self.f4]
    }

    fn with_slots(&self, f1: MeroFunction, f2: MeroFunction, f3: MeroFunction, f4: MeroFunction) -> Self {
        SL2NullCurve {
            f1,
            f2,
            f3,
            f4,
            poles: self.poles.clone(),
            singular: self.singular.clone(),
        }
    }

    pub fn det(&self) -> std::result::Result<MeroFunction, SeriesError> {
        self.f1.mul(&self.f4)?.sub(&self.f2.mul(&self.f3)?)
    }

    pub fn derivative_slots(&self) -> [MeroFunction; 4] {
        self.slots().map(|f| f.derivative())
    }

    pub fn det_derivative(&self) -> std::result::Result<MeroFunction, SeriesError> {
        let [d1, d2, d3, d4] = self.derivative_slots();
        d1.mul(&d4)?.sub(&d2.mul(&d3)?)
    }

    pub fn evaluate(&self, z: Complex64) -> std::result::Result<Mat2, SeriesError> {
        Ok(Mat2::new(
            self.f1.evaluate(z)?,
            self.f2.evaluate(z)?,
            self.f3.evaluate(z)?,
            self.f4.evaluate(z)?,
        ))
    }
}

/// Slot-wise max modulus.
pub fn sup_norm(a: &Mat2) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `T(x) = (1/x3) [[1, x1 + i x2], [x1 - i x2, x1^2 + x2^2 + x3^2]]`.
pub fn tee(x: [Complex64; 3]) -> Result<Mat2> {
    let [x1, x2, x3] = x;
    if x3.norm() == 0.0 {
        return Err(Sl2Error::ThirdCoordinateZero);
    }
    let i = Complex64::i();
    Ok(Mat2::new(
        Complex64::new(1.0, 0.0),
        x1 + i * x2,
        x1 - i * x2,
        x1 * x1 + x2 * x2 + x3 * x3,
    ) / x3)
}

/// `T^{-1}(A) = (1/(2 z11)) (z21 + z12, i (z21 - z12), 2)`.
pub fn tee_inv(a: &Mat2) -> Result<[Complex64; 3]> {
    let (z11, z12, z21) = (a[(0, 0)], a[(0, 1)], a[(1, 0)]);
    if z11.norm() == 0.0 {
        return Err(Sl2Error::FirstEntryZero);
    }
    let s = 0.5 / z11;
    Ok([
        (z21 + z12) * s,
        Complex64::i() * (z21 - z12) * s,
        Complex64::new(2.0, 0.0) * s,
    ])
}

/// Lifts `T` to curves. Zeros of `X3` become poles.
pub fn tee_curve(x: &C3NullCurve) -> Result<SL2NullCurve> {
    if x.x3.is_zero() {
        return Err(Sl2Error::ThirdCoordinateZero);
    }
    let i = exact_i();
    let inv = x.x3.recip()?;
    let f1 = inv.clone();
    let f2 = x.x1.add(&x.x2.scale(&i))?.mul(&inv)?;
    let f3 = x.x1.sub(&x.x2.scale(&i))?.mul(&inv)?;
    let f4 = crate::spinor::sum_of_squares(&x.components())?.mul(&inv)?;
    let mut poles = x.poles.clone();
    merge_points(&mut poles, &x.x3.zeros());
    for f in [&f1, &f2, &f3, &f4] {
        merge_points(&mut poles, &f.poles());
    }
    Ok(SL2NullCurve {
        f1,
        f2,
        f3,
        f4,
        poles,
        singular: x.singular.clone(),
    })
}

/// Lifts `T^{-1}` to curves. Zeros of `F1` become poles.
pub fn tee_inv_curve(f: &SL2NullCurve) -> Result<C3NullCurve> {
    if f.f1.is_zero() {
        return Err(Sl2Error::FirstEntryZero);
    }
    let inv2 = f.f1.scale(&exact_int(2, 0)).recip()?;
    let x1 = f.f3.add(&f.f2)?.mul(&inv2)?;
    let x2 = f.f3.sub(&f.f2)?.mul(&inv2)?.scale(&exact_i());
    let x3 = f.f1.recip()?;
    let mut poles = f.poles.clone();
    merge_points(&mut poles, &f.f1.zeros());
    for x in [&x1, &x2, &x3] {
        merge_points(&mut poles, &x.poles());
    }
    Ok(C3NullCurve {
        x1,
        x2,
        x3,
        poles,
        singular: f.singular.clone(),
    })
}

pub fn check_null_sl2(f: &SL2NullCurve) -> Sl2Report {
    let unimodular = f
        .det()
        .and_then(|d| d.sub(&MeroFunction::one()))
        .map(|d| d.is_zero())
        .unwrap_or(false);
    let null = f.det_derivative().map(|d| d.is_zero()).unwrap_or(false);
    let d = f.derivative_slots();
    let refs: Vec<&MeroFunction> = d.iter().collect();
    let mut excluded = f.poles.clone();
    merge_points(&mut excluded, &f.singular);
    Sl2Report {
        unimodular,
        null,
        immersion: no_common_zero(&refs, &excluded),
        nonflat: !projectively_constant(&refs),
    }
}

/// The constant matrix `B` with `shear(F) = B F` (row kinds) or `F B`
/// (column kinds).
pub fn shear_matrix(kind: ShearKind, lambda: Complex64) -> Mat2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match kind {
        ShearKind::Row1PlusRow2 | ShearKind::Col2PlusCol1 => Mat2::new(one, lambda, zero, one),
        ShearKind::Row2PlusRow1 | ShearKind::Col1PlusCol2 => Mat2::new(one, zero, lambda, one),
    }
}

/// Spectral norm of a unipotent shear by `lambda`; the same for its inverse.
pub fn shear_operator_norm(lambda: Complex64) -> f64 {
    let a = lambda.norm();
    0.5 * (a + (a * a + 4.0).sqrt())
}

/// Tolerance on the sheared side matching `tol` on the original side: if
/// `|F(p) - F(q)| < tol` then `|F^l(p) - F^l(q)| < coincidence_tolerance`.
pub fn coincidence_tolerance(lambda: Complex64, tol: f64) -> f64 {
    shear_operator_norm(lambda) * tol
}

pub fn shear(f: &SL2NullCurve, lambda: Complex64, kind: ShearKind) -> Result<SL2NullCurve> {
    let l = exact_from_c64(lambda);
    let plus = |a: &MeroFunction, b: &MeroFunction| a.add(&b.scale(&l));
    Ok(match kind {
        ShearKind::Row1PlusRow2 => f.with_slots(
            plus(&f.f1, &f.f3)?,
            plus(&f.f2, &f.f4)?,
            f.f3.clone(),
            f.f4.clone(),
        ),
        ShearKind::Row2PlusRow1 => f.with_slots(
            f.f1.clone(),
            f.f2.clone(),
            plus(&f.f3, &f.f1)?,
            plus(&f.f4, &f.f2)?,
        ),
        ShearKind::Col1PlusCol2 => f.with_slots(
            plus(&f.f1, &f.f2)?,
            f.f2.clone(),
            plus(&f.f3, &f.f4)?,
            f.f4.clone(),
        ),
        ShearKind::Col2PlusCol1 => f.with_slots(
            f.f1.clone(),
            plus(&f.f2, &f.f1)?,
            f.f3.clone(),
            plus(&f.f4, &f.f3)?,
        ),
    })
}

/// Explicit end of multiplicity `m` at `center`, with `w = z - center`:
///
/// - `m = 1`: `(w^-2, -4w/3, w^-1, -w^2/3)`
/// - `m > 1`: `(1/w, -w^(m+1)/(m+2), -1/(m w^(m+1)), (m+1)^2 w / ((m+1)^2 - 1))`
pub fn end_model(spec: EndModelSpec) -> Result<SL2NullCurve> {
    let m = spec.m;
    if m < 1 {
        return Err(Sl2Error::InvalidMultiplicity(m));
    }
    let c = exact_from_c64(spec.center);
    let mono = |coef: Exact, k: i64| MeroFunction::monomial_at(coef, k as i32, &c);
    let (f1, f2, f3, f4) = if m == 1 {
        (
            mono(exact_int(1, 0), -2),
            mono(exact_ratio(-4, 3), 1),
            mono(exact_int(1, 0), -1),
            mono(exact_ratio(-1, 3), 2),
        )
    } else {
        let s = (m + 1) * (m + 1);
        (
            mono(exact_int(1, 0), -1),
            mono(exact_ratio(-1, m + 2), m + 1),
            mono(exact_ratio(-1, m), -(m + 1)),
            mono(exact_ratio(s, s - 1), 1),
        )
    };
    let domain = Domain::PuncturedDisk { radius: 1.0 };
    let tag = |f: MeroFunction| f.with_base_point(spec.center).with_domain(domain);
    Ok(SL2NullCurve {
        f1: tag(f1),
        f2: tag(f2),
        f3: tag(f3),
        f4: tag(f4),
        poles: vec![spec.center],
        singular: Vec::new(),
    })
}

/// The three rotations `(F2, -F1; F4, -F3)`, `(F3, F4; -F1, -F2)` and
/// `(F4, -F3; -F2, F1)`; each is `F` times a constant element of `SL2(C)`.
pub fn aux_rotations(f: &SL2NullCurve) -> [SL2NullCurve; 3] {
    [
        f.with_slots(f.f2.clone(), f.f1.neg(), f.f4.clone(), f.f3.neg()),
        f.with_slots(f.f3.clone(), f.f4.clone(), f.f1.neg(), f.f2.neg()),
        f.with_slots(f.f4.clone(), f.f3.neg(), f.f2.neg(), f.f1.clone()),
    ]
}

/// Sample points on the circle of radius `r` about `center`.
pub fn circle_samples(center: Complex64, r: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| center + Complex64::from_polar(r, 2.0 * PI * j as f64 / n as f64))
        .collect()
}

/// Minimum over `n` circle samples of the slot-wise sup norm.
pub fn min_sup_norm_on_circle(
    f: &SL2NullCurve,
    center: Complex64,
    r: f64,
    n: usize,
    exec: Execution,
) -> Result<f64> {
    let pts = circle_samples(center, r, n);
    let norms = exec.map_slice(&pts, |&z| {
        f.evaluate(z)
            .map(|a| sup_norm(&a))
            .map_err(|_| Sl2Error::PoleOnContour(z))
    });
    norms
        .into_iter()
        .try_fold(f64::INFINITY, |acc, v| Ok(acc.min(v?)))
}

/// Options for [`push_norm`].
#[derive(Clone, Copy, Debug)]
pub struct PushNormOptions {
    pub budget: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for PushNormOptions {
    fn default() -> Self {
        PushNormOptions {
            budget: 64,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

/// Finds `lambda` such that the shear keeping slot `fixed_slot` satisfies
/// `max_{j != fixed_slot} |F^_j(p)| > delta` at every sample `p`.
///
/// Slots 1 and 2 are kept by `R2 += lambda R1`, slots 3 and 4 by
/// `R1 += lambda R2`. Draws are spread over rings growing geometrically from
/// `delta / m` to twice `(delta + M) / m`, where `m` is the smallest sup norm
/// of the fixed row on the samples and `M` the largest of the other row;
/// past that bound every draw succeeds.
pub fn push_norm(
    f: &SL2NullCurve,
    fixed_slot: usize,
    delta: f64,
    samples: &[Complex64],
    opts: PushNormOptions,
) -> Result<(Complex64, SL2NullCurve)> {
    assert!((1..=4).contains(&fixed_slot), "slot index must be 1..=4");
    let kind = if fixed_slot <= 2 {
        ShearKind::Row2PlusRow1
    } else {
        ShearKind::Row1PlusRow2
    };
    let values: Vec<Mat2> = opts
        .exec
        .map_slice(samples, |&z| f.evaluate(z).map_err(|_| Sl2Error::PoleOnContour(z)))
        .into_iter()
        .collect::<Result<_>>()?;
    let (keep_row, move_row) = if fixed_slot <= 2 { (0, 1) } else { (1, 0) };
    let row_norm = |a: &Mat2, r: usize| a[(r, 0)].norm().max(a[(r, 1)].norm());
    let lo = values.iter().map(|a| row_norm(a, keep_row)).fold(f64::INFINITY, f64::min);
    let hi = values.iter().map(|a| row_norm(a, move_row)).fold(0.0, f64::max);
    let lo = if lo > 0.0 { lo } else { f64::MIN_POSITIVE.sqrt() };
    let r0 = (delta / lo).max(1e-6);
    let r1 = (2.0 * (delta + hi) / lo).max(r0);

    let margin = |lambda: Complex64| -> f64 {
        let b = shear_matrix(kind, lambda);
        let scores = opts
            .exec
            .map_slice(&values, |a| off_slot_max(&(b * a), fixed_slot));
        scores.into_iter().fold(f64::INFINITY, f64::min) - delta
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let half = (opts.budget / 2).max(1);
    let mut best = (Complex64::new(0.0, 0.0), f64::NEG_INFINITY);
    for k in 0..opts.budget {
        let t = (k.min(half) as f64) / half as f64;
        let radius = r0 * (r1 / r0).powf(t) * rng.gen_range(1.0..2.0);
        let lambda = Complex64::from_polar(radius, rng.gen_range(0.0..2.0 * PI));
        let m = margin(lambda);
        if m > 0.0 {
            return Ok((lambda, shear(f, lambda, kind)?));
        }
        if m > best.1 {
            best = (lambda, m);
        }
    }
    Err(Sl2Error::SearchFailed {
        draws: opts.budget,
        best_lambda: best.0,
        best_margin: best.1,
    })
}

/// Largest slot modulus other than `fixed_slot` (slots numbered row-major).
fn off_slot_max(a: &Mat2, fixed_slot: usize) -> f64 {
    [a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]]
        .iter()
        .enumerate()
        .filter(|(j, _)| j + 1 != fixed_slot)
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max)
}

/// Checks that `lambda` works for [`push_norm`]'s condition on `samples`.
pub fn verify_push(
    shifted: &SL2NullCurve,
    fixed_slot: usize,
    delta: f64,
    samples: &[Complex64],
    exec: Execution,
) -> Result<bool> {
    let oks = exec.map_slice(samples, |&z| -> Result<bool> {
        let a = shifted.evaluate(z).map_err(|_| Sl2Error::PoleOnContour(z))?;
        Ok(off_slot_max(&a, fixed_slot) > delta)
    });
    oks.into_iter().try_fold(true, |acc, v| Ok(acc && v?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn model(m: i64) -> SL2NullCurve {
        end_model(EndModelSpec {
            m,
            center: c(0.0, 0.0),
        })
        .unwrap()
    }

    #[test]
    fn tee_examples() {
        let one = c(1.0, 0.0);
        assert_eq!(tee([c(0.0, 0.0), c(0.0, 0.0), one]).unwrap(), Mat2::identity());
        let a = tee([one, c(0.0, 0.0), one]).unwrap();
        assert_eq!(a, Mat2::new(one, one, one, c(2.0, 0.0)));
        assert!((a.determinant() - one).norm() < 1e-15);
        assert_eq!(tee_inv(&Mat2::identity()).unwrap(), [c(0.0, 0.0), c(0.0, 0.0), one]);
        assert_eq!(tee([one, one, c(0.0, 0.0)]), Err(Sl2Error::ThirdCoordinateZero));
    }

    #[test]
    fn tee_inv_of_case_one() {
        let x = tee_inv_curve(&model(1)).unwrap();
        let z = MeroFunction::z();
        let z3 = MeroFunction::monomial(exact_int(1, 0), 3);
        let half_z = z.scale(&exact_ratio(1, 2));
        let two_thirds_z3 = z3.scale(&exact_ratio(2, 3));
        assert_eq!(x.x1, half_z.sub(&two_thirds_z3).unwrap().with_domain(x.x1.domain()));
        assert_eq!(
            x.x2,
            half_z.add(&two_thirds_z3).unwrap().scale(&exact_i()).with_domain(x.x2.domain())
        );
        let report = crate::spinor::check_null_c3(&x);
        assert!(report.null && !report.flat);
        let back = tee_curve(&x).unwrap();
        assert_eq!(back.slots(), model(1).slots());
    }

    #[test]
    fn end_models_are_null() {
        for m in 1..=6 {
            let r = check_null_sl2(&model(m));
            assert!(r.all(), "m = {m}: {r:?}");
        }
        assert_eq!(
            end_model(EndModelSpec { m: 0, center: c(0.0, 0.0) }),
            Err(Sl2Error::InvalidMultiplicity(0))
        );
    }

    #[test]
    fn identity_and_exponential_curves() {
        let r = check_null_sl2(&SL2NullCurve::identity());
        assert!(r.unimodular && !r.immersion);
        // diag(e^z, e^-z) as germs: det F' = -1
        let d = Domain::Disk { radius: 1.0 };
        let e = MeroFunction::z().with_domain(d).exp().unwrap();
        let em = MeroFunction::z().neg().with_domain(d).exp().unwrap();
        let zero = MeroFunction::laurent(0, vec![c(0.0, 0.0); 24], c(0.0, 0.0), d);
        let f = SL2NullCurve::new(e, zero.clone(), zero, em);
        let r = check_null_sl2(&f);
        assert!(r.unimodular && !r.null);
    }

    #[test]
    fn shear_examples() {
        let f = model(1);
        let s = shear(&f, c(1.0, 0.0), ShearKind::Row1PlusRow2).unwrap();
        let expect = MeroFunction::monomial(exact_int(1, 0), -2)
            .add(&MeroFunction::monomial(exact_int(1, 0), -1))
            .unwrap();
        assert_eq!(s.f1.sub(&expect).unwrap().is_zero(), true);
        assert!(check_null_sl2(&s).all());
        for kind in ShearKind::ALL {
            assert_eq!(shear(&f, c(0.0, 0.0), kind).unwrap(), f);
            let l = c(0.5, -2.0);
            let back = shear(&shear(&f, l, kind).unwrap(), -l, kind).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn shear_matrix_matches_slots() {
        let f = model(2);
        let z = c(0.3, 0.4);
        let l = c(0.7, 0.1);
        let a = f.evaluate(z).unwrap();
        for kind in ShearKind::ALL {
            let b = shear_matrix(kind, l);
            let expect = match kind {
                ShearKind::Row1PlusRow2 | ShearKind::Row2PlusRow1 => b * a,
                _ => a * b,
            };
            let got = shear(&f, l, kind).unwrap().evaluate(z).unwrap();
            assert!((got - expect).norm() < 1e-12, "{kind:?}");
        }
    }

    #[test]
    fn rotations_stay_null() {
        let rots = aux_rotations(&SL2NullCurve::identity());
        for r in &rots {
            assert!(check_null_sl2(r).unimodular);
        }
        for r in aux_rotations(&model(1)) {
            assert!(check_null_sl2(&r).all());
        }
    }

    #[test]
    fn sup_norm_on_circles() {
        let id = SL2NullCurve::identity();
        let v = min_sup_norm_on_circle(&id, c(0.0, 0.0), 0.3, 64, Execution::Sequential).unwrap();
        assert_eq!(v, 1.0);
        let v = min_sup_norm_on_circle(&model(1), c(0.0, 0.0), 0.5, 256, Execution::Parallel).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn push_norm_identity() {
        let id = SL2NullCurve::identity();
        let k = circle_samples(c(0.0, 0.0), 1.0, 16);
        let (lambda, f) = push_norm(&id, 1, 5.0, &k, PushNormOptions::default()).unwrap();
        assert!(lambda.norm() > 5.0);
        assert_eq!(f.f1, id.f1);
        assert!(verify_push(&f, 1, 5.0, &k, Execution::Sequential).unwrap());
    }
}
