//! Meromorphic functions of one complex variable.
//!
//! A [`MeroFunction`] carries one of two representations:
//!
//! - **Rational**: an exact quotient `P/Q` of polynomials over the Gaussian
//!   rationals, always reduced with monic `Q`. Identities like `det F = 1`
//!   are decided exactly in this mode.
//! - **Laurent window**: floating coefficients `c_k` of `(z - base)^k` for
//!   `min_exp <= k < truncation_order`. On disk-like domains this is a germ
//!   at the base point, known modulo `O((z - base)^truncation_order)`. On an
//!   annulus it is a two-sided window of the Laurent expansion valid on the
//!   whole annulus, with both tails dropped.
//!
//! Arithmetic between two rational functions stays exact. As soon as one
//! operand is a window, the other is expanded to a compatible window.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{
    clear_denominators, exact_from_c64, exact_to_c64, try_exact_from_c64, Exact, Rat,
};
use crate::poly::{solve_exact, Poly};
use crate::wire;

/// Terms kept past the leading exponent when a germ is expanded.
pub const DEFAULT_TERMS: usize = 24;

/// Absolute tolerance for "coefficient is zero" on floating windows.
pub const ZERO_TOL: f64 = 1e-10;

/// Half width `N` of the two-sided window `[-N, N]` used on annuli.
pub const ANNULUS_HALF_WIDTH: usize = 48;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("function is identically zero")]
    IdenticallyZero,
    #[error("truncation too short: need exponent {needed}, window certified below {available}")]
    TruncationTooShort { needed: i32, available: i32 },
    #[error("division by the zero function")]
    DivisionByZeroFunction,
    #[error("evaluation at a pole ({}, {})", .0.re, .0.im)]
    EvaluationAtPole(Complex64),
    #[error("operands are expanded at different base points")]
    BasePointMismatch,
    #[error("operands live on incompatible domains")]
    DomainMismatch,
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("exponential of a function with a pole at the base point")]
    EssentialSingularity,
    #[error("window is expanded at ({}, {}), not at the requested point", .0.re, .0.im)]
    OffBasePoint(Complex64),
    #[error("no single-valued antiderivative (residue {}, {})", .0.re, .0.im)]
    NonExact(Complex64),
    #[error("non-finite input value")]
    NonFinite,
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// Where a function lives. Radii are those of the reference disk or annulus
/// centred at the base point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Disk { radius: f64 },
    PuncturedDisk { radius: f64 },
    Annulus { inner: f64, outer: f64 },
    Plane,
}

impl Domain {
    pub fn is_annulus(&self) -> bool {
        matches!(self, Domain::Annulus { .. })
    }

    /// Geometric-mean radius used for sampling on an annulus.
    pub fn reference_radius(&self) -> Option<f64> {
        match *self {
            Domain::Annulus { inner, outer } => Some((inner * outer).sqrt()),
            Domain::Disk { radius } | Domain::PuncturedDisk { radius } => Some(0.5 * radius),
            Domain::Plane => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact reduced quotient `num/den` with monic `den`.
#[derive(Clone)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
    num_f: Vec<Complex64>,
    den_f: Vec<Complex64>,
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(SeriesError::ZeroDenominator);
        }
        let (num, den) = if num.is_zero() {
            (Poly::zero(), Poly::one())
        } else if den.is_constant() {
            let inv = Exact::one() / den.leading().unwrap();
            (num.scale(&inv), Poly::one())
        } else {
            let g = Poly::gcd(&num, &den);
            let (n, d) = if g.is_constant() {
                (num, den)
            } else {
                (num.div_exact(&g), den.div_exact(&g))
            };
            let inv = Exact::one() / d.leading().unwrap();
            (n.scale(&inv), d.scale(&inv))
        };
        Ok(Self::from_reduced(num, den))
    }

    fn from_reduced(num: Poly, den: Poly) -> Self {
        let num_f = num.to_c64();
        let den_f = den.to_c64();
        RationalFn {
            num,
            den,
            num_f,
            den_f,
        }
    }

    /// `self + other` (or `-`), taking gcds only where a common factor can
    /// survive: of the denominators, then of the new numerator with it.
    fn add(&self, other: &RationalFn, subtract: bool) -> RationalFn {
        let b_num = if subtract { -&other.num } else { other.num.clone() };
        if self.num.is_zero() {
            return Self::from_reduced(b_num, other.den.clone());
        }
        if other.num.is_zero() {
            return self.clone();
        }
        let g = if self.den == other.den {
            self.den.clone()
        } else {
            Poly::gcd(&self.den, &other.den)
        };
        let (num, den) = if g.is_constant() {
            (
                &(&self.num * &other.den) + &(&b_num * &self.den),
                &self.den * &other.den,
            )
        } else {
            let d1 = self.den.div_exact(&g);
            let d2 = other.den.div_exact(&g);
            let t = &(&self.num * &d2) + &(&b_num * &d1);
            if t.is_zero() {
                return Self::from_reduced(Poly::zero(), Poly::one());
            }
            let h = Poly::gcd(&t, &g);
            let den = &(&d1 * &d2) * &g;
            if h.is_constant() {
                (t, den)
            } else {
                (t.div_exact(&h), den.div_exact(&h))
            }
        };
        if num.is_zero() {
            return Self::from_reduced(Poly::zero(), Poly::one());
        }
        Self::from_reduced(num, den)
    }

    /// Product of reduced fractions via the cross gcds.
    fn mul(&self, other: &RationalFn) -> RationalFn {
        if self.num.is_zero() || other.num.is_zero() {
            return Self::from_reduced(Poly::zero(), Poly::one());
        }
        let cross = |n: &Poly, d: &Poly| -> (Poly, Poly) {
            if d.is_constant() {
                return (n.clone(), d.clone());
            }
            let g = Poly::gcd(n, d);
            if g.is_constant() {
                (n.clone(), d.clone())
            } else {
                (n.div_exact(&g), d.div_exact(&g))
            }
        };
        let (n1, d2) = cross(&self.num, &other.den);
        let (n2, d1) = cross(&other.num, &self.den);
        Self::from_reduced(&n1 * &n2, &d1 * &d2)
    }

    fn recip(&self) -> Result<RationalFn> {
        if self.num.is_zero() {
            return Err(SeriesError::DivisionByZeroFunction);
        }
        let inv = Exact::one() / self.num.leading().unwrap();
        Ok(Self::from_reduced(self.den.scale(&inv), self.num.scale(&inv)))
    }

    /// `(p/q)' = (p' r - p q'/s) / (q r)` with `s = gcd(q, q')` and
    /// `r = q / s`, already in lowest terms.
    fn derivative(&self) -> RationalFn {
        if self.den.is_constant() {
            return Self::from_reduced(self.num.derivative(), Poly::one());
        }
        let dq = self.den.derivative();
        let s = Poly::gcd(&self.den, &dq);
        let (r, dq_s) = if s.is_constant() {
            (self.den.clone(), dq)
        } else {
            (self.den.div_exact(&s), dq.div_exact(&s))
        };
        let num = &(&self.num.derivative() * &r) - &(&self.num * &dq_s);
        if num.is_zero() {
            return Self::from_reduced(Poly::zero(), Poly::one());
        }
        Self::from_reduced(num, &self.den * &r)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    fn eval_f64(&self, z: Complex64) -> (Complex64, Complex64, f64) {
        let mut n = Complex64::zero();
        for c in self.num_f.iter().rev() {
            n = n * z + c;
        }
        let mut d = Complex64::zero();
        let mut scale = 0.0;
        let r = z.norm();
        for c in self.den_f.iter().rev() {
            d = d * z + c;
            scale = scale * r + c.norm();
        }
        (n, d, scale)
    }

    /// Exact Laurent expansion at `p`: leading exponent and `count` exact
    /// coefficients starting there.
    fn expansion_exact(&self, p: &Exact, count: usize) -> (i32, Vec<Exact>) {
        let n = self.num.taylor_shift(p);
        let d = self.den.taylor_shift(p);
        let a = d.low_order().unwrap_or(0);
        let c = n.low_order().unwrap_or(0);
        let n: Vec<Exact> = n.coeffs()[c..].to_vec();
        let d: Vec<Exact> = d.coeffs()[a..].to_vec();
        let inv = Exact::one() / &d[0];
        let mut q: Vec<Exact> = Vec::with_capacity(count);
        for k in 0..count {
            let mut acc = n.get(k).cloned().unwrap_or_else(Exact::zero);
            for j in 1..=k.min(d.len() - 1) {
                acc = acc - &d[j] * &q[k - j];
            }
            q.push(acc * &inv);
        }
        (c as i32 - a as i32, q)
    }

    /// Floating Laurent expansion at an exact point (the shift is exact,
    /// the series division runs in floating point).
    fn expansion_f64(&self, p: &Exact, count: usize) -> (i32, Vec<Complex64>) {
        let n = self.num.taylor_shift(p);
        let d = self.den.taylor_shift(p);
        let a = d.low_order().unwrap_or(0);
        let c = n.low_order().unwrap_or(0);
        let n: Vec<Complex64> = n.coeffs()[c..].iter().map(exact_to_c64).collect();
        let d: Vec<Complex64> = d.coeffs()[a..].iter().map(exact_to_c64).collect();
        (c as i32 - a as i32, series_divide(&n, &d, count))
    }
}

/// Coefficients of `n/d` for power series with `d[0] != 0`.
fn series_divide(n: &[Complex64], d: &[Complex64], count: usize) -> Vec<Complex64> {
    let mut q: Vec<Complex64> = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = n.get(k).copied().unwrap_or_default();
        for j in 1..=k.min(d.len().saturating_sub(1)) {
            acc -= d[j] * q[k - j];
        }
        q.push(acc / d[0]);
    }
    q
}

/// Floating coefficients for exponents `min_exp .. min_exp + coeffs.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentWindow {
    min_exp: i32,
    coeffs: Vec<Complex64>,
}

impl LaurentWindow {
    /// Builds a window, dropping exactly-zero leading coefficients.
    pub fn new(min_exp: i32, coeffs: Vec<Complex64>) -> Self {
        let skip = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
        LaurentWindow {
            min_exp: min_exp + skip as i32,
            coeffs: coeffs[skip..].to_vec(),
        }
    }

    pub fn zero(truncation_order: i32) -> Self {
        LaurentWindow {
            min_exp: truncation_order,
            coeffs: Vec::new(),
        }
    }

    pub fn min_exp(&self) -> i32 {
        self.min_exp
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn truncation_order(&self) -> i32 {
        self.min_exp + self.coeffs.len() as i32
    }

    /// Coefficient of exponent `k`; `None` past the truncation order.
    pub fn coeff(&self, k: i32) -> Option<Complex64> {
        if k >= self.truncation_order() {
            None
        } else if k < self.min_exp {
            Some(Complex64::zero())
        } else {
            Some(self.coeffs[(k - self.min_exp) as usize])
        }
    }

    /// First coefficient whose modulus exceeds `tol`.
    pub fn leading(&self, tol: f64) -> Option<(i32, Complex64)> {
        self.coeffs
            .iter()
            .position(|c| c.norm() > tol)
            .map(|i| (self.min_exp + i as i32, self.coeffs[i]))
    }

    fn span(&self, lo: i32, hi: i32) -> Vec<Complex64> {
        (lo..hi).map(|k| self.coeff(k).unwrap_or_default()).collect()
    }

    fn add(&self, other: &Self, two_sided: bool, sign: f64) -> Self {
        let lo = self.min_exp.min(other.min_exp);
        let hi = if two_sided {
            self.truncation_order().max(other.truncation_order())
        } else {
            self.truncation_order().min(other.truncation_order())
        };
        if hi <= lo {
            return LaurentWindow::zero(hi);
        }
        let a = self.span(lo, hi);
        let b = other.span(lo, hi);
        LaurentWindow::new(lo, a.iter().zip(&b).map(|(x, y)| x + y * sign).collect())
    }

    fn mul(&self, other: &Self, two_sided: bool) -> Self {
        let (lo, hi) = if two_sided {
            (
                self.min_exp.min(other.min_exp),
                self.truncation_order().max(other.truncation_order()),
            )
        } else {
            (
                self.min_exp + other.min_exp,
                (self.truncation_order() + other.min_exp)
                    .min(other.truncation_order() + self.min_exp),
            )
        };
        if hi <= lo {
            return LaurentWindow::zero(hi);
        }
        let mut out = vec![Complex64::zero(); (hi - lo) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            let ei = self.min_exp + i as i32;
            for (j, b) in other.coeffs.iter().enumerate() {
                let e = ei + other.min_exp + j as i32;
                if e >= lo && e < hi {
                    out[(e - lo) as usize] += a * b;
                }
            }
        }
        LaurentWindow::new(lo, out)
    }

    fn scale(&self, c: Complex64) -> Self {
        if c.norm() == 0.0 {
            return LaurentWindow::zero(self.truncation_order());
        }
        LaurentWindow {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    fn div_germ(&self, other: &Self) -> Result<Self> {
        let (m2, _) = other
            .leading(ZERO_TOL)
            .ok_or(SeriesError::DivisionByZeroFunction)?;
        let t2 = other.truncation_order();
        let rel2 = (t2 - m2) as usize;
        let g: Vec<Complex64> = other.span(m2, t2);
        let m1 = self.min_exp;
        let rel1 = self.coeffs.len();
        let count = rel1.min(rel2);
        let q = series_divide(&self.coeffs, &g, count);
        Ok(LaurentWindow::new(m1 - m2, q))
    }

    fn exp_germ(&self) -> Result<Self> {
        let t = self.truncation_order();
        if let Some((m, _)) = self.leading(ZERO_TOL) {
            if m < 0 {
                return Err(SeriesError::EssentialSingularity);
            }
        }
        if t <= 0 {
            return Err(SeriesError::TruncationTooShort {
                needed: 0,
                available: t,
            });
        }
        let a = self.span(0, t);
        let n = a.len();
        let mut b = vec![Complex64::zero(); n];
        b[0] = Complex64::one();
        for k in 1..n {
            let mut acc = Complex64::zero();
            for j in 1..=k {
                acc += a[j] * b[k - j] * j as f64;
            }
            b[k] = acc / k as f64;
        }
        let e0 = a[0].exp();
        Ok(LaurentWindow::new(0, b.into_iter().map(|c| c * e0).collect()))
    }

    fn derivative(&self) -> Self {
        if self.coeffs.is_empty() {
            return LaurentWindow::zero(self.min_exp - 1);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * (self.min_exp + i as i32) as f64)
            .collect();
        LaurentWindow::new(self.min_exp - 1, coeffs)
    }

    fn antiderivative(&self) -> Result<Self> {
        if let Some(r) = self.coeff(-1) {
            if r.norm() > ZERO_TOL {
                return Err(SeriesError::NonExact(r));
            }
        }
        let t = self.truncation_order();
        let coeffs = (self.min_exp..t)
            .map(|k| {
                if k == -1 {
                    Complex64::zero()
                } else {
                    self.coeffs[(k - self.min_exp) as usize] / (k + 1) as f64
                }
            })
            .collect::<Vec<_>>();
        // the constant of integration sits at exponent 0
        let mut w = LaurentWindow::new(self.min_exp + 1, coeffs);
        if w.min_exp <= 0 && 0 < w.truncation_order() {
            let idx = (0 - w.min_exp) as usize;
            w.coeffs[idx] = Complex64::zero();
            w = LaurentWindow::new(w.min_exp, w.coeffs);
        }
        Ok(w)
    }

    fn eval(&self, w: Complex64) -> Complex64 {
        if self.coeffs.is_empty() {
            return Complex64::zero();
        }
        let mut acc = Complex64::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * w + c;
        }
        acc * w.powi(self.min_exp)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Repr {
    Rational(RationalFn),
    Laurent(LaurentWindow),
}

/// Meromorphic function on a planar domain. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct MeroFunction {
    repr: Repr,
    base_point: Complex64,
    domain: Domain,
}

fn sample_count(width: usize) -> usize {
    (4 * width).next_power_of_two().max(64)
}

/// Two-sided window `[-n, n]` of the Laurent expansion of `f` on the circle
/// of radius `radius` about `center`, by discrete Fourier transform.
fn window_from_samples<F>(f: F, center: Complex64, radius: f64, n: usize) -> Result<LaurentWindow>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let m = sample_count(2 * n + 1);
    let mut buf: Vec<Complex64> = (0..m)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            f(center + Complex64::from_polar(radius, theta))
        })
        .collect::<Result<_>>()?;
    if buf.iter().any(|v| !v.is_finite()) {
        return Err(SeriesError::NonFinite);
    }
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let ni = n as i32;
    let coeffs = (-ni..=ni)
        .map(|k| {
            let idx = k.rem_euclid(m as i32) as usize;
            buf[idx] / (m as f64 * radius.powi(k))
        })
        .collect();
    Ok(LaurentWindow::new(-ni, coeffs))
}

impl MeroFunction {
    fn from_rational(r: RationalFn) -> Self {
        MeroFunction {
            repr: Repr::Rational(r),
            base_point: Complex64::zero(),
            domain: Domain::Plane,
        }
    }

    pub fn rational(num: Poly, den: Poly) -> Result<Self> {
        Ok(Self::from_rational(RationalFn::new(num, den)?))
    }

    pub fn polynomial(p: Poly) -> Self {
        Self::from_rational(RationalFn::from_reduced(p, Poly::one()))
    }

    pub fn constant(c: Exact) -> Self {
        Self::polynomial(Poly::constant(c))
    }

    pub fn constant_c64(c: Complex64) -> Self {
        Self::constant(exact_from_c64(c))
    }

    pub fn zero() -> Self {
        Self::polynomial(Poly::zero())
    }

    pub fn one() -> Self {
        Self::constant(Exact::one())
    }

    /// The coordinate function `z`.
    pub fn z() -> Self {
        Self::polynomial(Poly::z())
    }

    /// `c * (z - center)^k` for any integer `k`.
    pub fn monomial_at(c: Exact, k: i32, center: &Exact) -> Self {
        let lin = Poly::linear_root(center);
        if k >= 0 {
            Self::polynomial(lin.pow(k as usize).scale(&c))
        } else {
            Self::rational(Poly::constant(c), lin.pow((-k) as usize))
                .expect("nonzero denominator")
        }
    }

    /// `c * z^k` for any integer `k`.
    pub fn monomial(c: Exact, k: i32) -> Self {
        Self::monomial_at(c, k, &Exact::zero())
    }

    /// A floating Laurent window. On an annulus the window is two-sided.
    pub fn laurent(min_exp: i32, coeffs: Vec<Complex64>, base_point: Complex64, domain: Domain) -> Self {
        MeroFunction {
            repr: Repr::Laurent(LaurentWindow::new(min_exp, coeffs)),
            base_point,
            domain,
        }
    }

    /// Samples `f` on the reference circle of an annulus and keeps the window
    /// `[-half_width, half_width]` of its Laurent expansion.
    pub fn from_samples_on_annulus<F>(
        f: F,
        center: Complex64,
        inner: f64,
        outer: f64,
        half_width: usize,
    ) -> Result<Self>
    where
        F: Fn(Complex64) -> Result<Complex64>,
    {
        let domain = Domain::Annulus { inner, outer };
        let radius = domain.reference_radius().unwrap();
        let w = window_from_samples(f, center, radius, half_width)?;
        Ok(MeroFunction {
            repr: Repr::Laurent(w),
            base_point: center,
            domain,
        })
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_base_point(mut self, base_point: Complex64) -> Self {
        self.base_point = base_point;
        self
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn as_rational(&self) -> Option<&RationalFn> {
        match &self.repr {
            Repr::Rational(r) => Some(r),
            Repr::Laurent(_) => None,
        }
    }

    pub fn as_laurent(&self) -> Option<&LaurentWindow> {
        match &self.repr {
            Repr::Laurent(w) => Some(w),
            Repr::Rational(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.repr, Repr::Rational(_))
    }

    pub fn base_point(&self) -> Complex64 {
        self.base_point
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    fn two_sided(&self) -> bool {
        self.is_rational_free_annulus()
    }

    fn is_rational_free_annulus(&self) -> bool {
        matches!(self.repr, Repr::Laurent(_)) && self.domain.is_annulus()
    }

    /// Exact zero test for rational functions; for windows, every certified
    /// coefficient is below [`ZERO_TOL`].
    pub fn is_zero(&self) -> bool {
        self.is_zero_within(ZERO_TOL)
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        match &self.repr {
            Repr::Rational(r) => r.num.is_zero(),
            Repr::Laurent(w) => w.coeffs.iter().all(|c| c.norm() <= tol),
        }
    }

    /// Largest certified coefficient modulus of a window; `None` for
    /// rational functions.
    pub fn max_coefficient(&self) -> Option<f64> {
        self.as_laurent()
            .map(|w| w.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max))
    }

    pub fn is_constant(&self) -> bool {
        match &self.repr {
            Repr::Rational(r) => r.num.is_constant() && r.den.is_constant(),
            Repr::Laurent(w) => w
                .coeffs
                .iter()
                .enumerate()
                .all(|(i, c)| w.min_exp + i as i32 == 0 || c.norm() <= ZERO_TOL),
        }
    }

    fn merged_domain(a: Domain, b: Domain) -> Result<Domain> {
        match (a, b) {
            (Domain::Plane, d) | (d, Domain::Plane) => Ok(d),
            (x, y) if x == y => Ok(x),
            (x @ Domain::Annulus { .. }, Domain::Annulus { .. }) => {
                let _ = x;
                Err(SeriesError::DomainMismatch)
            }
            (d @ Domain::Annulus { .. }, _) | (_, d @ Domain::Annulus { .. }) => Ok(d),
            (x, _) => Ok(x),
        }
    }

    /// Expands `self` into a window compatible with `target` (a window).
    fn window_like(&self, target: &MeroFunction) -> Result<LaurentWindow> {
        let tw = target.as_laurent().expect("target must be a window");
        match &self.repr {
            Repr::Laurent(w) => {
                if (self.base_point - target.base_point).norm() > 1e-14 {
                    return Err(SeriesError::BasePointMismatch);
                }
                if self.domain.is_annulus() != target.domain.is_annulus()
                    || (self.domain.is_annulus() && self.domain != target.domain)
                {
                    return Err(SeriesError::DomainMismatch);
                }
                Ok(w.clone())
            }
            Repr::Rational(_) => {
                if target.domain.is_annulus() {
                    let Domain::Annulus { inner, outer } = target.domain else {
                        unreachable!()
                    };
                    let half = (-tw.min_exp).max(tw.truncation_order() - 1).max(1) as usize;
                    let f = MeroFunction::from_samples_on_annulus(
                        |z| self.evaluate(z),
                        target.base_point,
                        inner,
                        outer,
                        half,
                    )?;
                    Ok(f.as_laurent().unwrap().clone())
                } else {
                    let span = (tw.truncation_order() - tw.min_exp).max(0);
                    let want = tw.truncation_order() + span + DEFAULT_TERMS as i32;
                    self.germ_until(target.base_point, want)
                }
            }
        }
    }

    /// Germ at `p` of a rational function, certified below exponent `trunc`.
    fn germ_until(&self, p: Complex64, trunc: i32) -> Result<LaurentWindow> {
        let r = self.as_rational().expect("rational");
        if r.num.is_zero() {
            return Ok(LaurentWindow::zero(trunc));
        }
        let pe = exact_from_c64(p);
        let lead = r.num.root_multiplicity(&pe) as i32 - r.den.root_multiplicity(&pe) as i32;
        let count = (trunc - lead).max(0) as usize;
        let (m, c) = r.expansion_f64(&pe, count);
        Ok(LaurentWindow::new(m, c))
    }

    /// Expands into a Laurent window: a germ at the base point with `terms`
    /// coefficients past the leading one, or on an annulus a two-sided
    /// window of half width [`ANNULUS_HALF_WIDTH`].
    pub fn to_laurent(&self, terms: usize) -> Result<MeroFunction> {
        match &self.repr {
            Repr::Laurent(_) => Ok(self.clone()),
            Repr::Rational(r) => {
                if let Domain::Annulus { inner, outer } = self.domain {
                    return MeroFunction::from_samples_on_annulus(
                        |z| self.evaluate(z),
                        self.base_point,
                        inner,
                        outer,
                        ANNULUS_HALF_WIDTH,
                    );
                }
                let w = if r.num.is_zero() {
                    LaurentWindow::zero(terms as i32)
                } else {
                    let pe = exact_from_c64(self.base_point);
                    let (m, c) = r.expansion_f64(&pe, terms);
                    LaurentWindow::new(m, c)
                };
                Ok(MeroFunction {
                    repr: Repr::Laurent(w),
                    base_point: self.base_point,
                    domain: self.domain,
                })
            }
        }
    }

    fn combine<FR, FW>(&self, other: &MeroFunction, exact: FR, window: FW) -> Result<MeroFunction>
    where
        FR: FnOnce(&RationalFn, &RationalFn) -> Result<RationalFn>,
        FW: FnOnce(&LaurentWindow, &LaurentWindow, &MeroFunction) -> Result<LaurentWindow>,
    {
        match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Ok(MeroFunction {
                repr: Repr::Rational(exact(a, b)?),
                base_point: self.base_point,
                domain: Self::merged_domain(self.domain, other.domain)?,
            }),
            _ => {
                let target = if self.is_rational() { other } else { self };
                let a = self.window_like(target)?;
                let b = other.window_like(target)?;
                let w = window(&a, &b, target)?;
                Ok(MeroFunction {
                    repr: Repr::Laurent(w),
                    base_point: target.base_point,
                    domain: target.domain,
                })
            }
        }
    }

    pub fn add(&self, other: &MeroFunction) -> Result<MeroFunction> {
        self.combine(
            other,
            |a, b| Ok(a.add(b, false)),
            |a, b, t| Ok(a.add(b, t.two_sided(), 1.0)),
        )
    }

    pub fn sub(&self, other: &MeroFunction) -> Result<MeroFunction> {
        self.combine(
            other,
            |a, b| Ok(a.add(b, true)),
            |a, b, t| Ok(a.add(b, t.two_sided(), -1.0)),
        )
    }

    pub fn mul(&self, other: &MeroFunction) -> Result<MeroFunction> {
        self.combine(
            other,
            |a, b| Ok(a.mul(b)),
            |a, b, t| Ok(a.mul(b, t.two_sided())),
        )
    }

    pub fn div(&self, other: &MeroFunction) -> Result<MeroFunction> {
        if other.is_zero() {
            return Err(SeriesError::DivisionByZeroFunction);
        }
        self.combine(
            other,
            |a, b| Ok(a.mul(&b.recip()?)),
            |a, b, t| {
                if t.two_sided() {
                    let Domain::Annulus { inner, outer } = t.domain else {
                        unreachable!()
                    };
                    let half = (-a.min_exp.min(b.min_exp))
                        .max(a.truncation_order().max(b.truncation_order()) - 1)
                        .max(1) as usize;
                    let radius = t.domain.reference_radius().unwrap();
                    let c = t.base_point;
                    let _ = (inner, outer);
                    window_from_samples(
                        |z| {
                            let den = b.eval(z - c);
                            if den.norm() < 1e-300 {
                                return Err(SeriesError::EvaluationAtPole(z));
                            }
                            Ok(a.eval(z - c) / den)
                        },
                        c,
                        radius,
                        half,
                    )
                } else {
                    a.div_germ(b)
                }
            },
        )
    }

    pub fn neg(&self) -> MeroFunction {
        self.scale(&-Exact::one())
    }

    pub fn scale(&self, c: &Exact) -> MeroFunction {
        let repr = match &self.repr {
            Repr::Rational(r) => {
                if c.is_zero() {
                    Repr::Rational(RationalFn::from_reduced(Poly::zero(), Poly::one()))
                } else {
                    Repr::Rational(RationalFn::from_reduced(r.num.scale(c), r.den.clone()))
                }
            }
            Repr::Laurent(w) => Repr::Laurent(w.scale(exact_to_c64(c))),
        };
        MeroFunction {
            repr,
            base_point: self.base_point,
            domain: self.domain,
        }
    }

    pub fn scale_c64(&self, c: Complex64) -> MeroFunction {
        self.scale(&exact_from_c64(c))
    }

    pub fn square(&self) -> Result<MeroFunction> {
        self.mul(self)
    }

    pub fn recip(&self) -> Result<MeroFunction> {
        MeroFunction::one()
            .with_domain(self.domain)
            .with_base_point(self.base_point)
            .div(self)
    }

    /// Term-wise derivative `d/dz`.
    pub fn derivative(&self) -> MeroFunction {
        let repr = match &self.repr {
            Repr::Rational(r) => {
                Repr::Rational(r.derivative())
            }
            Repr::Laurent(w) => Repr::Laurent(w.derivative()),
        };
        MeroFunction {
            repr,
            base_point: self.base_point,
            domain: self.domain,
        }
    }

    /// Single-valued antiderivative with zero constant term (rational: value
    /// determined by the exact solve; windows: exponent-0 coefficient zero).
    pub fn antiderivative(&self) -> Result<MeroFunction> {
        let repr = match &self.repr {
            Repr::Rational(r) => Repr::Rational(rational_antiderivative(r)?),
            Repr::Laurent(w) => Repr::Laurent(w.antiderivative()?),
        };
        Ok(MeroFunction {
            repr,
            base_point: self.base_point,
            domain: self.domain,
        })
    }

    /// `exp(f)`. Constants stay rational; otherwise the result is a window
    /// (germ at the base point, or two-sided on an annulus).
    pub fn exp(&self) -> Result<MeroFunction> {
        if let Repr::Rational(r) = &self.repr {
            if r.num.is_constant() && r.den.is_constant() {
                let c = exact_to_c64(&r.num.coeff(0));
                return Ok(MeroFunction::constant_c64(c.exp())
                    .with_domain(self.domain)
                    .with_base_point(self.base_point));
            }
        }
        if let Domain::Annulus { inner, outer } = self.domain {
            let half = match &self.repr {
                Repr::Laurent(w) => (-w.min_exp).max(w.truncation_order() - 1).max(1) as usize,
                Repr::Rational(_) => ANNULUS_HALF_WIDTH,
            };
            return MeroFunction::from_samples_on_annulus(
                |z| Ok(self.evaluate(z)?.exp()),
                self.base_point,
                inner,
                outer,
                half,
            );
        }
        let germ = self.to_laurent(DEFAULT_TERMS)?;
        let w = germ.as_laurent().unwrap().exp_germ()?;
        Ok(MeroFunction {
            repr: Repr::Laurent(w),
            base_point: self.base_point,
            domain: self.domain,
        })
    }

    /// Order at `p`: the integer `n` with `(z-p)^{-n} f` holomorphic and
    /// nonzero at `p`.
    pub fn ord(&self, p: Complex64) -> Result<i32> {
        match &self.repr {
            Repr::Rational(r) => {
                if r.num.is_zero() {
                    return Err(SeriesError::IdenticallyZero);
                }
                let pe = try_exact_from_c64(p).ok_or(SeriesError::NonFinite)?;
                Ok(r.num.root_multiplicity(&pe) as i32 - r.den.root_multiplicity(&pe) as i32)
            }
            Repr::Laurent(w) => {
                self.check_base(p)?;
                if self.domain.is_annulus() {
                    if let Some(c) = w.coeffs.first() {
                        if c.norm() > ZERO_TOL {
                            return Err(SeriesError::TruncationTooShort {
                                needed: w.min_exp - 1,
                                available: w.min_exp,
                            });
                        }
                    }
                }
                w.leading(ZERO_TOL)
                    .map(|(k, _)| k)
                    .ok_or(SeriesError::TruncationTooShort {
                        needed: w.truncation_order(),
                        available: w.truncation_order(),
                    })
            }
        }
    }

    fn check_base(&self, p: Complex64) -> Result<()> {
        if (p - self.base_point).norm() > 1e-14 * (1.0 + p.norm()) {
            Err(SeriesError::OffBasePoint(self.base_point))
        } else {
            Ok(())
        }
    }

    /// Coefficient of `(z-p)^{-1}` in the expansion at `p`.
    pub fn residue(&self, p: Complex64) -> Result<Complex64> {
        match &self.repr {
            Repr::Rational(r) => rational_residue(r, p),
            Repr::Laurent(w) => {
                self.check_base(p)?;
                w.coeff(-1).ok_or(SeriesError::TruncationTooShort {
                    needed: -1,
                    available: w.truncation_order(),
                })
            }
        }
    }

    /// Coefficients of exponents `lo..=hi` of the expansion at `p`.
    pub fn laurent_coefficients(&self, p: Complex64, lo: i32, hi: i32) -> Result<Vec<Complex64>> {
        match &self.repr {
            Repr::Rational(r) => {
                if r.num.is_zero() {
                    return Ok(vec![Complex64::zero(); (hi - lo + 1).max(0) as usize]);
                }
                let pe = try_exact_from_c64(p).ok_or(SeriesError::NonFinite)?;
                let lead =
                    r.num.root_multiplicity(&pe) as i32 - r.den.root_multiplicity(&pe) as i32;
                let count = (hi - lead + 1).max(0) as usize;
                let (m, c) = r.expansion_exact(&pe, count);
                Ok((lo..=hi)
                    .map(|k| {
                        if k < m {
                            Complex64::zero()
                        } else {
                            exact_to_c64(&c[(k - m) as usize])
                        }
                    })
                    .collect())
            }
            Repr::Laurent(w) => {
                self.check_base(p)?;
                (lo..=hi)
                    .map(|k| {
                        w.coeff(k).ok_or(SeriesError::TruncationTooShort {
                            needed: k,
                            available: w.truncation_order(),
                        })
                    })
                    .collect()
            }
        }
    }

    /// Exact value at an exact point; `None` for Laurent windows.
    pub fn evaluate_exact(&self, z: &Exact) -> Option<Result<Exact>> {
        let r = self.as_rational()?;
        let d = r.den.eval(z);
        if d.is_zero() {
            return Some(Err(SeriesError::EvaluationAtPole(exact_to_c64(z))));
        }
        Some(Ok(r.num.eval(z) / d))
    }

    /// Value at `z` (Horner on the active representation).
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if !z.is_finite() {
            return Err(SeriesError::NonFinite);
        }
        match &self.repr {
            Repr::Rational(r) => {
                let (n, d, scale) = r.eval_f64(z);
                if d.norm() > 1e-12 * scale && d.norm() > 0.0 {
                    return Ok(n / d);
                }
                let ze = exact_from_c64(z);
                let de = r.den.eval(&ze);
                if de.is_zero() {
                    return Err(SeriesError::EvaluationAtPole(z));
                }
                Ok(exact_to_c64(&(r.num.eval(&ze) / de)))
            }
            Repr::Laurent(w) => {
                let dz = z - self.base_point;
                if dz.norm() == 0.0 {
                    return match w.leading(0.0) {
                        Some((k, _)) if k < 0 => Err(SeriesError::EvaluationAtPole(z)),
                        _ => Ok(w.coeff(0).unwrap_or_default()),
                    };
                }
                Ok(w.eval(dz))
            }
        }
    }

    /// Poles in the plane: roots of the reduced denominator, or the base
    /// point of a germ with negative leading exponent.
    pub fn poles(&self) -> Vec<Complex64> {
        match &self.repr {
            Repr::Rational(r) => r.den.roots().into_iter().map(|(z, _)| z).collect(),
            Repr::Laurent(w) => {
                if !self.domain.is_annulus() && w.leading(ZERO_TOL).is_some_and(|(k, _)| k < 0) {
                    vec![self.base_point]
                } else {
                    Vec::new()
                }
            }
        }
    }

    /// Zeros: roots of the reduced numerator, or the base point of a germ
    /// with positive leading exponent.
    pub fn zeros(&self) -> Vec<Complex64> {
        match &self.repr {
            Repr::Rational(r) => {
                if r.num.is_zero() {
                    Vec::new()
                } else {
                    r.num.roots().into_iter().map(|(z, _)| z).collect()
                }
            }
            Repr::Laurent(w) => {
                if !self.domain.is_annulus() && w.leading(ZERO_TOL).is_some_and(|(k, _)| k > 0) {
                    vec![self.base_point]
                } else {
                    Vec::new()
                }
            }
        }
    }
}

fn rational_residue(r: &RationalFn, p: Complex64) -> Result<Complex64> {
    if r.num.is_zero() {
        return Ok(Complex64::zero());
    }
    let pe = try_exact_from_c64(p).ok_or(SeriesError::NonFinite)?;
    let k = r.den.root_multiplicity(&pe);
    if k > 0 {
        let lead = r.num.root_multiplicity(&pe) as i32 - k as i32;
        if lead > -1 {
            return Ok(Complex64::zero());
        }
        let count = (-lead) as usize;
        let (_, c) = r.expansion_exact(&pe, count);
        return Ok(exact_to_c64(&c[count - 1]));
    }
    // p may approximate an irrational pole
    let near = r
        .den
        .roots()
        .into_iter()
        .filter(|(z, _)| (z - p).norm() <= 1e-9 * (1.0 + p.norm()))
        .min_by(|a, b| (a.0 - p).norm().total_cmp(&(b.0 - p).norm()));
    let Some((root, mult)) = near else {
        return Ok(Complex64::zero());
    };
    Ok(numeric_residue(r, root, mult))
}

/// Residue at a numerically located pole of known multiplicity: deflate the
/// denominator, then read the Taylor coefficient of `(z-r)^k f` at `r`.
pub(crate) fn numeric_residue(r: &RationalFn, root: Complex64, mult: usize) -> Complex64 {
    let mut d = r.den_f.clone();
    for _ in 0..mult {
        let n = d.len();
        let mut q = vec![Complex64::zero(); n - 1];
        let mut acc = Complex64::zero();
        for k in (1..n).rev() {
            acc = acc * root + d[k];
            q[k - 1] = acc;
        }
        d = q;
    }
    let shift = |c: &[Complex64]| -> Vec<Complex64> {
        let mut c = c.to_vec();
        let n = c.len();
        for i in 0..n {
            for k in (i..n.saturating_sub(1)).rev() {
                let t = c[k + 1] * root;
                c[k] += t;
            }
        }
        c
    };
    let ns = shift(&r.num_f);
    let ds = shift(&d);
    let q = series_divide(&ns, &ds, mult);
    q[mult - 1]
}

/// Exact antiderivative of a rational function, or `NonExact` when some
/// residue is nonzero. The proper part is sought as `A / gcd(Q, Q')`.
fn rational_antiderivative(r: &RationalFn) -> Result<RationalFn> {
    let (poly_part, rem) = r.num.div_rem(&r.den);
    let poly_int = poly_part.integral();
    if rem.is_zero() {
        return Ok(RationalFn::from_reduced(poly_int, Poly::one()));
    }
    let q = &r.den;
    let g = Poly::gcd(q, &q.derivative());
    let dg = g.degree().unwrap_or(0);
    let residue_hint = || {
        let roots = q.roots();
        let res = roots
            .iter()
            .map(|(z, m)| numeric_residue(r, *z, *m))
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or_default();
        SeriesError::NonExact(res)
    };
    if dg == 0 {
        return Err(residue_hint());
    }
    // unknown A = sum a_j z^j, j < deg g; (A' g - A g') q = rem * g^2
    let rhs = &rem * &(&g * &g);
    let gd = g.derivative();
    let columns: Vec<Poly> = (0..dg)
        .map(|j| {
            let basis = Poly::monomial(Exact::one(), j);
            &(&(&basis.derivative() * &g) - &(&basis * &gd)) * q
        })
        .collect();
    let rows = columns
        .iter()
        .map(|c| c.coeffs().len())
        .chain(std::iter::once(rhs.coeffs().len()))
        .max()
        .unwrap_or(0);
    let a: Vec<Vec<Exact>> = (0..rows)
        .map(|i| columns.iter().map(|c| c.coeff(i)).collect())
        .collect();
    let b: Vec<Exact> = (0..rows).map(|i| rhs.coeff(i)).collect();
    let sol = solve_exact(a, b).ok_or_else(residue_hint)?;
    let a_poly = Poly::from_coeffs(sol);
    let num = &(&poly_int * &g) + &a_poly;
    RationalFn::new(num, g)
}

/// Expresses every function in `fs` as a window compatible with the first
/// non-rational one. `None` when all of them are rational.
pub fn align_windows(fs: &[&MeroFunction]) -> Result<Option<(Vec<LaurentWindow>, Complex64, Domain)>> {
    let Some(target) = fs.iter().find(|f| !f.is_rational()) else {
        return Ok(None);
    };
    let ws = fs
        .iter()
        .map(|f| f.window_like(target))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some((ws, target.base_point, target.domain)))
}

pub fn ord(f: &MeroFunction, p: Complex64) -> Result<i32> {
    f.ord(p)
}

pub fn differentiate(f: &MeroFunction) -> MeroFunction {
    f.derivative()
}

pub fn residue(f: &MeroFunction, p: Complex64) -> Result<Complex64> {
    f.residue(p)
}

pub fn evaluate(f: &MeroFunction, z: Complex64) -> Result<Complex64> {
    f.evaluate(z)
}

pub fn arith(op: ArithOp, f: &MeroFunction, g: &MeroFunction) -> Result<MeroFunction> {
    match op {
        ArithOp::Add => f.add(g),
        ArithOp::Sub => f.sub(g),
        ArithOp::Mul => f.mul(g),
        ArithOp::Div => f.div(g),
    }
}

// ---------------------------------------------------------------------------
// JSON form

#[derive(Serialize, Deserialize)]
struct RationalJson {
    num: Vec<[f64; 2]>,
    den: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct LaurentJson {
    min_exp: i32,
    coeffs: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct MeroJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rational: Option<RationalJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    laurent: Option<LaurentJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base_point: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<Domain>,
}

fn bigint_f64(b: &num_bigint::BigInt) -> Option<f64> {
    use num_traits::ToPrimitive;
    let v = b.to_i64()?;
    (v.unsigned_abs() <= (1u64 << 53)).then_some(v as f64)
}

impl From<&MeroFunction> for MeroJson {
    fn from(f: &MeroFunction) -> Self {
        let (rational, laurent) = match &f.repr {
            Repr::Rational(r) => {
                let mut all: Vec<Exact> = r.num.coeffs().to_vec();
                all.extend(r.den.coeffs().iter().cloned());
                let (_, ints) = clear_denominators(&all);
                let exact_ints: Option<Vec<[f64; 2]>> = ints
                    .iter()
                    .map(|(re, im)| Some([bigint_f64(re)?, bigint_f64(im)?]))
                    .collect();
                let pairs = exact_ints.unwrap_or_else(|| {
                    all.iter().map(|c| wire::to_pair(exact_to_c64(c))).collect()
                });
                let split = r.num.coeffs().len();
                let num = if split == 0 {
                    vec![[0.0, 0.0]]
                } else {
                    pairs[..split].to_vec()
                };
                (
                    Some(RationalJson {
                        num,
                        den: pairs[split..].to_vec(),
                    }),
                    None,
                )
            }
            Repr::Laurent(w) => (
                None,
                Some(LaurentJson {
                    min_exp: w.min_exp,
                    coeffs: w.coeffs.iter().map(|c| wire::to_pair(*c)).collect(),
                }),
            ),
        };
        let base_point = (f.base_point != Complex64::zero()).then(|| wire::to_pair(f.base_point));
        let default_domain = match f.repr {
            Repr::Rational(_) => Domain::Plane,
            Repr::Laurent(_) => Domain::PuncturedDisk { radius: 1.0 },
        };
        let domain = (f.domain != default_domain).then_some(f.domain);
        MeroJson {
            rational,
            laurent,
            base_point,
            domain,
        }
    }
}

impl TryFrom<MeroJson> for MeroFunction {
    type Error = String;

    fn try_from(j: MeroJson) -> std::result::Result<Self, String> {
        let to_poly = |v: &[[f64; 2]]| -> std::result::Result<Poly, String> {
            v.iter()
                .map(|p| {
                    try_exact_from_c64(wire::from_pair(*p))
                        .ok_or_else(|| "non-finite coefficient".to_string())
                })
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(Poly::from_coeffs)
        };
        let base_point = j.base_point.map(wire::from_pair).unwrap_or_default();
        if !base_point.is_finite() {
            return Err("non-finite base point".into());
        }
        match (j.rational, j.laurent) {
            (Some(r), None) => {
                let f = MeroFunction::rational(to_poly(&r.num)?, to_poly(&r.den)?)
                    .map_err(|e| e.to_string())?;
                Ok(f.with_base_point(base_point)
                    .with_domain(j.domain.unwrap_or(Domain::Plane)))
            }
            (None, Some(l)) => {
                let coeffs: Vec<Complex64> = l.coeffs.iter().map(|p| wire::from_pair(*p)).collect();
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err("non-finite coefficient".into());
                }
                Ok(MeroFunction::laurent(
                    l.min_exp,
                    coeffs,
                    base_point,
                    j.domain.unwrap_or(Domain::PuncturedDisk { radius: 1.0 }),
                ))
            }
            _ => Err("expected exactly one of \"rational\" or \"laurent\"".into()),
        }
    }
}

impl Serialize for MeroFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MeroJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MeroFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MeroJson::deserialize(d)?;
        MeroFunction::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Convenience: `Rat` as an exact complex scalar.
pub fn real(r: Rat) -> Exact {
    Exact::new(r, Rat::zero())
}
