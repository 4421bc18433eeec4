//! Dense univariate polynomials over the Gaussian rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::exact::{exact_to_c64, Exact};

/// Polynomial with ascending coefficients; trailing zeros are never stored.
#[derive(Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Exact>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<Complex64> = self.coeffs.iter().map(exact_to_c64).collect();
        write!(f, "Poly{c:?}")
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Exact::one())
    }

    pub fn constant(c: Exact) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(c: Exact, k: usize) -> Self {
        let mut coeffs = vec![Exact::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(Exact::one(), 1)
    }

    /// `z - a`.
    pub fn linear_root(a: &Exact) -> Self {
        Self::from_coeffs(vec![-a.clone(), Exact::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Exact>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Exact] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Exact> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Exact {
        self.coeffs.get(k).cloned().unwrap_or_else(Exact::zero)
    }

    pub fn scale(&self, c: &Exact) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => {
                let inv = Exact::one() / l;
                self.scale(&inv)
            }
        }
    }

    /// Multiply by `z^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Exact::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Number of trailing zero coefficients, i.e. the order of vanishing at 0.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Exact::from(num_rational::BigRational::from_integer(k.into())))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Exact::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            let d = num_rational::BigRational::from_integer((k + 1).into());
            coeffs.push(c / Exact::from(d));
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn eval(&self, z: &Exact) -> Exact {
        let mut acc = Exact::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(exact_to_c64).collect()
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let inv_lead = Exact::one() / d.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Exact::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &inv_lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Exact quotient; the caller guarantees divisibility.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        // Reduction mod a prime bounds the gcd degree from above, which
        // settles the common coprime and exact-divisor cases without
        // running Euclid over the rationals.
        if let Some(d) = modp::gcd_degree(a, b) {
            if d == 0 {
                return Poly::one();
            }
            let (small, big) = if a.coeffs.len() <= b.coeffs.len() { (a, b) } else { (b, a) };
            if d + 1 == small.coeffs.len() && big.div_rem(small).1.is_zero() {
                return small.monic();
            }
        }
        let mut x = a.monic();
        let mut y = b.monic();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r.monic();
        }
        x
    }

    /// Synthetic division by `z - a`: returns the quotient and `p(a)`.
    pub fn deflate(&self, a: &Exact) -> (Poly, Exact) {
        if self.is_zero() {
            return (Poly::zero(), Exact::zero());
        }
        let n = self.coeffs.len();
        let mut quot = vec![Exact::zero(); n - 1];
        let mut acc = Exact::zero();
        for k in (0..n).rev() {
            acc = acc * a + &self.coeffs[k];
            if k > 0 {
                quot[k - 1] = acc.clone();
            }
        }
        (Poly::from_coeffs(quot), acc)
    }

    /// Multiplicity of `a` as a root (0 when `p(a) != 0`). Panics on the zero
    /// polynomial.
    pub fn root_multiplicity(&self, a: &Exact) -> usize {
        assert!(!self.is_zero(), "root multiplicity of the zero polynomial");
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.deflate(a);
            if !r.is_zero() {
                return m;
            }
            m += 1;
            p = q;
        }
    }

    /// Taylor shift: the polynomial `w -> p(a + w)`.
    pub fn taylor_shift(&self, a: &Exact) -> Poly {
        if a.is_zero() {
            return self.clone();
        }
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n.saturating_sub(1)).rev() {
                let t = &c[k + 1] * a;
                c[k] = &c[k] + t;
            }
        }
        Poly::from_coeffs(c)
    }

    /// Composition `p(q(z))` by Horner's rule.
    pub fn compose(&self, q: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Square-free factorisation `p = c * prod s_j^j` (Yun). Constant factors
    /// are dropped; each returned factor is monic and square-free.
    pub fn squarefree_factors(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a = Poly::gcd(&f, &df);
        let mut b = f.div_exact(&a);
        let mut c = df.div_exact(&a);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let ai = Poly::gcd(&b, &d);
            b = b.div_exact(&ai);
            c = d.div_exact(&ai);
            d = &c - &b.derivative();
            if ai.degree().unwrap_or(0) > 0 {
                out.push((ai.monic(), i));
            }
            i += 1;
        }
        out
    }

    /// Distinct complex roots with their multiplicities.
    pub fn roots(&self) -> Vec<(Complex64, usize)> {
        let mut out = Vec::new();
        for (factor, mult) in self.squarefree_factors() {
            for r in numeric_roots(&factor.to_c64()) {
                out.push((r, mult));
            }
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Exact::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

fn horner_c64(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

/// Roots of a square-free polynomial given by ascending float coefficients,
/// via simultaneous Aberth iteration followed by Newton polishing.
pub fn numeric_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|a| a.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    match n {
        0 => return Vec::new(),
        1 => return vec![-c[0] / c[1]],
        _ => {}
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|a| a / lead).collect();
    let deriv: Vec<Complex64> = monic
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| a * k as f64)
        .collect();
    // Cauchy bound on root moduli
    let bound = 1.0 + monic[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            Complex64::from_polar(0.5 * bound, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let p = horner_c64(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let dp = horner_c64(&deriv, z[i]);
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let step = ratio / (1.0 - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let dp = horner_c64(&deriv, *r);
            if dp.norm() == 0.0 {
                break;
            }
            let step = horner_c64(&monic, *r) / dp;
            if !step.is_finite() {
                break;
            }
            *r -= step;
        }
    }
    z
}

/// Solve `a x = b` over the Gaussian rationals. Returns `None` when the
/// system is inconsistent; free variables are set to zero.
pub fn solve_exact(mut a: Vec<Vec<Exact>>, mut b: Vec<Exact>) -> Option<Vec<Exact>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        b.swap(row, p);
        let inv = Exact::one() / &a[row][col];
        for k in col..cols {
            a[row][k] = &a[row][k] * &inv;
        }
        b[row] = &b[row] * &inv;
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..cols {
                    let t = &f * &a[row][k];
                    a[r][k] = &a[r][k] - t;
                }
                let t = &f * &b[row];
                b[r] = &b[r] - t;
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if b[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![Exact::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r].clone();
    }
    Some(x)
}


mod modp {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::ToPrimitive;

    use super::Poly;
    use crate::exact::Rat;

    const P: u64 = 998_244_353;
    /// A square root of -1 modulo `P` (which is 1 mod 4).
    const I: u64 = 911_660_635;

    fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    fn pow(mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(a: u64) -> u64 {
        pow(a, P - 2)
    }

    fn int(n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(P)).to_u64().unwrap_or(0)
    }

    fn rat(r: &Rat) -> Option<u64> {
        let d = int(r.denom());
        (d != 0).then(|| mul(int(r.numer()), inv(d)))
    }

    /// Image in F_p, or `None` when a denominator or the leading
    /// coefficient vanishes there.
    fn image(p: &Poly) -> Option<Vec<u64>> {
        let v = p
            .coeffs
            .iter()
            .map(|c| Some((rat(&c.re)? + mul(I, rat(&c.im)?)) % P))
            .collect::<Option<Vec<_>>>()?;
        (*v.last()? != 0).then_some(v)
    }

    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn rem(mut x: Vec<u64>, y: &[u64]) -> Vec<u64> {
        let lead = inv(*y.last().unwrap());
        while x.len() >= y.len() {
            let q = mul(*x.last().unwrap(), lead);
            let shift = x.len() - y.len();
            for (j, &c) in y.iter().enumerate() {
                x[shift + j] = (x[shift + j] + P - mul(q, c)) % P;
            }
            trim(&mut x);
        }
        x
    }

    /// Degree of the gcd of the images, an upper bound for the true gcd
    /// degree when it is defined.
    pub(super) fn gcd_degree(a: &Poly, b: &Poly) -> Option<usize> {
        let mut x = image(a)?;
        let mut y = image(b)?;
        while !y.is_empty() {
            let r = rem(x, &y);
            x = y;
            y = r;
        }
        Some(x.len() - 1)
    }
}
