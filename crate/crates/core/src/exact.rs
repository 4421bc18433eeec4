//! Exact Gaussian-rational scalars.
//!
//! Every finite `f64` is a dyadic rational, so floating inputs convert into
//! this field without loss. Identities such as `det F = 1` are then decided
//! by exact cancellation instead of a tolerance.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rational real scalar.
pub type Rat = BigRational;

/// Complex number with exact rational real and imaginary parts.
pub type Exact = Complex<BigRational>;

pub fn exact_int(re: i64, im: i64) -> Exact {
    Complex::new(Rat::from_integer(re.into()), Rat::from_integer(im.into()))
}

/// `num/den` as a real exact scalar.
pub fn exact_ratio(num: i64, den: i64) -> Exact {
    Complex::new(
        Rat::new(BigInt::from(num), BigInt::from(den)),
        Rat::zero(),
    )
}

pub fn exact_i() -> Exact {
    exact_int(0, 1)
}

/// Lossless conversion of a finite complex float.
///
/// Panics on NaN or infinite components; callers validate input at the
/// boundary.
pub fn exact_from_c64(z: Complex64) -> Exact {
    let re = Rat::from_float(z.re).expect("non-finite real part");
    let im = Rat::from_float(z.im).expect("non-finite imaginary part");
    Complex::new(re, im)
}

pub fn try_exact_from_c64(z: Complex64) -> Option<Exact> {
    Some(Complex::new(Rat::from_float(z.re)?, Rat::from_float(z.im)?))
}

pub fn exact_from_f64(x: f64) -> Exact {
    exact_from_c64(Complex64::new(x, 0.0))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn exact_to_c64(z: &Exact) -> Complex64 {
    Complex64::new(rat_to_f64(&z.re), rat_to_f64(&z.im))
}

/// Scale factor turning every component of `values` into an integer, and
/// the integers themselves, divided by their common content.
///
/// Returns `(scale, integer parts)` where `value * scale = integer`.
pub fn clear_denominators(values: &[Exact]) -> (Rat, Vec<(BigInt, BigInt)>) {
    let mut lcm = BigInt::one();
    for v in values {
        lcm = lcm.lcm(v.re.denom());
        lcm = lcm.lcm(v.im.denom());
    }
    let mut ints: Vec<(BigInt, BigInt)> = values
        .iter()
        .map(|v| {
            let re = (&v.re * Rat::from_integer(lcm.clone())).to_integer();
            let im = (&v.im * Rat::from_integer(lcm.clone())).to_integer();
            (re, im)
        })
        .collect();
    let mut content = BigInt::zero();
    for (re, im) in &ints {
        content = content.gcd(re);
        content = content.gcd(im);
    }
    let mut scale = Rat::from_integer(lcm);
    if !content.is_zero() && !content.is_one() {
        for (re, im) in ints.iter_mut() {
            *re /= &content;
            *im /= &content;
        }
        scale /= Rat::from_integer(content);
    }
    (scale, ints)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_conversion_is_lossless() {
        let z = Complex64::new(0.3, -1.0 / 3.0);
        let e = exact_from_c64(z);
        assert_eq!(exact_to_c64(&e), z);
    }

    #[test]
    fn clearing_denominators_is_primitive() {
        let vals = [exact_ratio(-4, 3), exact_ratio(2, 3), exact_int(0, 2)];
        let (scale, ints) = clear_denominators(&vals);
        assert_eq!(scale, Rat::new(3.into(), 2.into()));
        assert_eq!(ints[0], (BigInt::from(-2), BigInt::from(0)));
        assert_eq!(ints[2], (BigInt::from(0), BigInt::from(3)));
    }
}
