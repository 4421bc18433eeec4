//! Projections of `SL2(C)` to hyperbolic space `H^3` and de Sitter space
//! `S^3_1`, both realized in Minkowski space `L^4` through Hermitian
//! matrices
//!
//! ```text
//! (x0, x1, x2, x3)  <->  [[x0 + x3, x1 + i x2], [x1 - i x2, x0 - x3]]
//! ```
//!
//! whose determinant is minus the Minkowski square.

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sl2curve::Mat2;

/// Tolerance on matrix entries for group membership and unimodularity.
pub const GROUP_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum SpaceformError {
    #[error("matrix is not unimodular (|det - 1| = {0:.3e})")]
    NotUnimodular(f64),
    #[error("matrix is not Hermitian")]
    NotHermitian,
}

pub type Result<T> = std::result::Result<T, SpaceformError>;

/// A point of `L^4` with signature `(-+++)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct MinkowskiPoint {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl From<[f64; 4]> for MinkowskiPoint {
    fn from(a: [f64; 4]) -> Self {
        MinkowskiPoint::new(a[0], a[1], a[2], a[3])
    }
}

impl From<MinkowskiPoint> for [f64; 4] {
    fn from(p: MinkowskiPoint) -> Self {
        [p.x0, p.x1, p.x2, p.x3]
    }
}

impl MinkowskiPoint {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        MinkowskiPoint { x0, x1, x2, x3 }
    }

    /// `-x0^2 + x1^2 + x2^2 + x3^2`
    pub fn square(&self) -> f64 {
        -self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn max_abs_diff(&self, other: &MinkowskiPoint) -> f64 {
        [
            self.x0 - other.x0,
            self.x1 - other.x1,
            self.x2 - other.x2,
            self.x3 - other.x3,
        ]
        .iter()
        .fold(0.0, |m, d| m.max(d.abs()))
    }
}

/// Point of the hyperboloid model of `H^3`.
pub type H3Point = MinkowskiPoint;
/// Point of de Sitter space `S^3_1`.
pub type S31Point = MinkowskiPoint;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn to_her(x: &MinkowskiPoint) -> Mat2 {
    Matrix2::new(
        c(x.x0 + x.x3, 0.0),
        c(x.x1, x.x2),
        c(x.x1, -x.x2),
        c(x.x0 - x.x3, 0.0),
    )
}

pub fn is_hermitian(a: &Mat2, tol: f64) -> bool {
    (a - a.adjoint()).iter().all(|z| z.norm() <= tol)
}

pub fn to_l4(a: &Mat2) -> Result<MinkowskiPoint> {
    if !is_hermitian(a, GROUP_TOL) {
        return Err(SpaceformError::NotHermitian);
    }
    let p = a[(0, 0)].re;
    let q = a[(1, 1)].re;
    Ok(MinkowskiPoint::new(
        0.5 * (p + q),
        a[(0, 1)].re,
        a[(0, 1)].im,
        0.5 * (p - q),
    ))
}

fn check_unimodular(a: &Mat2) -> Result<()> {
    let d = (a.determinant() - c(1.0, 0.0)).norm();
    if d > GROUP_TOL {
        Err(SpaceformError::NotUnimodular(d))
    } else {
        Ok(())
    }
}

fn sig() -> Mat2 {
    Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
}

/// `A A^*`, a point of `H^3`.
pub fn project_h3(a: &Mat2) -> Result<H3Point> {
    check_unimodular(a)?;
    let h = a * a.adjoint();
    to_l4(&symmetrize(h))
}

/// `A diag(1, -1) A^*`, a point of `S^3_1`.
pub fn project_s31(a: &Mat2) -> Result<S31Point> {
    check_unimodular(a)?;
    let h = a * sig() * a.adjoint();
    to_l4(&symmetrize(h))
}

// Products like A A^* are Hermitian up to rounding; average out the noise.
fn symmetrize(h: Mat2) -> Mat2 {
    (h + h.adjoint()) * c(0.5, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Group {
    #[serde(rename = "SU2")]
    SU2,
    #[serde(rename = "SU11")]
    SU11,
}

/// `det A = 1` together with `A A^* = Id` (SU2) or
/// `A diag(1,-1) A^* = diag(1,-1)` (SU11), entrywise within `tol`.
pub fn membership(a: &Mat2, group: Group, tol: f64) -> bool {
    if (a.determinant() - c(1.0, 0.0)).norm() > tol {
        return false;
    }
    let (lhs, rhs) = match group {
        Group::SU2 => (a * a.adjoint(), Mat2::identity()),
        Group::SU11 => (a * sig() * a.adjoint(), sig()),
    };
    (lhs - rhs).iter().all(|z| z.norm() <= tol)
}

/// `(x1, x2, x3) / (1 + x0)`.
pub fn poincare_ball(x: &H3Point) -> [f64; 3] {
    let s = 1.0 / (1.0 + x.x0);
    [x.x1 * s, x.x2 * s, x.x3 * s]
}

/// Inverse of [`poincare_ball`].
pub fn from_ball(b: [f64; 3]) -> H3Point {
    let r2 = b.iter().map(|v| v * v).sum::<f64>();
    let s = 2.0 / (1.0 - r2);
    MinkowskiPoint::new((1.0 + r2) / (1.0 - r2), b[0] * s, b[1] * s, b[2] * s)
}

/// Hyperboloid defect `|<x, x> + 1| / max(1, x0^2)` of the point lifted
/// from a ball point; infinite outside the open ball.
pub fn ball_hyperboloid_defect(b: [f64; 3]) -> f64 {
    let r2 = b.iter().map(|v| v * v).sum::<f64>();
    if r2 >= 1.0 {
        return f64::INFINITY;
    }
    let x = from_ball(b);
    (x.square() + 1.0).abs() / (x.x0 * x.x0).max(1.0)
}

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    c(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Random element of `SL2(C)`: a Gaussian matrix rescaled by `1/sqrt(det)`,
/// rejecting `|det| < 1e-6`.
pub fn random_unimodular<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    loop {
        let a = Matrix2::from_fn(|_, _| gaussian_c64(rng));
        let d = a.determinant();
        if d.norm() >= 1e-6 {
            return a / d.sqrt();
        }
    }
}

/// Random element of `SU2` from a uniform unit quaternion.
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    loop {
        let a = gaussian_c64(rng);
        let b = gaussian_c64(rng);
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n > 1e-9 {
            let (a, b) = (a / n, b / n);
            return Matrix2::new(a, -b.conj(), b, a.conj());
        }
    }
}

/// Random element `[[a, b], [conj b, conj a]]` of `SU11` with
/// `|a|^2 - |b|^2 = 1`.
pub fn random_su11<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let t: f64 = rng.gen_range(0.0..2.0);
    let phase_a = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    let phase_b = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    let a = phase_a * t.cosh();
    let b = phase_b * t.sinh();
    Matrix2::new(a, b, b.conj(), a.conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(a: Complex64, b: Complex64) -> Mat2 {
        Matrix2::new(a, c(0.0, 0.0), c(0.0, 0.0), b)
    }

    #[test]
    fn identity_projections() {
        let id = Mat2::identity();
        assert_eq!(project_h3(&id).unwrap(), MinkowskiPoint::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(project_s31(&id).unwrap(), MinkowskiPoint::new(0.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn diagonal_boost() {
        let t = 0.7f64;
        let a = diag(c((t / 2.0).exp(), 0.0), c((-t / 2.0).exp(), 0.0));
        let h = project_h3(&a).unwrap();
        assert!(h.max_abs_diff(&MinkowskiPoint::new(t.cosh(), 0.0, 0.0, t.sinh())) < 1e-14);
        let s = project_s31(&a).unwrap();
        assert!(s.max_abs_diff(&MinkowskiPoint::new(t.sinh(), 0.0, 0.0, t.cosh())) < 1e-14);
        let b = poincare_ball(&h);
        assert!((b[2] - (t / 2.0).tanh()).abs() < 1e-15);
    }

    #[test]
    fn not_unimodular() {
        let a = diag(c(2.0, 0.0), c(1.0, 0.0));
        assert!(matches!(project_h3(&a), Err(SpaceformError::NotUnimodular(_))));
    }

    #[test]
    fn hermitian_identification() {
        assert_eq!(to_her(&MinkowskiPoint::new(1.0, 0.0, 0.0, 0.0)), Mat2::identity());
        let bad = Matrix2::new(c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0));
        assert_eq!(to_l4(&bad), Err(SpaceformError::NotHermitian));
        let x = MinkowskiPoint::new(0.3, -1.2, 2.5, 0.25);
        assert!(to_l4(&to_her(&x)).unwrap().max_abs_diff(&x) < 1e-15);
        assert!((to_her(&x).determinant().re + x.square()).abs() < 1e-14);
    }

    #[test]
    fn memberships() {
        let id = Mat2::identity();
        assert!(membership(&id, Group::SU2, GROUP_TOL));
        assert!(membership(&id, Group::SU11, GROUP_TOL));
        let th = 0.4;
        let r = diag(Complex64::from_polar(1.0, th), Complex64::from_polar(1.0, -th));
        assert!(membership(&r, Group::SU2, GROUP_TOL));
        assert!(membership(&r, Group::SU11, GROUP_TOL));
        let s = diag(c(2.0, 0.0), c(0.5, 0.0));
        assert!(!membership(&s, Group::SU2, GROUP_TOL));
        assert!(!membership(&s, Group::SU11, GROUP_TOL));
    }

    #[test]
    fn samplers_land_in_their_groups() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            assert!(membership(&random_su2(&mut rng), Group::SU2, 1e-12));
            assert!(membership(&random_su11(&mut rng), Group::SU11, 1e-12));
            let a = random_unimodular(&mut rng);
            assert!((a.determinant() - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn ball_round_trip() {
        let x = from_ball([0.2, -0.3, 0.5]);
        assert!((x.square() + 1.0).abs() < 1e-14);
        let b = poincare_ball(&x);
        assert!((b[0] - 0.2).abs() < 1e-15 && (b[2] - 0.5).abs() < 1e-15);
        assert!(ball_hyperboloid_defect([0.0, 0.0, 0.999999]) < 1e-8);
    }
}
