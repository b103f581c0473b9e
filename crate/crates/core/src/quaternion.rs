//! Real quaternions in (1, i, j, k) order with the Hamilton product, their
//! symplectic split `q = z1 + j z2`, and the complex-linear operators
//! `psi -> A psi + B psi i`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm3(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale3(s: f64, a: Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

pub fn add3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

/// `q = z1 + j z2` with `z1 = q0 + i q1` and `z2 = q2 - i q3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymplecticPair {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Quaternion { q0, q1, q2, q3 }
    }

    pub const fn real(x: f64) -> Self {
        Quaternion::new(x, 0.0, 0.0, 0.0)
    }

    /// The pure quaternion `h . v = v0 i + v1 j + v2 k`.
    pub const fn pure(v: Vec3) -> Self {
        Quaternion::new(0.0, v[0], v[1], v[2])
    }

    pub const fn from_parts(scalar: f64, v: Vec3) -> Self {
        Quaternion::new(scalar, v[0], v[1], v[2])
    }

    pub fn from_complex(z: Complex64) -> Self {
        Quaternion::new(z.re, z.im, 0.0, 0.0)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.q0, self.q1, self.q2, self.q3]
    }

    pub fn scalar(self) -> f64 {
        self.q0
    }

    pub fn vector(self) -> Vec3 {
        [self.q1, self.q2, self.q3]
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    pub fn norm_sqr(self) -> f64 {
        self.q0 * self.q0 + self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.q0.is_finite() && self.q1.is_finite() && self.q2.is_finite() && self.q3.is_finite()
    }

    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::Singular(self.to_string()));
        }
        Ok(self.conj() * (1.0 / n2))
    }

    /// `exp(q0) (cos|v| + v/|v| sin|v|)`.
    pub fn exp(self) -> Self {
        let v = self.vector();
        let n = norm3(v);
        let sinc = if n < 1e-6 {
            let n2 = n * n;
            1.0 - n2 / 6.0 + n2 * n2 / 120.0
        } else {
            n.sin() / n
        };
        let e = self.q0.exp();
        Quaternion::from_parts(e * n.cos(), scale3(e * sinc, v))
    }

    /// `self * z` for a complex `z` embedded as `re + i im`.
    pub fn mul_complex(self, z: Complex64) -> Self {
        self * Quaternion::from_complex(z)
    }

    pub fn commutator(self, other: Self) -> Self {
        self * other - other * self
    }

    pub fn to_symplectic(self) -> SymplecticPair {
        SymplecticPair {
            z1: Complex64::new(self.q0, self.q1),
            z2: Complex64::new(self.q2, -self.q3),
        }
    }

    pub fn from_symplectic(p: SymplecticPair) -> Self {
        Quaternion::new(p.z1.re, p.z1.im, p.z2.re, -p.z2.im)
    }

    /// Complex 2x2 matrix of `psi -> self * psi` acting on `(z1, z2)` of `psi`.
    pub fn left_matrix(self) -> [[Complex64; 2]; 2] {
        let SymplecticPair { z1, z2 } = self.to_symplectic();
        [[z1, -z2.conj()], [z2, z1.conj()]]
    }
}

impl SymplecticPair {
    pub fn new(z1: Complex64, z2: Complex64) -> Self {
        SymplecticPair { z1, z2 }
    }

    pub fn to_quaternion(self) -> Quaternion {
        Quaternion::from_symplectic(self)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {} {})", self.q0, self.q1, self.q2, self.q3)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.q0 + o.q0, self.q1 + o.q1, self.q2 + o.q2, self.q3 + o.q3)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.q0 - o.q0, self.q1 - o.q1, self.q2 - o.q2, self.q3 - o.q3)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.q0, -self.q1, -self.q2, -self.q3)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a0, a1, a2, a3) = (self.q0, self.q1, self.q2, self.q3);
        let (b0, b1, b2, b3) = (o.q0, o.q1, o.q2, o.q3);
        Quaternion::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Quaternion {
        iter.fold(Quaternion::ZERO, |acc, q| acc + q)
    }
}

/// `psi -> left * psi + right_i * psi * i`, linear over complex scalars
/// multiplied from the right.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RightLinearScalarOp {
    pub left: Quaternion,
    pub right_i: Quaternion,
}

impl RightLinearScalarOp {
    pub const ZERO: RightLinearScalarOp =
        RightLinearScalarOp { left: Quaternion::ZERO, right_i: Quaternion::ZERO };
    pub const IDENTITY: RightLinearScalarOp =
        RightLinearScalarOp { left: Quaternion::ONE, right_i: Quaternion::ZERO };

    pub fn new(left: Quaternion, right_i: Quaternion) -> Self {
        RightLinearScalarOp { left, right_i }
    }

    pub fn left_mul(q: Quaternion) -> Self {
        RightLinearScalarOp { left: q, right_i: Quaternion::ZERO }
    }

    pub fn apply(&self, psi: Quaternion) -> Quaternion {
        self.left * psi + self.right_i * psi * Quaternion::I
    }

    /// Complex 2x2 matrix acting on the symplectic pair of `psi`.
    pub fn counterpart(&self) -> [[Complex64; 2]; 2] {
        let a = self.left.left_matrix();
        let b = self.right_i.left_matrix();
        let i = Complex64::i();
        [[a[0][0] + i * b[0][0], a[0][1] + i * b[0][1]], [a[1][0] + i * b[1][0], a[1][1] + i * b[1][1]]]
    }

    /// The operator `self o other`.
    pub fn compose(&self, other: &Self) -> Self {
        RightLinearScalarOp {
            left: self.left * other.left - self.right_i * other.right_i,
            right_i: self.left * other.right_i + self.right_i * other.left,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        RightLinearScalarOp { left: self.left * s, right_i: self.right_i * s }
    }

    pub fn is_zero(&self) -> bool {
        self.left == Quaternion::ZERO && self.right_i == Quaternion::ZERO
    }
}

impl Add for RightLinearScalarOp {
    type Output = RightLinearScalarOp;
    fn add(self, o: Self) -> Self {
        RightLinearScalarOp { left: self.left + o.left, right_i: self.right_i + o.right_i }
    }
}

impl Neg for RightLinearScalarOp {
    type Output = RightLinearScalarOp;
    fn neg(self) -> Self {
        RightLinearScalarOp { left: -self.left, right_i: -self.right_i }
    }
}

impl From<Quaternion> for RightLinearScalarOp {
    fn from(q: Quaternion) -> Self {
        RightLinearScalarOp::left_mul(q)
    }
}

/// Coefficients `(c_plus, c_minus)` with
/// `exp(h.axis x) = exp(i |axis| x) c_plus + exp(-i |axis| x) c_minus`.
pub fn rebase_sphere_exponential(axis: Vec3) -> Result<(Quaternion, Quaternion)> {
    let alpha = norm3(axis);
    if alpha == 0.0 {
        return Err(Error::ZeroAxis);
    }
    let ih = Quaternion::I * Quaternion::pure(axis);
    let s = 1.0 / (2.0 * alpha);
    let c_plus = (Quaternion::real(alpha) - ih) * s;
    let c_minus = (Quaternion::real(alpha) + ih) * s;
    Ok((c_plus, c_minus))
}
