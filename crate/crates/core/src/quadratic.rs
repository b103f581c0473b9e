//! Closed-form roots of `q^2 + a q + b = 0` over the quaternions.
//!
//! The real part of `a` is removed by `q = p - a0/2`, leaving
//! `p^2 + (h.a) p + c0 + h.c = 0` with `c0 = b0 - a0^2/4` and
//! `c = b - (a0/2) a`. The geometry of `a` and `c` then picks the formula.

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::principal_sqrt;
use crate::quaternion::{add3, cross, dot, norm3, scale3, sub3, Quaternion, Vec3};

/// Relative threshold for the parallel and orthogonal gates.
pub const GEOMETRY_EPS: f64 = 1e-12;
const DELTA_EPS: f64 = 1e-12;
const CANCEL_EPS: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticCoeffs {
    pub a0: f64,
    pub a: Vec3,
    pub b0: f64,
    pub b: Vec3,
    pub c0: f64,
    pub c: Vec3,
    /// `a.c / |a|^2`, zero when `a` vanishes.
    pub d0: f64,
    /// `c - d0 a`.
    pub d: Vec3,
    /// `1/4 + (c0 - |c|^2/|a|^2)/|a|^2`, present when `a` is nonzero.
    pub delta: Option<f64>,
}

impl QuadraticCoeffs {
    pub fn new(a: Quaternion, b: Quaternion) -> Self {
        let (a0, av) = (a.scalar(), a.vector());
        let (b0, bv) = (b.scalar(), b.vector());
        let c0 = b0 - a0 * a0 / 4.0;
        let c = sub3(bv, scale3(a0 / 2.0, av));
        let a2 = dot(av, av);
        let (d0, delta) = if a2 > 0.0 {
            (dot(av, c) / a2, Some(0.25 + (c0 - dot(c, c) / a2) / a2))
        } else {
            (0.0, None)
        };
        let d = sub3(c, scale3(d0, av));
        QuadraticCoeffs { a0, a: av, b0, b: bv, c0, c, d0, d, delta }
    }

    pub fn a_quaternion(&self) -> Quaternion {
        Quaternion::from_parts(self.a0, self.a)
    }

    pub fn b_quaternion(&self) -> Quaternion {
        Quaternion::from_parts(self.b0, self.b)
    }

    fn a_is_zero(&self) -> bool {
        norm3(self.a) == 0.0
    }

    fn c_is_zero(&self) -> bool {
        let scale = norm3(self.b) + 0.5 * self.a0.abs() * norm3(self.a);
        norm3(self.c) <= CANCEL_EPS * scale
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    Parallel,
    Orthogonal,
    Generic,
    AZero,
    CZero,
    BothZero,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::Parallel => "parallel",
            CaseTag::Orthogonal => "orthogonal",
            CaseTag::Generic => "generic",
            CaseTag::AZero => "a-zero",
            CaseTag::CZero => "c-zero",
            CaseTag::BothZero => "both-zero",
        }
    }
}

/// Roots of the original (unshifted) equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RootSet {
    /// Two roots ordered by real part, then by vector norm, descending.
    Distinct([Quaternion; 2]),
    Repeated(Quaternion),
    /// Every `center + h.v` with `|v| = alpha`.
    Sphere { center: f64, alpha: f64 },
    RealPair([f64; 2]),
}

impl RootSet {
    /// Finitely many roots; a sphere yields its two complex representatives
    /// `center +- i alpha`.
    pub fn representatives(&self) -> Vec<Quaternion> {
        match *self {
            RootSet::Distinct(r) => r.to_vec(),
            RootSet::Repeated(q) => vec![q],
            RootSet::Sphere { center, alpha } => {
                vec![Quaternion::new(center, alpha, 0.0, 0.0), Quaternion::new(center, -alpha, 0.0, 0.0)]
            }
            RootSet::RealPair([r1, r2]) => vec![Quaternion::real(r1), Quaternion::real(r2)],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticSolution {
    pub coeffs: QuadraticCoeffs,
    pub case: CaseTag,
    pub roots: RootSet,
}

/// `|q^2 + a q + b|`.
pub fn residual(a: Quaternion, b: Quaternion, q: Quaternion) -> f64 {
    (q * q + a * q + b).norm()
}

pub fn classify(c: &QuadraticCoeffs) -> CaseTag {
    match (c.a_is_zero(), c.c_is_zero()) {
        (true, true) => CaseTag::BothZero,
        (true, false) => CaseTag::AZero,
        (false, true) => CaseTag::CZero,
        (false, false) => {
            let scale = norm3(c.a) * norm3(c.c);
            if norm3(cross(c.a, c.c)) <= GEOMETRY_EPS * scale {
                CaseTag::Parallel
            } else if dot(c.a, c.c).abs() <= GEOMETRY_EPS * scale {
                CaseTag::Orthogonal
            } else {
                CaseTag::Generic
            }
        }
    }
}

pub fn solve(a: Quaternion, b: Quaternion) -> Result<QuadraticSolution> {
    let coeffs = QuadraticCoeffs::new(a, b);
    let case = classify(&coeffs);
    let shift = -coeffs.a0 / 2.0;
    let unshift = |p: Quaternion| p + Quaternion::real(shift);
    let roots = match case {
        CaseTag::BothZero => {
            let c0 = coeffs.c0;
            let zero_scale = CANCEL_EPS * (coeffs.b0.abs() + coeffs.a0 * coeffs.a0 / 4.0);
            if c0.abs() <= zero_scale {
                RootSet::Repeated(Quaternion::real(shift))
            } else if c0 > 0.0 {
                RootSet::Sphere { center: shift, alpha: c0.sqrt() }
            } else {
                let r = (-c0).sqrt();
                RootSet::RealPair([shift + r, shift - r])
            }
        }
        CaseTag::AZero => {
            let nc = norm3(coeffs.c);
            in_plane(scale3(1.0 / nc, coeffs.c), 0.0, coeffs.c0, nc, unshift)
        }
        CaseTag::CZero => {
            let na = norm3(coeffs.a);
            in_plane(scale3(1.0 / na, coeffs.a), na, coeffs.c0, 0.0, unshift)
        }
        CaseTag::Parallel => {
            let na = norm3(coeffs.a);
            let alpha_c = dot(coeffs.a, coeffs.c) / na;
            in_plane(scale3(1.0 / na, coeffs.a), na, coeffs.c0, alpha_c, unshift)
        }
        CaseTag::Orthogonal => orthogonal(&coeffs, unshift),
        CaseTag::Generic => {
            let w = cubic_resolvent(&coeffs)?;
            let p0 = w.sqrt();
            let roots = [generic_root(&coeffs, p0), generic_root(&coeffs, -p0)];
            distinct(roots.map(unshift))
        }
    };
    Ok(QuadraticSolution { coeffs, case, roots })
}

fn distinct(mut r: [Quaternion; 2]) -> RootSet {
    let key = |q: &Quaternion| (q.scalar(), norm3(q.vector()));
    let (k0, k1) = (key(&r[0]), key(&r[1]));
    if k1.0 > k0.0 || (k1.0 == k0.0 && k1.1 > k0.1) {
        r.swap(0, 1);
    }
    RootSet::Distinct(r)
}

/// Roots in the complex plane spanned by `1` and the unit `u`, from
/// `z^2 + i alpha_a z + c0 + i alpha_c = 0`.
fn in_plane(u: Vec3, alpha_a: f64, c0: f64, alpha_c: f64, unshift: impl Fn(Quaternion) -> Quaternion) -> RootSet {
    let lift = |z: Complex64| unshift(Quaternion::from_parts(z.re, scale3(z.im, u)));
    let disc = Complex64::new(-alpha_a * alpha_a - 4.0 * c0, -4.0 * alpha_c);
    let half_lin = Complex64::new(0.0, -alpha_a / 2.0);
    let scale = alpha_a * alpha_a + 4.0 * c0.abs() + 4.0 * alpha_c.abs();
    if disc.norm() <= DELTA_EPS * scale {
        return RootSet::Repeated(lift(half_lin));
    }
    let s = principal_sqrt(disc) / 2.0;
    distinct([lift(half_lin + s), lift(half_lin - s)])
}

fn orthogonal(c: &QuadraticCoeffs, unshift: impl Fn(Quaternion) -> Quaternion) -> RootSet {
    let a2 = dot(c.a, c.a);
    let c2 = dot(c.c, c.c);
    let delta = c.delta.expect("orthogonal case has nonzero a");
    let ac = cross(c.a, c.c);
    let build = |p0: f64, x: f64, y: f64, z: f64| {
        let v = add3(add3(scale3(x, c.a), scale3(y, c.c)), scale3(z, ac));
        unshift(Quaternion::from_parts(p0, v))
    };
    let delta_scale = 0.25 + c.c0.abs() / a2 + c2 / (a2 * a2);
    if delta.abs() <= DELTA_EPS * delta_scale {
        return RootSet::Repeated(build(0.0, -0.5, 0.0, 1.0 / a2));
    }
    if delta > 0.0 {
        let s = delta.sqrt();
        return distinct([build(0.0, -0.5 + s, 0.0, 1.0 / a2), build(0.0, -0.5 - s, 0.0, 1.0 / a2)]);
    }
    let mut radicand = 2.0 * ((c.c0 * c.c0 + c2).sqrt() - c.c0) - a2;
    if radicand < 0.0 {
        log::warn!("clamping negative radicand {radicand:e} to zero in the orthogonal case");
        radicand = 0.0;
    }
    let p0 = 0.5 * radicand.sqrt();
    let root = |p0: f64| {
        let den = 4.0 * p0 * p0 + a2;
        build(p0, -0.5, -2.0 * p0 / den, 1.0 / den)
    };
    distinct([root(p0), root(-p0)])
}

fn generic_root(c: &QuadraticCoeffs, p0: f64) -> Quaternion {
    let a2 = dot(c.a, c.a);
    let den = 4.0 * p0 * p0 + a2;
    let x = -(p0 + c.d0) / (2.0 * p0);
    let y = -2.0 * p0 / den;
    let z = 1.0 / den;
    let ad = cross(c.a, c.d);
    Quaternion::from_parts(p0, add3(add3(scale3(x, c.a), scale3(y, c.d)), scale3(z, ad)))
}

/// Coefficients, highest degree first, of the cubic satisfied by `w = p0^2`.
pub fn resolvent_coefficients(c: &QuadraticCoeffs) -> [f64; 4] {
    let a2 = dot(c.a, c.a);
    let dd = dot(c.d, c.d);
    [
        16.0,
        8.0 * (a2 + 2.0 * c.c0),
        4.0 * (a2 * (c.c0 - c.d0 * c.d0) + a2 * a2 / 4.0 - dd),
        -c.d0 * c.d0 * a2 * a2,
    ]
}

/// Unique positive root of the resolvent cubic: companion eigenvalues
/// followed by one Newton step.
pub fn cubic_resolvent(c: &QuadraticCoeffs) -> Result<f64> {
    let k = resolvent_coefficients(c);
    let m = Matrix3::new(-k[1] / k[0], -k[2] / k[0], -k[3] / k[0], 1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
    let ev = m.complex_eigenvalues();
    let scale = ev.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let positive: Vec<f64> = ev
        .iter()
        .filter(|z| z.im.abs() <= 1e-7 * scale && z.re > 0.0)
        .map(|z| z.re)
        .collect();
    if positive.len() > 1 {
        log::warn!("resolvent cubic has {} positive roots, taking the largest", positive.len());
    }
    let w = positive.into_iter().fold(f64::NAN, f64::max);
    if !w.is_finite() {
        return Err(Error::NoPositiveResolventRoot(k));
    }
    let f = ((k[0] * w + k[1]) * w + k[2]) * w + k[3];
    let df = (3.0 * k[0] * w + 2.0 * k[1]) * w + k[2];
    let refined = if df != 0.0 { w - f / df } else { w };
    if refined > 0.0 {
        Ok(refined)
    } else {
        Ok(w)
    }
}
