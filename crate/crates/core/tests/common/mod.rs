//! Shared oracles and fixtures for the integration tests. Everything here is
//! written independently of the library's solvers.
#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use qdiff_core::Quaternion;
use std::f64::consts::SQRT_2;

pub fn q(a: f64, b: f64, c: f64, d: f64) -> Quaternion {
    Quaternion::new(a, b, c, d)
}

pub fn cexp(z: Complex64) -> Quaternion {
    Quaternion::from_complex(z.exp())
}

pub fn qcosh(p: Quaternion) -> Quaternion {
    (p.exp() + (-p).exp()) * 0.5
}

pub fn arb_quaternion(scale: f64) -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-scale..scale).prop_map(Quaternion::from_array)
}

pub fn arb_complex(scale: f64) -> impl Strategy<Value = Complex64> {
    (-scale..scale, -scale..scale).prop_map(|(a, b)| Complex64::new(a, b))
}

// ---------------------------------------------------------------------------
// Quadratic roots by Newton iteration on R^4.

fn gauss_solve4(mut m: [[f64; 4]; 4], mut rhs: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..4 {
            let f = m[r][col] / m[col][col];
            for c in col..4 {
                m[r][c] -= f * m[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = [0.0; 4];
    for r in (0..4).rev() {
        let s: f64 = (r + 1..4).map(|c| m[r][c] * x[c]).sum();
        x[r] = (rhs[r] - s) / m[r][r];
    }
    Some(x)
}

fn newton_polish(a: Quaternion, b: Quaternion, mut p: Quaternion) -> Option<Quaternion> {
    let basis = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    for _ in 0..200 {
        let f = p * p + a * p + b;
        if f.norm() < 1e-15 * (1.0 + p.norm_sqr() + a.norm() * p.norm() + b.norm()) {
            return Some(p);
        }
        let mut jac = [[0.0; 4]; 4];
        for (c, e) in basis.iter().enumerate() {
            let d = (*e * p + p * *e + a * *e).to_array();
            for r in 0..4 {
                jac[r][c] = d[r];
            }
        }
        let step = gauss_solve4(jac, f.to_array())?;
        p -= Quaternion::from_array(step);
        if !p.is_finite() {
            return None;
        }
    }
    let f = p * p + a * p + b;
    (f.norm() < 1e-10 * (1.0 + p.norm_sqr() + b.norm())).then_some(p)
}

/// Distinct roots found from a deterministic cloud of starting points.
pub fn newton_roots(a: Quaternion, b: Quaternion) -> Vec<Quaternion> {
    let scale = 1.0 + a.norm() + b.norm().sqrt();
    let mut found: Vec<Quaternion> = Vec::new();
    let mut seed = 0x9e3779b97f4a7c15u64;
    let mut next = || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        (seed as f64 / u64::MAX as f64 - 0.5) * 4.0 * scale
    };
    for _ in 0..64 {
        let start = q(next(), next(), next(), next());
        if let Some(r) = newton_polish(a, b, start) {
            if !found.iter().any(|f| (*f - r).norm() < 1e-7 * scale) {
                found.push(r);
            }
        }
    }
    found
}

// ---------------------------------------------------------------------------
// Closed forms of the worked quaternionic ODE examples.

pub struct ClosedFormIvp {
    pub name: &'static str,
    pub a: Quaternion,
    pub b: Quaternion,
    pub phi0: Quaternion,
    pub dphi0: Quaternion,
    pub exact: fn(f64) -> Quaternion,
}

/// The cosh argument is `sqrt(2) (1 + u)`, twice the square root of `u`.
fn parallel_exact(x: f64) -> Quaternion {
    let u = (Quaternion::I + Quaternion::J) * (1.0 / SQRT_2);
    (-u * x).exp() * qcosh((Quaternion::ONE + u) * (SQRT_2 * x)) * Quaternion::I
}

fn repeated_exact(x: f64) -> Quaternion {
    let qq = -q(1.0, 1.0, 1.0, 0.0) * 0.5;
    let e = (qq * x).exp();
    let norm = Quaternion::ONE + qq.inverse().unwrap() * (Quaternion::ONE + Quaternion::I * qq) * Quaternion::I;
    (e + (Quaternion::real(x) + Quaternion::I) * e * Quaternion::I) * norm.inverse().unwrap()
}

fn positive_delta_exact(x: f64) -> Quaternion {
    let e1 = cexp(Complex64::new(0.0, -x));
    let e2 = (-(Quaternion::I + Quaternion::J) * x).exp();
    (e1 * q(1.5, -0.5, -1.0, 0.0) + e2 * q(-1.0, 0.0, 1.0, 0.0)) * (-x).exp()
}

fn negative_delta_exact(x: f64) -> Quaternion {
    let e1 = (q(1.0, -1.0, -1.0, -1.0) * (0.5 * x)).exp();
    let e2 = (q(-1.0, -1.0, 1.0, -1.0) * (0.5 * x)).exp();
    (e1 + e2) * q(0.0, 0.5, 0.0, 0.5)
}

/// The exponents are the shifted roots `p + 1`; the printed form drops the
/// common factor `e^x`.
fn generic_exact(x: f64) -> Quaternion {
    let e1 = (q(1.0, -3.0, -1.0, -1.0) * (0.5 * x)).exp();
    let e2 = (-q(1.0, -1.0, 1.0, -1.0) * (0.5 * x)).exp();
    (e1 - e2) * q(0.0, -1.0, 1.0, 2.0) * (x.exp() / 6.0)
}

pub fn worked_ivps() -> Vec<ClosedFormIvp> {
    vec![
        ClosedFormIvp {
            name: "parallel",
            a: q(0.0, SQRT_2, SQRT_2, 0.0),
            b: q(-1.0, -2.0 * SQRT_2, -2.0 * SQRT_2, 0.0),
            phi0: Quaternion::I,
            dphi0: q(1.0, 0.0, 0.0, 1.0) * (1.0 / SQRT_2),
            exact: parallel_exact,
        },
        ClosedFormIvp {
            name: "repeated",
            a: q(1.0, 1.0, 0.0, 0.0),
            b: q(0.25, 0.5, 0.0, 0.5),
            phi0: Quaternion::ZERO,
            dphi0: -q(1.0, 1.0, 1.0, 0.0) * 0.5,
            exact: repeated_exact,
        },
        ClosedFormIvp {
            name: "orthogonal, positive discriminant",
            a: q(2.0, 0.0, 1.0, 0.0),
            b: q(2.0, 0.0, 1.0, -1.0),
            phi0: q(0.5, -0.5, 0.0, 0.0),
            dphi0: Quaternion::J,
            exact: positive_delta_exact,
        },
        ClosedFormIvp {
            name: "orthogonal, negative discriminant",
            a: Quaternion::K,
            b: Quaternion::J,
            phi0: q(0.0, 1.0, 0.0, 1.0),
            dphi0: Quaternion::ONE,
            exact: negative_delta_exact,
        },
        ClosedFormIvp {
            name: "generic",
            a: q(-2.0, 1.0, 0.0, 0.0),
            b: q(2.0, 0.0, 0.0, 1.0),
            phi0: Quaternion::ZERO,
            dphi0: Quaternion::J,
            exact: generic_exact,
        },
    ]
}

/// `(x + k/2) e^{ix}` for `phi'' + (k - i) phi' - j phi = 0`.
pub fn jordan_exact(x: f64) -> Quaternion {
    (Quaternion::real(x) + Quaternion::K * 0.5) * cexp(Complex64::new(0.0, x))
}

/// `((i+j) e^{-ix} + (j-i) cosh x + (k-1) sinh x) / 2` for `phi'' - j phi i = 0`.
pub fn complex_linear_exact(x: f64) -> Quaternion {
    ((Quaternion::I + Quaternion::J) * cexp(Complex64::new(0.0, -x))
        + (Quaternion::J - Quaternion::I) * x.cosh()
        + (Quaternion::K - Quaternion::ONE) * x.sinh())
        * 0.5
}

// ---------------------------------------------------------------------------
// Textbook complex quantum mechanics at W = 0, with hbar = m = 1 unless given.

pub fn step_reflection_textbook(e: f64, v: f64) -> f64 {
    if e <= v {
        return 1.0;
    }
    let p = (2.0 * e).sqrt();
    let pp = (2.0 * (e - v)).sqrt();
    ((p - pp) / (p + pp)).powi(2)
}

pub fn barrier_transmission_textbook(e: f64, v: f64, a: f64) -> f64 {
    if e > v {
        let k = (2.0 * (e - v)).sqrt();
        1.0 / (1.0 + v * v * (k * a).sin().powi(2) / (4.0 * e * (e - v)))
    } else {
        let kappa = (2.0 * (v - e)).sqrt();
        1.0 / (1.0 + v * v * (kappa * a).sinh().powi(2) / (4.0 * e * (v - e)))
    }
}

/// Bound-state energies of the finite well of depth `v`, width `a` by
/// bisection on the even and odd matching functions.
pub fn well_energies_textbook(v: f64, a: f64, hbar: f64, mass: f64) -> Vec<f64> {
    let k = |e: f64| (2.0 * mass * (e + v)).sqrt() / hbar;
    let kap = |e: f64| (-2.0 * mass * e).sqrt() / hbar;
    let even = |e: f64| k(e) * (k(e) * a / 2.0).sin() - kap(e) * (k(e) * a / 2.0).cos();
    let odd = |e: f64| k(e) * (k(e) * a / 2.0).cos() + kap(e) * (k(e) * a / 2.0).sin();
    let mut out = Vec::new();
    let n = 20000;
    let lo = -v * (1.0 - 1e-12);
    let hi = -v * 1e-12;
    for f in [&even as &dyn Fn(f64) -> f64, &odd] {
        let grid: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        for w in grid.windows(2) {
            let (mut x0, mut x1) = (w[0], w[1]);
            let (mut f0, f1) = (f(x0), f(x1));
            if f0 == 0.0 {
                out.push(x0);
                continue;
            }
            if f0 * f1 >= 0.0 {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (x0 + x1);
                let fm = f(mid);
                if fm == 0.0 || (x1 - x0) < 1e-15 * v {
                    x0 = mid;
                    x1 = mid;
                    break;
                }
                if f0 * fm < 0.0 {
                    x1 = mid;
                } else {
                    x0 = mid;
                    f0 = fm;
                }
            }
            out.push(0.5 * (x0 + x1));
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Sup-norm distance between two sampled quaternion sequences.
pub fn sup_diff(a: &[Quaternion], b: &[Quaternion]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (*x - *y).norm()).fold(0.0, f64::max)
}
