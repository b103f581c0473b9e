//! Brute-force cross-checks: fixed-step RK4 for first-order quaternionic
//! systems, residuals of the second-order operators, and polynomial roots
//! from a balanced companion matrix with a hand-written shifted QR.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::matrix::{Matrix2CL, Matrix2H, QVector};
use crate::quaternion::{Quaternion, RightLinearScalarOp};

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub xs: Vec<f64>,
    /// `(phi, phi')` at each grid point.
    pub values: Vec<QVector>,
    pub step_size: f64,
}

impl Trajectory {
    pub fn last(&self) -> QVector {
        *self.values.last().expect("non-empty trajectory")
    }
}

fn axpy(a: f64, x: QVector, y: QVector) -> QVector {
    [y[0] + x[0] * a, y[1] + x[1] * a]
}

pub fn rk4_integrate(
    rhs: impl Fn(f64, QVector) -> QVector,
    phi0: Quaternion,
    dphi0: Quaternion,
    x0: f64,
    x1: f64,
    steps: usize,
) -> Result<Trajectory> {
    if steps < 16 {
        return Err(invalid("steps", format!("need at least 16, got {steps}")));
    }
    if !(x1 > x0) {
        return Err(invalid("x1", "interval must be increasing"));
    }
    let h = (x1 - x0) / steps as f64;
    let mut xs = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    let mut y = [phi0, dphi0];
    xs.push(x0);
    values.push(y);
    for n in 0..steps {
        let x = x0 + n as f64 * h;
        let k1 = rhs(x, y);
        let k2 = rhs(x + h / 2.0, axpy(h / 2.0, k1, y));
        let k3 = rhs(x + h / 2.0, axpy(h / 2.0, k2, y));
        let k4 = rhs(x + h, axpy(h, k3, y));
        let incr = [
            k1[0] + (k2[0] + k3[0]) * 2.0 + k4[0],
            k1[1] + (k2[1] + k3[1]) * 2.0 + k4[1],
        ];
        y = axpy(h / 6.0, incr, y);
        let xn = x0 + (n + 1) as f64 * h;
        if !(y[0].is_finite() && y[1].is_finite()) {
            return Err(Error::Divergence(xn));
        }
        xs.push(xn);
        values.push(y);
    }
    Ok(Trajectory { xs, values, step_size: h })
}

/// `(phi, phi') -> (phi', -a phi' - b phi)`.
pub fn quaternionic_rhs(a: Quaternion, b: Quaternion) -> impl Fn(f64, QVector) -> QVector {
    let m = Matrix2H::companion(a, b);
    move |_, y| m.apply(y)
}

/// `Phi -> M Phi` with the right-`i` parts applied exactly.
pub fn clinear_rhs(m: Matrix2CL) -> impl Fn(f64, QVector) -> QVector {
    move |_, y| m.apply(y)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Operator {
    Quaternionic { a: Quaternion, b: Quaternion },
    ComplexLinear { a: RightLinearScalarOp, b: RightLinearScalarOp },
}

impl Operator {
    pub fn apply(&self, phi: Quaternion, dphi: Quaternion, ddphi: Quaternion) -> Quaternion {
        match self {
            Operator::Quaternionic { a, b } => ddphi + *a * dphi + *b * phi,
            Operator::ComplexLinear { a, b } => ddphi + a.apply(dphi) + b.apply(phi),
        }
    }
}

/// Largest `|D phi|` over the samples; `eval` returns `(phi, phi', phi'')`.
pub fn residual_max(eval: impl Fn(f64) -> [Quaternion; 3], op: &Operator, xs: &[f64]) -> f64 {
    xs.iter()
        .map(|&x| {
            let [p, dp, ddp] = eval(x);
            op.apply(p, dp, ddp).norm()
        })
        .fold(0.0, f64::max)
}

/// Roots of `poly[0] z^n + ... + poly[n]` as eigenvalues of the balanced
/// companion matrix.
pub fn companion_roots(poly: &[Complex64]) -> Result<Vec<Complex64>> {
    if poly.len() < 2 {
        return Err(invalid("poly", "degree must be at least 1"));
    }
    let lead = poly[0];
    if lead.norm() == 0.0 {
        return Err(invalid("poly", "leading coefficient is zero"));
    }
    let n = poly.len() - 1;
    let mut h = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for k in 0..n {
        h[0][k] = -poly[k + 1] / lead;
    }
    for k in 1..n {
        h[k][k - 1] = Complex64::new(1.0, 0.0);
    }
    balance(&mut h);
    Ok(hessenberg_eigenvalues(h))
}

fn balance(h: &mut [Vec<Complex64>]) {
    const RADIX: f64 = 2.0;
    let n = h.len();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += h[j][i].norm();
                    r += h[i][j].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    h[i][j] /= f;
                    h[j][i] *= f;
                }
            }
        }
    }
}

/// Single-shift complex QR with deflation on an upper Hessenberg matrix.
fn hessenberg_eigenvalues(mut h: Vec<Vec<Complex64>>) -> Vec<Complex64> {
    let n = h.len();
    let norm: f64 = h.iter().flatten().map(|z| z.norm()).sum::<f64>().max(f64::MIN_POSITIVE);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut hi = n;
    let mut iter = 0;
    while hi > 0 {
        let top = hi - 1;
        // find the start of the unreduced block ending at `top`
        let mut lo = top;
        while lo > 0 {
            let scale = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            let scale = if scale == 0.0 { norm } else { scale };
            if h[lo][lo - 1].norm() <= f64::EPSILON * scale {
                h[lo][lo - 1] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == top || iter > 60 * n {
            out[top] = h[top][top];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        let (a, b, c, d) = (h[top - 1][top - 1], h[top - 1][top], h[top][top - 1], h[top][top]);
        let mut mu = {
            let half = (a - d) * 0.5;
            let disc = (half * half + b * c).sqrt();
            let m1 = (a + d) * 0.5 + disc;
            let m2 = (a + d) * 0.5 - disc;
            if (m1 - d).norm() < (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };
        if iter % 11 == 0 {
            mu = d + Complex64::new(0.75 * h[top][top - 1].norm(), 0.5 * h[top][top - 1].norm());
        }
        for k in lo..=top {
            h[k][k] -= mu;
        }
        let mut rot = Vec::with_capacity(top - lo);
        for k in lo..top {
            let (x, y) = (h[k][k], h[k + 1][k]);
            let r = x.norm().hypot(y.norm());
            let (cs, sn) = if r == 0.0 {
                (1.0, Complex64::new(0.0, 0.0))
            } else if x.norm() == 0.0 {
                (0.0, y.conj() / y.norm())
            } else {
                (x.norm() / r, x / x.norm() * y.conj() / r)
            };
            for j in k..=top {
                let (u, v) = (h[k][j], h[k + 1][j]);
                h[k][j] = u * cs + sn * v;
                h[k + 1][j] = -sn.conj() * u + v * cs;
            }
            rot.push((cs, sn));
        }
        for (idx, k) in (lo..top).enumerate() {
            let (cs, sn) = rot[idx];
            for row in h.iter_mut().take((k + 2).min(top) + 1).skip(lo) {
                let (u, v) = (row[k], row[k + 1]);
                row[k] = u * cs + v * sn.conj();
                row[k + 1] = -u * sn + v * cs;
            }
        }
        for k in lo..=top {
            h[k][k] += mu;
        }
    }
    out
}
