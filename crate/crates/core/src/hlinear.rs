//! `phi'' + a phi' + b phi = 0` with constant quaternionic `a`, `b` acting
//! from the left. Solutions are right-linear combinations `xi1 c1 + xi2 c2`.

use crate::error::{Error, Result};
use crate::matrix::{Matrix2H, QVector};
use crate::quadratic::{self, CaseTag, QuadraticSolution, RootSet};
use crate::quaternion::{dot, Quaternion};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Prefactor {
    One,
    /// `x + offset`.
    Affine(Quaternion),
}

/// `prefactor(x) exp(exponent x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisFunction {
    pub prefactor: Prefactor,
    pub exponent: Quaternion,
}

impl BasisFunction {
    pub fn exponential(exponent: Quaternion) -> Self {
        BasisFunction { prefactor: Prefactor::One, exponent }
    }

    /// Value and first two derivatives.
    pub fn jet(&self, x: f64) -> [Quaternion; 3] {
        let q = self.exponent;
        let e = (q * x).exp();
        match self.prefactor {
            Prefactor::One => [e, q * e, q * q * e],
            Prefactor::Affine(k) => {
                let p = Quaternion::real(x) + k;
                [p * e, e + p * q * e, (Quaternion::real(2.0) * q + p * q * q) * e]
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneralSolution {
    pub a: Quaternion,
    pub b: Quaternion,
    pub roots: QuadraticSolution,
    pub basis: [BasisFunction; 2],
    /// `-a0/2`, the real part shared by every exponent.
    pub a0shift: f64,
    /// Right coefficients fixed by initial data.
    pub coefficients: Option<[Quaternion; 2]>,
}

pub fn general_solution(a: Quaternion, b: Quaternion) -> Result<GeneralSolution> {
    let roots = quadratic::solve(a, b)?;
    let basis = match roots.roots {
        RootSet::Distinct([q1, q2]) => [BasisFunction::exponential(q1), BasisFunction::exponential(q2)],
        RootSet::RealPair([r1, r2]) => {
            [BasisFunction::exponential(Quaternion::real(r1)), BasisFunction::exponential(Quaternion::real(r2))]
        }
        RootSet::Sphere { center, alpha } => [
            BasisFunction::exponential(Quaternion::new(center, alpha, 0.0, 0.0)),
            BasisFunction::exponential(Quaternion::new(center, -alpha, 0.0, 0.0)),
        ],
        RootSet::Repeated(q) => {
            let offset = if roots.case == CaseTag::Orthogonal {
                let av = roots.coeffs.a;
                Quaternion::pure(av) * (1.0 / dot(av, av))
            } else {
                Quaternion::ZERO
            };
            [BasisFunction::exponential(q), BasisFunction { prefactor: Prefactor::Affine(offset), exponent: q }]
        }
    };
    Ok(GeneralSolution { a, b, roots, basis, a0shift: -a.scalar() / 2.0, coefficients: None })
}

pub fn solve_ivp(a: Quaternion, b: Quaternion, phi0: Quaternion, dphi0: Quaternion) -> Result<GeneralSolution> {
    let mut sol = general_solution(a, b)?;
    let f = sol.fundamental_matrix(0.0);
    let c = f.solve([phi0, dphi0]).map_err(|_| Error::DegenerateBasis(f.det_abs()))?;
    sol.coefficients = Some(c);
    Ok(sol)
}

impl GeneralSolution {
    /// `[[xi1, xi2], [xi1', xi2']]` at `x`.
    pub fn fundamental_matrix(&self, x: f64) -> Matrix2H {
        let [j1, j2] = self.basis.map(|f| f.jet(x));
        Matrix2H::new(j1[0], j2[0], j1[1], j2[1])
    }

    /// `phi`, `phi'`, `phi''` for the fixed coefficients (unit coefficients if none).
    pub fn jet(&self, x: f64) -> [Quaternion; 3] {
        let c = self.coefficients.unwrap_or([Quaternion::ONE, Quaternion::ONE]);
        let [j1, j2] = self.basis.map(|f| f.jet(x));
        [0, 1, 2].map(|k| j1[k] * c[0] + j2[k] * c[1])
    }

    /// `(phi(x), phi'(x))`.
    pub fn evaluate(&self, x: f64) -> QVector {
        let j = self.jet(x);
        [j[0], j[1]]
    }

    /// `|phi'' + a phi' + b phi|` at `x`.
    pub fn residual(&self, x: f64) -> f64 {
        let [p, dp, ddp] = self.jet(x);
        (ddp + self.a * dp + self.b * p).norm()
    }

    pub fn wronskian(&self, x: f64) -> f64 {
        let [j1, j2] = self.basis.map(|f| f.jet(x));
        wronskian([j1[0], j1[1]], [j2[0], j2[1]])
    }
}

/// Four elimination orders of `|det [[phi1, phi2], [phi1', phi2']]|`;
/// `None` where the leading factor vanishes.
pub fn wronskian_factorizations(phi1: QVector, phi2: QVector) -> [Option<f64>; 4] {
    let [f1, d1] = phi1;
    let [f2, d2] = phi2;
    let term = |lead: Quaternion, x: Quaternion, y: Quaternion, z: Quaternion| {
        lead.inverse().ok().map(|inv| lead.norm() * (x - y * inv * z).norm())
    };
    [
        term(f1, d2, d1, f2),
        term(f2, d1, d2, f1),
        term(d1, f2, f1, d2),
        term(d2, f1, f2, d1),
    ]
}

/// Dieudonne determinant of the fundamental matrix, using the order with
/// the largest leading factor.
pub fn wronskian(phi1: QVector, phi2: QVector) -> f64 {
    let leads = [phi1[0].norm(), phi2[0].norm(), phi1[1].norm(), phi2[1].norm()];
    let best = (0..4).max_by(|&x, &y| leads[x].total_cmp(&leads[y])).expect("four orders");
    wronskian_factorizations(phi1, phi2)[best].unwrap_or(0.0)
}

/// `|q1 - q2| |exp(q1 x)| |exp(q2 x)|` for the basis `{exp(q1 x), exp(q2 x)}`.
pub fn exponential_wronskian(q1: Quaternion, q2: Quaternion, x: f64) -> f64 {
    (q1 - q2).norm() * (q1 * x).exp().norm() * (q2 * x).exp().norm()
}

/// `2q + a + [b, h.a/|a|^2]` for the repeated root `q`; vanishes exactly
/// when `(x + h.a/|a|^2) exp(q x)` solves the equation.
pub fn repeated_root_cancellation(a: Quaternion, b: Quaternion) -> Result<Quaternion> {
    let sol = quadratic::solve(a, b)?;
    let RootSet::Repeated(q) = sol.roots else {
        return Err(Error::UnsupportedStructure(format!("roots are not repeated ({:?})", sol.case)));
    };
    let av = a.vector();
    let a2 = dot(av, av);
    let kappa = if a2 > 0.0 { Quaternion::pure(av) * (1.0 / a2) } else { Quaternion::ZERO };
    Ok(q * 2.0 + a + b.commutator(kappa))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: f64, b: f64, c: f64, d: f64) -> Quaternion {
        Quaternion::new(a, b, c, d)
    }

    #[test]
    fn harmonic_oscillator() {
        let sol = solve_ivp(Quaternion::ZERO, Quaternion::ONE, Quaternion::ONE, Quaternion::ZERO).unwrap();
        for x in [0.0, 0.3, 1.7] {
            let [p, dp] = sol.evaluate(x);
            assert!((p - Quaternion::real(x.cos())).norm() < 1e-14);
            assert!((dp + Quaternion::real(x.sin())).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_coefficients_give_linear() {
        let sol = solve_ivp(Quaternion::ZERO, Quaternion::ZERO, Quaternion::J, Quaternion::K).unwrap();
        let [p, _] = sol.evaluate(2.0);
        assert!((p - (Quaternion::J + Quaternion::K * 2.0)).norm() < 1e-15);
    }

    #[test]
    fn repeated_root_affine_offset() {
        // a = k - i, b = -j: repeated root i
        let sol = general_solution(Quaternion::K - Quaternion::I, -Quaternion::J).unwrap();
        assert_eq!(sol.roots.case, CaseTag::Orthogonal);
        match sol.basis[1].prefactor {
            Prefactor::Affine(k) => assert!((k - (Quaternion::K - Quaternion::I) * 0.5).norm() < 1e-15),
            Prefactor::One => panic!("expected affine prefactor"),
        }
        assert!((sol.basis[0].exponent - Quaternion::I).norm() < 1e-14);
        for x in [0.0, 0.5, 2.0] {
            for f in sol.basis {
                let [p, dp, ddp] = f.jet(x);
                assert!((ddp + sol.a * dp + sol.b * p).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn cancellation_vanishes() {
        let a = q(1.0, 1.0, 0.0, 0.0);
        let b = q(0.25, 0.5, 0.0, 0.5);
        assert!(repeated_root_cancellation(a, b).unwrap().norm() < 1e-15);
    }

    #[test]
    fn wronskian_orders_agree() {
        let p1 = [q(0.3, 1.0, -0.5, 0.2), q(1.0, 0.0, 0.7, -0.1)];
        let p2 = [q(-1.2, 0.4, 0.0, 0.9), q(0.2, 0.3, -0.8, 1.5)];
        let det = Matrix2H::new(p1[0], p2[0], p1[1], p2[1]).det_abs();
        for w in wronskian_factorizations(p1, p2) {
            assert!((w.unwrap() - det).abs() < 1e-13);
        }
    }
}
