//! Second-order equations whose coefficients are complex-linear operators
//! `A + B R_i`, with the stationary quaternionic Schrodinger equation
//! `(hbar^2/2m) psi'' - V psi + j W psi = i psi i E` as the main instance.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, principal_sqrt, CMatrix, CVector};
use crate::matrix::{lift, lower, Matrix2CL, QVector, RANK_TOL};
use crate::quaternion::{Quaternion, RightLinearScalarOp, SymplecticPair};

const CLUSTER_TOL: f64 = 1e-6;

/// `(u x + u_tilde) exp(z x)` when `u_tilde` is present, else `u exp(z x)`;
/// the exponential is complex and multiplies from the right.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClBasisFunction {
    pub u: Quaternion,
    pub u_tilde: Option<Quaternion>,
    pub z: Complex64,
}

impl ClBasisFunction {
    /// n-th derivative at `x`.
    pub fn derivative(&self, x: f64, n: u32) -> Quaternion {
        let e = (self.z * x).exp();
        let zn = self.z.powu(n);
        match self.u_tilde {
            None => self.u.mul_complex(zn * e),
            Some(ut) => {
                let p = self.u * x + ut;
                let lead = if n == 0 { Complex64::new(0.0, 0.0) } else { self.z.powu(n - 1) * n as f64 };
                self.u.mul_complex(lead * e) + p.mul_complex(zn * e)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClinearSolution {
    pub matrix: Matrix2CL,
    pub basis: Vec<ClBasisFunction>,
    /// Complex right coefficients of the basis functions.
    pub weights: Vec<Complex64>,
}

impl ClinearSolution {
    pub fn derivative(&self, x: f64, n: u32) -> Quaternion {
        self.basis.iter().zip(&self.weights).map(|(f, &k)| f.derivative(x, n).mul_complex(k)).sum()
    }

    /// `(phi(x), phi'(x))`.
    pub fn evaluate(&self, x: f64) -> QVector {
        [self.derivative(x, 0), self.derivative(x, 1)]
    }

    /// `|phi'' - M21(phi) - M22(phi')|`.
    pub fn residual(&self, x: f64) -> f64 {
        let [p, dp] = self.evaluate(x);
        let ddp = self.derivative(x, 2);
        (ddp - self.matrix.m[1][0].apply(p) - self.matrix.m[1][1].apply(dp)).norm()
    }
}

fn shifted(c: &CMatrix, z: Complex64) -> CMatrix {
    let mut s = c.clone();
    for k in 0..s.nrows() {
        s[(k, k)] -= z;
    }
    s
}

/// Groups eigenvalues closer than `tol` (transitively).
fn clusters(ev: &[Complex64], tol: f64) -> Vec<Vec<Complex64>> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for &z in ev {
        let hits: Vec<usize> =
            (0..groups.len()).filter(|&g| groups[g].iter().any(|w| (w - z).norm() <= tol)).collect();
        let mut merged = vec![z];
        for &g in hits.iter().rev() {
            merged.extend(groups.remove(g));
        }
        groups.push(merged);
    }
    groups
}

/// Solves `Phi' = M Phi` for companion `M = [[0, 1], [-b, -a]]`.
pub fn solve_clinear(m: &Matrix2CL, phi0: Quaternion, dphi0: Quaternion) -> Result<ClinearSolution> {
    let top = m.m[0];
    if !top[0].is_zero() || top[1] != RightLinearScalarOp::IDENTITY {
        return Err(Error::NotCompanion);
    }
    let c = m.counterpart();
    let scale = linalg::max_abs(&c).max(1.0);
    let ev = linalg::eigenvalues(&c);
    let mut basis = Vec::with_capacity(4);
    let mut columns: Vec<CVector> = Vec::with_capacity(4);
    for group in clusters(&ev, CLUSTER_TOL * scale) {
        let n = group.len();
        let z = group.iter().sum::<Complex64>() / n as f64;
        let sv = linalg::svd_ascending(&shifted(&c, z));
        let nullity = sv.iter().filter(|(s, _)| *s <= RANK_TOL * scale).count();
        if n == 1 || nullity >= n {
            for (_, v) in sv.iter().take(n) {
                basis.push(ClBasisFunction { u: lift(v)[0], u_tilde: None, z });
                columns.push(v.clone());
            }
        } else if n == 2 && nullity == 1 {
            let v1 = sv[0].1.clone();
            let v2 = shifted(&c, z)
                .svd(true, true)
                .solve(&v1, RANK_TOL * scale)
                .map_err(|e| Error::UnsupportedStructure(e.to_string()))?;
            basis.push(ClBasisFunction { u: lift(&v1)[0], u_tilde: None, z });
            basis.push(ClBasisFunction { u: lift(&v1)[0], u_tilde: Some(lift(&v2)[0]), z });
            columns.push(v1);
            columns.push(v2);
        } else {
            return Err(Error::UnsupportedStructure(format!(
                "eigenvalue {z} with multiplicity {n} and {nullity} eigenvectors"
            )));
        }
    }
    let v = CMatrix::from_columns(&columns);
    let weights = linalg::solve(&v, &lower([phi0, dphi0]), 1e-13)
        .map_err(|_| Error::DegenerateBasis(linalg::min_singular_value(&v)))?;
    Ok(ClinearSolution { matrix: *m, basis, weights: weights.iter().copied().collect() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchrodingerParams {
    pub energy: f64,
    pub potential: f64,
    pub w: Complex64,
    pub hbar: f64,
    pub mass: f64,
}

impl SchrodingerParams {
    pub fn new(energy: f64, potential: f64, w: Complex64) -> Self {
        SchrodingerParams { energy, potential, w, hbar: 1.0, mass: 1.0 }
    }

    pub fn with_units(mut self, hbar: f64, mass: f64) -> Self {
        self.hbar = hbar;
        self.mass = mass;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(invalid("hbar", format!("must be positive, got {}", self.hbar)));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(invalid("mass", format!("must be positive, got {}", self.mass)));
        }
        if !self.energy.is_finite() || !self.potential.is_finite() || !(self.w.re.is_finite() && self.w.im.is_finite()) {
            return Err(invalid("energy/potential", "must be finite"));
        }
        Ok(())
    }

    /// `sqrt(2m)/hbar`, turning a mode root `z` into the spatial exponent.
    pub fn exponent_scale(&self) -> f64 {
        (2.0 * self.mass).sqrt() / self.hbar
    }

    /// `hbar^2 / 2m`.
    pub fn kinetic(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }

    /// `jW` as a quaternion.
    pub fn jw(&self) -> Quaternion {
        Quaternion::from_symplectic(SymplecticPair::new(Complex64::new(0.0, 0.0), self.w))
    }

    /// `sqrt(E^2 - |W|^2)` on the principal branch.
    pub fn s(&self) -> Complex64 {
        principal_sqrt(Complex64::new(self.energy * self.energy - self.w.norm_sqr(), 0.0))
    }
}

/// Roots `+-z_minus`, `+-z_plus` of `z^4 - 2V z^2 + V^2 + |W|^2 - E^2` and their
/// quaternionic mode vectors, normalized as `u_minus = 1 + jW/(E+s)`,
/// `u_plus = conj(W)/(E+s) + j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchrodingerModes {
    pub z_minus: Complex64,
    pub z_plus: Complex64,
    pub u_minus: Quaternion,
    pub u_plus: Quaternion,
    pub s: Complex64,
    pub exponent_scale: f64,
}

pub fn mode_roots(p: &SchrodingerParams) -> (Complex64, Complex64) {
    let s = p.s();
    let v = Complex64::new(p.potential, 0.0);
    (principal_sqrt(v - s), principal_sqrt(v + s))
}

pub fn schrodinger_modes(p: &SchrodingerParams) -> Result<SchrodingerModes> {
    p.validate()?;
    let s = p.s();
    let den = s + p.energy;
    if den.norm() <= 1e-14 * (p.energy.abs() + p.w.norm()) || den.norm() == 0.0 {
        return Err(Error::ModeNormalizationSingular);
    }
    let (z_minus, z_plus) = mode_roots(p);
    let r = p.w / den;
    let u_minus = Quaternion::from_symplectic(SymplecticPair::new(Complex64::new(1.0, 0.0), r));
    let u_plus = Quaternion::from_symplectic(SymplecticPair::new(p.w.conj() / den, Complex64::new(1.0, 0.0)));
    Ok(SchrodingerModes { z_minus, z_plus, u_minus, u_plus, s, exponent_scale: p.exponent_scale() })
}

/// Unit mode vectors `(u_minus, u_plus)` in a gauge that stays finite when
/// `E + s` vanishes.
pub fn mode_vectors(p: &SchrodingerParams) -> (Quaternion, Quaternion) {
    let e = Complex64::new(p.energy, 0.0);
    let s = p.s();
    let w = p.w;
    let pick = |a: SymplecticPair, b: SymplecticPair| {
        let na = (a.z1.norm_sqr() + a.z2.norm_sqr()).sqrt();
        let nb = (b.z1.norm_sqr() + b.z2.norm_sqr()).sqrt();
        let (v, n) = if na >= nb { (a, na) } else { (b, nb) };
        Quaternion::from_symplectic(v) * (1.0 / n)
    };
    let minus = pick(SymplecticPair::new(e + s, w), SymplecticPair::new(w.conj(), e - s));
    let plus = pick(SymplecticPair::new(w.conj(), e + s), SymplecticPair::new(e - s, w));
    (minus, plus)
}

/// `(a_C, b_C)` with `psi'' + a_C psi' + b_C psi = 0` equivalent to the
/// stationary equation.
pub fn schrodinger_operator(p: &SchrodingerParams) -> (RightLinearScalarOp, RightLinearScalarOp) {
    let k2 = 1.0 / p.kinetic();
    let left = (Quaternion::real(p.potential) - p.jw()) * (-k2);
    let right_i = Quaternion::I * (-k2 * p.energy);
    (RightLinearScalarOp::ZERO, RightLinearScalarOp::new(left, right_i))
}

/// `(hbar^2/2m) psi'' - V psi + jW psi - i psi i E`.
pub fn schrodinger_residual(p: &SchrodingerParams, psi: Quaternion, d2psi: Quaternion) -> Quaternion {
    d2psi * p.kinetic() - psi * p.potential + p.jw() * psi - Quaternion::I * psi * Quaternion::I * p.energy
}

/// Same operator with the sign of the `i psi i E` term flipped.
pub fn time_reversed_residual(p: &SchrodingerParams, psi: Quaternion, d2psi: Quaternion) -> Quaternion {
    d2psi * p.kinetic() - psi * p.potential + p.jw() * psi + Quaternion::I * psi * Quaternion::I * p.energy
}

/// `(hbar^2/2m)^2 psi'''' - 2V (hbar^2/2m) psi'' + (V^2 + |W|^2 - E^2) psi`.
pub fn fourth_order_residual(p: &SchrodingerParams, sol: &ClinearSolution, x: f64) -> f64 {
    let t = p.kinetic();
    let v = p.potential;
    let r = sol.derivative(x, 4) * (t * t) - sol.derivative(x, 2) * (2.0 * v * t)
        + sol.derivative(x, 0) * (v * v + p.w.norm_sqr() - p.energy * p.energy);
    r.norm()
}

/// Left multiplication by `j` (real W) or `k` (imaginary W); the image
/// solves the equation with conjugated coefficients.
pub fn time_reversal_map(sol: &ClinearSolution, w: Complex64) -> Result<ClinearSolution> {
    let tol = 1e-14 * w.norm();
    let unit = if w.im.abs() <= tol {
        Quaternion::J
    } else if w.re.abs() <= tol {
        Quaternion::K
    } else {
        return Err(Error::TimeReversalBroken(w));
    };
    let inv = unit.conj();
    let conj_op = |op: RightLinearScalarOp| RightLinearScalarOp::new(unit * op.left * inv, unit * op.right_i * inv);
    let matrix = Matrix2CL::new(sol.matrix.m.map(|row| row.map(conj_op)));
    let basis = sol
        .basis
        .iter()
        .map(|f| ClBasisFunction { u: unit * f.u, u_tilde: f.u_tilde.map(|t| unit * t), z: f.z })
        .collect();
    Ok(ClinearSolution { matrix, basis, weights: sol.weights.clone() })
}

/// `zeta(t) = exp(-i E t / hbar) zeta(0)` for a unit quaternion `zeta(0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StationaryPhase {
    pub energy: f64,
    pub hbar: f64,
    pub zeta0: Quaternion,
}

pub fn stationary_phase(energy: f64, hbar: f64, zeta0: Quaternion) -> Result<StationaryPhase> {
    let n = zeta0.norm();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitPhase(n));
    }
    if !(hbar > 0.0) {
        return Err(invalid("hbar", "must be positive"));
    }
    Ok(StationaryPhase { energy, hbar, zeta0 })
}

impl StationaryPhase {
    pub fn at(&self, t: f64) -> Quaternion {
        let phase = Complex64::new(0.0, -self.energy * t / self.hbar).exp();
        Quaternion::from_complex(phase) * self.zeta0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_complex_linear_example() {
        // phi'' - j phi i = 0
        let b = RightLinearScalarOp::new(Quaternion::ZERO, -Quaternion::J);
        let m = Matrix2CL::companion(RightLinearScalarOp::ZERO, b);
        let sol = solve_clinear(&m, Quaternion::J, Quaternion::K).unwrap();
        for x in [0.0, 0.4, 1.3] {
            let e = Quaternion::from_complex(Complex64::new(0.0, -x).exp());
            let expected = ((Quaternion::I + Quaternion::J) * e
                + (Quaternion::J - Quaternion::I) * x.cosh()
                + (Quaternion::K - Quaternion::ONE) * x.sinh())
                * 0.5;
            assert!((sol.evaluate(x)[0] - expected).norm() < 1e-12);
            assert!(sol.residual(x) < 1e-12);
        }
    }

    #[test]
    fn defective_single_block() {
        // phi'' = 0 has a fourfold zero root: two 2-blocks, nullity 2 of 4
        let m = Matrix2CL::companion(RightLinearScalarOp::ZERO, RightLinearScalarOp::ZERO);
        assert!(matches!(solve_clinear(&m, Quaternion::ONE, Quaternion::J), Err(Error::UnsupportedStructure(_))));
    }

    #[test]
    fn modes_solve_the_mode_equation() {
        let p = SchrodingerParams::new(1.7, 0.8, Complex64::new(0.3, -0.4));
        let modes = schrodinger_modes(&p).unwrap();
        let check = |u: Quaternion, z: Complex64| {
            let zq = Quaternion::from_complex(z);
            let r = u * zq * zq - (Quaternion::real(p.potential) - p.jw()) * u
                - Quaternion::I * u * Quaternion::I * p.energy;
            r.norm()
        };
        assert!(check(modes.u_minus, modes.z_minus) < 1e-14);
        assert!(check(modes.u_plus, modes.z_plus) < 1e-14);
        let (um, up) = mode_vectors(&p);
        assert!(check(um, modes.z_minus) < 1e-14);
        assert!(check(up, modes.z_plus) < 1e-14);
    }

    #[test]
    fn singular_normalization() {
        let p = SchrodingerParams::new(-1.0, 0.5, Complex64::new(0.0, 0.0));
        assert_eq!(schrodinger_modes(&p), Err(Error::ModeNormalizationSingular));
        let (um, up) = mode_vectors(&p);
        assert!((um.norm() - 1.0).abs() < 1e-15 && (up.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn time_reversal_rules() {
        let b = RightLinearScalarOp::new(Quaternion::ZERO, -Quaternion::J);
        let m = Matrix2CL::companion(RightLinearScalarOp::ZERO, b);
        let sol = solve_clinear(&m, Quaternion::J, Quaternion::K).unwrap();
        assert!(time_reversal_map(&sol, Complex64::new(1.0, 0.0)).is_ok());
        assert!(time_reversal_map(&sol, Complex64::new(0.0, 1.0)).is_ok());
        assert_eq!(
            time_reversal_map(&sol, Complex64::new(1.0, 1.0)).unwrap_err(),
            Error::TimeReversalBroken(Complex64::new(1.0, 1.0))
        );
    }

    #[test]
    fn phase_is_unitary() {
        let ph = stationary_phase(2.0, 1.0, Quaternion::new(0.5, 0.5, 0.5, 0.5)).unwrap();
        assert!((ph.at(3.7).norm() - 1.0).abs() < 1e-15);
        assert_eq!(ph.at(0.0), ph.zeta0);
        assert!(matches!(stationary_phase(1.0, 1.0, Quaternion::real(2.0)), Err(Error::NonUnitPhase(_))));
    }
}
