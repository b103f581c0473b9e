//! 2x2 quaternionic matrices, their right eigenproblem through the 4x4
//! complex counterpart, and the first-order form of the quaternionic ODE.

use std::ops::{Add, Mul, Sub};

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::quaternion::{Quaternion, RightLinearScalarOp, SymplecticPair};

/// Relative singular-value threshold used to count null directions.
pub const RANK_TOL: f64 = 1e-9;
/// Minimum Dieudonne determinant of unit-column eigenvector matrices.
pub const INDEPENDENCE_TOL: f64 = 1e-10;
const CLUSTER_TOL: f64 = 1e-6;

pub type QVector = [Quaternion; 2];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2H {
    pub m: [[Quaternion; 2]; 2],
}

impl Matrix2H {
    pub fn new(m11: Quaternion, m12: Quaternion, m21: Quaternion, m22: Quaternion) -> Self {
        Matrix2H { m: [[m11, m12], [m21, m22]] }
    }

    pub fn identity() -> Self {
        Matrix2H::new(Quaternion::ONE, Quaternion::ZERO, Quaternion::ZERO, Quaternion::ONE)
    }

    /// `[[0, 1], [-b, -a]]`, the system matrix of `phi'' + a phi' + b phi = 0`.
    pub fn companion(a: Quaternion, b: Quaternion) -> Self {
        Matrix2H::new(Quaternion::ZERO, Quaternion::ONE, -b, -a)
    }

    pub fn from_columns(c1: QVector, c2: QVector) -> Self {
        Matrix2H::new(c1[0], c2[0], c1[1], c2[1])
    }

    pub fn column(&self, k: usize) -> QVector {
        [self.m[0][k], self.m[1][k]]
    }

    pub fn apply(&self, v: QVector) -> QVector {
        [self.m[0][0] * v[0] + self.m[0][1] * v[1], self.m[1][0] * v[0] + self.m[1][1] * v[1]]
    }

    /// Quaternionic conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Matrix2H::new(self.m[0][0].conj(), self.m[1][0].conj(), self.m[0][1].conj(), self.m[1][1].conj())
    }

    pub fn max_norm(&self) -> f64 {
        self.m.iter().flatten().map(|q| q.norm()).fold(0.0, f64::max)
    }

    pub fn counterpart(&self) -> CMatrix {
        let mut c = CMatrix::zeros(4, 4);
        for r in 0..2 {
            for k in 0..2 {
                let b = self.m[r][k].left_matrix();
                for (i, row) in b.iter().enumerate() {
                    for (j, &z) in row.iter().enumerate() {
                        c[(2 * r + i, 2 * k + j)] = z;
                    }
                }
            }
        }
        c
    }

    /// `|det|` in the Dieudonne sense, `sqrt(det)` of the counterpart.
    pub fn det_abs(&self) -> f64 {
        self.counterpart().determinant().re.max(0.0).sqrt()
    }

    /// Solves `self x = rhs` by elimination with the largest-norm pivot in
    /// the first column.
    pub fn solve(&self, rhs: QVector) -> Result<QVector> {
        let scale = self.max_norm();
        let (p, o) = if self.m[0][0].norm() >= self.m[1][0].norm() { (0, 1) } else { (1, 0) };
        let pivot = self.m[p][0];
        if pivot.norm() <= f64::EPSILON * scale || scale == 0.0 {
            return Err(Error::DegenerateBasis(self.det_abs()));
        }
        let pinv = pivot.inverse()?;
        let factor = self.m[o][0] * pinv;
        let reduced = self.m[o][1] - factor * self.m[p][1];
        if reduced.norm() <= 1e-14 * scale {
            return Err(Error::DegenerateBasis(self.det_abs()));
        }
        let x2 = reduced.inverse()? * (rhs[o] - factor * rhs[p]);
        let x1 = pinv * (rhs[p] - self.m[p][1] * x2);
        Ok([x1, x2])
    }

    pub fn inverse(&self) -> Result<Self> {
        let c1 = self.solve([Quaternion::ONE, Quaternion::ZERO])?;
        let c2 = self.solve([Quaternion::ZERO, Quaternion::ONE])?;
        Ok(Matrix2H::from_columns(c1, c2))
    }
}

impl Mul for Matrix2H {
    type Output = Matrix2H;
    fn mul(self, o: Matrix2H) -> Matrix2H {
        let e = |r: usize, k: usize| self.m[r][0] * o.m[0][k] + self.m[r][1] * o.m[1][k];
        Matrix2H::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl Add for Matrix2H {
    type Output = Matrix2H;
    fn add(self, o: Matrix2H) -> Matrix2H {
        let e = |r: usize, k: usize| self.m[r][k] + o.m[r][k];
        Matrix2H::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl Sub for Matrix2H {
    type Output = Matrix2H;
    fn sub(self, o: Matrix2H) -> Matrix2H {
        let e = |r: usize, k: usize| self.m[r][k] - o.m[r][k];
        Matrix2H::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

/// Matrix with complex-linear entries `A + B R_i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2CL {
    pub m: [[RightLinearScalarOp; 2]; 2],
}

impl Matrix2CL {
    pub fn new(m: [[RightLinearScalarOp; 2]; 2]) -> Self {
        Matrix2CL { m }
    }

    /// `[[0, 1], [-b, -a]]` for `phi'' + a(phi') + b(phi) = 0`.
    pub fn companion(a: RightLinearScalarOp, b: RightLinearScalarOp) -> Self {
        Matrix2CL { m: [[RightLinearScalarOp::ZERO, RightLinearScalarOp::IDENTITY], [-b, -a]] }
    }

    pub fn apply(&self, v: QVector) -> QVector {
        [
            self.m[0][0].apply(v[0]) + self.m[0][1].apply(v[1]),
            self.m[1][0].apply(v[0]) + self.m[1][1].apply(v[1]),
        ]
    }

    pub fn counterpart(&self) -> CMatrix {
        let mut c = CMatrix::zeros(4, 4);
        for r in 0..2 {
            for k in 0..2 {
                let b = self.m[r][k].counterpart();
                for (i, row) in b.iter().enumerate() {
                    for (j, &z) in row.iter().enumerate() {
                        c[(2 * r + i, 2 * k + j)] = z;
                    }
                }
            }
        }
        c
    }
}

impl From<Matrix2H> for Matrix2CL {
    fn from(h: Matrix2H) -> Self {
        Matrix2CL { m: h.m.map(|row| row.map(RightLinearScalarOp::left_mul)) }
    }
}

/// Quaternionic 2-vector from counterpart coordinates `(z1, z2, z1, z2)`.
pub fn lift(v: &CVector) -> QVector {
    [
        Quaternion::from_symplectic(SymplecticPair::new(v[0], v[1])),
        Quaternion::from_symplectic(SymplecticPair::new(v[2], v[3])),
    ]
}

pub fn lower(v: QVector) -> CVector {
    let (p, q) = (v[0].to_symplectic(), v[1].to_symplectic());
    CVector::from_vec(vec![p.z1, p.z2, q.z1, q.z2])
}

pub fn qnorm(v: QVector) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

/// `u^dagger v`.
pub fn qinner(u: QVector, v: QVector) -> Quaternion {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

fn scale_right(v: QVector, q: Quaternion) -> QVector {
    [v[0] * q, v[1] * q]
}

/// Unit norm, with the leading dominant counterpart coordinate made real positive.
fn normalize_phase(v: QVector) -> QVector {
    let n = qnorm(v);
    let c = lower(v);
    let max = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = c.iter().find(|z| z.norm() >= (1.0 - 1e-9) * max).copied().unwrap_or(Complex64::new(1.0, 0.0));
    let phase = pivot.conj() / pivot.norm();
    scale_right(v, Quaternion::from_complex(phase / n))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    /// Canonical representatives with non-negative imaginary part, sorted by (Im, Re).
    pub eigenvalues: [Complex64; 2],
    /// One vector per eigenvalue, or a single vector when defective.
    pub eigenvectors: Vec<QVector>,
    pub defective: bool,
}

/// One representative per conjugate pair of the counterpart spectrum.
fn canonical_pairs(ev: &[Complex64]) -> Vec<Complex64> {
    let mut left: Vec<Complex64> = ev.to_vec();
    let mut out = Vec::new();
    while !left.is_empty() {
        let (top, _) = left
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.im.total_cmp(&b.1.im).then(b.1.re.total_cmp(&a.1.re)))
            .expect("non-empty");
        let z = left.remove(top);
        if let Some((partner, _)) = left
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - z.conj()).norm().total_cmp(&(b.1 - z.conj()).norm()))
        {
            let w = left.remove(partner);
            out.push(Complex64::new(0.5 * (z.re + w.re), 0.5 * (z.im - w.im).max(0.0)));
        } else {
            out.push(z);
        }
    }
    linalg::sort_by_im_re(&mut out);
    out
}

fn shifted(c: &CMatrix, z: Complex64) -> CMatrix {
    let mut s = c.clone();
    for k in 0..s.nrows() {
        s[(k, k)] -= z;
    }
    s
}

/// Quaternionic Gram-Schmidt: keeps candidates not in the right span of earlier ones.
fn independent(candidates: impl IntoIterator<Item = QVector>, want: usize) -> Vec<QVector> {
    let mut basis: Vec<QVector> = Vec::new();
    for v in candidates {
        let n0 = qnorm(v);
        let mut r = v;
        for b in &basis {
            let p = qinner(*b, r);
            r = [r[0] - b[0] * p, r[1] - b[1] * p];
        }
        let n = qnorm(r);
        if n > 0.5 * n0 && n0 > 0.0 {
            basis.push(scale_right(r, Quaternion::real(1.0 / n)));
        }
        if basis.len() == want {
            break;
        }
    }
    basis
}

fn unit_column_det(v1: QVector, v2: QVector) -> f64 {
    let u1 = scale_right(v1, Quaternion::real(1.0 / qnorm(v1)));
    let u2 = scale_right(v2, Quaternion::real(1.0 / qnorm(v2)));
    Matrix2H::from_columns(u1, u2).det_abs()
}

pub fn right_eigenpairs(m: &Matrix2H) -> Result<EigenDecomposition> {
    let c = m.counterpart();
    let scale = linalg::max_abs(&c).max(f64::MIN_POSITIVE);
    let canon = canonical_pairs(&linalg::eigenvalues(&c));
    let (z1, z2) = (canon[0], canon[1]);
    let null_vector = |z: Complex64| lift(&linalg::svd_ascending(&shifted(&c, z))[0].1);

    if (z1 - z2).norm() > CLUSTER_TOL * scale {
        let v1 = normalize_phase(null_vector(z1));
        let v2 = normalize_phase(null_vector(z2));
        let defective = unit_column_det(v1, v2) <= INDEPENDENCE_TOL;
        let eigenvectors = if defective { vec![v1] } else { vec![v1, v2] };
        return Ok(EigenDecomposition { eigenvalues: [z1, z2], eigenvectors, defective });
    }

    let z = (z1 + z2) * 0.5;
    let sv = linalg::svd_ascending(&shifted(&c, z));
    let nulls = sv.iter().take_while(|(s, _)| *s <= RANK_TOL * scale).map(|(_, v)| lift(v));
    let basis: Vec<QVector> = independent(nulls, 2).into_iter().map(normalize_phase).collect();
    let defective = basis.len() < 2 || unit_column_det(basis[0], basis[1]) <= INDEPENDENCE_TOL;
    let eigenvectors = if basis.is_empty() {
        vec![normalize_phase(lift(&sv[0].1))]
    } else if defective {
        vec![basis[0]]
    } else {
        basis
    };
    Ok(EigenDecomposition { eigenvalues: [z, z], eigenvectors, defective })
}

/// `M = S diag(z1, z2) S^-1` with eigenvectors as columns of `S`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagonalization {
    pub s: Matrix2H,
    pub s_inv: Matrix2H,
    pub eigenvalues: [Complex64; 2],
}

impl Diagonalization {
    /// `S D S^-1` with the complex diagonal placed between the factors.
    pub fn reconstruct(&self) -> Matrix2H {
        let d = Matrix2H::new(
            Quaternion::from_complex(self.eigenvalues[0]),
            Quaternion::ZERO,
            Quaternion::ZERO,
            Quaternion::from_complex(self.eigenvalues[1]),
        );
        self.s * d * self.s_inv
    }
}

pub fn diagonalize(m: &Matrix2H) -> Result<Diagonalization> {
    let eig = right_eigenpairs(m)?;
    if eig.defective {
        return Err(Error::Defective(eig.eigenvalues[0]));
    }
    let s = Matrix2H::from_columns(eig.eigenvectors[0], eig.eigenvectors[1]);
    let s_inv = s.inverse()?;
    Ok(Diagonalization { s, s_inv, eigenvalues: eig.eigenvalues })
}

/// `M = J [[z, 1], [0, z]] J^-1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JordanForm {
    pub j: Matrix2H,
    pub j_inv: Matrix2H,
    pub eigenvalue: Complex64,
}

impl JordanForm {
    pub fn reconstruct(&self) -> Matrix2H {
        let z = Quaternion::from_complex(self.eigenvalue);
        self.j * Matrix2H::new(z, Quaternion::ONE, Quaternion::ZERO, z) * self.j_inv
    }
}

pub fn jordanize(m: &Matrix2H) -> Result<JordanForm> {
    let eig = right_eigenpairs(m)?;
    if !eig.defective {
        return Err(Error::NotDefective);
    }
    let z = eig.eigenvalues[0];
    let c = m.counterpart();
    let scale = linalg::max_abs(&c).max(f64::MIN_POSITIVE);
    let mut v1 = lower(eig.eigenvectors[0]);
    let max = v1.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let pivot = v1.iter().position(|w| w.norm() >= 1e-6 * max).expect("nonzero eigenvector");
    v1 /= v1[pivot];
    let svd = shifted(&c, z).svd(true, true);
    let mut v2 = svd
        .solve(&v1, RANK_TOL * scale)
        .map_err(|e| Error::UnsupportedStructure(e.to_string()))?;
    let shift = v2[pivot];
    v2 -= &v1 * shift;
    let j = Matrix2H::from_columns(lift(&v1), lift(&v2));
    let j_inv = j.inverse()?;
    Ok(JordanForm { j, j_inv, eigenvalue: z })
}

/// `A = sum_r psi_r (lambda_r i) psi_r^dagger` for anti-hermitian `A`, with
/// the hermitian partner `H = sum_r psi_r lambda_r psi_r^dagger`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralDecomposition {
    /// Non-negative, ascending.
    pub eigenvalues: [f64; 2],
    pub eigenvectors: [QVector; 2],
    pub hermitian: Matrix2H,
}

pub fn spectral_decompose_antihermitian(a: &Matrix2H) -> Result<SpectralDecomposition> {
    let dev = (*a + a.adjoint()).max_norm();
    if dev > 1e-12 * (1.0 + a.max_norm()) {
        return Err(Error::NotAntiHermitian(dev));
    }
    let hc = a.counterpart().map(|z| z * Complex64::new(0.0, -1.0));
    let hc = (&hc + hc.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(hc);
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
    let mut picked: Vec<(f64, QVector)> = Vec::new();
    let mut basis: Vec<QVector> = Vec::new();
    for k in order {
        let v = lift(&eig.eigenvectors.column(k).into_owned());
        let before = basis.len();
        basis = independent(basis.iter().copied().chain(std::iter::once(v)), basis.len() + 1);
        if basis.len() > before {
            picked.push((eig.eigenvalues[k].max(0.0), normalize_phase(basis[before])));
        }
        if picked.len() == 2 {
            break;
        }
    }
    picked.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (l1, v1) = picked[0];
    let (l2, v2) = picked[1];
    let outer = |v: QVector, l: f64| {
        let e = |r: usize, k: usize| v[r] * l * v[k].conj();
        Matrix2H::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    };
    Ok(SpectralDecomposition {
        eigenvalues: [l1, l2],
        eigenvectors: [v1, v2],
        hermitian: outer(v1, l1) + outer(v2, l2),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reduction {
    Diagonal(Diagonalization),
    Jordan(JordanForm),
}

/// `phi'' + a phi' + b phi = 0` solved through the system matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatrixOdeSolution {
    pub reduction: Reduction,
    /// `T^-1 (phi0, dphi0)` for the similarity `T`.
    pub weights: QVector,
}

pub fn solve_ode_via_matrix(a: Quaternion, b: Quaternion, phi0: Quaternion, dphi0: Quaternion) -> Result<MatrixOdeSolution> {
    let m = Matrix2H::companion(a, b);
    let eig = right_eigenpairs(&m)?;
    let reduction = if eig.defective {
        Reduction::Jordan(jordanize(&m)?)
    } else {
        Reduction::Diagonal(diagonalize(&m)?)
    };
    let t_inv = match &reduction {
        Reduction::Diagonal(d) => d.s_inv,
        Reduction::Jordan(j) => j.j_inv,
    };
    Ok(MatrixOdeSolution { reduction, weights: t_inv.apply([phi0, dphi0]) })
}

impl MatrixOdeSolution {
    /// `(phi(x), phi'(x))`.
    pub fn evaluate(&self, x: f64) -> QVector {
        let w = self.weights;
        let cx = |z: Complex64| Quaternion::from_complex((z * x).exp());
        match &self.reduction {
            Reduction::Diagonal(d) => {
                let (e1, e2) = (cx(d.eigenvalues[0]), cx(d.eigenvalues[1]));
                let row = |r: usize| d.s.m[r][0] * e1 * w[0] + d.s.m[r][1] * e2 * w[1];
                [row(0), row(1)]
            }
            Reduction::Jordan(jf) => {
                let e = cx(jf.eigenvalue);
                let row = |r: usize| jf.j.m[r][0] * e * w[0] + (jf.j.m[r][0] * x + jf.j.m[r][1]) * e * w[1];
                [row(0), row(1)]
            }
        }
    }

    /// `phi(x)` written with quaternionic exponentials
    /// `exp(S21 S11^-1 x) S11 w1 + exp(S22 S12^-1 x) S12 w2`.
    pub fn evaluate_exponential_form(&self, x: f64) -> Result<Quaternion> {
        match &self.reduction {
            Reduction::Diagonal(d) => {
                let term = |k: usize| -> Result<Quaternion> {
                    let gen = d.s.m[1][k] * d.s.m[0][k].inverse()?;
                    Ok((gen * x).exp() * d.s.m[0][k] * self.weights[k])
                };
                Ok(term(0)? + term(1)?)
            }
            Reduction::Jordan(_) => Err(Error::UnsupportedStructure("exponential form needs a diagonal reduction".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn q(a: f64, b: f64, c: f64, d: f64) -> Quaternion {
        Quaternion::new(a, b, c, d)
    }

    fn mclose(a: &Matrix2H, b: &Matrix2H, tol: f64) -> bool {
        (*a - *b).max_norm() <= tol
    }

    #[test]
    fn counterpart_is_multiplicative() {
        let a = Matrix2H::new(q(1.0, 2.0, 0.0, -1.0), q(0.5, 0.0, 1.0, 0.0), q(0.0, -1.0, 0.3, 2.0), q(1.5, 0.2, 0.0, 0.7));
        let b = Matrix2H::new(q(-0.3, 0.0, 1.0, 1.0), q(2.0, -1.0, 0.0, 0.5), q(0.4, 0.4, -0.4, 0.0), q(0.0, 1.0, 1.0, -2.0));
        let lhs = (a * b).counterpart();
        let rhs = a.counterpart() * b.counterpart();
        assert!((lhs - rhs).norm() < 1e-13);
        let v = [q(0.1, 0.2, 0.3, 0.4), q(-1.0, 0.5, 0.0, 2.0)];
        let direct = lower(a.apply(v));
        assert!((direct - a.counterpart() * lower(v)).norm() < 1e-14);
    }

    #[test]
    fn inverse_round_trip() {
        let a = Matrix2H::new(q(0.0, 0.0, 0.0, 0.0), q(1.0, 0.0, 0.0, 0.0), q(0.0, 0.0, 1.0, 0.0), q(0.0, 1.0, 0.0, -1.0));
        let inv = a.inverse().unwrap();
        assert!(mclose(&(a * inv), &Matrix2H::identity(), 1e-15));
        assert!(mclose(&(inv * a), &Matrix2H::identity(), 1e-15));
        let singular = Matrix2H::new(Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::J * Quaternion::I);
        assert!(singular.inverse().is_err());
    }

    #[test]
    fn conjugate_pairs_in_counterpart() {
        let m = Matrix2H::new(q(0.3, 1.0, -0.2, 0.5), q(1.0, 0.0, 2.0, 0.1), q(-0.7, 0.4, 0.0, 1.1), q(0.2, -0.3, 0.9, 0.0));
        let mut ev = linalg::eigenvalues(&m.counterpart());
        let mut conj: Vec<Complex64> = ev.iter().map(|z| z.conj()).collect();
        linalg::sort_by_im_re(&mut ev);
        linalg::sort_by_im_re(&mut conj);
        for (a, b) in ev.iter().zip(&conj) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn spectral_example() {
        let a = Matrix2H::new(-Quaternion::I, Quaternion::J * 3.0, Quaternion::J * 3.0, Quaternion::I);
        let sd = spectral_decompose_antihermitian(&a).unwrap();
        assert!((sd.eigenvalues[0] - 2.0).abs() < 1e-12 && (sd.eigenvalues[1] - 4.0).abs() < 1e-12);
        let h = Matrix2H::new(Quaternion::real(3.0), Quaternion::K, -Quaternion::K, Quaternion::real(3.0));
        assert!(mclose(&sd.hermitian, &h, 1e-12));
        let expected = [[Quaternion::I, Quaternion::J], [Quaternion::K, Quaternion::ONE]];
        for (k, e) in expected.iter().enumerate() {
            let e = [e[0] * FRAC_1_SQRT_2, e[1] * FRAC_1_SQRT_2];
            let v = sd.eigenvectors[k];
            // equal up to a right complex phase
            let phase = qinner(v, e);
            assert!((phase.q2.abs() + phase.q3.abs()) < 1e-12 && (phase.norm() - 1.0).abs() < 1e-12);
            let r = [v[0] * phase - e[0], v[1] * phase - e[1]];
            assert!(qnorm(r) < 1e-12);
        }
    }

    #[test]
    fn rejects_non_antihermitian() {
        let a = Matrix2H::new(Quaternion::ONE, Quaternion::ZERO, Quaternion::ZERO, Quaternion::I);
        assert!(matches!(spectral_decompose_antihermitian(&a), Err(Error::NotAntiHermitian(_))));
    }

    #[test]
    fn jordan_example() {
        let m = Matrix2H::companion(Quaternion::K - Quaternion::I, -Quaternion::J);
        let jf = jordanize(&m).unwrap();
        assert!((jf.eigenvalue - Complex64::i()).norm() < 1e-7);
        let expected = Matrix2H::new(Quaternion::ONE, Quaternion::K * 0.5, Quaternion::I, q(1.0, 0.0, 0.5, 0.0));
        assert!(mclose(&jf.j, &expected, 1e-7), "{:?}", jf.j);
        assert!(mclose(&jf.reconstruct(), &m, 1e-7));
        assert!(matches!(diagonalize(&m), Err(Error::Defective(_))));
    }

    #[test]
    fn diagonalizable_double_eigenvalue() {
        // phi'' + phi = 0
        let m = Matrix2H::companion(Quaternion::ZERO, Quaternion::ONE);
        let d = diagonalize(&m).unwrap();
        assert!(mclose(&d.reconstruct(), &m, 1e-13));
        assert!(matches!(jordanize(&m), Err(Error::NotDefective)));
    }
}
