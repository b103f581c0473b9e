//! Small dense complex linear algebra on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Principal square root with argument in (-pi/2, pi/2]; a negative real
/// input maps to `+i sqrt(|x|)` regardless of the sign of its zero imaginary part.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        if z.re >= 0.0 {
            Complex64::new(z.re.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-z.re).sqrt())
        }
    } else {
        z.sqrt()
    }
}

/// Eigenvalues sorted by (Im, Re).
pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    let schur = m.clone().schur();
    let (_, t) = schur.unpack();
    let mut out: Vec<Complex64> = (0..t.nrows()).map(|k| t[(k, k)]).collect();
    sort_by_im_re(&mut out);
    out
}

pub fn sort_by_im_re(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
}

/// Singular values in ascending order with their right singular vectors.
pub fn svd_ascending(m: &CMatrix) -> Vec<(f64, CVector)> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut out: Vec<(f64, CVector)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(k, &s)| (s, v_t.row(k).transpose().map(|z| z.conj())))
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

pub fn min_singular_value(m: &CMatrix) -> f64 {
    m.clone().singular_values().iter().cloned().fold(f64::INFINITY, f64::min)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Solves `m x = rhs`, failing when `m` is numerically singular.
pub fn solve(m: &CMatrix, rhs: &CVector, rcond_min: f64) -> Result<CVector> {
    let sv = m.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let rcond = if smax > 0.0 { smin / smax } else { 0.0 };
    if !(rcond > rcond_min) {
        return Err(Error::SingularMatching(rcond));
    }
    m.clone().lu().solve(rhs).ok_or(Error::SingularMatching(rcond))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_branch() {
        assert_eq!(principal_sqrt(Complex64::new(-4.0, 0.0)), Complex64::new(0.0, 2.0));
        assert_eq!(principal_sqrt(Complex64::new(-4.0, -0.0)), Complex64::new(0.0, 2.0));
        let z = principal_sqrt(Complex64::new(-1.0, -1e-300));
        assert!(z.re >= 0.0);
        let w = principal_sqrt(Complex64::new(3.0, -4.0));
        assert!((w * w - Complex64::new(3.0, -4.0)).norm() < 1e-15 && w.re > 0.0);
    }

    #[test]
    fn eigen_of_complex_triangularizable() {
        let i = Complex64::i();
        let m = CMatrix::from_row_slice(2, 2, &[i, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), -i * 2.0]);
        let ev = eigenvalues(&m);
        assert!((ev[0] + i * 2.0).norm() < 1e-14);
        assert!((ev[1] - i).norm() < 1e-14);
    }

    #[test]
    fn svd_null_vector() {
        let one = Complex64::new(1.0, 0.0);
        let m = CMatrix::from_row_slice(2, 2, &[one, one * 2.0, one * 2.0, one * 4.0]);
        let sv = svd_ascending(&m);
        assert!(sv[0].0 < 1e-14);
        let r = &m * &sv[0].1;
        assert!(r.norm() < 1e-14);
    }
}
