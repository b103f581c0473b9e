//! One-dimensional scattering and bound states for the quaternionic
//! potential `V + jW` (piecewise constant), built from the Schrodinger modes.

use std::fmt;

use num_complex::Complex64;

use crate::clinear::{mode_vectors, schrodinger_modes, schrodinger_residual, SchrodingerParams};
use crate::error::{invalid, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::quaternion::Quaternion;

const MATCH_RCOND: f64 = 1e-15;

/// `u coeff exp(lambda (x - x_ref))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeTerm {
    pub u: Quaternion,
    pub lambda: Complex64,
    pub coeff: Complex64,
    pub x_ref: f64,
}

impl ModeTerm {
    pub fn derivative(&self, x: f64, n: i32) -> Quaternion {
        let f = self.coeff * self.lambda.powi(n) * (self.lambda * (x - self.x_ref)).exp();
        self.u.mul_complex(f)
    }
}

/// Wavefunction on `[start, end)` for one constant-potential piece.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub start: f64,
    pub end: f64,
    pub params: SchrodingerParams,
    pub terms: Vec<ModeTerm>,
}

impl Region {
    pub fn derivative(&self, x: f64, n: i32) -> Quaternion {
        self.terms.iter().map(|t| t.derivative(x, n)).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseWave {
    pub regions: Vec<Region>,
}

impl PiecewiseWave {
    pub fn region(&self, x: f64) -> &Region {
        self.regions
            .iter()
            .find(|r| x >= r.start && x < r.end)
            .unwrap_or_else(|| self.regions.last().expect("at least one region"))
    }

    pub fn derivative(&self, x: f64, n: i32) -> Quaternion {
        self.region(x).derivative(x, n)
    }

    /// Stationary-equation residual with the potential of the region holding `x`.
    pub fn residual(&self, x: f64) -> f64 {
        let r = self.region(x);
        schrodinger_residual(&r.params, r.derivative(x, 0), r.derivative(x, 2)).norm()
    }

    pub fn current(&self, x: f64) -> f64 {
        let r = self.region(x);
        probability_current(r.derivative(x, 0), r.derivative(x, 1), r.params.hbar, r.params.mass)
    }
}

/// `(hbar/2m) [(d psi-bar) i psi - psi-bar i (d psi)]`, real part.
pub fn probability_current(psi: Quaternion, dpsi: Quaternion, hbar: f64, mass: f64) -> f64 {
    let i = Quaternion::I;
    let q = dpsi.conj() * i * psi - psi.conj() * i * dpsi;
    hbar / (2.0 * mass) * q.scalar()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `E > sqrt(V^2 + |W|^2)`: a propagating transmitted wave.
    AboveThreshold,
    /// `|W| <= E <= sqrt(V^2 + |W|^2)`: real decay constants.
    Evanescent,
    /// `E < |W|`: complex decay constants.
    SubW,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::AboveThreshold => "above",
            Regime::Evanescent => "evanescent",
            Regime::SubW => "sub-w",
        })
    }
}

pub fn threshold(p: &SchrodingerParams) -> f64 {
    p.potential.hypot(p.w.norm())
}

pub fn regime(p: &SchrodingerParams) -> Regime {
    if p.energy > threshold(p) {
        Regime::AboveThreshold
    } else if p.energy >= p.w.norm() {
        Regime::Evanescent
    } else {
        Regime::SubW
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScatteringResult {
    pub params: SchrodingerParams,
    /// Barrier width, zero for the step.
    pub width: f64,
    pub regime: Regime,
    pub r: Complex64,
    pub r_tilde: Complex64,
    pub t: Complex64,
    pub t_tilde: Complex64,
    pub reflection: f64,
    pub transmission: f64,
    /// `|J(left) - J(right)| / J(incident)`.
    pub current_residual: f64,
    pub wave: PiecewiseWave,
}

fn validate_scattering(p: &SchrodingerParams) -> Result<SchrodingerParams> {
    p.validate()?;
    if !(p.energy > 0.0) {
        return Err(invalid("energy", format!("scattering needs E > 0, got {}", p.energy)));
    }
    if p.potential < 0.0 {
        return Err(invalid("potential", format!("must be non-negative, got {}", p.potential)));
    }
    let th = threshold(p);
    let mut q = *p;
    if (q.energy - th).abs() <= 1e-12 * th {
        q.energy = th + 1e-12 * th.max(1.0);
        log::warn!("energy {} sits on the threshold, moved to {}", p.energy, q.energy);
    }
    Ok(q)
}

fn free_region(p: &SchrodingerParams) -> SchrodingerParams {
    SchrodingerParams { potential: 0.0, w: Complex64::new(0.0, 0.0), ..*p }
}

/// Column of the matching system for a term evaluated at `x`:
/// symplectic coordinates of the value, then of the derivative divided by `kref`.
fn column(term: &ModeTerm, x: f64, kref: f64) -> [Complex64; 4] {
    let v = term.derivative(x, 0).to_symplectic();
    let d = term.derivative(x, 1).to_symplectic();
    [v.z1, v.z2, d.z1 / kref, d.z2 / kref]
}

fn unit_term(u: Quaternion, lambda: Complex64, x_ref: f64) -> ModeTerm {
    ModeTerm { u, lambda, coeff: Complex64::new(1.0, 0.0), x_ref }
}

/// Transmitted-side exponents `(lambda_minus, lambda_plus)` for the step.
fn step_exponents(p: &SchrodingerParams, z_minus: Complex64, z_plus: Complex64) -> (Complex64, Complex64) {
    let kappa = p.exponent_scale();
    let lm = if regime(p) == Regime::AboveThreshold { z_minus * kappa } else { -z_minus * kappa };
    (lm, -z_plus * kappa)
}

/// Transmission through the step from the transmitted amplitude:
/// `sqrt((s - V)/E) [1 - (|W|/(E + s))^2] |t|^2` above threshold, zero below.
pub fn step_transmission(p: &SchrodingerParams, t: Complex64) -> f64 {
    if regime(p) != Regime::AboveThreshold {
        return 0.0;
    }
    let s = p.s().re;
    let ratio = p.w.norm() / (p.energy + s);
    ((s - p.potential) / p.energy).sqrt() * (1.0 - ratio * ratio) * t.norm_sqr()
}

pub fn solve_step(params: &SchrodingerParams) -> Result<ScatteringResult> {
    let p = validate_scattering(params)?;
    let k = (2.0 * p.mass * p.energy).sqrt() / p.hbar;
    let ik = Complex64::new(0.0, k);
    let modes = schrodinger_modes(&p)?;
    let (lm, lp) = step_exponents(&p, modes.z_minus, modes.z_plus);
    let free = free_region(&p);

    let incident = unit_term(Quaternion::ONE, ik, 0.0);
    let left = [unit_term(Quaternion::ONE, -ik, 0.0), unit_term(Quaternion::J, Complex64::new(k, 0.0), 0.0)];
    let right = [unit_term(modes.u_minus, lm, 0.0), unit_term(modes.u_plus, lp, 0.0)];

    let mut m = CMatrix::zeros(4, 4);
    for (c, term) in left.iter().enumerate() {
        let col = column(term, 0.0, k);
        for row in 0..4 {
            m[(row, c)] = col[row];
        }
    }
    for (c, term) in right.iter().enumerate() {
        let col = column(term, 0.0, k);
        for row in 0..4 {
            m[(row, c + 2)] = -col[row];
        }
    }
    let rhs = CVector::from_iterator(4, column(&incident, 0.0, k).iter().map(|z| -z));
    let sol = linalg::solve(&m, &rhs, MATCH_RCOND)?;
    let (r, r_tilde, t, t_tilde) = (sol[0], sol[1], sol[2], sol[3]);

    let with = |mut term: ModeTerm, c: Complex64| {
        term.coeff = c;
        term
    };
    let wave = PiecewiseWave {
        regions: vec![
            Region {
                start: f64::NEG_INFINITY,
                end: 0.0,
                params: free,
                terms: vec![incident, with(left[0], r), with(left[1], r_tilde)],
            },
            Region {
                start: 0.0,
                end: f64::INFINITY,
                params: p,
                terms: vec![with(right[0], t), with(right[1], t_tilde)],
            },
        ],
    };
    let j_inc = p.hbar * k / p.mass;
    let current_residual = (wave.current(-1.0 / k) - wave.current(1.0 / k)).abs() / j_inc;
    Ok(ScatteringResult {
        params: p,
        width: 0.0,
        regime: regime(&p),
        r,
        r_tilde,
        t,
        t_tilde,
        reflection: r.norm_sqr(),
        transmission: step_transmission(&p, t),
        current_residual,
        wave,
    })
}

pub fn solve_barrier(params: &SchrodingerParams, width: f64) -> Result<ScatteringResult> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(invalid("width", format!("must be positive, got {width}")));
    }
    let p = validate_scattering(params)?;
    let a = width;
    let k = (2.0 * p.mass * p.energy).sqrt() / p.hbar;
    let ik = Complex64::new(0.0, k);
    let modes = schrodinger_modes(&p)?;
    let kappa = p.exponent_scale();
    let free = free_region(&p);

    let incident = unit_term(Quaternion::ONE, ik, 0.0);
    let left = [unit_term(Quaternion::ONE, -ik, 0.0), unit_term(Quaternion::J, Complex64::new(k, 0.0), 0.0)];
    let inner: Vec<ModeTerm> = [
        (modes.u_minus, modes.z_minus * kappa),
        (modes.u_minus, -modes.z_minus * kappa),
        (modes.u_plus, modes.z_plus * kappa),
        (modes.u_plus, -modes.z_plus * kappa),
    ]
    .into_iter()
    .map(|(u, l)| unit_term(u, l, if l.re > 0.0 { a } else { 0.0 }))
    .collect();
    let right = [unit_term(Quaternion::ONE, ik, a), unit_term(Quaternion::J, Complex64::new(-k, 0.0), a)];

    // unknowns: r, r~, k1..k4, t', t~'
    let mut m = CMatrix::zeros(8, 8);
    let mut put = |row0: usize, c: usize, col: [Complex64; 4], sign: f64| {
        for (r, z) in col.iter().enumerate() {
            m[(row0 + r, c)] = z * sign;
        }
    };
    for (c, term) in left.iter().enumerate() {
        put(0, c, column(term, 0.0, k), 1.0);
    }
    for (c, term) in inner.iter().enumerate() {
        put(0, 2 + c, column(term, 0.0, k), -1.0);
        put(4, 2 + c, column(term, a, k), 1.0);
    }
    for (c, term) in right.iter().enumerate() {
        put(4, 6 + c, column(term, a, k), -1.0);
    }
    let mut rhs = CVector::zeros(8);
    for (r, z) in column(&incident, 0.0, k).iter().enumerate() {
        rhs[r] = -z;
    }
    let sol = linalg::solve(&m, &rhs, MATCH_RCOND)?;

    let with = |mut term: ModeTerm, c: Complex64| {
        term.coeff = c;
        term
    };
    let t = sol[6] * (-ik * a).exp();
    let t_tilde = sol[7] * (k * a).exp();
    let wave = PiecewiseWave {
        regions: vec![
            Region {
                start: f64::NEG_INFINITY,
                end: 0.0,
                params: free,
                terms: vec![incident, with(left[0], sol[0]), with(left[1], sol[1])],
            },
            Region {
                start: 0.0,
                end: a,
                params: p,
                terms: inner.iter().enumerate().map(|(n, &term)| with(term, sol[2 + n])).collect(),
            },
            Region {
                start: a,
                end: f64::INFINITY,
                params: free,
                terms: vec![with(right[0], sol[6]), with(right[1], sol[7])],
            },
        ],
    };
    let j_inc = p.hbar * k / p.mass;
    let current_residual = (wave.current(-1.0 / k) - wave.current(a + 1.0 / k)).abs() / j_inc;
    Ok(ScatteringResult {
        params: p,
        width: a,
        regime: regime(&p),
        r: sol[0],
        r_tilde: sol[1],
        t,
        t_tilde,
        reflection: sol[0].norm_sqr(),
        transmission: t.norm_sqr(),
        current_residual,
        wave,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    /// Smallest singular value of the column-normalized matching matrix.
    pub residual: f64,
    pub regime: Regime,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundStateSet {
    pub depth: f64,
    pub w: Complex64,
    pub width: f64,
    pub hbar: f64,
    pub mass: f64,
    pub states: Vec<BoundState>,
}

/// Acceptance threshold on the smallest singular value.
pub const BOUND_STATE_TOL: f64 = 1e-8;

/// Smallest singular value of the matching system for the well
/// `-depth + jW` on `(0, width)` at energy `e < 0`.
pub fn well_matching_sigma(depth: f64, w: Complex64, width: f64, hbar: f64, mass: f64, e: f64) -> f64 {
    let inside = SchrodingerParams { energy: e, potential: -depth, w: -w, hbar, mass };
    let a = width;
    let q = (2.0 * mass * e.abs()).sqrt() / hbar;
    let kref = (2.0 * mass * depth.hypot(w.norm())).sqrt() / hbar;
    let kappa = inside.exponent_scale();
    let (zm, zp) = crate::clinear::mode_roots(&inside);
    let (um, up) = mode_vectors(&inside);
    let inner: Vec<ModeTerm> = [(um, zm * kappa), (um, -zm * kappa), (up, zp * kappa), (up, -zp * kappa)]
        .into_iter()
        .map(|(u, l)| unit_term(u, l, if l.re > 0.0 { a } else { 0.0 }))
        .collect();
    let left = [
        unit_term(Quaternion::ONE, Complex64::new(q, 0.0), 0.0),
        unit_term(Quaternion::J, Complex64::new(0.0, -q), 0.0),
    ];
    let right = [
        unit_term(Quaternion::ONE, Complex64::new(-q, 0.0), a),
        unit_term(Quaternion::J, Complex64::new(0.0, q), a),
    ];
    let mut m = CMatrix::zeros(8, 8);
    let mut put = |row0: usize, c: usize, col: [Complex64; 4], sign: f64| {
        for (r, z) in col.iter().enumerate() {
            m[(row0 + r, c)] = z * sign;
        }
    };
    for (c, term) in left.iter().enumerate() {
        put(0, c, column(term, 0.0, kref), -1.0);
    }
    for (c, term) in inner.iter().enumerate() {
        put(0, 2 + c, column(term, 0.0, kref), 1.0);
        put(4, 2 + c, column(term, a, kref), 1.0);
    }
    for (c, term) in right.iter().enumerate() {
        put(4, 6 + c, column(term, a, kref), -1.0);
    }
    for mut col in m.column_iter_mut() {
        let n = col.norm();
        if n > 0.0 {
            col /= Complex64::new(n, 0.0);
        }
    }
    linalg::min_singular_value(&m)
}

fn golden_min(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Energies in `(-sqrt(V^2 + |W|^2), 0)` where the well matching system
/// becomes singular: grid scan of the smallest singular value, then
/// golden-section refinement of each local minimum.
pub fn find_bound_states(depth: f64, w: Complex64, width: f64, hbar: f64, mass: f64, grid: usize) -> Result<BoundStateSet> {
    if !(depth > 0.0 && depth.is_finite()) {
        return Err(invalid("depth", format!("must be positive, got {depth}")));
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(invalid("width", format!("must be positive, got {width}")));
    }
    if !(hbar > 0.0 && mass > 0.0) {
        return Err(invalid("hbar/mass", "must be positive"));
    }
    if grid < 3 {
        return Err(invalid("grid", "needs at least 3 points"));
    }
    let emax = depth.hypot(w.norm());
    let f = |e: f64| well_matching_sigma(depth, w, width, hbar, mass, e);
    let step = emax / grid as f64;
    let energies: Vec<f64> = (0..grid).map(|n| -emax + (n as f64 + 0.5) * step).collect();
    let values: Vec<f64> = energies.iter().map(|&e| f(e)).collect();
    let mut states = Vec::new();
    for n in 0..grid {
        let lower = if n == 0 { f64::INFINITY } else { values[n - 1] };
        let upper = if n + 1 == grid { f64::INFINITY } else { values[n + 1] };
        if !(values[n] <= lower && values[n] < upper) {
            continue;
        }
        let lo = (energies[n] - step).max(-emax * (1.0 - 1e-15));
        let hi = (energies[n] + step).min(-1e-15 * emax);
        let (e, sigma) = golden_min(&f, lo, hi, 1e-14 * emax);
        if sigma >= BOUND_STATE_TOL {
            continue;
        }
        if (e.abs() - w.norm()).abs() <= 1e-6 * emax {
            log::warn!("discarding spurious root at E = {e}: the interior modes coincide at |E| = |W|");
            continue;
        }
        let regime = if e.abs() > w.norm() { Regime::Evanescent } else { Regime::SubW };
        states.push(BoundState { energy: e, residual: sigma, regime });
    }
    Ok(BoundStateSet { depth, w, width, hbar, mass, states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn free_particle_passes_through() {
        let p = SchrodingerParams::new(1.3, 0.0, Complex64::new(0.0, 0.0));
        let res = solve_step(&p).unwrap();
        assert!(res.r.norm() < 1e-13 && (res.t - 1.0).norm() < 1e-13);
        let bar = solve_barrier(&p, 1.5).unwrap();
        assert!(bar.reflection < 1e-26 && (bar.transmission - 1.0).abs() < 1e-13);
    }

    #[test]
    fn plane_wave_current() {
        let k: f64 = 1.7;
        let x: f64 = 0.3;
        let psi = Quaternion::from_complex(Complex64::new(0.0, k * x).exp());
        let dpsi = psi * Quaternion::new(0.0, k, 0.0, 0.0);
        assert!((probability_current(psi, dpsi, 1.0, 2.0) - k / 2.0).abs() < 1e-15);
    }

    #[test]
    fn step_conserves_probability() {
        let p = SchrodingerParams::new(2.0, 1.0, Complex64::from_polar(0.6, 0.7));
        let res = solve_step(&p).unwrap();
        assert_eq!(res.regime, Regime::AboveThreshold);
        assert!((res.reflection + res.transmission - 1.0).abs() < 1e-12);
        assert!(res.current_residual < 1e-12);
        for x in [-2.0, -0.3, 0.4, 3.0] {
            assert!(res.wave.residual(x) < 1e-12);
        }
    }

    #[test]
    fn below_threshold_total_reflection() {
        let p = SchrodingerParams::new(0.5, 1.0, Complex64::new(0.3, 0.0));
        let res = solve_step(&p).unwrap();
        assert_eq!(res.regime, Regime::Evanescent);
        assert!((res.reflection - 1.0).abs() < 1e-12);
        let sub = solve_step(&SchrodingerParams::new(0.2, 1.0, Complex64::new(0.3, 0.0))).unwrap();
        assert_eq!(sub.regime, Regime::SubW);
        assert!((sub.reflection - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = SchrodingerParams::new(-1.0, 1.0, Complex64::new(0.0, 0.0));
        assert!(matches!(solve_step(&bad), Err(Error::InvalidParameter { .. })));
        let p = SchrodingerParams::new(1.0, 1.0, Complex64::new(0.0, 0.0));
        assert!(matches!(solve_barrier(&p, 0.0), Err(Error::InvalidParameter { .. })));
    }
}
