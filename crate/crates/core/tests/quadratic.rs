mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use qdiff_core::oracle::companion_roots;
use qdiff_core::quadratic::{residual, resolvent_coefficients, solve, CaseTag, QuadraticCoeffs, RootSet};
use qdiff_core::Quaternion;
use std::f64::consts::SQRT_2;

pub struct GoldenQuadratic {
    a: Quaternion,
    b: Quaternion,
    case: CaseTag,
    roots: Vec<Quaternion>,
}

fn goldens() -> Vec<GoldenQuadratic> {
    let u = q(0.0, 1.0, 1.0, 0.0) * (1.0 / SQRT_2);
    vec![
        GoldenQuadratic {
            a: q(0.0, SQRT_2, SQRT_2, 0.0),
            b: q(-1.0, -2.0 * SQRT_2, -2.0 * SQRT_2, 0.0),
            case: CaseTag::Parallel,
            roots: vec![
                Quaternion::real(SQRT_2) - u * (1.0 - SQRT_2),
                Quaternion::real(-SQRT_2) - u * (1.0 + SQRT_2),
            ],
        },
        GoldenQuadratic {
            a: Quaternion::I,
            b: Quaternion::K * 0.5,
            case: CaseTag::Orthogonal,
            roots: vec![-q(0.0, 1.0, 1.0, 0.0) * 0.5],
        },
        GoldenQuadratic {
            a: Quaternion::J,
            b: q(1.0, 0.0, 0.0, -1.0),
            case: CaseTag::Orthogonal,
            roots: vec![-Quaternion::I, -q(0.0, 1.0, 1.0, 0.0)],
        },
        GoldenQuadratic {
            a: Quaternion::K,
            b: Quaternion::J,
            case: CaseTag::Orthogonal,
            roots: vec![q(1.0, -1.0, -1.0, -1.0) * 0.5, q(-1.0, -1.0, 1.0, -1.0) * 0.5],
        },
        GoldenQuadratic {
            a: Quaternion::I,
            b: q(1.0, 1.0, 0.0, 1.0),
            case: CaseTag::Generic,
            roots: vec![q(1.0, -3.0, -1.0, -1.0) * 0.5, -q(1.0, -1.0, 1.0, -1.0) * 0.5],
        },
    ]
}

#[test]
fn worked_examples() {
    for g in goldens() {
        let sol = solve(g.a, g.b).unwrap();
        assert_eq!(sol.case, g.case);
        let got = sol.roots.representatives();
        assert_eq!(got.len(), g.roots.len());
        for want in &g.roots {
            let best = got.iter().map(|r| (*r - *want).to_array()).map(|d| d.iter().fold(0.0f64, |m, x| m.max(x.abs()))).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-12, "{:?}: missing {want}, got {got:?}", g.case);
        }
    }
}

#[test]
fn sphere_of_roots() {
    let sol = solve(Quaternion::ZERO, Quaternion::ONE).unwrap();
    assert_eq!(sol.case, CaseTag::BothZero);
    match sol.roots {
        RootSet::Sphere { center, alpha } => {
            assert_eq!(center, 0.0);
            assert!((alpha - 1.0).abs() < 1e-15);
        }
        other => panic!("expected sphere, got {other:?}"),
    }
    // every unit imaginary quaternion solves p^2 + 1 = 0
    let p = q(0.0, 0.6, 0.0, 0.8);
    assert!(residual(Quaternion::ZERO, Quaternion::ONE, p) < 1e-15);
}

#[test]
fn real_pair_and_repeated_real() {
    let sol = solve(Quaternion::real(-1.0), Quaternion::real(-2.0)).unwrap();
    let RootSet::RealPair(r) = sol.roots else { panic!("{:?}", sol.roots) };
    let mut r = r.to_vec();
    r.sort_by(f64::total_cmp);
    assert!((r[0] + 1.0).abs() < 1e-15 && (r[1] - 2.0).abs() < 1e-15);
    let sol = solve(Quaternion::real(2.0), Quaternion::real(1.0)).unwrap();
    assert!(matches!(sol.roots, RootSet::Repeated(p) if (p + Quaternion::ONE).norm() < 1e-15));
}

#[test]
fn resolvent_of_worked_generic_example() {
    let coeffs = QuadraticCoeffs::new(Quaternion::I, q(1.0, 1.0, 0.0, 1.0));
    let poly = resolvent_coefficients(&coeffs);
    let c: Vec<Complex64> = poly.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let roots = companion_roots(&c).unwrap();
    let positive: Vec<f64> = roots.iter().filter(|z| z.im.abs() < 1e-12 && z.re > 0.0).map(|z| z.re).collect();
    assert_eq!(positive.len(), 1);
    assert!((positive[0] - 0.25).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn roots_agree_with_newton(a in arb_quaternion(2.0), b in arb_quaternion(2.0)) {
        let sol = solve(a, b).unwrap();
        let scale = 1.0 + a.norm_sqr() + b.norm();
        for r in sol.roots.representatives() {
            prop_assert!(residual(a, b, r) < 1e-11 * scale, "residual {}", residual(a, b, r));
        }
        if let RootSet::Distinct(roots) = sol.roots {
            let newton = newton_roots(a, b);
            for n in &newton {
                prop_assert!(roots.iter().any(|r| (*r - *n).norm() < 1e-6 * scale), "newton root {} not found in {:?}", n, roots);
            }
        }
    }

    #[test]
    fn parallel_family(s in -2.0f64..2.0, t in -2.0f64..2.0, a0 in -1.0f64..1.0, c0 in -1.0f64..1.0,
                       axis in prop::array::uniform3(-1.0f64..1.0)) {
        prop_assume!(axis.iter().map(|x| x * x).sum::<f64>() > 1e-2);
        let a = Quaternion::from_parts(a0, axis.map(|x| x * s));
        let b = Quaternion::from_parts(c0, axis.map(|x| x * t));
        let sol = solve(a, b).unwrap();
        for r in sol.roots.representatives() {
            prop_assert!(residual(a, b, r) < 1e-11 * (1.0 + a.norm_sqr() + b.norm()));
        }
    }
}
