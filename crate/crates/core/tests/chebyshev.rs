use minkowski_gauge::bodies;
use minkowski_gauge::chebyshev::{self, LinearForm, Polynomial};
use minkowski_gauge::convex::vector::{self, vector as v};
use minkowski_gauge::{gauge, Body, Vector};
use proptest::prelude::*;
use rand::Rng;

fn triangle() -> Body {
    Body::vpolytope(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
}

#[test]
fn scalar_values() {
    assert_eq!(chebyshev::cheb_t(0, 5.0).unwrap(), 1.0);
    assert_eq!(chebyshev::cheb_t(1, -2.5).unwrap(), -2.5);
    assert_eq!(chebyshev::cheb_t(2, 2.0).unwrap(), 7.0);
    assert_eq!(chebyshev::cheb_t(3, 2.0).unwrap(), 26.0);
    assert!((chebyshev::cheb_t(5, 0.3).unwrap() - (5.0 * 0.3f64.acos()).cos()).abs() < 1e-14);
    assert!(chebyshev::cheb_t(-1, 0.0).is_err());
    assert!(chebyshev::cheb_t(3, f64::NAN).is_err());
    assert_eq!(chebyshev::cheb_t_deriv(3, 1.0).unwrap(), 9.0);
}

#[test]
fn branch_matches_product_form() {
    for n in 0..=30 {
        for i in 0..=600 {
            let x = -3.0 + 6.0 * i as f64 / 600.0;
            let a = chebyshev::cheb_t(n, x).unwrap();
            let b = chebyshev::cheb_t_product(n, x).unwrap();
            assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "n={n} x={x}: {a} vs {b}");
        }
    }
}

#[test]
fn derivative_matches_finite_differences() {
    for n in 1..=12 {
        for x in [-1.7, -0.6, 0.1, 0.95, 1.3, 2.2] {
            let h = 1e-6;
            let fd = (chebyshev::cheb_t(n, x + h).unwrap() - chebyshev::cheb_t(n, x - h).unwrap()) / (2.0 * h);
            let d = chebyshev::cheb_t_deriv(n, x).unwrap();
            assert!((fd - d).abs() <= 1e-5 * d.abs().max(1.0), "n={n} x={x}");
        }
    }
}

#[test]
fn polynomial_arithmetic() {
    let x = Polynomial::affine(&[1.0, 0.0], 0.0);
    let y = Polynomial::affine(&[0.0, 1.0], 0.0);
    let p = x.mul(&y).add(&x.scale(3.0)).add(&Polynomial::constant(2, -1.0));
    assert_eq!(p.degree(), 2);
    assert_eq!(p.eval(&v(&[2.0, 5.0])).unwrap(), 15.0);
    let g = p.grad(&v(&[2.0, 5.0])).unwrap();
    assert_eq!(g, v(&[8.0, 2.0]));
    assert_eq!(p.homogeneous_part(2).terms().len(), 1);
    assert!(Polynomial::zero(2).add(&p).eval(&v(&[0.0, 0.0])).unwrap() == -1.0);
    let q = Polynomial::from_terms(2, [(vec![2, 1], 4.0), (vec![0, 0], 1.0)]).unwrap();
    assert_eq!(q.eval(&v(&[1.0, 2.0])).unwrap(), 9.0);
    assert!(Polynomial::from_terms(2, [(vec![1], 1.0)]).is_err());
}

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = vector::rng(9);
    for _ in 0..20 {
        let terms: Vec<(Vec<u32>, f64)> = (0..6)
            .map(|_| (vec![rng.random_range(0..4), rng.random_range(0..3), rng.random_range(0..2)], rng.random_range(-2.0..2.0)))
            .collect();
        let p = Polynomial::from_terms(3, terms).unwrap();
        let x = v(&[rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]);
        let g = p.grad(&x).unwrap();
        for j in 0..3 {
            let mut e = Vector::zeros(3);
            e[j] = 1e-6;
            let fd = (p.eval(&(&x + &e)).unwrap() - p.eval(&(&x - &e)).unwrap()) / 2e-6;
            assert!((fd - g[j]).abs() < 1e-6 * g[j].abs().max(1.0));
        }
    }
}

#[test]
fn composed_expansion_matches_evaluator() {
    let mut rng = vector::rng(12);
    for _ in 0..10 {
        let k = Body::V(bodies::random_polygon(&mut rng, 6));
        let u = vector::random_unit(&mut rng, 2);
        let f = LinearForm::new(&k, &u).unwrap();
        for n in [2usize, 5, 9] {
            let p = Polynomial::chebyshev_of(n, &f.polynomial()).unwrap();
            for _ in 0..20 {
                let y = v(&[rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)]);
                let want = chebyshev::cheb_t(n as i64, f.eval(&y)).unwrap();
                let got = p.eval(&y).unwrap();
                // monomial expansion loses digits to cancellation; scale by the absolute term sum
                let scale: f64 = p
                    .terms()
                    .iter()
                    .map(|(e, c)| c.abs() * e.iter().zip(y.iter()).map(|(&k, yi)| yi.abs().powi(k as i32)).product::<f64>())
                    .sum();
                assert!((got - want).abs() <= 1e-10 * scale.max(1.0), "{got} {want} {scale}");
                if n == 2 {
                    assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0));
                }
            }
        }
    }
}

#[test]
fn expansion_degree_is_capped() {
    let l = Polynomial::affine(&[1.0], 0.0);
    assert!(Polynomial::chebyshev_of(64, &l).is_ok());
    assert!(Polynomial::chebyshev_of(65, &l).is_err());
}

#[test]
fn growth_is_the_chebyshev_value_of_alpha() {
    let k = triangle();
    let x = v(&[2.0, 2.0]);
    let a = gauge::alpha(&k, &x).unwrap().alpha;
    for n in [1usize, 3, 6] {
        let r = chebyshev::cheb_growth(&k, &x, n).unwrap();
        assert!((r.alpha - a).abs() < 1e-12);
        let want = chebyshev::cheb_t(n as i64, a).unwrap();
        assert!((r.growth - want).abs() <= 1e-9 * want);
        assert!((r.extremal_value - r.growth).abs() <= 1e-9 * want + r.tol_witness);
        assert!(r.sup_norm_check <= 1.0 + 1e-6);
        assert!(r.samples >= chebyshev::SUP_NORM_SAMPLES);
    }
    let inside = chebyshev::cheb_growth(&k, &v(&[0.2, 0.2]), 4).unwrap();
    assert_eq!(inside.growth, 1.0);
    assert!(inside.form.is_none());
}

#[test]
fn growth_is_monotone_in_degree_outside() {
    let k = Body::H(bodies::make_box(&[-1.0, -1.0], &[1.0, 1.0]).unwrap());
    let x = v(&[1.5, 0.3]);
    let mut prev = 1.0;
    for n in 1..12 {
        let g = chebyshev::cheb_growth(&k, &x, n).unwrap().growth;
        assert!(g > prev);
        prev = g;
    }
}

#[test]
fn leading_growth_on_the_triangle() {
    let k = triangle();
    let r = chebyshev::leading_growth(&k, &v(&[1.0, 0.0]), 3).unwrap();
    assert!((r.tau - 1.0).abs() < 1e-9);
    assert!((r.value - 32.0).abs() < 1e-6);
    let wv = r.witness_value.unwrap();
    assert!((wv.abs() - r.value).abs() < 1e-6 * r.value);
    assert!(chebyshev::leading_growth(&k, &v(&[1.0, 0.0]), 0).is_err());
}

#[test]
fn bernstein_report_arithmetic() {
    let k = triangle();
    let x = v(&[1.0 / 3.0, 1.0 / 3.0]);
    let r = chebyshev::bernstein_bound(&k, &x, 4, 2.0).unwrap();
    let w = 1.0 / 2f64.sqrt();
    assert!((r.width - w).abs() < 1e-12);
    let num = 16.0;
    assert!((r.theorem_bound - num / (w * (2.0f64 / 3.0).sqrt())).abs() < 1e-9);
    assert!((r.conjecture_bound - num / (w * (8.0f64 / 9.0).sqrt())).abs() < 1e-9);
    assert!(r.conjecture_bound <= r.theorem_bound);
    assert!(chebyshev::bernstein_bound(&k, &v(&[2.0, 2.0]), 4, 1.0).is_err());
}

#[test]
fn family_gradient_matches_polynomial() {
    let k = triangle();
    let f = LinearForm::new(&k, &v(&[0.6, -0.8])).unwrap();
    let p = Polynomial::chebyshev_of(5, &f.polynomial()).unwrap();
    let x = v(&[0.3, 0.4]);
    let g = chebyshev::family_gradient(&f, &x, 5);
    assert!((g - p.grad(&x).unwrap()).norm() < 1e-9);
}

#[test]
fn conjecture_search_reports_no_counterexample() {
    let r = chebyshev::conjecture_search(&triangle(), 3, 20, 20, 5).unwrap();
    assert!(!r.counterexample_found);
    assert!(r.max_ratio <= 1.0 + 1e-9);
    // boundary samples are skipped
    assert!(r.instances > 0 && r.instances <= 400 && r.instances.is_multiple_of(20));
}

proptest! {
    #[test]
    fn bounded_on_unit_interval(n in 0i64..200, x in -1.0f64..1.0) {
        prop_assert!(chebyshev::cheb_t(n, x).unwrap().abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn composition_rule(m in 0i64..8, n in 0i64..8, x in -1.2f64..1.2) {
        let inner = chebyshev::cheb_t(n, x).unwrap();
        let lhs = chebyshev::cheb_t(m, inner).unwrap();
        let rhs = chebyshev::cheb_t(m * n, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * rhs.abs().max(1.0));
    }
}
