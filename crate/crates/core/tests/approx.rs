use std::sync::Arc;

use dirac_algebroid::approx::*;
use dirac_algebroid::dirac::battery::random_section;
use dirac_algebroid::dirac::Battery;
use dirac_algebroid::groupoid::catalog;
use dirac_algebroid::rng::instance_rng;
use dirac_algebroid::smoothfn::ScalarExpr;

const NS: [usize; 5] = [4, 8, 16, 32, 64];
const TS: [f64; 3] = [0.1, 0.05, 0.025];

fn density() -> DensityFamily {
    let y = ScalarExpr::coords(2);
    let phi = ScalarExpr::bump1d(2, 0, 0.1, 0.8).unwrap()
        * ScalarExpr::bump1d(2, 1, 0.05, 0.4).unwrap()
        * (y[0].clone() + y[1].clone() * 0.5 + 1.5);
    DensityFamily::from_expr(phi, 1).unwrap()
}

#[test]
fn comb_spot_values() {
    let y = ScalarExpr::coord(1, 0);
    let y2 = y.powi(2);
    let comb = riemann_comb(1.0, 4, 1).unwrap();
    assert!((comb.evaluate(&y2, &[]).unwrap().re - 0.09375).abs() < 1e-15);
    assert!((comb_error(&y2, 1.0, 4, 1).unwrap() - 0.010417).abs() < 1e-6);
    assert!((comb_bound(&y2, 1.0, 4, 1).unwrap() - 0.25).abs() < 1e-12);
    assert!((comb_error(&y, 1.0, 10, 1).unwrap() - 0.05).abs() < 1e-12);
    assert!((comb_bound(&y, 1.0, 10, 1).unwrap() - 0.1).abs() < 1e-12);
    let c = ScalarExpr::real(1, 2.5);
    assert!(comb_error(&c, 1.0, 7, 1).unwrap() < 1e-14);
    assert!(riemann_comb(0.0, 4, 1).is_err());
    assert!(riemann_comb(1.0, 0, 1).is_err());
}

#[test]
fn comb_sweeps_meet_the_bound() {
    for k in [1, 2] {
        let functions = standard_functions(k).unwrap();
        assert_eq!(functions.len(), 10);
        for l in [1.0, 2.0] {
            let r = comb_sweep(&functions, l, k, &NS).unwrap();
            let rate = r.rate.unwrap();
            assert!(r.all_satisfied(), "k = {k}, L = {l}: {:?}", r.rows);
            assert!((0.8..=1.2).contains(&rate), "k = {k}, L = {l}: rate {rate}");
            assert!(r.rows.windows(2).all(|w| w[0].parameter < w[1].parameter));
        }
    }
    let y2 = ScalarExpr::coord(1, 0).powi(2);
    let r = comb_sweep(&[y2], 1.0, 1, &NS).unwrap();
    assert!(r.all_satisfied());
}

#[test]
fn separable_family_comb_coefficients() {
    let f = ScalarExpr::bump1d(2, 0, 0.0, 1.0).unwrap();
    let g = ScalarExpr::bump1d(2, 1, 0.0, 0.3).unwrap();
    let phi = DensityFamily::from_expr(&f * &g, 1).unwrap();
    let comb = family_comb(&phi, 1.0, 8).unwrap();
    let x = 0.2;
    for term in comb.terms() {
        let t = term.atom[0];
        let expected = f.eval(&[x, t]).unwrap() * g.eval(&[x, t]).unwrap() * 0.125;
        assert!((term.coef.eval(&[x]).unwrap() - expected).norm() < 1e-15);
    }
}

#[test]
fn family_comb_agrees_with_quadrature() {
    let phi = density();
    let g = Arc::new(catalog::translation(1).unwrap());
    let bat = Battery::random(&g, 3, 0, &mut instance_rng(21, 0));
    let comb = family_comb(&phi, 1.0, 256).unwrap();
    for f in bat.functions() {
        for x in [[0.0], [0.3], [-0.4]] {
            let exact = phi.apply(f, &x).unwrap();
            let approx = comb.evaluate(f, &x).unwrap();
            assert!(
                (exact - approx).norm() <= 1e-2 * exact.norm().max(1e-12),
                "{exact} vs {approx}"
            );
        }
    }
}

#[test]
fn family_comb_derivative_bound() {
    let phi = density();
    let g = Arc::new(catalog::translation(1).unwrap());
    let bat = Battery::random(&g, 3, 0, &mut instance_rng(22, 0));
    let points = [vec![0.0], vec![0.3], vec![-0.4]];
    let alphas = [vec![0], vec![1], vec![2]];
    let r = family_comb_sweep(&phi, bat.functions(), 1.0, &NS, &points, &alphas).unwrap();
    assert!(r.all_satisfied(), "{:?}", r.rows);
    assert!(r.rate.unwrap() >= 0.9);
    let wide = ScalarExpr::bump(&[0.0, 0.0], 0.8).unwrap();
    let wide = DensityFamily::from_expr(wide, 1).unwrap();
    assert!(family_comb(&wide, 1.0, 8).is_err());
}

fn stencil_function() -> ScalarExpr {
    let y = ScalarExpr::coords(2);
    y[0].exp() * (y[1].clone() * 2.0).sin()
}

#[test]
fn stencil_examples() {
    let y = ScalarExpr::coord(1, 0);
    let s = fd_stencil(1, 0.1, 1.0).unwrap();
    assert!((s.evaluate(&y.powi(2), &[]).unwrap().re - 2.0).abs() < 1e-12);
    let s = fd_stencil_multi(&[0, 0], 0.1, &[0.2, 0.3]).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s.terms()[0].atom, vec![0.2, 0.3]);
    let y2 = ScalarExpr::coords(2);
    let s = fd_stencil_multi(&[1, 1], 0.1, &[0.0, 0.0]).unwrap();
    assert!((s.evaluate(&(&y2[0] * &y2[1]), &[]).unwrap().re - 1.0).abs() < 1e-12);
    assert!(fd_stencil(1, 0.0, 0.0).is_err());
}

#[test]
fn stencils_converge_at_second_order() {
    let f = stencil_function();
    for beta in [[1, 0], [0, 1], [1, 1], [2, 0]] {
        let r = stencil_sweep(&f, &beta, &[0.3, 0.4], &TS).unwrap();
        let ratio = r.rows[0].error / r.rows[2].error;
        assert!(
            (1.0 / 16.0 / 1.2..=1.0 / 16.0 / 0.8).contains(&ratio),
            "{beta:?}: {ratio}"
        );
        let rate = r.rate.unwrap();
        assert!((1.8..=2.2).contains(&rate), "{beta:?}: {rate}");
    }
    let g = (ScalarExpr::coord(1, 0) * 1.3).exp();
    for n in 1..=4 {
        let r = stencil_sweep(&g, &[n], &[0.3], &TS).unwrap();
        let halving = r.rows[1].error / r.rows[2].error;
        assert!((0.25 / 1.2..=0.25 / 0.8).contains(&halving), "n = {n}: {halving}");
    }
}

#[test]
fn stencil_exactness_degree() {
    let y = ScalarExpr::coord(1, 0);
    let at = 0.3;
    for n in 1..=4usize {
        for degree in 0..=n + 2 {
            let p = (y.clone() + 0.7).powi(degree as i32) + y.clone() * 0.5;
            let exact = p.multi_derive(&[n]).unwrap().eval(&[at]).unwrap();
            let approx = fd_stencil(n, 0.1, at).unwrap().evaluate(&p, &[]).unwrap();
            let rel = (approx - exact).norm() / (1.0 + exact.norm());
            if degree <= n + 1 {
                assert!(rel <= 1e-8, "n = {n}, degree = {degree}: {rel}");
            } else {
                assert!(rel > 1e-4, "n = {n}, degree = {degree}: {rel}");
            }
        }
    }
}

#[test]
fn mollifier_mass_is_one() {
    for k in [1, 2] {
        let rho = normalized_mollifier(k).unwrap();
        for t in [1.0, 0.1, 0.01] {
            assert!(
                (mollifier_mass(&rho, t).unwrap() - 1.0).abs() <= 1e-6,
                "k = {k}, t = {t}"
            );
        }
    }
    let g = Arc::new(catalog::trivial_bundle(0, 1));
    let delta = dirac_algebroid::dirac::DiracSection::delta(&g, vec![0.25]).unwrap();
    let rho = normalized_mollifier(1).unwrap();
    let phi = mollify(&delta, &rho, 0.1).unwrap();
    let fiber = dirac_algebroid::smoothfn::Cuboid::new(vec![(0.15, 0.35)]).unwrap();
    let mass = phi.integrate_box(&fiber, 64).unwrap();
    assert!((mass.re - 1.0).abs() <= 1e-6);
}

#[test]
fn mollified_sections_converge() {
    let g = Arc::new(catalog::translation(1).unwrap());
    let mut rng = instance_rng(5, 0);
    let sections: Vec<_> = (0..20).map(|_| random_section(&g, 2, &mut rng).unwrap()).collect();
    let bat = Battery::random(&g, 10, 4, &mut instance_rng(5, u64::MAX));
    let rho = normalized_mollifier(1).unwrap();
    let r = mollify_sweep(&sections, &rho, bat.functions(), bat.points(), &[0.1, 0.01]).unwrap();
    let at = |t: f64| r.rows.iter().find(|row| row.parameter == t).unwrap().error;
    assert!(at(0.01) < at(0.1), "{:?}", r.rows);
}

#[test]
fn sweeps_reject_empty_grids() {
    assert!(comb_sweep(&standard_functions(1).unwrap(), 1.0, 1, &[]).is_err());
    assert!(stencil_sweep(&stencil_function(), &[1, 0], &[0.0, 0.0], &[]).is_err());
    assert!(standard_functions(0).is_err());
}
