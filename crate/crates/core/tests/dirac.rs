use std::sync::Arc;

use dirac_algebroid::dirac::battery::{random_coefficient, random_function, random_point, random_section};
use dirac_algebroid::dirac::laws::{instance_deviations, tensor_deviation, LAWS};
use dirac_algebroid::dirac::{relative_deviation, Battery, DiracSection, TensorElement, Term};
use dirac_algebroid::groupoid::{catalog, ActionGroupoid};
use dirac_algebroid::rng::instance_rng;
use dirac_algebroid::smoothfn::ScalarExpr;
use num_complex::Complex64;
use proptest::prelude::*;

fn groupoids() -> Vec<Arc<ActionGroupoid>> {
    catalog::entries()
        .iter()
        .map(|e| Arc::new(catalog::by_name(e.name, None).unwrap()))
        .collect()
}

fn translation() -> Arc<ActionGroupoid> {
    Arc::new(catalog::translation(1).unwrap())
}

fn battery(g: &ActionGroupoid, seed: u64) -> Battery {
    Battery::default_for(g, &mut instance_rng(seed, u64::MAX))
}

#[test]
fn evaluation_examples() {
    let g = translation();
    let f = ScalarExpr::bump(&[0.0], 2.0).unwrap();
    let h = ScalarExpr::coord(2, 1);
    let u = DiracSection::generator(&g, f.clone(), vec![3.0]).unwrap();
    let e1 = (-1.0f64).exp();
    assert!((u.evaluate(&h, &[0.0]).unwrap().re - 3.0 * e1).abs() < 1e-15);
    assert_eq!(
        DiracSection::zero(&g).evaluate(&h, &[0.3]).unwrap(),
        Complex64::new(0.0, 0.0)
    );

    let a = DiracSection::generator(&g, f.clone(), vec![1.0]).unwrap();
    let b = DiracSection::generator(&g, f.clone(), vec![2.0]).unwrap();
    let expected = 3.0 * (-7.0f64 / 3.0).exp();
    assert!((a.convolve(&b).unwrap().evaluate(&h, &[0.0]).unwrap().re - expected).abs() < 1e-12);
    assert!((a.convolve_oracle(&b, &h, &[0.0]).unwrap().re - expected).abs() < 1e-12);
    let zero = DiracSection::zero(&g);
    assert_eq!(a.convolve_oracle(&zero, &h, &[0.0]).unwrap(), Complex64::new(0.0, 0.0));

    let s = a.antipode().unwrap();
    assert_eq!(s.terms()[0].atom, vec![-1.0]);
    assert!((s.evaluate(&h, &[1.0]).unwrap().re + e1).abs() < 1e-15);
}

#[test]
fn affine_group_algebra_is_noncommutative() {
    let g = Arc::new(catalog::affine_point());
    let a = DiracSection::delta(&g, vec![2.0, 0.0]).unwrap();
    let b = DiracSection::delta(&g, vec![1.0, 1.0]).unwrap();
    assert_eq!(a.convolve(&b).unwrap().terms()[0].atom, vec![2.0, 1.0]);
    assert_eq!(b.convolve(&a).unwrap().terms()[0].atom, vec![2.0, 2.0]);
}

#[test]
fn module_action_examples() {
    let g = translation();
    let bat = battery(&g, 1);
    let mut rng = instance_rng(2, 0);
    let u = random_section(&g, 3, &mut rng).unwrap();
    let hull = u
        .terms()
        .iter()
        .filter_map(|t| t.support.clone())
        .reduce(|a, b| a.hull(&b))
        .unwrap();
    let cover = ScalarExpr::plateau_around(&hull, 0.2).unwrap();
    assert!(u.module_act(&cover).unwrap().max_deviation(&u, &bat).unwrap() <= 1e-15);
    assert!(u.module_act(&ScalarExpr::zero(1)).unwrap().is_empty());
    let v = random_section(&g, 2, &mut rng).unwrap();
    let f = random_coefficient(&g, &mut rng);
    let lhs = u.add(&v).unwrap().module_act(&f).unwrap();
    let rhs = u.module_act(&f).unwrap().add(&v.module_act(&f).unwrap()).unwrap();
    assert!(lhs.max_deviation(&rhs, &bat).unwrap() <= 1e-14);
}

#[test]
fn comultiplication_examples() {
    for g in groupoids() {
        let bat = battery(&g, 3);
        let mut rng = instance_rng(4, 0);
        let u = random_section(&g, 3, &mut rng).unwrap();
        let du = u.comultiply().unwrap();
        for (f, h) in bat.pairs() {
            for x in bat.points() {
                let lhs = du.pair(&[f.clone(), h.clone()], x).unwrap();
                let rhs = u.evaluate(&(f * h), x).unwrap();
                assert!(relative_deviation(lhs, rhs) <= 1e-12, "{}", g.id());
                let swapped = du.flip().pair(&[f.clone(), h.clone()], x).unwrap();
                assert!(relative_deviation(swapped, lhs) <= 1e-12);
            }
        }
        assert!(DiracSection::zero(&g).comultiply().unwrap().is_empty());
    }
}

#[test]
fn tensor_balance_over_the_base_ring() {
    let g = translation();
    let bat = battery(&g, 5);
    let mut rng = instance_rng(6, 0);
    let u = random_section(&g, 2, &mut rng).unwrap();
    let v = random_section(&g, 2, &mut rng).unwrap();
    let f = random_coefficient(&g, &mut rng);
    let left = TensorElement::pure(vec![u.module_act(&f).unwrap(), v.clone()]).unwrap();
    let right = TensorElement::pure(vec![u.clone(), v.module_act(&f).unwrap()]).unwrap();
    assert!(tensor_deviation(&left, &right, &bat).unwrap() <= 1e-13);
    let single = TensorElement::pure(vec![u.clone(), v.clone()]).unwrap();
    let (a, b) = (bat.functions()[0].clone(), bat.partners()[0].clone());
    let x = &bat.points()[0];
    let expected = u.evaluate(&a, x).unwrap() * v.evaluate(&b, x).unwrap();
    assert_eq!(single.pair(&[a, b], x).unwrap(), expected);
}

#[test]
fn counit_examples() {
    let g = translation();
    let f = ScalarExpr::bump(&[0.2], 0.7).unwrap();
    let u = DiracSection::generator(&g, f.clone(), vec![1.5]).unwrap();
    assert!(u.counit() == f);
    assert!(DiracSection::zero(&g).counit().is_zero());
}

#[test]
fn conjugation_examples() {
    let g = translation();
    let bat = battery(&g, 7);
    let mut rng = instance_rng(8, 0);
    let u = random_section(&g, 2, &mut rng).unwrap();
    assert!(u.conjugate().max_deviation(&u, &bat).unwrap() == 0.0);
    let w = u
        .add(&random_section(&g, 2, &mut rng).unwrap().scale(Complex64::new(0.0, 1.0)))
        .unwrap();
    assert!(w.conjugate().conjugate().max_deviation(&w, &bat).unwrap() == 0.0);
    for f in bat.functions() {
        for x in bat.points() {
            let lhs = w.conjugate().evaluate(f, x).unwrap();
            assert!(relative_deviation(lhs, w.evaluate(f, x).unwrap().conj()) <= 1e-15);
        }
    }
}

#[test]
fn equality_testing_examples() {
    let g = translation();
    let bat = battery(&g, 9);
    let mut rng = instance_rng(10, 0);
    let u = random_section(&g, 3, &mut rng).unwrap();
    assert!(u.approx_equal(&u, &bat, 1e-9).unwrap());
    let mut reversed: Vec<Term> = u.terms().to_vec();
    reversed.reverse();
    let permuted = DiracSection::new(&g, reversed).unwrap();
    assert!(u.approx_equal(&permuted, &bat, 1e-9).unwrap());
    let tiny = DiracSection::generator(&g, ScalarExpr::bump(&[0.0], 1.0).unwrap() * 1e-3, vec![0.7]).unwrap();
    assert!(!u.approx_equal(&u.add(&tiny).unwrap(), &bat, 1e-9).unwrap());
}

#[test]
fn seminorm_over_point_base() {
    let g = Arc::new(catalog::trivial_bundle(0, 1));
    let y = ScalarExpr::coord(1, 0);
    let delta = |a: f64| DiracSection::delta(&g, vec![a]).unwrap();
    assert_eq!(delta(0.5).seminorm_pb(&[ScalarExpr::one(1)]).unwrap(), 1.0);
    assert_eq!(
        DiracSection::zero(&g).seminorm_pb(std::slice::from_ref(&y)).unwrap(),
        0.0
    );
    let u = delta(2.0).sub(&delta(1.0)).unwrap();
    assert_eq!(u.seminorm_pb(&[y.clone(), y.powi(2)]).unwrap(), 3.0);
}

#[test]
fn serialized_form_round_trips() {
    for g in groupoids() {
        let mut rng = instance_rng(12, 0);
        let bat = battery(&g, 12);
        let u = random_section(&g, 3, &mut rng).unwrap();
        let back = DiracSection::from_serialized(&g, &u.to_serialized()).unwrap();
        assert!(u.max_deviation(&back, &bat).unwrap() == 0.0, "{}", g.id());
    }
}

/// `(f₁·δ_{h₁})*(f₂·δ_{h₂}) = (f₁·f₂)·δ_{h₁h₂}`, omitting the pullback.
fn convolve_without_pullback(a: &DiracSection, b: &DiracSection) -> DiracSection {
    let g = a.groupoid();
    let mut terms = Vec::new();
    for s in a.terms() {
        for t in b.terms() {
            terms.push(Term {
                coef: &s.coef * &t.coef,
                support: s.support.clone(),
                atom: g.group().multiply(&s.atom, &t.atom),
            });
        }
    }
    DiracSection::new(g, terms).unwrap()
}

/// `S(f·δ_h) = f·δ_{h⁻¹}`, omitting the pullback.
fn antipode_without_pullback(a: &DiracSection) -> DiracSection {
    let g = a.groupoid();
    let terms = a
        .terms()
        .iter()
        .map(|t| Term {
            atom: g.group().invert(&t.atom),
            ..t.clone()
        })
        .collect();
    DiracSection::new(g, terms).unwrap()
}

#[test]
fn law_checks_detect_broken_operations() {
    for g in [
        translation(),
        Arc::new(catalog::affine_line()),
        Arc::new(catalog::so2_plane()),
    ] {
        let bat = battery(&g, 13);
        let mut rng = instance_rng(14, 0);
        let mut oracle_gap: f64 = 0.0;
        let mut axiom_gap: f64 = 0.0;
        for _ in 0..10 {
            let a = random_section(&g, 2, &mut rng).unwrap();
            let b = random_section(&g, 2, &mut rng).unwrap();
            let wrong = convolve_without_pullback(&a, &b);
            for f in bat.functions() {
                for x in bat.points() {
                    oracle_gap = oracle_gap.max(relative_deviation(
                        wrong.evaluate(f, x).unwrap(),
                        a.convolve_oracle(&b, f, x).unwrap(),
                    ));
                }
            }
            let da = a.comultiply().unwrap();
            let lhs = da
                .contract(|legs| antipode_without_pullback(&legs[0]).convolve(&legs[1]))
                .unwrap();
            let rhs = DiracSection::from_base(&g, antipode_without_pullback(&a).counit()).unwrap();
            axiom_gap = axiom_gap.max(lhs.max_deviation(&rhs, &bat).unwrap());
        }
        assert!(oracle_gap > 1e-3, "{}: {oracle_gap}", g.id());
        assert!(axiom_gap > 1e-3, "{}: {axiom_gap}", g.id());
    }
}

#[test]
fn law_names_are_stable() {
    assert_eq!(LAWS.len(), 14);
    assert_eq!(LAWS[0], "coassociativity");
    assert!(LAWS.contains(&"antipode-axiom"));
    assert!(LAWS.contains(&"convolution-oracle"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generator_formula_matches_oracle(seed in any::<u64>(), which in 0..6usize) {
        let g = &groupoids()[which];
        let mut rng = instance_rng(seed, 0);
        let u = random_section(g, 3, &mut rng).unwrap();
        let v = random_section(g, 3, &mut rng).unwrap();
        let f = random_function(g, &mut rng);
        let x = random_point(g, &mut rng);
        let lhs = u.convolve(&v).unwrap().evaluate(&f, &x).unwrap();
        let rhs = u.convolve_oracle(&v, &f, &x).unwrap();
        prop_assert!(relative_deviation(lhs, rhs) <= 1e-9);
    }

    #[test]
    fn every_law_holds_on_random_triples(seed in any::<u64>(), which in 0..6usize) {
        let g = &groupoids()[which];
        let bat = Battery::random(g, 8, 6, &mut instance_rng(seed, u64::MAX));
        let mut rng = instance_rng(seed, 0);
        let a = random_section(g, 2, &mut rng).unwrap();
        let b = random_section(g, 2, &mut rng).unwrap();
        let c = random_section(g, 2, &mut rng).unwrap();
        let devs = instance_deviations(&a, &b, &c, &bat).unwrap();
        for (law, d) in LAWS.iter().zip(devs) {
            prop_assert!(d <= 1e-9, "{} {}: {:e}", g.id(), law, d);
        }
    }

    #[test]
    fn module_map_law(seed in any::<u64>(), which in 0..6usize) {
        let g = &groupoids()[which];
        let mut rng = instance_rng(seed, 0);
        let u = random_section(g, 3, &mut rng).unwrap();
        let phi = random_coefficient(g, &mut rng);
        let f = random_function(g, &mut rng);
        let x = random_point(g, &mut rng);
        let lhs = u.module_act(&phi).unwrap().evaluate(&f, &x).unwrap();
        let rhs = u.evaluate(&(phi.embed(g.total_dim(), 0).unwrap() * &f), &x).unwrap();
        prop_assert!(relative_deviation(lhs, rhs) <= 1e-12);
    }
}
