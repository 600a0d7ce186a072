use std::f64::consts::PI;
use std::sync::Arc;

use dirac_algebroid::dirac::DiracSection;
use dirac_algebroid::groupoid::{catalog, max_abs_diff, ActionGroupoid};
use dirac_algebroid::rng::{instance_rng, SHARED_STREAM};
use dirac_algebroid::smoothfn::ScalarExpr;
use dirac_algebroid::spectral::dual::{check_duality, product_law_deviation, DualConfig};
use dirac_algebroid::spectral::*;
use dirac_algebroid::Error;

fn catalog_groupoids() -> Vec<Arc<ActionGroupoid>> {
    catalog::entries()
        .iter()
        .map(|e| Arc::new(catalog::by_name(e.name, None).unwrap()))
        .collect()
}

#[test]
fn round_trips_pass_on_every_catalog_entry() {
    let cfg = RoundTripConfig {
        samples: 200,
        ..RoundTripConfig::default()
    };
    for g in catalog_groupoids() {
        let report = reconstruct_round_trip(&g, 11, &cfg).unwrap();
        assert_eq!(report.checks.len(), ROUND_TRIP_CHECKS.len());
        for c in &report.checks {
            assert!(c.pass, "{} {}: {:e}", g.id(), c.check, c.max_deviation);
        }
        assert!(report.pass);
    }
}

#[test]
fn round_trip_reports_are_reproducible() {
    let g = Arc::new(catalog::affine_line());
    let cfg = RoundTripConfig {
        samples: 30,
        ..RoundTripConfig::default()
    };
    let a = reconstruct_round_trip(&g, 4, &cfg).unwrap();
    let b = reconstruct_round_trip(&g, 4, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn source_does_not_depend_on_the_witness() {
    for g in catalog_groupoids() {
        let mut rng = instance_rng(31, 0);
        for _ in 0..20 {
            let a = g.sample_arrow(&mut rng);
            let expected = g.source(&a);
            for r in [0.05, 0.2, 0.4] {
                let germ = make_arrow(&g, &a.x, &a.h, r).unwrap();
                assert!(
                    max_abs_diff(&germ_source(&germ).unwrap(), &expected) <= 1e-9,
                    "{}",
                    g.id()
                );
            }
            if g.base_dim() > 0 {
                let germ = make_arrow(&g, &a.x, &a.h, 0.2).unwrap();
                let bump = ScalarExpr::plateau(&a.x, 0.1, 0.3).unwrap();
                let reshaped = germ.witness().module_act(&bump).unwrap();
                let other = ArrowGerm::from_parts(a.x.clone(), reshaped, 0.1).unwrap();
                assert!(max_abs_diff(&germ_source(&other).unwrap(), &expected) <= 1e-9);
            }
        }
    }
}

#[test]
fn germs_are_grouplike_and_equal_across_witnesses() {
    for g in catalog_groupoids() {
        let battery = germ_battery(&g, &mut instance_rng(32, SHARED_STREAM));
        let mut rng = instance_rng(32, 0);
        for _ in 0..20 {
            let a = g.sample_arrow(&mut rng);
            let narrow = make_arrow(&g, &a.x, &a.h, 0.1).unwrap();
            let wide = make_arrow(&g, &a.x, &a.h, 0.3).unwrap();
            assert!(is_grouplike(&narrow, &battery, GERM_TOL).unwrap());
            assert!(germ_equal(&narrow, &wide, &default_radii(&narrow, &wide), &battery, GERM_TOL).unwrap());
        }
    }
}

#[test]
fn characters_separate_distinct_germs() {
    for g in catalog_groupoids() {
        let battery = germ_battery(&g, &mut instance_rng(33, SHARED_STREAM));
        let mut rng = instance_rng(33, 0);
        for i in 0..50 {
            let a = g.sample_arrow(&mut rng);
            let mut b = g.sample_arrow(&mut rng);
            if i % 2 == 0 {
                b.x = a.x.clone();
            }
            // a 1e-3 gap needs arrows that are not too close
            if g.same_arrow(&a, &b, 1e-2) {
                continue;
            }
            let ga = make_arrow(&g, &a.x, &a.h, 0.2).unwrap();
            let gb = make_arrow(&g, &b.x, &b.h, 0.2).unwrap();
            let mut gap: f64 = 0.0;
            for f in battery.functions() {
                gap = gap.max((theta_character(&ga, f).unwrap() - theta_character(&gb, f).unwrap()).norm());
            }
            assert!(gap > 1e-3, "{}: {gap} {a:?} {b:?}", g.id());
        }
    }
}

#[test]
fn characters_are_multiplicative() {
    for g in catalog_groupoids() {
        let battery = germ_battery(&g, &mut instance_rng(34, SHARED_STREAM));
        let mut rng = instance_rng(34, 0);
        let fs = battery.functions();
        for i in 0..100 {
            let a = g.sample_arrow(&mut rng);
            let germ = make_arrow(&g, &a.x, &a.h, 0.2).unwrap();
            let (f, h) = (&fs[i % fs.len()], &fs[(i + 1) % fs.len()]);
            assert!(product_law_deviation(&germ, f, h).unwrap() <= 1e-9);
        }
    }
}

#[test]
fn duality_holds_on_the_catalog() {
    for g in catalog_groupoids() {
        let report = check_duality(&g, 35, &DualConfig::default()).unwrap();
        assert!(report.pass, "{report:?}");
    }
}

#[test]
fn rotation_angles_wrap() {
    let g = Arc::new(catalog::so2_plane());
    let battery = germ_battery(&g, &mut instance_rng(36, SHARED_STREAM));
    let x = [0.4, -0.7];
    let a = make_arrow(&g, &x, &[0.3], 0.2).unwrap();
    let b = make_arrow(&g, &x, &[0.3 + 2.0 * PI], 0.2).unwrap();
    assert!(germ_equal(&a, &b, &default_radii(&a, &b), &battery, GERM_TOL).unwrap());
    assert!(max_abs_diff(&germ_source(&a).unwrap(), &germ_source(&b).unwrap()) <= 1e-12);
    let full = make_arrow(&g, &x, &[PI], 0.2).unwrap();
    let half = make_arrow(&g, &germ_source(&full).unwrap(), &[PI], 0.2).unwrap();
    let turn = germ_compose(&full, &half).unwrap();
    let unit = unit_germ(&g, &x, 0.2).unwrap();
    assert!(germ_equal(&turn, &unit, &default_radii(&turn, &unit), &battery, GERM_TOL).unwrap());
}

#[test]
fn trivial_group_germs_are_units() {
    let g = Arc::new(catalog::trivial_group(2));
    let battery = germ_battery(&g, &mut instance_rng(37, SHARED_STREAM));
    let x = [0.2, 0.9];
    let u = unit_germ(&g, &x, 0.2).unwrap();
    assert_eq!(germ_source(&u).unwrap(), x.to_vec());
    assert_eq!(germ_target(&u), x.to_vec());
    let uu = germ_compose(&u, &u).unwrap();
    assert!(germ_equal(&uu, &u, &default_radii(&uu, &u), &battery, GERM_TOL).unwrap());
    let inv = germ_inverse(&u).unwrap();
    assert!(germ_equal(&inv, &u, &default_radii(&inv, &u), &battery, GERM_TOL).unwrap());
}

#[test]
fn malformed_witnesses_are_rejected() {
    let g = Arc::new(catalog::translation(1).unwrap());
    let battery = germ_battery(&g, &mut instance_rng(38, SHARED_STREAM));
    let a = make_arrow(&g, &[0.0], &[1.0], 0.2).unwrap();
    let b = make_arrow(&g, &[0.0], &[2.0], 0.2).unwrap();
    let sum = ArrowGerm::from_parts(vec![0.0], a.witness().add(b.witness()).unwrap(), 0.2).unwrap();
    assert!(!is_grouplike(&sum, &battery, GERM_TOL).unwrap());
    assert!(matches!(germ_source(&sum), Err(Error::ProbeFailed(_))));
    let zero = ArrowGerm::from_parts(vec![0.0], DiracSection::zero(&g), 0.2).unwrap();
    assert!(!is_grouplike(&zero, &battery, GERM_TOL).unwrap());
    assert!(make_arrow(&g, &[0.0], &[1.0], 0.0).is_err());
    assert!(make_arrow(&g, &[0.0, 1.0], &[1.0], 0.2).is_err());
    let far = make_arrow(&g, &[5.0], &[1.0], 0.2).unwrap();
    assert!(matches!(germ_compose(&a, &far), Err(Error::NotComposable { .. })));
}
