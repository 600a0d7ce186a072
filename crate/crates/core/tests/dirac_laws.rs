use std::sync::Arc;

use dirac_algebroid::dirac::laws::{check_convolution_oracle, check_laws, LawConfig};
use dirac_algebroid::groupoid::catalog;

#[test]
fn hopf_laws_hold_on_every_catalog_groupoid() {
    let cfg = LawConfig {
        instances: 20,
        ..LawConfig::default()
    };
    for entry in catalog::entries() {
        let g = Arc::new(catalog::by_name(entry.name, None).unwrap());
        let reports = check_laws(&g, 11, &cfg).unwrap();
        for r in reports {
            assert!(
                r.pass,
                "{} failed {} with deviation {:e}",
                g.id(),
                r.law,
                r.max_relative_deviation
            );
        }
    }
}

#[test]
fn generator_convolution_matches_oracle_on_200_tuples() {
    for entry in catalog::entries() {
        let g = Arc::new(catalog::by_name(entry.name, None).unwrap());
        let r = check_convolution_oracle(&g, 12, 200, 3, 1e-9).unwrap();
        assert!(r.pass, "{} {:e}", g.id(), r.max_relative_deviation);
    }
}
