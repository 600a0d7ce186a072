use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    default_radii, germ_battery, germ_compose, germ_deviation, germ_inverse, germ_source, germ_target,
    grouplike_deviation, make_arrow, unit_germ, ArrowGerm, GERM_TOL,
};
use crate::dirac::Battery;
use crate::error::Result;
use crate::fold_max;
use crate::groupoid::{max_abs_diff, ActionGroupoid, Arrow, EPS_GRP};
use crate::rng::{instance_rng, SHARED_STREAM};

/// Checks run on every sampled arrow, in report order.
pub const ROUND_TRIP_CHECKS: [&str; 8] = [
    "target",
    "source",
    "grouplike",
    "compose",
    "inverse",
    "unit",
    "associativity",
    "corrupted-rejected",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundTripConfig {
    pub samples: usize,
    pub r_norm: f64,
    pub tol: f64,
}

impl Default for RoundTripConfig {
    fn default() -> Self {
        Self {
            samples: 1000,
            r_norm: 0.2,
            tol: GERM_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundTripCheck {
    pub check: String,
    pub instances: usize,
    /// For `corrupted-rejected`, 1 if any corrupted witness was accepted.
    pub max_deviation: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundTripReport {
    pub groupoid: String,
    pub seed: u64,
    pub samples: usize,
    pub r_norm: f64,
    pub checks: Vec<RoundTripCheck>,
    pub pass: bool,
}

/// Failed operations count as infinite deviation.
fn dev(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::INFINITY)
}

fn germ_dev(a: Result<ArrowGerm>, b: &ArrowGerm, battery: &Battery) -> f64 {
    dev(a.and_then(|a| germ_deviation(&a, b, &default_radii(&a, b), battery)))
}

/// Compares the germ calculus with the structure maps of `g` on random
/// arrows `(x, h)` and composable chains through them.
pub fn reconstruct_round_trip(g: &Arc<ActionGroupoid>, seed: u64, cfg: &RoundTripConfig) -> Result<RoundTripReport> {
    let battery = germ_battery(g, &mut instance_rng(seed, SHARED_STREAM));
    let per_sample: Vec<Result<[f64; 8]>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| sample_deviations(g, &battery, cfg.r_norm, seed, i as u64))
        .collect();
    let mut worst = [0.0f64; 8];
    for devs in per_sample {
        for (w, d) in worst.iter_mut().zip(devs?) {
            *w = fold_max(*w, d);
        }
    }
    let checks: Vec<RoundTripCheck> = ROUND_TRIP_CHECKS
        .iter()
        .zip(worst)
        .map(|(name, d)| RoundTripCheck {
            check: name.to_string(),
            instances: cfg.samples,
            max_deviation: d,
            pass: d <= cfg.tol,
        })
        .collect();
    Ok(RoundTripReport {
        groupoid: g.id().to_string(),
        seed,
        samples: cfg.samples,
        r_norm: cfg.r_norm,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

fn sample_deviations(g: &Arc<ActionGroupoid>, battery: &Battery, r: f64, seed: u64, stream: u64) -> Result<[f64; 8]> {
    let mut rng = instance_rng(seed, stream);
    let grp = g.group();
    let a1 = g.sample_arrow(&mut rng);
    let a2 = Arrow::new(g.source(&a1), grp.sample(&mut rng));
    let a3 = Arrow::new(g.source(&a2), grp.sample(&mut rng));
    let extra = grp.sample(&mut rng);
    let g1 = make_arrow(g, &a1.x, &a1.h, r)?;
    let g2 = make_arrow(g, &a2.x, &a2.h, r)?;
    let g3 = make_arrow(g, &a3.x, &a3.h, r)?;

    let target = max_abs_diff(&germ_target(&g1), &g.target(&a1));
    let source = dev(germ_source(&g1).map(|s| max_abs_diff(&s, &g.source(&a1))));

    let g12 = germ_compose(&g1, &g2);
    let grouplike = fold_max(
        dev(grouplike_deviation(&g1, battery)),
        match &g12 {
            Ok(c) => dev(grouplike_deviation(c, battery)),
            Err(_) => f64::INFINITY,
        },
    );

    let a12 = g.compose(&a1, &a2, EPS_GRP)?;
    let compose = germ_dev(g12.clone(), &make_arrow(g, &a12.x, &a12.h, r)?, battery);

    let inv = g.inverse(&a1);
    let inverse = germ_dev(germ_inverse(&g1), &make_arrow(g, &inv.x, &inv.h, r)?, battery);

    let right_unit = germ_dev(
        germ_source(&g1).and_then(|s| germ_compose(&g1, &unit_germ(g, &s, r)?)),
        &g1,
        battery,
    );
    let left_unit = germ_dev(germ_compose(&unit_germ(g, &a1.x, r)?, &g1), &g1, battery);

    let assoc = match (g12, germ_compose(&g2, &g3)) {
        (Ok(g12), Ok(g23)) => match germ_compose(&g1, &g23) {
            Ok(right) => germ_dev(germ_compose(&g12, &g3), &right, battery),
            Err(_) => f64::INFINITY,
        },
        _ => f64::INFINITY,
    };

    let doubled = g1.scaled(Complex64::new(2.0, 0.0));
    let mut accepted = dev(grouplike_deviation(&doubled, battery)) <= GERM_TOL || germ_source(&doubled).is_ok();
    let other = make_arrow(g, &a1.x, &extra, r)?;
    if !grp.same_element(&extra, &a1.h, EPS_GRP) {
        let sum = ArrowGerm::from_parts(a1.x.clone(), g1.witness().add(other.witness())?, r)?;
        accepted |= dev(grouplike_deviation(&sum, battery)) <= GERM_TOL;
    }

    Ok([
        target,
        source,
        grouplike,
        compose,
        inverse,
        fold_max(left_unit, right_unit),
        assoc,
        if accepted { 1.0 } else { 0.0 },
    ])
}
