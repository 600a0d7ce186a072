//! Executable bialgebroid and Hopf axioms.
//!
//! Every law is checked on random generator tuples by comparing both sides
//! through evaluation (sections) or the tensor pairing (tensors) on a shared
//! battery. The reported figure is the largest relative deviation.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::battery::{random_function, random_point, random_section, Battery};
use super::{relative_deviation, DiracSection, TensorElement};
use crate::error::Result;
use crate::fold_max;
use crate::groupoid::ActionGroupoid;
use crate::rng::{instance_rng, SHARED_STREAM};
use crate::smoothfn::{Cuboid, ScalarExpr};

/// Law identifiers in report order.
pub const LAWS: &[&str] = &[
    "coassociativity",
    "counit-left",
    "counit-right",
    "cocommutativity",
    "comultiplication-multiplicative",
    "counit-multiplicative",
    "antipode-antihomomorphism",
    "antipode-involution",
    "antipode-fixes-base",
    "antipode-axiom",
    "convolution-associative",
    "local-units",
    "convolution-oracle",
    "local-unit-independence",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: String,
    pub instances: usize,
    pub max_relative_deviation: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct LawConfig {
    pub instances: usize,
    pub pairs: usize,
    pub points: usize,
    pub max_terms: usize,
    pub tol: f64,
}

impl Default for LawConfig {
    fn default() -> Self {
        Self {
            instances: 100,
            pairs: super::battery::DEFAULT_PAIRS,
            points: super::battery::DEFAULT_POINTS,
            max_terms: 2,
            tol: 1e-9,
        }
    }
}

/// Runs every law in [`LAWS`] on `cfg.instances` random triples `(a, b, c)`.
pub fn check_laws(g: &Arc<ActionGroupoid>, seed: u64, cfg: &LawConfig) -> Result<Vec<LawReport>> {
    let battery = Battery::random(g, cfg.pairs, cfg.points, &mut instance_rng(seed, SHARED_STREAM));
    let per_instance: Vec<Result<Vec<f64>>> = (0..cfg.instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, i as u64);
            let a = random_section(g, cfg.max_terms, &mut rng)?;
            let b = random_section(g, cfg.max_terms, &mut rng)?;
            let c = random_section(g, cfg.max_terms, &mut rng)?;
            instance_deviations(&a, &b, &c, &battery)
        })
        .collect();
    let mut worst = vec![0.0f64; LAWS.len()];
    for devs in per_instance {
        for (w, d) in worst.iter_mut().zip(devs?) {
            *w = fold_max(*w, d);
        }
    }
    Ok(LAWS
        .iter()
        .zip(worst)
        .map(|(law, d)| LawReport {
            law: law.to_string(),
            instances: cfg.instances,
            max_relative_deviation: d,
            pass: d <= cfg.tol,
        })
        .collect())
}

/// First stream of [`check_convolution_oracle`], clear of the streams used
/// by [`check_laws`].
const ORACLE_STREAMS: u64 = 1 << 32;

/// The generator formula for `u * v` against the transversal convolution
/// `u(x' ↦ v(F∘L)(x'))` on `samples` random tuples `(u, v, F, x)`.
pub fn check_convolution_oracle(
    g: &Arc<ActionGroupoid>,
    seed: u64,
    samples: usize,
    max_terms: usize,
    tol: f64,
) -> Result<LawReport> {
    let devs: Vec<Result<f64>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, ORACLE_STREAMS + i as u64);
            let u = random_section(g, max_terms, &mut rng)?;
            let v = random_section(g, max_terms, &mut rng)?;
            let f = random_function(g, &mut rng);
            let x = random_point(g, &mut rng);
            Ok(relative_deviation(
                u.convolve(&v)?.evaluate(&f, &x)?,
                u.convolve_oracle(&v, &f, &x)?,
            ))
        })
        .collect();
    let mut worst: f64 = 0.0;
    for d in devs {
        worst = fold_max(worst, d?);
    }
    Ok(LawReport {
        law: "convolution-oracle-pointwise".into(),
        instances: samples,
        max_relative_deviation: worst,
        pass: worst <= tol,
    })
}

/// Deviations for one instance, in the order of [`LAWS`].
pub fn instance_deviations(
    a: &DiracSection,
    b: &DiracSection,
    c: &DiracSection,
    battery: &Battery,
) -> Result<Vec<f64>> {
    let g = a.groupoid();
    let comult = |u: &DiracSection| u.comultiply();
    let da = a.comultiply()?;
    let ab = a.convolve(b)?;

    let coassoc = tensor_deviation(&da.expand_leg(0, comult)?, &da.expand_leg(1, comult)?, battery)?;
    let counit_left = da.contract(|legs| legs[0].module_act(&legs[1].counit()))?;
    let counit_right = da.contract(|legs| legs[1].module_act(&legs[0].counit()))?;
    let cocomm = tensor_deviation(&da.flip(), &da, battery)?;
    let delta_mult = tensor_deviation(&ab.comultiply()?, &da.convolve(&b.comultiply()?)?, battery)?;

    let eps_b = DiracSection::from_base(g, b.counit())?;
    let counit_mult = function_deviation(&ab.counit(), &a.convolve(&eps_b)?.counit(), battery);

    let s_anti = a.convolve(b)?.antipode()?;
    let s_anti_rhs = b.antipode()?.convolve(&a.antipode()?)?;
    let base = DiracSection::from_base(g, a.counit())?;
    let antipode_axiom = da.contract(|legs| legs[0].antipode()?.convolve(&legs[1]))?;
    let antipode_rhs = DiracSection::from_base(g, a.antipode()?.counit())?;

    let (left_unit, right_unit) = local_units(a)?;
    let units = fold_max(
        left_unit.convolve(a)?.max_deviation(a, battery)?,
        a.convolve(&right_unit)?.max_deviation(a, battery)?,
    );

    let mut oracle: f64 = 0.0;
    for f in battery.functions() {
        let kernel = b.convolution_kernel(f)?;
        for x in battery.points() {
            oracle = fold_max(oracle, relative_deviation(ab.evaluate(f, x)?, a.evaluate(&kernel, x)?));
        }
    }

    Ok(vec![
        coassoc,
        counit_left.max_deviation(a, battery)?,
        counit_right.max_deviation(a, battery)?,
        cocomm,
        delta_mult,
        counit_mult,
        s_anti.max_deviation(&s_anti_rhs, battery)?,
        a.antipode()?.antipode()?.max_deviation(a, battery)?,
        base.antipode()?.max_deviation(&base, battery)?,
        antipode_axiom.max_deviation(&antipode_rhs, battery)?,
        ab.convolve(c)?.max_deviation(&a.convolve(&b.convolve(c)?)?, battery)?,
        units,
        oracle,
        tensor_deviation(&a.comultiply()?, &a.comultiply_with(0.6)?, battery)?,
    ])
}

/// Plateaus `1_U·δ_e` and `1_V·δ_e` acting as left and right identities on
/// `u`: `U` covers the coefficient supports, `V` their transports by the
/// atoms.
pub fn local_units(u: &DiracSection) -> Result<(DiracSection, DiracSection)> {
    let g = u.groupoid();
    if g.base_dim() == 0 {
        let one = DiracSection::from_base(g, ScalarExpr::one(0))?;
        return Ok((one.clone(), one));
    }
    let mut left: Option<Cuboid> = None;
    let mut right: Option<Cuboid> = None;
    for (i, t) in u.terms().iter().enumerate() {
        let s = t
            .support
            .as_ref()
            .ok_or(crate::error::Error::MissingSupport { term: i })?;
        let moved = u.transport(s, &t.atom);
        left = Some(left.map_or(s.clone(), |b| b.hull(s)));
        right = Some(right.map_or(moved.clone(), |b| b.hull(&moved)));
    }
    let unit = |b: Option<Cuboid>| -> Result<DiracSection> {
        let f = match b {
            Some(b) => ScalarExpr::plateau_around(&b, super::LOCAL_UNIT_MARGIN)?,
            None => ScalarExpr::one(g.base_dim()),
        };
        DiracSection::from_base(g, f)
    };
    Ok((unit(left)?, unit(right)?))
}

/// Largest relative deviation between two tensors of equal arity, paired
/// against `(F, G)` pairs (arity 2) or `(F, G, F')` triples (arity 3).
pub fn tensor_deviation(s: &TensorElement, t: &TensorElement, battery: &Battery) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let mut check = |fs: &[ScalarExpr]| -> Result<()> {
        for x in battery.points() {
            worst = fold_max(worst, relative_deviation(s.pair(fs, x)?, t.pair(fs, x)?));
        }
        Ok(())
    };
    match s.arity() {
        1 => {
            for f in battery.functions() {
                check(std::slice::from_ref(f))?;
            }
        }
        2 => {
            for (f, g) in battery.pairs() {
                check(&[f.clone(), g.clone()])?;
            }
        }
        _ => {
            for [f, g, h] in battery.triples() {
                let mut fs = vec![f.clone(), g.clone(), h.clone()];
                fs.resize(s.arity(), h.clone());
                check(&fs)?;
            }
        }
    }
    Ok(worst)
}

/// Largest relative deviation between two base functions at the battery
/// points.
pub fn function_deviation(f: &ScalarExpr, g: &ScalarExpr, battery: &Battery) -> f64 {
    battery
        .points()
        .iter()
        .map(|x| relative_deviation(f.value(x), g.value(x)))
        .fold(0.0, fold_max)
}

/// `relative_deviation` folded over pairs of values.
pub fn max_relative(values: impl IntoIterator<Item = (Complex64, Complex64)>) -> f64 {
    values
        .into_iter()
        .map(|(a, b)| relative_deviation(a, b))
        .fold(0.0, fold_max)
}
