//! Pairings between Dirac sections and functions on the arrow space.
//!
//! A function `F` defines `F̂(u) = u(F)`. These checks exercise the
//! module-map, product and conjugation laws of `F ↦ F̂` and the separation
//! of functions by explicit sections.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{make_arrow, theta_character, ArrowGerm, GERM_TOL};
use crate::dirac::battery::{random_coefficient, random_function, random_point, random_section};
use crate::dirac::{relative_deviation, DiracSection};
use crate::error::Result;
use crate::fold_max;
use crate::groupoid::{ActionGroupoid, Arrow};
use crate::rng::instance_rng;
use crate::smoothfn::ScalarExpr;

/// A section telling two functions apart at its base point.
#[derive(Clone, Debug)]
pub struct Separation {
    pub arrow: Arrow,
    pub germ: ArrowGerm,
    /// `|u(F)(x) − u(G)(x)|`.
    pub gap: f64,
}

/// Among `candidates`, the arrow where `|F − G|` is largest, with the witness
/// `plateau·δ_h` at its target. `None` when `F` and `G` agree on every
/// candidate.
pub fn separating_section(
    g: &Arc<ActionGroupoid>,
    f: &ScalarExpr,
    h: &ScalarExpr,
    candidates: &[Arrow],
    r_norm: f64,
) -> Result<Option<Separation>> {
    let mut best: Option<(f64, &Arrow)> = None;
    for a in candidates {
        let mut p = a.x.clone();
        p.extend_from_slice(&a.h);
        let d = (f.eval(&p)? - h.eval(&p)?).norm();
        if d > 0.0 && best.is_none_or(|(b, _)| d > b) {
            best = Some((d, a));
        }
    }
    let Some((_, arrow)) = best else {
        return Ok(None);
    };
    let germ = make_arrow(g, &arrow.x, &arrow.h, r_norm)?;
    let gap = (theta_character(&germ, f)? - theta_character(&germ, h)?).norm();
    Ok(Some(Separation {
        arrow: arrow.clone(),
        germ,
        gap,
    }))
}

/// `(FG)^(ξ)` against `F̂(ξ)·Ĝ(ξ)`.
pub fn product_law_deviation(germ: &ArrowGerm, f: &ScalarExpr, h: &ScalarExpr) -> Result<f64> {
    let lhs = theta_character(germ, &(f * h))?;
    Ok(relative_deviation(
        lhs,
        theta_character(germ, f)? * theta_character(germ, h)?,
    ))
}

/// `u(F̄)(x)` against the conjugate of `ū(F)(x)`.
pub fn conjugation_law_deviation(u: &DiracSection, f: &ScalarExpr, x: &[f64]) -> Result<f64> {
    let lhs = u.evaluate(&f.conj(), x)?;
    Ok(relative_deviation(lhs, u.conjugate().evaluate(f, x)?.conj()))
}

/// `(φ·u)(F)(x)` against `u((φ∘t)·F)(x)` for a base function `φ`.
pub fn module_law_deviation(u: &DiracSection, phi: &ScalarExpr, f: &ScalarExpr, x: &[f64]) -> Result<f64> {
    let n = u.groupoid().total_dim();
    let lhs = u.module_act(phi)?.evaluate(f, x)?;
    Ok(relative_deviation(lhs, u.evaluate(&(phi.embed(n, 0)? * f), x)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualConfig {
    /// Random distinct `(F, G)` pairs to separate.
    pub pairs: usize,
    /// Candidate arrows searched per pair.
    pub candidates: usize,
    /// Smallest gap counted as a separation.
    pub min_gap: f64,
    /// Random instances per algebraic law.
    pub instances: usize,
    pub r_norm: f64,
    pub tol: f64,
}

impl Default for DualConfig {
    fn default() -> Self {
        Self {
            pairs: 10,
            candidates: 64,
            min_gap: 1e-3,
            instances: 100,
            r_norm: 0.2,
            tol: GERM_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationSummary {
    pub pairs: usize,
    pub separated: usize,
    pub min_gap: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualLaw {
    pub law: String,
    pub instances: usize,
    pub max_relative_deviation: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualReport {
    pub groupoid: String,
    pub seed: u64,
    pub separation: SeparationSummary,
    pub laws: Vec<DualLaw>,
    pub pass: bool,
}

/// Laws checked by [`check_duality`], in report order.
pub const DUAL_LAWS: [&str; 4] = ["product", "conjugation-grouplike", "conjugation", "module-map"];

fn complex_function<R: Rng + ?Sized>(g: &ActionGroupoid, rng: &mut R) -> ScalarExpr {
    let re = random_function(g, rng);
    let im = random_function(g, rng);
    re + im.scale(Complex64::new(0.0, 1.0))
}

fn complex_section<R: Rng + ?Sized>(g: &Arc<ActionGroupoid>, rng: &mut R) -> Result<DiracSection> {
    let a = random_section(g, 2, rng)?;
    let b = random_section(g, 2, rng)?;
    a.add(&b.scale(Complex64::new(0.3, rng.gen_range(0.5..=1.5))))
}

/// Separation of random function pairs and the dual-algebra laws on random
/// grouplike germs and complex sections.
pub fn check_duality(g: &Arc<ActionGroupoid>, seed: u64, cfg: &DualConfig) -> Result<DualReport> {
    let gaps: Vec<Result<f64>> = (0..cfg.pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, i as u64);
            let f = random_function(g, &mut rng);
            let mut h = random_function(g, &mut rng);
            while h == f {
                h = random_function(g, &mut rng);
            }
            let candidates: Vec<Arrow> = (0..cfg.candidates).map(|_| g.sample_arrow(&mut rng)).collect();
            Ok(separating_section(g, &f, &h, &candidates, cfg.r_norm)?.map_or(0.0, |s| s.gap))
        })
        .collect();
    let mut separated = 0;
    let mut min_gap = f64::INFINITY;
    for gap in gaps {
        let gap = gap?;
        min_gap = min_gap.min(gap);
        if gap > cfg.min_gap {
            separated += 1;
        }
    }
    let separation = SeparationSummary {
        pairs: cfg.pairs,
        separated,
        min_gap: if cfg.pairs == 0 { 0.0 } else { min_gap },
        pass: separated == cfg.pairs,
    };

    let offset = cfg.pairs as u64;
    let per_instance: Vec<Result<[f64; 4]>> = (0..cfg.instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, offset + i as u64);
            let arrow = g.sample_arrow(&mut rng);
            let germ = make_arrow(g, &arrow.x, &arrow.h, cfg.r_norm)?;
            let f = complex_function(g, &mut rng);
            let h = complex_function(g, &mut rng);
            let u = complex_section(g, &mut rng)?;
            let x = random_point(g, &mut rng);
            let phi = random_coefficient(g, &mut rng);
            Ok([
                product_law_deviation(&germ, &f, &h)?,
                conjugation_law_deviation(germ.witness(), &f, germ.x())?,
                conjugation_law_deviation(&u, &f, &x)?,
                module_law_deviation(&u, &phi, &f, &x)?,
            ])
        })
        .collect();
    let mut worst = [0.0f64; 4];
    for devs in per_instance {
        for (w, d) in worst.iter_mut().zip(devs?) {
            *w = fold_max(*w, d);
        }
    }
    let laws: Vec<DualLaw> = DUAL_LAWS
        .iter()
        .zip(worst)
        .map(|(law, d)| DualLaw {
            law: law.to_string(),
            instances: cfg.instances,
            max_relative_deviation: d,
            pass: d <= cfg.tol,
        })
        .collect();
    Ok(DualReport {
        groupoid: g.id().to_string(),
        seed,
        pass: separation.pass && laws.iter().all(|l| l.pass),
        separation,
        laws,
    })
}
