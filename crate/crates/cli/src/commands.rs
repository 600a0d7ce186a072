use std::sync::Arc;

use anyhow::Result;
use dirac_algebroid::approx::{
    comb_sweep, family_comb_sweep, mollifier_mass, mollify_sweep, normalized_mollifier, standard_functions,
    stencil_sweep, ConvergenceReport, DensityFamily, ParameterKind,
};
use dirac_algebroid::dirac::battery::random_section;
use dirac_algebroid::dirac::laws::{check_convolution_oracle, check_laws, LawConfig, LawReport};
use dirac_algebroid::dirac::{Battery, DiracSection};
use dirac_algebroid::groupoid::catalog::{self, CatalogEntry};
use dirac_algebroid::groupoid::ActionGroupoid;
use dirac_algebroid::rng::{instance_rng, SHARED_STREAM};
use dirac_algebroid::smoothfn::ScalarExpr;
use dirac_algebroid::spectral::dual::{check_duality, DualConfig, DualReport};
use dirac_algebroid::spectral::{reconstruct_round_trip, RoundTripConfig, RoundTripReport};
use serde::Serialize;

use crate::scenario::Scenario;

/// Version of every report layout.
pub const SCHEMA: u32 = 1;

/// Stream blocks for checks that do not come from the core suites.
const GROUP_STREAM: u64 = 2 << 32;
const FD_STREAM: u64 = 3 << 32;
const MOLLIFY_STREAM: u64 = 4 << 32;

const FD_STEP: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomsReport {
    pub schema: u32,
    pub command: &'static str,
    pub groupoid: String,
    pub seed: u64,
    pub laws: Vec<LawReport>,
    pub pass: bool,
}

pub fn axioms(s: &Scenario) -> Result<AxiomsReport> {
    let g = s.groupoid()?;
    let cfg = LawConfig {
        instances: s.instances,
        pairs: s.battery.pairs,
        points: s.battery.points,
        max_terms: s.battery.max_terms,
        tol: s.tolerances.tol_axiom,
    };
    let mut laws = check_laws(&g, s.seed, &cfg)?;
    laws.push(check_convolution_oracle(
        &g,
        s.seed,
        s.oracle_samples,
        s.battery.max_terms + 1,
        s.tolerances.tol_axiom,
    )?);

    let mut rng = instance_rng(s.seed, GROUP_STREAM);
    let eps = s.tolerances.eps_grp;
    let group = g.group().axiom_deviation(s.instances, &mut rng);
    laws.push(law("group-axioms", s.instances, group, eps));
    let action = g.action_deviation(s.instances, &mut rng);
    laws.push(law("action-axioms", s.instances, action, eps));

    let battery = Battery::random(
        &g,
        s.battery.pairs,
        s.battery.points,
        &mut instance_rng(s.seed, SHARED_STREAM),
    );
    let fd = derivative_deviation(&g, battery.functions(), s.battery.points, s.seed)?;
    laws.push(law(
        "derivative-central-difference",
        battery.functions().len(),
        fd,
        s.tolerances.tol_fd,
    ));

    Ok(AxiomsReport {
        schema: SCHEMA,
        command: "axioms",
        groupoid: g.id().to_string(),
        seed: s.seed,
        pass: laws.iter().all(|l| l.pass),
        laws,
    })
}

fn law(name: &str, instances: usize, d: f64, tol: f64) -> LawReport {
    LawReport {
        law: name.to_string(),
        instances,
        max_relative_deviation: d,
        pass: d <= tol,
    }
}

/// `|∂_i F − (F(p + ηe_i) − F(p − ηe_i))/2η| / (1 + |∂_i F|)` over the
/// functions, every coordinate and random arrows.
fn derivative_deviation(g: &ActionGroupoid, functions: &[ScalarExpr], points: usize, seed: u64) -> Result<f64> {
    let mut rng = instance_rng(seed, FD_STREAM);
    let arrows: Vec<Vec<f64>> = (0..points)
        .map(|_| {
            let a = g.sample_arrow(&mut rng);
            let mut p = a.x;
            p.extend(a.h);
            p
        })
        .collect();
    let mut worst: f64 = 0.0;
    for f in functions {
        for i in 0..g.total_dim() {
            let d = f.derive(i)?;
            for p in &arrows {
                let (mut plus, mut minus) = (p.clone(), p.clone());
                plus[i] += FD_STEP;
                minus[i] -= FD_STEP;
                let fd = (f.eval(&plus)? - f.eval(&minus)?) / (2.0 * FD_STEP);
                let exact = d.eval(p)?;
                let dev = (exact - fd).norm() / (1.0 + exact.norm());
                worst = if dev.is_nan() { f64::NAN } else { worst.max(dev) };
            }
        }
    }
    Ok(worst)
}

/// What a sweep is expected to show.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expectation {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_max: Option<f64>,
    /// Error at the smallest parameter strictly below the error at the
    /// largest.
    pub decreasing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub name: String,
    pub experiment: String,
    pub kind: ParameterKind,
    pub rate: Option<f64>,
    pub expected: Expectation,
    pub bounds_satisfied: bool,
    pub pass: bool,
    pub csv: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassRow {
    pub t: f64,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergeReport {
    pub schema: u32,
    pub command: &'static str,
    pub groupoid: String,
    pub seed: u64,
    pub sweeps: Vec<SweepSummary>,
    pub mollifier_mass: Vec<MassRow>,
    pub mollifier_mass_pass: bool,
    pub pass: bool,
}

/// A finished sweep with its CSV rendering.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub summary: SweepSummary,
    pub report: ConvergenceReport,
}

pub const MASS_TOL: f64 = 1e-6;

/// Base density on `ℝ × ℝ` for the family comb.
pub fn family_density() -> Result<DensityFamily> {
    let y = ScalarExpr::coords(2);
    let phi = ScalarExpr::bump1d(2, 0, 0.1, 0.8)?
        * ScalarExpr::bump1d(2, 1, 0.05, 0.4)?
        * (y[0].clone() + y[1].clone() * 0.5 + 1.5);
    Ok(DensityFamily::from_expr(phi, 1)?)
}

/// Base points and multi-indices where the family comb is compared.
pub fn family_points() -> (Vec<Vec<f64>>, Vec<Vec<usize>>) {
    (vec![vec![0.0], vec![0.3], vec![-0.4]], vec![vec![0], vec![1], vec![2]])
}

/// `exp(y₁)·sin(2y₂)`, evaluated at [`STENCIL_POINT`]. The frequency 2
/// keeps the function away from harmonic, where the leading mixed error
/// term of the `(1,1)` stencil cancels.
pub fn stencil_function_2d() -> ScalarExpr {
    let y = ScalarExpr::coords(2);
    y[0].exp() * (y[1].clone() * 2.0).sin()
}

pub const STENCIL_POINT: [f64; 2] = [0.3, 0.4];

pub const STENCIL_BETAS: [[usize; 2]; 4] = [[1, 0], [0, 1], [1, 1], [2, 0]];

/// `exp(1.3y)` at `0.3` for the one-dimensional stencils of order 1 to 4.
pub fn stencil_function_1d() -> ScalarExpr {
    (ScalarExpr::coord(1, 0) * 1.3).exp()
}

fn summarize(name: String, report: ConvergenceReport, expected: Expectation) -> Sweep {
    let rate_ok = match report.rate {
        Some(r) => expected.rate_min.is_none_or(|lo| r >= lo) && expected.rate_max.is_none_or(|hi| r <= hi),
        None => expected.rate_min.is_none() && expected.rate_max.is_none(),
    };
    let decrease_ok = !expected.decreasing
        || match (report.rows.first(), report.rows.last()) {
            (Some(small), Some(large)) => small.error < large.error,
            _ => false,
        };
    let bounds_satisfied = report.all_satisfied();
    Sweep {
        summary: SweepSummary {
            csv: format!("{name}.csv"),
            name,
            experiment: report.experiment.clone(),
            kind: report.kind,
            rate: report.rate,
            expected,
            bounds_satisfied,
            pass: rate_ok && decrease_ok && bounds_satisfied,
        },
        report,
    }
}

fn rate_range(lo: f64, hi: f64) -> Expectation {
    Expectation {
        rate_min: Some(lo),
        rate_max: Some(hi),
        decreasing: false,
    }
}

pub fn converge(s: &Scenario) -> Result<(ConvergeReport, Vec<Sweep>)> {
    let g = s.groupoid()?;
    let mut sweeps = Vec::new();

    for &k in &s.converge.comb_dims {
        let functions = standard_functions(k)?;
        for &l in &s.converge.comb_sides {
            let r = comb_sweep(&functions, l, k, &s.grids.n)?;
            sweeps.push(summarize(format!("comb-k{k}-L{l}"), r, rate_range(0.8, 1.2)));
        }
    }

    let family_g = catalog::translation(1)?;
    let family_functions = Battery::random(&family_g, 3, 0, &mut instance_rng(s.seed, SHARED_STREAM));
    let (points, alphas) = family_points();
    let r = family_comb_sweep(
        &family_density()?,
        family_functions.functions(),
        1.0,
        &s.grids.n,
        &points,
        &alphas,
    )?;
    let at_least = Expectation {
        rate_min: Some(0.9),
        rate_max: None,
        decreasing: false,
    };
    sweeps.push(summarize("family-comb".into(), r, at_least));

    let f2 = stencil_function_2d();
    for beta in STENCIL_BETAS {
        let r = stencil_sweep(&f2, &beta, &STENCIL_POINT, &s.grids.t)?;
        sweeps.push(summarize(
            format!("stencil-{}-{}", beta[0], beta[1]),
            r,
            rate_range(1.8, 2.2),
        ));
    }
    let f1 = stencil_function_1d();
    for n in 1..=4 {
        let r = stencil_sweep(&f1, &[n], &[0.3], &s.grids.t)?;
        sweeps.push(summarize(format!("stencil-{n}"), r, rate_range(1.8, 2.2)));
    }

    let rho = normalized_mollifier(g.group_dim())?;
    let (sections, battery) = mollify_inputs(&g, s)?;
    let r = mollify_sweep(
        &sections,
        &rho,
        battery.functions(),
        battery.points(),
        &s.grids.mollify_t,
    )?;
    let decreasing = Expectation {
        rate_min: None,
        rate_max: None,
        decreasing: true,
    };
    sweeps.push(summarize("mollify".into(), r, decreasing));

    let mut mass = Vec::with_capacity(s.grids.mollify_t.len());
    for &t in &s.grids.mollify_t {
        mass.push(MassRow {
            t,
            mass: mollifier_mass(&rho, t)?,
        });
    }
    let mass_pass = mass.iter().all(|m| (m.mass - 1.0).abs() <= MASS_TOL);

    let report = ConvergeReport {
        schema: SCHEMA,
        command: "converge",
        groupoid: g.id().to_string(),
        seed: s.seed,
        pass: mass_pass && sweeps.iter().all(|w| w.summary.pass),
        sweeps: sweeps.iter().map(|w| w.summary.clone()).collect(),
        mollifier_mass: mass,
        mollifier_mass_pass: mass_pass,
    };
    Ok((report, sweeps))
}

/// Random sections and a fixed battery for the mollifier sweep.
pub fn mollify_inputs(g: &Arc<ActionGroupoid>, s: &Scenario) -> Result<(Vec<DiracSection>, Battery)> {
    let mut rng = instance_rng(s.seed, MOLLIFY_STREAM);
    let sections = (0..s.converge.mollify_sections)
        .map(|_| random_section(g, s.battery.max_terms, &mut rng))
        .collect::<dirac_algebroid::Result<Vec<_>>>()?;
    let battery = Battery::random(g, s.converge.mollify_functions, s.converge.mollify_points, &mut rng);
    Ok((sections, battery))
}

/// `parameter,error,bound,satisfied`, one line per row; an absent bound is
/// an empty field.
pub fn sweep_csv(report: &ConvergenceReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["parameter", "error", "bound", "satisfied"])?;
    for row in &report.rows {
        w.write_record([
            row.parameter.to_string(),
            row.error.to_string(),
            row.bound.map(|b| b.to_string()).unwrap_or_default(),
            row.satisfied.to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReconstructReport {
    pub schema: u32,
    pub command: &'static str,
    #[serde(flatten)]
    pub report: RoundTripReport,
}

pub fn reconstruct(s: &Scenario) -> Result<ReconstructReport> {
    let g = s.groupoid()?;
    let cfg = RoundTripConfig {
        samples: s.samples,
        r_norm: s.r_norm,
        tol: s.tolerances.tol_axiom,
    };
    Ok(ReconstructReport {
        schema: SCHEMA,
        command: "reconstruct",
        report: reconstruct_round_trip(&g, s.seed, &cfg)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityReport {
    pub schema: u32,
    pub command: &'static str,
    #[serde(flatten)]
    pub report: DualReport,
}

pub fn dual(s: &Scenario) -> Result<DualityReport> {
    let g = s.groupoid()?;
    let cfg = DualConfig {
        pairs: s.dual.pairs,
        candidates: s.dual.candidates,
        min_gap: s.dual.min_gap,
        instances: s.instances,
        r_norm: s.r_norm,
        tol: s.tolerances.tol_axiom,
    };
    Ok(DualityReport {
        schema: SCHEMA,
        command: "dual",
        report: check_duality(&g, s.seed, &cfg)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ListReport {
    pub schema: u32,
    pub command: &'static str,
    pub groupoids: Vec<CatalogEntry>,
}

pub fn list() -> ListReport {
    ListReport {
        schema: SCHEMA,
        command: "list",
        groupoids: catalog::entries(),
    }
}
