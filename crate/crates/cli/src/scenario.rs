use std::path::{Path, PathBuf};
use std::sync::Arc;

use dirac_algebroid::groupoid::{catalog, ActionGroupoid};
use serde::{Deserialize, Serialize};

/// A scenario that cannot be run as written.
#[derive(Debug, thiserror::Error)]
#[error("invalid scenario: {0}")]
pub struct InvalidScenario(pub String);

fn invalid(msg: impl Into<String>) -> InvalidScenario {
    InvalidScenario(msg.into())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidRef {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative tolerance for algebraic laws, duality and germ comparisons.
    pub tol_axiom: f64,
    /// Symbolic derivative against a central difference.
    pub tol_fd: f64,
    /// Group and action axioms of the catalog entry.
    pub eps_grp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_axiom: 1e-9,
            tol_fd: 1e-5,
            eps_grp: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BatterySizes {
    pub pairs: usize,
    pub points: usize,
    /// Largest number of generators in a random section.
    pub max_terms: usize,
}

impl Default for BatterySizes {
    fn default() -> Self {
        Self {
            pairs: 32,
            points: 16,
            max_terms: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    /// Comb resolutions.
    pub n: Vec<usize>,
    /// Stencil steps.
    pub t: Vec<f64>,
    /// Mollifier scales.
    pub mollify_t: Vec<f64>,
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            n: vec![4, 8, 16, 32, 64],
            t: vec![0.1, 0.05, 0.025],
            mollify_t: vec![0.1, 0.01],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergeOptions {
    pub comb_dims: Vec<usize>,
    pub comb_sides: Vec<f64>,
    pub mollify_sections: usize,
    pub mollify_functions: usize,
    pub mollify_points: usize,
}

impl Default for ConvergeOptions {
    fn default() -> Self {
        Self {
            comb_dims: vec![1, 2],
            comb_sides: vec![1.0, 2.0],
            mollify_sections: 20,
            mollify_functions: 10,
            mollify_points: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DualOptions {
    pub pairs: usize,
    pub candidates: usize,
    pub min_gap: f64,
}

impl Default for DualOptions {
    fn default() -> Self {
        Self {
            pairs: 10,
            candidates: 64,
            min_gap: 1e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub groupoid: GroupoidRef,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub battery: BatterySizes,
    /// Random instances per law.
    #[serde(default = "default_instances")]
    pub instances: usize,
    /// Random tuples for the pointwise convolution oracle.
    #[serde(default = "default_oracle_samples")]
    pub oracle_samples: usize,
    /// Arrows sampled by the reconstruction round trip.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Normalization radius of arrow witnesses.
    #[serde(default = "default_r_norm")]
    pub r_norm: f64,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub converge: ConvergeOptions,
    #[serde(default)]
    pub dual: DualOptions,
    /// Report directory; not part of the reports themselves.
    #[serde(default, skip_serializing)]
    pub output: Option<PathBuf>,
}

fn default_seed() -> u64 {
    42
}

fn default_instances() -> usize {
    100
}

fn default_oracle_samples() -> usize {
    200
}

fn default_samples() -> usize {
    1000
}

fn default_r_norm() -> f64 {
    0.2
}

impl Scenario {
    /// Defaults throughout, on the named catalog entry.
    pub fn for_groupoid(name: &str, dim: Option<usize>) -> Self {
        Self {
            groupoid: GroupoidRef {
                name: name.to_string(),
                dim,
            },
            seed: default_seed(),
            tolerances: Tolerances::default(),
            battery: BatterySizes::default(),
            instances: default_instances(),
            oracle_samples: default_oracle_samples(),
            samples: default_samples(),
            r_norm: default_r_norm(),
            grids: Grids::default(),
            converge: ConvergeOptions::default(),
            dual: DualOptions::default(),
            output: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, InvalidScenario> {
        let s: Self = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, InvalidScenario> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), InvalidScenario> {
        let t = &self.tolerances;
        for (name, v) in [("tol_axiom", t.tol_axiom), ("tol_fd", t.tol_fd), ("eps_grp", t.eps_grp)] {
            positive(name, v)?;
        }
        positive("r_norm", self.r_norm)?;
        positive("dual.min_gap", self.dual.min_gap)?;
        for (name, v) in [
            ("battery.pairs", self.battery.pairs),
            ("battery.points", self.battery.points),
            ("battery.max_terms", self.battery.max_terms),
            ("instances", self.instances),
            ("oracle_samples", self.oracle_samples),
            ("samples", self.samples),
            ("converge.mollify_sections", self.converge.mollify_sections),
            ("converge.mollify_functions", self.converge.mollify_functions),
            ("converge.mollify_points", self.converge.mollify_points),
            ("dual.pairs", self.dual.pairs),
            ("dual.candidates", self.dual.candidates),
        ] {
            if v == 0 {
                return Err(invalid(format!("{name} must be at least 1")));
            }
        }
        nonempty("grids.n", &self.grids.n)?;
        nonempty("grids.t", &self.grids.t)?;
        nonempty("grids.mollify_t", &self.grids.mollify_t)?;
        nonempty("converge.comb_dims", &self.converge.comb_dims)?;
        nonempty("converge.comb_sides", &self.converge.comb_sides)?;
        if self.grids.n.contains(&0) {
            return Err(invalid("grids.n entries must be at least 1"));
        }
        if self.converge.comb_dims.contains(&0) {
            return Err(invalid("converge.comb_dims entries must be at least 1"));
        }
        for &v in self
            .grids
            .t
            .iter()
            .chain(&self.grids.mollify_t)
            .chain(&self.converge.comb_sides)
        {
            positive("grid value", v)?;
        }
        self.groupoid()?;
        Ok(())
    }

    pub fn groupoid(&self) -> Result<Arc<ActionGroupoid>, InvalidScenario> {
        catalog::by_name(&self.groupoid.name, self.groupoid.dim)
            .map(Arc::new)
            .map_err(|e| invalid(e.to_string()))
    }
}

fn positive(name: &str, v: f64) -> Result<(), InvalidScenario> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

fn nonempty<T>(name: &str, v: &[T]) -> Result<(), InvalidScenario> {
    if v.is_empty() {
        Err(invalid(format!("{name} is empty")))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scenario_takes_defaults() {
        let s = Scenario::from_json(r#"{"groupoid": {"name": "translation"}}"#).unwrap();
        assert_eq!(s, Scenario::for_groupoid("translation", None));
    }

    #[test]
    fn rejects_bad_values() {
        let cases = [
            r#"{"groupoid": {"name": "nope"}}"#,
            r#"{"groupoid": {"name": "translation"}, "grids": {"n": []}}"#,
            r#"{"groupoid": {"name": "translation"}, "tolerances": {"tol_axiom": 0}}"#,
            r#"{"groupoid": {"name": "translation"}, "tolerances": {"eps_grp": -1e-9}}"#,
            r#"{"groupoid": {"name": "translation"}, "grids": {"t": [0.1, 0.0]}}"#,
            r#"{"groupoid": {"name": "translation"}, "samples": 0}"#,
            r#"{"groupoid": {"name": "translation"}, "typo": 1}"#,
            r#"{"groupoid": {"name": "so2-plane", "dim": 3}}"#,
            "not json",
        ];
        for c in cases {
            assert!(Scenario::from_json(c).is_err(), "{c}");
        }
    }
}
