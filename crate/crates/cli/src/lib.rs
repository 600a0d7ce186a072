//! Batch driver for the axiom suites, convergence sweeps, duality checks and
//! reconstruction round trips of `dirac-algebroid`.
//!
//! Every command produces a JSON report carrying `"schema": 1`. Reports
//! depend only on the scenario and the seed, never on the thread count.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

pub mod commands;
pub mod scenario;

pub use scenario::{InvalidScenario, Scenario};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Axioms,
    Converge,
    Reconstruct,
    Dual,
    List,
}

/// Exit status for a finished run: 0 when every check passed, 1 otherwise.
pub const EXIT_FAILED: i32 = 1;
/// Exit status for a scenario that could not be loaded or validated.
pub const EXIT_INVALID: i32 = 2;

/// Rendered output of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    /// File name of the JSON report.
    pub report_name: String,
    pub report: String,
    /// Additional `(file name, contents)` pairs, the sweep tables.
    pub tables: Vec<(String, String)>,
    pub pass: bool,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn run(command: Command, scenario: &Scenario) -> Result<Output> {
    let (name, report, tables, pass) = match command {
        Command::Axioms => {
            let r = commands::axioms(scenario)?;
            ("axioms", to_json(&r)?, vec![], r.pass)
        }
        Command::Converge => {
            let (r, sweeps) = commands::converge(scenario)?;
            let tables = sweeps
                .iter()
                .map(|s| Ok((s.summary.csv.clone(), commands::sweep_csv(&s.report)?)))
                .collect::<Result<Vec<_>>>()?;
            ("converge", to_json(&r)?, tables, r.pass)
        }
        Command::Reconstruct => {
            let r = commands::reconstruct(scenario)?;
            ("reconstruct", to_json(&r)?, vec![], r.report.pass)
        }
        Command::Dual => {
            let r = commands::dual(scenario)?;
            ("dual", to_json(&r)?, vec![], r.report.pass)
        }
        Command::List => ("list", to_json(&commands::list())?, vec![], true),
    };
    Ok(Output {
        report_name: format!("{name}.json"),
        report,
        tables,
        pass,
    })
}

/// Writes the report and tables into `dir`, creating it if needed.
pub fn write_output(output: &Output, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let files = std::iter::once((&output.report_name, &output.report)).chain(output.tables.iter().map(|(n, c)| (n, c)));
    for (name, contents) in files {
        let path = dir.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
