use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dirac_cli::{run, write_output, Command, InvalidScenario, Scenario, EXIT_FAILED, EXIT_INVALID};

#[derive(Parser)]
#[command(
    name = "dirac-algebroid",
    version,
    about = "Axiom suites, sweeps and reconstruction checks for Dirac bialgebroids of action groupoids"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// JSON scenario file; defaults to the translation groupoid with default settings.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for the report and sweep tables; without it the report goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; reports do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Hopf-algebroid laws, the convolution oracle and the groupoid axioms.
    Axioms,
    /// Comb, family-comb, stencil and mollifier sweeps.
    Converge,
    /// Germ round trips against the groupoid structure maps.
    Reconstruct,
    /// Separation and dual-algebra laws.
    Dual,
    /// Catalog of groupoids.
    List,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Axioms => Command::Axioms,
            Cmd::Converge => Command::Converge,
            Cmd::Reconstruct => Command::Reconstruct,
            Cmd::Dual => Command::Dual,
            Cmd::List => Command::List,
        }
    }
}

fn load(cli: &Cli) -> Result<Scenario, InvalidScenario> {
    let mut s = match &cli.scenario {
        Some(path) => Scenario::load(path)?,
        None => Scenario::for_groupoid("translation", None),
    };
    if let Some(seed) = cli.seed {
        s.seed = seed;
    }
    if cli.jobs == Some(0) {
        return Err(InvalidScenario("--jobs must be at least 1".into()));
    }
    Ok(s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let scenario = match load(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID as u8);
        }
    }
    let output = match run(cli.command.into(), &scenario) {
        Ok(o) => o,
        Err(e) => {
            // parameters the scenario validation cannot see, such as a comb
            // side too small for the density, surface here
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    let dir = cli.out.as_ref().or(scenario.output.as_ref());
    match dir {
        Some(dir) => {
            if let Err(e) = write_output(&output, dir) {
                eprintln!("error: {e:#}");
                return ExitCode::from(EXIT_FAILED as u8);
            }
            eprintln!("wrote {}", dir.join(&output.report_name).display());
        }
        None => print!("{}", output.report),
    }
    if output.pass {
        ExitCode::SUCCESS
    } else {
        eprintln!("one or more checks failed");
        ExitCode::from(EXIT_FAILED as u8)
    }
}
