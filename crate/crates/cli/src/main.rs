//! `medial`: command-line front end for decorated planar graphs, state lattices and state modules.

mod check_all;
mod input;
mod verbs;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use medial_lattice::Error;
use serde_json::json;

use input::{Inputs, StateSelector};
use verbs::Outcome;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Certification(String),
}

impl CliError {
    /// Certification failures and counterexamples exit with 1, everything else with 2.
    pub fn from_core(e: Error, path: Option<&Path>) -> Self {
        let msg = match path {
            Some(p) => format!("{}: {e}", p.display()),
            None => e.to_string(),
        };
        match e {
            Error::CertificationFailed(_)
            | Error::NotPrime(..)
            | Error::CyclicCovers
            | Error::JordanPremiseFailed(_) => CliError::Certification(msg),
            _ => CliError::Input(msg),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Certification(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Parser)]
#[command(
    name = "medial",
    version,
    about = "State lattices and state modules of decorated planar graphs"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Output format: structured dump or graph description.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest lattice checked exhaustively for distributivity; larger ones are sampled.
    #[arg(long, global = true, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    bound_lattice: u64,
    /// Largest candidate space for subrepresentation enumeration.
    #[arg(long, global = true, default_value_t = 1 << 20, value_parser = clap::value_parser!(u64).range(1..))]
    bound_candidates: u64,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MapArgs {
    /// Map file.
    map: PathBuf,
}

#[derive(Args)]
struct WeightedArgs {
    /// Map file.
    map: PathBuf,
    /// Weight file; defaults to the Kauffman weight of the marked edge.
    #[arg(long)]
    weight: Option<PathBuf>,
}

#[derive(Args)]
struct StateArgs {
    #[command(flatten)]
    input: WeightedArgs,
    /// `max` for the top state over the first compatible function, or a compatible-function index.
    #[arg(long, default_value = "max")]
    state: StateSelector,
}

#[derive(Subcommand)]
enum Verb {
    /// Faces, angles and the medial quiver.
    Medial(MapArgs),
    /// Compatible angular functions.
    States(WeightedArgs),
    /// Counterclockwise move graph on compatible functions.
    MoveGraph(WeightedArgs),
    /// Invisible part and the graph of invisible cycles.
    Invisible(WeightedArgs),
    /// Minimum pairing over directed cycles.
    Nilpotency(WeightedArgs),
    /// Lattice of BMS states over the component of a state.
    BmsLattice(StateArgs),
    /// Per-component comparison of move graphs and BMS lattices.
    Component(WeightedArgs),
    /// BMS states below a state.
    Subobjects(StateArgs),
    /// Clock lattice of Kauffman states.
    Clock(MapArgs),
    /// Two-edge-cut primality test.
    PrimeCheck(MapArgs),
    /// Kauffman states by both enumeration routes.
    KauffmanStates(MapArgs),
    /// State module and potentials.
    Module(StateArgs),
    /// Cyclic-derivative residuals on a state module.
    JacobianCheck {
        #[command(flatten)]
        state: StateArgs,
        /// Add the phantom terms of zero-weight vertices and faces.
        #[arg(long)]
        phantom: bool,
    },
    /// Endomorphism ring, indecomposability and simple quotients.
    Endo(StateArgs),
    /// Lattice of subrepresentations of a state module.
    Subreps(StateArgs),
    /// Isomorphism between BMS states below a state and subrepresentations.
    VerifyIso(StateArgs),
    /// Every check over a corpus directory, or the built-in corpus.
    CheckAll {
        /// Directory of map files; `x.weight.yaml` decorates `x.yaml`.
        dir: Option<PathBuf>,
    },
}

pub struct Settings {
    pub bound_lattice: usize,
    pub bound_candidates: u128,
    pub seed: u64,
}

fn verb_name(v: &Verb) -> &'static str {
    match v {
        Verb::Medial(_) => "medial",
        Verb::States(_) => "states",
        Verb::MoveGraph(_) => "move-graph",
        Verb::Invisible(_) => "invisible",
        Verb::Nilpotency(_) => "nilpotency",
        Verb::BmsLattice(_) => "bms-lattice",
        Verb::Component(_) => "component",
        Verb::Subobjects(_) => "subobjects",
        Verb::Clock(_) => "clock",
        Verb::PrimeCheck(_) => "prime-check",
        Verb::KauffmanStates(_) => "kauffman-states",
        Verb::Module(_) => "module",
        Verb::JacobianCheck { .. } => "jacobian-check",
        Verb::Endo(_) => "endo",
        Verb::Subreps(_) => "subreps",
        Verb::VerifyIso(_) => "verify-iso",
        Verb::CheckAll { .. } => "check-all",
    }
}

fn dispatch(verb: &Verb, s: &Settings, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let decorated = |inputs: &mut Inputs, a: &WeightedArgs| {
        input::load_decorated(inputs, &a.map, a.weight.as_ref())
    };
    let with_state = |inputs: &mut Inputs, a: &StateArgs| {
        let dg = decorated(inputs, &a.input)?;
        let xi = input::select_state(&dg, a.state, s.bound_lattice, s.seed)?;
        Ok::<_, CliError>((dg, xi))
    };
    match verb {
        Verb::Medial(a) => Ok(verbs::medial(&input::load_map(inputs, &a.map)?.map)),
        Verb::States(a) => Ok(verbs::states(&decorated(inputs, a)?)),
        Verb::MoveGraph(a) => Ok(verbs::move_graph(&decorated(inputs, a)?)),
        Verb::Invisible(a) => verbs::invisible(&decorated(inputs, a)?),
        Verb::Nilpotency(a) => verbs::nilpotency(&decorated(inputs, a)?),
        Verb::BmsLattice(a) => {
            let (dg, xi) = with_state(inputs, a)?;
            verbs::bms_lattice(&dg, &xi, s)
        }
        Verb::Component(a) => verbs::component(&decorated(inputs, a)?, s),
        Verb::Subobjects(a) => {
            let (dg, xi) = with_state(inputs, a)?;
            verbs::subobjects(&dg, &xi, s)
        }
        Verb::Clock(a) => verbs::clock(&input::load_diagram(inputs, &a.map)?, s),
        Verb::PrimeCheck(a) => Ok(verbs::prime_check(&input::load_map(inputs, &a.map)?.map)),
        Verb::KauffmanStates(a) => Ok(verbs::kauffman_states(&input::load_diagram(
            inputs, &a.map,
        )?)),
        Verb::Module(a) => {
            let (dg, xi) = with_state(inputs, a)?;
            verbs::module(&dg, &xi)
        }
        Verb::JacobianCheck { state, phantom } => {
            let (dg, xi) = with_state(inputs, state)?;
            verbs::jacobian_check(&dg, &xi, *phantom)
        }
        Verb::Endo(a) => {
            let (dg, xi) = with_state(inputs, a)?;
            Ok(verbs::endo(&dg, &xi))
        }
        Verb::Subreps(a) => {
            let (dg, xi) = with_state(inputs, a)?;
            verbs::subreps(&dg, &xi, s)
        }
        Verb::VerifyIso(a) => {
            let (dg, xi) = with_state(inputs, a)?;
            verbs::verify_iso(&dg, &xi, s)
        }
        Verb::CheckAll { dir } => check_all::run(dir.as_deref(), s, inputs),
    }
}

fn render(cli: &Cli, s: &Settings, digest: &str, outcome: &Outcome) -> Result<String, CliError> {
    let verb = verb_name(&cli.verb);
    match cli.format {
        Format::Json => {
            let report = json!({
                "tool": "medial",
                "version": env!("CARGO_PKG_VERSION"),
                "verb": verb,
                "input_sha256": digest,
                "seed": s.seed,
                "bound_lattice": s.bound_lattice,
                "bound_candidates": s.bound_candidates.to_string(),
                "passed": outcome.passed,
                "result": outcome.result,
            });
            let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
            text.push('\n');
            Ok(text)
        }
        Format::Dot => {
            let dot = outcome.dot.as_ref().ok_or_else(|| {
                CliError::Input(format!("`{verb}` has no graph output; use --format json"))
            })?;
            Ok(format!(
                "// medial {verb}; input_sha256 {digest}; seed {}\n{dot}",
                s.seed
            ))
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let settings = Settings {
        bound_lattice: cli.bound_lattice as usize,
        bound_candidates: cli.bound_candidates as u128,
        seed: cli.seed,
    };
    let mut inputs = Inputs::default();
    let outcome = dispatch(&cli.verb, &settings, &mut inputs)?;
    let text = render(cli, &settings, &inputs.digest(), &outcome)?;
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("medial: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
