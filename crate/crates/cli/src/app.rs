//! Subcommands. Each returns the text for stdout; the binary maps errors to
//! exit codes.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use epitoy::catalog;
use epitoy::entanglement::{self, EntanglementClass};
use epitoy::grid::render_grid;
use epitoy::measurement::{Measurement, Outcome};
use epitoy::mixture::{self, StateFamily};
use epitoy::oracle;
use epitoy::transform::{self, SymplecticMap};
use epitoy::{Bipartition, EpistemicState, Error, ModMatrix, ModVector, Modulus, PhaseSpace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::state_file::{Formalism, StateError, StateFile};

#[derive(Debug, Parser)]
#[command(name = "epitoy", version, about = "Exact simulator for Spekkens' toy theory over Z_d^{2n}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a state file describes a valid epistemic state.
    Validate { file: PathBuf },
    /// Draw the support as a text grid (d in {2, 3}, n <= 2).
    Render { file: PathBuf },
    /// List outcome probabilities, or update on a given or sampled outcome.
    Measure {
        file: PathBuf,
        /// Measured observable, comma-separated; repeat for several.
        #[arg(long = "observable", required = true)]
        observables: Vec<VectorArg>,
        /// Any vector of the outcome's valuation class.
        #[arg(long, conflicts_with = "sample")]
        outcome: Option<VectorArg>,
        #[arg(long)]
        sample: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Apply a reversible symplectic-affine map.
    Transform {
        file: PathBuf,
        #[arg(long, value_enum)]
        gate: Gate,
        /// System for single-system gates (0-based).
        #[arg(long)]
        system: Option<usize>,
        #[arg(long)]
        control: Option<usize>,
        #[arg(long)]
        target: Option<usize>,
        /// Rows separated by ';', entries by ','.
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long)]
        shift: Option<VectorArg>,
    },
    /// Equal-weight mixture of states sharing one known space.
    Mix {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Superpose a family: without --observable, list the usable observables.
    Superpose {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        observable: Option<VectorArg>,
        /// Index of the member whose valuation fixes the phase.
        #[arg(long, requires = "observable")]
        phase: Option<usize>,
    },
    /// Product / correlated / entangled classification.
    Entangle {
        file: PathBuf,
        /// Systems on side A (0-based, comma-separated); all splits if omitted.
        #[arg(long, value_delimiter = ',')]
        side_a: Option<Vec<usize>>,
    },
    /// Rewrite a state file in another formalism.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Formalism,
    },
    /// Count (and optionally list or classify) every valid state.
    Enumerate {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        classify: bool,
    },
    /// Run the verification battery.
    Oracle {
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        d: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report zero for every wall-clock field so output is byte-reproducible.
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Gate {
    Cnot,
    Fourier,
    Shear,
    Swap,
    Displace,
    Matrix,
}

/// What the binary prints and the exit status it returns.
#[derive(Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, code: 0 }
    }

    fn json(value: &impl Serialize) -> Self {
        Self::ok(serde_json::to_string(value).expect("serializable") + "\n")
    }
}

/// A comma-separated integer vector such as `1,0,-1,0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorArg(pub Vec<i64>);

impl FromStr for VectorArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_vector(s).map(VectorArg)
    }
}

fn parse_vector(s: &str) -> Result<Vec<i64>, String> {
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|e| format!("'{x}': {e}"))).collect()
}

fn read_state(path: &PathBuf) -> Result<EpistemicState, Error> {
    StateFile::read(path)?.to_state().map_err(|e| match e {
        StateError::Invalid(reason) => Error::InvalidState(reason),
        StateError::Domain(e) => e,
    })
}

fn state_json(s: &EpistemicState) -> Value {
    serde_json::to_value(StateFile::general(s)).expect("serializable")
}

fn outcome_json(o: &Outcome) -> Value {
    json!({ "valuation": o.valuation.to_vec(), "probability": o.probability.to_string() })
}

fn need(flag: &str, value: Option<usize>) -> Result<usize, Error> {
    value.ok_or_else(|| Error::Parse(format!("--{flag} is required for this gate")))
}

fn build_map(space: PhaseSpace, cmd: &Command) -> Result<SymplecticMap, Error> {
    let Command::Transform { gate, system, control, target, matrix, shift, .. } = cmd else {
        unreachable!("called for transform only")
    };
    let d = space.modulus();
    let shift_vec = match shift {
        Some(VectorArg(v)) if v.len() != space.dim() => return Err(Error::DimensionMismatch { expected: space.dim(), found: v.len() }),
        Some(VectorArg(v)) => ModVector::from_signed(v, d),
        None => ModVector::zeros(space.dim()),
    };
    let linear = match gate {
        Gate::Cnot => transform::toy_cnot(need("control", *control)?, need("target", *target)?, space)?,
        Gate::Fourier => transform::local_fourier(need("system", *system)?, space)?,
        Gate::Shear => transform::local_shear(need("system", *system)?, space)?,
        Gate::Swap => transform::system_swap(need("control", *control)?, need("target", *target)?, space)?,
        Gate::Displace => SymplecticMap::identity(space),
        Gate::Matrix => {
            let text = matrix.as_deref().ok_or_else(|| Error::Parse("--matrix is required for this gate".into()))?;
            let rows = text
                .split(';')
                .map(|r| parse_vector(r).map(|v| ModVector::from_signed(&v, d)).map_err(Error::Parse))
                .collect::<Result<Vec<_>, _>>()?;
            if rows.len() != space.dim() || rows.iter().any(|r| r.len() != space.dim()) {
                return Err(Error::DimensionMismatch { expected: space.dim(), found: rows.len() });
            }
            SymplecticMap::new(space, ModMatrix::from_rows(rows, space.dim())?, ModVector::zeros(space.dim()))?
        }
    };
    SymplecticMap::displacement(space, &shift_vec)?.compose(&linear)
}

fn class_json(class: &EntanglementClass, bp: &Bipartition) -> Value {
    let mut out = json!({ "side_a": bp.side_a(), "side_b": bp.side_b(), "class": class.name() });
    if let EntanglementClass::CorrelatedSeparable(fam) = class {
        out["witness"] = fam.members().iter().map(state_json).collect();
    }
    out
}

pub fn run(cli: Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::Validate { file } => {
            let parsed = StateFile::read(file)?;
            Ok(Output::json(&match parsed.to_state() {
                Ok(s) => json!({ "valid": true, "pure": s.is_pure(), "support_size": s.support_size()? as u64 }),
                Err(StateError::Invalid(reason)) => json!({ "valid": false, "reason": reason }),
                Err(StateError::Domain(e)) => json!({ "valid": false, "reason": e.to_string() }),
            }))
        }
        Command::Render { file } => Ok(Output::ok(render_grid(&read_state(file)?)?)),
        Command::Measure { file, observables, outcome, sample, seed } => {
            let s = read_state(file)?;
            let space = s.space();
            let mut gens = Vec::with_capacity(observables.len());
            for VectorArg(f) in observables {
                if f.len() != space.dim() {
                    return Err(Error::DimensionMismatch { expected: space.dim(), found: f.len() });
                }
                gens.push(ModVector::from_signed(f, space.modulus()));
            }
            let m = Measurement::new(space, &gens)?;
            if let Some(VectorArg(v)) = outcome {
                let v = ModVector::from_signed(v, space.modulus());
                let probability = m.probability(&v, &s)?;
                let post = m.update(&v, &s)?;
                Ok(Output::json(&json!({ "probability": probability.to_string(), "state": state_json(&post) })))
            } else if *sample {
                let (o, post) = m.sample(&s, &mut ChaCha8Rng::seed_from_u64(*seed))?;
                Ok(Output::json(&json!({ "outcome": outcome_json(&o), "state": state_json(&post) })))
            } else {
                let outs: Vec<Value> = m.outcomes(&s)?.iter().map(outcome_json).collect();
                Ok(Output::json(&json!({ "outcomes": outs })))
            }
        }
        Command::Transform { file, .. } => {
            let s = read_state(file)?;
            let t = build_map(s.space(), &cli.command)?;
            Ok(Output::json(&state_json(&t.apply(&s)?)))
        }
        Command::Mix { files } => {
            let states = files.iter().map(read_state).collect::<Result<Vec<_>, _>>()?;
            Ok(Output::json(&state_json(&mixture::mix(&StateFamily::from_states(&states)?)?)))
        }
        Command::Superpose { files, observable, phase } => {
            let states = files.iter().map(read_state).collect::<Result<Vec<_>, _>>()?;
            let fam = StateFamily::from_states(&states)?;
            let Some(VectorArg(f)) = observable else {
                let choices: Vec<Vec<u64>> =
                    mixture::enumerate_superposition_choices(&fam)?.into_iter().map(ModVector::into_inner).collect();
                return Ok(Output::json(&json!({ "choices": choices })));
            };
            let f = ModVector::from_signed(f, fam.space().modulus());
            match phase {
                Some(k) => Ok(Output::json(&state_json(&mixture::superpose(&fam, &f, *k)?))),
                None => {
                    let phases: Vec<Value> = mixture::superposition_phases(&fam, &f)?.iter().map(state_json).collect();
                    Ok(Output::json(&json!({ "phases": phases })))
                }
            }
        }
        Command::Entangle { file, side_a } => {
            let s = read_state(file)?;
            let splits = match side_a {
                Some(a) => vec![Bipartition::new(s.space().n(), a)?],
                None => Bipartition::all(s.space().n()),
            };
            let results = splits
                .iter()
                .map(|bp| entanglement::classify(&s, bp).map(|c| class_json(&c, bp)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Output::json(&json!({ "bipartitions": results })))
        }
        Command::Convert { file, to } => Ok(Output::json(&StateFile::in_formalism(&read_state(file)?, *to)?)),
        Command::Enumerate { d, n, list, classify } => {
            let space = PhaseSpace::new(*n, Modulus::new(*d)?)?;
            let states = catalog::enumerate_states(space)?;
            let mut out = serde_json::to_value(catalog::summarize(&states)).expect("serializable");
            if *classify {
                let mut by_split = BTreeMap::new();
                for bp in Bipartition::all(*n) {
                    let mut counts: BTreeMap<&str, usize> =
                        ["product", "correlated", "entangled"].into_iter().map(|k| (k, 0)).collect();
                    for s in &states {
                        *counts.entry(entanglement::classify(s, &bp)?.name()).or_default() += 1;
                    }
                    let key = format!("{:?}|{:?}", bp.side_a(), bp.side_b());
                    by_split.insert(key, counts);
                }
                out["entanglement"] = serde_json::to_value(by_split).expect("serializable");
            }
            if *list {
                out["states"] = states.iter().map(state_json).collect();
            }
            Ok(Output::json(&out))
        }
        Command::Oracle { d, n, seed, no_timing } => {
            let mut report = oracle::run_oracle(d, n, *seed);
            if *no_timing {
                report.checks.iter_mut().for_each(|c| c.millis = 0);
            }
            let code = if report.all_passed() { 0 } else { 1 };
            Ok(Output { stdout: serde_json::to_string_pretty(&report).expect("serializable") + "\n", code })
        }
    }
}

/// The structured error object written to stderr.
pub fn error_json(name: &str, message: &str) -> String {
    json!({ "error": name, "message": message }).to_string()
}
