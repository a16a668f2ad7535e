//! Subcommands. Each one is lowered to a one-step scenario, so the command
//! line and scenario files share a single execution path.

use std::path::PathBuf;

use ciwb_core::k0_models::ModelFile;
use clap::{Args, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::scenario::{Scenario, Step, SCENARIO_VERSION};

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run scenario files (TOML or JSON).
    Run {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Gröbner bases, membership and colength.
    #[command(subcommand)]
    Groebner(Groebner),
    /// B(J) construction, recognition and regular sequences.
    #[command(subcommand)]
    Ideal(IdealCmd),
    /// Run a maximal-ideal avoidance fixture.
    Avoid {
        /// Fixture name; see `docs/scenarios.md`.
        fixture: String,
    },
    /// Factorial row completion.
    #[command(subcommand)]
    Suslin(Suslin),
    /// Projective modules by patching.
    #[command(subcommand)]
    Patch(Patch),
    /// K0 models and gamma filtrations.
    #[command(subcommand)]
    K0(K0),
}

#[derive(Args, Debug)]
pub struct RingArgs {
    /// `Q[x,y,z]` (optionally `:lex` or `:elim:k`) or a builtin ring name.
    #[arg(long, default_value = "Q[x,y,z]")]
    ring: String,
    /// Extra defining relations, comma separated.
    #[arg(long, value_delimiter = ',')]
    relations: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Groebner {
    /// Reduced Gröbner basis of the ideal generated by GENS.
    Basis {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(required = true, allow_hyphen_values = true)]
        gens: Vec<String>,
    },
    /// Decide POLY ∈ (GENS).
    Member {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(required = true, allow_hyphen_values = true)]
        gens: Vec<String>,
    },
    /// dim_Q of the quotient by (GENS), or `infinite`.
    Colength {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(required = true, allow_hyphen_values = true)]
        gens: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum IdealCmd {
    /// B(J) = (f_1, …, f_{r-1}) + J^{(r-1)!} for J = (GENS), f_i = GENS.
    Bj {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(required = true, allow_hyphen_values = true)]
        gens: Vec<String>,
    },
    /// Decide whether (GENS) equals B(J0) for the pattern f's.
    Recognize {
        #[command(flatten)]
        ring: RingArgs,
        /// The f_1, …, f_r, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        pattern: Vec<String>,
        #[arg(required = true, allow_hyphen_values = true)]
        gens: Vec<String>,
    },
    /// Decide whether POLYS is a regular sequence.
    Regular {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(required = true, allow_hyphen_values = true)]
        polys: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Suslin {
    /// Complete a unimodular row of factorial powers.
    Complete {
        /// Universal row of length R over the builtin ring.
        #[arg(long, conflicts_with_all = ["row", "cofactors", "w"])]
        r: Option<usize>,
        #[command(flatten)]
        ring: RingArgs,
        /// The row entries a_i (comma separated).
        #[arg(long, value_delimiter = ',', requires_all = ["cofactors", "w"])]
        row: Vec<String>,
        /// The b_i with Σ a_i b_i = w.
        #[arg(long, value_delimiter = ',')]
        cofactors: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Patch {
    /// Patch over the universal A_n.
    Universal {
        #[arg(long)]
        n: usize,
        /// Also report sampled ranks at this many points.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Patch the identity gluing of rank R.
    Trivial {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Builtin model: A<n>, B<n> or sphere3.
    #[arg(long, conflicts_with = "model_file")]
    model: Option<String>,
    /// Model file in TOML or JSON.
    #[arg(long)]
    model_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum K0 {
    /// The gamma filtration and its graded pieces.
    Filtration {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// The i-th Chern class γ-representative of CLASS.
    Chern {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[arg(long)]
        degree: usize,
    },
    /// The divisibility witness for Q - Q0.
    Witness {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        q0: String,
    },
    /// Check the Whitney formula on random pairs.
    Whitney {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
    },
    /// The refusal report for the real 3-sphere.
    Sphere,
    /// Print a builtin model as an editable model file.
    Export {
        #[arg(long)]
        model: String,
        #[arg(long, value_enum, default_value_t = Format::Toml)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Toml,
    Json,
}

pub enum Action {
    Run(Vec<PathBuf>),
    Scenario(Box<Scenario>),
    Text(String),
}

fn single(ring: Option<&RingArgs>, op: &str, args: Value) -> Action {
    let args = match args {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    Action::Scenario(Box::new(Scenario {
        version: SCENARIO_VERSION,
        ring: ring.map(|r| r.ring.clone()),
        relations: ring.map(|r| r.relations.clone()).unwrap_or_default(),
        steps: vec![Step { name: None, op: op.into(), args, expect: None }],
        ..Scenario::default()
    }))
}

fn model_args(m: &ModelArgs, mut extra: Map<String, Value>) -> Result<Value, CliError> {
    match (&m.model, &m.model_file) {
        (Some(name), _) => {
            extra.insert("model".into(), json!(name));
        }
        (None, Some(path)) => {
            let abs = std::path::absolute(path)?;
            extra.insert("model_file".into(), json!(abs.to_string_lossy()));
        }
        (None, None) => return Err(CliError::Argument("pass --model or --model-file".into())),
    }
    Ok(Value::Object(extra))
}

pub fn lower(cmd: Command) -> Result<Action, CliError> {
    Ok(match cmd {
        Command::Run { files } => Action::Run(files),
        Command::Groebner(g) => match g {
            Groebner::Basis { ring, gens } => single(Some(&ring), "groebner.basis", json!({ "ideal": gens })),
            Groebner::Member { ring, poly, gens } => {
                single(Some(&ring), "groebner.member", json!({ "ideal": gens, "poly": poly }))
            }
            Groebner::Colength { ring, gens } => single(Some(&ring), "groebner.colength", json!({ "ideal": gens })),
        },
        Command::Ideal(i) => match i {
            IdealCmd::Bj { ring, gens } => single(Some(&ring), "ideal.bj", json!({ "ideal": gens })),
            IdealCmd::Recognize { ring, pattern, gens } => {
                single(Some(&ring), "ideal.recognize", json!({ "ideal": gens, "pattern": pattern }))
            }
            IdealCmd::Regular { ring, polys } => single(Some(&ring), "ideal.regular", json!({ "polys": polys })),
        },
        Command::Avoid { fixture } => single(None, "avoid.fixture", json!({ "fixture": fixture })),
        Command::Suslin(Suslin::Complete { r, ring, row, cofactors, w }) => match (r, w) {
            (Some(r), _) => single(None, "suslin.complete", json!({ "r": r })),
            (None, Some(w)) => {
                single(Some(&ring), "suslin.complete", json!({ "row": row, "cofactors": cofactors, "w": w }))
            }
            (None, None) => return Err(CliError::Argument("pass --r, or --row with --cofactors and --w".into())),
        },
        Command::Patch(Patch::Universal { n, points }) => match points {
            None => single(None, "patch.universal", json!({ "n": n })),
            Some(p) => {
                let Action::Scenario(mut sc) = single(None, "patch.universal", json!({ "n": n })) else {
                    unreachable!()
                };
                sc.steps[0].name = Some("module".into());
                sc.steps.push(Step {
                    name: None,
                    op: "patch.ranks".into(),
                    args: json!({ "module": "@module", "points": p }).as_object().cloned().unwrap_or_default(),
                    expect: None,
                });
                Action::Scenario(sc)
            }
        },
        Command::Patch(Patch::Trivial { ring, r }) => single(Some(&ring), "patch.trivial", json!({ "r": r })),
        Command::K0(k) => match k {
            K0::Filtration { model } => single(None, "k0.filtration", model_args(&model, Map::new())?),
            K0::Chern { model, class, degree } => {
                let extra = json!({ "class": class, "degree": degree });
                single(None, "k0.chern", model_args(&model, extra.as_object().cloned().unwrap_or_default())?)
            }
            K0::Witness { model, q, q0 } => {
                let extra = json!({ "q": q, "q0": q0 });
                single(None, "k0.witness", model_args(&model, extra.as_object().cloned().unwrap_or_default())?)
            }
            K0::Whitney { model, pairs } => {
                let extra = json!({ "pairs": pairs });
                single(None, "k0.whitney", model_args(&model, extra.as_object().cloned().unwrap_or_default())?)
            }
            K0::Sphere => single(None, "k0.sphere", json!({})),
            K0::Export { model, format } => {
                let file = ModelFile::builtin(&model)?;
                Action::Text(match format {
                    Format::Toml => file.to_toml()?,
                    Format::Json => file.to_json()? + "\n",
                })
            }
        },
    })
}
