//! Command-line arguments, which double as the declarative run document.
//!
//! Every subcommand's argument struct is also a serde type, so a parsed
//! command line and a `run CONFIG.json` document produce the same
//! [`RunConfig`]. Optional parameters stay `None` until a command resolves
//! its default, which keeps the serialized form identical to the input.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "spanhyper", version, about = "Spanning structures in random uniform hypergraphs")]
pub struct Cli {
    /// Seed for every random choice of the run.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to the available cores. Never changes output.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Primary output file, written atomically.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Invocation,
}

#[derive(Subcommand, Debug)]
pub enum Invocation {
    #[command(flatten)]
    Command(Command),
    /// Run a JSON config document.
    Run {
        config: PathBuf,
    },
}

/// A complete, reproducible description of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub json: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub command: Command,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Generate a hypergraph and write it as `.hg`.
    Gen(GenArgs),
    /// Exact density parameter gamma.
    Gamma(GammaArgs),
    /// Second-moment ratio in H(n, m).
    Fratio(FratioArgs),
    /// Plug-in check of the containment theorem's hypotheses.
    Conditions(ConditionsArgs),
    /// Decide whether a pattern embeds into a host.
    Contain(ContainArgs),
    /// Monte Carlo containment curve over a p-grid.
    Threshold(ThresholdArgs),
    /// Staged Hall-matching embedding.
    Embed(EmbedArgs),
    /// Check the goodness properties of a host partition.
    Goodness(GoodnessArgs),
    /// Build H_r(G) or K_r(G) from a graph.
    Construct(ConstructArgs),
    /// Hitting graph and sigma(F).
    Sigma(SigmaArgs),
    /// Sampled universality check.
    VerifyUniversal(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenType {
    Gnp,
    Gnm,
    Hamilton,
    Cube,
    Lattice,
    Sphere,
    Power,
    Kfactor,
    Bounded,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenArgs {
    #[arg(long = "type", value_enum)]
    #[serde(rename = "type")]
    pub kind: GenType,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Proposal budget of the bounded-degree sampler (default 50 n delta).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proposals: Option<u64>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaArgs {
    pub file: PathBuf,
    /// Also print the e_H(v) table.
    #[arg(long)]
    #[serde(default)]
    pub table: bool,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FratioArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: u64,
    /// Compare with P(X = 0) from full host enumeration.
    #[arg(long)]
    #[serde(default)]
    pub chebyshev: bool,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionsArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub p: f64,
    /// Use this gamma instead of computing it, e.g. `6/7`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContainArgs {
    pub host: PathBuf,
    pub pattern: PathBuf,
    /// Require the copy to cover every host vertex.
    #[arg(long)]
    #[serde(default)]
    pub spanning: bool,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdArgs {
    /// tight-hamilton, loose-hamilton, perfect-matching, hamilton:L, power:I,
    /// kfactor:T or complete.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub pmin: f64,
    #[arg(long)]
    pub pmax: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub trials: u64,
    /// Draw independent hosts per grid point instead of nested ones.
    #[arg(long)]
    #[serde(default)]
    pub uncoupled: bool,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbedArgs {
    pub host: PathBuf,
    pub pattern: PathBuf,
    #[arg(long)]
    pub delta: usize,
    /// Number of classes; r^3 delta^3 when absent.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    /// Fraction of vertices in X_t (default 1/30).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attempts: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// Write the per-stage trace as JSON.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Sampled,
    Exhaustive,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoodnessArgs {
    pub host: PathBuf,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub delta: usize,
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Host partition classes (default 8).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    /// Host partition fraction (default 1/30).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Hr,
    Kr,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    /// Graph in `.hg` format with r = 2.
    pub graph: PathBuf,
    #[arg(long)]
    pub r: usize,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaArgs {
    pub file: PathBuf,
    /// Decide sigma exactly by backtracking.
    #[arg(long)]
    #[serde(default)]
    pub exact: bool,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    pub host: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub delta: usize,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

impl RunConfig {
    pub fn from_cli(seed: Option<u64>, json: bool, out: Option<PathBuf>, command: Command) -> Self {
        RunConfig { seed: seed.unwrap_or(0), json, out, command }
    }

    /// Reads a config document; schema errors carry the field path.
    pub fn from_json(text: &str) -> Result<Self, String> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            format!("config field `{path}`: {}", e.inner())
        })
    }
}
