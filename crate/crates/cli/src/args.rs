use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use schurdist::ensembles::EnsembleSpec;

#[derive(Debug, Parser)]
#[command(name = "schurdist", version, about = "Seeded experiments on Schur-transform entanglement distillation")]
pub struct Cli {
    /// Root seed; every random draw derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Size cap override, `dense=N`, `partitions=N` or `subsets=N`.
    #[arg(long = "cap", global = true, value_name = "KEY=VALUE")]
    pub caps: Vec<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LawMethod {
    Branching,
    Characters,
    JacobiTrudi,
    Bruteforce,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Outcome law, expected rate and tail probabilities per k.
    RateTable(RateTableArgs),
    /// The weak Schur sampling law of a spectrum.
    SchurLaw(SchurLawArgs),
    /// Block structure of ψ^{⊗k} in the Schur basis.
    VerifyIid(VerifyIidArgs),
    /// Per-label probability bounds, the tail bound and the guarantee.
    Bounds(BoundsArgs),
    /// Ebit-count dominance from k to k+1.
    Dominance(SpectrumK),
    /// Trace-norm distance between k-copy moments of two families.
    MomentDistance(MomentDistanceArgs),
    /// Empirical moment against the exact one along a sample ladder.
    Concentration(ConcentrationArgs),
    /// Closed-form entropies of the flag-qubit construction.
    PlantedEntropy(PlantedEntropyArgs),
    /// The two families behind the entropy-testing lower bound.
    EntropyTestInstance(EntropyTestArgs),
    /// Copy budget of two-party LOCC tomography.
    TomoPlan(TomoPlanArgs),
    /// Finite-constant distillation and dilution rate bounds.
    RateBounds(RateBoundsArgs),
    /// Seeded runs of the dense protocol simulator.
    RunProtocol(RunProtocolArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumK {
    /// Comma-separated probabilities summing to 1.
    #[arg(long, value_parser = parse_probabilities)]
    pub spectrum: Probabilities,
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct RateTableArgs {
    #[arg(long, value_parser = parse_probabilities)]
    pub spectrum: Probabilities,
    /// Comma-separated copy counts.
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<usize>,
    /// Ebit thresholds t for Pr(ebits ≥ t).
    #[arg(long, value_delimiter = ',')]
    pub thresholds: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SchurLawArgs {
    #[arg(long, value_parser = parse_probabilities)]
    pub spectrum: Probabilities,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = LawMethod::Branching)]
    pub method: LawMethod,
}

#[derive(Debug, Args)]
pub struct VerifyIidArgs {
    #[arg(long, default_value_t = 1)]
    pub n_a: usize,
    #[arg(long, default_value_t = 1)]
    pub n_b: usize,
    #[arg(long)]
    pub k: usize,
    /// Real amplitudes (normalized on read); Haar random when absent.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub amplitudes: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_parser = parse_probabilities)]
    pub spectrum: Probabilities,
    #[arg(long)]
    pub k: usize,
    /// Exponent constant of the tail event dim V ≤ k^{ck}.
    #[arg(long, default_value_t = 0.25)]
    pub c: f64,
}

#[derive(Debug, Args)]
pub struct MomentDistanceArgs {
    #[arg(long)]
    pub a: EnsembleSpec,
    #[arg(long)]
    pub b: EnsembleSpec,
    #[arg(long)]
    pub k: usize,
    /// Draws per empirical side.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct ConcentrationArgs {
    #[arg(long)]
    pub ensemble: EnsembleSpec,
    #[arg(long)]
    pub k: usize,
    /// Comma-separated sample counts.
    #[arg(long, value_delimiter = ',', default_value = "2000")]
    pub samples: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct PlantedEntropyArgs {
    #[arg(long)]
    pub eta: f64,
    #[arg(long)]
    pub s_min: f64,
    #[arg(long, default_value_t = 0.0)]
    pub inner_s1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub inner_smin: f64,
}

#[derive(Debug, Args)]
pub struct EntropyTestArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 8)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct TomoPlanArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub kn: u64,
    /// Principal-component budget for A; defaults to ⌈2^n/ε²⌉.
    #[arg(long)]
    pub ka: Option<u64>,
    #[arg(long)]
    pub kb: Option<u64>,
    #[arg(long)]
    pub s_min: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RateBoundsArgs {
    #[arg(long)]
    pub s1: f64,
    #[arg(long)]
    pub na: u64,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub eps: f64,
}

#[derive(Debug, Args)]
pub struct RunProtocolArgs {
    /// Schmidt probabilities of Σ √p_i |i⟩|i⟩.
    #[arg(long, value_parser = parse_probabilities)]
    pub schmidt: Probabilities,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
}

/// A comma-separated probability list, kept as one argument value.
#[derive(Clone, Debug, PartialEq)]
pub struct Probabilities(pub Vec<f64>);

impl std::ops::Deref for Probabilities {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Parses `p1,p2,...`, reporting the column of the first bad field.
pub fn parse_probabilities(s: &str) -> Result<Probabilities, String> {
    let mut out = Vec::new();
    let mut col = 1;
    for field in s.split(',') {
        let t = field.trim();
        let v: f64 = t.parse().map_err(|_| format!("line 1, column {col}: '{t}' is not a number"))?;
        if !(v.is_finite() && v >= 0.0) {
            return Err(format!("line 1, column {col}: '{t}' is not a probability"));
        }
        out.push(v);
        col += field.chars().count() + 1;
    }
    Ok(Probabilities(out))
}
