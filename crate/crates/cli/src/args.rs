//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Exact localization, mirror and modularity computations for local
/// projective spaces `Tot(⊕ O(-a_k) → P^{n-1})`.
#[derive(Debug, Parser)]
#[command(name = "gwloc", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand. Each may also be given in the
/// `--config` file; flags win over the file.
#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Number of homogeneous coordinates of the base `P^{n-1}`.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Bundle degrees, comma separated (e.g. `1,1`).
    #[arg(long, global = true, value_delimiter = ',')]
    pub a: Option<Vec<u32>>,
    /// Largest curve degree.
    #[arg(long, global = true)]
    pub dmax: Option<u32>,
    /// Truncation order of q-series.
    #[arg(long, global = true)]
    pub qorder: Option<usize>,
    /// Weight-specialization seeds, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Add a decimal approximation with this many digits.
    #[arg(long, global = true)]
    pub decimal: Option<usize>,
    /// Flat TOML file of defaults for the options above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of N0, N1, reduced N1 and the correction for d ≤ dmax.
    Invariants {
        /// Concave `O(-a)` (default) or convex `O(a)` bundle.
        #[arg(long, value_enum)]
        sign: Option<SignArg>,
        /// Write the enumerated graph classes as JSON to this path.
        #[arg(long)]
        dump_graphs: Option<PathBuf>,
    },
    /// Check standard = reduced + correction on every decorated star.
    SvrVerify {
        /// Largest number of marked points at the root.
        #[arg(long)]
        marks: Option<usize>,
        /// Largest number of edges at the root.
        #[arg(long)]
        rmax: Option<usize>,
        /// Flip the sign of the correction term (harness self-test).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Compare localization with the closed hypergeometric formulas.
    MirrorVerify,
    /// Check the modular identities of the local-plane potential.
    ModularityVerify,
    /// Genus-one ψ intersection numbers and the generating function F_r.
    HodgeTable {
        /// Largest number of marked points.
        #[arg(long)]
        rmax: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignArg {
    Concave,
    Convex,
}
