//! Resolution of the run configuration: flags, then the config file, then
//! per-command defaults.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Context;
use gwloc_core::gkm::Sign;
use serde::{Deserialize, Serialize};

use crate::args::{Command, CommonArgs, Format, SignArg};

/// A configuration problem; reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Keys accepted in the `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    a: Option<Vec<u32>>,
    sign: Option<SignArg>,
    dmax: Option<u32>,
    qorder: Option<usize>,
    seeds: Option<Vec<u64>>,
    format: Option<Format>,
    output: Option<PathBuf>,
    decimal: Option<usize>,
    marks: Option<usize>,
    rmax: Option<usize>,
}

fn read_file(path: &Path) -> anyhow::Result<FileConfig> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).map_err(|e| usage(format!("config file {}: {e}", path.display())))
}

/// The fully resolved configuration, echoed into JSON output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<u32>>,
    pub sign: Sign,
    pub dmax: u32,
    pub qorder: usize,
    pub seeds: Vec<u64>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal: Option<usize>,
    pub marks: usize,
    pub rmax: usize,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    /// Merge flags over the config file over defaults, then validate.
    pub fn resolve(common: &CommonArgs, command: &Command) -> anyhow::Result<Self> {
        let file = match &common.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let (name, sign_flag, marks_flag, rmax_flag) = match command {
            Command::Invariants { sign, .. } => ("invariants", *sign, None, None),
            Command::SvrVerify { marks, rmax, .. } => ("svr-verify", None, *marks, *rmax),
            Command::MirrorVerify => ("mirror-verify", None, None, None),
            Command::ModularityVerify => ("modularity-verify", None, None, None),
            Command::HodgeTable { rmax } => ("hodge-table", None, None, *rmax),
        };
        let default_seeds: Vec<u64> = if name == "svr-verify" {
            (0..5).collect()
        } else {
            vec![1, 2]
        };
        let sign = match sign_flag.or(file.sign).unwrap_or(SignArg::Concave) {
            SignArg::Concave => Sign::Concave,
            SignArg::Convex => Sign::Convex,
        };
        let cfg = RunConfig {
            command: name,
            n: common.n.or(file.n),
            a: common.a.clone().or(file.a),
            sign,
            dmax: common.dmax.or(file.dmax).unwrap_or(3),
            qorder: common.qorder.or(file.qorder).unwrap_or(12),
            seeds: common.seeds.clone().or(file.seeds).unwrap_or(default_seeds),
            format: common.format.or(file.format).unwrap_or(Format::Csv),
            decimal: common.decimal.or(file.decimal),
            marks: marks_flag.or(file.marks).unwrap_or(2),
            rmax: rmax_flag.or(file.rmax).unwrap_or(4),
            output: common.output.clone().or(file.output),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> anyhow::Result<()> {
        if self.dmax == 0 {
            return Err(usage("--dmax must be at least 1"));
        }
        if let Some(a) = &self.a {
            if a.is_empty() || a.contains(&0) {
                return Err(usage("--a entries must be positive integers"));
            }
        }
        if self.seeds.is_empty() {
            return Err(usage("--seeds needs at least one seed"));
        }
        let needs_space = matches!(self.command, "invariants" | "svr-verify" | "mirror-verify");
        if needs_space {
            let n = self.n.ok_or_else(|| usage("--n is required"))?;
            if n < 2 {
                return Err(usage("--n must be at least 2"));
            }
            if self.command != "svr-verify" && self.a.is_none() {
                return Err(usage("--a is required"));
            }
        }
        match self.command {
            "invariants" | "mirror-verify" if self.seeds.len() < 2 => {
                Err(usage("seed independence needs at least two --seeds"))
            }
            "invariants"
                if self.sign == Sign::Convex
                    && self.a.as_deref() != Some(&[self.n.unwrap() as u32]) =>
            {
                Err(usage(
                    "convex genus-one roots are implemented for the hypersurface --a n only",
                ))
            }
            "mirror-verify" => {
                let n = self.n.unwrap();
                if self.a.as_ref().unwrap().iter().sum::<u32>() as usize != n {
                    return Err(usage(
                        "mirror-verify needs a Calabi-Yau total space: Σ a = n",
                    ));
                }
                if self.qorder < self.dmax as usize {
                    return Err(usage("--qorder must be at least --dmax"));
                }
                Ok(())
            }
            "svr-verify" if self.rmax == 0 => Err(usage("--rmax must be at least 1")),
            "hodge-table" if self.rmax == 0 || self.rmax > 7 => {
                Err(usage("--rmax must lie in 1..=7"))
            }
            _ => Ok(()),
        }
    }
}
