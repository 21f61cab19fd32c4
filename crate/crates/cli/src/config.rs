//! Experiment configuration: TOML file merged with command-line flags (flags win).

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::Deserialize;
use splitquant::{ArithOp, DistSpec};

use crate::args::CommonArgs;
use crate::method::Method;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub distributions: Option<Vec<String>>,
    pub methods: Option<Vec<String>>,
    pub depths: Option<Vec<u32>>,
    pub rep_size: Option<usize>,
    pub op: Option<String>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub timing: Option<bool>,
    pub replicates: Option<usize>,
    pub statistic: Option<String>,
    pub reference_n: Option<u32>,
    pub reference_acc_n: Option<u32>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Representation size of one sweep cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Size {
    Depth(u32),
    Atoms(usize),
}

impl Size {
    pub fn atoms(&self) -> usize {
        match *self {
            Size::Depth(n) => 1usize << n,
            Size::Atoms(a) => a,
        }
    }

    /// `log2` of the atom count when it is a power of two.
    pub fn depth(&self) -> Option<u32> {
        match *self {
            Size::Depth(n) => Some(n),
            Size::Atoms(a) if a.is_power_of_two() => Some(a.trailing_zeros()),
            Size::Atoms(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    Mean,
    P95,
}

/// Defaults that differ between subcommands.
pub struct Defaults {
    pub dists: Vec<DistSpec>,
    pub methods: Vec<Method>,
    pub sizes: Vec<Size>,
    pub op: ArithOp,
    pub k: usize,
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub dists: Vec<DistSpec>,
    pub methods: Vec<Method>,
    pub sizes: Vec<Size>,
    pub op: ArithOp,
    pub k: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub timing: bool,
    pub replicates: usize,
    pub statistic: Statistic,
    pub reference_n: u32,
    pub reference_acc_n: u32,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_REPLICATES: usize = 20;
pub const DEFAULT_REFERENCE_N: u32 = 12;
pub const DEFAULT_REFERENCE_ACC_N: u32 = 12;

fn parse_depths(items: &[String]) -> anyhow::Result<Vec<u32>> {
    let mut out = Vec::new();
    for item in items {
        match item.split_once('-') {
            Some((a, b)) => {
                let a: u32 = a.trim().parse().with_context(|| format!("bad depth range `{item}`"))?;
                let b: u32 = b.trim().parse().with_context(|| format!("bad depth range `{item}`"))?;
                if a > b {
                    bail!("empty depth range `{item}`");
                }
                out.extend(a..=b);
            }
            None => out.push(item.trim().parse().with_context(|| format!("bad depth `{item}`"))?),
        }
    }
    Ok(out)
}

fn parse_all<T, E>(items: &[String]) -> anyhow::Result<Vec<T>>
where
    T: std::str::FromStr<Err = E>,
    E: std::error::Error + Send + Sync + 'static,
{
    items.iter().map(|s| s.parse::<T>().with_context(|| format!("`{s}`"))).collect()
}

impl Experiment {
    pub fn resolve(args: &CommonArgs, defaults: Defaults) -> anyhow::Result<Self> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };

        let dists = if !args.dists.is_empty() {
            parse_all(&args.dists)?
        } else if let Some(d) = &file.distributions {
            parse_all(d)?
        } else {
            defaults.dists
        };
        let methods = if !args.methods.is_empty() {
            parse_all(&args.methods)?
        } else if let Some(m) = &file.methods {
            parse_all(m)?
        } else {
            defaults.methods
        };
        let sizes = if !args.depths.is_empty() {
            parse_depths(&args.depths)?.into_iter().map(Size::Depth).collect()
        } else if !args.rep_sizes.is_empty() {
            args.rep_sizes.iter().map(|&a| Size::Atoms(a)).collect()
        } else if let Some(d) = &file.depths {
            d.iter().map(|&n| Size::Depth(n)).collect()
        } else if let Some(a) = file.rep_size {
            vec![Size::Atoms(a)]
        } else {
            defaults.sizes
        };
        let op = match args.op.as_ref().or(file.op.as_ref()) {
            Some(s) => s.parse().with_context(|| format!("`{s}`"))?,
            None => defaults.op,
        };
        let statistic = match args.statistic.as_deref().or(file.statistic.as_deref()) {
            None | Some("mean") => Statistic::Mean,
            Some("p95") => Statistic::P95,
            Some(other) => bail!("unknown statistic `{other}` (expected mean or p95)"),
        };

        let exp = Experiment {
            dists,
            methods,
            sizes,
            op,
            k: args.k.or(file.k).unwrap_or(defaults.k),
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out: args.out.clone().or(file.out),
            timing: args.timing || file.timing.unwrap_or(false),
            replicates: args.replicates.or(file.replicates).unwrap_or(DEFAULT_REPLICATES),
            statistic,
            reference_n: args.reference_n.or(file.reference_n).unwrap_or(DEFAULT_REFERENCE_N),
            reference_acc_n: args.reference_acc_n.or(file.reference_acc_n).unwrap_or(DEFAULT_REFERENCE_ACC_N),
        };
        exp.validate()?;
        Ok(exp)
    }

    fn validate(&self) -> anyhow::Result<()> {
        if self.dists.is_empty() || self.methods.is_empty() || self.sizes.is_empty() {
            bail!("distributions, methods and sizes must all be nonempty");
        }
        if self.k == 0 {
            bail!("k must be at least 1");
        }
        if self.replicates == 0 {
            bail!("replicates must be at least 1");
        }
        for size in &self.sizes {
            if size.atoms() == 0 {
                bail!("rep size must be at least 1");
            }
            if size.depth().is_none() {
                if let Some(m) = self.methods.iter().find(|m| m.is_split()) {
                    bail!("rep size {} is not a power of two, which method `{m}` requires", size.atoms());
                }
            }
        }
        Ok(())
    }
}
