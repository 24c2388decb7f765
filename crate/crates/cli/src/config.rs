//! Job configuration: a TOML file, overridden by inline flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use pdklr_core::{CartanDatum, DatumSpec, DominantWeight, RootVector};
use pdklr_engine::QEntry;
use serde::Deserialize;

use crate::UsageError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub family: Option<String>,
    pub rank: Option<usize>,
    pub labels: Option<Vec<String>>,
    pub cartan_matrix: Option<Vec<Vec<i64>>>,
    pub symmetrizers: Option<Vec<i64>>,
    #[serde(rename = "Lambda")]
    pub lambda: Option<BTreeMap<String, i64>>,
    pub alpha: Option<BTreeMap<String, i64>>,
    pub characteristic: Option<u64>,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub q: Vec<QEntry>,
    pub max_n: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct DatumArgs {
    /// TOML job file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Built-in family: a..g, affine-a, rank1
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Highest weight as label:coeff pairs, e.g. 1:1,2:1
    #[arg(long = "Lambda")]
    pub lambda: Option<String>,
    /// Root as label:coeff pairs
    #[arg(long)]
    pub alpha: Option<String>,
    /// 0 for the rationals, or a prime
    #[arg(long = "char")]
    pub characteristic: Option<u64>,
    /// Write JSON lines here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Largest height the engine accepts
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Print the parsed datum as JSON before anything else
    #[arg(long)]
    pub echo_datum: bool,
}

#[derive(Debug, Clone)]
pub struct JobConfig {
    pub datum: CartanDatum,
    pub lambda: Option<DominantWeight>,
    pub alpha: Option<RootVector>,
    pub characteristic: u64,
    pub output: Option<PathBuf>,
    pub q: Vec<QEntry>,
    pub max_n: usize,
    pub echo_datum: bool,
}

fn usage<E: std::fmt::Display>(e: E) -> UsageError {
    UsageError(e.to_string())
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub fn read_file(path: &Path) -> Result<FileConfig, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

impl JobConfig {
    pub fn resolve(args: &DatumArgs) -> Result<Self, UsageError> {
        let file = match &args.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let family = args.family.clone().or(file.family.clone());
        let datum = match (family, &file.cartan_matrix) {
            (Some(f), _) => {
                let rank = args.rank.or(file.rank).unwrap_or(if f == "rank1" || f == "nilhecke" { 1 } else { 0 });
                CartanDatum::family(&f, rank).map_err(usage)?
            }
            (None, Some(a)) => {
                let labels = file
                    .labels
                    .clone()
                    .unwrap_or_else(|| (1..=a.len()).map(|i| i.to_string()).collect());
                let spec = DatumSpec { labels, cartan_matrix: a.clone(), symmetrizers: file.symmetrizers.clone().unwrap_or_default() };
                CartanDatum::from_spec(&spec).map_err(usage)?
            }
            (None, None) => return Err(UsageError("missing Cartan matrix: give --family or cartan_matrix in --config".into())),
        };
        let lambda = match (&args.lambda, &file.lambda) {
            (Some(s), _) => Some(DominantWeight::new(&datum, datum.parse_coords(s).map_err(usage)?).map_err(usage)?),
            (None, Some(m)) => Some(datum.weight_from_map(m.iter().map(|(k, v)| (k.as_str(), *v))).map_err(usage)?),
            _ => None,
        };
        let alpha = match (&args.alpha, &file.alpha) {
            (Some(s), _) => Some(RootVector::new(&datum, datum.parse_coords(s).map_err(usage)?).map_err(usage)?),
            (None, Some(m)) => Some(datum.root_from_map(m.iter().map(|(k, v)| (k.as_str(), *v))).map_err(usage)?),
            _ => None,
        };
        let characteristic = args.characteristic.or(file.characteristic).unwrap_or(0);
        if characteristic != 0 && !(is_prime(characteristic) && characteristic < 1 << 32) {
            return Err(UsageError(format!("characteristic {characteristic} is neither 0 nor a prime below 2^32")));
        }
        Ok(Self {
            datum,
            lambda,
            alpha,
            characteristic,
            output: args.output.clone().or(file.output),
            q: file.q,
            max_n: args.max_n.or(file.max_n).unwrap_or(4),
            echo_datum: args.echo_datum,
        })
    }

    pub fn lambda(&self) -> Result<&DominantWeight, UsageError> {
        self.lambda.as_ref().ok_or_else(|| UsageError("missing --Lambda".into()))
    }

    pub fn alpha(&self) -> Result<&RootVector, UsageError> {
        self.alpha.as_ref().ok_or_else(|| UsageError("missing --alpha".into()))
    }
}
