//! Run configuration: defaults, a flat `key = value` file, then flags.

use std::collections::BTreeMap;
use std::str::FromStr;

use fukaya_core::Rat;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Tsv,
    Pretty,
}

impl OutputFormat {
    fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Tsv => "tsv",
            OutputFormat::Pretty => "pretty",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub area: Rat,
    pub truncation: Rat,
    pub arity_cap: usize,
    pub hochschild_length_cap: usize,
    pub max_twist: usize,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            area: Rat::from_integer(1.into()),
            truncation: Rat::from_integer(10.into()),
            arity_cap: 4,
            hochschild_length_cap: 4,
            max_twist: 4,
            output_format: OutputFormat::Pretty,
        }
    }
}

/// Values given on the command line; `None` leaves the file or default in place.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct ConfigFlags {
    /// Flat key = value file with keys area, T, D, hochschild_length_cap, max_twist, output_format.
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    /// Torus area, a positive rational [default: 1].
    #[arg(long, global = true)]
    pub area: Option<String>,
    /// Truncation bound on Novikov exponents [default: 10].
    #[arg(long = "T", global = true)]
    pub truncation: Option<String>,
    /// Arity cap for μ tables and relation checks, 2..=4 [default: 4].
    #[arg(long = "D", global = true)]
    pub arity_cap: Option<usize>,
    /// Length cap for Hochschild cochains [default: 4].
    #[arg(long = "hh-cap", global = true)]
    pub hochschild_length_cap: Option<usize>,
    /// Number of twists τ in the object set L_f, L_s, …, τᵃL_s [default: 4].
    #[arg(long = "max-twist", global = true)]
    pub max_twist: Option<usize>,
    /// Output format [default: pretty].
    #[arg(long, value_enum, global = true)]
    pub format: Option<OutputFormat>,
}

pub fn parse_rat(s: &str) -> Result<Rat, CliError> {
    Rat::from_str(s.trim()).map_err(|_| CliError::Usage(format!("not a rational number: {s:?}")))
}

fn parse_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", n + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

impl RunConfig {
    pub fn resolve(flags: &ConfigFlags) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &flags.config {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            for (k, v) in parse_file(&text)? {
                let int = |v: &str| v.parse::<usize>().map_err(|_| CliError::Usage(format!("{k}: not an integer: {v}")));
                match k.as_str() {
                    "area" | "torus_area" => cfg.area = parse_rat(&v)?,
                    "T" | "truncation" => cfg.truncation = parse_rat(&v)?,
                    "D" | "arity_cap" => cfg.arity_cap = int(&v)?,
                    "hochschild_length_cap" => cfg.hochschild_length_cap = int(&v)?,
                    "a" | "max_twist" => cfg.max_twist = int(&v)?,
                    "output_format" => {
                        cfg.output_format = <OutputFormat as clap::ValueEnum>::from_str(&v, true)
                            .map_err(|_| CliError::Usage(format!("output_format: unknown format {v}")))?
                    }
                    _ => return Err(CliError::Usage(format!("unknown config key {k}"))),
                }
            }
        }
        if let Some(v) = &flags.area {
            cfg.area = parse_rat(v)?;
        }
        if let Some(v) = &flags.truncation {
            cfg.truncation = parse_rat(v)?;
        }
        if let Some(v) = flags.arity_cap {
            cfg.arity_cap = v;
        }
        if let Some(v) = flags.hochschild_length_cap {
            cfg.hochschild_length_cap = v;
        }
        if let Some(v) = flags.max_twist {
            cfg.max_twist = v;
        }
        if let Some(v) = flags.format {
            cfg.output_format = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !self.area.is_positive() {
            return Err(CliError::Usage(String::from("area must be positive")));
        }
        if !self.truncation.is_positive() {
            return Err(CliError::Usage(String::from("T must be positive")));
        }
        if !(2..=4).contains(&self.arity_cap) {
            return Err(CliError::Usage(String::from("D must lie in 2..=4")));
        }
        if self.max_twist < 2 {
            return Err(CliError::Usage(String::from("max twist must be at least 2")));
        }
        if self.hochschild_length_cap < 2 {
            return Err(CliError::Usage(String::from("hochschild length cap must be at least 2")));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "area": self.area.to_string(),
            "T": self.truncation.to_string(),
            "D": self.arity_cap,
            "hochschild_length_cap": self.hochschild_length_cap,
            "max_twist": self.max_twist,
            "output_format": self.output_format.as_str(),
        })
    }
}
