//! Experiment configuration: a JSON document whose fields mirror the
//! command-line flags. Set and function payloads are kept as raw JSON until
//! the group is known.

use std::fmt;
use std::fs;
use std::path::PathBuf;

use haarlab_core::group::GroupSpec;
use haarlab_core::haar::Schedule;
use haarlab_core::measure::MeasureSpec;
use haarlab_core::setalg::{FiniteSet, IntervalSet, Region, Subset};
use haarlab_core::Rat;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    HaarApprox,
    ProductCheck,
    FubiniCheck,
    UniquenessCheck,
    Selftest,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::HaarApprox => "haar-approx",
            Command::ProductCheck => "product-check",
            Command::FubiniCheck => "fubini-check",
            Command::UniquenessCheck => "uniqueness-check",
            Command::Selftest => "selftest",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

fn default_n_max() -> u32 {
    10
}

fn default_seed() -> u64 {
    42
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    /// `"real_add"`, `"symmetric:3"`, or a group object.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k0: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<Value>,
    /// A 2-D function: inline JSON or a path to a JSON file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Value>,
    /// A list of sets (or regions): inline JSON or a path.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<Value>,
    #[serde(default = "default_n_max")]
    pub n_max: u32,
    #[serde(default)]
    pub schedule: Schedule,
    #[serde(default = "Rat::zero")]
    pub tolerance: Rat,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> ExperimentConfig {
        ExperimentConfig {
            command: None,
            group: None,
            k0: None,
            target: None,
            mu: None,
            nu: None,
            f: None,
            sets: None,
            n_max: default_n_max(),
            schedule: Schedule::default(),
            tolerance: Rat::zero(),
            seed: default_seed(),
            suites: None,
            threads: None,
            out: None,
            format: Format::Json,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig, CliError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<ExperimentConfig, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))?;
        ExperimentConfig::from_json(&text).map_err(|e| match e {
            CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
            e => e,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_max == 0 {
            return Err(CliError::Input("n_max: must be at least 1".into()));
        }
        if self.tolerance.is_negative() {
            return Err(CliError::Input(format!("tolerance: {} is negative", self.tolerance)));
        }
        if self.threads == Some(0) {
            return Err(CliError::Input("threads: must be at least 1".into()));
        }
        Ok(())
    }

    /// The fields that determine a report, as echoed into it.
    pub fn echo(&self) -> Value {
        let mut e = self.clone();
        e.threads = None;
        e.out = None;
        e.format = Format::Json;
        let mut v = serde_json::to_value(e).expect("config serializes");
        if let Value::Object(m) = &mut v {
            m.remove("format");
        }
        v
    }

    pub fn group(&self) -> Result<GroupSpec, CliError> {
        match &self.group {
            None => Ok(GroupSpec::RealAdd),
            Some(v) => parse_group(v),
        }
    }

    pub fn required<'a>(&'a self, field: &str, v: &'a Option<Value>) -> Result<&'a Value, CliError> {
        v.as_ref().ok_or_else(|| CliError::Input(format!("{field}: required for {}", self.command_name())))
    }

    fn command_name(&self) -> String {
        self.command.map_or("this command".into(), |c| c.to_string())
    }

    /// A measure spec; `default` when the field is absent.
    pub fn measure(&self, field: &str, v: &Option<Value>, default: MeasureSpec) -> Result<MeasureSpec, CliError> {
        match v {
            None => Ok(default),
            Some(v) => from_value(field, &payload(field, v)?),
        }
    }
}

/// `"real_add" | "int_add" | "pos_mul" | "klein" | "symmetric:n" |
/// "cyclic:n"`, or the tagged JSON object.
pub fn parse_group(v: &Value) -> Result<GroupSpec, CliError> {
    let obj = match v {
        Value::String(s) => {
            let s = s.trim();
            if s.starts_with('{') {
                serde_json::from_str(s).map_err(|e| CliError::Input(format!("group: {e}")))?
            } else if let Some((name, n)) = s.split_once(':') {
                let n: usize = n.trim().parse().map_err(|_| CliError::Input(format!("group: bad order in {s:?}")))?;
                serde_json::json!({ "type": name.trim(), "n": n })
            } else {
                serde_json::json!({ "type": s })
            }
        }
        v => v.clone(),
    };
    from_value("group", &obj)
}

fn from_value<T: DeserializeOwned>(field: &str, v: &Value) -> Result<T, CliError> {
    T::deserialize(v).map_err(|e| CliError::Input(format!("{field}: {e}")))
}

/// Inline JSON, or the contents of the JSON file a string names.
pub fn payload(field: &str, v: &Value) -> Result<Value, CliError> {
    match v {
        Value::String(s) if s.trim_start().starts_with(['{', '[']) => {
            serde_json::from_str(s).map_err(|e| CliError::Input(format!("{field}: {e}")))
        }
        Value::String(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{field}: {path}: {e}")))?;
            serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{field}: {path}: {e}")))
        }
        v => Ok(v.clone()),
    }
}

/// A set in the algebra of `g`. Interval groups take the bracket text
/// (`"[0,1) ∪ [2,3)"`) or the JSON object; finite groups take a member
/// list (`[0, 2]`), its text, or the JSON object.
pub fn parse_subset(field: &str, g: &GroupSpec, v: &Value) -> Result<Subset, CliError> {
    let bad = |e: String| CliError::Input(format!("{field}: {e}"));
    let s = match (g.order(), v) {
        (Some(n), Value::Array(items)) => {
            let members = items
                .iter()
                .map(|x| x.as_u64().map(|k| k as usize).ok_or_else(|| bad(format!("{x} is not a group index"))))
                .collect::<Result<Vec<_>, _>>()?;
            Subset::Points(FiniteSet::new(n, members).map_err(|e| bad(e.to_string()))?)
        }
        (Some(_), Value::String(s)) => {
            let inner: Value = serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
            return parse_subset(field, g, &inner);
        }
        (None, Value::String(s)) => Subset::Intervals(s.parse::<IntervalSet>().map_err(|e| bad(e.to_string()))?),
        (_, v) => from_value(field, v)?,
    };
    g.check_set(&s).map_err(|e| bad(e.to_string()))?;
    Ok(s)
}

/// A list of sets, each in any form [`parse_subset`] takes.
pub fn parse_subsets(field: &str, g: &GroupSpec, v: &Value) -> Result<Vec<Subset>, CliError> {
    match payload(field, v)? {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, x)| parse_subset(&format!("{field}[{i}]"), g, x))
            .collect(),
        other => Err(CliError::Input(format!("{field}: expected a list of sets, got {other}"))),
    }
}

pub fn parse_regions(field: &str, v: &Value) -> Result<Vec<Region>, CliError> {
    match payload(field, v)? {
        Value::Array(items) => {
            items.iter().enumerate().map(|(i, x)| from_value(&format!("{field}[{i}]"), x)).collect()
        }
        other => Err(CliError::Input(format!("{field}: expected a list of regions, got {other}"))),
    }
}

pub fn parse_payload<T: DeserializeOwned>(field: &str, v: &Value) -> Result<T, CliError> {
    from_value(field, &payload(field, v)?)
}
