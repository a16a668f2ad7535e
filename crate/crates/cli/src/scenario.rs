//! Scenario files: a ring, named polynomial and ideal bindings, and a list
//! of operation steps with optional expected values. See `docs/scenarios.md`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliError;

pub const SCENARIO_VERSION: u32 = 1;

fn version_default() -> u32 {
    SCENARIO_VERSION
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default = "version_default")]
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// `Q[vars]` (optionally `:lex` etc.) or a builtin ring name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub polys: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ideals: BTreeMap<String, Vec<String>>,
    #[serde(default, rename = "step", skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    /// Binding for the result, referenced later as `@name`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub op: String,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub args: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Value>,
}

impl Scenario {
    /// JSON when the text starts with `{`, TOML otherwise. An empty file is
    /// the empty scenario.
    pub fn parse(text: &str) -> Result<Scenario, CliError> {
        let sc: Scenario = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?
        } else {
            toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?
        };
        sc.validate()?;
        Ok(sc)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.version != SCENARIO_VERSION {
            return Err(CliError::Parse(format!("unsupported scenario version {}", self.version)));
        }
        let mut names: Vec<&str> = Vec::new();
        for (i, s) in self.steps.iter().enumerate() {
            if !crate::engine::OPS.contains(&s.op.as_str()) {
                return Err(CliError::Parse(format!("step {}: unknown operation `{}`", i + 1, s.op)));
            }
            for v in s.args.values() {
                check_refs(v, &names, i)?;
            }
            if let Some(n) = &s.name {
                names.push(n);
            }
        }
        Ok(())
    }
}

fn check_refs(v: &Value, names: &[&str], step: usize) -> Result<(), CliError> {
    match v {
        Value::String(s) => match s.strip_prefix('@') {
            Some(r) if !names.contains(&r) => {
                Err(CliError::Parse(format!("step {}: `@{r}` does not name an earlier step", step + 1)))
            }
            _ => Ok(()),
        },
        Value::Array(xs) => xs.iter().try_for_each(|x| check_refs(x, names, step)),
        _ => Ok(()),
    }
}
