//! Parameter loading and qubit state specifications.

use std::path::Path;

use keycrit::qmath::DensityOperator;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// `--params` is parsed as JSON first and read as a file path otherwise.
/// An absent value means an empty object.
pub fn load_params(raw: Option<&str>) -> CliResult<Value> {
    let Some(raw) = raw else {
        return Ok(Value::Object(Default::default()));
    };
    let value = match serde_json::from_str::<Value>(raw) {
        Ok(v) => v,
        Err(json_err) => {
            let path = Path::new(raw);
            if !path.is_file() {
                return Err(CliError::Params(format!(
                    "not JSON ({json_err}) and not a file: {raw}"
                )));
            }
            serde_json::from_str(&std::fs::read_to_string(path)?)?
        }
    };
    if !value.is_object() {
        return Err(CliError::Params("parameters must be a JSON object".into()));
    }
    Ok(value)
}

/// Single-qubit state given as `{"bloch": [x, y, z]}` or `{"diag": [p0, p1]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum QubitSpec {
    Bloch([f64; 3]),
    Diag([f64; 2]),
}

impl QubitSpec {
    pub fn ket0() -> Self {
        Self::Bloch([0.0, 0.0, 1.0])
    }

    pub fn ket1() -> Self {
        Self::Bloch([0.0, 0.0, -1.0])
    }

    pub fn state(&self) -> CliResult<DensityOperator> {
        let rho = match self {
            Self::Bloch(r) => DensityOperator::from_bloch(*r),
            Self::Diag(d) => DensityOperator::diagonal(d),
        };
        rho.map_err(|e| CliError::Params(format!("qubit spec {self:?}: {e}")))
    }
}

/// Deserialize experiment parameters, rejecting unknown fields.
pub fn parse<T: for<'de> Deserialize<'de>>(experiment: &str, params: &Value) -> CliResult<T> {
    serde_json::from_value(params.clone())
        .map_err(|e| CliError::Params(format!("{experiment}: {e}")))
}
