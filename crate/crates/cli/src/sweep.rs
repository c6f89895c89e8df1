//! Parameter sweeps: one experiment evaluated over a grid of values for a
//! single parameter. Grid points run concurrently; rows keep grid order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};
use crate::experiments::run;
use crate::report::{ExperimentReport, Status, Verdict};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    pub experiment: String,
    pub param: String,
    #[serde(default)]
    pub values: Vec<Value>,
    /// Parameters shared by every grid point.
    #[serde(default = "empty_object")]
    pub base: Value,
}

fn empty_object() -> Value {
    Value::Object(Map::new())
}

fn point_params(p: &SweepParams, value: Option<&Value>) -> CliResult<Value> {
    let Value::Object(mut base) = p.base.clone() else {
        return Err(CliError::Params("sweep base must be an object".into()));
    };
    if let Some(v) = value {
        base.insert(p.param.clone(), v.clone());
    }
    Ok(Value::Object(base))
}

pub fn run_sweep(p: &SweepParams, seed: u64) -> CliResult<(Map<String, Value>, Vec<Verdict>)> {
    if p.experiment == "sweep" {
        return Err(CliError::Params("sweeps cannot be nested".into()));
    }
    let reports: Vec<ExperimentReport> = p
        .values
        .par_iter()
        .map(|v| run(&p.experiment, &point_params(p, Some(v))?, seed))
        .collect::<CliResult<_>>()?;

    // columns come from the first point, or from the base parameters for an empty grid
    let template = match reports.first() {
        Some(r) => Some(r.clone()),
        None => run(&p.experiment, &point_params(p, None)?, seed).ok(),
    };
    let result_keys: Vec<String> = template
        .map(|r| r.scalar_results().into_iter().map(|(k, _)| k).collect())
        .unwrap_or_default();
    let mut columns = vec!["index".to_string(), p.param.clone()];
    columns.extend(result_keys.iter().cloned());
    columns.push("status".into());

    let rows: Vec<Value> = reports
        .iter()
        .zip(&p.values)
        .enumerate()
        .map(|(i, (r, v))| {
            let scalars: Map<String, Value> = r.scalar_results().into_iter().collect();
            let mut row = vec![json!(i), v.clone()];
            row.extend(
                result_keys
                    .iter()
                    .map(|k| scalars.get(k).cloned().unwrap_or(Value::Null)),
            );
            row.push(json!(r.overall().as_str()));
            Value::Array(row)
        })
        .collect();

    let failed: Vec<usize> = reports
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.ok())
        .map(|(i, _)| i)
        .collect();
    let verdict = if reports.iter().all(|r| r.overall() == Status::NotApplicable) {
        Verdict::new(
            "sweep-points-pass",
            Status::NotApplicable,
            format!("{} points", reports.len()),
        )
    } else {
        Verdict::check(
            "sweep-points-pass",
            failed.is_empty(),
            format!("{} points, failing indices {failed:?}", reports.len()),
        )
    };
    let mut results = Map::new();
    results.insert("points".into(), json!(reports.len()));
    results.insert("columns".into(), json!(columns));
    results.insert("rows".into(), Value::Array(rows));
    Ok((results, vec![verdict]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep(values: Vec<Value>) -> ExperimentReport {
        let params = json!({"experiment": "cex_ii", "param": "overlap", "values": values});
        run("sweep", &params, 3).unwrap()
    }

    #[test]
    fn overlap_grid_margin_is_half_d() {
        let values: Vec<Value> = (0..=10).map(|i| json!(i as f64 / 10.0)).collect();
        let r = sweep(values);
        let cols: Vec<&str> = r.results["columns"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_str().unwrap())
            .collect();
        let at = |name: &str| cols.iter().position(|c| *c == name).unwrap();
        let rows = r.results["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 11);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row[0], i);
            let d = row[at("single_bit_d")].as_f64().unwrap();
            let margin = row[at("violation_margin")].as_f64().unwrap();
            assert!((margin - d / 2.0).abs() < 1e-9);
        }
        assert!(r.ok());
    }

    #[test]
    fn empty_grid_has_columns_only() {
        let r = sweep(vec![]);
        assert_eq!(r.results["rows"].as_array().unwrap().len(), 0);
        assert!(r.results["columns"].as_array().unwrap().len() > 3);
        assert_eq!(r.overall(), Status::NotApplicable);
    }

    #[test]
    fn sweep_errors() {
        assert!(matches!(
            run(
                "sweep",
                &json!({"experiment": "nope", "param": "x", "values": [1]}),
                0
            ),
            Err(CliError::UnknownExperiment(_))
        ));
        assert!(run("sweep", &json!({"experiment": "sweep", "param": "x"}), 0).is_err());
        assert!(run(
            "sweep",
            &json!({"experiment": "cex_i", "param": "n", "values": [1]}),
            0
        )
        .is_err());
    }
}
