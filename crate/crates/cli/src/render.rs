//! Report rendering as canonical JSON, CSV or Markdown.

use keycrit::bounds::markdown_table;
use serde_json::Value;

use crate::error::CliResult;
use crate::report::ExperimentReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

pub fn render(r: &ExperimentReport, format: Format) -> CliResult<String> {
    match format {
        Format::Json => Ok(r.to_canonical_json()),
        Format::Csv => to_csv(r),
        Format::Md => Ok(to_markdown(r)),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// `(columns, rows)` when the results carry a table.
fn table(r: &ExperimentReport) -> Option<(Vec<String>, Vec<Vec<String>>)> {
    let columns = r.results.get("columns")?.as_array()?;
    let rows = r.results.get("rows")?.as_array()?;
    let columns = columns.iter().map(cell).collect();
    let rows = rows
        .iter()
        .map(|row| {
            row.as_array()
                .map_or_else(Vec::new, |cells| cells.iter().map(cell).collect())
        })
        .collect();
    Some((columns, rows))
}

/// Tabular results render as that table; anything else as `key,value`
/// pairs followed by one `verdict:<relation>` row per verdict.
fn to_csv(r: &ExperimentReport) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some((columns, rows)) = table(r) {
        w.write_record(&columns).map_err(keycrit::Error::from)?;
        for row in rows {
            w.write_record(&row).map_err(keycrit::Error::from)?;
        }
    } else {
        w.write_record(["key", "value"])
            .map_err(keycrit::Error::from)?;
        for (k, v) in r.scalar_results() {
            w.write_record([k, cell(&v)])
                .map_err(keycrit::Error::from)?;
        }
        for v in &r.verdicts {
            w.write_record([
                format!("verdict:{}", v.relation),
                v.status.as_str().to_string(),
            ])
            .map_err(keycrit::Error::from)?;
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| keycrit::Error::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn to_markdown(r: &ExperimentReport) -> String {
    let mut out = format!(
        "# {}\n\nversion {}, seed {}\n\n",
        r.experiment, r.version, r.seed
    );
    out.push_str(&format!(
        "parameters: `{}`\n\n## Results\n\n",
        serde_json::to_string(&r.params).expect("params serialize")
    ));
    let scalars: Vec<[String; 2]> = r
        .scalar_results()
        .into_iter()
        .map(|(k, v)| [k, cell(&v)])
        .collect();
    out.push_str(&markdown_table(
        &["key".to_string(), "value".to_string()],
        &scalars,
    ));
    if let Some((columns, rows)) = table(r) {
        out.push('\n');
        out.push_str(&dynamic_table(&columns, &rows));
    }
    out.push_str("\n## Verdicts\n\n");
    let verdicts: Vec<[String; 3]> = r
        .verdicts
        .iter()
        .map(|v| {
            [
                v.relation.clone(),
                v.status.as_str().to_string(),
                v.detail.clone(),
            ]
        })
        .collect();
    out.push_str(&markdown_table(
        &[
            "relation".to_string(),
            "status".to_string(),
            "detail".to_string(),
        ],
        &verdicts,
    ));
    out
}

fn dynamic_table(columns: &[String], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..columns.len())
        .map(|j| {
            rows.iter()
                .filter_map(|r| r.get(j))
                .map(String::len)
                .chain([columns[j].len(), 3])
                .max()
                .unwrap_or(3)
        })
        .collect();
    let line = |cells: &[String]| {
        let parts: Vec<String> = widths
            .iter()
            .enumerate()
            .map(|(j, &w)| format!("{:<w$}", cells.get(j).map_or("", String::as_str)))
            .collect();
        format!("| {} |\n", parts.join(" | "))
    };
    let mut out = line(columns);
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&format!("| {} |\n", rule.join(" | ")));
    rows.iter().for_each(|r| out.push_str(&line(r)));
    out
}
