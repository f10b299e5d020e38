//! Output documents and their renderings.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde_json::{Number, Value};

use crate::config::Format;
use crate::error::CliError;

/// One result in every supported shape: a JSON value, a table for CSV and
/// LaTeX, and a human-readable text form.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub json: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub text: String,
    /// Replaces the generic LaTeX table when set.
    pub latex: Option<String>,
}

impl Document {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        Ok(match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)
                    .map_err(|e| CliError::Invariant(format!("json: {e}")))?;
                s.push('\n');
                s
            }
            Format::Csv => self.csv()?,
            Format::Latex => match &self.latex {
                Some(l) => l.clone(),
                None => latex_table(&self.columns, &self.rows),
            },
        })
    }

    fn csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::Invariant(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(fail)?;
        for row in &self.rows {
            w.write_record(row).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Invariant(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| CliError::Invariant(format!("csv: {e}")))
    }
}

/// Exact JSON number for a big integer.
pub fn big(b: &BigUint) -> Value {
    Value::Number(b.to_string().parse::<Number>().expect("decimal digits form a JSON number"))
}

pub fn escape_latex(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '_' | '&' | '%' | '#' | '$' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            _ => out.push(c),
        }
    }
    out
}

pub fn latex_table(columns: &[String], rows: &[Vec<String>]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "\\begin{{tabular}}{{{}}}", "l".repeat(columns.len().max(1)));
    s.push_str("\\hline\n");
    let line = |cells: &[String]| {
        cells
            .iter()
            .map(|c| escape_latex(c))
            .collect::<Vec<_>>()
            .join(" & ")
    };
    let _ = writeln!(s, "{} \\\\", line(columns));
    s.push_str("\\hline\n");
    for row in rows {
        let _ = writeln!(s, "{} \\\\", line(row));
    }
    s.push_str("\\hline\n\\end{tabular}\n");
    s
}

/// Two-row layout `i` / `b_i`, one column per degree.
pub fn latex_betti_rows(label: &str, entries: &[(i64, BigUint)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "\\begin{{tabular}}{{c|{}}}", "c".repeat(entries.len()));
    let degrees: Vec<String> = entries.iter().map(|(i, _)| i.to_string()).collect();
    let values: Vec<String> = entries.iter().map(|(_, b)| b.to_string()).collect();
    let _ = writeln!(s, "$i$ & {} \\\\", degrees.join(" & "));
    s.push_str("\\hline\n");
    let _ = writeln!(s, "${label}$ & {} \\\\", values.join(" & "));
    s.push_str("\\end{tabular}\n");
    s
}
