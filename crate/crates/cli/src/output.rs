//! Trajectory tables in CSV and JSON.
//!
//! CSV numbers carry 17 significant digits so files round-trip exactly and
//! golden-file comparisons are byte-stable.

use std::io::Write;

use serde::Serialize;

use qsl_core::propagator::Trajectory;

use crate::Failure;

/// 17 significant digits; round-trips f64 exactly.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One trajectory's share of the output table.
pub struct Series<'a> {
    /// Column suffix such as `_s3` for seed 3; empty for single runs.
    pub suffix: String,
    pub trajectory: &'a Trajectory,
}

fn column_set(series: &Series<'_>) -> Vec<(String, Vec<f64>)> {
    let t = series.trajectory;
    let sfx = &series.suffix;
    let mut cols = vec![(format!("purity{sfx}"), t.purity.clone())];
    if let Some(d) = &t.purity_deviation {
        cols.push((format!("purity_deviation{sfx}"), d.clone()));
    }
    if let Some(f) = &t.bound_floor {
        cols.push((format!("bound_floor{sfx}"), f.clone()));
    }
    if let Some(c) = &t.bound_ceiling {
        cols.push((format!("bound_ceiling{sfx}"), c.clone()));
    }
    if let Some(f) = &t.purity_floor {
        cols.push((format!("purity_floor{sfx}"), f.clone()));
    }
    cols
}

/// Write `t` plus per-series columns as CSV.
pub fn write_csv(mut w: impl Write, series: &[Series<'_>]) -> Result<(), Failure> {
    let first = series
        .first()
        .ok_or_else(|| Failure::schema("no trajectories to write"))?;
    let times = first.trajectory.times();

    let mut columns: Vec<(String, Vec<f64>)> = vec![("t".to_string(), times.clone())];
    for s in series {
        columns.extend(column_set(s));
    }

    let header: Vec<&str> = columns.iter().map(|(name, _)| name.as_str()).collect();
    writeln!(w, "{}", header.join(",")).map_err(Failure::io)?;
    for row in 0..times.len() {
        let line: Vec<String> = columns
            .iter()
            .map(|(_, values)| format_float(values[row]))
            .collect();
        writeln!(w, "{}", line.join(",")).map_err(Failure::io)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonTable {
    name: String,
    method: String,
    t: Vec<f64>,
    columns: Vec<JsonColumn>,
}

#[derive(Serialize)]
struct JsonColumn {
    name: String,
    values: Vec<f64>,
}

/// Write the same table as a JSON document.
pub fn write_json(w: impl Write, name: &str, series: &[Series<'_>]) -> Result<(), Failure> {
    let first = series
        .first()
        .ok_or_else(|| Failure::schema("no trajectories to write"))?;
    let mut columns = Vec::new();
    for s in series {
        for (name, values) in column_set(s) {
            columns.push(JsonColumn { name, values });
        }
    }
    let table = JsonTable {
        name: name.to_string(),
        method: first.trajectory.method.as_str().to_string(),
        t: first.trajectory.times(),
        columns,
    };
    serde_json::to_writer_pretty(w, &table).map_err(Failure::io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        for x in [0.1, 1.0 / 3.0, 2.5e-17, -4.9e300, 0.0] {
            let s = format_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }
}
