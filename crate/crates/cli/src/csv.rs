//! CSV output: `#` metadata lines, one column-name line, then rows of
//! numbers in scientific notation with 12 significant digits.

use std::io::{self, Write};

use crate::config::ScenarioConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// `x` with 12 significant digits.
pub fn format_cell(x: f64) -> String {
    // adding zero folds -0 into 0
    format!("{:.11e}", x + 0.0)
}

impl CsvTable {
    pub fn new(command: &str, cfg: &ScenarioConfig, columns: &[&str]) -> Self {
        let mut comments = vec![
            format!("wiggler {VERSION}"),
            format!("command = {command}"),
            format!("config_sha256 = {}", cfg.hash()),
        ];
        comments.extend(cfg.echo().into_iter().map(|(k, v)| format!("{k} = {v}")));
        Self { comments, columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|&x| format_cell(x)).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        w.flush()
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    /// Index of a named column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

/// Reads CSV text written by [`CsvTable::write_to`].
pub fn parse_table(text: &str) -> Result<CsvTable, String> {
    let mut comments = Vec::new();
    let mut columns = None;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim_start().to_string());
        } else if columns.is_none() {
            columns = Some(line.split(',').map(str::to_string).collect::<Vec<_>>());
        } else if !line.is_empty() {
            let row = line
                .split(',')
                .map(|c| c.parse::<f64>().map_err(|_| format!("line {}: bad number `{c}`", i + 1)))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
    }
    let columns = columns.ok_or("no column header")?;
    Ok(CsvTable { comments, columns, rows })
}

/// First cell where two tables differ by more than `rel` relative to the
/// larger magnitude, with `abs_floor` absorbing rounding noise around zero.
pub fn first_difference(a: &CsvTable, b: &CsvTable, rel: f64, abs_floor: f64) -> Option<String> {
    if a.columns != b.columns {
        return Some(format!("columns differ: {:?} vs {:?}", a.columns, b.columns));
    }
    if a.rows.len() != b.rows.len() {
        return Some(format!("row counts differ: {} vs {}", a.rows.len(), b.rows.len()));
    }
    for (i, (ra, rb)) in a.rows.iter().zip(&b.rows).enumerate() {
        for (j, (&x, &y)) in ra.iter().zip(rb).enumerate() {
            if (x - y).abs() > rel * x.abs().max(y.abs()) + abs_floor {
                return Some(format!("row {i}, column {}: {x:e} vs {y:e}", a.columns[j]));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_cell(307.0), "3.07000000000e2");
        assert_eq!(format_cell(-1.0 / 3.0), "-3.33333333333e-1");
        assert_eq!(format_cell(0.0), "0.00000000000e0");
        assert_eq!(format_cell(-0.0), "0.00000000000e0");
    }

    #[test]
    fn round_trip() {
        let mut t = CsvTable::new("kinematics", &ScenarioConfig::default(), &["a", "b"]);
        t.push(vec![1.5, -2e-30]);
        t.push(vec![3.0, 4.0]);
        let text = t.to_text();
        assert!(text.starts_with("# wiggler "));
        assert!(text.contains("# config_sha256 = "));
        let back = parse_table(&text).unwrap();
        assert_eq!(back.columns, t.columns);
        assert_eq!(back.rows, t.rows);
        assert!(first_difference(&t, &back, 1e-10, 0.0).is_none());
        let mut other = back.clone();
        other.rows[1][1] = 4.0 * (1.0 + 1e-9);
        assert!(first_difference(&t, &other, 1e-10, 0.0).is_some());
    }
}
