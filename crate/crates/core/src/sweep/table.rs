use std::io::Write;
use std::str::FromStr;

use serde_json::{Map, Number, Value as Json};

use crate::error::{Error, Result};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Number(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }

    /// Numbers use nine significant digits in scientific notation.
    pub fn render(&self) -> String {
        match self {
            Cell::Number(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
        }
    }
}

pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.8e}")
    }
}

/// Rows of named, unit-suffixed columns in a fixed order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column, `None` for text cells.
    pub fn values(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.column(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    /// Keeps only the named columns, in table order.
    pub fn select(&self, keep: &[String]) -> Result<Table> {
        for k in keep {
            if self.column(k).is_none() {
                return Err(Error::Sweep(format!("unknown output column `{k}`")));
            }
        }
        let idx: Vec<usize> =
            (0..self.columns.len()).filter(|&i| keep.contains(&self.columns[i])).collect();
        Ok(Table {
            columns: idx.iter().map(|&i| self.columns[i].clone()).collect(),
            rows: self.rows.iter().map(|r| idx.iter().map(|&i| r[i].clone()).collect()).collect(),
        })
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()
    }

    /// Array of row objects keyed by column name. Numbers are rounded to nine
    /// significant digits; non-finite values become `null`.
    pub fn to_json(&self) -> Json {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Cell::Text(s) => Json::String(s.clone()),
                        Cell::Number(x) => format_number(*x)
                            .parse::<f64>()
                            .ok()
                            .and_then(Number::from_f64)
                            .map_or(Json::Null, Json::Number),
                    };
                    obj.insert(name.clone(), v);
                }
                Json::Object(obj)
            })
            .collect();
        Json::Array(rows)
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        writeln!(out)?;
        out.flush()
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    /// Parses CSV written by [`Table::write_csv`].
    pub fn parse_csv(text: &str) -> Result<Table> {
        let invalid = |e: csv::Error| Error::Sweep(format!("invalid CSV: {e}"));
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let columns: Vec<String> = r.headers().map_err(invalid)?.iter().map(str::to_owned).collect();
        let mut rows = Vec::new();
        for record in r.records() {
            let row = record
                .map_err(invalid)?
                .iter()
                .map(|s| match s.parse::<f64>() {
                    Ok(x) => Cell::Number(x),
                    Err(_) => Cell::Text(s.to_owned()),
                })
                .collect();
            rows.push(row);
        }
        Ok(Table { columns, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(vec!["mode".into(), "x_m".into(), "y".into()]);
        t.rows.push(vec![Cell::Text("split".into()), Cell::Number(1.0 / 3.0), Cell::Number(-2.5e-7)]);
        t.rows.push(vec![Cell::Text("conventional".into()), Cell::Number(12345.678901234), Cell::Number(0.0)]);
        t
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_number(1.0 / 3.0), "3.33333333e-1");
        assert_eq!(format_number(12345.678901234), "1.23456789e4");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    #[test]
    fn csv_round_trip() {
        let t = sample();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        let back = Table::parse_csv(&text).unwrap();
        let mut again = Vec::new();
        back.write_csv(&mut again).unwrap();
        assert_eq!(text.as_bytes(), &again[..]);
    }

    #[test]
    fn json_keys_follow_header() {
        let t = sample();
        let json = t.to_json();
        let rows = json.as_array().unwrap();
        assert_eq!(rows.len(), 2);
        let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
        assert_eq!(keys, t.columns.iter().collect::<Vec<_>>());
        assert_eq!(rows[0]["x_m"].as_f64().unwrap(), 0.333333333);
    }

    #[test]
    fn select_checks_names() {
        let t = sample();
        assert!(t.select(&["nope".into()]).is_err());
        let s = t.select(&["y".into(), "mode".into()]).unwrap();
        assert_eq!(s.columns, vec!["mode", "y"]);
    }
}
