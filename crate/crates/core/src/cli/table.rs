use std::io::Write;

use serde_json::{Map, Value};

use super::{CliError, Format};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
    Bool(bool),
}

impl Cell {
    /// Shortest representation that parses back to the same `f64`.
    fn text(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:?}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => Value::from(*x),
            Cell::Num(x) => Value::from(format!("{x:?}")),
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Rows in insertion order under a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    /// A two-column `quantity,value` table.
    pub fn key_value() -> Self {
        Table::new(&["quantity", "value"])
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn entry(&mut self, key: impl Into<String>, value: impl Into<Cell>) {
        self.push(vec![Cell::Text(key.into()), value.into()]);
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    fn is_key_value(&self) -> bool {
        self.columns == ["quantity", "value"]
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Key-value tables become one object, others an array of row objects.
    pub fn to_json(&self) -> Value {
        if self.is_key_value() {
            let mut obj = Map::new();
            for row in &self.rows {
                obj.insert(row[0].text(), row[1].json());
            }
            return Value::Object(obj);
        }
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn write<W: Write>(&self, format: Format, mut out: W) -> Result<(), CliError> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json())?;
                writeln!(out)?;
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_floats() {
        let mut t = Table::new(&["value", "probability"]);
        t.push(vec![Cell::Num(-2.0), Cell::Num(0.1 + 0.2)]);
        t.push(vec![Cell::Text("a,b".into()), Cell::Num(f64::INFINITY)]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "value,probability\n-2.0,0.30000000000000004\n\"a,b\",inf\n");
    }

    #[test]
    fn json_shapes() {
        let mut kv = Table::key_value();
        kv.entry("cp", true);
        kv.entry("min", -1.0);
        assert_eq!(kv.to_json(), serde_json::json!({"cp": true, "min": -1.0}));
        let mut t = Table::new(&["n", "x"]);
        t.push(vec![Cell::Int(3), Cell::Num(f64::NAN)]);
        assert_eq!(t.to_json(), serde_json::json!([{"n": 3, "x": "NaN"}]));
    }
}
