use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::Value;

use crate::CliError;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// `%g`-style rendering with nine significant digits and no trailing zeros.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exponent) = sci.split_once('e').unwrap();
    let exponent: i32 = exponent.parse().unwrap();
    if exponent < -4 || exponent >= SIGNIFICANT_DIGITS as i32 {
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exponent.abs())
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// The JSON number carrying exactly the value printed by [`format_real`].
pub fn json_real(x: f64) -> Value {
    format_real(x)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(usize),
    Real(f64),
    Empty,
}

impl Cell {
    pub fn csv(&self) -> String {
        match *self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format_real(x),
            Cell::Empty => String::new(),
        }
    }

    pub fn json(&self) -> Value {
        match *self {
            Cell::Int(i) => Value::from(i),
            Cell::Real(x) => json_real(x),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<Option<usize>> for Cell {
    fn from(i: Option<usize>) -> Self {
        i.map_or(Cell::Empty, Cell::Int)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Real)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Rows as objects keyed by the header.
    pub fn to_json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let object = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(k, c)| (k.clone(), c.json()))
                        .collect();
                    Value::Object(object)
                })
                .collect(),
        )
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    let write = |w: &mut dyn Write| -> io::Result<()> {
        w.write_all(text.as_bytes())?;
        w.flush()
    };
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Usage(format!("--out {}: {e}", path.display())))?;
            write(&mut BufWriter::new(file))
                .map_err(|e| CliError::Usage(format!("--out {}: {e}", path.display())))
        }
        None => write(&mut io::stdout().lock()).map_err(|e| CliError::Usage(format!("stdout: {e}"))),
    }
}
