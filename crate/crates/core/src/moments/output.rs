//! CSV and JSON writers. Both formats come from the same cells, so the JSON
//! objects carry exactly the CSV columns.

use std::io::Write;

use serde_json::{Map, Number, Value};

use super::campaign::CampaignRow;
use super::report::{EkRow, MomentRow, TuranReport};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

/// Floats print with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => match i64::try_from(*v) {
                Ok(v) => Value::from(v),
                Err(_) => Value::String(v.to_string()),
            },
            Cell::Float(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

/// A row type with a fixed column list.
pub trait Table {
    const HEADER: &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
}

impl Table for MomentRow {
    const HEADER: &'static [&'static str] = &[
        "X",
        "sum_X",
        "sum_Y",
        "sqfree_count",
        "frac_trivial_X",
        "frac_trivial_Y",
        "reference",
    ];

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Int(self.x as i128),
            Cell::Int(self.sum_x as i128),
            Cell::Int(self.sum_y as i128),
            Cell::Int(self.sqfree_count as i128),
            Cell::Float(self.frac_trivial_x),
            Cell::Float(self.frac_trivial_y),
            Cell::Float(self.reference),
        ]
    }
}

impl Table for CampaignRow {
    const HEADER: &'static [&'static str] = &[
        "n",
        "delta_n",
        "omega_inert",
        "predicted",
        "generic_x",
        "generic_y",
        "oracle_rk4",
        "oracle_status",
        "agree",
    ];

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Int(self.n as i128),
            Cell::Int(self.delta_n as i128),
            Cell::Int(self.omega_inert as i128),
            Cell::Int(self.predicted as i128),
            Cell::Bool(self.generic_x),
            Cell::Bool(self.generic_y),
            self.oracle_rk4
                .map_or(Cell::Empty, |v| Cell::Int(v as i128)),
            Cell::Text(self.oracle_status.to_string()),
            self.agree.map_or(Cell::Empty, Cell::Bool),
        ]
    }
}

impl Table for EkRow {
    const HEADER: &'static [&'static str] = &["z", "F_emp", "Phi"];

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Float(self.z),
            Cell::Float(self.f_emp),
            Cell::Float(self.phi),
        ]
    }
}

impl Table for TuranReport {
    const HEADER: &'static [&'static str] = &[
        "X",
        "sum_first",
        "sum_second",
        "first_moment",
        "second_moment",
        "variance",
        "reference_first",
        "reference_second",
    ];

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Int(self.x as i128),
            Cell::Int(self.sum_first as i128),
            Cell::Int(self.sum_second as i128),
            Cell::Float(self.first_moment),
            Cell::Float(self.second_moment),
            Cell::Float(self.variance),
            Cell::Float(self.reference_first),
            Cell::Float(self.reference_second),
        ]
    }
}

pub fn write_csv<T: Table, W: Write>(rows: &[T], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(T::HEADER)?;
    for r in rows {
        out.write_record(r.cells().iter().map(Cell::csv))?;
    }
    out.flush()?;
    Ok(())
}

pub fn to_json<T: Table>(rows: &[T]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                let obj: Map<String, Value> = T::HEADER
                    .iter()
                    .zip(r.cells())
                    .map(|(k, c)| (k.to_string(), c.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect(),
    )
}

pub fn write_json<T: Table, W: Write>(rows: &[T], mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, &to_json(rows))
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    writeln!(w)?;
    Ok(())
}

/// Renders rows as a CSV string.
pub fn csv_string<T: Table>(rows: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}
