//! Serialisation of sweep tables and boundary curves.
//!
//! Floats are written in scientific notation with 17 significant digits so
//! that reading a file back reproduces every `f64` bit for bit. Non-finite
//! values are written as `NaN`, `inf` and `-inf` in CSV; JSON has no such
//! literals, so JSON lines carry them as `null` and read them back as `NaN`.

use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sweep::{BoundaryCurve, BoundaryPoint, Branch, Quantity, Row, SweepTable};

pub const TABLE_HEADER: [&str; 6] = ["j", "b", "t", "delta", "quantity", "value"];
pub const BOUNDARY_HEADER: [&str; 3] = ["b", "t_c", "branch"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    JsonLines,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json-lines" => Ok(Format::JsonLines),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

/// Scientific notation with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("not a number: {s:?}")))
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse(format!("{other:?}")),
    }
}

pub fn write_table<W: Write>(table: &SweepTable, format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(table, out),
        Format::JsonLines => write_jsonl(table, out),
    }
}

pub fn read_table<R: Read>(format: Format, input: R) -> Result<SweepTable> {
    match format {
        Format::Csv => read_csv(input),
        Format::JsonLines => read_jsonl(std::io::BufReader::new(input)),
    }
}

/// The `error` column is present only when some row carries a message.
pub fn write_csv<W: Write>(table: &SweepTable, out: W) -> Result<()> {
    let with_error = table.has_errors();
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = TABLE_HEADER.to_vec();
    if with_error {
        header.push("error");
    }
    w.write_record(&header).map_err(csv_err)?;
    for r in &table.rows {
        let mut rec = vec![
            format_f64(r.j),
            format_f64(r.b),
            format_f64(r.t),
            format_f64(r.delta),
            r.quantity.name().to_string(),
            format_f64(r.value),
        ];
        if with_error {
            rec.push(r.error.clone().unwrap_or_default());
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<SweepTable> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers().map_err(csv_err)?.clone();
    let names: Vec<&str> = header.iter().collect();
    if names.len() < 6 || names[..6] != TABLE_HEADER || names.len() > 7 || (names.len() == 7 && names[6] != "error") {
        return Err(Error::Parse(format!("unexpected header {names:?}")));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let error = rec.get(6).filter(|s| !s.is_empty()).map(str::to_string);
        rows.push(Row {
            j: parse_f64(&rec[0])?,
            b: parse_f64(&rec[1])?,
            t: parse_f64(&rec[2])?,
            delta: parse_f64(&rec[3])?,
            quantity: rec[4].parse::<Quantity>()?,
            value: parse_f64(&rec[5])?,
            error,
        });
    }
    Ok(SweepTable { rows })
}

#[derive(Serialize, Deserialize)]
struct JsonRow {
    j: f64,
    b: f64,
    t: f64,
    delta: f64,
    quantity: Quantity,
    value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

pub fn write_jsonl<W: Write>(table: &SweepTable, mut out: W) -> Result<()> {
    for r in &table.rows {
        let row = JsonRow {
            j: r.j,
            b: r.b,
            t: r.t,
            delta: r.delta,
            quantity: r.quantity,
            value: r.value.is_finite().then_some(r.value),
            error: r.error.clone(),
        };
        serde_json::to_writer(&mut out, &row).map_err(|e| Error::Parse(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<SweepTable> {
    let mut rows = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let r: JsonRow = serde_json::from_str(&line).map_err(|e| Error::Parse(e.to_string()))?;
        rows.push(Row {
            j: r.j,
            b: r.b,
            t: r.t,
            delta: r.delta,
            quantity: r.quantity,
            value: r.value.unwrap_or(f64::NAN),
            error: r.error,
        });
    }
    Ok(SweepTable { rows })
}

pub fn write_boundary_csv<W: Write>(curve: &BoundaryCurve, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BOUNDARY_HEADER).map_err(csv_err)?;
    for p in &curve.points {
        w.write_record([format_f64(p.b), format_f64(p.t_c), p.branch.name().to_string()])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_boundary_csv<R: Read>(input: R) -> Result<Vec<BoundaryPoint>> {
    let mut rdr = csv::Reader::from_reader(input);
    if rdr.headers().map_err(csv_err)?.iter().ne(BOUNDARY_HEADER) {
        return Err(Error::Parse("unexpected boundary header".into()));
    }
    rdr.records()
        .map(|rec| {
            let rec = rec.map_err(csv_err)?;
            Ok(BoundaryPoint {
                b: parse_f64(&rec[0])?,
                t_c: parse_f64(&rec[1])?,
                branch: rec[2].parse::<Branch>()?,
            })
        })
        .collect()
}
