//! CSV polyline format: header `t,x1,...,xd`, one row per sample, 17
//! significant digits. Tangents go to a sidecar with header
//! `t,right_1,...,right_d,left_1,...,left_d`.

use std::io::{Read, Write};

use super::SampledCurve;
use crate::error::{EelError, Result};

/// Shortest notation that still round-trips every f64 bit for bit.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_err(line: u64, message: impl Into<String>) -> EelError {
    EelError::Parse { line, message: message.into() }
}

fn csv_err(e: csv::Error) -> EelError {
    let line = e.position().map_or(0, |p| p.line());
    match e.kind() {
        csv::ErrorKind::Io(_) => match e.into_kind() {
            csv::ErrorKind::Io(io) => EelError::Io(io),
            _ => unreachable!(),
        },
        _ => parse_err(line, e.to_string()),
    }
}

fn write_rows<W: Write>(w: W, header: Vec<String>, rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    out.write_record(&header).map_err(csv_err)?;
    for row in rows {
        out.write_record(row.into_iter().map(fmt)).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_csv<W: Write>(c: &SampledCurve, w: W) -> Result<()> {
    let mut header = vec!["t".to_string()];
    header.extend((1..=c.dim()).map(|k| format!("x{k}")));
    write_rows(w, header, (0..c.len()).map(|i| std::iter::once(c.param(i)).chain(c.point(i).iter().copied()).collect()))
}

/// Writes the tangent sidecar. Fails when the curve carries no tangents.
pub fn write_tangents_csv<W: Write>(c: &SampledCurve, w: W) -> Result<()> {
    if !c.has_tangents() {
        return Err(EelError::Domain("curve has no tangents to write".into()));
    }
    let d = c.dim();
    let mut header = vec!["t".to_string()];
    header.extend((1..=d).map(|k| format!("right_{k}")));
    header.extend((1..=d).map(|k| format!("left_{k}")));
    write_rows(
        w,
        header,
        (0..c.len()).map(|i| {
            std::iter::once(c.param(i))
                .chain(c.right_tangent(i).unwrap().iter().copied())
                .chain(c.left_tangent(i).unwrap().iter().copied())
                .collect()
        }),
    )
}

type Rows = Vec<(u64, Vec<f64>)>;

/// Reads rows of floats, returning the header and `(line, values)` rows.
fn read_rows<R: Read>(r: R) -> Result<(Vec<String>, Rows)> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(|s| s.trim().to_string()).collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        let mut vals = Vec::with_capacity(rec.len());
        for (k, field) in rec.iter().enumerate() {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| parse_err(line, format!("column {} is not a number: {field:?}", k + 1)))?;
            if !v.is_finite() {
                return Err(parse_err(line, format!("column {} is not finite", k + 1)));
            }
            vals.push(v);
        }
        rows.push((line, vals));
    }
    Ok((header, rows))
}

pub fn read_csv<R: Read>(r: R) -> Result<SampledCurve> {
    let (header, rows) = read_rows(r)?;
    let d = header.len().saturating_sub(1);
    let expected: Vec<String> = std::iter::once("t".to_string()).chain((1..=d).map(|k| format!("x{k}"))).collect();
    if header != expected || d < 2 {
        return Err(parse_err(1, format!("expected header t,x1,...,xd with d >= 2, got {}", header.join(","))));
    }
    if rows.is_empty() {
        return Err(parse_err(2, "no samples"));
    }
    let mut params = Vec::with_capacity(rows.len());
    let mut coords = Vec::with_capacity(rows.len() * d);
    for (line, vals) in rows {
        if let Some(&prev) = params.last() {
            if vals[0] <= prev {
                return Err(parse_err(line, format!("parameter {} does not exceed {prev}", vals[0])));
            }
        }
        params.push(vals[0]);
        coords.extend_from_slice(&vals[1..]);
    }
    SampledCurve::from_flat(params, coords, d)
}

/// Reads a tangent sidecar and attaches it to `c`.
pub fn read_tangents_csv<R: Read>(r: R, c: SampledCurve) -> Result<SampledCurve> {
    let (header, rows) = read_rows(r)?;
    let d = c.dim();
    let mut expected = vec!["t".to_string()];
    expected.extend((1..=d).map(|k| format!("right_{k}")));
    expected.extend((1..=d).map(|k| format!("left_{k}")));
    if header != expected {
        return Err(parse_err(1, format!("expected tangent header {}", expected.join(","))));
    }
    if rows.len() != c.len() {
        return Err(parse_err(
            rows.last().map_or(1, |r| r.0),
            format!("{} tangent rows for {} samples", rows.len(), c.len()),
        ));
    }
    let mut right = Vec::with_capacity(c.len() * d);
    let mut left = Vec::with_capacity(c.len() * d);
    for (i, (line, vals)) in rows.into_iter().enumerate() {
        if vals[0] != c.param(i) {
            return Err(parse_err(line, format!("parameter {} does not match sample {i}", vals[0])));
        }
        right.extend_from_slice(&vals[1..=d]);
        left.extend_from_slice(&vals[d + 1..]);
    }
    c.with_tangents(right, left)
}
