//! CSV exchange: comma separated, `.` decimal point, LF line endings, every
//! number written with 17 significant digits so doubles round-trip exactly.

use crate::error::{Error, Result};
use crate::hermite::DrawableRegion;
use crate::pseudospiral::{CurveSample, SampledCurve};
use crate::qi3d::QiSample;

pub const CURVE_HEADER: &str = "s,x,y,theta,kappa";
pub const CURVE3D_HEADER: &str = "s,x,y,z,tx,ty,tz";
pub const REGION_HEADER: &str = "lambda,psi";

/// 17 significant digits in scientific notation.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_rows<const N: usize>(header: &str, rows: impl Iterator<Item = [f64; N]>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| format_number(*v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn read_rows<const N: usize>(text: &str, header: &str) -> Result<Vec<[f64; N]>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let found = rdr.headers().map_err(|e| Error::Csv(e.to_string()))?;
    let expected: Vec<&str> = header.split(',').collect();
    if found.iter().map(str::trim).collect::<Vec<_>>() != expected {
        return Err(Error::Csv(format!("expected header `{header}`")));
    }
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Csv(e.to_string()))?;
        if rec.len() != N {
            return Err(Error::Csv(format!("row {} has {} fields, expected {N}", line + 1, rec.len())));
        }
        let mut row = [0.0; N];
        for (k, field) in rec.iter().enumerate() {
            row[k] = field
                .trim()
                .parse()
                .map_err(|_| Error::Csv(format!("row {}: `{field}` is not a number", line + 1)))?;
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn export_csv(curve: &SampledCurve) -> Result<String> {
    if curve.is_empty() {
        return Err(Error::EmptyInput("curve has no samples".into()));
    }
    Ok(write_rows(
        CURVE_HEADER,
        curve.samples.iter().map(|c| [c.s, c.x, c.y, c.theta, c.kappa]),
    ))
}

pub fn export_csv_3d(samples: &[QiSample]) -> Result<String> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("no 3D samples".into()));
    }
    Ok(write_rows(
        CURVE3D_HEADER,
        samples.iter().map(|q| {
            [q.s, q.point[0], q.point[1], q.point[2], q.tangent[0], q.tangent[1], q.tangent[2]]
        }),
    ))
}

pub fn export_region_csv(region: &DrawableRegion) -> String {
    write_rows(REGION_HEADER, region.boundary_samples.iter().map(|&(l, p)| [l, p]))
}

/// Reads a planar curve written by [`export_csv`].
pub fn parse_csv(text: &str) -> Result<SampledCurve> {
    let rows = read_rows::<5>(text, CURVE_HEADER)?;
    SampledCurve::from_samples(
        rows.into_iter()
            .map(|[s, x, y, theta, kappa]| CurveSample { s, x, y, theta, kappa })
            .collect(),
    )
}

pub fn parse_csv_3d(text: &str) -> Result<Vec<QiSample>> {
    let rows = read_rows::<7>(text, CURVE3D_HEADER)?;
    if rows.is_empty() {
        return Err(Error::EmptyInput("no 3D samples".into()));
    }
    Ok(rows
        .into_iter()
        .map(|r| QiSample {
            s: r[0],
            point: [r[1], r[2], r[3]],
            tangent: [r[4], r[5], r[6]],
        })
        .collect())
}
