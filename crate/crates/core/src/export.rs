//! CSV and JSON writers. Every real is printed with 17 significant digits so
//! files round-trip bit-exactly and can serve as golden files.

use std::io::Write;

use serde::Serialize;
use serde_json::value::RawValue;

use crate::analysis::KinkReport;
use crate::construction::{solve_contact, SolverSettings};
use crate::error::{Error, Result};
use crate::oracle::{FieldGrid, GridSpec};
use crate::par::{try_map_range, Execution};
use crate::params::AdmissibleProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    /// A single JSON document.
    Structured,
}

/// 17 significant digits in scientific notation; valid as a JSON number.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn raw(x: f64) -> Result<Box<RawValue>> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("cannot export non-finite value {x}")));
    }
    Ok(RawValue::from_string(fmt_real(x)).expect("formatted real is valid JSON"))
}

fn write_csv<W: Write + ?Sized>(out: &mut W, header: &str, rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    writeln!(out, "{header}")?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

fn write_json<W: Write + ?Sized, T: Serialize>(out: &mut W, doc: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, doc).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct GridDoc<'a> {
    provenance: &'a str,
    delta: Box<RawValue>,
    grid: SpecDoc,
    samples: Vec<GridRow>,
}

#[derive(Serialize)]
struct SpecDoc {
    xmin: Box<RawValue>,
    xmax: Box<RawValue>,
    nx: usize,
    nd: usize,
    h_y: Box<RawValue>,
    margin: Box<RawValue>,
}

impl SpecDoc {
    fn new(spec: &GridSpec) -> Result<Self> {
        Ok(Self {
            xmin: raw(spec.xmin)?,
            xmax: raw(spec.xmax)?,
            nx: spec.nx,
            nd: spec.nd,
            h_y: raw(spec.h_y)?,
            margin: raw(spec.margin)?,
        })
    }
}

#[derive(Serialize)]
struct GridRow {
    x: Box<RawValue>,
    d: Box<RawValue>,
    u: Box<RawValue>,
}

fn grid_doc(grid: &FieldGrid) -> Result<GridDoc<'_>> {
    let samples = grid
        .rows()
        .map(|(x, d, u)| {
            Ok(GridRow {
                x: raw(x)?,
                d: raw(d)?,
                u: raw(u)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridDoc {
        provenance: grid.provenance.as_str(),
        delta: raw(grid.delta)?,
        grid: SpecDoc::new(&grid.spec)?,
        samples,
    })
}

/// Writes field grids: CSV header `x,d,u,provenance` with each grid's rows in
/// storage order, or one JSON document `{"grids": [...]}`.
pub fn write_field_grids<W: Write + ?Sized>(out: &mut W, grids: &[FieldGrid], format: Format) -> Result<()> {
    if grids.iter().any(|g| g.values.iter().any(|v| !v.is_finite())) {
        return Err(Error::Domain("field grid holds non-finite values".into()));
    }
    match format {
        Format::Csv => write_csv(
            out,
            "x,d,u,provenance",
            grids.iter().flat_map(|g| {
                let tag = g.provenance.as_str();
                g.rows()
                    .map(move |(x, d, u)| vec![fmt_real(x), fmt_real(d), fmt_real(u), tag.to_string()])
            }),
        ),
        Format::Structured => {
            let docs = grids.iter().map(grid_doc).collect::<Result<Vec<_>>>()?;
            write_json(out, &serde_json::json!({ "grids": docs }))
        }
    }
}

pub const KINK_COLUMNS: &str =
    "y0,x0,fpp_minus,fpp_plus,upp_minus_pred,upp_plus_pred,upp_minus_fd,upp_plus_fd,denom_minus,denom_plus";

fn kink_fields(r: &KinkReport) -> [f64; 10] {
    [
        r.y0,
        r.x0,
        r.fpp_minus,
        r.fpp_plus,
        r.upp_minus_pred,
        r.upp_plus_pred,
        r.upp_minus_fd,
        r.upp_plus_fd,
        r.denom_minus,
        r.denom_plus,
    ]
}

pub fn write_kink_reports<W: Write + ?Sized>(out: &mut W, reports: &[KinkReport], format: Format) -> Result<()> {
    match format {
        Format::Csv => write_csv(
            out,
            KINK_COLUMNS,
            reports
                .iter()
                .map(|r| kink_fields(r).iter().map(|&v| fmt_real(v)).collect()),
        ),
        Format::Structured => {
            let names: Vec<&str> = KINK_COLUMNS.split(',').collect();
            let docs = reports
                .iter()
                .map(|r| {
                    names
                        .iter()
                        .zip(kink_fields(r))
                        .map(|(&k, v)| Ok((k, raw(v)?)))
                        .collect::<Result<std::collections::BTreeMap<_, _>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            write_json(out, &serde_json::json!({ "kinks": docs }))
        }
    }
}

/// One sample of the construction on the top edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopSample {
    pub x: f64,
    pub y: f64,
    pub offset: f64,
    pub u: f64,
    pub u_prime: f64,
}

/// Samples contact point, offset, `u` and `u'` at `n` evenly spaced points of
/// `[xmin, xmax]` on the top edge.
pub fn top_samples(
    problem: &AdmissibleProblem,
    xmin: f64,
    xmax: f64,
    n: usize,
    settings: SolverSettings,
    exec: Execution,
) -> Result<Vec<TopSample>> {
    let spec = GridSpec {
        xmin,
        xmax,
        nx: n,
        nd: 2,
        h_y: 1.0,
        margin: 0.0,
    };
    spec.validate()?;
    let delta = problem.delta();
    try_map_range(n, exec, |i| {
        let s = solve_contact(spec.x(i), delta, problem, settings.tol, settings.max_iter)?;
        Ok(TopSample {
            x: s.x,
            y: s.y,
            offset: s.offset,
            u: s.value,
            u_prime: problem.spline().derivative(s.y),
        })
    })
}

#[derive(Serialize)]
struct TopRow {
    x: Box<RawValue>,
    y: Box<RawValue>,
    #[serde(rename = "Y")]
    offset: Box<RawValue>,
    u: Box<RawValue>,
    u_prime: Box<RawValue>,
}

/// CSV header `x,y,Y,u,u_prime`.
pub fn write_top_samples<W: Write + ?Sized>(out: &mut W, samples: &[TopSample], format: Format) -> Result<()> {
    match format {
        Format::Csv => write_csv(
            out,
            "x,y,Y,u,u_prime",
            samples.iter().map(|s| {
                [s.x, s.y, s.offset, s.u, s.u_prime]
                    .iter()
                    .map(|&v| fmt_real(v))
                    .collect()
            }),
        ),
        Format::Structured => {
            let rows = samples
                .iter()
                .map(|s| {
                    Ok(TopRow {
                        x: raw(s.x)?,
                        y: raw(s.y)?,
                        offset: raw(s.offset)?,
                        u: raw(s.u)?,
                        u_prime: raw(s.u_prime)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            write_json(out, &serde_json::json!({ "samples": rows }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_real(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_real(-2.0), "-2.0000000000000000e0");
        for x in [0.1, 1.0 / 3.0, -1e-300, 123456.789] {
            assert_eq!(fmt_real(x).parse::<f64>().unwrap(), x);
            let v: serde_json::Value = serde_json::from_str(&fmt_real(x)).unwrap();
            assert_eq!(v.as_f64().unwrap(), x);
        }
    }

    #[test]
    fn non_finite_is_refused() {
        assert!(raw(f64::NAN).is_err());
    }
}
