//! JSON and CSV encodings for operators and reports.

use std::io::Write;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::operator::Operator;

/// Significant digits kept when floats are written out.
pub const SIGNIFICANT_DIGITS: usize = 15;

/// `{dim, re, im, label?}` with row-major nested arrays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl From<&Operator> for OperatorJson {
    fn from(op: &Operator) -> Self {
        let n = op.dim();
        let rows = |f: fn(C64) -> f64| (0..n).map(|i| (0..n).map(|j| f(op.get(i, j))).collect()).collect();
        Self {
            dim: n,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
            label: op.label().map(str::to_string),
        }
    }
}

impl TryFrom<OperatorJson> for Operator {
    type Error = Error;

    fn try_from(j: OperatorJson) -> Result<Self> {
        let n = j.dim;
        let rows_ok = |m: &Vec<Vec<f64>>| m.len() == n && m.iter().all(|r| r.len() == n);
        if !rows_ok(&j.re) {
            return Err(Error::DimensionMismatch { expected: n, found: j.re.len() });
        }
        if !rows_ok(&j.im) {
            return Err(Error::DimensionMismatch { expected: n, found: j.im.len() });
        }
        let mat = nalgebra::DMatrix::from_fn(n, n, |r, c| C64::new(j.re[r][c], j.im[r][c]));
        let op = Operator::new(mat)?;
        Ok(match j.label {
            Some(l) => op.with_label(l),
            None => op,
        })
    }
}

/// Complex number as `{re, im}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexJson {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for C64 {
    fn from(z: ComplexJson) -> Self {
        C64::new(z.re, z.im)
    }
}

pub fn operator_from_json(text: &str) -> Result<Operator> {
    let j: OperatorJson = serde_json::from_str(text)?;
    j.try_into()
}

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Rounds every float in a JSON tree in place.
pub fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with floats rounded to [`SIGNIFICANT_DIGITS`].
pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_value(&mut v);
    Ok(serde_json::to_string_pretty(&v)?)
}

fn fmt_float(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

/// Row-major CSV, one `"re,im"` cell per entry.
pub fn write_operator_csv<W: Write>(op: &Operator, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for i in 0..op.dim() {
        let row: Vec<String> = (0..op.dim())
            .map(|j| {
                let z = op.get(i, j);
                format!("{},{}", fmt_float(z.re), fmt_float(z.im))
            })
            .collect();
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_operator_csv(text: &str) -> Result<Operator> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|cell| {
                let (re, im) = cell.split_once(',').ok_or_else(|| Error::Parse(cell.to_string()))?;
                let p = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Parse(cell.to_string()));
                Ok(C64::new(p(re)?, p(im)?))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
    }
    Operator::new(nalgebra::DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// Generic CSV writer for flat records.
pub fn write_records_csv<W: Write, T: Serialize>(records: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
