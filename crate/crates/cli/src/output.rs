//! CSV and JSON serialization of flat records.
//!
//! Non-integral floats are written with 17 significant digits so that every
//! `f64` survives a round trip; integral floats below 2^53 are written
//! without a fractional part. Non-finite floats become `null` in JSON and
//! `NaN`, `inf` or `-inf` in CSV.

use std::io::Write;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    UInt(u64),
    Float(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::UInt(v)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Float(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(v: Option<T>) -> Self {
        v.map_or(Field::Null, Into::into)
    }
}

/// A row with a fixed schema.
pub trait Record {
    const COLUMNS: &'static [&'static str];
    fn values(&self) -> Vec<Field>;
}

const EXACT_INT_LIMIT: f64 = 9_007_199_254_740_992.0;

/// Finite float text: integral values without a fraction, others in
/// scientific notation with 17 significant digits.
pub fn format_float(v: f64) -> String {
    debug_assert!(v.is_finite());
    if v.fract() == 0.0 && v.abs() < EXACT_INT_LIMIT {
        format!("{}", v as i64)
    } else {
        format!("{v:.16e}")
    }
}

fn csv_text(f: &Field) -> String {
    match f {
        Field::UInt(v) => v.to_string(),
        Field::Float(v) if v.is_nan() => "NaN".into(),
        Field::Float(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
        Field::Float(v) => format_float(*v),
        Field::Text(s) => s.clone(),
        Field::Bool(b) => b.to_string(),
        Field::Null => String::new(),
    }
}

fn json_text(f: &Field) -> String {
    match f {
        Field::UInt(v) => v.to_string(),
        Field::Float(v) if !v.is_finite() => "null".into(),
        Field::Float(v) => format_float(*v),
        Field::Text(s) => serde_json::to_string(s).expect("string serialization"),
        Field::Bool(b) => b.to_string(),
        Field::Null => "null".into(),
    }
}

pub fn write_csv<R: Record>(records: &[R], out: &mut dyn Write) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(R::COLUMNS)?;
    for r in records {
        let values = r.values();
        debug_assert_eq!(values.len(), R::COLUMNS.len());
        w.write_record(values.iter().map(csv_text))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<R: Record>(records: &[R], out: &mut dyn Write) -> CliResult<()> {
    if records.is_empty() {
        writeln!(out, "[]")?;
        return Ok(());
    }
    writeln!(out, "[")?;
    for (k, r) in records.iter().enumerate() {
        let body: Vec<String> = R::COLUMNS
            .iter()
            .zip(r.values())
            .map(|(c, v)| format!("{}: {}", serde_json::to_string(c).expect("key"), json_text(&v)))
            .collect();
        let sep = if k + 1 == records.len() { "" } else { "," };
        writeln!(out, "  {{{}}}{sep}", body.join(", "))?;
    }
    writeln!(out, "]")?;
    Ok(())
}

pub fn emit_records<R: Record>(records: &[R], format: Format, out: &mut dyn Write) -> CliResult<()> {
    match format {
        Format::Csv => write_csv(records, out),
        Format::Json => write_json(records, out),
    }
}

/// Header and rows of a CSV document as strings.
pub fn read_csv(text: &str) -> CliResult<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers()?.iter().map(str::to_string).collect();
    let rows =
        r.records().map(|row| row.map(|row| row.iter().map(str::to_string).collect())).collect::<Result<_, _>>()?;
    Ok((header, rows))
}

/// The objects of a JSON array document.
pub fn read_json(text: &str) -> CliResult<Vec<serde_json::Map<String, serde_json::Value>>> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    match v {
        serde_json::Value::Array(items) => items
            .into_iter()
            .map(|item| match item {
                serde_json::Value::Object(m) => Ok(m),
                other => Err(CliError::Parse(format!("expected an object, got {other}"))),
            })
            .collect(),
        other => Err(CliError::Parse(format!("expected an array, got {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Row(u64, f64, &'static str);

    impl Record for Row {
        const COLUMNS: &'static [&'static str] = &["n", "v", "s"];
        fn values(&self) -> Vec<Field> {
            vec![self.0.into(), self.1.into(), self.2.into()]
        }
    }

    #[test]
    fn float_text() {
        assert_eq!(format_float(5.0), "5");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(1e300), "1.0000000000000001e300");
        for v in [0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 123456.789] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn empty_csv_is_header_only() {
        let mut buf = Vec::new();
        write_csv::<Row>(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,v,s\n");
        let mut buf = Vec::new();
        write_json::<Row>(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "[]\n");
    }

    #[test]
    fn json_shape() {
        let mut buf = Vec::new();
        write_json(&[Row(3, 0.5, "a\"b"), Row(4, f64::NAN, "")], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let objs = read_json(&text).unwrap();
        assert_eq!(objs.len(), 2);
        assert_eq!(objs[0]["n"], 3);
        assert_eq!(objs[0]["s"], "a\"b");
        assert!(objs[1]["v"].is_null());
    }
}
