//! Dataset files.
//!
//! CSV: header `t,p1,…,pL,x1,…,xL`, one row per observation. JSON: an
//! object `{"prices": [[…]], "bundles": [[…]]}` whose entries are numbers
//! or decimal strings. Entries are kept as text until the numeric mode is
//! known so that exact mode never goes through binary floating point.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use ccei_core::{validate_dataset, Dataset, Exact, Scalar};
use serde_json::value::RawValue;
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    Csv,
    Json,
}

impl InputFormat {
    /// Guesses from the extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => InputFormat::Json,
            _ => InputFormat::Csv,
        }
    }
}

/// Where a bad entry sits. `row` counts observations from 1, `column`
/// counts fields from 1 (CSV) or entries within a row (JSON).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub row: usize,
    pub column: usize,
    pub field: String,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {}, column {} ({})", self.row, self.column, self.field)
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{location}: {message}")]
    At { location: Location, message: String },
    #[error("{0}")]
    Format(String),
}

fn at(row: usize, column: usize, field: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::At {
        location: Location {
            row,
            column,
            field: field.into(),
        },
        message: message.into(),
    }
}

/// Cell text with its position, before numeric conversion.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub text: String,
    pub row: usize,
    pub column: usize,
    pub field: String,
}

/// Prices and bundles as text.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    pub prices: Vec<Vec<Cell>>,
    pub bundles: Vec<Vec<Cell>>,
}

impl RawDataset {
    pub fn observations(&self) -> usize {
        self.prices.len()
    }

    pub fn goods(&self) -> usize {
        self.prices.first().map_or(0, Vec::len)
    }

    fn convert<S: Scalar>(rows: &[Vec<Cell>]) -> Result<Vec<Vec<S>>, ParseError> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|c| {
                        S::parse_decimal(&c.text).map_err(|_| {
                            at(c.row, c.column, &c.field, format!("{:?} is not a number", c.text))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    pub fn parse<S: Scalar>(&self) -> Result<Dataset<S>, LoadError> {
        let prices = Self::convert(&self.prices)?;
        let bundles = Self::convert(&self.bundles)?;
        Ok(validate_dataset(prices, bundles)?)
    }

    /// SHA-256 over the exact values, so that the same numbers written
    /// differently (`0.5`, `.50`, `1/2`) or in either file format share a
    /// fingerprint.
    pub fn fingerprint(&self) -> Result<String, LoadError> {
        let d = self.parse::<Exact>()?;
        let mut h = Sha256::new();
        h.update(format!("{}x{}", d.observations(), d.goods()));
        for t in 0..d.observations() {
            for v in d.price(t).iter().chain(d.bundle(t)) {
                h.update(b",");
                h.update(v.to_string());
            }
            h.update(b";");
        }
        Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("invalid dataset: {0}")]
    Model(#[from] ccei_core::Error),
}

pub fn read_dataset(path: &Path, format: Option<InputFormat>) -> Result<RawDataset, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let parsed = match format.unwrap_or_else(|| InputFormat::from_path(path)) {
        InputFormat::Csv => parse_csv(&text),
        InputFormat::Json => parse_json(&text),
    };
    Ok(parsed?)
}

pub fn parse_csv(text: &str) -> Result<RawDataset, ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| ParseError::Format(format!("header: {e}")))?
        .iter()
        .map(str::to_owned)
        .collect();
    let goods = check_header(&header)?;

    let mut raw = RawDataset {
        prices: Vec::new(),
        bundles: Vec::new(),
    };
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| match e.kind() {
            csv::ErrorKind::UnequalLengths { len, expected_len, .. } => at(
                row,
                (*len as usize).min(*expected_len as usize) + 1,
                "record",
                format!("{len} fields, header has {expected_len}"),
            ),
            _ => ParseError::Format(format!("row {row}: {e}")),
        })?;
        let cell = |column: usize| {
            let text = record.get(column).unwrap_or_default();
            if text.is_empty() {
                return Err(at(row, column + 1, &header[column], "empty field"));
            }
            Ok(Cell {
                text: text.to_owned(),
                row,
                column: column + 1,
                field: header[column].clone(),
            })
        };
        cell(0)?;
        raw.prices.push((1..=goods).map(cell).collect::<Result<_, _>>()?);
        raw.bundles.push((goods + 1..=2 * goods).map(cell).collect::<Result<_, _>>()?);
    }
    if raw.prices.is_empty() {
        return Err(ParseError::Format("no observations after the header".into()));
    }
    Ok(raw)
}

/// Returns the number of goods named by a `t,p1..pL,x1..xL` header.
fn check_header(header: &[String]) -> Result<usize, ParseError> {
    let bad = |msg: String| ParseError::Format(format!("header: {msg}"));
    if header.len() < 3 || header.len().is_multiple_of(2) {
        return Err(bad(format!(
            "expected t,p1..pL,x1..xL, found {} columns",
            header.len()
        )));
    }
    let goods = (header.len() - 1) / 2;
    let expected = std::iter::once("t".to_owned())
        .chain((1..=goods).map(|i| format!("p{i}")))
        .chain((1..=goods).map(|i| format!("x{i}")));
    for (column, (found, want)) in header.iter().zip(expected).enumerate() {
        if !found.eq_ignore_ascii_case(&want) {
            return Err(bad(format!("column {} is {found:?}, expected {want:?}", column + 1)));
        }
    }
    Ok(goods)
}

pub fn parse_json(text: &str) -> Result<RawDataset, ParseError> {
    let obj: HashMap<String, &RawValue> = serde_json::from_str(text).map_err(|e| {
        ParseError::Format(format!("expected an object with prices and bundles: {e}"))
    })?;
    // Raw values keep each number's literal text.
    let matrix = |key: &str| -> Result<Vec<Vec<Cell>>, ParseError> {
        let rows: Vec<&RawValue> = obj
            .get(key)
            .and_then(|v| serde_json::from_str(v.get()).ok())
            .ok_or_else(|| ParseError::Format(format!("missing array {key:?}")))?;
        rows.iter()
            .enumerate()
            .map(|(i, r)| {
                let r: Vec<&RawValue> = serde_json::from_str(r.get())
                    .map_err(|_| at(i + 1, 1, key, "row is not an array"))?;
                r.iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let literal = v.get();
                        let text = match serde_json::from_str::<Value>(literal) {
                            Ok(Value::Number(_)) => literal.to_owned(),
                            Ok(Value::String(s)) => s,
                            _ => return Err(at(i + 1, j + 1, key, "expected a number or decimal string")),
                        };
                        Ok(Cell {
                            text,
                            row: i + 1,
                            column: j + 1,
                            field: key.to_owned(),
                        })
                    })
                    .collect()
            })
            .collect()
    };
    let raw = RawDataset {
        prices: matrix("prices")?,
        bundles: matrix("bundles")?,
    };
    if raw.prices.is_empty() {
        return Err(ParseError::Format("no observations".into()));
    }
    if raw.prices.len() != raw.bundles.len() {
        return Err(ParseError::Format(format!(
            "{} price rows but {} bundle rows",
            raw.prices.len(),
            raw.bundles.len()
        )));
    }
    let goods = raw.goods();
    for (key, rows) in [("prices", &raw.prices), ("bundles", &raw.bundles)] {
        for (i, r) in rows.iter().enumerate() {
            if r.len() != goods {
                return Err(at(
                    i + 1,
                    r.len().min(goods) + 1,
                    key,
                    format!("{} entries, expected {goods}", r.len()),
                ));
            }
        }
    }
    Ok(raw)
}
