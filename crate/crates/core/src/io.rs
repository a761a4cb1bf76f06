//! JSON document plumbing shared by the dataset, polytope and report files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::dataset::DatasetError;
use crate::geometry::{GeometryError, Vector};
use crate::rational::Rational;
use crate::scalar::{Scalar, ScalarMode};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{at}: {message}")]
    Malformed { at: String, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

pub(crate) fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

pub(crate) fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

/// Reads one coordinate under `mode`.
///
/// Rational mode takes `"a/b"` or integer strings and JSON integers; float
/// mode takes JSON numbers only.
pub(crate) fn scalar_from_json(v: &Value, mode: ScalarMode, at: &str) -> Result<Scalar, IoError> {
    let bad = |message: String| IoError::Malformed { at: at.to_string(), message };
    match (mode, v) {
        (ScalarMode::Rational, Value::String(s)) => {
            s.parse::<Rational>().map(Scalar::Exact).map_err(|e| bad(e.to_string()))
        }
        (ScalarMode::Rational, Value::Number(n)) => match n.as_i64() {
            Some(i) => Ok(Scalar::Exact(Rational::from_integer(i))),
            None => Err(bad(format!("non-integer number {n} in rational mode; write it as \"a/b\""))),
        },
        (ScalarMode::Float, Value::Number(n)) => match n.as_f64() {
            Some(x) if x.is_finite() => Ok(Scalar::Float(x)),
            _ => Err(bad(format!("non-finite number {n}"))),
        },
        (ScalarMode::Float, Value::String(s)) => Err(bad(format!("string {s:?} in float mode"))),
        (_, other) => Err(bad(format!("expected a coordinate, got {other}"))),
    }
}

pub(crate) fn vector_from_json(v: &Value, mode: ScalarMode, at: &str) -> Result<Vector, IoError> {
    let Value::Array(items) = v else {
        return Err(IoError::Malformed { at: at.to_string(), message: format!("expected a coordinate list, got {v}") });
    };
    items
        .iter()
        .enumerate()
        .map(|(i, c)| scalar_from_json(c, mode, &format!("{at}[{i}]")))
        .collect::<Result<Vec<_>, _>>()
        .map(Vector::new)
}

/// Parses a bare list of vectors, e.g. a price file.
pub fn vectors_from_json(text: &str, mode: ScalarMode) -> Result<Vec<Vector>, IoError> {
    let raw: Vec<Value> = parse_json(text)?;
    raw.iter().enumerate().map(|(i, v)| vector_from_json(v, mode, &format!("[{i}]"))).collect()
}

pub fn load_vectors(path: &Path, mode: ScalarMode) -> Result<Vec<Vector>, IoError> {
    vectors_from_json(&read_text(path)?, mode)
}
