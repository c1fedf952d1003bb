//! JSON forms of states and observables.
//!
//! Complex entries are `[re, im]` pairs (a bare number is read as real):
//!
//! ```json
//! { "dim1": 2, "dim2": 2, "coeffs": [[[0, 0], [0.7071, 0]], [[-0.7071, 0], [0, 0]]] }
//! { "dim": 2, "matrix": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]], "label": "Z" }
//! ```
//!
//! The non-JSON tokens `NaN`, `Infinity` and `-Infinity` are accepted as
//! numbers so that such files fail validation rather than parsing.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::numerics::{ComplexMatrix, Tolerances, C64};
use crate::tensor::{Observable, PureState};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("malformed JSON: {0}")]
    Parse(String),
    #[error("schema violation in `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("invalid `{field}`: {source}")]
    Invariant {
        field: String,
        #[source]
        source: Error,
    },
}

impl LoadError {
    fn schema(field: &str, message: impl Into<String>) -> Self {
        LoadError::Schema {
            field: field.into(),
            message: message.into(),
        }
    }

    fn invariant(field: &str, source: Error) -> Self {
        LoadError::Invariant {
            field: field.into(),
            source,
        }
    }

    /// Name of the offending field, if any.
    pub fn field(&self) -> Option<&str> {
        match self {
            LoadError::Parse(_) => None,
            LoadError::Schema { field, .. } | LoadError::Invariant { field, .. } => Some(field),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Pair([Number; 2]),
    Real(Number),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Number {
    Finite(f64),
    Special(Special),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
enum Special {
    #[serde(rename = "NaN")]
    NaN,
    #[serde(rename = "Infinity")]
    Infinity,
    #[serde(rename = "-Infinity")]
    NegInfinity,
}

impl Number {
    fn value(self) -> f64 {
        match self {
            Number::Finite(x) => x,
            Number::Special(Special::NaN) => f64::NAN,
            Number::Special(Special::Infinity) => f64::INFINITY,
            Number::Special(Special::NegInfinity) => f64::NEG_INFINITY,
        }
    }
}

impl Entry {
    fn value(self) -> C64 {
        match self {
            Entry::Pair([re, im]) => C64::new(re.value(), im.value()),
            Entry::Real(re) => C64::new(re.value(), 0.0),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dim1: usize,
    pub dim2: usize,
    pub coeffs: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObservableFile {
    pub dim: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Deserialize)]
struct RawState {
    dim1: usize,
    dim2: usize,
    coeffs: Vec<Vec<Entry>>,
}

#[derive(Deserialize)]
struct RawObservable {
    dim: usize,
    matrix: Vec<Vec<Entry>>,
    #[serde(default)]
    label: Option<String>,
}

/// Matrix as rows of `[re, im]`.
pub fn matrix_to_json(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn state_to_file(state: &PureState) -> StateFile {
    let (dim1, dim2) = state.dims();
    StateFile {
        dim1,
        dim2,
        coeffs: matrix_to_json(state.coeffs()),
    }
}

pub fn observable_to_file(obs: &Observable) -> ObservableFile {
    ObservableFile {
        dim: obs.dim(),
        matrix: matrix_to_json(obs.matrix()),
        label: obs.label().map(str::to_owned),
    }
}

/// Quotes bare NaN/Infinity tokens outside string literals.
fn quote_special_tokens(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_string = false;
    let mut escaped = false;
    let mut rest = text;
    while let Some(c) = rest.chars().next() {
        if in_string {
            out.push(c);
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
            }
            rest = &rest[c.len_utf8()..];
            continue;
        }
        if c == '"' {
            in_string = true;
            out.push(c);
            rest = &rest[1..];
            continue;
        }
        let token = ["-Infinity", "Infinity", "NaN"]
            .into_iter()
            .find(|t| rest.starts_with(t));
        match token {
            Some(t) => {
                out.push('"');
                out.push_str(t);
                out.push('"');
                rest = &rest[t.len()..];
            }
            None => {
                out.push(c);
                rest = &rest[c.len_utf8()..];
            }
        }
    }
    out
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, LoadError> {
    let cleaned = quote_special_tokens(text);
    serde_json::from_str(&cleaned).map_err(|e| {
        if e.is_data() {
            LoadError::schema("document", e.to_string())
        } else {
            LoadError::Parse(e.to_string())
        }
    })
}

fn build_matrix(
    field: &str,
    rows: &[Vec<Entry>],
    n_rows: usize,
    n_cols: usize,
) -> Result<ComplexMatrix, LoadError> {
    if n_rows == 0 || n_cols == 0 {
        return Err(LoadError::schema(field, "dimensions must be positive"));
    }
    if rows.len() != n_rows {
        return Err(LoadError::schema(
            field,
            format!("expected {n_rows} rows, found {}", rows.len()),
        ));
    }
    let mut data = Vec::with_capacity(n_rows * n_cols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n_cols {
            return Err(LoadError::schema(
                field,
                format!("row {i} has {} entries, expected {n_cols}", row.len()),
            ));
        }
        data.extend(row.iter().map(|e| e.value()));
    }
    ComplexMatrix::from_vec(n_rows, n_cols, data).map_err(|e| LoadError::invariant(field, e))
}

/// Parses and validates a state; it must be normalized.
pub fn state_from_json(text: &str) -> Result<PureState, LoadError> {
    let raw: RawState = parse_json(text)?;
    let coeffs = build_matrix("coeffs", &raw.coeffs, raw.dim1, raw.dim2)?;
    let state = PureState::new(coeffs).map_err(|e| LoadError::invariant("coeffs", e))?;
    state
        .ensure_normalized()
        .map_err(|e| LoadError::invariant("coeffs", e))?;
    Ok(state)
}

/// Parses and validates a Hermitian observable.
pub fn observable_from_json(text: &str, tol: &Tolerances) -> Result<Observable, LoadError> {
    let raw: RawObservable = parse_json(text)?;
    let m = build_matrix("matrix", &raw.matrix, raw.dim, raw.dim)?;
    let obs = Observable::from_matrix(m, tol).map_err(|e| LoadError::invariant("matrix", e))?;
    Ok(match raw.label {
        Some(l) => obs.with_label(l),
        None => obs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BOHM: &str = r#"{"dim1": 2, "dim2": 2,
        "coeffs": [[[0, 0], [0.7071067811865476, 0]], [[-0.7071067811865476, 0], [0, 0]]]}"#;

    #[test]
    fn loads_state() {
        let s = state_from_json(BOHM).unwrap();
        assert_eq!(s.dims(), (2, 2));
        let back = serde_json::to_string(&state_to_file(&s)).unwrap();
        let again = state_from_json(&back).unwrap();
        assert_eq!(again.coeffs(), s.coeffs());
    }

    #[test]
    fn real_shorthand() {
        let s = state_from_json(r#"{"dim1":1,"dim2":2,"coeffs":[[0.6, [0, 0.8]]]}"#).unwrap();
        assert_eq!(s.coeffs()[(0, 1)], C64::new(0.0, 0.8));
    }

    #[test]
    fn nan_is_an_invariant_error() {
        let text = r#"{"dim": 2, "matrix": [[[NaN, 0], [0, 0]], [[0, 0], [1, 0]]]}"#;
        let err = observable_from_json(text, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, LoadError::Invariant { ref source, .. } if *source == Error::NonFinite));
        assert_eq!(err.field(), Some("matrix"));
    }

    #[test]
    fn non_hermitian_names_hermiticity() {
        let text = r#"{"dim": 2, "matrix": [[[1, 0], [0.1, 0]], [[0, 0], [1, 0]]]}"#;
        let err = observable_from_json(text, &Tolerances::default()).unwrap_err();
        assert!(matches!(
            err,
            LoadError::Invariant {
                source: Error::NotHermitian(_),
                ..
            }
        ));
        assert!(err.to_string().contains("Hermitian"));
    }

    #[test]
    fn schema_and_parse_errors() {
        assert!(matches!(state_from_json("{"), Err(LoadError::Parse(_))));
        assert!(matches!(
            state_from_json(r#"{"dim1": 2, "dim2": 2, "coeffs": [[[1, 0], [0, 0]]]}"#),
            Err(LoadError::Schema { .. })
        ));
        assert!(matches!(
            state_from_json(r#"{"dim1": 1, "coeffs": []}"#),
            Err(LoadError::Schema { .. })
        ));
        assert!(matches!(
            state_from_json(r#"{"dim1": 1, "dim2": 1, "coeffs": [[[2, 0]]]}"#),
            Err(LoadError::Invariant {
                source: Error::NotNormalized(_),
                ..
            })
        ));
    }

    #[test]
    fn tokens_inside_strings_are_untouched() {
        let text = r#"{"dim": 1, "matrix": [[[1, 0]]], "label": "NaN"}"#;
        let obs = observable_from_json(text, &Tolerances::default()).unwrap();
        assert_eq!(obs.label(), Some("NaN"));
    }
}
