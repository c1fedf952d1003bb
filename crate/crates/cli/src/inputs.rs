use std::f64::consts::FRAC_1_SQRT_2;

use epr_core::finite::{bohm_state, FiniteAbelianGroup};
use epr_core::io::{observable_from_json, state_from_json, LoadError};
use epr_core::numerics::{ComplexMatrix, C64};
use epr_core::{Observable, PureState, Tolerances};

use crate::CliError;

fn read(field: &str, path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::invalid(field, format!("{path}: {e}")))
}

fn load_error(field: &str, path: &str, err: LoadError) -> CliError {
    let name = match err.field() {
        Some(inner) => format!("{field}.{inner}"),
        None => field.to_owned(),
    };
    CliError::invalid(&name, format!("{path}: {err}"))
}

pub(crate) fn parse_group(field: &str, spec: &str) -> Result<FiniteAbelianGroup, CliError> {
    FiniteAbelianGroup::parse(spec).map_err(|e| CliError::invalid(field, e))
}

/// The singlet (e₁⊗e₂ − e₂⊗e₁)/√2.
pub(crate) fn bohm_pair() -> PureState {
    let h = FRAC_1_SQRT_2;
    PureState::new(ComplexMatrix::from_real_rows(&[vec![0.0, h], vec![-h, 0.0]]).expect("2x2"))
        .expect("finite coefficients")
}

fn builtin_state(name: &str) -> Option<Result<PureState, CliError>> {
    if name == "bohm2" {
        return Some(Ok(bohm_pair()));
    }
    if let Some(k) = name.strip_prefix("maximal-d") {
        return Some(match k.parse::<usize>() {
            Ok(d) if d > 0 => PureState::new(ComplexMatrix::identity(d).scale_real(1.0 / (d as f64).sqrt()))
                .map_err(|e| CliError::invalid("state", e)),
            _ => Err(CliError::invalid("state", format!("bad dimension in `{name}`"))),
        });
    }
    if let Some(spec) = name.strip_prefix("epr-group-") {
        return Some(parse_group("state", spec).map(|g| bohm_state(&g)));
    }
    None
}

/// A normalized state from a built-in name or a JSON file.
pub fn load_state(spec: &str) -> Result<PureState, CliError> {
    if let Some(state) = builtin_state(spec) {
        return state;
    }
    let text = read("state", spec)?;
    state_from_json(&text).map_err(|e| load_error("state", spec, e))
}

fn pauli(name: &str) -> Option<(ComplexMatrix, &'static str)> {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    let i = C64::new(0.0, 1.0);
    let m = match name {
        "pauli-x" => (vec![vec![z, o], vec![o, z]], "X"),
        "pauli-y" => (vec![vec![z, -i], vec![i, z]], "Y"),
        "pauli-z" => (vec![vec![o, z], vec![z, -o]], "Z"),
        _ => return None,
    };
    Some((ComplexMatrix::from_rows(&m.0).expect("2x2"), m.1))
}

/// An observable from `pauli-x|y|z` or a JSON file; `field` names the flag.
pub fn load_observable(field: &str, spec: &str, tol: &Tolerances) -> Result<Observable, CliError> {
    if let Some((m, label)) = pauli(spec) {
        return Observable::from_matrix(m, tol)
            .map(|o| o.with_label(label))
            .map_err(|e| CliError::from_core(e, field, "eigendecomposition"));
    }
    let text = read(field, spec)?;
    observable_from_json(&text, tol).map_err(|e| match e {
        LoadError::Invariant { source, .. } if source.is_numerical() => {
            CliError::from_core(source, field, "eigendecomposition")
        }
        e => load_error(field, spec, e),
    })
}
