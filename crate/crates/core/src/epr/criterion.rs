//! Commutation tests: the EPR criterion, membership in the commutant of
//! L_σ†L_σ, and the dimension of the commutant of a family of observables.

use serde::Serialize;

use super::schmidt::{schmidt_decompose, SchmidtDecomposition};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numerics::{commutator_norm, hermitian_eig, ComplexMatrix, Tolerances};
use crate::tensor::{canonical_map, Observable, PureState};

/// Outcome of the commutation test for one observable.
#[derive(Debug, Clone, Serialize)]
pub struct ObservableVerdict {
    pub id: String,
    pub commutator_norm: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct EprReport {
    pub is_epr: bool,
    pub per_observable: Vec<ObservableVerdict>,
    pub decomposition: SchmidtDecomposition,
}

/// Commutation threshold commutator_tol·(1 + ‖A‖_F)·(1 + ‖B‖_F).
pub fn commutation_threshold(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerances) -> f64 {
    tol.commutator_tol * (1.0 + a.frobenius_norm()) * (1.0 + b.frobenius_norm())
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Tests whether σ is EPR relative to every observable in `obs`, i.e. whether
/// L_σ†L_σ commutes with each of them.
pub fn is_epr(state: &PureState, obs: &[Observable], tol: &Tolerances) -> Result<EprReport> {
    is_epr_with(Execution::default(), state, obs, tol)
}

pub fn is_epr_with(
    exec: Execution,
    state: &PureState,
    obs: &[Observable],
    tol: &Tolerances,
) -> Result<EprReport> {
    let d2 = state.dims().1;
    for o in obs {
        check_dim(d2, o.dim())?;
    }
    let decomposition = schmidt_decompose(state, tol)?;
    let gram = canonical_map(state).gram_matrix();

    let indexed: Vec<(usize, &Observable)> = obs.iter().enumerate().collect();
    let per_observable = exec
        .map(&indexed, |&(k, o)| {
            let norm = commutator_norm(&gram, o.matrix())?;
            let threshold = commutation_threshold(&gram, o.matrix(), tol);
            Ok(ObservableVerdict {
                id: o.label().map_or_else(|| format!("obs{k}"), str::to_owned),
                commutator_norm: norm,
                threshold,
                passed: norm <= threshold,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    Ok(EprReport {
        is_epr: per_observable.iter().all(|v| v.passed),
        per_observable,
        decomposition,
    })
}

/// Membership of B₂ in ℬ^σ, the commutant of L_σ†L_σ.
pub fn epr_algebra_contains(state: &PureState, b2: &Observable, tol: &Tolerances) -> Result<bool> {
    check_dim(state.dims().1, b2.dim())?;
    let gram = canonical_map(state).gram_matrix();
    let norm = commutator_norm(&gram, b2.matrix())?;
    Ok(norm <= commutation_threshold(&gram, b2.matrix(), tol))
}

/// Dimension of {X : [X, B] = 0 for all B in `obs`} over ℂ.
///
/// Builds the stacked map X ↦ ([X, B₁], …, [X, B_k]) on row-major vec(X), i.e.
/// K_B = I⊗Bᵀ − B⊗I, and counts the null eigenvalues of Σ K_B†K_B.
pub fn commutant_dimension(obs: &[Observable], tol: &Tolerances) -> Result<usize> {
    let Some(first) = obs.first() else {
        return Err(Error::PreconditionFailed(
            "commutant of an empty family".into(),
        ));
    };
    let n = first.dim();
    for o in obs {
        check_dim(n, o.dim())?;
    }
    let id = ComplexMatrix::identity(n);
    let mut normal = ComplexMatrix::zeros(n * n, n * n);
    for o in obs {
        let b = o.matrix();
        let k = &id.kron(&b.transpose()) - &b.kron(&id);
        normal = &normal + &(&k.dagger() * &k);
    }
    let normal = normal.hermitian_part();
    let eig = hermitian_eig(&normal, tol)?;
    let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = tol.zero_threshold * (1.0 + top);
    Ok(eig.values.iter().filter(|&&v| v <= cutoff).count())
}

/// True when only scalars commute with every observable in `obs`.
pub fn commutant_is_scalar(obs: &[Observable], tol: &Tolerances) -> Result<bool> {
    Ok(commutant_dimension(obs, tol)? == 1)
}
