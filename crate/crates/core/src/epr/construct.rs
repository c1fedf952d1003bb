use super::schmidt::{schmidt_decompose, AntiunitaryImbedding};
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, Tolerances};
use crate::tensor::{HilbertSpace, PureState};

/// Tolerance on Σ_j d_j·λ_j = 1 and on orthonormality of the blocks.
pub const CONSTRUCT_TOL: f64 = 1e-10;

/// Builds σ = Σ_j λ_j^{1/2} Σ_p U e_{jp} ⊗ e_{jp}.
///
/// `blocks[j]` holds an orthonormal basis of ℋ₂(λ_j) as columns. The imbedding
/// acts on the concatenated block basis: column k of its matrix is U applied to
/// the k-th basis vector. The coefficient matrix is W·diag(√λ)·Eᵀ.
pub fn construct_epr_state(
    lambdas: &[f64],
    blocks: &[ComplexMatrix],
    imbedding: &AntiunitaryImbedding,
) -> Result<PureState> {
    if lambdas.len() != blocks.len() || blocks.is_empty() {
        return Err(Error::ShapeMismatch(format!(
            "{} weights for {} blocks",
            lambdas.len(),
            blocks.len()
        )));
    }
    if let Some(&l) = lambdas.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
        return Err(Error::NotPositive(l));
    }
    let d2 = blocks[0].rows();
    if blocks.iter().any(|b| b.rows() != d2 || b.cols() == 0) {
        return Err(Error::ShapeMismatch(
            "blocks must be nonempty and share the ambient dimension".into(),
        ));
    }

    let sum: f64 = lambdas
        .iter()
        .zip(blocks)
        .map(|(l, b)| l * b.cols() as f64)
        .sum();
    if (sum - 1.0).abs() > CONSTRUCT_TOL {
        return Err(Error::WeightMismatch(sum));
    }

    let refs: Vec<&ComplexMatrix> = blocks.iter().collect();
    let e = ComplexMatrix::hstack(&refs)?;
    let r = e.cols();
    let residual = (&e.dagger() * &e).distance(&ComplexMatrix::identity(r));
    if residual.is_nan() || residual > CONSTRUCT_TOL {
        return Err(Error::BlocksNotOrthogonal(residual));
    }

    let w = imbedding.matrix();
    if w.cols() != r {
        return Err(Error::ShapeMismatch(format!(
            "imbedding defined on dimension {} but blocks span {r}",
            w.cols()
        )));
    }
    let residual = imbedding.isometry_residual();
    if residual.is_nan() || residual > super::schmidt::ISOMETRY_TOL {
        return Err(Error::NotIsometry(residual));
    }

    let roots: Vec<f64> = lambdas
        .iter()
        .zip(blocks)
        .flat_map(|(l, b)| std::iter::repeat_n(l.sqrt(), b.cols()))
        .collect();
    let coeffs = &(w * &ComplexMatrix::diag_real(&roots)) * &e.transpose();
    PureState::with_spaces(
        imbedding.codomain().clone(),
        HilbertSpace::new(d2)?,
        coeffs,
    )
}

/// Recovers U from a maximal EPR state σ = d^{-1/2} Σ_j U e_j ⊗ e_j.
///
/// U is returned in standard coordinates of ℋ₂, where its matrix is √d·C.
pub fn bijection_check(state: &PureState, tol: &Tolerances) -> Result<AntiunitaryImbedding> {
    state.ensure_normalized()?;
    let dec = schmidt_decompose(state, tol)?;
    let d = state.dims().1;
    if !dec.is_maximal() {
        return Err(Error::NotMaximalEpr(format!(
            "weights {:?} with multiplicities {:?} and kernel of dimension {}",
            dec.lambdas(),
            dec.mults(),
            dec.kernel_basis().cols()
        )));
    }
    let lambda = dec.lambdas()[0];
    if (lambda * d as f64 - 1.0).abs() > CONSTRUCT_TOL.max(tol.eigen_cluster) {
        return Err(Error::NotMaximalEpr(format!("weight {lambda} is not 1/{d}")));
    }
    let w = state.coeffs().scale_real((d as f64).sqrt());
    AntiunitaryImbedding::new(state.space2().clone(), state.space1().clone(), w)
}
