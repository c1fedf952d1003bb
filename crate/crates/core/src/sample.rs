//! Random states, observables and EPR block structures for tests, demos and
//! benchmarks. All generators take the caller's RNG, so seeded runs repeat.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::epr::AntiunitaryImbedding;
use crate::numerics::{ComplexMatrix, C64};
use crate::tensor::{Observable, PureState};
use crate::Tolerances;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Isometry ℂ^cols → ℂ^rows (cols ≤ rows) from Gram–Schmidt on a Ginibre matrix.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(cols <= rows, "isometry needs cols <= rows");
    ginibre(rows, cols, rng).orthonormalize_columns()
}

pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    random_isometry(d, d, rng)
}

/// Unit vector with Gaussian direction.
pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
    let n = crate::numerics::vec_norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Normalized state with Gaussian coefficients.
pub fn random_state<R: Rng + ?Sized>(d1: usize, d2: usize, rng: &mut R) -> PureState {
    PureState::new(ginibre(d1, d2, rng))
        .and_then(|s| s.normalized())
        .expect("Gaussian matrix is nonzero")
}

/// (G + G†)/2 for a Ginibre G.
pub fn random_hermitian_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(d, d, rng).hermitian_part()
}

pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R, tol: &Tolerances) -> Observable {
    Observable::from_matrix(random_hermitian_matrix(d, rng), tol).expect("Hermitian by construction")
}

/// V·diag(values)·V† for a random unitary V.
pub fn hermitian_with_spectrum<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> ComplexMatrix {
    let v = random_unitary(values.len(), rng);
    (&(&v * &ComplexMatrix::diag_real(values)) * &v.dagger()).hermitian_part()
}

/// Inputs for building an EPR state with prescribed multiplicities.
#[derive(Debug, Clone)]
pub struct BlockStructure {
    pub lambdas: Vec<f64>,
    pub blocks: Vec<ComplexMatrix>,
    pub imbedding: AntiunitaryImbedding,
    /// Orthonormal basis of the orthogonal complement of the blocks.
    pub kernel: ComplexMatrix,
}

impl BlockStructure {
    /// Orthonormal basis of the span of all blocks.
    pub fn support(&self) -> ComplexMatrix {
        let refs: Vec<&ComplexMatrix> = self.blocks.iter().collect();
        ComplexMatrix::hstack(&refs).expect("blocks share the row count")
    }

    /// Random Hermitian action inside each block and on the kernel: an
    /// observable commuting with every eigenprojection of L†L.
    pub fn commuting_observable<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        tol: &Tolerances,
    ) -> Observable {
        let d2 = self.kernel.rows();
        let mut m = ComplexMatrix::zeros(d2, d2);
        for b in self.blocks.iter().chain(std::iter::once(&self.kernel)) {
            if b.cols() == 0 {
                continue;
            }
            let h = random_hermitian_matrix(b.cols(), rng);
            m = &m + &(&(b * &h) * &b.dagger());
        }
        Observable::from_matrix(m.hermitian_part(), tol).expect("Hermitian by construction")
    }
}

/// Random weights λ_j (distinct with high probability, Σ d_j λ_j = 1), random
/// mutually orthogonal blocks of sizes `mults` in ℂ^d2, and a random
/// antiunitary imbedding of their span into ℂ^d1.
pub fn random_block_structure<R: Rng + ?Sized>(
    d1: usize,
    d2: usize,
    mults: &[usize],
    rng: &mut R,
) -> BlockStructure {
    let r: usize = mults.iter().sum();
    assert!(r <= d2 && r <= d1, "blocks must fit in both spaces");
    let basis = random_unitary(d2, rng);
    let mut start = 0;
    let blocks: Vec<ComplexMatrix> = mults
        .iter()
        .map(|&d| {
            let b = basis.columns(start..start + d);
            start += d;
            b
        })
        .collect();
    let raw: Vec<f64> = mults
        .iter()
        .enumerate()
        .map(|(j, _)| (j as f64 + 1.0) * rng.random_range(0.5..1.5))
        .collect();
    let total: f64 = raw.iter().zip(mults).map(|(w, &d)| w * d as f64).sum();
    let lambdas = raw.iter().map(|w| w / total).collect();
    let imbedding = AntiunitaryImbedding::from_matrix(random_isometry(d1, r, rng))
        .expect("orthonormal columns");
    BlockStructure {
        lambdas,
        blocks,
        imbedding,
        kernel: basis.columns(r..d2),
    }
}
