#![allow(dead_code)]

use epr_core::numerics::{cluster_eigenvalues, hermitian_eig, ComplexMatrix, Tolerances, C64};
use epr_core::{Observable, PureState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tol() -> Tolerances {
    Tolerances::default()
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
    ])
    .unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[1.0, -1.0])
}

pub fn bohm() -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(ComplexMatrix::from_real_rows(&[vec![0.0, h], vec![-h, 0.0]]).unwrap()).unwrap()
}

/// n·σ for a unit vector n.
pub fn spin_along(n: [f64; 3]) -> ComplexMatrix {
    let x = pauli_x().scale_real(n[0]);
    let y = pauli_y().scale_real(n[1]);
    let z = pauli_z().scale_real(n[2]);
    &(&x + &y) + &z
}

/// Spectral projectors of a Hermitian matrix, paired with the cluster value.
pub fn spectral_projectors(m: &ComplexMatrix) -> Vec<(f64, ComplexMatrix)> {
    let eig = hermitian_eig(m, &tol()).unwrap();
    cluster_eigenvalues(&eig.values, &tol())
        .into_iter()
        .map(|c| {
            let v = eig.vectors.columns(c.range.clone());
            (c.value, &v * &v.dagger())
        })
        .collect()
}

/// P(a, b) = ‖(E_a⊗F_b)σ‖² computed on the full d₁d₂-dimensional tensor space
/// from the spectral projectors of A⊗I and I⊗B.
pub fn brute_force_joint(state: &PureState, a: &Observable, b: &Observable) -> Vec<((f64, f64), f64)> {
    let (d1, d2) = state.dims();
    let big_a = a.matrix().kron(&ComplexMatrix::identity(d2));
    let big_b = ComplexMatrix::identity(d1).kron(b.matrix());
    let psi = state.to_vector();
    let mut out = Vec::new();
    for (va, pa) in spectral_projectors(&big_a) {
        for (vb, pb) in spectral_projectors(&big_b) {
            let v = (&pa * &pb).mul_vec(&psi).unwrap();
            let p: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            out.push(((va, vb), p));
        }
    }
    out
}

pub fn max_abs(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}
