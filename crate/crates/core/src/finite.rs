//! Position and momentum on a finite abelian group G = ℤ_{n₁}×…×ℤ_{n_k}.
//!
//! L²(G) carries (f, g) = |G|⁻¹ Σ_x f(x)·conj(g(x)). Vectors are stored in the
//! orthonormal basis δ̂_x = √|G|·δ_x, so coordinates are c_x = f(x)/√|G| and the
//! standard inner product of ℂ^|G| applies. In those coordinates the character
//! ξ_y is the column y of F with F[x][y] = ξ_y(x)/√|G|.

use std::f64::consts::TAU;

use crate::epr::{is_epr, PredictiveMap};
use crate::error::{Error, Result};
use crate::measurement::{joint_distribution, DiscreteJointDistribution};
use crate::numerics::{hermitian_eig, inner, ComplexMatrix, Tolerances, C64};
use crate::tensor::{HilbertSpace, Observable, PureState, NORM_TOL};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    orders: Vec<usize>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<usize>) -> Result<Self> {
        if orders.is_empty() || orders.contains(&0) {
            return Err(Error::InvalidGroup(format!("cyclic orders {orders:?}")));
        }
        Ok(Self { orders })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// Parses "n1xn2x…", e.g. "2x3".
    pub fn parse(spec: &str) -> Result<Self> {
        let orders = spec
            .split(['x', 'X'])
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidGroup(format!("`{spec}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(orders)
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    /// |G|.
    pub fn order(&self) -> usize {
        self.orders.iter().product()
    }

    /// The element with lexicographic index `k`.
    pub fn element(&self, mut k: usize) -> Vec<usize> {
        let mut x = vec![0; self.orders.len()];
        for (slot, &n) in x.iter_mut().zip(&self.orders).rev() {
            *slot = k % n;
            k /= n;
        }
        x
    }

    pub fn index_of(&self, x: &[usize]) -> usize {
        x.iter()
            .zip(&self.orders)
            .fold(0, |acc, (&xi, &n)| acc * n + xi % n)
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<usize>> {
        (0..self.order()).map(|k| self.element(k)).collect()
    }

    pub fn add(&self, x: &[usize], y: &[usize]) -> Vec<usize> {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((a, b), n)| (a + b) % n)
            .collect()
    }

    pub fn neg(&self, x: &[usize]) -> Vec<usize> {
        x.iter()
            .zip(&self.orders)
            .map(|(a, n)| (n - a % n) % n)
            .collect()
    }

    pub fn character(&self, y: &[usize]) -> Character {
        let values = self
            .elements()
            .iter()
            .map(|x| self.pairing(x, y))
            .collect();
        Character {
            label: y.to_vec(),
            values,
        }
    }

    /// ξ_y(x) = exp(2πi Σ_l x_l y_l / n_l).
    pub fn pairing(&self, x: &[usize], y: &[usize]) -> C64 {
        let phase: f64 = x
            .iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((&a, &b), &n)| ((a * b) % n) as f64 / n as f64)
            .sum();
        C64::from_polar(1.0, TAU * phase)
    }

    /// F[x][y] = ξ_y(x)/√|G|: columns are the characters in δ̂ coordinates.
    pub fn character_matrix(&self) -> ComplexMatrix {
        let n = self.order();
        let scale = 1.0 / (n as f64).sqrt();
        let elems = self.elements();
        ComplexMatrix::from_fn(n, n, |i, j| self.pairing(&elems[i], &elems[j]) * scale)
    }

    /// Distinct integer labels symmetric about 0 in each factor, combined in
    /// mixed radix. For odd n these are 0, ±1, …, ±(n−1)/2.
    pub fn symmetric_labels(&self) -> Vec<f64> {
        self.elements()
            .iter()
            .map(|x| {
                x.iter().zip(&self.orders).fold(0i64, |acc, (&xi, &n)| {
                    let n = n as i64;
                    let xi = xi as i64;
                    let s = if xi < (n + 1) / 2 { xi } else { xi - n };
                    acc * n + s
                }) as f64
            })
            .collect()
    }
}

/// A character ξ_y of G tabulated on the lexicographic enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    pub label: Vec<usize>,
    pub values: Vec<C64>,
}

impl Character {
    pub fn value(&self, group: &FiniteAbelianGroup, x: &[usize]) -> C64 {
        self.values[group.index_of(x)]
    }
}

/// L²(G) with the weighted scalar product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupFunctionSpace {
    group: FiniteAbelianGroup,
}

impl GroupFunctionSpace {
    pub fn new(group: FiniteAbelianGroup) -> Self {
        Self { group }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    /// (f, g) = |G|⁻¹ Σ_x f(x)·conj(g(x)) on function values.
    pub fn scalar_product(&self, f: &[C64], g: &[C64]) -> C64 {
        inner(f, g) / self.dim() as f64
    }

    /// Function values → δ̂ coordinates.
    pub fn to_coords(&self, f: &[C64]) -> Vec<C64> {
        let s = (self.dim() as f64).sqrt();
        f.iter().map(|v| v / s).collect()
    }

    /// δ̂ coordinates → function values.
    pub fn from_coords(&self, c: &[C64]) -> Vec<C64> {
        let s = (self.dim() as f64).sqrt();
        c.iter().map(|v| v * s).collect()
    }

    /// Values of √|G|·δ_x.
    pub fn delta_on(&self, x: &[usize]) -> Vec<C64> {
        let n = self.dim();
        let k = self.group.index_of(x);
        let mut f = vec![C64::new(0.0, 0.0); n];
        f[k] = C64::new((n as f64).sqrt(), 0.0);
        f
    }

    pub fn hilbert_space(&self) -> HilbertSpace {
        let labels = self
            .group
            .elements()
            .iter()
            .map(|x| {
                x.iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        HilbertSpace::with_labels(labels).expect("group elements are distinct")
    }
}

/// σ_U = √|G| Σ_x δ_x⊗δ_x with U complex conjugation; coefficients |G|^{-1/2}·I
/// in the δ̂ bases.
pub fn bohm_state(group: &FiniteAbelianGroup) -> PureState {
    let n = group.order();
    let space = GroupFunctionSpace::new(group.clone()).hilbert_space();
    let coeffs = ComplexMatrix::identity(n).scale_real(1.0 / (n as f64).sqrt());
    PureState::with_spaces(space.clone(), space, coeffs).expect("square coefficients")
}

/// |G|^{-1/2} Σ_ξ ξ⁻¹⊗ξ, assembled from the characters.
pub fn bohm_state_character_form(group: &FiniteAbelianGroup) -> PureState {
    let n = group.order();
    let f = group.character_matrix();
    let scale = 1.0 / (n as f64).sqrt();
    let mut coeffs = ComplexMatrix::zeros(n, n);
    for y in 0..n {
        let xi = f.column(y);
        for i in 0..n {
            for j in 0..n {
                coeffs[(i, j)] += xi[i].conj() * xi[j] * scale;
            }
        }
    }
    let space = GroupFunctionSpace::new(group.clone()).hilbert_space();
    PureState::with_spaces(space.clone(), space, coeffs).expect("square coefficients")
}

/// The two sides of σ_U = √|G| Σ δ_x⊗δ_x = |G|^{-1/2} Σ ξ⁻¹⊗ξ and the
/// Frobenius norm of their difference.
pub fn verify_star_identity(group: &FiniteAbelianGroup) -> (PureState, PureState, f64) {
    let delta = bohm_state(group);
    let character = bohm_state_character_form(group);
    let residual = delta.coeffs().distance(character.coeffs());
    (delta, character, residual)
}

fn check_values(values: &[f64], n: usize) -> Result<()> {
    if values.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: values.len(),
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    for (i, a) in values.iter().enumerate() {
        if values[..i].contains(a) {
            return Err(Error::DuplicateValues);
        }
    }
    Ok(())
}

/// X with eigenvalue a_x on √|G|·δ_x; `values` follows the lexicographic
/// enumeration of G.
pub fn position_observable(
    group: &FiniteAbelianGroup,
    values: &[f64],
    tol: &Tolerances,
) -> Result<Observable> {
    check_values(values, group.order())?;
    let space = GroupFunctionSpace::new(group.clone()).hilbert_space();
    Ok(Observable::new(space, ComplexMatrix::diag_real(values), tol)?.with_label("X"))
}

/// Y = F·diag(b)·F† with eigenvalue b_ξ on ξ; `values` is indexed by the
/// character label in lexicographic order.
pub fn momentum_observable(
    group: &FiniteAbelianGroup,
    values: &[f64],
    tol: &Tolerances,
) -> Result<Observable> {
    check_values(values, group.order())?;
    let f = group.character_matrix();
    let y = (&(&f * &ComplexMatrix::diag_real(values)) * &f.dagger()).hermitian_part();
    let space = GroupFunctionSpace::new(group.clone()).hilbert_space();
    Ok(Observable::new(space, y, tol)?.with_label("Y"))
}

/// Joint distributions of (X₁, X₂) and (Y₁, Y₂) in σ_U, where X₁ = UX₂U† and
/// Y₁ = UY₂U† are obtained through the predictive map of σ_U.
#[derive(Debug, Clone)]
pub struct SymmetryTable {
    pub position: DiscreteJointDistribution,
    pub momentum: DiscreteJointDistribution,
}

pub fn epr_symmetry_table(group: &FiniteAbelianGroup, tol: &Tolerances) -> Result<SymmetryTable> {
    let labels = group.symmetric_labels();
    let sigma = bohm_state(group);
    let x2 = position_observable(group, &labels, tol)?;
    let y2 = momentum_observable(group, &labels, tol)?;
    let map = PredictiveMap::new(&sigma, tol)?;
    let x1 = map.predict(&x2)?;
    let y1 = map.predict(&y2)?;
    Ok(SymmetryTable {
        position: joint_distribution(&sigma, &x1, &x2)?,
        momentum: joint_distribution(&sigma, &y1, &y2)?,
    })
}

/// Hermitian square root of a positive semidefinite matrix.
fn psd_sqrt(rho: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(rho, tol)?;
    let floor = -tol.zero_threshold * (1.0 + rho.frobenius_norm());
    if let Some(&min) = eig.values.first() {
        if min < floor {
            return Err(Error::NotPositive(min));
        }
    }
    let roots: Vec<f64> = eig.values.iter().map(|v| v.max(0.0).sqrt()).collect();
    Ok(&(&eig.vectors * &ComplexMatrix::diag_real(&roots)) * &eig.vectors.dagger())
}

/// σ on (L²(G)⊗ℂᴺ)⊗(L²(G)⊗ℂᴺ) with L_σ†L_σ = |G|⁻¹·I⊗ρ.
///
/// The coefficient matrix is |G|^{-1/2}·I⊗conj(√ρ); ρ must be positive
/// semidefinite with Tr ρ = 1.
pub fn spin_system_state(
    group: &FiniteAbelianGroup,
    rho: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<PureState> {
    if !rho.is_square() {
        return Err(Error::NonSquare(rho.rows(), rho.cols()));
    }
    let root = psd_sqrt(rho, tol)?;
    let trace = rho.trace().re;
    if (trace - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(trace.max(0.0).sqrt()));
    }
    let n = group.order();
    let coeffs = ComplexMatrix::identity(n)
        .kron(&root.conj())
        .scale_real(1.0 / (n as f64).sqrt());
    PureState::new(coeffs)
}

/// X₂′ = X₂⊗1 and P₂′ = P₂⊗1 on L²(G)⊗ℂᴺ with the default value labels.
pub fn spin_observables(
    group: &FiniteAbelianGroup,
    spin_dim: usize,
    tol: &Tolerances,
) -> Result<(Observable, Observable)> {
    if spin_dim == 0 {
        return Err(Error::InvalidSpace("spin dimension must be positive".into()));
    }
    let labels = group.symmetric_labels();
    let id = ComplexMatrix::identity(spin_dim);
    let x = position_observable(group, &labels, tol)?;
    let p = momentum_observable(group, &labels, tol)?;
    let x = Observable::from_matrix(x.matrix().kron(&id), tol)?.with_label("X'");
    let p = Observable::from_matrix(p.matrix().kron(&id), tol)?.with_label("P'");
    Ok((x, p))
}

/// Whether the spin state built from ρ is EPR for {X₂′, P₂′}.
pub fn spin_example_is_epr(
    group: &FiniteAbelianGroup,
    rho: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<bool> {
    let sigma = spin_system_state(group, rho, tol)?;
    let (x, p) = spin_observables(group, rho.rows(), tol)?;
    Ok(is_epr(&sigma, &[x, p], tol)?.is_epr)
}
