//! Joint and conditional distributions of A₁⊗1 and 1⊗B₂ in a pure state, and
//! the graph-concentration form of the EPR property for discrete measures.

use serde::Serialize;

use crate::epr::PredictiveMap;
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, Tolerances};
use crate::tensor::{Observable, PureState};

/// Probabilities at or below this are treated as zero.
pub const PROB_CLAMP: f64 = 1e-14;
/// Allowed deviation of the total mass from 1.
pub const MASS_TOL: f64 = 1e-10;
/// Marginal mass above which a value counts as a positive-mass point.
pub const POSITIVE_MASS: f64 = 1e-12;
/// Relative tolerance for identifying eigenvalues across observables.
pub const VALUE_MATCH_TOL: f64 = 1e-8;

/// |x − y| ≤ 1e-8·(1 + max(|x|, |y|)).
pub fn values_match(x: f64, y: f64) -> bool {
    (x - y).abs() <= VALUE_MATCH_TOL * (1.0 + x.abs().max(y.abs()))
}

fn position(values: &[f64], x: f64) -> Option<usize> {
    values.iter().position(|&v| values_match(v, x))
}

/// A probability measure on finitely many points (a, b) of ℝ².
#[derive(Debug, Clone, Serialize)]
pub struct DiscreteJointDistribution {
    support: Vec<(f64, f64)>,
    probs: Vec<f64>,
}

/// One (a, b, p) row, the CSV layout.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct JointRow {
    pub a: f64,
    pub b: f64,
    pub p: f64,
}

impl DiscreteJointDistribution {
    /// Validates nonnegativity (after clamping values ≥ −1e-14 to zero) and
    /// total mass 1 within 1e-10. Repeated support points are merged.
    pub fn new(support: Vec<(f64, f64)>, probs: Vec<f64>) -> Result<Self> {
        if support.len() != probs.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} support points but {} probabilities",
                support.len(),
                probs.len()
            )));
        }
        let mut merged_support: Vec<(f64, f64)> = Vec::with_capacity(support.len());
        let mut merged_probs: Vec<f64> = Vec::with_capacity(probs.len());
        for (&(a, b), &p) in support.iter().zip(&probs) {
            if !(a.is_finite() && b.is_finite() && p.is_finite()) {
                return Err(Error::InvalidDistribution("non-finite entry".into()));
            }
            if p < -PROB_CLAMP {
                return Err(Error::InvalidDistribution(format!("negative mass {p}")));
            }
            let p = if p <= PROB_CLAMP { 0.0 } else { p };
            match merged_support
                .iter()
                .position(|&(x, y)| values_match(x, a) && values_match(y, b))
            {
                Some(k) => merged_probs[k] += p,
                None => {
                    merged_support.push((a, b));
                    merged_probs.push(p);
                }
            }
        }
        let total: f64 = merged_probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDistribution(format!("total mass {total}")));
        }
        Ok(Self {
            support: merged_support,
            probs: merged_probs,
        })
    }

    pub fn support(&self) -> &[(f64, f64)] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn rows(&self) -> Vec<JointRow> {
        self.support
            .iter()
            .zip(&self.probs)
            .map(|(&(a, b), &p)| JointRow { a, b, p })
            .collect()
    }

    /// P({(a, b)}), zero off the support.
    pub fn prob(&self, a: f64, b: f64) -> f64 {
        self.support
            .iter()
            .zip(&self.probs)
            .filter(|((x, y), _)| values_match(*x, a) && values_match(*y, b))
            .map(|(_, p)| p)
            .sum()
    }

    fn marginal(&self, pick: impl Fn(&(f64, f64)) -> f64) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (pt, &p) in self.support.iter().zip(&self.probs) {
            let v = pick(pt);
            match out.iter().position(|&(x, _)| values_match(x, v)) {
                Some(k) => out[k].1 += p,
                None => out.push((v, p)),
            }
        }
        out.sort_by(|x, y| x.0.total_cmp(&y.0));
        out
    }

    /// P₁ as (a, mass) pairs, ascending in a.
    pub fn marginal_a(&self) -> Vec<(f64, f64)> {
        self.marginal(|pt| pt.0)
    }

    /// P₂ as (b, mass) pairs, ascending in b.
    pub fn marginal_b(&self) -> Vec<(f64, f64)> {
        self.marginal(|pt| pt.1)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rows": self.rows(),
            "marginal_a": self.marginal_a(),
            "marginal_b": self.marginal_b(),
        })
    }
}

fn check_dims(state: &PureState, a1: &Observable, b2: &Observable) -> Result<()> {
    let (d1, d2) = state.dims();
    if a1.dim() != d1 {
        return Err(Error::DimensionMismatch {
            expected: d1,
            found: a1.dim(),
        });
    }
    if b2.dim() != d2 {
        return Err(Error::DimensionMismatch {
            expected: d2,
            found: b2.dim(),
        });
    }
    Ok(())
}

/// P(a, b) = ‖(E_a⊗F_b)σ‖² = ‖E_a·C·F_bᵀ‖_F² over the eigenvalue clusters of
/// A₁ and B₂.
///
/// With V_a, W_b orthonormal eigenbases, ‖E_a·C·F_bᵀ‖ = ‖V_a†·C·conj(W_b)‖, so
/// one product T = V†·C·conj(W) gives every cell as a block sum of |T_ij|².
/// Masses are taken relative to ‖σ‖², which is 1 within the normalization
/// tolerance.
pub fn joint_distribution(
    state: &PureState,
    a1: &Observable,
    b2: &Observable,
) -> Result<DiscreteJointDistribution> {
    check_dims(state, a1, b2)?;
    state.ensure_normalized()?;
    let c = state.coeffs();
    let t = &(&a1.eigen().vectors.dagger() * c) * &b2.eigen().vectors.conj();
    let norm_sqr = c.norm_sqr();

    let mut support = Vec::new();
    let mut probs = Vec::new();
    for ca in a1.clusters() {
        for cb in b2.clusters() {
            let mut p = 0.0;
            for i in ca.range.clone() {
                for j in cb.range.clone() {
                    p += t[(i, j)].norm_sqr();
                }
            }
            support.push((ca.value, cb.value));
            probs.push(p / norm_sqr);
        }
    }
    DiscreteJointDistribution::new(support, probs)
}

fn single_distribution(
    state: &PureState,
    obs: &Observable,
    coeff_view: impl Fn(&ComplexMatrix, &ComplexMatrix) -> ComplexMatrix,
) -> Vec<(f64, f64)> {
    let c = state.coeffs();
    let norm_sqr = c.norm_sqr();
    obs.clusters()
        .iter()
        .enumerate()
        .map(|(k, cl)| {
            let p = coeff_view(c, &obs.projector(k)).norm_sqr() / norm_sqr;
            (cl.value, if p <= PROB_CLAMP { 0.0 } else { p })
        })
        .collect()
}

/// Distribution of A₁⊗1 in σ: a ↦ ‖E_a·C‖², ascending in a.
pub fn distribution_h1(state: &PureState, a1: &Observable) -> Result<Vec<(f64, f64)>> {
    if a1.dim() != state.dims().0 {
        return Err(Error::DimensionMismatch {
            expected: state.dims().0,
            found: a1.dim(),
        });
    }
    Ok(single_distribution(state, a1, |c, e| e * c))
}

/// Distribution of 1⊗B₂ in σ: b ↦ ‖C·F_bᵀ‖², ascending in b.
pub fn distribution_h2(state: &PureState, b2: &Observable) -> Result<Vec<(f64, f64)>> {
    if b2.dim() != state.dims().1 {
        return Err(Error::DimensionMismatch {
            expected: state.dims().1,
            found: b2.dim(),
        });
    }
    Ok(single_distribution(state, b2, |c, f| c * &f.transpose()))
}

/// Total variation ½Σ|p − q| between two discrete measures on ℝ, with points
/// identified by [`values_match`].
pub fn total_variation(p: &[(f64, f64)], q: &[(f64, f64)]) -> f64 {
    let mut points: Vec<f64> = Vec::new();
    for &(x, _) in p.iter().chain(q) {
        if position(&points, x).is_none() {
            points.push(x);
        }
    }
    let mass = |m: &[(f64, f64)], x: f64| -> f64 {
        m.iter()
            .filter(|(y, _)| values_match(*y, x))
            .map(|(_, w)| w)
            .sum()
    };
    0.5 * points
        .iter()
        .map(|&x| (mass(p, x) - mass(q, x)).abs())
        .sum::<f64>()
}

/// The conditional measures q_a(b) = P(a, b)/P₁(a) for every a with
/// P₁(a) > 1e-12.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionalFamily {
    entries: Vec<ConditionalEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionalEntry {
    pub a: f64,
    pub marginal: f64,
    pub measure: Vec<(f64, f64)>,
}

impl ConditionalFamily {
    pub fn entries(&self) -> &[ConditionalEntry] {
        &self.entries
    }

    /// q_a, if a has positive mass.
    pub fn get(&self, a: f64) -> Option<&[(f64, f64)]> {
        self.entries
            .iter()
            .find(|e| values_match(e.a, a))
            .map(|e| e.measure.as_slice())
    }

    /// max over support points of |P(a, b) − P₁(a)·q_a(b)|.
    pub fn reconstruction_error(&self, joint: &DiscreteJointDistribution) -> f64 {
        joint
            .support()
            .iter()
            .zip(joint.probs())
            .map(|(&(a, b), &p)| {
                let rebuilt = self
                    .entries
                    .iter()
                    .find(|e| values_match(e.a, a))
                    .map_or(0.0, |e| {
                        e.marginal
                            * e.measure
                                .iter()
                                .filter(|(y, _)| values_match(*y, b))
                                .map(|(_, q)| q)
                                .sum::<f64>()
                    });
                (p - rebuilt).abs()
            })
            .fold(0.0, f64::max)
    }
}

pub fn conditional_family(joint: &DiscreteJointDistribution) -> ConditionalFamily {
    let entries = joint
        .marginal_a()
        .into_iter()
        .filter(|&(_, m)| m > POSITIVE_MASS)
        .map(|(a, m)| {
            let mut measure: Vec<(f64, f64)> = joint
                .support()
                .iter()
                .zip(joint.probs())
                .filter(|((x, _), _)| values_match(*x, a))
                .map(|(&(_, b), &p)| (b, p / m))
                .collect();
            measure.sort_by(|x, y| x.0.total_cmp(&y.0));
            ConditionalEntry {
                a,
                marginal: m,
                measure,
            }
        })
        .collect();
    ConditionalFamily { entries }
}

/// P(ℝ² ∖ G) for the graph G of `g`.
///
/// `g` must be defined on every a of positive marginal mass; masses at other
/// a-values are zero and are skipped.
pub fn off_graph_mass(
    joint: &DiscreteJointDistribution,
    g: impl Fn(f64) -> Option<f64>,
) -> Result<f64> {
    let marginal = joint.marginal_a();
    let mut mass = 0.0;
    for (&(a, b), &p) in joint.support().iter().zip(joint.probs()) {
        let positive = marginal
            .iter()
            .any(|&(x, m)| values_match(x, a) && m > POSITIVE_MASS);
        match g(a) {
            Some(ga) if !values_match(ga, b) => mass += p,
            Some(_) => {}
            None if positive => return Err(Error::GraphUndefined(a)),
            None => {}
        }
    }
    Ok(mass)
}

/// Whether P is concentrated on the graph of `g` up to `tol` mass.
pub fn graph_concentration_check(
    joint: &DiscreteJointDistribution,
    g: impl Fn(f64) -> Option<f64>,
    tol: f64,
) -> Result<bool> {
    Ok(off_graph_mass(joint, g)? <= tol)
}

/// Given concentration on the graph of `g`, whether g maps the positive-mass
/// points of P₁ onto those of P₂.
pub fn corollary2_check(
    joint: &DiscreteJointDistribution,
    g: impl Fn(f64) -> Option<f64>,
    tol: f64,
) -> Result<bool> {
    if !graph_concentration_check(joint, &g, tol)? {
        return Err(Error::PreconditionFailed(
            "joint distribution is not concentrated on the graph".into(),
        ));
    }
    let d1: Vec<f64> = joint
        .marginal_a()
        .into_iter()
        .filter(|&(_, m)| m >= POSITIVE_MASS)
        .map(|(a, _)| a)
        .collect();
    let d2: Vec<f64> = joint
        .marginal_b()
        .into_iter()
        .filter(|&(_, m)| m >= POSITIVE_MASS)
        .map(|(b, _)| b)
        .collect();
    let mut image: Vec<f64> = Vec::new();
    for &a in &d1 {
        let ga = g(a).ok_or(Error::GraphUndefined(a))?;
        if position(&image, ga).is_none() {
            image.push(ga);
        }
    }
    Ok(image.len() == d2.len() && image.iter().all(|&b| position(&d2, b).is_some()))
}

/// Outcome of the correlation test for one observable.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelationOutcome {
    pub passed: bool,
    pub off_diagonal_mass: f64,
    pub support_spectrum: Vec<f64>,
}

/// Forms B₁ from B₂ ∈ ℬ^σ, then measures the joint mass of {b₁ ≠ b₂} over
/// b₁, b₂ in the spectrum of B₂ on ℋ₂^σ.
pub fn epr_correlation_test(
    state: &PureState,
    b2: &Observable,
    mass_tol: f64,
    tol: &Tolerances,
) -> Result<CorrelationOutcome> {
    let map = PredictiveMap::new(state, tol)?;
    let b1 = map.predict(b2)?;
    let beta = map.support_spectrum(b2)?;
    let joint = joint_distribution(state, &b1, b2)?;
    let off_diagonal_mass = joint
        .support()
        .iter()
        .zip(joint.probs())
        .filter(|((x, y), _)| {
            position(&beta, *x).is_some() && position(&beta, *y).is_some() && !values_match(*x, *y)
        })
        .map(|(_, p)| p)
        .sum::<f64>();
    Ok(CorrelationOutcome {
        passed: off_diagonal_mass <= mass_tol,
        off_diagonal_mass,
        support_spectrum: beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{C64, ONE, ZERO};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn bohm() -> PureState {
        let h = FRAC_1_SQRT_2;
        PureState::new(ComplexMatrix::from_real_rows(&[vec![0.0, h], vec![-h, 0.0]]).unwrap())
            .unwrap()
    }

    fn spin_z() -> Observable {
        Observable::diagonal(&[1.0, -1.0], &tol()).unwrap()
    }

    fn bohm_joint() -> DiscreteJointDistribution {
        joint_distribution(&bohm(), &spin_z(), &spin_z()).unwrap()
    }

    #[test]
    fn bohm_anticorrelation() {
        let p = bohm_joint();
        assert!((p.prob(1.0, -1.0) - 0.5).abs() < 1e-15);
        assert!((p.prob(-1.0, 1.0) - 0.5).abs() < 1e-15);
        assert_eq!(p.prob(1.0, 1.0), 0.0);
        assert_eq!(p.prob(-1.0, -1.0), 0.0);
    }

    #[test]
    fn product_state_is_independent() {
        let s = PureState::product(&[ONE, ZERO], &[ZERO, ONE]).unwrap();
        let p = joint_distribution(&s, &spin_z(), &spin_z()).unwrap();
        assert!((p.prob(1.0, -1.0) - 1.0).abs() < 1e-15);
        assert_eq!(p.marginal_a(), vec![(-1.0, 0.0), (1.0, 1.0)]);
    }

    #[test]
    fn joint_rejects_bad_input() {
        let unnormalized = PureState::new(ComplexMatrix::identity(2)).unwrap();
        assert!(matches!(
            joint_distribution(&unnormalized, &spin_z(), &spin_z()),
            Err(Error::NotNormalized(_))
        ));
        let three = Observable::diagonal(&[1.0, 2.0, 3.0], &tol()).unwrap();
        assert!(matches!(
            joint_distribution(&bohm(), &three, &spin_z()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn distribution_validation() {
        assert!(DiscreteJointDistribution::new(vec![(0.0, 0.0)], vec![0.9]).is_err());
        assert!(DiscreteJointDistribution::new(vec![(0.0, 0.0), (1.0, 1.0)], vec![1.1, -0.1]).is_err());
        let p = DiscreteJointDistribution::new(vec![(0.0, 0.0), (1.0, 1.0)], vec![1.0, -1e-15])
            .unwrap();
        assert_eq!(p.probs()[1], 0.0);
    }

    #[test]
    fn conditionals() {
        let q = conditional_family(&bohm_joint());
        let q1 = q.get(1.0).unwrap();
        assert_eq!(q1.iter().find(|(b, _)| *b == -1.0).unwrap().1, 1.0);
        assert_eq!(q1.iter().find(|(b, _)| *b == 1.0).unwrap().1, 0.0);
        assert!(q.reconstruction_error(&bohm_joint()) < 1e-15);
    }

    #[test]
    fn graph_checks() {
        let p = bohm_joint();
        assert!(graph_concentration_check(&p, |a| Some(-a), 1e-12).unwrap());
        assert!(!graph_concentration_check(&p, Some, 1e-12).unwrap());
        assert!((off_graph_mass(&p, Some).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            off_graph_mass(&p, |a| (a > 0.0).then_some(-a)),
            Err(Error::GraphUndefined(_))
        ));

        let point = DiscreteJointDistribution::new(vec![(0.0, 0.0)], vec![1.0]).unwrap();
        assert!(graph_concentration_check(&point, Some, 0.0).unwrap());
        assert!(corollary2_check(&point, Some, 0.0).unwrap());
    }

    #[test]
    fn graph_maps_support_onto_support() {
        let p = bohm_joint();
        assert!(corollary2_check(&p, |a| Some(-a), 1e-12).unwrap());
        assert!(matches!(
            corollary2_check(&p, Some, 1e-12),
            Err(Error::PreconditionFailed(_))
        ));

        let collapse = DiscreteJointDistribution::new(
            vec![(1.0, 10.0), (2.0, 10.0), (3.0, 20.0)],
            vec![0.3, 0.3, 0.4],
        )
        .unwrap();
        let g = |a: f64| Some(if a < 2.5 { 10.0 } else { 20.0 });
        assert!(corollary2_check(&collapse, g, 1e-12).unwrap());
    }

    #[test]
    fn correlation_test_examples() {
        let s = bohm();
        let n = [0.3, -0.4, 0.5];
        let m = ComplexMatrix::from_rows(&[
            vec![C64::new(n[2], 0.0), C64::new(n[0], -n[1])],
            vec![C64::new(n[0], n[1]), C64::new(-n[2], 0.0)],
        ])
        .unwrap();
        let b2 = Observable::from_matrix(m, &tol()).unwrap();
        let out = epr_correlation_test(&s, &b2, 1e-10, &tol()).unwrap();
        assert!(out.passed);
        assert!(out.off_diagonal_mass < 1e-10);

        let id = Observable::diagonal(&[1.0, 1.0], &tol()).unwrap();
        let out = epr_correlation_test(&s, &id, 1e-10, &tol()).unwrap();
        assert!(out.passed);
        assert_eq!(out.support_spectrum, vec![1.0]);

        let weighted = PureState::new(ComplexMatrix::diag_real(&[0.9f64.sqrt(), 0.1f64.sqrt()])).unwrap();
        let x = Observable::from_matrix(
            ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
            &tol(),
        )
        .unwrap();
        assert!(matches!(
            epr_correlation_test(&weighted, &x, 1e-10, &tol()),
            Err(Error::NotInAlgebra(_))
        ));
    }

    #[test]
    fn single_distributions_and_tv() {
        let d1 = distribution_h1(&bohm(), &spin_z()).unwrap();
        let d2 = distribution_h2(&bohm(), &spin_z()).unwrap();
        assert!(total_variation(&d1, &d2) < 1e-15);
        assert!((total_variation(&[(0.0, 1.0)], &[(1.0, 1.0)]) - 1.0).abs() < 1e-15);
    }
}
