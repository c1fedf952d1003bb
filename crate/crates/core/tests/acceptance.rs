//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::{brute_force_joint, rng, tol, DEFAULT_SEED};
use epr_core::continuum::{convergence_sweep, fitted_slope, TestFunction};
use epr_core::epr::{
    bijection_check, commutant_is_scalar, construct_epr_state, is_epr, schmidt_decompose, PredictiveMap,
};
use epr_core::finite::{
    epr_symmetry_table, spin_observables, spin_system_state, verify_star_identity, FiniteAbelianGroup,
};
use epr_core::measurement::{
    distribution_h1, distribution_h2, epr_correlation_test, joint_distribution, off_graph_mass,
    total_variation,
};
use epr_core::numerics::{inner, ComplexMatrix, C64};
use epr_core::sample::{
    ginibre, random_block_structure, random_hermitian, random_isometry, random_state, random_unit_vector,
    random_unitary,
};
use epr_core::tensor::{canonical_map, state_norm_identity};
use epr_core::{Observable, PureState};
use rand::Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn canonical_isomorphism() -> Outcome {
    let start = Instant::now();
    let mut r = rng(DEFAULT_SEED);
    let (mut norm_err, mut reassembly_err, mut adjoint_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let (d1, d2) = (r.random_range(1..=16), r.random_range(1..=16));
        let s = random_state(d1, d2, &mut r);
        let direct: f64 = s.to_vector().iter().map(|z| z.norm_sqr()).sum();
        let (lhs, rhs) = state_norm_identity(&s);
        norm_err = norm_err.max((lhs - direct).abs()).max((rhs - direct).abs());

        let l = canonical_map(&s);
        let q = random_unitary(d2, &mut r);
        let again = l.reassemble(&q).unwrap();
        reassembly_err = reassembly_err.max(again.coeffs().distance(s.coeffs()));

        let u = random_unit_vector(d2, &mut r);
        let v = random_unit_vector(d1, &mut r);
        let a = inner(&l.apply(&u).unwrap(), &v);
        let b = inner(&l.adjoint().apply(&v).unwrap(), &u);
        adjoint_err = adjoint_err.max((a - b).norm());
    }
    let t = start.elapsed();
    check(
        norm_err <= 1e-12 && reassembly_err <= 1e-10 && adjoint_err <= 1e-12 && within(t, 10.0),
        format!(
            "norm {norm_err:.1e}, reassembly {reassembly_err:.1e}, adjoint {adjoint_err:.1e}, {:.2} s",
            t.as_secs_f64()
        ),
    )
}

fn epr_criterion_both_directions() -> Outcome {
    let start = Instant::now();
    let mut r = rng(DEFAULT_SEED + 2);
    let mut forward_ok = 0;
    let mut worst_commutator = 0.0f64;
    for _ in 0..100 {
        let k = r.random_range(1..=3);
        let mults: Vec<usize> = (0..k).map(|_| r.random_range(1..=2)).collect();
        let rank: usize = mults.iter().sum();
        let d2 = rank + r.random_range(0..=2);
        let d1 = d2 + r.random_range(0..=2);
        let bs = random_block_structure(d1, d2, &mults, &mut r);
        let s = construct_epr_state(&bs.lambdas, &bs.blocks, &bs.imbedding).unwrap();
        let obs: Vec<Observable> = (0..3).map(|_| bs.commuting_observable(&mut r, &tol())).collect();
        let report = is_epr(&s, &obs, &tol()).unwrap();
        let c = report.per_observable.iter().map(|v| v.commutator_norm).fold(0.0, f64::max);
        worst_commutator = worst_commutator.max(c);
        if report.is_epr && c < 1e-9 {
            forward_ok += 1;
        }
    }

    let mut converse_ok = 0;
    let mut least_mass = f64::INFINITY;
    for i in 0..100 {
        let d = r.random_range(2..=4);
        let (s, b2) = if i % 2 == 0 {
            let u = random_unit_vector(d, &mut r);
            let v = random_unit_vector(d, &mut r);
            (PureState::product(&u, &v).unwrap(), random_hermitian(d, &mut r, &tol()))
        } else {
            let mults = vec![1; d];
            let bs = random_block_structure(d, d, &mults, &mut r);
            let base = construct_epr_state(&bs.lambdas, &bs.blocks, &bs.imbedding).unwrap();
            let b2 = bs.commuting_observable(&mut r, &tol());
            let noise = ginibre(d, d, &mut r).scale_real(0.3);
            let s = PureState::new(base.coeffs() + &noise).unwrap().normalized().unwrap();
            (s, b2)
        };
        let report = is_epr(&s, std::slice::from_ref(&b2), &tol()).unwrap();
        let map = PredictiveMap::new(&s, &tol()).unwrap();
        let b1 = Observable::from_matrix(map.transport(b2.matrix()).hermitian_part(), &tol()).unwrap();
        let joint = joint_distribution(&s, &b1, &b2).unwrap();
        let mass = off_graph_mass(&joint, Some).unwrap();
        least_mass = least_mass.min(mass);
        if !report.is_epr && mass > 1e-3 {
            converse_ok += 1;
        }
    }
    let t = start.elapsed();
    check(
        forward_ok == 100 && converse_ok == 100 && within(t, 30.0),
        format!(
            "forward {forward_ok}/100 (max commutator {worst_commutator:.1e}), converse {converse_ok}/100 (min off-graph mass {least_mass:.3}), {:.2} s",
            t.as_secs_f64()
        ),
    )
}

fn predictive_map_properties() -> Outcome {
    let mut r = rng(DEFAULT_SEED + 3);
    let (mut tv, mut off, mut lin, mut mul) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let k = r.random_range(1..=3);
        let mults: Vec<usize> = (0..k).map(|_| r.random_range(1..=2)).collect();
        let rank: usize = mults.iter().sum();
        let d2 = rank + r.random_range(0..=2);
        let d1 = d2 + r.random_range(0..=2);
        let bs = random_block_structure(d1, d2, &mults, &mut r);
        let s = construct_epr_state(&bs.lambdas, &bs.blocks, &bs.imbedding).unwrap();
        let map = PredictiveMap::new(&s, &tol()).unwrap();

        let b2 = bs.commuting_observable(&mut r, &tol());
        let b1 = map.predict(&b2).unwrap();
        tv = tv.max(total_variation(
            &distribution_h1(&s, &b1).unwrap(),
            &distribution_h2(&s, &b2).unwrap(),
        ));
        off = off.max(epr_correlation_test(&s, &b2, 1e-10, &tol()).unwrap().off_diagonal_mass);

        let b = b2.matrix().clone();
        let b_prime = bs.commuting_observable(&mut r, &tol()).matrix().clone();
        let alpha = C64::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
        let lhs = map.apply_operator(&(&b.scale(alpha) + &b_prime)).unwrap();
        let rhs = &map.apply_operator(&b).unwrap().scale(alpha.conj()) + &map.apply_operator(&b_prime).unwrap();
        lin = lin.max(lhs.distance(&rhs));
        let p1 = map.decomposition().support_projector_h1();
        let product = &p1 * &map.apply_operator(&(&b * &b_prime)).unwrap();
        let composed = &p1 * &(&map.apply_operator(&b).unwrap() * &map.apply_operator(&b_prime).unwrap());
        mul = mul.max(product.distance(&composed));
    }
    check(
        tv <= 1e-10 && off < 1e-10 && lin <= 1e-9 && mul <= 1e-9,
        format!("TV {tv:.1e}, off-diagonal {:.1e}, antilinearity {lin:.1e}, multiplicativity {mul:.1e}", off.abs()),
    )
}

fn bohm_reproduction() -> Outcome {
    let s = common::bohm();
    let z = Observable::from_matrix(common::pauli_z(), &tol()).unwrap();
    let joint = joint_distribution(&s, &z, &z).unwrap();
    let expected = |a: f64, b: f64| if a != b { 0.5 } else { 0.0 };
    let mut err = 0.0f64;
    for a in [-1.0, 1.0] {
        for b in [-1.0, 1.0] {
            err = err.max((joint.prob(a, b) - expected(a, b)).abs());
        }
    }
    let z_err = err;

    let mut r = rng(DEFAULT_SEED + 4);
    for _ in 0..20 {
        let v: [f64; 3] = std::array::from_fn(|_| r.sample(rand_distr::StandardNormal));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let a = Observable::from_matrix(common::spin_along([v[0] / n, v[1] / n, v[2] / n]), &tol()).unwrap();
        let joint = joint_distribution(&s, &a, &a).unwrap();
        for x in [-1.0, 1.0] {
            for y in [-1.0, 1.0] {
                err = err.max((joint.prob(x, y) - expected(x, y)).abs());
            }
        }
    }
    check(err <= 1e-12, format!("spin-z {z_err:.1e}, 20 directions {err:.1e}"))
}

fn group_identity_and_tables() -> Outcome {
    let (mut residual, mut mass) = (0.0f64, 0.0f64);
    for spec in ["2", "3", "5", "2x3", "4x4"] {
        let g = FiniteAbelianGroup::parse(spec).unwrap();
        residual = residual.max(verify_star_identity(&g).2);
        let table = epr_symmetry_table(&g, &tol()).unwrap();
        mass = mass
            .max(off_graph_mass(&table.position, Some).unwrap())
            .max(off_graph_mass(&table.momentum, Some).unwrap());
    }
    check(
        residual <= 1e-12 && mass < 1e-10,
        format!("identity residual {residual:.1e}, off-graph mass {mass:.1e}"),
    )
}

fn full_spectrum(s: &PureState) -> Vec<f64> {
    let dec = schmidt_decompose(s, &tol()).unwrap();
    let mut v: Vec<f64> = dec
        .lambdas()
        .iter()
        .zip(dec.mults())
        .flat_map(|(&l, &m)| std::iter::repeat_n(l, m))
        .collect();
    v.resize(s.dims().1, 0.0);
    v
}

fn spin_commutant_example() -> Outcome {
    let g = FiniteAbelianGroup::cyclic(2).unwrap();
    let (x, p) = spin_observables(&g, 2, &tol()).unwrap();
    let rhos = [
        ComplexMatrix::diag_real(&[0.5, 0.5]),
        ComplexMatrix::from_rows(&[
            vec![C64::new(0.8, 0.0), C64::new(0.1, -0.2)],
            vec![C64::new(0.1, 0.2), C64::new(0.2, 0.0)],
        ])
        .unwrap(),
    ];
    let mut verdicts = Vec::new();
    let mut spectra = Vec::new();
    for rho in &rhos {
        let s = spin_system_state(&g, rho, &tol()).unwrap();
        verdicts.push(is_epr(&s, &[x.clone(), p.clone()], &tol()).unwrap().is_epr);
        spectra.push(full_spectrum(&s));
    }
    let gap = spectra[0]
        .iter()
        .zip(&spectra[1])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    check(
        verdicts.iter().all(|&v| v) && gap > 1e-3,
        format!("is_epr {verdicts:?}, spectral gap {gap:.3}"),
    )
}

fn continuum_limit() -> Outcome {
    let start = Instant::now();
    let f = TestFunction::Gauss;
    let rows = match convergence_sweep(&[101, 401, 1601], &f, &f) {
        Ok(rows) => rows,
        Err(e) => return check(false, format!("sweep failed: {e}")),
    };
    let t = start.elapsed();
    let root_pi = std::f64::consts::PI.sqrt();
    let bound_ok = rows.iter().all(|r| (r.pairing - root_pi).abs() <= 3.0 * r.epsilon);
    let slope = fitted_slope(&rows).unwrap_or(f64::NAN);
    let errors: Vec<String> = rows
        .iter()
        .map(|r| format!("N={} err={:.2e} (3ε={:.2e})", r.n, (r.pairing - root_pi).abs(), 3.0 * r.epsilon))
        .collect();
    check(
        bound_ok && (0.7..=1.3).contains(&slope) && within(t, 20.0),
        format!("{}; slope {slope:.3} (required 0.7..1.3), {:.2} s", errors.join(", "), t.as_secs_f64()),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut r = rng(DEFAULT_SEED + 8);
    let mut err = 0.0f64;
    for i in 0..100 {
        let (d1, d2) = loop {
            let (a, b) = (r.random_range(1..=8), r.random_range(1..=8));
            if a * b <= 64 {
                break (a, b);
            }
        };
        let s = random_state(d1, d2, &mut r);
        let (a, b) = if i % 2 == 0 {
            (random_hermitian(d1, &mut r, &tol()), random_hermitian(d2, &mut r, &tol()))
        } else {
            let spec = |d: usize, r: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
                (0..d).map(|_| r.random_range(-1i32..=1) as f64).collect()
            };
            let va = spec(d1, &mut r);
            let vb = spec(d2, &mut r);
            (
                Observable::from_matrix(epr_core::sample::hermitian_with_spectrum(&va, &mut r), &tol()).unwrap(),
                Observable::from_matrix(epr_core::sample::hermitian_with_spectrum(&vb, &mut r), &tol()).unwrap(),
            )
        };
        let joint = joint_distribution(&s, &a, &b).unwrap();
        for ((va, vb), p) in brute_force_joint(&s, &a, &b) {
            err = err.max((joint.prob(va, vb) - p).abs());
        }
    }
    check(err <= 1e-10, format!("max deviation {err:.1e} over 100 instances"))
}

fn maximal_bijection() -> Outcome {
    let mut r = rng(DEFAULT_SEED + 9);
    let mut err = 0.0f64;
    let mut failures = 0;
    for &d in &[2usize, 3, 4, 8] {
        for _ in 0..50 {
            let lambda = 1.0 / d as f64;
            let blocks = [random_unitary(d, &mut r)];
            let imbedding = epr_core::epr::AntiunitaryImbedding::from_matrix(random_isometry(d, d, &mut r)).unwrap();
            let s = construct_epr_state(&[lambda], &blocks, &imbedding).unwrap();
            match bijection_check(&s, &tol()) {
                Ok(u) => {
                    let back = construct_epr_state(&[lambda], &[ComplexMatrix::identity(d)], &u).unwrap();
                    err = err.max(back.coeffs().distance(s.coeffs()));
                }
                Err(_) => failures += 1,
            }
        }
    }
    let pauli = [
        Observable::from_matrix(common::pauli_x(), &tol()).unwrap(),
        Observable::from_matrix(common::pauli_z(), &tol()).unwrap(),
    ];
    let pauli_scalar = commutant_is_scalar(&pauli, &tol()).unwrap();
    let g = FiniteAbelianGroup::cyclic(2).unwrap();
    let (x, p) = spin_observables(&g, 2, &tol()).unwrap();
    let spin_scalar = commutant_is_scalar(&[x, p], &tol()).unwrap();
    check(
        failures == 0 && err <= 1e-10 && pauli_scalar && !spin_scalar,
        format!(
            "round trip {err:.1e} ({failures} rejected), Pauli commutant scalar {pauli_scalar}, spin commutant scalar {spin_scalar}"
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("canonical isomorphism", canonical_isomorphism),
        ("EPR criterion forward and converse", epr_criterion_both_directions),
        ("predictive map", predictive_map_properties),
        ("Bohm spin pair", bohm_reproduction),
        ("group state identity and tables", group_identity_and_tables),
        ("spin commutant example", spin_commutant_example),
        ("continuum limit", continuum_limit),
        ("joint distribution oracle", oracle_equivalence),
        ("maximal EPR bijection", maximal_bijection),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        let tag = if out.passed { "PASS" } else { "FAIL" };
        println!("criterion {} [{tag}] {name}: {}", k + 1, out.detail);
        if !out.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
