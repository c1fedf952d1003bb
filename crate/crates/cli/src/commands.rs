use epr_core::continuum::{convergence_sweep, fitted_slope, SweepRow, TestFunction};
use epr_core::epr::{
    commutant_dimension, construct_epr_state, is_epr, schmidt_decompose, PredictiveMap, SpectrumTable,
};
use epr_core::finite::{epr_symmetry_table, spin_observables, spin_system_state};
use epr_core::io::{matrix_to_json, observable_from_json, observable_to_file, state_to_file};
use epr_core::measurement::{joint_distribution, DiscreteJointDistribution};
use epr_core::numerics::ComplexMatrix;
use epr_core::sample::{ginibre, random_block_structure};
use epr_core::{Observable, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::inputs::{bohm_pair, load_observable, load_state, parse_group};
use crate::{CliError, Command, Format, RunConfig};

enum Output {
    Json(Value),
    Table(Value, String),
}

fn tolerances(config: &RunConfig) -> Result<Tolerances, CliError> {
    let tol = Tolerances::default();
    match config.tol_commutator {
        Some(t) => tol
            .with_commutator_tol(t)
            .map_err(|e| CliError::invalid("tol-commutator", e)),
        None => Ok(tol),
    }
}

fn to_json(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("plain data serializes")
}

fn csv_table<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("plain rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is UTF-8")
}

#[derive(Serialize)]
struct LabeledRow<'a> {
    table: &'a str,
    a: f64,
    b: f64,
    p: f64,
}

fn labeled_rows<'a>(tables: &[(&'a str, &DiscreteJointDistribution)]) -> Vec<LabeledRow<'a>> {
    tables
        .iter()
        .flat_map(|(name, joint)| {
            joint.rows().into_iter().map(move |r| LabeledRow {
                table: name,
                a: r.a,
                b: r.b,
                p: r.p,
            })
        })
        .collect()
}

pub(crate) fn execute(config: &RunConfig) -> Result<String, CliError> {
    let tol = tolerances(config)?;
    let output = match &config.command {
        Command::Analyze { state } => analyze(state, &tol)?,
        Command::CheckEpr { state, obs } => check_epr(state, obs, &tol)?,
        Command::Construct {
            lambdas,
            mults,
            dim1,
            dim2,
        } => construct(lambdas, mults, *dim1, *dim2, config.seed)?,
        Command::Predict { state, obs } => predict(state, obs, &tol)?,
        Command::Measure { state, obs } => measure(state, obs, &tol)?,
        Command::Bohm { group } => bohm(group.as_deref(), &tol)?,
        Command::SpinExample {
            group,
            spin_dim,
            rho,
        } => spin_example(group, *spin_dim, rho, config.seed, &tol)?,
        Command::Limit { ns, f, g } => limit(ns, f, g)?,
    };
    match (output, config.format) {
        (Output::Json(v) | Output::Table(v, _), Format::Json) => {
            Ok(serde_json::to_string_pretty(&v).expect("JSON values serialize") + "\n")
        }
        (Output::Table(_, csv), Format::Csv) => Ok(csv),
        (Output::Json(_), Format::Csv) => Err(CliError::invalid(
            "format",
            "csv output is available for measure, bohm and limit",
        )),
    }
}

fn analyze(state: &str, tol: &Tolerances) -> Result<Output, CliError> {
    let s = load_state(state)?;
    let dec = schmidt_decompose(&s, tol).map_err(|e| CliError::from_core(e, "state", "schmidt_decompose"))?;
    let (dim1, dim2) = s.dims();
    let mut report = to_json(SpectrumTable::from(&dec));
    report["dim1"] = json!(dim1);
    report["dim2"] = json!(dim2);
    report["rank"] = json!(dec.rank());
    Ok(Output::Json(report))
}

fn check_epr(state: &str, obs: &[String], tol: &Tolerances) -> Result<Output, CliError> {
    let s = load_state(state)?;
    let observables = obs
        .iter()
        .map(|o| load_observable("obs", o, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let report = is_epr(&s, &observables, tol).map_err(|e| CliError::from_core(e, "obs", "is_epr"))?;
    Ok(Output::Json(json!({
        "is_epr": report.is_epr,
        "observables": report.per_observable,
        "spectrum": SpectrumTable::from(&report.decomposition),
    })))
}

fn construct(
    lambdas: &[f64],
    mults: &[usize],
    dim1: Option<usize>,
    dim2: Option<usize>,
    seed: u64,
) -> Result<Output, CliError> {
    if lambdas.len() != mults.len() {
        return Err(CliError::invalid(
            "mults",
            format!("{} multiplicities for {} weights", mults.len(), lambdas.len()),
        ));
    }
    if mults.contains(&0) {
        return Err(CliError::invalid("mults", "multiplicities must be positive"));
    }
    let rank: usize = mults.iter().sum();
    let d2 = dim2.unwrap_or(rank);
    let d1 = dim1.unwrap_or(d2);
    if d2 < rank {
        return Err(CliError::invalid("dim2", format!("{d2} < total multiplicity {rank}")));
    }
    if d1 < rank {
        return Err(CliError::invalid("dim1", format!("{d1} < total multiplicity {rank}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bs = random_block_structure(d1, d2, mults, &mut rng);
    let s = construct_epr_state(lambdas, &bs.blocks, &bs.imbedding)
        .map_err(|e| CliError::from_core(e, "lambdas", "construct_epr_state"))?;
    Ok(Output::Json(to_json(state_to_file(&s))))
}

fn predict(state: &str, obs: &str, tol: &Tolerances) -> Result<Output, CliError> {
    let s = load_state(state)?;
    let b2 = load_observable("obs", obs, tol)?;
    let map = PredictiveMap::new(&s, tol).map_err(|e| CliError::from_core(e, "state", "schmidt_decompose"))?;
    let b1 = map.predict(&b2).map_err(|e| CliError::from_core(e, "obs", "predict"))?;
    Ok(Output::Json(to_json(observable_to_file(&b1))))
}

fn measure(state: &str, obs: &[String], tol: &Tolerances) -> Result<Output, CliError> {
    let [a, b] = obs else {
        return Err(CliError::invalid("obs", format!("expected 2 observables, got {}", obs.len())));
    };
    let s = load_state(state)?;
    let a1 = load_observable("obs", a, tol)?;
    let b2 = load_observable("obs", b, tol)?;
    let joint = joint_distribution(&s, &a1, &b2).map_err(|e| CliError::from_core(e, "obs", "joint_distribution"))?;
    Ok(Output::Table(joint.to_json(), csv_table(&joint.rows())))
}

fn bohm(group: Option<&str>, tol: &Tolerances) -> Result<Output, CliError> {
    let numeric = |op: &'static str| move |e| CliError::from_core(e, "group", op);
    let tables: Vec<(&str, DiscreteJointDistribution)> = match group {
        None => {
            let s = bohm_pair();
            let z = load_observable("obs", "pauli-z", tol)?;
            let x = load_observable("obs", "pauli-x", tol)?;
            vec![
                ("spin-z", joint_distribution(&s, &z, &z).map_err(numeric("joint_distribution"))?),
                ("spin-x", joint_distribution(&s, &x, &x).map_err(numeric("joint_distribution"))?),
            ]
        }
        Some(spec) => {
            let g = parse_group("group", spec)?;
            let t = epr_symmetry_table(&g, tol).map_err(numeric("epr_symmetry_table"))?;
            vec![("position", t.position), ("momentum", t.momentum)]
        }
    };
    let refs: Vec<(&str, &DiscreteJointDistribution)> = tables.iter().map(|(n, t)| (*n, t)).collect();
    let mut json = serde_json::Map::new();
    for (name, t) in &tables {
        json.insert((*name).to_owned(), t.to_json());
    }
    Ok(Output::Table(Value::Object(json), csv_table(&labeled_rows(&refs))))
}

/// G·G†/Tr for a seeded Ginibre G.
fn random_density(dim: usize, seed: u64) -> ComplexMatrix {
    let g = ginibre(dim, dim, &mut ChaCha8Rng::seed_from_u64(seed));
    let rho = &g * &g.dagger();
    rho.scale_real(1.0 / rho.trace().re).hermitian_part()
}

fn spin_example(
    group: &str,
    spin_dim: usize,
    rho_files: &[String],
    seed: u64,
    tol: &Tolerances,
) -> Result<Output, CliError> {
    let g = parse_group("group", group)?;
    if spin_dim == 0 {
        return Err(CliError::invalid("spin-dim", "must be positive"));
    }
    let rhos: Vec<ComplexMatrix> = if rho_files.is_empty() {
        vec![
            ComplexMatrix::identity(spin_dim).scale_real(1.0 / spin_dim as f64),
            random_density(spin_dim, seed),
        ]
    } else {
        rho_files
            .iter()
            .map(|path| {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::invalid("rho", format!("{path}: {e}")))?;
                let o = observable_from_json(&text, tol).map_err(|e| CliError::invalid("rho", format!("{path}: {e}")))?;
                if o.dim() != spin_dim {
                    return Err(CliError::invalid("rho", format!("{path}: dimension {} != spin-dim {spin_dim}", o.dim())));
                }
                Ok(o.matrix().clone())
            })
            .collect::<Result<_, _>>()?
    };
    let (x, p) = spin_observables(&g, spin_dim, tol).map_err(|e| CliError::from_core(e, "group", "spin_observables"))?;
    let pair: [Observable; 2] = [x, p];
    let commutant = commutant_dimension(&pair, tol).map_err(|e| CliError::from_core(e, "group", "commutant_dimension"))?;

    let mut states = Vec::new();
    for rho in &rhos {
        let s = spin_system_state(&g, rho, tol).map_err(|e| CliError::from_core(e, "rho", "spin_system_state"))?;
        let report = is_epr(&s, &pair, tol).map_err(|e| CliError::from_core(e, "rho", "is_epr"))?;
        states.push(json!({
            "rho": matrix_to_json(rho),
            "is_epr": report.is_epr,
            "observables": report.per_observable,
            "spectrum": SpectrumTable::from(&report.decomposition),
        }));
    }
    Ok(Output::Json(json!({
        "group": g.orders(),
        "spin_dim": spin_dim,
        "commutant_dimension": commutant,
        "commutant_is_scalar": commutant == 1,
        "states": states,
    })))
}

fn limit(ns: &[usize], f: &str, g: &str) -> Result<Output, CliError> {
    let f: TestFunction = f.parse().map_err(|e| CliError::invalid("f", e))?;
    let g: TestFunction = g.parse().map_err(|e| CliError::invalid("g", e))?;
    let rows: Vec<SweepRow> = convergence_sweep(ns, &f, &g).map_err(|e| CliError::from_core(e, "ns", "convergence_sweep"))?;
    let json = json!({
        "f": f.to_string(),
        "g": g.to_string(),
        "rows": rows,
        "slope": fitted_slope(&rows),
    });
    Ok(Output::Table(json, csv_table(&rows)))
}
