//! The renormalized limit N^{1/2}·σ_N → ∫ f(x)g(x) dx on the real line.
//!
//! L²(ℤ_N) (N odd) is imbedded into L²(ℝ) by √N·δ_r ↦ ε^{-1/2}·χ_r, where
//! ε = (2π/N)^{1/2} and χ_r is the indicator of ((r−½)ε, (r+½)ε) for
//! |r| ≤ (N−1)/2. The image of the maximal EPR state is
//! σ_N = (2π)^{-1/2} Σ_r χ_r⊗χ_r, and its pairing with f⊗g is
//! (2π)^{-1/2} Σ_r ⟨χ_r, f⟩⟨χ_r, g⟩. σ_N itself is never tabulated.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::quadrature::{adaptive, GaussLegendre};

/// Gauss–Legendre order used inside each cell.
pub const CELL_ORDER: usize = 8;
/// Default half-width of the truncated domain for [`limit_target`].
pub const DOMAIN_HALF_WIDTH: f64 = 40.0;
/// Bound on the neglected tail, relative to max(1, |target|).
pub const TAIL_TOL: f64 = 1e-12;
/// Local error target of the adaptive reference integral.
pub const REFERENCE_TOL: f64 = 1e-13;

fn cell_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(CELL_ORDER))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridEmbedding {
    n: usize,
    epsilon: f64,
}

impl GridEmbedding {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n.is_multiple_of(2) {
            return Err(Error::InvalidGridSize(n));
        }
        Ok(Self {
            n,
            epsilon: (TAU / n as f64).sqrt(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// (N−1)/2.
    pub fn half(&self) -> i64 {
        (self.n as i64 - 1) / 2
    }

    pub fn cell(&self, r: i64) -> Result<(f64, f64)> {
        let max = self.half();
        if r.abs() > max {
            return Err(Error::CellOutOfRange { r, max });
        }
        let r = r as f64;
        Ok(((r - 0.5) * self.epsilon, (r + 0.5) * self.epsilon))
    }

    /// Cell indices −(N−1)/2, …, (N−1)/2.
    pub fn indices(&self) -> impl Iterator<Item = i64> {
        -self.half()..=self.half()
    }
}

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real test function on ℝ.
#[derive(Clone)]
pub enum TestFunction {
    /// e^{−x²/2}
    Gauss,
    /// x·e^{−x²/2}
    XGauss,
    /// e^{−(x−c)²/2}
    ShiftedGauss(f64),
    /// Normalized Hermite function ψ_n.
    Hermite(usize),
    Zero,
    /// Constant function; not integrable over ℝ.
    Constant(f64),
    /// f(x) = x; not integrable over ℝ.
    Identity,
    Custom {
        name: String,
        center: f64,
        f: Evaluator,
    },
}

impl TestFunction {
    pub fn custom(
        name: impl Into<String>,
        center: f64,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        TestFunction::Custom {
            name: name.into(),
            center,
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::Gauss => (-0.5 * x * x).exp(),
            TestFunction::XGauss => x * (-0.5 * x * x).exp(),
            TestFunction::ShiftedGauss(c) => (-0.5 * (x - c) * (x - c)).exp(),
            TestFunction::Hermite(n) => hermite_function(*n, x),
            TestFunction::Zero => 0.0,
            TestFunction::Constant(c) => *c,
            TestFunction::Identity => x,
            TestFunction::Custom { f, .. } => f(x),
        }
    }

    /// Point around which the function is concentrated.
    pub fn center(&self) -> f64 {
        match self {
            TestFunction::ShiftedGauss(c) => *c,
            TestFunction::Custom { center, .. } => *center,
            _ => 0.0,
        }
    }
}

/// ψ_n(x) = (2ⁿ n! √π)^{-1/2} H_n(x) e^{−x²/2} by the stable recurrence
/// ψ_{k+1} = √(2/(k+1))·x·ψ_k − √(k/(k+1))·ψ_{k−1}.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for k in 0..n {
        let k = k as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * x * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Gauss => write!(f, "gauss"),
            TestFunction::XGauss => write!(f, "xgauss"),
            TestFunction::ShiftedGauss(c) => write!(f, "shifted-gauss:{c}"),
            TestFunction::Hermite(n) => write!(f, "hermite:{n}"),
            TestFunction::Zero => write!(f, "zero"),
            TestFunction::Constant(c) => write!(f, "const:{c}"),
            TestFunction::Identity => write!(f, "x"),
            TestFunction::Custom { name, .. } => write!(f, "{name}"),
        }
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    /// Accepts gauss, xgauss, zero, x, shifted-gauss:c, hermite:n, const:c.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::PreconditionFailed(format!("unknown test function `{s}`"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("gauss", None) => Ok(TestFunction::Gauss),
            ("xgauss", None) => Ok(TestFunction::XGauss),
            ("zero", None) => Ok(TestFunction::Zero),
            ("x", None) => Ok(TestFunction::Identity),
            ("shifted-gauss", Some(c)) => c
                .parse::<f64>()
                .ok()
                .filter(|c| c.is_finite())
                .map(TestFunction::ShiftedGauss)
                .ok_or_else(bad),
            ("hermite", Some(n)) => n.parse().map(TestFunction::Hermite).map_err(|_| bad()),
            ("const", Some(c)) => c
                .parse::<f64>()
                .ok()
                .filter(|c| c.is_finite())
                .map(TestFunction::Constant)
                .ok_or_else(bad),
            _ => Err(bad()),
        }
    }
}

/// ⟨χ_r, f⟩ = ∫ f over cell r, by 8-point Gauss–Legendre.
pub fn cell_pairing(emb: &GridEmbedding, r: i64, f: &TestFunction) -> Result<f64> {
    let (a, b) = emb.cell(r)?;
    Ok(cell_rule().integrate(|x| f.eval(x), a, b))
}

/// ε^{-1} Σ_r ⟨χ_r, f⟩⟨χ_r, g⟩ = N^{1/2}·σ_N(f⊗g).
pub fn renormalized_pairing(emb: &GridEmbedding, f: &TestFunction, g: &TestFunction) -> f64 {
    renormalized_pairing_with(Execution::default(), emb, f, g)
}

/// As [`renormalized_pairing`]; per-cell products are evaluated under `exec`
/// and summed in cell order, so the result does not depend on `exec`.
pub fn renormalized_pairing_with(
    exec: Execution,
    emb: &GridEmbedding,
    f: &TestFunction,
    g: &TestFunction,
) -> f64 {
    let half = emb.half();
    let rule = cell_rule();
    let products = exec.map_range(0..emb.n(), |k| {
        let r = k as i64 - half;
        let (a, b) = emb.cell(r).expect("index within grid");
        rule.integrate(|x| f.eval(x), a, b) * rule.integrate(|x| g.eval(x), a, b)
    });
    products.iter().sum::<f64>() / emb.epsilon()
}

/// ∫ f·g over ℝ by adaptive quadrature on a window around the functions'
/// centers, after checking that the integrand beyond it is negligible.
pub fn limit_target(f: &TestFunction, g: &TestFunction) -> Result<f64> {
    let lo = f.center().min(g.center()) - DOMAIN_HALF_WIDTH;
    let hi = f.center().max(g.center()) + DOMAIN_HALF_WIDTH;
    let h = |x: f64| f.eval(x) * g.eval(x);

    let rule = cell_rule();
    let panels = 80;
    let width = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let a = lo + k as f64 * width;
        total += adaptive(rule, &h, a, a + width, REFERENCE_TOL / panels as f64)?;
    }

    // |h| at and beyond the window edges bounds the tail for integrands that
    // decay at least like a Gaussian there.
    let scale = TAIL_TOL * total.abs().max(1.0);
    for t in [0.0, 0.5, 1.0, 2.0, 4.0] {
        for x in [lo - t * DOMAIN_HALF_WIDTH, hi + t * DOMAIN_HALF_WIDTH] {
            let v = h(x);
            if !v.is_finite() || v.abs() * DOMAIN_HALF_WIDTH > scale {
                return Err(Error::QuadratureFailure(format!(
                    "tail of {f}·{g} is not negligible at x = {x}"
                )));
            }
        }
    }
    Ok(total)
}

/// One row of a convergence sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub epsilon: f64,
    pub pairing: f64,
    pub target: f64,
    pub abs_error: f64,
}

pub fn convergence_sweep(ns: &[usize], f: &TestFunction, g: &TestFunction) -> Result<Vec<SweepRow>> {
    convergence_sweep_with(Execution::default(), ns, f, g)
}

/// Rows are computed independently under `exec` and returned in the order of `ns`.
pub fn convergence_sweep_with(
    exec: Execution,
    ns: &[usize],
    f: &TestFunction,
    g: &TestFunction,
) -> Result<Vec<SweepRow>> {
    if ns.is_empty() {
        return Err(Error::InvalidSweep("no grid sizes".into()));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSweep(format!("{ns:?} is not strictly increasing")));
    }
    let grids = ns
        .iter()
        .map(|&n| GridEmbedding::new(n))
        .collect::<Result<Vec<_>>>()?;
    let target = limit_target(f, g)?;
    Ok(exec.map(&grids, |emb| {
        let pairing = renormalized_pairing_with(exec, emb, f, g);
        SweepRow {
            n: emb.n(),
            epsilon: emb.epsilon(),
            pairing,
            target,
            abs_error: (pairing - target).abs(),
        }
    }))
}

/// Least-squares slope of ln(abs_error) against ln(ε); `None` when fewer than
/// two rows have a positive error.
pub fn fitted_slope(rows: &[SweepRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.abs_error > 0.0)
        .map(|r| (r.epsilon.ln(), r.abs_error.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// ∫ χ_r·χ_s, the length of the overlap of the two cells.
pub fn cell_overlap(emb: &GridEmbedding, r: i64, s: i64) -> Result<f64> {
    let (a, b) = emb.cell(r)?;
    let (c, d) = emb.cell(s)?;
    if r == s {
        return Ok(b - a);
    }
    Ok((b.min(d) - a.max(c)).max(0.0))
}

/// ‖σ_N‖ for σ_N = (2π)^{-1/2} Σ_r χ_r⊗χ_r, from the cell Gram matrix
/// (diagonal, since cells are disjoint).
pub fn sigma_n_norm(emb: &GridEmbedding) -> f64 {
    let sum: f64 = emb
        .indices()
        .map(|r| {
            let len = cell_overlap(emb, r, r).expect("index within grid");
            len * len
        })
        .sum();
    (sum / TAU).sqrt()
}

/// ‖N^{1/2}·σ_N‖ = N^{1/2}·‖σ_N‖.
pub fn renormalized_norm(emb: &GridEmbedding) -> f64 {
    (emb.n() as f64).sqrt() * sigma_n_norm(emb)
}
