//! Correlation witness built from paired local measurements, its critical
//! noise level on the noisy two-qubit family, and weight optimization.

use std::f64::consts::FRAC_PI_4;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::conditional::BipartiteState;
use crate::error::{Error, Result};
use crate::linalg::{
    c, hermitian_eigenvalues, identity, kron, partial_transpose, pauli_x, pauli_y, pauli_z,
    CMatrix, Subsystem,
};
use crate::measurements::{noisy_pure_family, observable_measurement, Povm, WeightedEnsemble};
use crate::optimize::{minimize_on_simplex, OptimizerConfig};
use crate::random::random_simplex;
use crate::tolerance::Tolerances;
use crate::view::{ensemble_norm, view_operator};

/// Paired local measurements `M_theta^A (x) M_theta^B` with shared weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSpec {
    dims: (usize, usize),
    pairs: Vec<(Povm, Povm)>,
    weights: Vec<f64>,
}

impl WitnessSpec {
    pub fn new(pairs: Vec<(Povm, Povm)>, weights: Vec<f64>) -> Result<Self> {
        let Some((a0, b0)) = pairs.first() else {
            return Err(Error::InvalidEnsemble(
                "witness needs at least one measurement pair".into(),
            ));
        };
        let dims = (a0.dim(), b0.dim());
        if weights.len() != pairs.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} weights for {} pairs",
                weights.len(),
                pairs.len()
            )));
        }
        for (k, (a, b)) in pairs.iter().enumerate() {
            if (a.dim(), b.dim()) != dims {
                return Err(Error::InvalidEnsemble(format!(
                    "pair {k} acts on {}x{}, expected {}x{}",
                    a.dim(),
                    b.dim(),
                    dims.0,
                    dims.1
                )));
            }
            if a.len() != b.len() {
                return Err(Error::InvalidEnsemble(format!(
                    "pair {k} has {} outcomes on A and {} on B",
                    a.len(),
                    b.len()
                )));
            }
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidEnsemble(format!(
                "weight {w} is not a nonnegative number"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidEnsemble(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(Self {
            dims,
            pairs,
            weights,
        })
    }

    pub fn equal_weights(pairs: Vec<(Povm, Povm)>) -> Result<Self> {
        let n = pairs.len().max(1);
        Self::new(pairs, vec![1.0 / n as f64; n])
    }

    /// Each observable (squaring to one) becomes its two-outcome eigenbasis
    /// measurement.
    pub fn from_observables(observables: &[(CMatrix, CMatrix)], weights: Vec<f64>) -> Result<Self> {
        let tol = Tolerances::default();
        let pairs = observables
            .iter()
            .map(|(a, b)| {
                Ok((
                    observable_measurement(a, &tol)?,
                    observable_measurement(b, &tol)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pairs, weights)
    }

    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        Self::new(self.pairs.clone(), weights)
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn pairs(&self) -> &[(Povm, Povm)] {
        &self.pairs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Local ensemble on one side, carrying the shared weights.
    pub fn side_ensemble(&self, side: Subsystem) -> WeightedEnsemble {
        let povms = self
            .pairs
            .iter()
            .map(|(a, b)| match side {
                Subsystem::A => a.clone(),
                Subsystem::B => b.clone(),
            })
            .collect();
        WeightedEnsemble::new(povms, self.weights.clone())
            .expect("weights validated on construction")
    }

    /// `J_{i|theta} = (M_i^A - tr(M_i^A)/d_A) (x) (M_i^B - tr(M_i^B)/d_B)`.
    pub fn detection_operators(&self) -> Vec<Vec<CMatrix>> {
        let (da, db) = self.dims;
        self.pairs
            .iter()
            .map(|(a, b)| {
                a.effects()
                    .iter()
                    .zip(b.effects())
                    .map(|(ea, eb)| kron(&shifted(ea, da), &shifted(eb, db)))
                    .collect()
            })
            .collect()
    }
}

fn shifted(e: &CMatrix, d: usize) -> CMatrix {
    let t = e.trace() / c(d as f64, 0.0);
    e - identity(d) * t
}

fn check_dims(w: &WitnessSpec, rho: &BipartiteState) -> Result<()> {
    if rho.dims() != w.dims {
        return Err(Error::ShapeMismatch {
            left: w.dims,
            right: rho.dims(),
        });
    }
    Ok(())
}

/// `sum_i |tr(J_{i|theta} rho)|` for every pair, unweighted.
pub fn pair_correlations(w: &WitnessSpec, rho: &BipartiteState) -> Result<Vec<f64>> {
    check_dims(w, rho)?;
    let m = rho.matrix();
    Ok(w.detection_operators()
        .iter()
        .map(|ops| ops.iter().map(|j| (j * m).trace().norm()).sum())
        .collect())
}

/// `J(rho) = sum_theta w_theta sum_i |tr(J_{i|theta} rho)|`.
pub fn correlation_measure(w: &WitnessSpec, rho: &BipartiteState) -> Result<f64> {
    Ok(pair_correlations(w, rho)?
        .iter()
        .zip(&w.weights)
        .map(|(c, w)| c * w)
        .sum())
}

/// `sqrt(||g_A|| (1 - 1/d_A) ||g_B|| (1 - 1/d_B))`, attained by no separable state beyond.
pub fn separable_bound(w: &WitnessSpec, tol: &Tolerances) -> f64 {
    let (da, db) = w.dims;
    let side = |s, d: usize| {
        ensemble_norm(&w.side_ensemble(s), tol).expect("validated local ensembles")
            * (1.0 - 1.0 / d as f64)
    };
    (side(Subsystem::A, da) * side(Subsystem::B, db)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessAudit {
    pub correlation: f64,
    pub bound: f64,
    /// `correlation - bound`; positive beyond tolerance certifies entanglement.
    pub margin: f64,
    pub entangled: bool,
}

pub fn witness_audit(
    w: &WitnessSpec,
    rho: &BipartiteState,
    tol: &Tolerances,
) -> Result<WitnessAudit> {
    let correlation = correlation_measure(w, rho)?;
    let bound = separable_bound(w, tol);
    let margin = correlation - bound;
    Ok(WitnessAudit {
        correlation,
        bound,
        margin,
        entangled: margin > tol.state,
    })
}

/// How a critical noise level was located.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaMethod {
    Ratio,
    Bisection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalEta {
    /// Smallest `eta` at which the witness fires, clamped to `[0, 1]`.
    pub eta: f64,
    /// `bound / J(rho_{1,beta})` before clamping.
    pub unclamped: f64,
    pub correlation_at_one: f64,
    pub bound: f64,
    pub method: EtaMethod,
}

/// Critical `eta` on `eta |psi(beta)><psi(beta)| + (1 - eta) 1/4`.
///
/// Uses `bound / J(rho_{1,beta})` when `J` is verified linear in `eta`,
/// and 60 bisection steps otherwise.
pub fn critical_eta(w: &WitnessSpec, beta: f64, tol: &Tolerances) -> Result<CriticalEta> {
    if w.dims != (2, 2) {
        return Err(Error::Precondition(format!(
            "noisy family lives on 2x2, witness acts on {}x{}",
            w.dims.0, w.dims.1
        )));
    }
    let j = |eta: f64| -> Result<f64> { correlation_measure(w, &noisy_pure_family(eta, beta)?) };
    let j1 = j(1.0)?;
    let bound = separable_bound(w, tol);
    if j1 <= tol.zero {
        return Err(Error::NoDetection);
    }
    let unclamped = bound / j1;
    if (j(0.5)? - 0.5 * j1).abs() < 1e-12 {
        return Ok(CriticalEta {
            eta: unclamped.clamp(0.0, 1.0),
            unclamped,
            correlation_at_one: j1,
            bound,
            method: EtaMethod::Ratio,
        });
    }
    let eta = if j1 <= bound {
        1.0
    } else {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if j(mid)? > bound {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    Ok(CriticalEta {
        eta,
        unclamped,
        correlation_at_one: j1,
        bound,
        method: EtaMethod::Bisection,
    })
}

fn min_pt_eigenvalue(eta: f64, beta: f64) -> f64 {
    let rho = noisy_pure_family(eta, beta).expect("eta and beta in range");
    let pt = partial_transpose(rho.matrix(), (2, 2), Subsystem::B).expect("2x2");
    hermitian_eigenvalues(&pt)[0]
}

/// Smallest `eta` at which the noisy family has a non-positive partial
/// transpose, located by bisection to `1e-12`. Returns 1 when the state is
/// PPT all the way to `eta = 1`.
pub fn ppt_critical_eta(beta: f64) -> Result<f64> {
    noisy_pure_family(1.0, beta)?;
    if min_pt_eigenvalue(1.0, beta) > -1e-14 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if min_pt_eigenvalue(mid, beta) < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Precomputed pieces for evaluating the critical `eta` at many weightings.
struct EtaObjective {
    dims: (usize, usize),
    views: Vec<(CMatrix, CMatrix)>,
    correlations: Vec<f64>,
}

impl EtaObjective {
    fn new(w: &WitnessSpec, beta: f64, tol: &Tolerances) -> Result<Self> {
        let views = w
            .pairs
            .iter()
            .map(|(a, b)| {
                Ok((
                    view_operator(a, tol)?.matrix().clone(),
                    view_operator(b, tol)?.matrix().clone(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dims: w.dims,
            views,
            correlations: pair_correlations(w, &noisy_pure_family(1.0, beta)?)?,
        })
    }

    fn eval(&self, weights: &[f64]) -> f64 {
        let (da, db) = self.dims;
        let mut ga = CMatrix::zeros(da * da, da * da);
        let mut gb = CMatrix::zeros(db * db, db * db);
        for (w, (a, b)) in weights.iter().zip(&self.views) {
            ga += a * c(*w, 0.0);
            gb += b * c(*w, 0.0);
        }
        let top = |g: &CMatrix| hermitian_eigenvalues(g).last().copied().unwrap_or(0.0);
        let bound = (top(&ga) * (1.0 - 1.0 / da as f64) * top(&gb) * (1.0 - 1.0 / db as f64))
            .max(0.0)
            .sqrt();
        let j1: f64 = weights
            .iter()
            .zip(&self.correlations)
            .map(|(w, c)| w * c)
            .sum();
        if j1 <= 0.0 {
            f64::INFINITY
        } else {
            bound / j1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightOptimum {
    pub weights: Vec<f64>,
    pub eta_opt: f64,
    pub eta_equ: f64,
    /// Best objective value found, before clamping.
    pub objective: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Minimize the critical `eta` over the weight simplex. The reported
/// `eta_opt` never exceeds the equal-weight value.
pub fn optimize_weights(
    w: &WitnessSpec,
    beta: f64,
    config: &OptimizerConfig,
    tol: &Tolerances,
) -> Result<WeightOptimum> {
    if w.len() < 2 {
        return Err(Error::Precondition(
            "weight optimization needs at least two pairs".into(),
        ));
    }
    let n = w.len();
    let equal = w.with_weights(vec![1.0 / n as f64; n])?;
    let eta_equ = eta_or_one(critical_eta(&equal, beta, tol))?;
    let objective = EtaObjective::new(w, beta, tol)?;
    let (weights, best) = minimize_on_simplex(n, |x| objective.eval(x), config);
    let clamped = best.value.clamp(0.0, 1.0);
    let (weights, eta_opt) = if clamped <= eta_equ {
        (weights, clamped)
    } else {
        (equal.weights.clone(), eta_equ)
    };
    Ok(WeightOptimum {
        weights,
        eta_opt,
        eta_equ,
        objective: best.value,
        converged: best.converged,
        iterations: best.iterations,
    })
}

fn eta_or_one(r: Result<CriticalEta>) -> Result<f64> {
    match r {
        Ok(c) => Ok(c.eta),
        Err(Error::NoDetection) => Ok(1.0),
        Err(e) => Err(e),
    }
}

/// Largest observed `|bound(w') - bound(w)| / |w' - w|_1` over random
/// perturbations `w' = (1 - delta) w + delta u` with `u` uniform on the simplex.
pub fn bound_sensitivity<R: Rng + ?Sized>(
    w: &WitnessSpec,
    delta: f64,
    samples: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<f64> {
    let base = separable_bound(w, tol);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let u = random_simplex(w.len(), rng);
        let moved: Vec<f64> = w
            .weights
            .iter()
            .zip(&u)
            .map(|(a, b)| (1.0 - delta) * a + delta * b)
            .collect();
        let dist: f64 = moved
            .iter()
            .zip(&w.weights)
            .map(|(a, b)| (a - b).abs())
            .sum();
        let total: f64 = moved.iter().sum();
        let moved: Vec<f64> = moved.into_iter().map(|x| x / total).collect();
        if dist > 0.0 {
            let b = separable_bound(&w.with_weights(moved)?, tol);
            worst = worst.max((b - base).abs() / dist);
        }
    }
    Ok(worst)
}

/// Observable triples scanned against the noisy family. Each shares
/// `sigma_y (x) sigma_y` and `sigma_z (x) sigma_z`; the third pair differs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ObservableCase {
    /// `sigma_x (x) sigma_x`
    A,
    /// `sigma_z (x) sigma_x`
    B,
    /// `n (x) n` with `n = sigma_z/2 + sqrt(3)/2 sigma_x`
    C,
    /// `sigma_z (x) sigma_z` again
    D,
}

impl ObservableCase {
    pub const ALL: [ObservableCase; 4] = [
        ObservableCase::A,
        ObservableCase::B,
        ObservableCase::C,
        ObservableCase::D,
    ];

    pub fn observables(self) -> Vec<(CMatrix, CMatrix)> {
        let third = match self {
            ObservableCase::A => (pauli_x(), pauli_x()),
            ObservableCase::B => (pauli_z(), pauli_x()),
            ObservableCase::C => {
                let n = pauli_z() * c(0.5, 0.0) + pauli_x() * c(3f64.sqrt() / 2.0, 0.0);
                (n.clone(), n)
            }
            ObservableCase::D => (pauli_z(), pauli_z()),
        };
        vec![(pauli_y(), pauli_y()), (pauli_z(), pauli_z()), third]
    }

    pub fn witness(self) -> WitnessSpec {
        WitnessSpec::from_observables(&self.observables(), vec![1.0 / 3.0; 3])
            .expect("Pauli observables")
    }

    pub fn letter(self) -> char {
        match self {
            ObservableCase::A => 'a',
            ObservableCase::B => 'b',
            ObservableCase::C => 'c',
            ObservableCase::D => 'd',
        }
    }
}

impl FromStr for ObservableCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(ObservableCase::A),
            "b" => Ok(ObservableCase::B),
            "c" => Ok(ObservableCase::C),
            "d" => Ok(ObservableCase::D),
            other => Err(Error::Parse(format!(
                "unknown case {other:?}, expected a, b, c or d"
            ))),
        }
    }
}

/// One `beta` of a critical-noise scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaScanRow {
    pub beta: f64,
    pub eta_star: f64,
    pub eta_equ: f64,
    pub eta_opt: f64,
    #[serde(rename = "J_at_eta1")]
    pub j_at_eta1: f64,
    pub bound: f64,
}

/// `n` evenly spaced angles on `[-pi/4, pi/4]`.
pub fn default_beta_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|k| -FRAC_PI_4 + 2.0 * FRAC_PI_4 * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Scan a witness over `betas`. The spec's own weights are ignored: rows
/// report equal weights and optimized weights.
pub fn eta_scan(
    w: &WitnessSpec,
    betas: &[f64],
    config: &OptimizerConfig,
    tol: &Tolerances,
) -> Result<Vec<EtaScanRow>> {
    let n = w.len();
    let equal = w.with_weights(vec![1.0 / n as f64; n])?;
    betas
        .par_iter()
        .map(|&beta| {
            let eta_star = ppt_critical_eta(beta)?;
            let crit = critical_eta(&equal, beta, tol);
            let (j_at_eta1, bound) = match &crit {
                Ok(c) => (c.correlation_at_one, c.bound),
                Err(_) => (
                    correlation_measure(&equal, &noisy_pure_family(1.0, beta)?)?,
                    separable_bound(&equal, tol),
                ),
            };
            let eta_equ = eta_or_one(crit)?;
            let eta_opt = if n >= 2 {
                optimize_weights(&equal, beta, config, tol)?.eta_opt
            } else {
                eta_equ
            };
            Ok(EtaScanRow {
                beta,
                eta_star,
                eta_equ,
                eta_opt,
                j_at_eta1,
                bound,
            })
        })
        .collect()
}

pub fn case_scan(
    case: ObservableCase,
    betas: &[f64],
    config: &OptimizerConfig,
    tol: &Tolerances,
) -> Result<Vec<EtaScanRow>> {
    eta_scan(&case.witness(), betas, config, tol)
}
