//! Memory-assisted quantities.
//!
//! Conditioning on the memory uses the pretty-good recovery map: with
//! `R = rho_B^{-1/4}` (pseudo-inverse on the support of `rho_B`) the
//! conditioned operator is `rho_bar = (1 (x) R) rho_AB (1 (x) R)` and the
//! recovery fidelity is `F(A|B) = tr(rho_bar^2) / d_A`.
//!
//! For a classical-quantum state with blocks `sigma_i` the same formula with
//! the original `d_A` gives `d_A F(M|B) = sum_i tr[(R sigma_i R)^2]`, which is
//! the success probability of the pretty-good measurement on `B`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    ensure_square, hermitian_eigenvalues, identity, kron, norm_scale, partial_trace,
    psd_power_clamped, trace, unitarity_deviation, CMatrix, DensityState, Subsystem,
};
use crate::measurements::{is_equal_trace, Povm, WeightedEnsemble};
use crate::tolerance::Tolerances;
use crate::view::ensemble_norm;

/// A density operator on `A (x) B`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dims: (usize, usize),
    state: DensityState,
}

impl BipartiteState {
    pub fn new(matrix: CMatrix, dims: (usize, usize), tol: &Tolerances) -> Result<Self> {
        let n = ensure_square(&matrix)?;
        if dims.0 * dims.1 != n || dims.0 == 0 || dims.1 == 0 {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: dims.0 * dims.1,
            });
        }
        Ok(Self {
            dims,
            state: DensityState::new(matrix, tol)?,
        })
    }

    pub fn from_state(state: DensityState, dims: (usize, usize)) -> Result<Self> {
        if dims.0 * dims.1 != state.dim() {
            return Err(Error::DimensionMismatch {
                expected: state.dim(),
                got: dims.0 * dims.1,
            });
        }
        Ok(Self { dims, state })
    }

    pub(crate) fn from_trusted(matrix: CMatrix, dims: (usize, usize)) -> Self {
        Self {
            dims,
            state: DensityState::from_trusted(matrix),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        self.state.matrix()
    }

    pub fn state(&self) -> &DensityState {
        &self.state
    }

    pub fn reduced(&self, keep: Subsystem) -> DensityState {
        let m =
            partial_trace(self.matrix(), self.dims, keep).expect("dims checked at construction");
        DensityState::from_trusted(m)
    }

    /// `(U_A (x) U_B) rho (U_A (x) U_B)^dagger`.
    pub fn evolve_local(&self, ua: &CMatrix, ub: &CMatrix, tol: &Tolerances) -> Result<Self> {
        for (u, d) in [(ua, self.dims.0), (ub, self.dims.1)] {
            if ensure_square(u)? != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: u.nrows(),
                });
            }
            let dev = unitarity_deviation(u);
            if dev > tol.state {
                return Err(Error::NotUnitary(dev));
            }
        }
        Ok(Self {
            dims: self.dims,
            state: self.state.evolve(&kron(ua, ub)),
        })
    }
}

/// `rho_AB` conditioned on the memory.
#[derive(Debug, Clone)]
pub struct Conditioned {
    /// `(1 (x) rho_B^{-1/4}) rho_AB (1 (x) rho_B^{-1/4})`.
    pub matrix: CMatrix,
    /// `rho_B^{-1/4}` on its support.
    pub memory_power: CMatrix,
    /// Weight of `rho_AB` outside `1 (x) supp(rho_B)`.
    pub support_leak: f64,
}

pub fn condition_on_memory(rho: &BipartiteState, tol: &Tolerances) -> Conditioned {
    let (da, _) = rho.dims;
    let rho_b = rho.reduced(Subsystem::B);
    let (r, proj) = psd_power_clamped(rho_b.matrix(), -0.25, tol.support);
    let big = kron(&identity(da), &r);
    let matrix = &big * rho.matrix() * &big;
    let kept = kron(&identity(da), &proj);
    let support_leak = (1.0 - (kept * rho.matrix()).trace().re).max(0.0);
    Conditioned {
        matrix,
        memory_power: r,
        support_leak,
    }
}

fn collision(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// `F(A|B) = tr(rho_bar^2) / d_norm`.
pub fn pg_fidelity_normalized(rho: &BipartiteState, d_norm: usize, tol: &Tolerances) -> f64 {
    collision(&condition_on_memory(rho, tol).matrix) / d_norm as f64
}

/// Pretty-good recovery fidelity `F(A|B)`.
pub fn pg_fidelity(rho: &BipartiteState, tol: &Tolerances) -> f64 {
    pg_fidelity_normalized(rho, rho.dims.0, tol)
}

/// `S_L(A|B) = 1 - d_A F(A|B)`.
pub fn conditional_linear_entropy(rho: &BipartiteState, tol: &Tolerances) -> f64 {
    1.0 - rho.dims.0 as f64 * pg_fidelity(rho, tol)
}

/// `I(A|B) = d_A F(A|B) - 1/d_A`.
pub fn conditional_info(rho: &BipartiteState, tol: &Tolerances) -> f64 {
    let d = rho.dims.0 as f64;
    d * pg_fidelity(rho, tol) - 1.0 / d
}

/// Block-diagonal state of a classical outcome register and the memory.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalQuantumState {
    memory_dim: usize,
    blocks: Vec<CMatrix>,
    labels: Vec<String>,
}

impl ClassicalQuantumState {
    pub fn new(blocks: Vec<CMatrix>, labels: Vec<String>, tol: &Tolerances) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::Precondition("classical-quantum state without blocks".into()))?;
        let memory_dim = ensure_square(first)?;
        if labels.len() != blocks.len() {
            return Err(Error::Precondition(format!(
                "{} labels for {} blocks",
                labels.len(),
                blocks.len()
            )));
        }
        let mut total = 0.0;
        for b in &blocks {
            if ensure_square(b)? != memory_dim {
                return Err(Error::DimensionMismatch {
                    expected: memory_dim,
                    got: b.nrows(),
                });
            }
            let min = hermitian_eigenvalues(b).first().copied().unwrap_or(0.0);
            if min < -tol.state * norm_scale(b) {
                return Err(Error::NegativeEigenvalue(min));
            }
            total += trace(b).re;
        }
        if (total - 1.0).abs() > tol.state {
            return Err(Error::InvalidTrace((total - 1.0).abs()));
        }
        Ok(Self {
            memory_dim,
            blocks,
            labels,
        })
    }

    pub fn memory_dim(&self) -> usize {
        self.memory_dim
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn outcome_count(&self) -> usize {
        self.blocks.len()
    }

    /// Outcome probabilities `tr(sigma_i)`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.blocks.iter().map(|b| trace(b).re).collect()
    }

    /// `rho_B = sum_i sigma_i`.
    pub fn memory_state(&self) -> CMatrix {
        self.blocks.iter().fold(
            CMatrix::zeros(self.memory_dim, self.memory_dim),
            |acc, b| acc + b,
        )
    }

    /// `sum_i |i><i| (x) sigma_i` with a register of dimension `l`.
    pub fn embed(&self) -> BipartiteState {
        let l = self.blocks.len();
        let db = self.memory_dim;
        let mut m = CMatrix::zeros(l * db, l * db);
        for (i, b) in self.blocks.iter().enumerate() {
            m.view_mut((i * db, i * db), (db, db)).copy_from(b);
        }
        BipartiteState::from_trusted(m, (l, db))
    }
}

/// Blocks `tr_A[(M_i (x) 1) rho_AB]`.
pub fn post_measurement_cq(rho: &BipartiteState, p: &Povm) -> Result<ClassicalQuantumState> {
    let (da, db) = rho.dims;
    if p.dim() != da {
        return Err(Error::DimensionMismatch {
            expected: da,
            got: p.dim(),
        });
    }
    let blocks = measure_blocks(rho.matrix(), (da, db), p);
    Ok(ClassicalQuantumState {
        memory_dim: db,
        blocks,
        labels: p.labels().to_vec(),
    })
}

fn measure_blocks(m: &CMatrix, dims: (usize, usize), p: &Povm) -> Vec<CMatrix> {
    let (_, db) = dims;
    p.effects()
        .iter()
        .map(|e| {
            let lifted = kron(e, &identity(db)) * m;
            partial_trace(&lifted, dims, Subsystem::B).expect("dims checked")
        })
        .collect()
}

/// `F(M|B)` and `S_L(M|B) = 1 - d F(M|B)` of a classical-quantum state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GuessingQuantities {
    pub fidelity: f64,
    pub entropy: f64,
}

/// Evaluate the recovery fidelity on the embedded cq state, normalized by
/// the dimension `d` of the measured system (not the outcome count).
pub fn cq_guessing_quantities(
    cq: &ClassicalQuantumState,
    d: usize,
    tol: &Tolerances,
) -> GuessingQuantities {
    let fidelity = pg_fidelity_normalized(&cq.embed(), d, tol);
    GuessingQuantities {
        fidelity,
        entropy: 1.0 - d as f64 * fidelity,
    }
}

/// `I(M|B) = d F(M|B) - 1/d`.
pub fn conditional_info_of_measurement(
    cq: &ClassicalQuantumState,
    d: usize,
    tol: &Tolerances,
) -> f64 {
    d as f64 * cq_guessing_quantities(cq, d, tol).fidelity - 1.0 / d as f64
}

/// Success probability of the pretty-good measurement
/// `E_i = rho_B^{-1/2} sigma_i rho_B^{-1/2}`, evaluated as `sum_i tr(sigma_i E_i)`.
pub fn pretty_good_guessing_probability(cq: &ClassicalQuantumState, tol: &Tolerances) -> f64 {
    let (inv_sqrt, _) = psd_power_clamped(&cq.memory_state(), -0.5, tol.support);
    cq.blocks
        .iter()
        .map(|s| {
            let e = &inv_sqrt * s * &inv_sqrt;
            (s * e).trace().re
        })
        .sum()
}

/// `tr(rho_bar_{MB}^2)`: measure first, then condition on the memory.
pub fn measurement_collision(rho: &BipartiteState, p: &Povm, tol: &Tolerances) -> Result<f64> {
    let cq = post_measurement_cq(rho, p)?;
    Ok(p.dim() as f64 * cq_guessing_quantities(&cq, p.dim(), tol).fidelity)
}

/// `tr(rho_bar_{MB}^2)`: condition first, then apply the measurement map.
pub fn measurement_collision_conditioned_first(
    rho: &BipartiteState,
    p: &Povm,
    tol: &Tolerances,
) -> Result<f64> {
    if p.dim() != rho.dims.0 {
        return Err(Error::DimensionMismatch {
            expected: rho.dims.0,
            got: p.dim(),
        });
    }
    let bar = condition_on_memory(rho, tol).matrix;
    Ok(measure_blocks(&bar, rho.dims, p)
        .iter()
        .map(collision)
        .sum())
}

/// Which form of the memory-assisted bound to audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConditionalForm {
    /// Rank-1 projective measurements.
    RankOneProjective,
    /// Equal-trace POVMs with `l` effects of trace `d/l`.
    EqualTrace,
}

/// Weighted conditional entropy against its lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalAudit {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub norm: f64,
    pub fidelity: f64,
}

fn check_conditional_preconditions(
    e: &WeightedEnsemble,
    rho: &BipartiteState,
    form: ConditionalForm,
    tol: &Tolerances,
) -> Result<()> {
    let d = rho.dims.0;
    if e.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: e.dim(),
        });
    }
    for (th, p) in e.measurements().iter().enumerate() {
        let ok = match form {
            ConditionalForm::RankOneProjective => p.is_rank_one_projective(tol),
            ConditionalForm::EqualTrace => {
                is_equal_trace(p, tol)
                    && (trace(&p.effects()[0]).re - d as f64 / p.len() as f64).abs() <= tol.state
            }
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "measurement {th} is not of form {form:?}"
            )));
        }
    }
    Ok(())
}

fn normalized(e: &WeightedEnsemble) -> Result<WeightedEnsemble> {
    if e.is_normalized() {
        Ok(e.clone())
    } else {
        Ok(e.normalize()?.0)
    }
}

/// `sum_theta w_theta S_L(M_theta|B)` against `(1 - ||g||)(1 - F(A|B))`, or the
/// general equal-trace bound
/// `1 - ||g|| - (sum_theta w_theta/l_theta - ||g||/d)(1 - S_L(A|B))`.
pub fn memory_exclusion_audit(
    e: &WeightedEnsemble,
    rho: &BipartiteState,
    form: ConditionalForm,
    tol: &Tolerances,
) -> Result<ConditionalAudit> {
    check_conditional_preconditions(e, rho, form, tol)?;
    let e = normalized(e)?;
    let d = rho.dims.0 as f64;
    let norm = ensemble_norm(&e, tol)?;
    let fidelity = pg_fidelity(rho, tol);
    let mut lhs = 0.0;
    for (w, p) in e.iter() {
        lhs += w * (1.0 - measurement_collision(rho, p, tol)?);
    }
    let rhs = match form {
        ConditionalForm::RankOneProjective => (1.0 - norm) * (1.0 - fidelity),
        ConditionalForm::EqualTrace => {
            let coeff: f64 = e.iter().map(|(w, p)| w / p.len() as f64).sum::<f64>() - norm / d;
            1.0 - norm - coeff * d * fidelity
        }
    };
    Ok(ConditionalAudit {
        lhs,
        rhs,
        slack: lhs - rhs,
        norm,
        fidelity,
    })
}

fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "epsilon",
            value: eps,
            range: "(0, 1)",
        })
    }
}

/// `q = -log2[||g|| + F(A|B)(1 - ||g||)] - log2(2/eps^2)`.
pub fn min_entropy_q(
    e: &WeightedEnsemble,
    rho: &BipartiteState,
    eps: f64,
    tol: &Tolerances,
) -> Result<f64> {
    Ok(min_entropy_chain_audit(e, rho, eps, tol)?.q_min)
}

/// `-log2[||g|| + F (1 - ||g||)] - log2(2/eps^2)` from precomputed pieces.
pub fn min_entropy_lower_bound(norm: f64, fidelity: f64, eps: f64) -> f64 {
    -(norm + (1.0 - norm) * fidelity).log2() - (2.0 / (eps * eps)).log2()
}

/// The chain behind the smooth min-entropy bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinEntropyChain {
    pub epsilon: f64,
    pub norm: f64,
    pub fidelity: f64,
    /// `||g|| + (1 - ||g||) F(A|B)`.
    pub fidelity_term: f64,
    /// `sum_theta w_theta tr(rho_bar_{M_theta B}^2)`.
    pub collision_average: f64,
    pub q_min: f64,
    /// `-log2(collision_average) - log2(2/eps^2)`.
    pub collision_bound: f64,
    /// `fidelity_term - collision_average`.
    pub inner_slack: f64,
    /// `collision_bound - q_min`.
    pub slack: f64,
}

pub fn min_entropy_chain_audit(
    e: &WeightedEnsemble,
    rho: &BipartiteState,
    eps: f64,
    tol: &Tolerances,
) -> Result<MinEntropyChain> {
    check_epsilon(eps)?;
    check_conditional_preconditions(e, rho, ConditionalForm::RankOneProjective, tol)?;
    let e = normalized(e)?;
    let norm = ensemble_norm(&e, tol)?;
    let fidelity = pg_fidelity(rho, tol);
    let fidelity_term = norm + (1.0 - norm) * fidelity;
    let mut collision_average = 0.0;
    for (w, p) in e.iter() {
        collision_average += w * measurement_collision(rho, p, tol)?;
    }
    let smoothing = (2.0 / (eps * eps)).log2();
    let q_min = min_entropy_lower_bound(norm, fidelity, eps);
    let collision_bound = -collision_average.log2() - smoothing;
    Ok(MinEntropyChain {
        epsilon: eps,
        norm,
        fidelity,
        fidelity_term,
        collision_average,
        q_min,
        collision_bound,
        inner_slack: fidelity_term - collision_average,
        slack: collision_bound - q_min,
    })
}

/// One row of the guessing-game time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GuessStep {
    pub step: usize,
    /// `sum_theta w_theta S_L(M_theta|B)`.
    pub entropy_sum: f64,
    pub fidelity: f64,
    /// `(1 - ||g||)(1 - F(A|B))`.
    pub bound: f64,
}

/// Evolve under local unitaries and record the entropy sum and fidelity.
/// Row 0 is the initial state.
pub fn guessing_game_trace(
    rho: &BipartiteState,
    e: &WeightedEnsemble,
    schedule: &[(CMatrix, CMatrix)],
    tol: &Tolerances,
) -> Result<Vec<GuessStep>> {
    let d = rho.dims.0;
    if e.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: e.dim(),
        });
    }
    let e = normalized(e)?;
    let norm = ensemble_norm(&e, tol)?;
    let row = |step: usize, state: &BipartiteState| -> Result<GuessStep> {
        let fidelity = pg_fidelity(state, tol);
        let mut entropy_sum = 0.0;
        for (w, p) in e.iter() {
            entropy_sum += w * (1.0 - measurement_collision(state, p, tol)?);
        }
        Ok(GuessStep {
            step,
            entropy_sum,
            fidelity,
            bound: (1.0 - norm) * (1.0 - fidelity),
        })
    };
    let mut out = Vec::with_capacity(schedule.len() + 1);
    let mut state = rho.clone();
    out.push(row(0, &state)?);
    for (k, (ua, ub)) in schedule.iter().enumerate() {
        state = state.evolve_local(ua, ub, tol)?;
        out.push(row(k + 1, &state)?);
    }
    Ok(out)
}

/// `steps` pairs of independent Haar-random local unitaries.
pub fn random_local_schedule<R: rand::Rng + ?Sized>(
    dims: (usize, usize),
    steps: usize,
    rng: &mut R,
) -> Vec<(CMatrix, CMatrix)> {
    (0..steps)
        .map(|_| {
            let ua = crate::random::haar_unitary(dims.0, rng).expect("positive dimension");
            let ub = crate::random::haar_unitary(dims.1, rng).expect("positive dimension");
            (ua, ub)
        })
        .collect()
}
