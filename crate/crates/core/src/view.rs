//! View operators, Gram matrices, information gain and the exclusion bound.
//!
//! The view operator of a POVM `{M_i}` on `C^d` is the PSD operator
//! `G = sum_i |M~_i><M~_i|` on the doubled space, where
//! `M~_i = M_i - tr(M_i)/d * 1` is the traceless part of each effect. For a
//! state `rho`, `<rho|G|rho>` is the information gain
//! `sum_i (p_i - tr(M_i)/d)^2`. Averaging with weights gives `g`, whose
//! largest eigenvalue caps the weighted gain at `||g|| (tr(rho^2) - 1/d)`.

use std::collections::VecDeque;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    c, devectorize, hermitian_eigensystem, hs_inner, identity, trace, vectorize, CMatrix, CVector,
    DensityState, VectorizedOperator,
};
use crate::measurements::{validate_povm, Povm, WeightedEnsemble};
use crate::tolerance::Tolerances;

/// PSD operator on the `d^2`-dimensional doubled space, annihilating `|psi_d>`.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewOperator {
    dim: usize,
    matrix: CMatrix,
}

impl ViewOperator {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            matrix: CMatrix::zeros(dim * dim, dim * dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Largest eigenvalue.
    pub fn norm(&self) -> f64 {
        crate::linalg::hermitian_eigenvalues(&self.matrix)
            .last()
            .copied()
            .unwrap_or(0.0)
            .max(0.0)
    }

    /// `<rho|G|rho>`.
    pub fn quadratic_form(&self, rho: &DensityState) -> Result<f64> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rho.dim(),
            });
        }
        let v = rho.vectorized();
        Ok(v.amplitudes().dotc(&(&self.matrix * v.amplitudes())).re)
    }

    fn accumulate(&mut self, other: &ViewOperator, weight: f64) {
        self.matrix += &other.matrix * c(weight, 0.0);
    }
}

fn traceless(m: &CMatrix) -> CMatrix {
    let d = m.nrows();
    m - identity(d) * (trace(m) / c(d as f64, 0.0))
}

fn traceless_vectors(p: &Povm) -> Vec<VectorizedOperator> {
    p.effects()
        .iter()
        .map(|m| vectorize(&traceless(m)).expect("effects are square"))
        .collect()
}

fn check_povm(p: &Povm, tol: &Tolerances) -> Result<()> {
    let report = validate_povm(p, tol);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidPovm(report.summary()))
    }
}

/// `G(M) = sum_i |M~_i><M~_i|`.
pub fn view_operator(p: &Povm, tol: &Tolerances) -> Result<ViewOperator> {
    check_povm(p, tol)?;
    let d = p.dim();
    let mut matrix = CMatrix::zeros(d * d, d * d);
    for v in traceless_vectors(p) {
        matrix += v.amplitudes() * v.amplitudes().adjoint();
    }
    Ok(ViewOperator { dim: d, matrix })
}

/// `g = sum_theta w_theta G(M_theta)`.
pub fn average_view(e: &WeightedEnsemble, tol: &Tolerances) -> Result<ViewOperator> {
    let mut g = ViewOperator::zero(e.dim());
    for (w, p) in e.iter() {
        g.accumulate(&view_operator(p, tol)?, w);
    }
    Ok(g)
}

/// Gram matrix of the weighted traceless effect vectors `sqrt(w_theta)|M~_i|theta>`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    /// `(theta, i)` for each row.
    pub index: Vec<(usize, usize)>,
    pub entries: DMatrix<f64>,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.index.len()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.size() == 0 {
            return Vec::new();
        }
        let mut ev: Vec<f64> = SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn norm(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0).max(0.0)
    }
}

pub fn gram_matrix(e: &WeightedEnsemble, tol: &Tolerances) -> Result<GramMatrix> {
    let mut index = Vec::new();
    let mut vecs: Vec<(f64, VectorizedOperator)> = Vec::new();
    for (th, (w, p)) in e.iter().enumerate() {
        check_povm(p, tol)?;
        for (i, v) in traceless_vectors(p).into_iter().enumerate() {
            index.push((th, i));
            vecs.push((w.sqrt(), v));
        }
    }
    let n = vecs.len();
    let entries = DMatrix::from_fn(n, n, |a, b| {
        let (sa, va) = &vecs[a];
        let (sb, vb) = &vecs[b];
        sa * sb * va.dot(vb).re
    });
    Ok(GramMatrix { index, entries })
}

/// Largest eigenvalue of a Hermitian operator.
pub fn operator_norm(h: &CMatrix, tol: &Tolerances) -> Result<f64> {
    Ok(hermitian_eigensystem(h, tol)?.max())
}

/// `||g||` of an ensemble, evaluated in whichever representation is smaller.
pub fn ensemble_norm(e: &WeightedEnsemble, tol: &Tolerances) -> Result<f64> {
    let d2 = e.dim() * e.dim();
    if e.effect_count() < d2 {
        Ok(gram_matrix(e, tol)?.norm())
    } else {
        Ok(average_view(e, tol)?.norm())
    }
}

/// `G(M1) G(M2) = 0`, judged by the Frobenius norm of the product.
pub fn is_complementary(p1: &Povm, p2: &Povm, tol: &Tolerances) -> Result<bool> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch {
            expected: p1.dim(),
            got: p2.dim(),
        });
    }
    let g1 = view_operator(p1, tol)?;
    let g2 = view_operator(p2, tol)?;
    Ok((g1.matrix() * g2.matrix()).norm() <= tol.zero)
}

/// Number of eigenvalues of `g` above the zero tolerance (at most `d^2 - 1`).
pub fn view_rank(e: &WeightedEnsemble, tol: &Tolerances) -> Result<usize> {
    let g = average_view(e, tol)?;
    let ev = crate::linalg::hermitian_eigenvalues(g.matrix());
    let cut = tol.zero * ev.last().copied().unwrap_or(0.0).max(1.0);
    Ok(ev.iter().filter(|&&x| x > cut).count())
}

/// `g` is positive definite on the complement of `|psi_d>`.
pub fn is_informationally_complete(e: &WeightedEnsemble, tol: &Tolerances) -> Result<bool> {
    let d = e.dim();
    Ok(view_rank(e, tol)? == d * d - 1)
}

/// `G(M)_rho = sum_i (tr(M_i rho) - tr(M_i)/d)^2`.
pub fn info_gain(p: &Povm, rho: &DensityState) -> Result<f64> {
    let d = p.dim() as f64;
    let probs = p.probabilities(rho)?;
    Ok(probs
        .iter()
        .zip(p.effects())
        .map(|(pi, m)| (pi - trace(m).re / d).powi(2))
        .sum())
}

/// `I_com(rho) = tr(rho^2) - 1/d`.
pub fn complete_info(rho: &DensityState) -> f64 {
    rho.purity() - 1.0 / rho.dim() as f64
}

/// Weighted information gain against the exclusion bound `||g|| I_com(rho)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfoAudit {
    /// From outcome probabilities.
    pub lhs: f64,
    /// From `<rho|g|rho>`.
    pub lhs_view: f64,
    pub norm: f64,
    pub complete_info: f64,
    pub bound: f64,
    pub slack: f64,
}

pub fn exclusion_audit(
    e: &WeightedEnsemble,
    rho: &DensityState,
    tol: &Tolerances,
) -> Result<InfoAudit> {
    if rho.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            got: rho.dim(),
        });
    }
    let mut lhs = 0.0;
    for (w, p) in e.iter() {
        lhs += w * info_gain(p, rho)?;
    }
    let g = average_view(e, tol)?;
    let lhs_view = g.quadratic_form(rho)?;
    let norm = g.norm();
    let icom = complete_info(rho);
    let bound = norm * icom;
    Ok(InfoAudit {
        lhs,
        lhs_view,
        norm,
        complete_info: icom,
        bound,
        slack: bound - lhs,
    })
}

/// Exact outcome probabilities of every measurement in the ensemble.
pub fn ensemble_probabilities(e: &WeightedEnsemble, rho: &DensityState) -> Result<Vec<Vec<f64>>> {
    e.measurements()
        .iter()
        .map(|p| p.probabilities(rho))
        .collect()
}

/// Linear-inversion estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// Hermitian, unit trace, possibly not PSD.
    pub raw: CMatrix,
    /// Negative eigenvalues clipped, trace renormalized.
    pub projected: DensityState,
    /// Smallest eigenvalue of `raw`.
    pub raw_min_eigenvalue: f64,
    /// Norm of the data component outside the support of `g`.
    pub residual: f64,
}

/// `rho = sqrt(d) tr_2(g^+ |rho~_M><psi_d|) + 1/d`, with
/// `|rho~_M> = sum w_theta (p_i - tr(M_i)/d) |M~_i>` assembled from the data.
pub fn reconstruct_state(
    e: &WeightedEnsemble,
    probabilities: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<Reconstruction> {
    let d = e.dim();
    if probabilities.len() != e.len() {
        return Err(Error::InvalidProbabilities(format!(
            "{} probability vectors for {} measurements",
            probabilities.len(),
            e.len()
        )));
    }
    for (th, (probs, p)) in probabilities.iter().zip(e.measurements()).enumerate() {
        if probs.len() != p.len() {
            return Err(Error::InvalidProbabilities(format!(
                "measurement {th}: {} probabilities for {} effects",
                probs.len(),
                p.len()
            )));
        }
        if let Some(x) = probs.iter().find(|x| !(x.is_finite() && **x >= -tol.state)) {
            return Err(Error::InvalidProbabilities(format!(
                "measurement {th}: invalid entry {x}"
            )));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > tol.state.max(1e-9) {
            return Err(Error::InvalidProbabilities(format!(
                "measurement {th}: sums to {s}"
            )));
        }
    }

    let g = average_view(e, tol)?;
    let es = hermitian_eigensystem(g.matrix(), tol)?;
    let cut = tol.support * es.max().max(0.0);
    let rank = es.values.iter().filter(|&&x| x > cut).count();
    if rank != d * d - 1 {
        return Err(Error::NotInformationallyComplete {
            rank,
            needed: d * d - 1,
        });
    }

    let mut data = CVector::zeros(d * d);
    for ((w, p), probs) in e.iter().zip(probabilities) {
        for (v, (pi, m)) in traceless_vectors(p)
            .iter()
            .zip(probs.iter().zip(p.effects()))
        {
            let bias = pi - trace(m).re / d as f64;
            data += v.amplitudes() * c(w * bias, 0.0);
        }
    }

    let mut solved = CVector::zeros(d * d);
    let mut in_support = CVector::zeros(d * d);
    for (k, &lam) in es.values.iter().enumerate() {
        if lam > cut {
            let v = es.vector(k);
            let coeff = v.dotc(&data);
            in_support += &v * coeff;
            solved += &v * (coeff / c(lam, 0.0));
        }
    }
    let residual = (&data - in_support).norm();

    let tilde = devectorize(&VectorizedOperator::from_amplitudes(solved)?);
    let raw = crate::linalg::hermitian_part(&(tilde + identity(d) * c(1.0 / d as f64, 0.0)));
    let raw_es = hermitian_eigensystem(&raw, tol)?;
    let clipped: f64 = raw_es.values.iter().map(|x| x.max(0.0)).sum();
    let projected = raw_es.map_spectrum(|x| x.max(0.0) / clipped);
    Ok(Reconstruction {
        raw_min_eigenvalue: raw_es.min(),
        projected: DensityState::from_trusted(projected),
        raw,
        residual,
    })
}

/// `1 - ||g||`.
pub fn exclusivity(e: &WeightedEnsemble, tol: &Tolerances) -> Result<f64> {
    Ok(1.0 - ensemble_norm(e, tol)?)
}

/// `W[(i,theta),(j,theta')] = tr(M_i|theta M_j|theta')`, rows ordered by measurement then effect.
pub fn overlap_matrix(e: &WeightedEnsemble) -> DMatrix<f64> {
    let effects: Vec<&CMatrix> = e.measurements().iter().flat_map(|p| p.effects()).collect();
    let n = effects.len();
    DMatrix::from_fn(n, n, |a, b| {
        hs_inner(effects[a], effects[b]).map_or(0.0, |z| z.re)
    })
}

/// A symmetric matrix is reducible iff the graph with an edge for every
/// off-diagonal entry above `tol.zero` in magnitude is disconnected.
pub fn is_reducible(w: &DMatrix<f64>, tol: &Tolerances) -> bool {
    let n = w.nrows();
    if n <= 1 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(a) = queue.pop_front() {
        for b in 0..n {
            if !seen[b] && a != b && (w[(a, b)].abs() > tol.zero || w[(b, a)].abs() > tol.zero) {
                seen[b] = true;
                queue.push_back(b);
            }
        }
    }
    seen.iter().any(|s| !s)
}
