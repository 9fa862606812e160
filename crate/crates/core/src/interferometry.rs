//! Two-path interferometer models and wave-particle duality audits.
//!
//! Conventions: the path observable is `sigma_z` in the computational
//! basis, and the wave observable at phase `phi` is
//! `cos(phi) sigma_x + sin(phi) sigma_y` with eigenkets
//! `|0_phi>, |1_phi> = (|0> +- e^{i phi}|1>)/sqrt(2)`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, TAU};

use serde::Serialize;

use crate::conditional::{
    condition_on_memory, conditional_info, conditional_info_of_measurement, post_measurement_cq,
    BipartiteState,
};
use crate::error::{Error, Result};
use crate::linalg::{
    c, identity, identity_perp_max_entangled, kron, max_abs_entry, partial_trace, pauli_x, pauli_y,
    pauli_z, projector, CMatrix, CVector, DensityState, Subsystem,
};
use crate::measurements::{observable_measurement, Povm, WeightedEnsemble};
use crate::tolerance::Tolerances;
use crate::view::{complete_info, exclusion_audit, info_gain, view_operator, InfoAudit};

/// Wave observable `sigma_phi^w` and its eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveObservable {
    pub phi: f64,
    pub ket0: CVector,
    pub ket1: CVector,
    pub matrix: CMatrix,
}

impl WaveObservable {
    pub fn measurement(&self) -> Povm {
        observable_measurement(&self.matrix, &Tolerances::default())
            .expect("wave observables square to one")
    }
}

pub fn wave_observable(phi: f64) -> WaveObservable {
    let phase = c(phi.cos(), phi.sin());
    let s = c(FRAC_1_SQRT_2, 0.0);
    let ket0 = CVector::from_vec(vec![s, s * phase]);
    let ket1 = CVector::from_vec(vec![s, -s * phase]);
    let matrix = projector(&ket0) - projector(&ket1);
    WaveObservable {
        phi,
        ket0,
        ket1,
        matrix,
    }
}

/// Path observable `sigma^p = |0><0| - |1><1|`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathObservable {
    pub matrix: CMatrix,
}

impl PathObservable {
    pub fn measurement(&self) -> Povm {
        observable_measurement(&self.matrix, &Tolerances::default())
            .expect("sigma_z squares to one")
    }
}

pub fn path_observable() -> PathObservable {
    PathObservable { matrix: pauli_z() }
}

/// Mach–Zehnder settings: first splitter angle, phase shift, second splitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MziConfig {
    pub alpha: f64,
    pub phi: f64,
    pub bs2: bool,
}

impl MziConfig {
    /// `phi` is reduced into `[0, 2 pi)`.
    pub fn new(alpha: f64, phi: f64, bs2: bool) -> Result<Self> {
        if !alpha.is_finite() || !phi.is_finite() {
            return Err(Error::OutOfRange {
                name: "angle",
                value: if alpha.is_finite() { phi } else { alpha },
                range: "finite",
            });
        }
        Ok(Self {
            alpha,
            phi: phi.rem_euclid(TAU),
            bs2,
        })
    }
}

/// First splitter: `|0> -> cos a|0> + sin a|1>`, `|1> -> sin a|0> - cos a|1>`.
pub fn splitter(alpha: f64) -> CMatrix {
    let (s, co) = alpha.sin_cos();
    crate::linalg::real_matrix(2, &[co, s, s, -co])
}

fn require_qubit(dim: usize) -> Result<()> {
    if dim != 2 {
        return Err(Error::Precondition(format!(
            "two-path interferometer needs a qubit, got dimension {dim}"
        )));
    }
    Ok(())
}

fn expect(rho: &DensityState, op: &CMatrix) -> f64 {
    rho.expectation(op).re
}

/// Detector click probabilities `(p_D0, p_D1)` for a photon entering in `rho`.
pub fn mzi_probabilities(config: &MziConfig, rho: &DensityState) -> Result<(f64, f64)> {
    require_qubit(rho.dim())?;
    let inside = rho.evolve(&splitter(config.alpha));
    let obs = if config.bs2 {
        wave_observable(config.phi).matrix
    } else {
        pauli_z()
    };
    let m = expect(&inside, &obs).clamp(-1.0, 1.0);
    Ok(((1.0 + m) / 2.0, (1.0 - m) / 2.0))
}

/// `V = sqrt(<sigma_x>^2 + <sigma_y>^2)`.
pub fn fringe_visibility(rho: &DensityState) -> Result<f64> {
    require_qubit(rho.dim())?;
    Ok(expect(rho, &pauli_x()).hypot(expect(rho, &pauli_y())))
}

/// `max_phi |p_phi^0 - p_phi^1|` over `n` equally spaced phases.
pub fn fringe_visibility_grid(rho: &DensityState, n: usize) -> Result<f64> {
    require_qubit(rho.dim())?;
    Ok((0..n)
        .map(|k| expect(rho, &wave_observable(TAU * k as f64 / n as f64).matrix).abs())
        .fold(0.0, f64::max))
}

/// `D = |<sigma^p>|`.
pub fn path_distinguishability(rho: &DensityState) -> Result<f64> {
    require_qubit(rho.dim())?;
    Ok(expect(rho, &pauli_z()).abs())
}

/// Both sides of the two-wave-observable information identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterferenceReport {
    pub phi: f64,
    pub phi_prime: f64,
    /// `G(sigma_phi) + G(sigma_phi')`.
    pub gain_sum: f64,
    /// `cos(d) <s_phi><s_phi'> + [I_com - G(sigma^p)] sin^2(d)`.
    pub identity_rhs: f64,
    pub residual: f64,
    /// `|<s_phi> e_phi - <s_phi'> e_phi'|^2` with planar unit vectors.
    pub amplitude_lhs: f64,
    /// `2 [I_com - G(sigma^p)] sin^2(d)`.
    pub amplitude_rhs: f64,
    pub amplitude_residual: f64,
}

fn planar(angle: f64) -> [f64; 2] {
    [angle.cos(), angle.sin()]
}

pub fn wave_interference_audit(
    rho: &DensityState,
    phi: f64,
    phi_prime: f64,
) -> Result<InterferenceReport> {
    require_qubit(rho.dim())?;
    let w = wave_observable(phi);
    let wp = wave_observable(phi_prime);
    let gain_sum = info_gain(&w.measurement(), rho)? + info_gain(&wp.measurement(), rho)?;
    let path_gain = info_gain(&path_observable().measurement(), rho)?;
    let intensity = complete_info(rho) - path_gain;
    let delta = phi_prime - phi;
    let (m, mp) = (expect(rho, &w.matrix), expect(rho, &wp.matrix));
    let identity_rhs = delta.cos() * m * mp + intensity * delta.sin().powi(2);

    let (e, ep) = (planar(phi), planar(phi_prime));
    let v = [m * e[0] - mp * ep[0], m * e[1] - mp * ep[1]];
    let amplitude_lhs = v[0] * v[0] + v[1] * v[1];
    let amplitude_rhs = 2.0 * intensity * delta.sin().powi(2);
    Ok(InterferenceReport {
        phi,
        phi_prime,
        gain_sum,
        identity_rhs,
        residual: (gain_sum - identity_rhs).abs(),
        amplitude_lhs,
        amplitude_rhs,
        amplitude_residual: (amplitude_lhs - amplitude_rhs).abs(),
    })
}

/// `G^p + G_phi^w + G_{phi+pi/2}^w - 1_perp`, largest entry.
pub fn operator_identity_residual(phi: f64) -> f64 {
    let tol = Tolerances::default();
    let sum = [
        path_observable().measurement(),
        wave_observable(phi).measurement(),
        wave_observable(phi + FRAC_PI_2).measurement(),
    ]
    .iter()
    .map(|p| view_operator(p, &tol).expect("valid").matrix().clone())
    .fold(CMatrix::zeros(4, 4), |acc, g| acc + g);
    max_abs_entry(&(sum - identity_perp_max_entangled(2)))
}

/// Duality relation and the three-observable exclusion identity behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WpdrReport {
    pub visibility: f64,
    pub distinguishability: f64,
    /// `V^2 + D^2`.
    pub lhs: f64,
    /// `2 tr(rho^2) - 1`.
    pub rhs: f64,
    pub residual: f64,
    /// `G(sigma_0^w) + G(sigma_{pi/2}^w) + G(sigma^p)`.
    pub gain_sum: f64,
    pub complete_info: f64,
    pub gain_residual: f64,
    pub operator_residual: f64,
}

pub fn wpdr_audit(rho: &DensityState) -> Result<WpdrReport> {
    require_qubit(rho.dim())?;
    let visibility = fringe_visibility(rho)?;
    let distinguishability = path_distinguishability(rho)?;
    let lhs = visibility.powi(2) + distinguishability.powi(2);
    let rhs = 2.0 * rho.purity() - 1.0;
    let gain_sum = info_gain(&wave_observable(0.0).measurement(), rho)?
        + info_gain(&wave_observable(FRAC_PI_2).measurement(), rho)?
        + info_gain(&path_observable().measurement(), rho)?;
    let icom = complete_info(rho);
    Ok(WpdrReport {
        visibility,
        distinguishability,
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        gain_sum,
        complete_info: icom,
        gain_residual: (gain_sum - icom).abs(),
        operator_residual: operator_identity_residual(0.0),
    })
}

/// Delayed-choice ensemble audit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DelayedChoiceReport {
    pub alpha: f64,
    pub beta: f64,
    /// `(cos^2 b, sin^2 b, sin^2 b)` for path, wave 0, wave pi/2.
    pub raw_weights: [f64; 3],
    /// `1 + sin^2 b`.
    pub normalization: f64,
    /// Gain weighted with the raw weights.
    pub raw_weighted_gain: f64,
    /// Raw gain against `normalization * ||g|| * I_com`.
    pub raw_bound: f64,
    /// Exclusion audit with weights divided by `normalization`.
    pub audit: InfoAudit,
}

/// Ancilla-controlled second splitter: path with weight `cos^2 b`, two wave
/// observables (phases 0 and pi/2) with weight `sin^2 b` each. The photon
/// state inside the interferometer is `U(alpha) rho U(alpha)^dagger`.
pub fn delayed_choice_audit(
    alpha: f64,
    beta: f64,
    rho: &DensityState,
    tol: &Tolerances,
) -> Result<DelayedChoiceReport> {
    require_qubit(rho.dim())?;
    let inside = rho.evolve(&splitter(alpha));
    let (cb, sb) = (beta.cos().powi(2), beta.sin().powi(2));
    let raw_weights = [cb, sb, sb];
    let povms = vec![
        path_observable().measurement(),
        wave_observable(0.0).measurement(),
        wave_observable(FRAC_PI_2).measurement(),
    ];
    let raw = WeightedEnsemble::unnormalized(povms, raw_weights.to_vec())?;
    let (normed, normalization) = raw.normalize()?;
    let audit = exclusion_audit(&normed, &inside, tol)?;
    let raw_weighted_gain = audit.lhs * normalization;
    Ok(DelayedChoiceReport {
        alpha,
        beta,
        raw_weights,
        normalization,
        raw_weighted_gain,
        raw_bound: audit.bound * normalization,
        audit,
    })
}

/// Conditional interference identity and conditional duality relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalWaveReport {
    pub phi: f64,
    pub phi_prime: f64,
    /// `tr[(rho_phi e_phi - rho_phi' e_phi')^2]`.
    pub lhs: f64,
    /// `2 [I(A|B) - I(sigma^p|B)] sin^2(phi - phi')`.
    pub rhs: f64,
    pub residual: f64,
    /// Worst of `|tr(rho_phi^2) - 2 I(sigma_phi|B)|` over both phases.
    pub amplitude_residual: f64,
    /// `I(sigma_phi|B) + I(sigma_{phi+pi/2}|B) + I(sigma^p|B)`.
    pub wpdr_sum: f64,
    pub conditional_info: f64,
    pub wpdr_residual: f64,
}

pub fn conditional_wave_audit(
    rho: &BipartiteState,
    phi: f64,
    phi_prime: f64,
    tol: &Tolerances,
) -> Result<ConditionalWaveReport> {
    let (da, db) = rho.dims();
    require_qubit(da)?;
    let bar = condition_on_memory(rho, tol).matrix;
    let amplitude = |angle: f64| -> CMatrix {
        let lifted = &bar * kron(&wave_observable(angle).matrix, &identity(db));
        partial_trace(&lifted, (da, db), Subsystem::B).expect("dims checked")
    };
    let (x, xp) = (amplitude(phi), amplitude(phi_prime));
    let (e, ep) = (planar(phi), planar(phi_prime));
    let lhs: f64 = (0..2)
        .map(|k| {
            let y = &x * c(e[k], 0.0) - &xp * c(ep[k], 0.0);
            (&y * &y).trace().re
        })
        .sum();

    let cond_info = |p: &Povm| -> Result<f64> {
        let cq = post_measurement_cq(rho, p)?;
        Ok(conditional_info_of_measurement(&cq, da, tol))
    };
    let i_ab = conditional_info(rho, tol);
    let i_path = cond_info(&path_observable().measurement())?;
    let rhs = 2.0 * (i_ab - i_path) * (phi - phi_prime).sin().powi(2);

    let i_phi = cond_info(&wave_observable(phi).measurement())?;
    let i_phi_prime = cond_info(&wave_observable(phi_prime).measurement())?;
    let amplitude_residual = ((&x * &x).trace().re - 2.0 * i_phi)
        .abs()
        .max(((&xp * &xp).trace().re - 2.0 * i_phi_prime).abs());

    let wpdr_sum = i_phi + cond_info(&wave_observable(phi + FRAC_PI_2).measurement())? + i_path;
    Ok(ConditionalWaveReport {
        phi,
        phi_prime,
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        amplitude_residual,
        wpdr_sum,
        conditional_info: i_ab,
        wpdr_residual: (wpdr_sum - i_ab).abs(),
    })
}

/// One phase setting of an interferometer sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MziScanRow {
    pub phi: f64,
    pub p_d0: f64,
    pub p_d1: f64,
    pub wave_gain: f64,
    pub path_gain: f64,
    pub visibility: f64,
    pub distinguishability: f64,
    /// Two-wave identity residual for the pair `(phi, 0)`.
    pub interference_residual: f64,
    pub wpdr_residual: f64,
}

/// Sweep `phi` over `grid` points of `[0, 2 pi)` for a photon entering in `rho`.
pub fn mzi_scan(alpha: f64, bs2: bool, grid: usize, rho: &DensityState) -> Result<Vec<MziScanRow>> {
    require_qubit(rho.dim())?;
    let inside = rho.evolve(&splitter(alpha));
    let wpdr = wpdr_audit(&inside)?;
    let path_gain = info_gain(&path_observable().measurement(), &inside)?;
    (0..grid)
        .map(|k| {
            let phi = TAU * k as f64 / grid as f64;
            let (p_d0, p_d1) = mzi_probabilities(&MziConfig::new(alpha, phi, bs2)?, rho)?;
            let wave_gain = info_gain(&wave_observable(phi).measurement(), &inside)?;
            let interference = wave_interference_audit(&inside, phi, 0.0)?;
            Ok(MziScanRow {
                phi,
                p_d0,
                p_d1,
                wave_gain,
                path_gain,
                visibility: wpdr.visibility,
                distinguishability: wpdr.distinguishability,
                interference_residual: interference.residual.max(interference.amplitude_residual),
                wpdr_residual: wpdr.residual,
            })
        })
        .collect()
}
