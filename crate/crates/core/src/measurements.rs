//! Measurement ensembles: POVMs, projective bases, MUB and MUM families.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::Serialize;

use crate::conditional::BipartiteState;
use crate::error::{Error, Result};
use crate::linalg::{
    c, ensure_square, hermitian_deviation, hermitian_eigenvalues, identity, is_finite, kron,
    matrix_power_on_support, max_abs_entry, norm_scale, projector, trace, CMatrix, CVector,
    DensityState,
};
use crate::tolerance::Tolerances;

/// A generalized measurement: PSD effects summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    effects: Vec<CMatrix>,
    labels: Vec<String>,
}

impl Povm {
    /// Validated constructor; labels default to outcome indices.
    pub fn new(effects: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        let labels = (0..effects.len()).map(|i| i.to_string()).collect();
        Self::with_labels(effects, labels, tol)
    }

    pub fn with_labels(
        effects: Vec<CMatrix>,
        labels: Vec<String>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let p = Self::unchecked(effects, labels)?;
        let report = validate_povm(&p, tol);
        if !report.is_valid() {
            return Err(Error::InvalidPovm(report.summary()));
        }
        Ok(p)
    }

    /// Shape checks only. Use [`validate_povm`] to inspect the result.
    pub fn unchecked(effects: Vec<CMatrix>, labels: Vec<String>) -> Result<Self> {
        let first = effects
            .first()
            .ok_or_else(|| Error::InvalidPovm("no effects".into()))?;
        let dim = ensure_square(first)?;
        for e in &effects {
            let d = ensure_square(e)?;
            if d != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: d,
                });
            }
        }
        if labels.len() != effects.len() {
            return Err(Error::InvalidPovm(format!(
                "{} labels for {} effects",
                labels.len(),
                effects.len()
            )));
        }
        Ok(Self {
            dim,
            effects,
            labels,
        })
    }

    /// `n` copies of `1/n`.
    pub fn trivial(dim: usize, outcomes: usize) -> Self {
        let e = identity(dim) * c(1.0 / outcomes as f64, 0.0);
        Self {
            dim,
            effects: vec![e; outcomes],
            labels: (0..outcomes).map(|i| i.to_string()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn effects(&self) -> &[CMatrix] {
        &self.effects
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// Outcome probabilities `tr(M_i rho)`.
    pub fn probabilities(&self, rho: &DensityState) -> Result<Vec<f64>> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rho.dim(),
            });
        }
        Ok(self.effects.iter().map(|m| rho.expectation(m).re).collect())
    }

    /// Canonical Kraus operators `K_i = sqrt(M_i)`.
    pub fn kraus_operators(&self, tol: &Tolerances) -> Result<Vec<CMatrix>> {
        self.effects
            .iter()
            .map(|m| matrix_power_on_support(m, 0.5, tol))
            .collect()
    }

    /// `d` effects, each a rank-1 projector.
    pub fn is_rank_one_projective(&self, tol: &Tolerances) -> bool {
        self.effects.len() == self.dim
            && self.effects.iter().all(|m| {
                let sq = m * m;
                max_abs_entry(&(sq - m)) <= tol.state && (trace(m).re - 1.0).abs() <= tol.state
            })
    }
}

/// One violated defining relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub relation: String,
    pub location: String,
    pub magnitude: f64,
}

/// Outcome of a validator; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, relation: &str, location: String, magnitude: f64) {
        self.violations.push(Violation {
            relation: relation.to_string(),
            location,
            magnitude,
        });
    }

    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| {
                format!(
                    "{} at {} (magnitude {:.3e})",
                    v.relation, v.location, v.magnitude
                )
            })
            .collect::<Vec<_>>()
            .join("; ")
    }

    pub fn max_magnitude(&self) -> f64 {
        self.violations.iter().fold(0.0, |a, v| a.max(v.magnitude))
    }
}

/// Check Hermiticity, positivity and completeness of every effect.
pub fn validate_povm(p: &Povm, tol: &Tolerances) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut sum = CMatrix::zeros(p.dim, p.dim);
    for (i, m) in p.effects.iter().enumerate() {
        let loc = format!("effect {i}");
        if !is_finite(m) {
            report.push("finite entries", loc, f64::INFINITY);
            continue;
        }
        let scale = norm_scale(m);
        let dev = hermitian_deviation(m);
        if dev > tol.state * scale {
            report.push("hermitian", loc.clone(), dev);
        }
        let min = hermitian_eigenvalues(m).first().copied().unwrap_or(0.0);
        if min < -tol.state * scale {
            report.push("positive semidefinite (min eigenvalue)", loc, min);
        }
        sum += m;
    }
    let dev = max_abs_entry(&(sum - identity(p.dim)));
    if dev > tol.state {
        report.push("completeness", "sum of effects".into(), dev);
    }
    report
}

/// True iff all effects share one trace.
pub fn is_equal_trace(p: &Povm, tol: &Tolerances) -> bool {
    let traces: Vec<f64> = p.effects.iter().map(|m| trace(m).re).collect();
    traces.windows(2).all(|w| (w[0] - w[1]).abs() <= tol.state)
}

/// Rank-1 projective measurement onto an orthonormal basis.
pub fn projective_from_basis(vectors: &[CVector], tol: &Tolerances) -> Result<Povm> {
    let d = vectors.len();
    if d == 0 {
        return Err(Error::InvalidPovm("empty basis".into()));
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: v.len(),
        });
    }
    let mut worst = 0.0_f64;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.dotc(b) - c(target, 0.0)).norm());
        }
    }
    if worst > tol.state {
        return Err(Error::NotOrthonormal(worst));
    }
    let effects = vectors.iter().map(projector).collect();
    Ok(Povm {
        dim: d,
        effects,
        labels: (0..d).map(|i| i.to_string()).collect(),
    })
}

/// Columns of a unitary as a basis.
pub fn basis_from_unitary(u: &CMatrix) -> Vec<CVector> {
    (0..u.ncols()).map(|k| u.column(k).into_owned()).collect()
}

/// Two-outcome measurement `(1 +- sigma)/2` of an observable with `sigma^2 = 1`.
pub fn observable_measurement(sigma: &CMatrix, tol: &Tolerances) -> Result<Povm> {
    let d = ensure_square(sigma)?;
    let half = c(0.5, 0.0);
    let plus = (identity(d) + sigma) * half;
    let minus = (identity(d) - sigma) * half;
    Povm::with_labels(vec![plus, minus], vec!["+1".into(), "-1".into()], tol)
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Complete set of `d + 1` mutually unbiased bases for prime `d`.
///
/// For `d = 2` the bases are the eigenbases of `sigma_z`, `sigma_x`,
/// `sigma_y`. For odd primes: the computational basis followed by the
/// quadratic-phase Fourier bases `|e_b^a> = d^{-1/2} sum_k w^{a k^2 + b k} |k>`.
pub fn mub_family(d: usize) -> Result<Vec<Vec<CVector>>> {
    if !is_prime(d) {
        return Err(Error::NotPrime(d));
    }
    if d == 2 {
        let s = FRAC_1_SQRT_2;
        let z = vec![
            CVector::from_vec(vec![c(1., 0.), c(0., 0.)]),
            CVector::from_vec(vec![c(0., 0.), c(1., 0.)]),
        ];
        let x = vec![
            CVector::from_vec(vec![c(s, 0.), c(s, 0.)]),
            CVector::from_vec(vec![c(s, 0.), c(-s, 0.)]),
        ];
        let y = vec![
            CVector::from_vec(vec![c(s, 0.), c(0., s)]),
            CVector::from_vec(vec![c(s, 0.), c(0., -s)]),
        ];
        return Ok(vec![z, x, y]);
    }
    let norm = 1.0 / (d as f64).sqrt();
    let mut family = Vec::with_capacity(d + 1);
    family.push((0..d).map(|i| crate::linalg::basis_ket(d, i)).collect());
    for a in 0..d {
        let basis = (0..d)
            .map(|b| {
                CVector::from_fn(d, |k, _| {
                    let exponent = (a * k * k + b * k) % d;
                    let theta = 2.0 * PI * exponent as f64 / d as f64;
                    c(norm * theta.cos(), norm * theta.sin())
                })
            })
            .collect();
        family.push(basis);
    }
    Ok(family)
}

/// The MUB family as projective POVMs.
pub fn mub_povms(d: usize) -> Result<Vec<Povm>> {
    let tol = Tolerances::default();
    mub_family(d)?
        .iter()
        .map(|basis| projective_from_basis(basis, &tol))
        .collect()
}

/// Efficiency and smearing parameter of a MUM family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MumSpec {
    pub dim: usize,
    pub kappa: f64,
    pub t: f64,
}

impl MumSpec {
    /// Requires `kappa` in `(1/d, 1]`; `t = sqrt((kappa - 1/d)/(1 - 1/d))`.
    pub fn new(dim: usize, kappa: f64) -> Result<Self> {
        let inv = 1.0 / dim as f64;
        if dim < 2 || !(kappa > inv && kappa <= 1.0) {
            return Err(Error::OutOfRange {
                name: "kappa",
                value: kappa,
                range: "(1/d, 1]",
            });
        }
        let t = ((kappa - inv) / (1.0 - inv)).sqrt();
        Ok(Self { dim, kappa, t })
    }
}

/// Complete MUM family: `M = (1 - t)/d * 1 + t * P` for each MUB projector `P`.
pub fn mum_family(d: usize, kappa: f64) -> Result<Vec<Povm>> {
    if !is_prime(d) {
        return Err(Error::NotPrime(d));
    }
    let spec = MumSpec::new(d, kappa)?;
    let shift = identity(d) * c((1.0 - spec.t) / d as f64, 0.0);
    let povms = mub_povms(d)?
        .into_iter()
        .map(|p| {
            let effects = p
                .effects
                .iter()
                .map(|e| &shift + e * c(spec.t, 0.0))
                .collect();
            Povm {
                dim: d,
                effects,
                labels: p.labels,
            }
        })
        .collect();
    Ok(povms)
}

/// Check the three MUM defining relations.
///
/// With `kappa = None` the efficiency is read off `tr(M_0^2)` of the first
/// measurement and reported as part of the check.
pub fn validate_mum(family: &[Povm], kappa: Option<f64>, tol: &Tolerances) -> ValidationReport {
    let mut report = ValidationReport::default();
    let Some(first) = family.first() else {
        report.push("non-empty family", "family".into(), 1.0);
        return report;
    };
    let d = first.dim;
    let inv = 1.0 / d as f64;
    for (th, p) in family.iter().enumerate() {
        let sub = validate_povm(p, tol);
        for v in sub.violations {
            report.push(
                &v.relation,
                format!("measurement {th}, {}", v.location),
                v.magnitude,
            );
        }
        if p.dim != d || p.len() != d {
            report.push(
                "d outcomes in dimension d",
                format!("measurement {th}"),
                (p.len() as f64 - d as f64).abs(),
            );
        }
    }
    if !report.is_valid() {
        return report;
    }
    let kappa = kappa.unwrap_or_else(|| trace(&(&first.effects[0] * &first.effects[0])).re);
    let off = (1.0 - kappa) / (d as f64 - 1.0);
    for (th, p) in family.iter().enumerate() {
        for (i, mi) in p.effects.iter().enumerate() {
            let dev = (trace(mi).re - 1.0).abs();
            if dev > tol.zero {
                report.push("unit trace", format!("M_{i}|{th}"), dev);
            }
            for (th2, q) in family.iter().enumerate() {
                for (j, mj) in q.effects.iter().enumerate() {
                    let overlap = trace(&(mi * mj)).re;
                    let target = if th == th2 {
                        if i == j {
                            kappa
                        } else {
                            off
                        }
                    } else {
                        inv
                    };
                    let dev = (overlap - target).abs();
                    if dev > tol.zero {
                        let rel = if th == th2 {
                            "same-measurement overlap"
                        } else {
                            "cross-measurement overlap 1/d"
                        };
                        report.push(rel, format!("(M_{i}|{th}, M_{j}|{th2})"), dev);
                    }
                }
            }
        }
    }
    report
}

/// A weighted collection of measurements on one system.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEnsemble {
    dim: usize,
    measurements: Vec<Povm>,
    weights: Vec<f64>,
    normalized: bool,
}

impl WeightedEnsemble {
    /// Weights must be nonnegative and sum to 1 within `1e-12`.
    pub fn new(measurements: Vec<Povm>, weights: Vec<f64>) -> Result<Self> {
        let e = Self::build(measurements, weights, true)?;
        let total = e.total_weight();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidEnsemble(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(e)
    }

    /// Weights kept as given and flagged unnormalized.
    pub fn unnormalized(measurements: Vec<Povm>, weights: Vec<f64>) -> Result<Self> {
        Self::build(measurements, weights, false)
    }

    pub fn uniform(measurements: Vec<Povm>) -> Result<Self> {
        let n = measurements.len();
        Self::new(measurements, vec![1.0 / n.max(1) as f64; n])
    }

    fn build(measurements: Vec<Povm>, weights: Vec<f64>, normalized: bool) -> Result<Self> {
        let first = measurements
            .first()
            .ok_or_else(|| Error::InvalidEnsemble("no measurements".into()))?;
        let dim = first.dim;
        if let Some(p) = measurements.iter().find(|p| p.dim != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.dim,
            });
        }
        if weights.len() != measurements.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} weights for {} measurements",
                weights.len(),
                measurements.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidEnsemble(format!(
                "negative or non-finite weight {w}"
            )));
        }
        Ok(Self {
            dim,
            measurements,
            weights,
            normalized,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn measurements(&self) -> &[Povm] {
        &self.measurements
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.measurements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measurements.is_empty()
    }

    pub fn effect_count(&self) -> usize {
        self.measurements.iter().map(Povm::len).sum()
    }

    /// Rescale weights onto the simplex; returns the factor divided out.
    pub fn normalize(&self) -> Result<(Self, f64)> {
        let total = self.total_weight();
        if total <= 0.0 {
            return Err(Error::InvalidEnsemble("all weights vanish".into()));
        }
        let weights = self.weights.iter().map(|w| w / total).collect();
        Ok((
            Self {
                dim: self.dim,
                measurements: self.measurements.clone(),
                weights,
                normalized: true,
            },
            total,
        ))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &Povm)> {
        self.weights.iter().copied().zip(self.measurements.iter())
    }
}

/// `eta |psi(beta)><psi(beta)| + (1 - eta) 1/4` with
/// `|psi(beta)> = cos(beta)|00> + sin(beta)|11>`.
pub fn noisy_pure_family(eta: f64, beta: f64) -> Result<BipartiteState> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::OutOfRange {
            name: "eta",
            value: eta,
            range: "[0, 1]",
        });
    }
    if !(-PI / 4.0 - 1e-12..=PI / 4.0 + 1e-12).contains(&beta) {
        return Err(Error::OutOfRange {
            name: "beta",
            value: beta,
            range: "[-pi/4, pi/4]",
        });
    }
    let psi = CVector::from_vec(vec![
        c(beta.cos(), 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        c(beta.sin(), 0.0),
    ]);
    let m = projector(&psi) * c(eta, 0.0) + identity(4) * c((1.0 - eta) / 4.0, 0.0);
    Ok(BipartiteState::from_trusted(m, (2, 2)))
}

/// `rho_A (x) rho_B` as a bipartite state.
pub fn product_state(a: &DensityState, b: &DensityState) -> BipartiteState {
    BipartiteState::from_trusted(kron(a.matrix(), b.matrix()), (a.dim(), b.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli_x, pauli_y, pauli_z};
    use crate::random::{haar_unitary, RngSpec};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn standard_and_hadamard_bases() {
        let z = projective_from_basis(&mub_family(2).unwrap()[0], &tol()).unwrap();
        assert_eq!(
            z.effects()[0],
            crate::linalg::real_matrix(2, &[1., 0., 0., 0.])
        );
        assert_eq!(
            z.effects()[1],
            crate::linalg::real_matrix(2, &[0., 0., 0., 1.])
        );
        let x = projective_from_basis(&mub_family(2).unwrap()[1], &tol()).unwrap();
        let plus = (identity(2) + pauli_x()) * c(0.5, 0.0);
        let minus = (identity(2) - pauli_x()) * c(0.5, 0.0);
        assert!(max_abs_entry(&(&x.effects()[0] - plus)) < 1e-15);
        assert!(max_abs_entry(&(&x.effects()[1] - minus)) < 1e-15);
        assert_eq!(z.labels(), &["0".to_string(), "1".to_string()]);
    }

    #[test]
    fn haar_basis_is_valid_povm() {
        let mut rng = RngSpec::new(3, "basis").rng();
        for d in 1..7 {
            let u = haar_unitary(d, &mut rng).unwrap();
            let p = projective_from_basis(&basis_from_unitary(&u), &tol()).unwrap();
            assert!(validate_povm(
                &p,
                &Tolerances {
                    state: 1e-10,
                    ..tol()
                }
            )
            .is_valid());
            assert!(p.is_rank_one_projective(&tol()));
        }
        let bad = vec![
            crate::linalg::basis_ket(2, 0),
            crate::linalg::basis_ket(2, 0),
        ];
        assert!(matches!(
            projective_from_basis(&bad, &tol()),
            Err(Error::NotOrthonormal(_))
        ));
    }

    #[test]
    fn mub_overlaps() {
        for d in [2, 3, 5, 7] {
            let fam = mub_family(d).unwrap();
            assert_eq!(fam.len(), d + 1);
            for (a, ba) in fam.iter().enumerate() {
                for (b, bb) in fam.iter().enumerate().filter(|(b, _)| *b != a) {
                    for u in ba {
                        for v in bb {
                            let ov = u.dotc(v).norm_sqr();
                            assert!((ov - 1.0 / d as f64).abs() < 1e-12, "d={d} ({a},{b})");
                        }
                    }
                }
            }
        }
        assert_eq!(mub_family(4), Err(Error::NotPrime(4)));
        assert_eq!(mub_family(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn qubit_mubs_are_pauli_eigenbases() {
        let povms = mub_povms(2).unwrap();
        for (p, sigma) in povms.iter().zip([pauli_z(), pauli_x(), pauli_y()]) {
            let obs = &p.effects()[0] - &p.effects()[1];
            assert!(max_abs_entry(&(obs - sigma)) < 1e-15);
        }
    }

    #[test]
    fn mum_construction() {
        let fam = mum_family(3, 1.0).unwrap();
        let mubs = mub_povms(3).unwrap();
        for (a, b) in fam.iter().zip(&mubs) {
            for (x, y) in a.effects().iter().zip(b.effects()) {
                assert!(max_abs_entry(&(x - y)) < 1e-15);
            }
        }
        let spec = MumSpec::new(2, 0.75).unwrap();
        assert!((spec.t - FRAC_1_SQRT_2).abs() < 1e-15);
        let fam = mum_family(2, 0.75).unwrap();
        assert!(validate_mum(&fam, Some(0.75), &tol()).is_valid());
        assert!(mum_family(3, 1.0 / 3.0).is_err());
        assert!(mum_family(3, 1.2).is_err());
        assert!(mum_family(4, 0.5).is_err());
    }

    #[test]
    fn mum_relations_and_measured_kappa() {
        for d in [2, 3, 5] {
            for kappa in [0.55, 0.6, 0.8, 1.0] {
                if kappa <= 1.0 / d as f64 {
                    continue;
                }
                let fam = mum_family(d, kappa).unwrap();
                let strict = Tolerances {
                    zero: 1e-10,
                    ..tol()
                };
                assert!(validate_mum(&fam, Some(kappa), &strict).is_valid());
                let measured = trace(&(&fam[1].effects()[0] * &fam[1].effects()[0])).re;
                assert!((measured - kappa).abs() < 1e-12);
                for p in &fam {
                    assert!(validate_povm(
                        p,
                        &Tolerances {
                            state: 1e-10,
                            ..tol()
                        }
                    )
                    .is_valid());
                    for e in p.effects() {
                        assert!(hermitian_eigenvalues(e)[0] >= -1e-14);
                    }
                }
            }
        }
        let fam = mum_family(3, 0.5).unwrap();
        assert!(validate_mum(&fam, None, &tol()).is_valid());
    }

    #[test]
    fn validator_reports() {
        let t = Povm::unchecked(
            vec![identity(2) * c(0.5, 0.), identity(2) * c(0.5, 0.)],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        assert!(validate_povm(&t, &tol()).is_valid());
        assert!(is_equal_trace(&t, &tol()));

        let p0 = crate::linalg::real_matrix(2, &[1., 0., 0., 0.]);
        let bad = Povm::unchecked(vec![p0.clone(), p0], vec!["0".into(), "1".into()]).unwrap();
        let r = validate_povm(&bad, &tol());
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].relation, "completeness");
        assert!((r.violations[0].magnitude - 1.0).abs() < 1e-15);

        let neg = crate::linalg::real_matrix(2, &[1.2, 0., 0., 0.]);
        let rest = crate::linalg::real_matrix(2, &[-0.2, 0., 0., 1.]);
        let r = validate_povm(
            &Povm::unchecked(vec![neg, rest], vec!["0".into(), "1".into()]).unwrap(),
            &tol(),
        );
        assert!(r
            .violations
            .iter()
            .any(|v| v.relation.starts_with("positive") && (v.magnitude + 0.2).abs() < 1e-12));

        let unequal = Povm::new(
            vec![
                crate::linalg::real_matrix(2, &[1., 0., 0., 0.5]),
                crate::linalg::real_matrix(2, &[0., 0., 0., 0.5]),
            ],
            &tol(),
        )
        .unwrap();
        assert!(!is_equal_trace(&unequal, &tol()));
    }

    #[test]
    fn ensembles() {
        let m = mub_povms(2).unwrap();
        assert!(WeightedEnsemble::new(m.clone(), vec![0.5, 0.3, 0.2]).is_ok());
        assert!(WeightedEnsemble::new(m.clone(), vec![0.5, 0.3, 0.3]).is_err());
        assert!(WeightedEnsemble::new(m.clone(), vec![0.5, 0.5]).is_err());
        assert!(WeightedEnsemble::new(m.clone(), vec![1.2, -0.2, 0.0]).is_err());
        let u = WeightedEnsemble::unnormalized(m, vec![1.0, 1.0, 1.0]).unwrap();
        assert!(!u.is_normalized());
        let (n, f) = u.normalize().unwrap();
        assert!(n.is_normalized());
        assert_eq!(f, 3.0);
        assert!((n.weights()[0] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn noisy_family() {
        let s = noisy_pure_family(0.0, 0.3).unwrap();
        assert!(max_abs_entry(&(s.matrix() - identity(4) * c(0.25, 0.))) < 1e-15);
        let bell = noisy_pure_family(1.0, PI / 4.0).unwrap();
        let phi = CVector::from_vec(vec![
            c(FRAC_1_SQRT_2, 0.),
            c(0., 0.),
            c(0., 0.),
            c(FRAC_1_SQRT_2, 0.),
        ]);
        assert!(max_abs_entry(&(bell.matrix() - projector(&phi))) < 1e-15);
        let half = noisy_pure_family(0.5, PI / 4.0).unwrap();
        let zz = kron(&pauli_z(), &pauli_z());
        assert!(((&zz * half.matrix()).trace().re - 0.5).abs() < 1e-15);
        assert!(noisy_pure_family(1.1, 0.0).is_err());
        assert!(noisy_pure_family(0.5, 1.0).is_err());
    }

    #[test]
    fn observable_measurements() {
        let p = observable_measurement(&pauli_y(), &tol()).unwrap();
        assert_eq!(p.labels()[0], "+1");
        assert!(p.is_rank_one_projective(&tol()));
        assert!(observable_measurement(&(pauli_z() * c(2.0, 0.)), &tol()).is_err());
    }
}
