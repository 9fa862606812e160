//! Seeded sampling of unitaries and states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, kron, matrix_power_on_support, projector, CMatrix, CVector, DensityState, C64,
};
use crate::measurements::{basis_from_unitary, projective_from_basis, Povm};
use crate::tolerance::Tolerances;

/// Seed plus stream label. Equal specs produce equal sample sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: String,
}

impl RngSpec {
    pub fn new(seed: u64, stream: impl Into<String>) -> Self {
        Self {
            seed,
            stream: stream.into(),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(fnv1a(self.stream.as_bytes()));
        rng
    }

    /// A derived spec with a sub-label appended to the stream.
    pub fn child(&self, label: &str) -> Self {
        Self::new(self.seed, format!("{}/{}", self.stream, label))
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325_u64, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Complex normal with `E|z|^2 = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Square Ginibre matrix.
pub fn random_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    ginibre(d, d, rng)
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    // Fill row-major so the sample order does not depend on storage layout.
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        entries.push(complex_normal(rng));
    }
    CMatrix::from_row_slice(rows, cols, &entries)
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<CMatrix> {
    if d == 0 {
        return Err(Error::InvalidRank { dim: 0, rank: 0 });
    }
    let qr = random_matrix(d, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..d {
        let rk = r[(k, k)];
        let phase = if rk.norm() > 0.0 {
            rk / rk.norm()
        } else {
            c(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, k)] *= phase;
        }
    }
    Ok(q)
}

/// `G G^dagger / tr(G G^dagger)` with `G` a `d x rank` Ginibre matrix.
pub fn ginibre_state<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Result<DensityState> {
    if d == 0 || rank == 0 || rank > d {
        return Err(Error::InvalidRank { dim: d, rank });
    }
    let g = ginibre(d, rank, rng);
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    Ok(DensityState::from_trusted(w / c(tr, 0.0)))
}

/// Haar-random unit ket.
pub fn random_ket<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVector {
    let v = CVector::from_fn(d, |_, _| complex_normal(rng));
    let n = v.norm();
    v.unscale(n)
}

/// Uniform point on the probability simplex (flat Dirichlet).
pub fn random_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

/// Ginibre state of random rank.
pub fn random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityState {
    let rank = rng.random_range(1..=d);
    ginibre_state(d, rank, rng).expect("rank within 1..=d")
}

/// `rho_A (x) rho_B` with independently sampled factors.
pub fn random_product_state<R: Rng + ?Sized>(da: usize, db: usize, rng: &mut R) -> DensityState {
    let a = random_state(da, rng);
    let b = random_state(db, rng);
    DensityState::from_trusted(kron(a.matrix(), b.matrix()))
}

/// Convex mixture of `terms` random product states.
pub fn random_separable_state<R: Rng + ?Sized>(
    da: usize,
    db: usize,
    terms: usize,
    rng: &mut R,
) -> DensityState {
    let p = random_simplex(terms.max(1), rng);
    let mut acc = CMatrix::zeros(da * db, da * db);
    for pk in p {
        acc += random_product_state(da, db, rng).matrix() * c(pk, 0.0);
    }
    DensityState::from_trusted(acc)
}

/// Rank-one projective measurement in a Haar-random basis.
pub fn random_projective<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Povm> {
    let u = haar_unitary(d, rng)?;
    projective_from_basis(&basis_from_unitary(&u), &Tolerances::default())
}

/// `S^{-1/2} G_i S^{-1/2}` with Wishart-distributed `G_i` and `S = sum G_i`.
pub fn random_povm<R: Rng + ?Sized>(d: usize, outcomes: usize, rng: &mut R) -> Result<Povm> {
    if d == 0 || outcomes == 0 {
        return Err(Error::InvalidPovm(format!(
            "cannot sample {outcomes} effects in dimension {d}"
        )));
    }
    let raw: Vec<CMatrix> = (0..outcomes)
        .map(|_| {
            let g = ginibre(d, d, rng);
            &g * g.adjoint()
        })
        .collect();
    let total = raw.iter().fold(CMatrix::zeros(d, d), |acc, g| acc + g);
    let tol = Tolerances::default();
    let s = matrix_power_on_support(&total, -0.5, &tol)?;
    let effects = raw
        .iter()
        .map(|g| crate::linalg::hermitian_part(&(&s * g * &s)))
        .collect();
    Povm::new(effects, &tol)
}

/// `d`-outcome POVM with every effect of trace 1: a random convex mixture of
/// `terms` random rank-one projective measurements.
pub fn random_equal_trace_povm<R: Rng + ?Sized>(
    d: usize,
    terms: usize,
    rng: &mut R,
) -> Result<Povm> {
    let lambda = random_simplex(terms.max(1), rng);
    let mut effects = vec![CMatrix::zeros(d, d); d];
    for l in lambda {
        let basis = basis_from_unitary(&haar_unitary(d, rng)?);
        for (e, v) in effects.iter_mut().zip(&basis) {
            *e += projector(v) * c(l, 0.0);
        }
    }
    Povm::new(effects, &Tolerances::default())
}

/// Multinomial outcome counts for `shots` draws, as conditional binomials.
pub fn multinomial_counts<R: Rng + ?Sized>(
    probabilities: &[f64],
    shots: u64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    if probabilities.iter().any(|p| !p.is_finite() || *p < -1e-12) {
        return Err(Error::InvalidProbabilities(format!(
            "{probabilities:?} is not a distribution"
        )));
    }
    let mut left = shots;
    let mut mass: f64 = probabilities.iter().map(|p| p.max(0.0)).sum();
    let mut counts = Vec::with_capacity(probabilities.len());
    for (k, p) in probabilities.iter().enumerate() {
        let p = p.max(0.0);
        let n = if k + 1 == probabilities.len() || left == 0 {
            left
        } else {
            let q = if mass > 0.0 {
                (p / mass).clamp(0.0, 1.0)
            } else {
                0.0
            };
            Binomial::new(left, q)
                .expect("probability clamped to [0, 1]")
                .sample(rng)
        };
        counts.push(n);
        left -= n;
        mass -= p;
    }
    Ok(counts)
}
