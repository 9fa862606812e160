//! Dense complex-matrix substrate.
//!
//! Operators on a `d`-dimensional space are `d x d` [`CMatrix`] values.
//! The vectorization isomorphism maps an operator `O` to the ket
//! `|O> = sum_ij O_ij |i> (x) |j>*`, stored at index `i * d + j`. With this
//! convention `<A|B> = tr(A^dagger B)` and the maximally entangled ket
//! `|psi_d>` is the vectorization of `1/sqrt(d)`.
//!
//! Bipartite operators use the ordering `A (x) B`: row index `a * d_B + b`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// Build a matrix from row-major rows.
pub fn from_rows(rows: &[Vec<C64>]) -> Result<CMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::ShapeMismatch {
            left: (n, m),
            right: (n, rows.iter().map(Vec::len).max().unwrap_or(0)),
        });
    }
    Ok(CMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

pub fn real_matrix(d: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(d, d, entries.iter().map(|&x| c(x, 0.0)))
}

pub fn pauli_x() -> CMatrix {
    real_matrix(2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> CMatrix {
    real_matrix(2, &[1.0, 0.0, 0.0, -1.0])
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub fn ket_bra(ket: &CVector, bra: &CVector) -> CMatrix {
    ket * bra.adjoint()
}

pub fn projector(ket: &CVector) -> CMatrix {
    ket_bra(ket, ket)
}

/// Computational basis ket `|index>` of dimension `d`.
pub fn basis_ket(d: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(d);
    v[index] = c(1.0, 0.0);
    v
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest absolute entry of `m - m^dagger`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Scale used to turn relative tolerances into absolute ones.
pub fn norm_scale(m: &CMatrix) -> f64 {
    m.norm().max(1.0)
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `(m + m^dagger) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// `u m u^dagger`.
pub fn conjugate_by(u: &CMatrix, m: &CMatrix) -> CMatrix {
    u * m * u.adjoint()
}

pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let d = u.nrows();
    max_abs_entry(&(u.adjoint() * u - identity(d)))
}

/// A vectorized operator `|O>` living in the doubled space of dimension `d^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorizedOperator {
    dim: usize,
    amplitudes: CVector,
}

impl VectorizedOperator {
    pub fn from_amplitudes(amplitudes: CVector) -> Result<Self> {
        let n = amplitudes.len();
        let dim = exact_sqrt(n).ok_or(Error::NotPerfectSquare(n))?;
        Ok(Self { dim, amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    /// `<self|other>`.
    pub fn dot(&self, other: &Self) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Overlap `<psi_d|self>`, equal to `tr(O)/sqrt(d)`.
    pub fn overlap_with_max_entangled(&self) -> C64 {
        max_entangled(self.dim).dot(self)
    }
}

fn exact_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

/// `|O>` with amplitude `O_ij` at index `i * d + j`.
pub fn vectorize(op: &CMatrix) -> Result<VectorizedOperator> {
    let d = ensure_square(op)?;
    let amplitudes = CVector::from_fn(d * d, |k, _| op[(k / d, k % d)]);
    Ok(VectorizedOperator { dim: d, amplitudes })
}

/// Inverse of [`vectorize`]: `sqrt(d) tr_2(|O><psi_d|)`.
pub fn devectorize(v: &VectorizedOperator) -> CMatrix {
    let d = v.dim;
    CMatrix::from_fn(d, d, |i, j| v.amplitudes[i * d + j])
}

/// Devectorize raw amplitudes, checking the length.
pub fn devectorize_amplitudes(amplitudes: &[C64]) -> Result<CMatrix> {
    let v = VectorizedOperator::from_amplitudes(CVector::from_column_slice(amplitudes))?;
    Ok(devectorize(&v))
}

/// The maximally entangled ket `|psi_d> = d^{-1/2} sum_i |i>|i>*`.
pub fn max_entangled(d: usize) -> VectorizedOperator {
    let s = 1.0 / (d as f64).sqrt();
    let amplitudes = CVector::from_fn(d * d, |k, _| {
        if k / d == k % d {
            c(s, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    VectorizedOperator { dim: d, amplitudes }
}

/// Projector onto the complement of `|psi_d>` in the doubled space.
pub fn identity_perp_max_entangled(d: usize) -> CMatrix {
    let psi = max_entangled(d);
    identity(d * d) - projector(psi.amplitudes())
}

/// Hilbert–Schmidt inner product `tr(A^dagger B)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Result<C64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

/// Which factor of a bipartite space `A (x) B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Subsystem {
    A,
    B,
}

fn check_bipartite(m: &CMatrix, dims: (usize, usize)) -> Result<()> {
    let n = ensure_square(m)?;
    if dims.0 * dims.1 != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: dims.0 * dims.1,
        });
    }
    Ok(())
}

/// Reduce a bipartite operator to the subsystem `keep`.
pub fn partial_trace(m: &CMatrix, dims: (usize, usize), keep: Subsystem) -> Result<CMatrix> {
    check_bipartite(m, dims)?;
    let (da, db) = dims;
    let out = match keep {
        Subsystem::A => CMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Subsystem::B => CMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
        }),
    };
    Ok(out)
}

/// Transpose the indices of one factor of a bipartite operator.
pub fn partial_transpose(m: &CMatrix, dims: (usize, usize), which: Subsystem) -> Result<CMatrix> {
    check_bipartite(m, dims)?;
    let (da, db) = dims;
    let n = da * db;
    let out = CMatrix::from_fn(n, n, |r, col| {
        let (a, b) = (r / db, r % db);
        let (a2, b2) = (col / db, col % db);
        match which {
            Subsystem::A => m[(a2 * db + b, a * db + b2)],
            Subsystem::B => m[(a * db + b2, a2 * db + b)],
        }
    });
    Ok(out)
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: CMatrix,
}

impl EigenSystem {
    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }

    /// `sum_k f(lambda_k) |v_k><v_k|`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.vectors.nrows();
        let mut scaled = self.vectors.clone();
        for (k, &lam) in self.values.iter().enumerate() {
            let s = c(f(lam), 0.0);
            for i in 0..n {
                scaled[(i, k)] *= s;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eigensystem(h: &CMatrix, tol: &Tolerances) -> Result<EigenSystem> {
    let n = ensure_square(h)?;
    if !is_finite(h) {
        return Err(Error::NonFinite);
    }
    let dev = hermitian_deviation(h);
    if dev > tol.state * norm_scale(h) {
        return Err(Error::NotHermitian(dev));
    }
    Ok(eigensystem_unchecked(&hermitian_part(h), n))
}

fn eigensystem_unchecked(h: &CMatrix, n: usize) -> EigenSystem {
    if n == 0 {
        return EigenSystem {
            values: Vec::new(),
            vectors: zeros(0, 0),
        };
    }
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    EigenSystem { values, vectors }
}

/// Ascending eigenvalues of the Hermitian part of `h`, no validation.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let n = h.nrows();
    if n == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = SymmetricEigen::new(hermitian_part(h))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Raise a Hermitian PSD matrix to a real power on its support.
///
/// Eigenvalues at or below `tol.support * lambda_max` map to zero, so negative
/// exponents give the pseudo-inverse power.
pub fn matrix_power_on_support(h: &CMatrix, exponent: f64, tol: &Tolerances) -> Result<CMatrix> {
    let es = hermitian_eigensystem(h, tol)?;
    let lam_max = es.max().max(0.0);
    let floor = -tol.state * lam_max.max(1.0);
    if es.min() < floor {
        return Err(Error::NegativeEigenvalue(es.min()));
    }
    let cutoff = tol.support * lam_max;
    Ok(es.map_spectrum(|lam| {
        if lam <= cutoff {
            0.0
        } else {
            lam.powf(exponent)
        }
    }))
}

/// Like [`matrix_power_on_support`] but never fails: negative eigenvalues are
/// treated as outside the support.
pub fn psd_power_clamped(h: &CMatrix, exponent: f64, support: f64) -> (CMatrix, CMatrix) {
    let n = h.nrows();
    let es = eigensystem_unchecked(&hermitian_part(h), n);
    let cutoff = support * es.max().max(0.0);
    let power = es.map_spectrum(|lam| {
        if lam <= cutoff {
            0.0
        } else {
            lam.powf(exponent)
        }
    });
    let proj = es.map_spectrum(|lam| if lam <= cutoff { 0.0 } else { 1.0 });
    (power, proj)
}

/// A validated density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    matrix: CMatrix,
}

impl DensityState {
    /// Validate Hermiticity, unit trace and positivity within `tol.state`.
    pub fn new(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        ensure_square(&matrix)?;
        if !is_finite(&matrix) {
            return Err(Error::NonFinite);
        }
        let scale = norm_scale(&matrix);
        let dev = hermitian_deviation(&matrix);
        if dev > tol.state * scale {
            return Err(Error::NotHermitian(dev));
        }
        let tr = trace(&matrix);
        let tr_dev = (tr - c(1.0, 0.0)).norm();
        if tr_dev > tol.state {
            return Err(Error::InvalidTrace(tr_dev));
        }
        let matrix = hermitian_part(&matrix);
        let min = hermitian_eigenvalues(&matrix)
            .first()
            .copied()
            .unwrap_or(0.0);
        if min < -tol.state * scale {
            return Err(Error::NegativeEigenvalue(min));
        }
        Ok(Self { matrix })
    }

    /// Wrap a matrix known to be a valid state by construction.
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        Self {
            matrix: hermitian_part(&matrix),
        }
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(ket: &CVector) -> Result<Self> {
        let n = ket.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Precondition("pure state from a zero ket".into()));
        }
        let k = ket.unscale(n);
        Ok(Self::from_trusted(projector(&k)))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::from_trusted(identity(d) * c(1.0 / d as f64, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn purity(&self) -> f64 {
        hs_inner(&self.matrix, &self.matrix).map_or(0.0, |z| z.re)
    }

    /// `tr(op rho)`.
    pub fn expectation(&self, op: &CMatrix) -> C64 {
        (op * &self.matrix).trace()
    }

    /// `u rho u^dagger`; `u` must be unitary.
    pub fn evolve(&self, u: &CMatrix) -> Self {
        Self::from_trusted(conjugate_by(u, &self.matrix))
    }

    pub fn vectorized(&self) -> VectorizedOperator {
        vectorize(&self.matrix).expect("density matrices are square")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{ginibre_state, haar_unitary, random_matrix, RngSpec};
    use approx::assert_abs_diff_eq;

    #[test]
    fn vectorize_identity_and_pauli_x() {
        let v = vectorize(&identity(2)).unwrap();
        let amps: Vec<C64> = v.amplitudes().iter().copied().collect();
        assert_eq!(amps, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
        assert_abs_diff_eq!(
            v.overlap_with_max_entangled().re,
            2f64.sqrt(),
            epsilon = 1e-15
        );

        let vx = vectorize(&pauli_x()).unwrap();
        let amps: Vec<f64> = vx.amplitudes().iter().map(|z| z.re).collect();
        assert_eq!(amps, vec![0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn vectorize_rejects_rectangular() {
        assert!(matches!(
            vectorize(&zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn devectorize_maps_entries() {
        let m = devectorize_amplitudes(&[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]).unwrap();
        assert_eq!(m, pauli_z());
        assert!(matches!(
            devectorize_amplitudes(&[c(1., 0.); 3]),
            Err(Error::NotPerfectSquare(3))
        ));
    }

    #[test]
    fn vectorization_roundtrip_and_norm() {
        let mut rng = RngSpec::new(11, "vec-roundtrip").rng();
        for k in 0..100 {
            let d = 1 + k % 16;
            let o = random_matrix(d, &mut rng);
            let v = vectorize(&o).unwrap();
            let back = devectorize(&v);
            assert_eq!(back, o);
            let direct = (o.adjoint() * &o).trace();
            assert!((v.dot(&v) - direct).norm() < 1e-12 * direct.norm().max(1.0));
            assert!(
                (v.overlap_with_max_entangled() - trace(&o) / (d as f64).sqrt()).norm() < 1e-12
            );
        }
    }

    #[test]
    fn hs_inner_paulis() {
        assert_eq!(hs_inner(&pauli_z(), &pauli_z()).unwrap(), c(2.0, 0.0));
        assert_eq!(hs_inner(&pauli_z(), &pauli_x()).unwrap(), c(0.0, 0.0));
        assert!(hs_inner(&identity(2), &identity(3)).is_err());
    }

    #[test]
    fn partial_trace_of_products_and_bell() {
        let tol = Tolerances::default();
        let rng = &mut RngSpec::new(5, "ptrace").rng();
        let ra = ginibre_state(2, 2, rng).unwrap();
        let rb = ginibre_state(3, 3, rng).unwrap();
        let prod = kron(ra.matrix(), rb.matrix());
        let back = partial_trace(&prod, (2, 3), Subsystem::A).unwrap();
        assert!(max_abs_entry(&(back - ra.matrix())) < 1e-14);
        let back = partial_trace(&prod, (2, 3), Subsystem::B).unwrap();
        assert!(max_abs_entry(&(back - rb.matrix())) < 1e-14);

        for d in 2..5 {
            let psi = projector(max_entangled(d).amplitudes());
            for keep in [Subsystem::A, Subsystem::B] {
                let red = partial_trace(&psi, (d, d), keep).unwrap();
                let target = identity(d) * c(1.0 / d as f64, 0.0);
                assert!(max_abs_entry(&(red - target)) < 1e-14);
            }
        }

        let rab = ginibre_state(6, 4, rng).unwrap();
        let red = partial_trace(rab.matrix(), (2, 3), Subsystem::A).unwrap();
        assert!((trace(&red).re - 1.0).abs() < 1e-12);
        assert!(partial_trace(rab.matrix(), (2, 2), Subsystem::A).is_err());
        let _ = tol;
    }

    #[test]
    fn partial_transpose_properties() {
        let rng = &mut RngSpec::new(6, "pt").rng();
        let a = random_matrix(2, rng);
        let b = random_matrix(3, rng);
        let prod = kron(&a, &b);
        let pt = partial_transpose(&prod, (2, 3), Subsystem::B).unwrap();
        assert!(max_abs_entry(&(pt - kron(&a, &b.transpose()))) < 1e-15);
        let pt = partial_transpose(&prod, (2, 3), Subsystem::A).unwrap();
        assert!(max_abs_entry(&(pt - kron(&a.transpose(), &b))) < 1e-15);

        let m = random_matrix(6, rng);
        for which in [Subsystem::A, Subsystem::B] {
            let twice = partial_transpose(
                &partial_transpose(&m, (3, 2), which).unwrap(),
                (3, 2),
                which,
            )
            .unwrap();
            assert_eq!(twice, m);
            let once = partial_transpose(&m, (3, 2), which).unwrap();
            assert!((trace(&once) - trace(&m)).norm() < 1e-14);
        }

        let bell = projector(max_entangled(2).amplitudes());
        let pt = partial_transpose(&bell, (2, 2), Subsystem::B).unwrap();
        let ev = hermitian_eigenvalues(&pt);
        assert_abs_diff_eq!(ev[0], -0.5, epsilon = 1e-12);
    }

    #[test]
    fn support_power() {
        let tol = Tolerances::default();
        for d in 1..6 {
            let mixed = identity(d) * c(1.0 / d as f64, 0.0);
            let p = matrix_power_on_support(&mixed, -0.25, &tol).unwrap();
            let expected = identity(d) * c((d as f64).powf(0.25), 0.0);
            assert!(max_abs_entry(&(p - expected)) < 1e-12);
        }
        let rng = &mut RngSpec::new(7, "power").rng();
        let u = haar_unitary(3, rng).unwrap();
        let proj = projector(&u.column(0).into_owned());
        let p = matrix_power_on_support(&proj, -0.25, &tol).unwrap();
        assert!(max_abs_entry(&(p - &proj)) < 1e-12);

        for _ in 0..20 {
            let rho = ginibre_state(4, 4, rng).unwrap();
            let q = matrix_power_on_support(rho.matrix(), -0.25, &tol).unwrap();
            let prod = &q * &q * &q * &q * rho.matrix();
            assert!(max_abs_entry(&(prod - identity(4))) < 1e-9);
            let one = matrix_power_on_support(rho.matrix(), 1.0, &tol).unwrap();
            assert!(max_abs_entry(&(one - rho.matrix())) < 1e-12);
        }

        let neg = pauli_z();
        assert!(matches!(
            matrix_power_on_support(&neg, 0.5, &tol),
            Err(Error::NegativeEigenvalue(_))
        ));
    }

    #[test]
    fn eigensystem_contract() {
        let tol = Tolerances::default();
        let es = hermitian_eigensystem(&pauli_z(), &tol).unwrap();
        assert_abs_diff_eq!(es.values[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(es.values[1], 1.0, epsilon = 1e-15);
        let es = hermitian_eigensystem(&identity(5), &tol).unwrap();
        assert!(es.values.iter().all(|&v| (v - 1.0).abs() < 1e-15));

        let rng = &mut RngSpec::new(8, "eig").rng();
        for d in 1..=12 {
            let g = random_matrix(d, rng);
            let h = hermitian_part(&g);
            let es = hermitian_eigensystem(&h, &tol).unwrap();
            let scale = norm_scale(&h);
            for k in 0..d {
                let v = es.vector(k);
                let r = &h * &v - &v * c(es.values[k], 0.0);
                assert!(r.norm() < 1e-10 * scale);
            }
            let gram = es.vectors.adjoint() * &es.vectors;
            assert!(max_abs_entry(&(gram - identity(d))) < 1e-10);
            let recon = es.map_spectrum(|x| x);
            assert!(max_abs_entry(&(recon - &h)) < 1e-10 * scale);
            assert!(es.values.windows(2).all(|w| w[0] <= w[1]));
        }
        let bad = real_matrix(2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            hermitian_eigensystem(&bad, &tol),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn density_state_validation() {
        let tol = Tolerances::default();
        assert!(DensityState::new(identity(2) * c(0.5, 0.0), &tol).is_ok());
        assert!(matches!(
            DensityState::new(identity(2), &tol),
            Err(Error::InvalidTrace(_))
        ));
        let neg = real_matrix(2, &[1.5, 0.0, 0.0, -0.5]);
        assert!(matches!(
            DensityState::new(neg, &tol),
            Err(Error::NegativeEigenvalue(_))
        ));
        let nh = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.), c(0.1, 0.), c(0.0, 0.), c(0.5, 0.)]);
        assert!(matches!(
            DensityState::new(nh, &tol),
            Err(Error::NotHermitian(_))
        ));
    }
}
