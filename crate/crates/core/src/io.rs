//! JSON file formats. Complex numbers travel as `[re, im]`, matrices as
//! row-major nested arrays.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::conditional::BipartiteState;
use crate::entanglement::WitnessSpec;
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, DensityState};
use crate::measurements::{validate_povm, Povm, WeightedEnsemble};
use crate::tolerance::Tolerances;

pub type WireComplex = [f64; 2];
pub type WireMatrix = Vec<Vec<WireComplex>>;

pub fn matrix_to_wire(m: &CMatrix) -> WireMatrix {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

/// `what` names the matrix in diagnostics.
pub fn matrix_from_wire(rows: &WireMatrix, what: &str) -> Result<CMatrix> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if n == 0 || cols == 0 {
        return Err(Error::Parse(format!("{what}: empty matrix")));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(Error::Parse(format!(
            "{what}: row {i} has {} entries, row 0 has {cols}",
            r.len()
        )));
    }
    let mut m = CMatrix::zeros(n, cols);
    for (i, r) in rows.iter().enumerate() {
        for (j, z) in r.iter().enumerate() {
            if !(z[0].is_finite() && z[1].is_finite()) {
                return Err(Error::Parse(format!(
                    "{what}: non-finite entry at ({i}, {j})"
                )));
            }
            m[(i, j)] = c(z[0], z[1]);
        }
    }
    Ok(m)
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

/// A density matrix, single-system (`dim`) or bipartite (`dims`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<[usize; 2]>,
    pub matrix: WireMatrix,
}

impl StateFile {
    pub fn from_state(rho: &DensityState) -> Self {
        Self {
            dim: Some(rho.dim()),
            dims: None,
            matrix: matrix_to_wire(rho.matrix()),
        }
    }

    pub fn from_bipartite(rho: &BipartiteState) -> Self {
        let (a, b) = rho.dims();
        Self {
            dim: None,
            dims: Some([a, b]),
            matrix: matrix_to_wire(rho.matrix()),
        }
    }

    pub fn from_raw_matrix(m: &CMatrix) -> Self {
        Self {
            dim: Some(m.nrows()),
            dims: None,
            matrix: matrix_to_wire(m),
        }
    }

    fn total_dim(&self) -> Result<usize> {
        match (self.dim, self.dims) {
            (Some(d), None) => Ok(d),
            (None, Some([a, b])) => Ok(a * b),
            (Some(d), Some([a, b])) if d == a * b => Ok(d),
            (Some(d), Some([a, b])) => Err(Error::Parse(format!(
                "dim {d} disagrees with dims [{a}, {b}]"
            ))),
            (None, None) => Err(Error::Parse("state file needs `dim` or `dims`".into())),
        }
    }

    pub fn to_state(&self, tol: &Tolerances) -> Result<DensityState> {
        let d = self.total_dim()?;
        let m = matrix_from_wire(&self.matrix, "state matrix")?;
        if m.shape() != (d, d) {
            return Err(Error::Parse(format!(
                "state matrix is {}x{}, declared dimension {d}",
                m.nrows(),
                m.ncols()
            )));
        }
        DensityState::new(m, tol)
    }

    /// Single-system files are rejected; the split must be declared.
    pub fn to_bipartite(&self, tol: &Tolerances) -> Result<BipartiteState> {
        let Some([a, b]) = self.dims else {
            return Err(Error::Parse(
                "bipartite state needs `dims: [d_A, d_B]`".into(),
            ));
        };
        BipartiteState::from_state(self.to_state(tol)?, (a, b))
    }
}

/// One measurement: effects plus optional outcome labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub effects: Vec<WireMatrix>,
}

impl MeasurementEntry {
    pub fn from_povm(p: &Povm) -> Self {
        Self {
            labels: Some(p.labels().to_vec()),
            effects: p.effects().iter().map(matrix_to_wire).collect(),
        }
    }

    /// Diagnostics carry `what` and the index of each offending effect.
    pub fn to_povm(&self, what: &str, tol: &Tolerances) -> Result<Povm> {
        let effects = self
            .effects
            .iter()
            .enumerate()
            .map(|(i, m)| matrix_from_wire(m, &format!("{what} effect {i}")))
            .collect::<Result<Vec<_>>>()?;
        let labels = self
            .labels
            .clone()
            .unwrap_or_else(|| (0..effects.len()).map(|i| i.to_string()).collect());
        let p = Povm::unchecked(effects, labels)
            .map_err(|e| Error::InvalidPovm(format!("{what}: {e}")))?;
        let report = validate_povm(&p, tol);
        if !report.is_valid() {
            return Err(Error::InvalidPovm(format!("{what}: {}", report.summary())));
        }
        Ok(p)
    }
}

fn default_true() -> bool {
    true
}

/// Weighted list of measurements. Absent weights mean uniform; with
/// `normalized: false` the weights are used as given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleFile {
    pub dim: usize,
    pub measurements: Vec<MeasurementEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default = "default_true")]
    pub normalized: bool,
}

impl EnsembleFile {
    pub fn from_ensemble(e: &WeightedEnsemble) -> Self {
        Self {
            dim: e.dim(),
            measurements: e
                .measurements()
                .iter()
                .map(MeasurementEntry::from_povm)
                .collect(),
            weights: Some(e.weights().to_vec()),
            normalized: e.is_normalized(),
        }
    }

    pub fn to_ensemble(&self, tol: &Tolerances) -> Result<WeightedEnsemble> {
        let povms = self
            .measurements
            .iter()
            .enumerate()
            .map(|(k, m)| m.to_povm(&format!("measurement {k}"), tol))
            .collect::<Result<Vec<_>>>()?;
        if let Some((k, p)) = povms.iter().enumerate().find(|(_, p)| p.dim() != self.dim) {
            return Err(Error::InvalidEnsemble(format!(
                "measurement {k} acts on dimension {}, file declares {}",
                p.dim(),
                self.dim
            )));
        }
        let n = povms.len().max(1);
        let weights = self
            .weights
            .clone()
            .unwrap_or_else(|| vec![1.0 / n as f64; n]);
        if self.normalized {
            WeightedEnsemble::new(povms, weights)
        } else {
            WeightedEnsemble::unnormalized(povms, weights)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessPair {
    pub a: MeasurementEntry,
    pub b: MeasurementEntry,
}

/// Paired local measurements for the correlation witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub dims: [usize; 2],
    pub pairs: Vec<WitnessPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl WitnessFile {
    pub fn from_witness(w: &WitnessSpec) -> Self {
        let (a, b) = w.dims();
        Self {
            dims: [a, b],
            pairs: w
                .pairs()
                .iter()
                .map(|(pa, pb)| WitnessPair {
                    a: MeasurementEntry::from_povm(pa),
                    b: MeasurementEntry::from_povm(pb),
                })
                .collect(),
            weights: Some(w.weights().to_vec()),
        }
    }

    pub fn to_witness(&self, tol: &Tolerances) -> Result<WitnessSpec> {
        let pairs = self
            .pairs
            .iter()
            .enumerate()
            .map(|(k, p)| {
                Ok((
                    p.a.to_povm(&format!("pair {k} side A"), tol)?,
                    p.b.to_povm(&format!("pair {k} side B"), tol)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let n = pairs.len().max(1);
        let spec = WitnessSpec::new(
            pairs,
            self.weights
                .clone()
                .unwrap_or_else(|| vec![1.0 / n as f64; n]),
        )?;
        if spec.dims() != (self.dims[0], self.dims[1]) {
            return Err(Error::InvalidEnsemble(format!(
                "pairs act on {:?}, file declares {:?}",
                spec.dims(),
                self.dims
            )));
        }
        Ok(spec)
    }
}

/// Outcome statistics per measurement. `shots` absent means exact
/// probabilities; otherwise `data` holds relative frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    pub data: Vec<Vec<f64>>,
}

impl ProbabilityFile {
    /// Each row must be finite, nonnegative and sum to one within `tol.state`
    /// (frequencies within `1e-9`).
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        for (k, row) in self.data.iter().enumerate() {
            if let Some(x) = row.iter().find(|x| !x.is_finite() || **x < -tol.state) {
                return Err(Error::InvalidProbabilities(format!(
                    "measurement {k}: entry {x}"
                )));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > tol.state.max(1e-9) {
                return Err(Error::InvalidProbabilities(format!(
                    "measurement {k}: sums to {s}"
                )));
            }
        }
        Ok(())
    }
}
