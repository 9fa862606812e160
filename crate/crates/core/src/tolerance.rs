use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by validators and audits.
///
/// `state` is relative to the operator norm of the checked matrix (with a
/// floor of 1). `support` is the relative eigenvalue cutoff used for
/// pseudo-inverses. `zero` decides when a computed norm counts as vanishing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub state: f64,
    pub support: f64,
    pub zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            state: 1e-9,
            support: 1e-10,
            zero: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn with_state(mut self, tol: f64) -> Self {
        self.state = tol;
        self
    }
}
