//! Amplitude-amplification engines.
//!
//! Both engines evolve the same dynamics: a diagonal marking phase on codes
//! `<= threshold` followed by a rank-1 phase deflection about the prepared
//! uniform state. [`StateVector`] keeps every amplitude; [`SubspaceState`]
//! keeps only the two amplitudes on the normalised marked and unmarked
//! components, which is exact because both operators leave that plane
//! invariant.

mod statevector;
mod subspace;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use statevector::{StateVector, DEFAULT_MAX_QUBITS};
pub use subspace::SubspaceState;

/// Register width up to which [`Engine::Auto`] picks the statevector engine.
pub const AUTO_STATEVECTOR_MAX_QUBITS: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Statevector,
    Subspace,
    #[default]
    Auto,
}

impl Engine {
    /// Pick a concrete engine for a register of `n_qubits`.
    pub fn resolve(self, n_qubits: u32) -> Engine {
        match self {
            Engine::Auto if n_qubits <= AUTO_STATEVECTOR_MAX_QUBITS => Engine::Statevector,
            Engine::Auto => Engine::Subspace,
            e => e,
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "statevector" => Ok(Engine::Statevector),
            "subspace" => Ok(Engine::Subspace),
            "auto" => Ok(Engine::Auto),
            _ => Err(Error::InvalidParams(format!("unknown engine {s:?}"))),
        }
    }
}

/// Marks every code `c <= threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarkedPredicate {
    threshold: u64,
    n_qubits: u32,
}

impl MarkedPredicate {
    pub fn new(threshold: u64, n_qubits: u32) -> Result<Self> {
        if n_qubits == 0 || n_qubits >= u64::BITS || threshold >> n_qubits != 0 {
            return Err(Error::ThresholdOutOfRange {
                d_prime: threshold,
                n_qubits,
            });
        }
        Ok(Self {
            threshold,
            n_qubits,
        })
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn marks(&self, code: u64) -> bool {
        code <= self.threshold
    }
}

/// Neumaier-compensated sum in a fixed (sequential) order.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
