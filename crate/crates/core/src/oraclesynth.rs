//! Threshold oracles as products of disjoint multi-controlled phase blocks.
//!
//! Write `d' + 1 = a₀a₁…a_{n−1}` in binary, most significant bit first. For
//! every set bit `a_i` the codes that agree with `d' + 1` on bits `0..i` and
//! have bit `i` equal to 0 are all `<= d'`, and these dyadic ranges partition
//! `[0, d']`. Each range is one phase gate controlled on the `i`-bit prefix
//! and anti-controlled on qubit `i`, so the comparator needs
//! `popcount(d' + 1)` gates instead of one per marked code. A threshold of the
//! form `2^m − 1` collapses to a single block.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::simcore::StateVector;

/// One multi-controlled phase gate marking a contiguous dyadic range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBlock {
    n_qubits: u32,
    /// Required values of qubits `0..prefix_len`, packed with qubit 0 as the MSB.
    prefix: u64,
    prefix_len: u32,
}

impl OracleBlock {
    pub fn prefix_len(&self) -> u32 {
        self.prefix_len
    }

    /// Prefix bits as a string, qubit 0 first. Empty for the unconditioned block.
    pub fn prefix_bits(&self) -> String {
        crate::dataset::encode(self.prefix, self.prefix_len)
    }

    /// The qubit that must read 0; equals the prefix length.
    pub fn anticontrol(&self) -> u32 {
        self.prefix_len
    }

    pub fn free_bits(&self) -> u32 {
        self.n_qubits - self.prefix_len - 1
    }

    pub fn marked_count(&self) -> u64 {
        1 << self.free_bits()
    }

    /// Inclusive code range `[lo, hi]` this block marks.
    pub fn marked_range(&self) -> (u64, u64) {
        let lo = self.prefix << (self.n_qubits - self.prefix_len);
        (lo, lo + self.marked_count() - 1)
    }

    /// Gate-level predicate, independent of [`marked_range`](Self::marked_range).
    pub fn marks(&self, code: u64) -> bool {
        let shift = self.n_qubits - self.prefix_len;
        let prefix_ok = self.prefix_len == 0 || code >> shift == self.prefix;
        let anti_ok = code >> (shift - 1) & 1 == 0;
        prefix_ok && anti_ok
    }
}

/// A synthesised oracle: multiply every code `<= threshold` by `e^{iφ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OraclePlan {
    n_qubits: u32,
    threshold: u64,
    phi: f64,
    blocks: Vec<OracleBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GateCostReport {
    pub block_count: u64,
    pub total_controls: u64,
    pub naive_block_count: u64,
}

/// Decompose the comparator `code <= d_prime` into phase blocks.
///
/// `d_prime = 2^n − 1` is rejected: every code would be marked.
pub fn synthesize_oracle(d_prime: u64, n_qubits: u32, phi: f64) -> Result<OraclePlan> {
    if n_qubits == 0 || n_qubits >= u64::BITS || d_prime >> n_qubits != 0 {
        return Err(Error::ThresholdOutOfRange { d_prime, n_qubits });
    }
    let bound = d_prime + 1;
    if bound >> n_qubits != 0 {
        return Err(Error::ThresholdIsFullRange { d_prime, n_qubits });
    }
    let blocks = (0..n_qubits)
        .filter(|&i| bound >> (n_qubits - 1 - i) & 1 == 1)
        .map(|i| OracleBlock {
            n_qubits,
            prefix: bound >> (n_qubits - i),
            prefix_len: i,
        })
        .collect();
    Ok(OraclePlan {
        n_qubits,
        threshold: d_prime,
        phi,
        blocks,
    })
}

impl OraclePlan {
    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Blocks in descending bit significance.
    pub fn blocks(&self) -> &[OracleBlock] {
        &self.blocks
    }

    /// The `2^n` diagonal obtained by composing the blocks' gate predicates.
    pub fn materialize_diagonal(&self) -> Vec<Complex64> {
        let phase = Complex64::from_polar(1.0, self.phi);
        let mut diag = vec![Complex64::new(1.0, 0.0); 1usize << self.n_qubits];
        for block in &self.blocks {
            for (code, d) in diag.iter_mut().enumerate() {
                if block.marks(code as u64) {
                    *d *= phase;
                }
            }
        }
        diag
    }

    /// Apply the blocks to `state` in sequence.
    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: state.n_qubits(),
            });
        }
        let phase = Complex64::from_polar(1.0, self.phi);
        for block in &self.blocks {
            let (lo, hi) = block.marked_range();
            state.scale_range(lo, hi, phase);
        }
        Ok(())
    }

    pub fn gate_cost(&self) -> GateCostReport {
        GateCostReport {
            block_count: self.blocks.len() as u64,
            total_controls: self.blocks.iter().map(|b| u64::from(b.prefix_len)).sum(),
            naive_block_count: self.threshold + 1,
        }
    }

    /// JSON report: `{n, d_prime, phi, blocks:[{prefix, anticontrol, marked_range}], cost}`.
    pub fn to_report(&self) -> serde_json::Value {
        let cost = self.gate_cost();
        serde_json::json!({
            "n": self.n_qubits,
            "d_prime": self.threshold,
            "phi": self.phi,
            "blocks": self.blocks.iter().map(|b| {
                let (lo, hi) = b.marked_range();
                serde_json::json!({
                    "prefix": b.prefix_bits(),
                    "anticontrol": b.anticontrol(),
                    "marked_range": [lo, hi],
                })
            }).collect::<Vec<_>>(),
            "cost": {
                "blocks": cost.block_count,
                "controls": cost.total_controls,
                "naive": cost.naive_block_count,
            },
        })
    }
}
