//! Integer datasets and their binary encoding.
//!
//! A value is its own code: a dataset over `n_qubits` holds distinct integers
//! in `[0, 2^n_qubits)` and the register basis state `|v⟩` stands for value `v`.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Widest register a dataset may address. Codes are stored as `u64`.
pub const MAX_DATASET_QUBITS: u32 = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetFormat {
    Csv,
    Json,
}

impl DatasetFormat {
    /// Guess the format from a file extension; anything but `.json` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => DatasetFormat::Json,
            _ => DatasetFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Storage {
    /// Sorted ascending, distinct.
    Sparse(Vec<u64>),
    /// Every code of the register, never materialised.
    FullRange,
}

/// A validated dataset of distinct codes.
///
/// Values are kept sorted so rank queries (`count_at_most`, `nth`) are
/// logarithmic; full-range datasets are implicit and answer them in O(1),
/// which is what lets the subspace engine run at any register width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedDataset {
    storage: Storage,
    n_qubits: u32,
    true_min: u64,
}

impl EncodedDataset {
    /// Validate `values` against a register of `n_qubits` (inferred when `None`).
    pub fn from_values(mut values: Vec<u64>, n_qubits: Option<u32>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyDataset);
        }
        values.sort_unstable();
        if let Some(w) = values.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateValue { value: w[0] });
        }
        let max = *values.last().expect("non-empty");
        let n_qubits = match n_qubits {
            Some(n) => {
                if n == 0 || n > MAX_DATASET_QUBITS {
                    return Err(Error::QubitLimitExceeded {
                        n_qubits: n,
                        limit: MAX_DATASET_QUBITS,
                    });
                }
                if max >> n != 0 {
                    return Err(Error::ValueOutOfRange {
                        value: max,
                        n_qubits: n,
                    });
                }
                n
            }
            None => bits_needed(max),
        };
        if n_qubits > MAX_DATASET_QUBITS {
            return Err(Error::ValueOutOfRange {
                value: max,
                n_qubits: MAX_DATASET_QUBITS,
            });
        }
        Ok(Self {
            true_min: values[0],
            storage: Storage::Sparse(values),
            n_qubits,
        })
    }

    /// All `2^n_qubits` codes.
    pub fn full_range(n_qubits: u32) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_DATASET_QUBITS {
            return Err(Error::QubitLimitExceeded {
                n_qubits,
                limit: MAX_DATASET_QUBITS,
            });
        }
        Ok(Self {
            storage: Storage::FullRange,
            n_qubits,
            true_min: 0,
        })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    /// Number of codes addressable by the register, `2^n_qubits`.
    pub fn register_size(&self) -> u64 {
        1u64 << self.n_qubits
    }

    pub fn size(&self) -> u64 {
        match &self.storage {
            Storage::Sparse(v) => v.len() as u64,
            Storage::FullRange => self.register_size(),
        }
    }

    /// Smallest value. Verification only; the search drivers never read it.
    pub fn true_min(&self) -> u64 {
        self.true_min
    }

    pub fn is_full_range(&self) -> bool {
        matches!(self.storage, Storage::FullRange) || self.size() == self.register_size()
    }

    pub fn contains(&self, value: u64) -> bool {
        match &self.storage {
            Storage::Sparse(v) => v.binary_search(&value).is_ok(),
            Storage::FullRange => value < self.register_size(),
        }
    }

    /// Number of values `<= threshold`.
    pub fn count_at_most(&self, threshold: u64) -> u64 {
        match &self.storage {
            Storage::Sparse(v) => v.partition_point(|&x| x <= threshold) as u64,
            Storage::FullRange => threshold.saturating_add(1).min(self.register_size()),
        }
    }

    /// The `rank`-th smallest value.
    ///
    /// Panics when `rank >= size()`.
    pub fn nth(&self, rank: u64) -> u64 {
        assert!(rank < self.size(), "rank {rank} out of bounds");
        match &self.storage {
            Storage::Sparse(v) => v[rank as usize],
            Storage::FullRange => rank,
        }
    }

    /// Values in ascending order.
    pub fn values(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match &self.storage {
            Storage::Sparse(v) => Box::new(v.iter().copied()),
            Storage::FullRange => Box::new(0..self.register_size()),
        }
    }

    /// Canonical CSV: sorted ascending, one value per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for v in self.values() {
            writeln!(out, "{v}").expect("writing to a String");
        }
        out
    }

    /// Binary code of `value`, most significant bit first.
    pub fn encode(&self, value: u64) -> String {
        encode(value, self.n_qubits)
    }

    /// Short human-readable description for report headers.
    pub fn describe(&self) -> String {
        match self.storage {
            Storage::FullRange => format!("full:{}", self.n_qubits),
            Storage::Sparse(_) => format!("{} values over {} qubits", self.size(), self.n_qubits),
        }
    }
}

/// `⌈log₂(max + 1)⌉`, at least 1.
fn bits_needed(max: u64) -> u32 {
    (u64::BITS - max.leading_zeros()).max(1)
}

pub fn encode(value: u64, n_qubits: u32) -> String {
    (0..n_qubits)
        .rev()
        .map(|bit| if value >> bit & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn decode(code: &str) -> Result<u64> {
    if code.is_empty() || code.len() > MAX_DATASET_QUBITS as usize {
        return Err(Error::Parse(format!("bad code length in {code:?}")));
    }
    code.chars().try_fold(0u64, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok(acc << 1 | 1),
        _ => Err(Error::Parse(format!("non-binary digit in {code:?}"))),
    })
}

/// Parse a dataset from bytes.
pub fn parse_dataset(
    bytes: &[u8],
    format: DatasetFormat,
    n_qubits: Option<u32>,
) -> Result<EncodedDataset> {
    let values = match format {
        DatasetFormat::Csv => parse_csv(bytes)?,
        DatasetFormat::Json => serde_json::from_slice::<Vec<u64>>(bytes).map_err(|e| {
            Error::Parse(format!(
                "expected a flat JSON array of non-negative integers: {e}"
            ))
        })?,
    };
    EncodedDataset::from_values(values, n_qubits)
}

/// Load a dataset file.
pub fn load_dataset(
    path: &Path,
    format: DatasetFormat,
    n_qubits: Option<u32>,
) -> Result<EncodedDataset> {
    let bytes = std::fs::read(path)?;
    parse_dataset(&bytes, format, n_qubits)
}

fn parse_csv(bytes: &[u8]) -> Result<Vec<u64>> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v = line
            .parse::<u64>()
            .map_err(|e| Error::Parse(format!("line {}: {line:?}: {e}", lineno + 1)))?;
        values.push(v);
    }
    Ok(values)
}
