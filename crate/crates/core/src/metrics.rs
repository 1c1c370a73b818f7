//! Analytic query-complexity model and estimation diagnostics.

use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groverlong::compute_tmax;
use crate::minsearch::{dha_budget, SearchTrace};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexityReport {
    pub n_size: u64,
    pub m0: u64,
    /// `floor((π/2 − β)/β) + 1` at `M₀`.
    pub t_max: f64,
    /// `(π/2)·√(N/M₀)`.
    pub t_max_asymptotic: f64,
    /// Total Grover-Long iterations, `(π/2)(√2 + 1)(√(2N) − √(N/M₀))`.
    pub r_g: f64,
    /// State-preparation cost `(log₂ N)²`.
    pub r_init: f64,
    pub r_total: f64,
    /// `22.5·√N + 1.4·(log₂ N)²`.
    pub dha_bound: f64,
}

pub fn complexity_report(n_size: u64, m0: u64) -> Result<ComplexityReport> {
    if n_size < 2 || m0 == 0 || m0 > n_size {
        return Err(Error::InvalidCounts {
            marked: m0,
            size: n_size,
        });
    }
    let n = n_size as f64;
    let ratio = n / m0 as f64;
    let r_g = grover_iterations_closed_form(n_size, m0);
    let r_init = n.log2().powi(2);
    Ok(ComplexityReport {
        n_size,
        m0,
        t_max: compute_tmax(m0, n_size)? as f64,
        t_max_asymptotic: FRAC_PI_2 * ratio.sqrt(),
        r_g,
        r_init,
        r_total: r_g + r_init,
        dha_bound: dha_budget(n_size),
    })
}

fn grover_iterations_closed_form(n_size: u64, m0: u64) -> f64 {
    let n = n_size as f64;
    FRAC_PI_2 * (SQRT_2 + 1.0) * ((2.0 * n).sqrt() - (n / m0 as f64).sqrt())
}

/// `(π/2)·Σ_k √(N/M_k)` with `M_{k+1} = M_k / 2` (integer halving) while `M_k >= 1`.
pub fn grover_iterations_explicit_sum(n_size: u64, m0: u64) -> f64 {
    let n = n_size as f64;
    let mut m = m0;
    let mut sum = 0.0;
    while m >= 1 {
        sum += (n / m as f64).sqrt();
        m /= 2;
    }
    FRAC_PI_2 * sum
}

/// Relative gap `|closed − explicit| / explicit` between the closed-form
/// iteration total and the halving sum it summarises.
pub fn closed_form_gap(n_size: u64, m0: u64) -> f64 {
    let explicit = grover_iterations_explicit_sum(n_size, m0);
    (grover_iterations_closed_form(n_size, m0) - explicit).abs() / explicit
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum M0Rule {
    /// `M₀ = N/2`.
    Half,
    /// `M₀ = 1`.
    One,
}

impl M0Rule {
    pub fn m0(self, n_size: u64) -> u64 {
        match self {
            M0Rule::Half => n_size / 2,
            M0Rule::One => 1,
        }
    }
}

impl std::str::FromStr for M0Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half" => Ok(M0Rule::Half),
            "one" => Ok(M0Rule::One),
            _ => Err(Error::InvalidParams(format!("unknown M0 rule {s:?}"))),
        }
    }
}

pub const MAX_CURVE_QUBITS: u32 = 40;

/// One report per register width `n_min..=n_max`, `N = 2^n`.
pub fn complexity_curve(n_min: u32, n_max: u32, rule: M0Rule) -> Result<Vec<ComplexityReport>> {
    if n_min < 2 || n_min > n_max || n_max > MAX_CURVE_QUBITS {
        return Err(Error::InvalidRange {
            from: n_min,
            to: n_max,
        });
    }
    (n_min..=n_max)
        .map(|n| {
            let size = 1u64 << n;
            complexity_report(size, rule.m0(size))
        })
        .collect()
}

/// CSV with header `N,r_total,dha_bound`.
pub fn curve_to_csv(rows: &[ComplexityReport]) -> String {
    let mut out = String::from("N,r_total,dha_bound\n");
    for r in rows {
        writeln!(out, "{},{},{}", r.n_size, r.r_total, r.dha_bound).expect("writing to a String");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimationGap {
    pub round: usize,
    pub est_ratio: f64,
    pub actual_ratio: f64,
    /// `est_ratio / actual_ratio`; `None` when nothing is actually marked.
    pub gap: Option<f64>,
}

impl EstimationGap {
    pub fn is_flagged(&self) -> bool {
        self.gap.is_none()
    }
}

/// Per-round ratio between the estimated and the true marked fraction.
pub fn estimation_diagnostic(trace: &SearchTrace) -> Vec<EstimationGap> {
    trace
        .rounds
        .iter()
        .enumerate()
        .map(|(round, r)| EstimationGap {
            round,
            est_ratio: r.est_ratio,
            actual_ratio: r.actual_ratio,
            gap: (r.actual_ratio > 0.0).then(|| r.est_ratio / r.actual_ratio),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::EncodedDataset;
    use crate::minsearch::{oqmsa_find_min, trial_rng, Round, SearchParams};

    #[test]
    fn report_n64() {
        let r = complexity_report(64, 32).unwrap();
        assert!((r.r_init - 36.0).abs() < 1e-12);
        assert!((r.dha_bound - 230.4).abs() < 1e-12);
        let expected_rg = FRAC_PI_2 * (SQRT_2 + 1.0) * (128f64.sqrt() - 2f64.sqrt());
        assert!((r.r_g - expected_rg).abs() < 1e-12);
        assert!((r.r_g - 37.55).abs() < 0.01);
        assert!((r.r_total - 73.55).abs() < 0.01);
        assert_eq!(r.r_total, r.r_g + r.r_init);
        assert!(r.r_total < r.dha_bound);
        assert!((r.t_max_asymptotic - FRAC_PI_2 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn report_small() {
        let r = complexity_report(4, 4).unwrap();
        assert!((r.r_g - 6.94).abs() < 0.01);
        assert_eq!(complexity_report(2, 1).unwrap().r_init, 1.0);
        assert!(complexity_report(1, 1).is_err());
        assert!(complexity_report(8, 0).is_err());
    }

    #[test]
    fn curve() {
        let rows = complexity_curve(4, 20, M0Rule::Half).unwrap();
        assert_eq!(rows.len(), 17);
        assert!(rows.iter().all(|r| r.r_total < r.dha_bound));
        assert_eq!(rows[0], complexity_report(16, 8).unwrap());
        let gaps: Vec<f64> = rows.iter().map(|r| r.dha_bound - r.r_total).collect();
        assert!(gaps.windows(2).all(|w| w[1] > w[0]));
        // the ratio dips until N = 2^7 and rises from there on
        let ratios: Vec<f64> = rows.iter().map(|r| r.dha_bound / r.r_total).collect();
        assert!(ratios[..4].windows(2).all(|w| w[1] < w[0]));
        assert!(ratios[3..].windows(2).all(|w| w[1] > w[0]));
        assert!(complexity_curve(1, 4, M0Rule::Half).is_err());
        assert!(complexity_curve(5, 4, M0Rule::Half).is_err());
        assert!(complexity_curve(4, 41, M0Rule::One).is_err());
        assert_eq!(complexity_curve(2, 40, M0Rule::One).unwrap().len(), 39);
    }

    #[test]
    fn csv_shape() {
        let csv = curve_to_csv(&complexity_curve(4, 4, M0Rule::Half).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "N,r_total,dha_bound");
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("16,"));
    }

    #[test]
    fn closed_form_tracks_halving_sum() {
        for n in 1..=20 {
            let size = 1u64 << n;
            assert!(closed_form_gap(size, size / 2) < 0.05, "n={n}");
        }
    }

    #[test]
    fn diagnostic_full_range_is_exact() {
        let ds = EncodedDataset::full_range(6).unwrap();
        let res = oqmsa_find_min(&ds, &SearchParams::default(), &mut trial_rng(8, 0)).unwrap();
        let diag = estimation_diagnostic(&res.trace);
        assert!(!diag.is_empty());
        assert!(diag.iter().all(|g| (g.gap.unwrap() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn diagnostic_table_b_threshold_seven() {
        let values = [
            45, 37, 21, 61, 53, 5, 44, 36, 20, 60, 52, 4, 46, 38, 22, 62, 54, 6, 40, 32, 16, 56,
            48, 0, 42, 34, 18, 58, 50, 2, 47, 39, 23, 63, 55, 7,
        ];
        let ds = EncodedDataset::from_values(values.to_vec(), Some(6)).unwrap();
        let marked = ds.count_at_most(7);
        assert_eq!(marked, 6);
        let trace = SearchTrace {
            rounds: vec![
                Round {
                    d_prime_before: 7,
                    t_used: 1,
                    phi: 1.0,
                    clamped: false,
                    measured_r: 4,
                    accepted: true,
                    est_ratio: 8.0 / 64.0,
                    actual_ratio: marked as f64 / 36.0,
                },
                Round {
                    d_prime_before: 0,
                    t_used: 0,
                    phi: 1.0,
                    clamped: false,
                    measured_r: 0,
                    accepted: false,
                    est_ratio: 1.0 / 64.0,
                    actual_ratio: 0.0,
                },
            ],
            total_queries: 1,
            outer_repeats_at_exit: 0,
        };
        let diag = estimation_diagnostic(&trace);
        assert!((diag[0].est_ratio - 0.125).abs() < 1e-15);
        assert!((diag[0].actual_ratio - 1.0 / 6.0).abs() < 1e-15);
        assert!((diag[0].gap.unwrap() - 0.75).abs() < 1e-12);
        assert!(diag[1].is_flagged());
    }
}
