//! Exhaustive and randomised property sweeps behind `qmin verify`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::dataset::EncodedDataset;
use crate::error::Result;
use crate::groverlong::grover_long_search;
use crate::groverlong::{
    compute_phi, compute_tmax, exact_success_probability, ClampPolicy, GLParams,
};
use crate::minsearch::trial_rng;
use crate::oraclesynth::synthesize_oracle;
use crate::simcore::Engine;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub suite: &'static str,
    pub property: &'static str,
    pub checked: u64,
    pub failed: u64,
    pub first_counterexample: Option<serde_json::Value>,
}

impl PropertyReport {
    fn new(suite: &'static str, property: &'static str) -> Self {
        Self {
            suite,
            property,
            checked: 0,
            failed: 0,
            first_counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, counterexample: impl FnOnce() -> serde_json::Value) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(counterexample());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

/// Synthesised diagonal against `diag(k <= d' ? e^{iφ} : 1)` for every
/// `n <= max_n`, `d' in [0, 2^n − 2]`, φ in {π, π/2, 1}; block count against
/// `popcount(d' + 1)`.
pub fn verify_oracle(max_n: u32) -> Result<Vec<PropertyReport>> {
    let mut diagonal = PropertyReport::new("oracle", "diagonal equals brute force within 1e-12");
    let mut popcount = PropertyReport::new("oracle", "block count equals popcount(d'+1)");
    for n in 1..=max_n {
        for d in 0..(1u64 << n) - 1 {
            for phi in [PI, FRAC_PI_2, 1.0] {
                let plan = synthesize_oracle(d, n, phi)?;
                let phase = Complex64::from_polar(1.0, phi);
                let worst = plan
                    .materialize_diagonal()
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        let expected = if k as u64 <= d {
                            phase
                        } else {
                            Complex64::new(1.0, 0.0)
                        };
                        (v - expected).norm()
                    })
                    .fold(0.0, f64::max);
                diagonal.record(
                    worst <= 1e-12,
                    || json!({"n": n, "d_prime": d, "phi": phi, "deviation": worst}),
                );
            }
            let blocks = synthesize_oracle(d, n, PI)?.blocks().len() as u32;
            popcount.record(
                blocks == (d + 1).count_ones(),
                || json!({"n": n, "d_prime": d, "blocks": blocks}),
            );
        }
    }
    Ok(vec![diagonal, popcount])
}

/// Matched Grover-Long at `t = compute_tmax(M, N)` reaches `P >= 1 − 1e-9`
/// for all `N = 2^n`, `n <= max_n`, `1 <= M <= N`.
pub fn verify_sure_success(max_n: u32) -> Result<Vec<PropertyReport>> {
    let mut report =
        PropertyReport::new("suresuccess", "matched phase at t_max gives P >= 1 - 1e-9");
    for n in 1..=max_n {
        let size = 1u64 << n;
        for m in 1..=size {
            let t = compute_tmax(m, size)?;
            let (phi, clamped) = compute_phi(t, m, size, ClampPolicy::Clamp)?;
            let p = exact_success_probability(m, size, t, phi)?;
            report.record(
                !clamped && p >= 1.0 - 1e-9,
                || json!({"N": size, "M": m, "t": t, "phi": phi, "clamped": clamped, "p": p}),
            );
        }
    }
    Ok(vec![report])
}

/// Statevector and subspace engines agree on the marked probability within
/// 1e-10 over `configs` random `(n <= max_n, d', φ, t <= 64)` on full-range data.
pub fn verify_engines(configs: u64, max_n: u32, seed: u64) -> Result<Vec<PropertyReport>> {
    let mut report = PropertyReport::new("engines", "statevector and subspace agree within 1e-10");
    let mut rng = trial_rng(seed, 0);
    let datasets: Vec<EncodedDataset> = (1..=max_n)
        .map(EncodedDataset::full_range)
        .collect::<Result<_>>()?;
    for _ in 0..configs {
        let n = rng.gen_range(1..=max_n);
        let ds = &datasets[n as usize - 1];
        let d = rng.gen_range(0..ds.register_size());
        let phi = rng.gen_range(-PI..=PI);
        let t = rng.gen_range(0..=64);
        let params = GLParams {
            t,
            phi,
            m_est: 1,
            n_est: 1,
            clamped: false,
        };
        let sv = grover_long_search(ds, d, &params, Engine::Statevector)?.marked_probability();
        let sub = grover_long_search(ds, d, &params, Engine::Subspace)?.marked_probability();
        let diff = (sv - sub).abs();
        report.record(
            diff <= 1e-10,
            || json!({"n": n, "d_prime": d, "phi": phi, "t": t, "diff": diff}),
        );
    }
    Ok(vec![report])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        for r in verify_oracle(5).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
        let r = &verify_sure_success(6).unwrap()[0];
        assert!(r.passed() && r.checked == 126);
        let r = &verify_engines(200, 6, 1).unwrap()[0];
        assert!(r.passed() && r.checked == 200);
    }

    #[test]
    fn failures_are_recorded_once() {
        let mut r = PropertyReport::new("x", "y");
        r.record(true, || json!(0));
        r.record(false, || json!(1));
        r.record(false, || json!(2));
        assert_eq!((r.checked, r.failed), (3, 2));
        assert_eq!(r.first_counterexample, Some(json!(1)));
    }
}
