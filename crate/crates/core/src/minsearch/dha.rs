use std::f64::consts::PI;

use rand::Rng;

use super::{Round, SearchParams, SearchResult, SearchTrace};
use crate::dataset::EncodedDataset;
use crate::error::{Error, Result};
use crate::groverlong::amplify;

/// Query budget `22.5·√N + 1.4·(log₂ N)²`.
pub fn dha_budget(size: u64) -> f64 {
    let n = size as f64;
    22.5 * n.sqrt() + 1.4 * n.log2().powi(2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BbhtOutcome {
    /// Last measured value, if any round ran.
    pub measured: Option<u64>,
    pub queries: u64,
    /// The budget ran out before a value below the threshold was seen.
    pub exhausted: bool,
    pub rounds: Vec<Round>,
}

/// Exponential search for any value strictly below `below`.
///
/// Each round draws `j` uniformly from `0..⌈m⌉`, runs `j` plain Grover
/// iterations on a fresh uniform state and measures; `m` grows by λ up to
/// `√size`. Rounds whose `j` would overrun `remaining_budget` are not run.
pub fn bbht_search<R: Rng + ?Sized>(
    dataset: &EncodedDataset,
    below: u64,
    rng: &mut R,
    remaining_budget: u64,
    params: &SearchParams,
) -> Result<BbhtOutcome> {
    if below > dataset.register_size() {
        return Err(Error::ThresholdOutOfRange {
            d_prime: below,
            n_qubits: dataset.n_qubits(),
        });
    }
    let size = dataset.size();
    let threshold = below.checked_sub(1);
    let est_ratio = below as f64 / dataset.register_size() as f64;
    let m_cap = (size as f64).sqrt();

    let mut m = 1.0f64;
    let mut out = BbhtOutcome {
        measured: None,
        queries: 0,
        exhausted: false,
        rounds: Vec::new(),
    };
    loop {
        let j = rng.gen_range(0..m.ceil() as u64);
        if out.queries + j > remaining_budget {
            out.exhausted = true;
            return Ok(out);
        }
        let run = amplify(dataset, threshold, j, PI, params.engine)?;
        let r = run.sample(dataset, rng);
        out.queries += j;
        out.measured = Some(r);
        out.rounds.push(Round {
            d_prime_before: below,
            t_used: j,
            phi: PI,
            clamped: false,
            measured_r: r,
            accepted: r < below,
            est_ratio,
            actual_ratio: run.marked_count as f64 / size as f64,
        });
        if r < below {
            return Ok(out);
        }
        m = (m * params.lambda).min(m_cap);
    }
}

/// Dürr–Høyer minimum finding under the `22.5√N + 1.4 log²N` query budget.
pub fn dha_find_min<R: Rng + ?Sized>(
    dataset: &EncodedDataset,
    params: &SearchParams,
    rng: &mut R,
) -> Result<SearchResult> {
    let budget = dha_budget(dataset.size()).floor() as u64;
    dha_find_min_with_budget(dataset, params, rng, budget)
}

/// Same search interrupted after `budget` Grover iterations.
pub fn dha_find_min_with_budget<R: Rng + ?Sized>(
    dataset: &EncodedDataset,
    params: &SearchParams,
    rng: &mut R,
    budget: u64,
) -> Result<SearchResult> {
    params.validate()?;
    let size = dataset.size();
    let mut threshold = dataset.nth(rng.gen_range(0..size));
    let mut trace = SearchTrace::default();

    // a single value has nothing below it and no query can change that
    if size > 1 {
        loop {
            let outcome = bbht_search(
                dataset,
                threshold,
                rng,
                budget - trace.total_queries,
                params,
            )?;
            for round in outcome.rounds {
                trace.push(round);
            }
            if let Some(r) = outcome.measured.filter(|&r| r < threshold) {
                threshold = r;
            }
            if outcome.exhausted {
                break;
            }
        }
    }

    Ok(SearchResult {
        found_min: threshold,
        correct: threshold == dataset.true_min(),
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minsearch::trial_rng;

    #[test]
    fn budget_arithmetic() {
        assert!((dha_budget(64) - 230.4).abs() < 1e-12);
    }

    #[test]
    fn singleton() {
        let ds = EncodedDataset::from_values(vec![5], Some(3)).unwrap();
        let res = dha_find_min(&ds, &SearchParams::default(), &mut trial_rng(0, 0)).unwrap();
        assert_eq!(res.found_min, 5);
        assert_eq!(res.trace.total_queries, 0);
    }

    #[test]
    fn everything_marked_succeeds_immediately() {
        let ds = EncodedDataset::full_range(6).unwrap();
        let out =
            bbht_search(&ds, 64, &mut trial_rng(1, 0), 100, &SearchParams::default()).unwrap();
        assert_eq!(out.queries, 0);
        assert!(!out.exhausted);
        assert_eq!(out.rounds.len(), 1);
    }

    #[test]
    fn nothing_marked_exhausts_budget() {
        let ds = EncodedDataset::full_range(6).unwrap();
        let out = bbht_search(&ds, 0, &mut trial_rng(2, 0), 50, &SearchParams::default()).unwrap();
        assert!(out.exhausted);
        assert!(out.queries <= 50);
        assert!(out.rounds.iter().all(|r| !r.accepted));
    }

    #[test]
    fn expected_queries_half_marked() {
        let ds = EncodedDataset::full_range(6).unwrap();
        let params = SearchParams::default();
        let runs = 10_000;
        let samples: Vec<f64> = (0..runs)
            .map(|i| {
                bbht_search(&ds, 32, &mut trial_rng(3, i), 1000, &params)
                    .unwrap()
                    .queries as f64
            })
            .collect();
        let mean = samples.iter().sum::<f64>() / runs as f64;
        let var = samples.iter().map(|q| (q - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
        let bound = 4.0 * 2f64.sqrt();
        assert!(
            mean <= bound + 3.0 * (var / runs as f64).sqrt(),
            "mean {mean}"
        );
    }

    #[test]
    fn respects_budget_and_soundness() {
        let ds = EncodedDataset::full_range(6).unwrap();
        for seed in 0..200 {
            let res = dha_find_min(&ds, &SearchParams::default(), &mut trial_rng(seed, 0)).unwrap();
            assert!(res.trace.total_queries as f64 <= 230.4);
            assert!(ds.contains(res.found_min));
            let mut last = u64::MAX;
            for r in res.trace.rounds.iter().filter(|r| r.accepted) {
                assert!(r.measured_r < last);
                last = r.measured_r;
            }
        }
    }

    #[test]
    fn explicit_budget_caps_queries() {
        let ds = EncodedDataset::full_range(8).unwrap();
        for (seed, budget) in [(0, 0), (1, 5), (2, 17)] {
            let res = dha_find_min_with_budget(
                &ds,
                &SearchParams::default(),
                &mut trial_rng(seed, 0),
                budget,
            )
            .unwrap();
            assert!(res.trace.total_queries <= budget);
        }
    }
}
