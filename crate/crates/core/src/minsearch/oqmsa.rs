use rand::Rng;

use super::{
    dynamic_iteration_choice, Branch, Round, SearchParams, SearchResult, SearchTrace, TmaxVariant,
};
use crate::dataset::EncodedDataset;
use crate::error::Result;
use crate::groverlong::{
    compute_tmax, compute_tmax_alg1, grover_long_search, ClampPolicy, GLParams,
};

/// Consecutive non-improving passes after which OQMSA stops: `⌈log₂ size⌉`.
pub fn required_idle_passes(size: u64) -> u64 {
    if size <= 1 {
        0
    } else {
        u64::from((size - 1).ilog2() + 1)
    }
}

/// Upper bound on the rounds of one outer pass.
///
/// The threshold is fixed within a pass, so a pass is either all randomised
/// rounds (at most the number of λ-steps from 1 up to `cap`) or all
/// deterministic rounds (bounded at `cap + 1`).
pub fn max_rounds_per_pass(cap: u64, lambda: f64) -> u64 {
    let mut t = 1.0;
    let mut dynamic = 0;
    while t <= cap as f64 {
        dynamic += 1;
        t *= lambda;
    }
    dynamic.max(cap + 1)
}

/// Find the minimum of `dataset` with the dynamic Grover-Long strategy.
///
/// The estimated marked count is `d' + 1` out of `2^n` codes; the engine
/// evolves the true amplitudes, so the estimate is exact only on full-range
/// data.
pub fn oqmsa_find_min<R: Rng + ?Sized>(
    dataset: &EncodedDataset,
    params: &SearchParams,
    rng: &mut R,
) -> Result<SearchResult> {
    params.validate()?;
    let size = dataset.size();
    let n_est = dataset.register_size();
    let cap = match params.tmax_variant {
        TmaxVariant::Alg1 => compute_tmax_alg1(n_est)?,
        TmaxVariant::Eq5 => compute_tmax(1, n_est)?,
    };
    let idle_limit = required_idle_passes(size);

    let mut d_prime = dataset.nth(rng.gen_range(0..size));
    let mut trace = SearchTrace::default();
    let mut idle = 0;

    while idle < idle_limit {
        let mut t = 1.0f64;
        let mut r: Option<u64> = None;
        let mut deterministic_rounds = 0;

        while t <= cap as f64 && r.is_none_or(|r| r > d_prime) {
            let m_est = d_prime + 1;
            let est_ratio = m_est as f64 / n_est as f64;
            let det_t = match params.tmax_variant {
                TmaxVariant::Alg1 => cap,
                TmaxVariant::Eq5 => compute_tmax(m_est, n_est)?,
            };
            let choice = dynamic_iteration_choice(t, est_ratio, det_t, params, rng);
            let policy = match choice.branch {
                Branch::Dynamic => params.clamp_policy,
                Branch::Deterministic => ClampPolicy::Error,
            };
            let gl = GLParams::matched(choice.t_used, m_est, n_est, policy)?;
            let run = grover_long_search(dataset, d_prime, &gl, params.engine)?;
            let measured = run.sample(dataset, rng);

            trace.push(Round {
                d_prime_before: d_prime,
                t_used: gl.t,
                phi: gl.phi,
                clamped: gl.clamped,
                measured_r: measured,
                accepted: measured < d_prime,
                est_ratio,
                actual_ratio: run.marked_count as f64 / size as f64,
            });
            r = Some(measured);
            t = choice.t_next;

            if choice.branch == Branch::Deterministic {
                deterministic_rounds += 1;
                if deterministic_rounds > cap {
                    break;
                }
            }
        }

        match r {
            Some(r) if r < d_prime => {
                d_prime = r;
                idle = 0;
            }
            _ => idle += 1,
        }
    }

    trace.outer_repeats_at_exit = idle;
    Ok(SearchResult {
        found_min: d_prime,
        correct: d_prime == dataset.true_min(),
        trace,
    })
}
