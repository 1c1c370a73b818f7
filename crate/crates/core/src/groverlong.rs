//! Phase-matched (Grover-Long) exact search.
//!
//! With `t` iterations and marked fraction `M/N`, choosing
//! `φ = 2·arcsin(sin(π/(4t+2)) / √(M/N))` for both the oracle and the
//! deflection drives the marked probability to exactly one, provided the
//! arcsin argument is at most one.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::EncodedDataset;
use crate::error::{Error, Result};
use crate::oraclesynth::synthesize_oracle;
use crate::simcore::{Engine, MarkedPredicate, StateVector, SubspaceState};

/// Slack applied before flooring iteration counts, so ratios that are exact
/// integers in real arithmetic (e.g. `(π/3)/(π/6)`) do not round down.
const FLOOR_SLACK: f64 = 1e-9;

/// Tolerance on the phase-matching domain condition.
const DOMAIN_SLACK: f64 = 1e-12;

/// What to do when the phase-matching argument exceeds one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ClampPolicy {
    /// Fall back to φ = π (plain Grover).
    #[default]
    Clamp,
    Error,
}

impl std::str::FromStr for ClampPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clamp" => Ok(ClampPolicy::Clamp),
            "error" => Ok(ClampPolicy::Error),
            _ => Err(Error::InvalidParams(format!("unknown clamp policy {s:?}"))),
        }
    }
}

fn check_counts(marked: u64, size: u64) -> Result<()> {
    if marked == 0 || marked > size {
        return Err(Error::InvalidCounts { marked, size });
    }
    Ok(())
}

fn mixing_angle(marked: u64, size: u64) -> f64 {
    (marked as f64 / size as f64).sqrt().asin()
}

/// Iteration count `floor((π/2 − β)/β) + 1` with `sin β = √(M/N)`.
pub fn compute_tmax(marked: u64, size: u64) -> Result<u64> {
    check_counts(marked, size)?;
    let beta = mixing_angle(marked, size);
    Ok(((FRAC_PI_2 - beta) / beta + FLOOR_SLACK).floor() as u64 + 1)
}

/// Single-solution cap `floor((π/2 − β₁)/β₁)` with `sin β₁ = 1/√N`.
pub fn compute_tmax_alg1(size: u64) -> Result<u64> {
    if size < 2 {
        return Err(Error::InvalidCounts { marked: 1, size });
    }
    let beta = mixing_angle(1, size);
    Ok(((FRAC_PI_2 - beta) / beta + FLOOR_SLACK).floor() as u64)
}

/// Matched phase for `t >= 1` iterations. Returns `(φ, clamped)`.
pub fn compute_phi(t: u64, m_est: u64, n_est: u64, policy: ClampPolicy) -> Result<(f64, bool)> {
    check_counts(m_est, n_est)?;
    if t == 0 {
        return Err(Error::InvalidParams("phase matching needs t >= 1".into()));
    }
    let arg = (PI / (4 * t + 2) as f64).sin() / (m_est as f64 / n_est as f64).sqrt();
    if arg > 1.0 + DOMAIN_SLACK {
        return match policy {
            ClampPolicy::Clamp => Ok((PI, true)),
            ClampPolicy::Error => Err(Error::PhaseDomain { t, m_est, n_est }),
        };
    }
    Ok((2.0 * arg.min(1.0).asin(), false))
}

/// Parameters of one Grover-Long run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GLParams {
    pub t: u64,
    pub phi: f64,
    pub m_est: u64,
    pub n_est: u64,
    pub clamped: bool,
}

impl GLParams {
    /// Phase matched to `t` iterations at the estimated ratio `m_est/n_est`.
    ///
    /// For `t = 0` no operator is applied and φ is recorded as π.
    pub fn matched(t: u64, m_est: u64, n_est: u64, policy: ClampPolicy) -> Result<Self> {
        check_counts(m_est, n_est)?;
        let (phi, clamped) = if t == 0 {
            (PI, false)
        } else {
            compute_phi(t, m_est, n_est, policy)?
        };
        Ok(Self {
            t,
            phi,
            m_est,
            n_est,
            clamped,
        })
    }

    /// Plain Grover (φ = π) with `t` iterations.
    pub fn grover(t: u64, m_est: u64, n_est: u64) -> Result<Self> {
        check_counts(m_est, n_est)?;
        Ok(Self {
            t,
            phi: PI,
            m_est,
            n_est,
            clamped: false,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FinalState {
    Statevector(StateVector),
    Subspace(SubspaceState),
}

/// Outcome of one amplification run on a freshly prepared state.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchRun {
    pub state: FinalState,
    pub queries: u64,
    /// Marked codes are those `<= threshold`; `None` marks nothing.
    pub threshold: Option<u64>,
    /// Actual number of marked dataset values.
    pub marked_count: u64,
}

impl SearchRun {
    pub fn marked_probability(&self) -> f64 {
        match (&self.state, self.threshold) {
            (_, None) => 0.0,
            (FinalState::Statevector(s), Some(th)) => {
                let pred = MarkedPredicate::new(th, s.n_qubits()).expect("validated at run time");
                s.marked_probability(&pred)
            }
            (FinalState::Subspace(s), Some(_)) => s.marked_probability(),
        }
    }

    /// Measure the register. Subspace states sample uniformly within the
    /// marked or unmarked component, which is where their amplitude lives.
    pub fn sample<R: Rng + ?Sized>(&self, dataset: &EncodedDataset, rng: &mut R) -> u64 {
        match &self.state {
            FinalState::Statevector(s) => s.measure_sample(rng),
            FinalState::Subspace(s) => {
                let size = dataset.size();
                let m = self.marked_count;
                let pick_marked = m == size || (m > 0 && rng.gen::<f64>() < s.marked_probability());
                if pick_marked {
                    dataset.nth(rng.gen_range(0..m))
                } else {
                    dataset.nth(m + rng.gen_range(0..size - m))
                }
            }
        }
    }
}

/// Run `params.t` Grover-Long iterations for the predicate `code <= d_prime`.
pub fn grover_long_search(
    dataset: &EncodedDataset,
    d_prime: u64,
    params: &GLParams,
    engine: Engine,
) -> Result<SearchRun> {
    MarkedPredicate::new(d_prime, dataset.n_qubits())?;
    amplify(dataset, Some(d_prime), params.t, params.phi, engine)
}

/// Shared evolution loop; `threshold = None` means no code is marked.
pub(crate) fn amplify(
    dataset: &EncodedDataset,
    threshold: Option<u64>,
    t: u64,
    phi: f64,
    engine: Engine,
) -> Result<SearchRun> {
    let n = dataset.n_qubits();
    let marked_count = threshold.map_or(0, |th| dataset.count_at_most(th));
    let state = match engine.resolve(n) {
        Engine::Subspace => {
            let mut s = SubspaceState::with_marked(marked_count, dataset.size())?;
            for _ in 0..t {
                s.iterate(phi);
            }
            FinalState::Subspace(s)
        }
        _ => {
            let prep = StateVector::prepare_uniform(dataset)?;
            let mut s = prep.clone();
            if t > 0 {
                let plan = match threshold {
                    Some(th) if th < dataset.register_size() - 1 => {
                        Some(synthesize_oracle(th, n, phi)?)
                    }
                    _ => None,
                };
                let everything = threshold
                    .map(|th| MarkedPredicate::new(th, n))
                    .transpose()?;
                for _ in 0..t {
                    match (&plan, &everything) {
                        (Some(plan), _) => plan.apply(&mut s)?,
                        // all codes marked: the oracle is a global phase
                        (None, Some(pred)) => s.apply_marking_phase(pred, phi)?,
                        (None, None) => {}
                    }
                    s.apply_phase_deflection(&prep, phi)?;
                }
            }
            FinalState::Statevector(s)
        }
    };
    Ok(SearchRun {
        state,
        queries: t,
        threshold,
        marked_count,
    })
}

/// Marked probability after `t` iterations from the uniform state; no sampling.
pub fn exact_success_probability(marked: u64, size: u64, t: u64, phi: f64) -> Result<f64> {
    let mut s = SubspaceState::init(marked, size)?;
    for _ in 0..t {
        s.iterate(phi);
    }
    Ok(s.marked_probability())
}
