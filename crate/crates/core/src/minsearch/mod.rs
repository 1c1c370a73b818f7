//! Minimum-finding drivers: OQMSA and the Dürr–Høyer baseline.
//!
//! Both drivers count cost in oracle queries (Grover iterations) and record
//! every measurement round in a [`SearchTrace`].

mod dha;
mod oqmsa;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groverlong::ClampPolicy;
use crate::simcore::Engine;

pub use dha::{bbht_search, dha_budget, dha_find_min, dha_find_min_with_budget, BbhtOutcome};
pub use oqmsa::{max_rounds_per_pass, oqmsa_find_min, required_idle_passes};

/// Which iteration cap drives the OQMSA loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TmaxVariant {
    /// `floor((π/2 − β)/β) + 1` evaluated at the estimated marked count.
    Eq5,
    /// Single-solution cap `floor((π/2 − β₁)/β₁)`, used for every round.
    #[default]
    Alg1,
}

impl std::str::FromStr for TmaxVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq5" => Ok(TmaxVariant::Eq5),
            "alg1" => Ok(TmaxVariant::Alg1),
            _ => Err(Error::InvalidParams(format!("unknown tmax variant {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    /// Growth factor of the randomised iteration bound.
    pub lambda: f64,
    /// Estimated marked fraction above which the randomised branch is taken.
    pub ratio_threshold: f64,
    pub seed: u64,
    pub clamp_policy: ClampPolicy,
    pub tmax_variant: TmaxVariant,
    pub engine: Engine,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            lambda: 6.0 / 5.0,
            ratio_threshold: 1.0 / 9.0,
            seed: 0,
            clamp_policy: ClampPolicy::Clamp,
            tmax_variant: TmaxVariant::Alg1,
            engine: Engine::Auto,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 1.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "lambda must exceed 1, got {}",
                self.lambda
            )));
        }
        if !(self.ratio_threshold > 0.0 && self.ratio_threshold < 1.0) {
            return Err(Error::InvalidParams(format!(
                "ratio threshold must lie in (0, 1), got {}",
                self.ratio_threshold
            )));
        }
        Ok(())
    }
}

/// One prepare–amplify–measure round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub d_prime_before: u64,
    pub t_used: u64,
    pub phi: f64,
    pub clamped: bool,
    pub measured_r: u64,
    pub accepted: bool,
    pub est_ratio: f64,
    pub actual_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SearchTrace {
    pub rounds: Vec<Round>,
    pub total_queries: u64,
    pub outer_repeats_at_exit: u64,
}

impl SearchTrace {
    pub(crate) fn push(&mut self, round: Round) {
        self.total_queries += round.t_used;
        self.rounds.push(round);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub found_min: u64,
    pub trace: SearchTrace,
    /// Whether `found_min` is the dataset minimum, checked after the fact.
    pub correct: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Dynamic,
    Deterministic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationChoice {
    pub t_used: u64,
    pub t_next: f64,
    pub branch: Branch,
}

/// Choose the iteration count for one OQMSA round.
///
/// Above the ratio threshold (strictly) draw `t_used` uniformly from
/// `0..=⌈t⌉` and grow `t` by λ; otherwise run `t_max` iterations and keep `t`.
pub fn dynamic_iteration_choice<R: Rng + ?Sized>(
    t: f64,
    est_ratio: f64,
    t_max: u64,
    params: &SearchParams,
    rng: &mut R,
) -> IterationChoice {
    if est_ratio > params.ratio_threshold {
        IterationChoice {
            t_used: rng.gen_range(0..=t.ceil() as u64),
            t_next: t * params.lambda,
            branch: Branch::Dynamic,
        }
    } else {
        IterationChoice {
            t_used: t_max,
            t_next: t,
            branch: Branch::Deterministic,
        }
    }
}

/// Independent random stream for one trial: the seed picks the key and the
/// trial index the ChaCha stream, so trials never share randomness.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}
