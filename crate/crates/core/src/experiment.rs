//! Seeded Monte-Carlo experiments over many independent trials.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{load_dataset, DatasetFormat, EncodedDataset};
use crate::error::{Error, Result};
use crate::minsearch::{dha_find_min, oqmsa_find_min, trial_rng, SearchParams, SearchResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Oqmsa,
    Dha,
    Both,
}

impl Algorithm {
    fn selected(self) -> &'static [Algorithm] {
        match self {
            Algorithm::Oqmsa => &[Algorithm::Oqmsa],
            Algorithm::Dha => &[Algorithm::Dha],
            Algorithm::Both => &[Algorithm::Oqmsa, Algorithm::Dha],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Oqmsa => "oqmsa",
            Algorithm::Dha => "dha",
            Algorithm::Both => "both",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oqmsa" => Ok(Algorithm::Oqmsa),
            "dha" => Ok(Algorithm::Dha),
            "both" => Ok(Algorithm::Both),
            _ => Err(Error::InvalidParams(format!("unknown algorithm {s:?}"))),
        }
    }
}

/// Where the dataset comes from: a file, or `full:<n>` for every n-bit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatasetSource {
    FullRange(u32),
    File(PathBuf),
}

impl DatasetSource {
    pub fn parse(source: &str) -> Result<Self> {
        match source.strip_prefix("full:") {
            Some(n) => n
                .parse()
                .map(DatasetSource::FullRange)
                .map_err(|_| Error::Parse(format!("bad register width in {source:?}"))),
            None => Ok(DatasetSource::File(PathBuf::from(source))),
        }
    }

    pub fn load(&self, n_qubits: Option<u32>) -> Result<EncodedDataset> {
        match self {
            DatasetSource::FullRange(n) => EncodedDataset::full_range(*n),
            DatasetSource::File(path) => {
                load_dataset(path, DatasetFormat::from_path(path), n_qubits)
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            DatasetSource::FullRange(n) => format!("full:{n}"),
            DatasetSource::File(path) => path.display().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub dataset: DatasetSource,
    pub n_qubits: Option<u32>,
    pub trials: u64,
    pub seed: u64,
    pub params: SearchParams,
    /// Worker threads; `None` uses the global pool. Results do not depend on it.
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: &'static str,
    pub success_count: u64,
    pub trials: u64,
    pub success_rate: f64,
    pub mean_queries: f64,
    pub stddev_queries: f64,
    pub min_found_histogram: BTreeMap<u64, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    pub seed: u64,
    pub trials: u64,
    pub dataset: String,
    pub dataset_size: u64,
    pub n_qubits: u32,
    pub params: SearchParams,
    pub version: &'static str,
    pub notes: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub results: Vec<AlgorithmSummary>,
    pub environment: Environment,
}

impl ExperimentReport {
    pub fn summary(&self, algorithm: Algorithm) -> Option<&AlgorithmSummary> {
        self.results
            .iter()
            .find(|s| s.algorithm == algorithm.name())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// One trial's outcome, written as a JSON line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub algorithm: &'static str,
    pub trial: u64,
    #[serde(flatten)]
    pub result: SearchResult,
}

pub struct ExperimentOutput {
    pub report: ExperimentReport,
    pub records: Vec<TrialRecord>,
}

/// Run `config.trials` seeded trials of each selected algorithm.
///
/// Trial `i` of every algorithm draws from stream `i` of `config.seed`, so
/// algorithms are compared on matched randomness.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    if config.trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    let params = SearchParams {
        seed: config.seed,
        ..config.params
    };
    params.validate()?;
    let dataset = config.dataset.load(config.n_qubits)?;

    let run_all = || -> Result<Vec<(Algorithm, Vec<SearchResult>)>> {
        config
            .algorithm
            .selected()
            .iter()
            .map(|&alg| {
                let results = (0..config.trials)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = trial_rng(config.seed, i);
                        match alg {
                            Algorithm::Dha => dha_find_min(&dataset, &params, &mut rng),
                            _ => oqmsa_find_min(&dataset, &params, &mut rng),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((alg, results))
            })
            .collect()
    };
    let per_algorithm = match config.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::InvalidParams(e.to_string()))?
            .install(run_all)?,
        None => run_all()?,
    };

    let mut summaries = Vec::new();
    let mut records = Vec::new();
    for (alg, results) in per_algorithm {
        summaries.push(summarize(alg, &results));
        records.extend(
            results
                .into_iter()
                .enumerate()
                .map(|(i, result)| TrialRecord {
                    algorithm: alg.name(),
                    trial: i as u64,
                    result,
                }),
        );
    }

    let mut notes =
        vec!["queries count Grover iterations; state preparation and classical checks are free"];
    if config.algorithm != Algorithm::Oqmsa {
        notes.push("dha marking cost is not charged to its budget");
    }
    Ok(ExperimentOutput {
        report: ExperimentReport {
            results: summaries,
            environment: Environment {
                seed: config.seed,
                trials: config.trials,
                dataset: config.dataset.label(),
                dataset_size: dataset.size(),
                n_qubits: dataset.n_qubits(),
                params,
                version: env!("CARGO_PKG_VERSION"),
                notes,
            },
        },
        records,
    })
}

fn summarize(alg: Algorithm, results: &[SearchResult]) -> AlgorithmSummary {
    let trials = results.len() as u64;
    let success_count = results.iter().filter(|r| r.correct).count() as u64;
    let queries: Vec<f64> = results
        .iter()
        .map(|r| r.trace.total_queries as f64)
        .collect();
    let mean = queries.iter().sum::<f64>() / trials as f64;
    let var = queries.iter().map(|q| (q - mean).powi(2)).sum::<f64>() / trials as f64;
    let mut histogram = BTreeMap::new();
    for r in results {
        *histogram.entry(r.found_min).or_insert(0) += 1;
    }
    AlgorithmSummary {
        algorithm: alg.name(),
        success_count,
        trials,
        success_rate: success_count as f64 / trials as f64,
        mean_queries: mean,
        stddev_queries: var.sqrt(),
        min_found_histogram: histogram,
    }
}
