//! Simulation and benchmarking of sure-success quantum minimum finding.
//!
//! The crate is organised bottom-up:
//!
//! * [`dataset`] ingests and encodes integer datasets.
//! * [`simcore`] holds the two amplitude-amplification engines: a dense
//!   statevector and the exact two-dimensional marked/unmarked reduction.
//! * [`oraclesynth`] builds threshold oracles out of disjoint
//!   multi-controlled phase blocks.
//! * [`groverlong`] computes iteration counts and matched phases and runs
//!   exact (phase-matched) Grover search.
//! * [`minsearch`] contains the OQMSA driver and the Dürr–Høyer baseline.
//! * [`metrics`] evaluates the analytic query-complexity model.
//! * [`experiment`] and [`verify`] back the command-line front end.

pub mod dataset;
pub mod error;
pub mod experiment;
pub mod groverlong;
pub mod metrics;
pub mod minsearch;
pub mod oraclesynth;
pub mod simcore;
pub mod verify;

pub use dataset::{DatasetFormat, EncodedDataset};
pub use error::{Error, Result};
pub use groverlong::{ClampPolicy, GLParams};
pub use minsearch::{SearchParams, SearchResult, SearchTrace};
pub use oraclesynth::{OracleBlock, OraclePlan};
pub use simcore::{Engine, MarkedPredicate, StateVector, SubspaceState};
