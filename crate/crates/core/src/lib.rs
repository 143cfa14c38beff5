//! Frequent itemset and association rule mining on small random samples,
//! with sample sizes certified by the VC-dimension of the dataset's range
//! space (which its d-index bounds).
//!
//! - [`corpus`]: datasets, FIMI I/O, statistics, the adversarial generator.
//! - [`complexity`]: d-index (streaming bound and exact) and a VC oracle.
//! - [`bounds`]: every sample-size formula, ours and prior work's.
//! - [`sampler`]: seeded with-replacement sampling.
//! - [`miner`]: exact Apriori mining of itemsets, top-K, and rules.
//! - [`approx`]: the end-to-end sampling pipelines.
//! - [`verify`]: guarantee checking and error statistics.

pub mod approx;
pub mod bounds;
pub mod complexity;
pub mod corpus;
pub mod error;
pub mod miner;
pub mod sampler;
pub mod verify;

mod exact;

pub use corpus::{Dataset, Transaction};
pub use error::{Error, Result};
