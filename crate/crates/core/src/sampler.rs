//! Uniform with-replacement sampling of transactions.
//!
//! The generator is ChaCha8 seeded from a 64-bit integer
//! (`rand_chacha::ChaCha8Rng::seed_from_u64`), and indices come from rand's
//! uniform integer distribution, which rejects out-of-range draws instead of
//! taking a modulus, so samples are unbiased and bit-reproducible across
//! platforms for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Dataset, Transaction};
use crate::error::{Error, Result};

/// A drawn sample. When the requested size reaches the dataset size, the
/// sample *is* the dataset and `is_full_dataset` is set.
#[derive(Debug, Clone)]
pub struct Sample {
    transactions: Vec<Transaction>,
    source_size: usize,
    seed: u64,
    is_full_dataset: bool,
}

impl Sample {
    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_full_dataset(&self) -> bool {
        self.is_full_dataset
    }
}

/// Draws `m` transactions uniformly with replacement, or returns the whole
/// dataset when `m >= |D|`.
pub fn draw(dataset: &Dataset, m: u64, seed: u64) -> Result<Sample> {
    if m == 0 {
        return Err(Error::InvalidParameter("sample size must be >= 1".into()));
    }
    let n = dataset.len();
    if m >= n as u64 {
        return Ok(Sample {
            transactions: dataset.transactions().to_vec(),
            source_size: n,
            seed,
            is_full_dataset: true,
        });
    }
    let m = m as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut transactions = Vec::with_capacity(m);
    for _ in 0..m {
        let idx = rng.gen_range(0..n);
        transactions.push(dataset.transactions()[idx].clone());
    }
    Ok(Sample {
        transactions,
        source_size: n,
        seed,
        is_full_dataset: false,
    })
}
