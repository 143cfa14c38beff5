//! Transaction datasets: FIMI-format I/O, statistics, replication, and a
//! generator for datasets whose range space has a known VC-dimension.

use std::collections::{BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// One transaction: a sorted, duplicate-free set of item identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transaction {
    items: Vec<u32>,
}

impl Transaction {
    /// Builds a transaction from any item sequence, sorting and deduplicating.
    /// Returns `None` for an empty sequence; empty transactions are never stored.
    pub fn new(items: impl IntoIterator<Item = u32>) -> Option<Self> {
        let mut items: Vec<u32> = items.into_iter().collect();
        items.sort_unstable();
        items.dedup();
        if items.is_empty() {
            None
        } else {
            Some(Transaction { items })
        }
    }

    pub fn items(&self) -> &[u32] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, item: u32) -> bool {
        self.items.binary_search(&item).is_ok()
    }

    /// `itemset` must be sorted ascending; merge-style subset test.
    pub fn contains_all(&self, itemset: &[u32]) -> bool {
        let mut it = self.items.iter();
        'outer: for want in itemset {
            for have in it.by_ref() {
                if have == want {
                    continue 'outer;
                }
                if have > want {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_subset_of(&self, other: &Transaction) -> bool {
        self.len() <= other.len() && other.contains_all(&self.items)
    }
}

/// An immutable multiset of transactions over the ground set of all items
/// that appear in at least one of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    transactions: Vec<Transaction>,
    items: Vec<u32>,
}

impl Dataset {
    pub fn new(transactions: Vec<Transaction>) -> Result<Self> {
        if transactions.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let ground: BTreeSet<u32> = transactions
            .iter()
            .flat_map(|t| t.items().iter().copied())
            .collect();
        Ok(Dataset {
            transactions,
            items: ground.into_iter().collect(),
        })
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    /// The ground set, sorted ascending.
    pub fn items(&self) -> &[u32] {
        &self.items
    }

    /// Number of transactions, counted with multiplicity.
    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn num_items(&self) -> usize {
        self.items.len()
    }

    /// Maximum transaction length.
    pub fn max_len(&self) -> usize {
        self.transactions.iter().map(Transaction::len).max().unwrap_or(0)
    }

    pub fn stats(&self) -> DatasetStats {
        let max_len = self.max_len();
        let num_items = self.num_items();
        let distinct: HashSet<&Transaction> = self.transactions.iter().collect();
        // Histogram of lengths over distinct transactions, skipping any
        // transaction equal to the whole ground set.
        let mut by_len = vec![0usize; max_len + 1];
        for t in distinct {
            if t.len() < num_items {
                by_len[t.len()] += 1;
            }
        }
        // Suffix sums: entry l-1 counts distinct transactions of length >= l.
        let mut suffix = vec![0usize; max_len];
        let mut acc = 0usize;
        for l in (1..=max_len).rev() {
            acc += by_len[l];
            suffix[l - 1] = acc;
        }
        DatasetStats {
            num_transactions: self.len(),
            num_items,
            max_len,
            distinct_count_by_min_len: suffix,
        }
    }

    /// Concatenates `k` copies of the dataset. Every itemset keeps its
    /// frequency: supports scale by `k` and so does the size.
    pub fn replicate(&self, k: usize) -> Result<Dataset> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "replication factor must be >= 1".into(),
            ));
        }
        let mut transactions = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            transactions.extend(self.transactions.iter().cloned());
        }
        Ok(Dataset {
            transactions,
            items: self.items.clone(),
        })
    }

    /// Reads a FIMI-format file: one transaction per non-empty line, items as
    /// whitespace-separated non-negative integers. Duplicate items within a
    /// line are dropped, blank lines are skipped, transaction order is kept.
    pub fn load_fimi(path: impl AsRef<Path>) -> Result<Dataset> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let reader = BufReader::new(file);
        let mut transactions = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|source| Error::Io {
                path: path.to_path_buf(),
                source,
            })?;
            let mut items = Vec::new();
            for token in line.split_whitespace() {
                let item: u32 = token.parse().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    token: token.to_string(),
                })?;
                items.push(item);
            }
            if let Some(t) = Transaction::new(items) {
                transactions.push(t);
            }
        }
        Dataset::new(transactions)
    }

    /// Writes the dataset in FIMI format: per transaction one line of
    /// ascending decimal item ids separated by single spaces, `\n`-terminated.
    pub fn write_fimi(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut out = BufWriter::new(file);
        write_fimi_to(self, &mut out).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// FIMI text of the whole dataset, as written by [`Dataset::write_fimi`].
    pub fn to_fimi_string(&self) -> String {
        let mut buf = Vec::new();
        write_fimi_to(self, &mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("FIMI output is ASCII")
    }
}

fn write_fimi_to(dataset: &Dataset, out: &mut impl Write) -> std::io::Result<()> {
    for t in dataset.transactions() {
        let mut first = true;
        for item in t.items() {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{item}")?;
            first = false;
        }
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Summary counts used when sizing samples and reading off complexity bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetStats {
    pub num_transactions: usize,
    pub num_items: usize,
    pub max_len: usize,
    /// Entry `l-1` counts the distinct transactions (excluding any equal to
    /// the whole ground set) of length at least `l`, for `l in 1..=max_len`.
    pub distinct_count_by_min_len: Vec<usize>,
}

impl DatasetStats {
    pub fn distinct_with_min_len(&self, min_len: usize) -> usize {
        let l = min_len.max(1);
        if l > self.max_len {
            0
        } else {
            self.distinct_count_by_min_len[l - 1]
        }
    }
}

/// Builds a dataset whose associated range space has VC-dimension exactly `d`
/// (and d-index `d`).
///
/// For `d >= 2` the core is the `d` transactions `{0..=d} \ {i}`, an
/// anti-chain of length-`d` transactions that is shattered by construction;
/// for `d = 1` it is the two singleton transactions `{0}` and `{2}`.
/// `n_extra` additional transactions of length at most `d` are drawn
/// uniformly (length uniform in `1..=d`, then that many distinct items from
/// `{0..=d+1}`), deterministically from `seed`; a draw equal to the whole
/// item universe would be rejected, though lengths capped at `d` make that
/// impossible.
pub fn generate_adversarial(d: usize, n_extra: usize, seed: u64) -> Result<Dataset> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be >= 1".into()));
    }
    let mut transactions = Vec::with_capacity(d.max(2) + n_extra);
    if d == 1 {
        transactions.push(Transaction::new([0]).expect("non-empty"));
        transactions.push(Transaction::new([2]).expect("non-empty"));
    } else {
        for skip in 1..=d as u32 {
            let items = (0..=d as u32).filter(|&x| x != skip);
            transactions.push(Transaction::new(items).expect("non-empty"));
        }
    }
    let universe: Vec<u32> = (0..=d as u32 + 1).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut added = 0;
    while added < n_extra {
        let len = rng.gen_range(1..=d);
        let items: Vec<u32> = universe.choose_multiple(&mut rng, len).copied().collect();
        let t = Transaction::new(items).expect("non-empty");
        if t.len() == universe.len() {
            continue;
        }
        transactions.push(t);
        added += 1;
    }
    Dataset::new(transactions)
}
