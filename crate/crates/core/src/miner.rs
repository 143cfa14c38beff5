//! Exact mining of frequent itemsets, top-K frequent itemsets, and
//! association rules from any transaction collection (full dataset or
//! sample), by levelwise Apriori search with anti-monotone pruning.
//!
//! Threshold comparisons are exact: a frequency threshold is taken at the
//! exact rational value of the given double and turned into an integer
//! support cutoff, so boundary itemsets never flip on rounding.

use std::collections::{HashMap, HashSet};

use crate::corpus::Transaction;
use crate::error::{Error, Result};
use crate::exact;

/// An itemset with its exact support count and the frequency `support/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequentItemset {
    /// Sorted ascending.
    pub items: Vec<u32>,
    /// Exact count; absent on collections parsed back from pattern files.
    pub support: Option<u64>,
    pub frequency: f64,
}

/// A rule antecedent => consequent with the frequency and confidence of the
/// joined itemset.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationRule {
    pub antecedent: Vec<u32>,
    pub consequent: Vec<u32>,
    /// Support of antecedent ∪ consequent; absent on parsed collections.
    pub support: Option<u64>,
    pub frequency: f64,
    pub confidence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    Itemsets,
    Rules,
}

#[derive(Debug, Clone)]
pub enum PatternEntries {
    Itemsets(Vec<FrequentItemset>),
    Rules(Vec<AssociationRule>),
}

/// A mined (or parsed) collection together with the thresholds that produced
/// it and the size of the transaction collection it was mined from.
#[derive(Debug, Clone)]
pub struct PatternCollection {
    pub entries: PatternEntries,
    /// Frequency threshold the entries satisfy; NaN on parsed collections.
    pub threshold_used: f64,
    pub confidence_threshold_used: Option<f64>,
    /// Number of transactions mined; 0 on parsed collections.
    pub source_size: u64,
}

impl PatternCollection {
    pub fn kind(&self) -> PatternKind {
        match self.entries {
            PatternEntries::Itemsets(_) => PatternKind::Itemsets,
            PatternEntries::Rules(_) => PatternKind::Rules,
        }
    }

    pub fn len(&self) -> usize {
        match &self.entries {
            PatternEntries::Itemsets(v) => v.len(),
            PatternEntries::Rules(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn itemsets(&self) -> Result<&[FrequentItemset]> {
        match &self.entries {
            PatternEntries::Itemsets(v) => Ok(v),
            PatternEntries::Rules(_) => Err(Error::KindMismatch {
                expected: "itemsets",
                found: "rules",
            }),
        }
    }

    pub fn rules(&self) -> Result<&[AssociationRule]> {
        match &self.entries {
            PatternEntries::Rules(v) => Ok(v),
            PatternEntries::Itemsets(_) => Err(Error::KindMismatch {
                expected: "rules",
                found: "itemsets",
            }),
        }
    }

    /// One line per pattern. Itemsets: ascending items space-separated, a
    /// tab, then the frequency with 10 significant digits. Rules:
    /// `a1 a2 => b1 b2`, a tab, frequency, a tab, confidence.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        match &self.entries {
            PatternEntries::Itemsets(v) => {
                for e in v {
                    out.push_str(&join_items(&e.items));
                    out.push('\t');
                    out.push_str(&format_sig10(e.frequency));
                    out.push('\n');
                }
            }
            PatternEntries::Rules(v) => {
                for r in v {
                    out.push_str(&join_items(&r.antecedent));
                    out.push_str(" => ");
                    out.push_str(&join_items(&r.consequent));
                    out.push('\t');
                    out.push_str(&format_sig10(r.frequency));
                    out.push('\t');
                    out.push_str(&format_sig10(r.confidence));
                    out.push('\n');
                }
            }
        }
        out
    }

    /// Parses the line format written by [`PatternCollection::to_lines`].
    /// Supports are unknown after serialization, so entries carry only the
    /// decimal frequencies; `threshold_used` is NaN and `source_size` 0.
    pub fn parse(text: &str, kind: PatternKind) -> Result<PatternCollection> {
        let mut itemsets = Vec::new();
        let mut rules = Vec::new();
        let mut seen = HashSet::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match kind {
                PatternKind::Itemsets => {
                    if fields.len() != 2 {
                        return Err(Error::PatternParse {
                            line: lineno,
                            reason: "expected `items<TAB>frequency`".into(),
                        });
                    }
                    let items = parse_items(fields[0], lineno)?;
                    let frequency = parse_value(fields[1], "frequency", lineno)?;
                    if !seen.insert(format!("{items:?}")) {
                        return Err(Error::PatternParse {
                            line: lineno,
                            reason: "duplicate itemset".into(),
                        });
                    }
                    itemsets.push(FrequentItemset {
                        items,
                        support: None,
                        frequency,
                    });
                }
                PatternKind::Rules => {
                    if fields.len() != 3 {
                        return Err(Error::PatternParse {
                            line: lineno,
                            reason: "expected `antecedent => consequent<TAB>frequency<TAB>confidence`"
                                .into(),
                        });
                    }
                    let (lhs, rhs) = fields[0].split_once("=>").ok_or_else(|| {
                        Error::PatternParse {
                            line: lineno,
                            reason: "missing `=>`".into(),
                        }
                    })?;
                    let antecedent = parse_items(lhs, lineno)?;
                    let consequent = parse_items(rhs, lineno)?;
                    let frequency = parse_value(fields[1], "frequency", lineno)?;
                    let confidence = parse_value(fields[2], "confidence", lineno)?;
                    if !seen.insert(format!("{antecedent:?}=>{consequent:?}")) {
                        return Err(Error::PatternParse {
                            line: lineno,
                            reason: "duplicate rule".into(),
                        });
                    }
                    rules.push(AssociationRule {
                        antecedent,
                        consequent,
                        support: None,
                        frequency,
                        confidence,
                    });
                }
            }
        }
        Ok(PatternCollection {
            entries: match kind {
                PatternKind::Itemsets => PatternEntries::Itemsets(itemsets),
                PatternKind::Rules => PatternEntries::Rules(rules),
            },
            threshold_used: f64::NAN,
            confidence_threshold_used: None,
            source_size: 0,
        })
    }
}

fn join_items(items: &[u32]) -> String {
    items
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_items(s: &str, line: usize) -> Result<Vec<u32>> {
    let mut items = Vec::new();
    for token in s.split_whitespace() {
        let item: u32 = token.parse().map_err(|_| Error::PatternParse {
            line,
            reason: format!("invalid item {token:?}"),
        })?;
        items.push(item);
    }
    if items.is_empty() {
        return Err(Error::PatternParse {
            line,
            reason: "empty itemset".into(),
        });
    }
    items.sort_unstable();
    items.dedup();
    Ok(items)
}

fn parse_value(s: &str, what: &str, line: usize) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| Error::PatternParse {
        line,
        reason: format!("invalid {what} {s:?}"),
    })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::PatternParse {
            line,
            reason: format!("non-finite {what}"),
        })
    }
}

/// Plain decimal with 10 significant digits (frequencies and confidences lie
/// in (0, 1], so this never needs an exponent).
pub fn format_sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.9}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (9 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Result of a top-K mining run: the K-th itemset frequency (exact support
/// and as a real) and the collection of all itemsets at least that frequent.
#[derive(Debug, Clone)]
pub struct TopkResult {
    pub fk_support: u64,
    pub fk: f64,
    pub collection: PatternCollection,
}

/// Transactions in dense-id mask form for fast candidate counting.
struct MaskedData {
    item_ids: Vec<u32>,
    words: usize,
    masks: Vec<u64>,
    lens: Vec<u32>,
    n: usize,
}

impl MaskedData {
    fn build(transactions: &[Transaction]) -> MaskedData {
        let mut item_ids: Vec<u32> = transactions
            .iter()
            .flat_map(|t| t.items().iter().copied())
            .collect();
        item_ids.sort_unstable();
        item_ids.dedup();
        let words = item_ids.len().div_ceil(64).max(1);
        let n = transactions.len();
        let mut masks = vec![0u64; n * words];
        let mut lens = vec![0u32; n];
        for (t, tx) in transactions.iter().enumerate() {
            lens[t] = tx.len() as u32;
            for item in tx.items() {
                let dense = item_ids.binary_search(item).expect("item present");
                masks[t * words + dense / 64] |= 1u64 << (dense % 64);
            }
        }
        MaskedData {
            item_ids,
            words,
            masks,
            lens,
            n,
        }
    }

    fn num_items(&self) -> usize {
        self.item_ids.len()
    }

    fn to_original(&self, dense: &[u32]) -> Vec<u32> {
        dense.iter().map(|&i| self.item_ids[i as usize]).collect()
    }

    /// Supports of equally-sized candidate itemsets given as dense ids.
    fn count(&self, candidates: &[Vec<u32>]) -> Vec<u64> {
        if candidates.is_empty() {
            return Vec::new();
        }
        let words = self.words;
        let k = candidates[0].len() as u32;
        let mut cmasks = vec![0u64; candidates.len() * words];
        for (ci, cand) in candidates.iter().enumerate() {
            debug_assert_eq!(cand.len() as u32, k);
            for &item in cand {
                cmasks[ci * words + item as usize / 64] |= 1u64 << (item % 64);
            }
        }
        let mut counts = vec![0u64; candidates.len()];
        for t in 0..self.n {
            if self.lens[t] < k {
                continue;
            }
            let tmask = &self.masks[t * words..(t + 1) * words];
            for ci in 0..candidates.len() {
                let cm = &cmasks[ci * words..(ci + 1) * words];
                let contained = cm.iter().zip(tmask).all(|(c, t)| c & !t == 0);
                if contained {
                    counts[ci] += 1;
                }
            }
        }
        counts
    }
}

/// Joins lexicographically sorted size-k sets sharing a (k-1)-prefix and
/// prunes candidates with any missing k-subset.
fn gen_candidates(prev: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let k = match prev.first() {
        Some(s) => s.len(),
        None => return out,
    };
    let mut i = 0;
    while i < prev.len() {
        let mut j = i + 1;
        while j < prev.len() && prev[j][..k - 1] == prev[i][..k - 1] {
            j += 1;
        }
        for a in i..j {
            for b in a + 1..j {
                let mut cand = prev[a].clone();
                cand.push(prev[b][k - 1]);
                if all_subsets_present(&cand, prev) {
                    out.push(cand);
                }
            }
        }
        i = j;
    }
    out
}

fn all_subsets_present(cand: &[u32], prev: &[Vec<u32>]) -> bool {
    let mut subset = Vec::with_capacity(cand.len() - 1);
    for skip in 0..cand.len() {
        subset.clear();
        subset.extend(cand.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x));
        if prev.binary_search_by(|p| p.as_slice().cmp(subset.as_slice())).is_err() {
            return false;
        }
    }
    true
}

/// All itemsets with support at least `min_count`, as (dense ids, support),
/// in levelwise order.
fn apriori(data: &MaskedData, min_count: u64) -> Vec<(Vec<u32>, u64)> {
    let mut all = Vec::new();
    let singles: Vec<Vec<u32>> = (0..data.num_items() as u32).map(|i| vec![i]).collect();
    let counts = data.count(&singles);
    let mut current: Vec<Vec<u32>> = Vec::new();
    for (set, count) in singles.into_iter().zip(counts) {
        if count >= min_count {
            all.push((set.clone(), count));
            current.push(set);
        }
    }
    while !current.is_empty() {
        current.sort();
        let cands = gen_candidates(&current);
        if cands.is_empty() {
            break;
        }
        let counts = data.count(&cands);
        current = Vec::new();
        for (set, count) in cands.into_iter().zip(counts) {
            if count >= min_count {
                all.push((set.clone(), count));
                current.push(set);
            }
        }
    }
    all
}

fn canonical_sort(entries: &mut [FrequentItemset]) {
    entries.sort_by(|a, b| {
        b.support
            .cmp(&a.support)
            .then(a.items.len().cmp(&b.items.len()))
            .then(a.items.cmp(&b.items))
    });
}

fn check_nonempty(transactions: &[Transaction]) -> Result<()> {
    if transactions.is_empty() {
        Err(Error::EmptyDataset)
    } else {
        Ok(())
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta > 0.0 && theta <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "theta must lie in (0, 1], got {theta}"
        )))
    }
}

/// Mines at an explicit support cutoff; `threshold_label` is recorded as the
/// collection's frequency threshold.
pub(crate) fn mine_fi_at_count(
    transactions: &[Transaction],
    min_count: u64,
    threshold_label: f64,
) -> Result<PatternCollection> {
    check_nonempty(transactions)?;
    let n = transactions.len() as u64;
    let data = MaskedData::build(transactions);
    let frequent = apriori(&data, min_count.max(1));
    let mut entries: Vec<FrequentItemset> = frequent
        .into_iter()
        .map(|(dense, support)| FrequentItemset {
            items: data.to_original(&dense),
            support: Some(support),
            frequency: support as f64 / n as f64,
        })
        .collect();
    canonical_sort(&mut entries);
    Ok(PatternCollection {
        entries: PatternEntries::Itemsets(entries),
        threshold_used: threshold_label,
        confidence_threshold_used: None,
        source_size: n,
    })
}

/// All itemsets with frequency at least `theta`, with exact supports.
pub fn mine_fi(transactions: &[Transaction], theta: f64) -> Result<PatternCollection> {
    check_theta(theta)?;
    check_nonempty(transactions)?;
    let min_count = exact::min_count_for_threshold(theta, transactions.len() as u64);
    mine_fi_at_count(transactions, min_count, theta)
}

/// The K-th largest itemset frequency and every itemset at least that
/// frequent. Errors when fewer than `k` itemsets have positive support.
///
/// Levelwise search with a rising support cutoff: once `k` itemsets are in
/// hand, anything below the current K-th support can never enter the answer
/// (anti-monotonicity), so it is dropped and never expanded.
pub fn mine_topk(transactions: &[Transaction], k: usize) -> Result<TopkResult> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    check_nonempty(transactions)?;
    let n = transactions.len() as u64;
    let data = MaskedData::build(transactions);

    let mut kept: Vec<(Vec<u32>, u64)> = Vec::new();
    let mut tau: u64 = 1;
    let mut positive_seen = 0usize;

    let singles: Vec<Vec<u32>> = (0..data.num_items() as u32).map(|i| vec![i]).collect();
    let counts = data.count(&singles);
    let mut current: Vec<(Vec<u32>, u64)> = singles
        .into_iter()
        .zip(counts)
        .filter(|&(_, c)| c >= 1)
        .collect();
    positive_seen += current.len();

    while !current.is_empty() {
        kept.extend(current.iter().cloned());
        if kept.len() >= k {
            let mut supports: Vec<u64> = kept.iter().map(|e| e.1).collect();
            supports.sort_unstable_by(|a, b| b.cmp(a));
            let new_tau = supports[k - 1];
            if new_tau > tau {
                tau = new_tau;
                kept.retain(|e| e.1 >= tau);
                current.retain(|e| e.1 >= tau);
            }
        }
        let mut level_sets: Vec<Vec<u32>> = current.iter().map(|e| e.0.clone()).collect();
        level_sets.sort();
        let cands = gen_candidates(&level_sets);
        if cands.is_empty() {
            break;
        }
        let counts = data.count(&cands);
        current = Vec::new();
        for (set, count) in cands.into_iter().zip(counts) {
            if count >= 1 {
                positive_seen += 1;
            }
            if count >= tau {
                current.push((set, count));
            }
        }
    }

    if positive_seen < k {
        return Err(Error::InsufficientItemsets {
            k,
            available: positive_seen,
        });
    }
    let mut supports: Vec<u64> = kept.iter().map(|e| e.1).collect();
    supports.sort_unstable_by(|a, b| b.cmp(a));
    let fk_support = supports[k - 1];
    let fk = fk_support as f64 / n as f64;
    let mut entries: Vec<FrequentItemset> = kept
        .into_iter()
        .filter(|e| e.1 >= fk_support)
        .map(|(dense, support)| FrequentItemset {
            items: data.to_original(&dense),
            support: Some(support),
            frequency: support as f64 / n as f64,
        })
        .collect();
    canonical_sort(&mut entries);
    Ok(TopkResult {
        fk_support,
        fk,
        collection: PatternCollection {
            entries: PatternEntries::Itemsets(entries),
            threshold_used: fk,
            confidence_threshold_used: None,
            source_size: n,
        },
    })
}

/// All rules `A => B` whose joined itemset is frequent at `theta` and whose
/// confidence reaches `gamma`, generated by splitting each frequent itemset
/// into every (antecedent, consequent) bipartition.
pub fn mine_ar(transactions: &[Transaction], theta: f64, gamma: f64) -> Result<PatternCollection> {
    check_theta(theta)?;
    if !(gamma.is_finite() && gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in (0, 1), got {gamma}"
        )));
    }
    let fi = mine_fi(transactions, theta)?;
    let n = fi.source_size;
    let itemsets = fi.itemsets().expect("mined itemsets");
    let support_by_items: HashMap<&[u32], u64> = itemsets
        .iter()
        .map(|e| (e.items.as_slice(), e.support.expect("mined support")))
        .collect();
    let gamma_exact = exact::rational(gamma).expect("finite gamma");

    let mut scored: Vec<(AssociationRule, u64)> = Vec::new();
    for entry in itemsets {
        let len = entry.items.len();
        if len < 2 {
            continue;
        }
        let joined_support = entry.support.expect("mined support");
        // Every nonempty proper subset as antecedent.
        for split in 1u32..(1 << len) - 1 {
            let mut antecedent = Vec::new();
            let mut consequent = Vec::new();
            for (i, &item) in entry.items.iter().enumerate() {
                if split >> i & 1 == 1 {
                    antecedent.push(item);
                } else {
                    consequent.push(item);
                }
            }
            let antecedent_support = support_by_items[antecedent.as_slice()];
            let confident =
                exact::ratio(joined_support, antecedent_support) >= gamma_exact;
            if confident {
                let rule = AssociationRule {
                    antecedent,
                    consequent,
                    support: Some(joined_support),
                    frequency: joined_support as f64 / n as f64,
                    confidence: joined_support as f64 / antecedent_support as f64,
                };
                scored.push((rule, antecedent_support));
            }
        }
    }
    // Support descending, then confidence descending (at equal rule support
    // that is antecedent support ascending), then by items.
    scored.sort_by(|(a, sa), (b, sb)| {
        b.support
            .cmp(&a.support)
            .then(sa.cmp(sb))
            .then(a.antecedent.cmp(&b.antecedent))
            .then(a.consequent.cmp(&b.consequent))
    });
    let rules = scored.into_iter().map(|(r, _)| r).collect();
    Ok(PatternCollection {
        entries: PatternEntries::Rules(rules),
        threshold_used: theta,
        confidence_threshold_used: Some(gamma),
        source_size: n,
    })
}

/// Exact number of transactions containing the itemset.
pub fn support_of(transactions: &[Transaction], itemset: &[u32]) -> Result<u64> {
    if itemset.is_empty() {
        return Err(Error::InvalidParameter("itemset must be non-empty".into()));
    }
    let mut sorted = itemset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(transactions
        .iter()
        .filter(|t| t.contains_all(&sorted))
        .count() as u64)
}

/// Supports of many itemsets in one pass over the data.
pub fn support_of_many(transactions: &[Transaction], itemsets: &[Vec<u32>]) -> Result<Vec<u64>> {
    if itemsets.iter().any(|s| s.is_empty()) {
        return Err(Error::InvalidParameter("itemset must be non-empty".into()));
    }
    let data = MaskedData::build(transactions);
    let words = data.words;
    // Dense masks; an itemset mentioning an unseen item has support zero.
    let mut cmasks = vec![0u64; itemsets.len() * words];
    let mut feasible = vec![true; itemsets.len()];
    for (ci, itemset) in itemsets.iter().enumerate() {
        for item in itemset {
            match data.item_ids.binary_search(item) {
                Ok(dense) => cmasks[ci * words + dense / 64] |= 1u64 << (dense % 64),
                Err(_) => feasible[ci] = false,
            }
        }
    }
    let mut counts = vec![0u64; itemsets.len()];
    for t in 0..data.n {
        let tmask = &data.masks[t * words..(t + 1) * words];
        for ci in 0..itemsets.len() {
            if !feasible[ci] {
                continue;
            }
            let cm = &cmasks[ci * words..(ci + 1) * words];
            if cm.iter().zip(tmask).all(|(c, t)| c & !t == 0) {
                counts[ci] += 1;
            }
        }
    }
    for (ci, f) in feasible.iter().enumerate() {
        if !f {
            counts[ci] = 0;
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Dataset;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tx(items: &[u32]) -> Transaction {
        Transaction::new(items.iter().copied()).unwrap()
    }

    fn toy_dataset() -> Vec<Transaction> {
        vec![tx(&[1, 2, 3, 4]), tx(&[1, 2]), tx(&[1, 3]), tx(&[4])]
    }

    fn itemset_map(c: &PatternCollection) -> HashMap<Vec<u32>, u64> {
        c.itemsets()
            .unwrap()
            .iter()
            .map(|e| (e.items.clone(), e.support.unwrap()))
            .collect()
    }

    #[test]
    fn fi_worked_example() {
        let c = mine_fi(&toy_dataset(), 0.5).unwrap();
        let got = itemset_map(&c);
        let want: HashMap<Vec<u32>, u64> = [
            (vec![1], 3),
            (vec![2], 2),
            (vec![3], 2),
            (vec![4], 2),
            (vec![1, 2], 2),
            (vec![1, 3], 2),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
        // Canonical order: {1} first (frequency 0.75), singletons before pairs.
        let first = &c.itemsets().unwrap()[0];
        assert_eq!(first.items, vec![1]);
        assert_eq!(first.frequency, 0.75);
        assert_eq!(c.itemsets().unwrap()[1].items, vec![2]);
    }

    #[test]
    fn fi_threshold_edges() {
        let twice = vec![tx(&[1, 2]), tx(&[1, 2])];
        let c = mine_fi(&twice, 1.0).unwrap();
        let got = itemset_map(&c);
        assert_eq!(got.len(), 3);
        assert!(got.keys().all(|k| got[k] == 2));

        let c = mine_fi(&toy_dataset(), 0.76).unwrap();
        assert!(c.is_empty());

        assert!(mine_fi(&toy_dataset(), 0.0).is_err());
        assert!(mine_fi(&toy_dataset(), 1.1).is_err());
        assert!(mine_fi(&[], 0.5).is_err());
    }

    #[test]
    fn topk_worked_examples() {
        let data = toy_dataset();
        let top1 = mine_topk(&data, 1).unwrap();
        assert_eq!(top1.fk, 0.75);
        assert_eq!(top1.collection.len(), 1);
        assert_eq!(top1.collection.itemsets().unwrap()[0].items, vec![1]);

        let top3 = mine_topk(&data, 3).unwrap();
        assert_eq!(top3.fk, 0.5);
        assert_eq!(top3.collection.len(), 6, "ties widen the collection");

        // 15 itemsets have positive support here.
        assert!(mine_topk(&data, 15).is_ok());
        match mine_topk(&data, 16) {
            Err(Error::InsufficientItemsets { k, available }) => {
                assert_eq!(k, 16);
                assert_eq!(available, 15);
            }
            other => panic!("expected insufficiency, got {other:?}"),
        }
    }

    #[test]
    fn topk_collection_equals_fi_at_fk() {
        let data = toy_dataset();
        for k in 1..=15 {
            let top = mine_topk(&data, k).unwrap();
            let fi = mine_fi_at_count(&data, top.fk_support, top.fk).unwrap();
            assert_eq!(itemset_map(&top.collection), itemset_map(&fi), "k={k}");
            assert!(top.collection.len() >= k);
        }
    }

    #[test]
    fn ar_worked_examples() {
        let data = toy_dataset();
        let c = mine_ar(&data, 0.5, 0.9).unwrap();
        let rules = c.rules().unwrap();
        let got: HashSet<(Vec<u32>, Vec<u32>)> = rules
            .iter()
            .map(|r| (r.antecedent.clone(), r.consequent.clone()))
            .collect();
        let want: HashSet<(Vec<u32>, Vec<u32>)> =
            [(vec![2], vec![1]), (vec![3], vec![1])].into_iter().collect();
        assert_eq!(got, want);
        for r in rules {
            assert_eq!(r.frequency, 0.5);
            assert_eq!(r.confidence, 1.0);
        }

        let c = mine_ar(&data, 0.5, 0.5).unwrap();
        let got: HashSet<(Vec<u32>, Vec<u32>)> = c
            .rules()
            .unwrap()
            .iter()
            .map(|r| (r.antecedent.clone(), r.consequent.clone()))
            .collect();
        assert!(got.contains(&(vec![1], vec![2])));
        assert!(got.contains(&(vec![1], vec![3])));
        assert_eq!(got.len(), 4);

        // No confidence-1.0 rules here, so gamma close to 1 yields nothing.
        let no_certain = vec![tx(&[1, 2]), tx(&[1]), tx(&[2])];
        let c = mine_ar(&no_certain, 0.1, 0.999).unwrap();
        assert!(c.is_empty());

        assert!(mine_ar(&data, 0.5, 1.0).is_err());
        assert!(mine_ar(&data, 0.5, 0.0).is_err());
    }

    #[test]
    fn support_examples() {
        let data = toy_dataset();
        assert_eq!(support_of(&data, &[1]).unwrap(), 3);
        assert_eq!(support_of(&data, &[1, 2, 3, 4]).unwrap(), 1);
        assert_eq!(support_of(&data, &[9]).unwrap(), 0);
        assert!(support_of(&data, &[]).is_err());

        let batch = support_of_many(
            &data,
            &[vec![1], vec![1, 2, 3, 4], vec![9], vec![2, 1]],
        )
        .unwrap();
        assert_eq!(batch, vec![3, 1, 0, 2]);
    }

    /// Brute force over every nonempty itemset of the ground set.
    fn brute_supports(transactions: &[Transaction]) -> HashMap<Vec<u32>, u64> {
        let mut items: Vec<u32> = transactions
            .iter()
            .flat_map(|t| t.items().iter().copied())
            .collect();
        items.sort_unstable();
        items.dedup();
        assert!(items.len() <= 14);
        let mut out = HashMap::new();
        for mask in 1u32..(1 << items.len()) {
            let set: Vec<u32> = (0..items.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| items[i])
                .collect();
            let support = transactions.iter().filter(|t| t.contains_all(&set)).count() as u64;
            out.insert(set, support);
        }
        out
    }

    fn random_transactions(rng: &mut ChaCha8Rng, max_items: u32, max_tx: usize) -> Vec<Transaction> {
        let n_items = rng.gen_range(1..=max_items);
        let n_tx = rng.gen_range(1..=max_tx);
        (0..n_tx)
            .map(|_| {
                let len = rng.gen_range(1..=n_items);
                let mut pool: Vec<u32> = (0..n_items).collect();
                for i in 0..len as usize {
                    let j = rng.gen_range(i..pool.len());
                    pool.swap(i, j);
                }
                pool.truncate(len as usize);
                tx(&pool)
            })
            .collect()
    }

    #[test]
    fn fi_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let data = random_transactions(&mut rng, 8, 40);
            let n = data.len() as u64;
            let truth = brute_supports(&data);
            for theta in [0.1, 0.25, 0.5] {
                let min_count = exact::min_count_for_threshold(theta, n);
                let want: HashMap<Vec<u32>, u64> = truth
                    .iter()
                    .filter(|&(_, &s)| s >= min_count)
                    .map(|(k, &s)| (k.clone(), s))
                    .collect();
                let got = itemset_map(&mine_fi(&data, theta).unwrap());
                assert_eq!(got, want);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn anti_monotonicity_of_mined_sets(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let data = random_transactions(&mut rng, 8, 30);
            let c = mine_fi(&data, 0.2).unwrap();
            let by_items = itemset_map(&c);
            for (items, support) in &by_items {
                for skip in 0..items.len() {
                    if items.len() == 1 { continue; }
                    let sub: Vec<u32> = items
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &x)| x)
                        .collect();
                    let sub_support = support_of(&data, &sub).unwrap();
                    prop_assert!(sub_support >= *support);
                    // The subset is itself frequent, hence mined.
                    prop_assert!(by_items.contains_key(&sub));
                }
            }
        }
    }

    #[test]
    fn ar_values_recompute_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let data = random_transactions(&mut rng, 7, 30);
            let c = mine_ar(&data, 0.2, 0.6).unwrap();
            for r in c.rules().unwrap() {
                let mut joined = r.antecedent.clone();
                joined.extend(&r.consequent);
                let s_joined = support_of(&data, &joined).unwrap();
                let s_ant = support_of(&data, &r.antecedent).unwrap();
                assert_eq!(r.support, Some(s_joined));
                assert_eq!(r.frequency, s_joined as f64 / data.len() as f64);
                assert_eq!(r.confidence, s_joined as f64 / s_ant as f64);
                assert!(r.antecedent.iter().all(|i| !r.consequent.contains(i)));
            }
        }
    }

    #[test]
    fn replication_preserves_frequencies() {
        let base = Dataset::new(toy_dataset()).unwrap();
        let fi_base = mine_fi(base.transactions(), 0.5).unwrap();
        for k in [2usize, 5] {
            let rep = base.replicate(k).unwrap();
            let fi_rep = mine_fi(rep.transactions(), 0.5).unwrap();
            let base_freqs: HashMap<Vec<u32>, f64> = fi_base
                .itemsets()
                .unwrap()
                .iter()
                .map(|e| (e.items.clone(), e.frequency))
                .collect();
            let rep_freqs: HashMap<Vec<u32>, f64> = fi_rep
                .itemsets()
                .unwrap()
                .iter()
                .map(|e| (e.items.clone(), e.frequency))
                .collect();
            assert_eq!(base_freqs, rep_freqs);
        }
    }

    #[test]
    fn wide_ground_sets_use_multi_word_masks() {
        // 80 distinct items force two mask words per transaction; counts must
        // agree with the merge-based subset test.
        let data: Vec<Transaction> = (0..78u32).map(|i| tx(&[i, i + 1, i + 2])).collect();
        let theta = 2.0 / 78.0;
        let c = mine_fi(&data, theta).unwrap();
        for e in c.itemsets().unwrap() {
            assert_eq!(e.support.unwrap(), support_of(&data, &e.items).unwrap());
        }
        let pairs = c
            .itemsets()
            .unwrap()
            .iter()
            .filter(|e| e.items.len() == 2)
            .count();
        // Exactly the consecutive pairs reach support 2; no triple does.
        assert_eq!(pairs, 77);
        assert!(c.itemsets().unwrap().iter().all(|e| e.items.len() <= 2));

        let batch = support_of_many(&data, &[vec![0, 1, 2], vec![40, 41], vec![0, 79]]).unwrap();
        assert_eq!(batch, vec![1, 2, 0]);
    }

    #[test]
    fn sig10_formatting() {
        assert_eq!(format_sig10(1.0), "1.000000000");
        assert_eq!(format_sig10(0.5), "0.5000000000");
        assert_eq!(format_sig10(0.75), "0.7500000000");
        assert_eq!(format_sig10(0.0001234567891), "0.0001234567891");
    }

    #[test]
    fn lines_round_trip() {
        let data = toy_dataset();
        let fi = mine_fi(&data, 0.5).unwrap();
        let text = fi.to_lines();
        let parsed = PatternCollection::parse(&text, PatternKind::Itemsets).unwrap();
        assert_eq!(parsed.len(), fi.len());
        for (a, b) in parsed
            .itemsets()
            .unwrap()
            .iter()
            .zip(fi.itemsets().unwrap())
        {
            assert_eq!(a.items, b.items);
            assert!((a.frequency - b.frequency).abs() < 1e-9);
            assert_eq!(a.support, None);
        }

        let ar = mine_ar(&data, 0.5, 0.5).unwrap();
        let text = ar.to_lines();
        let parsed = PatternCollection::parse(&text, PatternKind::Rules).unwrap();
        assert_eq!(parsed.len(), ar.len());
        for (a, b) in parsed.rules().unwrap().iter().zip(ar.rules().unwrap()) {
            assert_eq!(a.antecedent, b.antecedent);
            assert_eq!(a.consequent, b.consequent);
            assert!((a.confidence - b.confidence).abs() < 1e-9);
        }

        assert!(PatternCollection::parse("1 2\tx\n", PatternKind::Itemsets).is_err());
        assert!(PatternCollection::parse(&fi.to_lines(), PatternKind::Rules).is_err());
    }
}
