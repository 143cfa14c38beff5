//! Checks an approximate collection against exact mining: the containment
//! and error properties an epsilon-close approximation must satisfy, plus the
//! error statistics (max/average frequency and confidence error, precision,
//! recall) reported by the experimental protocol.
//!
//! True frequencies are exact rationals recomputed on the dataset; claimed
//! values may have passed through decimal serialization, so every boundary
//! comparison carries a 1e-12 slack in the approximation's favour.

use std::collections::HashMap;

use num_rational::BigRational;

use crate::bounds::Mode;
use crate::corpus::Dataset;
use crate::error::{Error, Result};
use crate::exact;
use crate::miner::{self, AssociationRule, FrequentItemset, PatternCollection};

/// Outcome of checking one approximate collection.
///
/// `property_results` holds one flag per definition property: three for
/// itemset collections (containment, no low-frequency entry, frequency
/// error), five for rule collections (those plus the confidence analogues).
/// `passed` is their conjunction.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub passed: bool,
    pub property_results: Vec<bool>,
    pub max_freq_error: f64,
    pub avg_freq_error: f64,
    pub max_conf_error: Option<f64>,
    pub avg_conf_error: Option<f64>,
    pub precision: f64,
    pub recall: f64,
    pub true_patterns: usize,
    pub reported: usize,
    pub acceptable_false_positives: usize,
    pub violating_false_positives: usize,
}

impl VerificationReport {
    /// Flat key=value block, one line per field.
    pub fn to_kv(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "passed={}", self.passed);
        for (i, ok) in self.property_results.iter().enumerate() {
            let _ = writeln!(out, "property_{}={}", i + 1, ok);
        }
        let _ = writeln!(out, "max_freq_error={}", self.max_freq_error);
        let _ = writeln!(out, "avg_freq_error={}", self.avg_freq_error);
        if let Some(v) = self.max_conf_error {
            let _ = writeln!(out, "max_conf_error={v}");
        }
        if let Some(v) = self.avg_conf_error {
            let _ = writeln!(out, "avg_conf_error={v}");
        }
        let _ = writeln!(out, "precision={}", self.precision);
        let _ = writeln!(out, "recall={}", self.recall);
        let _ = writeln!(out, "true_patterns={}", self.true_patterns);
        let _ = writeln!(out, "reported={}", self.reported);
        let _ = writeln!(
            out,
            "acceptable_false_positives={}",
            self.acceptable_false_positives
        );
        let _ = writeln!(
            out,
            "violating_false_positives={}",
            self.violating_false_positives
        );
        out
    }

    pub fn csv_header() -> &'static str {
        "passed,max_freq_error,avg_freq_error,max_conf_error,avg_conf_error,precision,recall,\
         true_patterns,reported,acceptable_false_positives,violating_false_positives"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.passed,
            self.max_freq_error,
            self.avg_freq_error,
            self.max_conf_error.map_or(String::new(), |v| v.to_string()),
            self.avg_conf_error.map_or(String::new(), |v| v.to_string()),
            self.precision,
            self.recall,
            self.true_patterns,
            self.reported,
            self.acceptable_false_positives,
            self.violating_false_positives
        )
    }
}

/// Max/average errors of the reported patterns against their true values,
/// and the precision against the exact collection. Relative errors skip
/// patterns whose true frequency is zero; those are tallied separately.
#[derive(Debug, Clone, Default)]
pub struct ErrorStats {
    pub max_abs_freq_error: f64,
    pub avg_abs_freq_error: f64,
    pub max_rel_freq_error: f64,
    pub avg_rel_freq_error: f64,
    pub max_abs_conf_error: Option<f64>,
    pub avg_abs_conf_error: Option<f64>,
    pub max_rel_conf_error: Option<f64>,
    pub avg_rel_conf_error: Option<f64>,
    pub precision: f64,
    pub zero_true_frequency: usize,
}

struct Accumulator {
    max: f64,
    sum: f64,
    n: usize,
}

impl Accumulator {
    fn new() -> Self {
        Accumulator {
            max: 0.0,
            sum: 0.0,
            n: 0,
        }
    }

    fn push(&mut self, v: f64) {
        self.max = self.max.max(v);
        self.sum += v;
        self.n += 1;
    }

    fn max_avg(&self) -> (f64, f64) {
        if self.n == 0 {
            (0.0, 0.0)
        } else {
            (self.max, self.sum / self.n as f64)
        }
    }
}

fn rational_of(v: f64, what: &str) -> Result<BigRational> {
    exact::rational(v)
        .ok_or_else(|| Error::InvalidParameter(format!("{what} must be finite, got {v}")))
}

fn claimed_frequency(support: Option<u64>, claimed: f64, n: u64) -> Result<BigRational> {
    match support {
        Some(s) if n > 0 => Ok(exact::ratio(s, n)),
        _ => rational_of(claimed, "claimed frequency"),
    }
}

/// True supports for every itemset appearing in the approximate collection,
/// reusing the exact collection's counts and batch-counting the rest.
fn true_itemset_supports(
    dataset: &Dataset,
    exact: &[FrequentItemset],
    wanted: &[Vec<u32>],
) -> Result<HashMap<Vec<u32>, u64>> {
    let mut known: HashMap<Vec<u32>, u64> = exact
        .iter()
        .filter_map(|e| e.support.map(|s| (e.items.clone(), s)))
        .collect();
    let missing: Vec<Vec<u32>> = wanted
        .iter()
        .filter(|items| !known.contains_key(*items))
        .cloned()
        .collect();
    if !missing.is_empty() {
        let counts = miner::support_of_many(dataset.transactions(), &missing)?;
        known.extend(missing.into_iter().zip(counts));
    }
    Ok(known)
}

/// Checks an approximate itemset collection against `exact`, the collection
/// mined from the full dataset at `theta` (for top-K, at the true K-th
/// frequency). Properties, in order: every exact itemset is reported; no
/// reported itemset has true frequency below `theta - eps` (absolute) or
/// `(1 - eps) theta` (relative); every reported frequency is within `eps`
/// (absolute) or `eps * f_D` (relative) of the truth.
pub fn check_fi(
    dataset: &Dataset,
    exact: &PatternCollection,
    approx: &PatternCollection,
    theta: f64,
    epsilon: f64,
    mode: Mode,
) -> Result<VerificationReport> {
    let exact_items = exact.itemsets()?;
    let approx_items = approx.itemsets()?;
    let n = dataset.len() as u64;
    let theta_r = rational_of(theta, "theta")?;
    let eps_r = rational_of(epsilon, "epsilon")?;
    let slack = exact::boundary_slack();
    let low_bound = match mode {
        Mode::Absolute => &theta_r - &eps_r,
        Mode::Relative => (BigRational::from_integer(1.into()) - &eps_r) * &theta_r,
    };

    let reported_index: HashMap<&[u32], usize> = approx_items
        .iter()
        .enumerate()
        .map(|(i, e)| (e.items.as_slice(), i))
        .collect();
    let in_exact: std::collections::HashSet<&[u32]> =
        exact_items.iter().map(|e| e.items.as_slice()).collect();

    let contained = exact_items
        .iter()
        .filter(|e| reported_index.contains_key(e.items.as_slice()))
        .count();
    let p1 = contained == exact_items.len();
    let recall = if exact_items.is_empty() {
        1.0
    } else {
        contained as f64 / exact_items.len() as f64
    };

    let wanted: Vec<Vec<u32>> = approx_items.iter().map(|e| e.items.clone()).collect();
    let truth = true_itemset_supports(dataset, exact_items, &wanted)?;

    let mut p2 = true;
    let mut p3 = true;
    let mut freq_errors = Accumulator::new();
    let mut acceptable = 0usize;
    let mut violating = 0usize;
    let mut hits = 0usize;
    for entry in approx_items {
        let true_support = truth[&entry.items];
        let f_true = exact::ratio(true_support, n);
        let f_claim = claimed_frequency(entry.support, entry.frequency, approx.source_size)?;
        let v2 = f_true < &low_bound - &slack;
        let diff = exact::abs_diff(&f_true, &f_claim);
        let v3 = match mode {
            Mode::Absolute => diff > &eps_r + &slack,
            Mode::Relative => diff > &eps_r * &f_true + &slack,
        };
        p2 &= !v2;
        p3 &= !v3;
        let f_true_f = true_support as f64 / n as f64;
        freq_errors.push((f_true_f - entry.frequency).abs());
        if in_exact.contains(entry.items.as_slice()) {
            hits += 1;
        } else if v2 || v3 {
            violating += 1;
        } else {
            acceptable += 1;
        }
    }

    let (max_freq_error, avg_freq_error) = freq_errors.max_avg();
    let precision = if approx_items.is_empty() {
        1.0
    } else {
        hits as f64 / approx_items.len() as f64
    };
    let property_results = vec![p1, p2, p3];
    Ok(VerificationReport {
        passed: p1 && p2 && p3,
        property_results,
        max_freq_error,
        avg_freq_error,
        max_conf_error: None,
        avg_conf_error: None,
        precision,
        recall,
        true_patterns: exact_items.len(),
        reported: approx_items.len(),
        acceptable_false_positives: acceptable,
        violating_false_positives: violating,
    })
}

/// Checks an approximate rule collection against exact mining at
/// `(theta, gamma)`. Properties, in order: containment; no reported rule has
/// true frequency below `theta - eps` / `(1 - eps) theta`; frequency error
/// within `eps` / `eps * theta` (the relative rule-frequency bound is against
/// theta, not the rule's own frequency); no reported rule has true confidence
/// below `gamma - eps` / `(1 - eps) gamma`; confidence error within `eps` /
/// `eps * c_D`.
#[allow(clippy::too_many_arguments)]
pub fn check_ar(
    dataset: &Dataset,
    exact: &PatternCollection,
    approx: &PatternCollection,
    theta: f64,
    gamma: f64,
    epsilon: f64,
    mode: Mode,
) -> Result<VerificationReport> {
    let exact_rules = exact.rules()?;
    let approx_rules = approx.rules()?;
    let n = dataset.len() as u64;
    let theta_r = rational_of(theta, "theta")?;
    let gamma_r = rational_of(gamma, "gamma")?;
    let eps_r = rational_of(epsilon, "epsilon")?;
    let slack = exact::boundary_slack();
    let one = BigRational::from_integer(1.into());
    let freq_low = match mode {
        Mode::Absolute => &theta_r - &eps_r,
        Mode::Relative => (&one - &eps_r) * &theta_r,
    };
    let conf_low = match mode {
        Mode::Absolute => &gamma_r - &eps_r,
        Mode::Relative => (&one - &eps_r) * &gamma_r,
    };

    let key = |r: &AssociationRule| (r.antecedent.clone(), r.consequent.clone());
    let reported_keys: std::collections::HashSet<_> = approx_rules.iter().map(key).collect();
    let exact_keys: std::collections::HashSet<_> = exact_rules.iter().map(key).collect();
    let contained = exact_rules
        .iter()
        .filter(|r| reported_keys.contains(&key(r)))
        .count();
    let p1 = contained == exact_rules.len();
    let recall = if exact_rules.is_empty() {
        1.0
    } else {
        contained as f64 / exact_rules.len() as f64
    };

    // Batch the true supports of every joined itemset and antecedent.
    let mut wanted: Vec<Vec<u32>> = Vec::with_capacity(approx_rules.len() * 2);
    for r in approx_rules {
        let mut joined = r.antecedent.clone();
        joined.extend(&r.consequent);
        joined.sort_unstable();
        wanted.push(joined);
        wanted.push(r.antecedent.clone());
    }
    let counts = miner::support_of_many(dataset.transactions(), &wanted)?;

    let mut p = [true; 5];
    let mut freq_errors = Accumulator::new();
    let mut conf_errors = Accumulator::new();
    let mut acceptable = 0usize;
    let mut violating = 0usize;
    let mut hits = 0usize;
    for (i, rule) in approx_rules.iter().enumerate() {
        let s_joined = counts[2 * i];
        let s_ant = counts[2 * i + 1];
        let f_true = exact::ratio(s_joined, n);
        let f_claim = claimed_frequency(rule.support, rule.frequency, approx.source_size)?;
        let v2 = f_true < &freq_low - &slack;
        let fdiff = exact::abs_diff(&f_true, &f_claim);
        let v3 = match mode {
            Mode::Absolute => fdiff > &eps_r + &slack,
            Mode::Relative => fdiff > &eps_r * &theta_r + &slack,
        };
        let (v4, v5) = if s_ant == 0 {
            // No transaction contains the antecedent: the true confidence is
            // undefined, which no reported value can approximate.
            (true, true)
        } else {
            let c_true = exact::ratio(s_joined, s_ant);
            let c_claim = rational_of(rule.confidence, "claimed confidence")?;
            let v4 = c_true < &conf_low - &slack;
            let cdiff = exact::abs_diff(&c_true, &c_claim);
            let v5 = match mode {
                Mode::Absolute => cdiff > &eps_r + &slack,
                Mode::Relative => cdiff > &eps_r * &c_true + &slack,
            };
            conf_errors.push((s_joined as f64 / s_ant as f64 - rule.confidence).abs());
            (v4, v5)
        };
        freq_errors.push((s_joined as f64 / n as f64 - rule.frequency).abs());
        for (slot, v) in [v2, v3, v4, v5].into_iter().enumerate() {
            p[slot + 1] &= !v;
        }
        if exact_keys.contains(&key(rule)) {
            hits += 1;
        } else if v2 || v3 || v4 || v5 {
            violating += 1;
        } else {
            acceptable += 1;
        }
    }
    p[0] = p1;

    let (max_freq_error, avg_freq_error) = freq_errors.max_avg();
    let (max_conf_error, avg_conf_error) = conf_errors.max_avg();
    let precision = if approx_rules.is_empty() {
        1.0
    } else {
        hits as f64 / approx_rules.len() as f64
    };
    Ok(VerificationReport {
        passed: p.iter().all(|&x| x),
        property_results: p.to_vec(),
        max_freq_error,
        avg_freq_error,
        max_conf_error: Some(max_conf_error),
        avg_conf_error: Some(avg_conf_error),
        precision,
        recall,
        true_patterns: exact_rules.len(),
        reported: approx_rules.len(),
        acceptable_false_positives: acceptable,
        violating_false_positives: violating,
    })
}

/// Error statistics of `approx` against true values on `dataset`, with
/// precision measured against `exact`. Works for itemset and rule
/// collections alike; the collections must be of the same kind.
pub fn error_stats(
    dataset: &Dataset,
    exact: &PatternCollection,
    approx: &PatternCollection,
) -> Result<ErrorStats> {
    let n = dataset.len() as u64;
    let mut abs_freq = Accumulator::new();
    let mut rel_freq = Accumulator::new();
    let mut zero_true = 0usize;
    let mut hits = 0usize;
    let reported;

    match (&exact.entries, &approx.entries) {
        (miner::PatternEntries::Itemsets(ex), miner::PatternEntries::Itemsets(ap)) => {
            reported = ap.len();
            let exact_keys: std::collections::HashSet<&[u32]> =
                ex.iter().map(|e| e.items.as_slice()).collect();
            let wanted: Vec<Vec<u32>> = ap.iter().map(|e| e.items.clone()).collect();
            let truth = true_itemset_supports(dataset, ex, &wanted)?;
            for entry in ap {
                let s = truth[&entry.items];
                let f_true = s as f64 / n as f64;
                let err = (f_true - entry.frequency).abs();
                abs_freq.push(err);
                if s == 0 {
                    zero_true += 1;
                } else {
                    rel_freq.push(err / f_true);
                }
                if exact_keys.contains(entry.items.as_slice()) {
                    hits += 1;
                }
            }
            let (max_abs, avg_abs) = abs_freq.max_avg();
            let (max_rel, avg_rel) = rel_freq.max_avg();
            Ok(ErrorStats {
                max_abs_freq_error: max_abs,
                avg_abs_freq_error: avg_abs,
                max_rel_freq_error: max_rel,
                avg_rel_freq_error: avg_rel,
                precision: if reported == 0 {
                    1.0
                } else {
                    hits as f64 / reported as f64
                },
                zero_true_frequency: zero_true,
                ..ErrorStats::default()
            })
        }
        (miner::PatternEntries::Rules(ex), miner::PatternEntries::Rules(ap)) => {
            reported = ap.len();
            let key = |r: &AssociationRule| (r.antecedent.clone(), r.consequent.clone());
            let exact_keys: std::collections::HashSet<_> = ex.iter().map(key).collect();
            let mut abs_conf = Accumulator::new();
            let mut rel_conf = Accumulator::new();
            let mut wanted: Vec<Vec<u32>> = Vec::with_capacity(ap.len() * 2);
            for r in ap {
                let mut joined = r.antecedent.clone();
                joined.extend(&r.consequent);
                joined.sort_unstable();
                wanted.push(joined);
                wanted.push(r.antecedent.clone());
            }
            let counts = miner::support_of_many(dataset.transactions(), &wanted)?;
            for (i, rule) in ap.iter().enumerate() {
                let s_joined = counts[2 * i];
                let s_ant = counts[2 * i + 1];
                let f_true = s_joined as f64 / n as f64;
                let err = (f_true - rule.frequency).abs();
                abs_freq.push(err);
                if s_joined == 0 {
                    zero_true += 1;
                } else {
                    rel_freq.push(err / f_true);
                }
                if s_ant > 0 {
                    let c_true = s_joined as f64 / s_ant as f64;
                    let cerr = (c_true - rule.confidence).abs();
                    abs_conf.push(cerr);
                    if s_joined > 0 {
                        rel_conf.push(cerr / c_true);
                    }
                }
                if exact_keys.contains(&key(rule)) {
                    hits += 1;
                }
            }
            let (max_abs, avg_abs) = abs_freq.max_avg();
            let (max_rel, avg_rel) = rel_freq.max_avg();
            let (max_ac, avg_ac) = abs_conf.max_avg();
            let (max_rc, avg_rc) = rel_conf.max_avg();
            Ok(ErrorStats {
                max_abs_freq_error: max_abs,
                avg_abs_freq_error: avg_abs,
                max_rel_freq_error: max_rel,
                avg_rel_freq_error: avg_rel,
                max_abs_conf_error: Some(max_ac),
                avg_abs_conf_error: Some(avg_ac),
                max_rel_conf_error: Some(max_rc),
                avg_rel_conf_error: Some(avg_rc),
                precision: if reported == 0 {
                    1.0
                } else {
                    hits as f64 / reported as f64
                },
                zero_true_frequency: zero_true,
            })
        }
        _ => Err(Error::KindMismatch {
            expected: "matching collection kinds",
            found: "mixed itemsets and rules",
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Transaction;
    use crate::miner::{FrequentItemset, PatternEntries, PatternKind};

    fn tx(items: &[u32]) -> Transaction {
        Transaction::new(items.iter().copied()).unwrap()
    }

    fn toy_dataset() -> Dataset {
        Dataset::new(vec![tx(&[1, 2, 3, 4]), tx(&[1, 2]), tx(&[1, 3]), tx(&[4])]).unwrap()
    }

    #[test]
    fn exact_against_itself_passes_with_zero_error() {
        let d = toy_dataset();
        let exact = miner::mine_fi(d.transactions(), 0.5).unwrap();
        for eps in [0.001, 0.05, 0.5] {
            for mode in [Mode::Absolute, Mode::Relative] {
                let r = check_fi(&d, &exact, &exact, 0.5, eps, mode).unwrap();
                assert!(r.passed);
                assert_eq!(r.max_freq_error, 0.0);
                assert_eq!(r.avg_freq_error, 0.0);
                assert_eq!(r.recall, 1.0);
                assert_eq!(r.precision, 1.0);
                assert_eq!(r.violating_false_positives, 0);
            }
        }
    }

    #[test]
    fn missing_itemset_fails_containment() {
        let d = toy_dataset();
        let exact = miner::mine_fi(d.transactions(), 0.5).unwrap();
        let mut entries = exact.itemsets().unwrap().to_vec();
        entries.remove(0);
        let approx = PatternCollection {
            entries: PatternEntries::Itemsets(entries),
            threshold_used: 0.5,
            confidence_threshold_used: None,
            source_size: exact.source_size,
        };
        let r = check_fi(&d, &exact, &approx, 0.5, 0.1, Mode::Absolute).unwrap();
        assert!(!r.passed);
        assert!(!r.property_results[0]);
        assert!(r.recall < 1.0);
        assert!(r.property_results[1] && r.property_results[2]);
    }

    #[test]
    fn low_frequency_false_positive_violates_property_two() {
        let d = toy_dataset();
        let exact = miner::mine_fi(d.transactions(), 0.5).unwrap();
        let mut entries = exact.itemsets().unwrap().to_vec();
        // f_D({2,3}) = 0.25 < 0.5 - 0.2.
        entries.push(FrequentItemset {
            items: vec![2, 3],
            support: Some(1),
            frequency: 0.25,
        });
        let approx = PatternCollection {
            entries: PatternEntries::Itemsets(entries),
            threshold_used: 0.3,
            confidence_threshold_used: None,
            source_size: 4,
        };
        let r = check_fi(&d, &exact, &approx, 0.5, 0.2, Mode::Absolute).unwrap();
        assert!(!r.passed);
        assert!(r.property_results[0]);
        assert!(!r.property_results[1]);
        assert_eq!(r.violating_false_positives, 1);
        assert_eq!(r.acceptable_false_positives, 0);

        // At eps = 0.3 the same entry is merely an acceptable false positive.
        let r = check_fi(&d, &exact, &approx, 0.5, 0.3, Mode::Absolute).unwrap();
        assert!(r.passed);
        assert_eq!(r.acceptable_false_positives, 1);
        assert!(r.precision < 1.0);
    }

    #[test]
    fn frequency_error_bound_is_checked() {
        let d = toy_dataset();
        let exact = miner::mine_fi(d.transactions(), 0.5).unwrap();
        let mut entries = exact.itemsets().unwrap().to_vec();
        // Claim a frequency 0.2 away from the truth.
        entries[0].frequency = 0.55;
        entries[0].support = None;
        let approx = PatternCollection {
            entries: PatternEntries::Itemsets(entries),
            threshold_used: 0.5,
            confidence_threshold_used: None,
            source_size: 0,
        };
        let r = check_fi(&d, &exact, &approx, 0.5, 0.1, Mode::Absolute).unwrap();
        assert!(!r.passed);
        assert!(!r.property_results[2]);
        assert!((r.max_freq_error - 0.2).abs() < 1e-12);

        let r = check_fi(&d, &exact, &approx, 0.5, 0.25, Mode::Absolute).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn rule_confidence_below_bound_violates_property_four() {
        let d = toy_dataset();
        let exact = miner::mine_ar(d.transactions(), 0.5, 0.9).unwrap();
        let mut rules = exact.rules().unwrap().to_vec();
        // c_D({1} => {2}) = 2/3 < 0.9 - 0.2.
        rules.push(AssociationRule {
            antecedent: vec![1],
            consequent: vec![2],
            support: Some(2),
            frequency: 0.5,
            confidence: 2.0 / 3.0,
        });
        let approx = PatternCollection {
            entries: PatternEntries::Rules(rules),
            threshold_used: 0.5,
            confidence_threshold_used: Some(0.7),
            source_size: 4,
        };
        let r = check_ar(&d, &exact, &approx, 0.5, 0.9, 0.2, Mode::Absolute).unwrap();
        assert!(!r.passed);
        assert!(r.property_results[0]);
        assert!(r.property_results[1]);
        assert!(r.property_results[2]);
        assert!(!r.property_results[3]);
        assert_eq!(r.violating_false_positives, 1);
    }

    #[test]
    fn clamped_style_rules_pass_with_zero_error() {
        let d = toy_dataset();
        let exact = miner::mine_ar(d.transactions(), 0.5, 0.9).unwrap();
        // The miner run again at lowered thresholds on the same data is what
        // a clamped pipeline produces.
        let approx = miner::mine_ar(d.transactions(), 0.45, 0.85).unwrap();
        let r = check_ar(&d, &exact, &approx, 0.5, 0.9, 0.1, Mode::Relative).unwrap();
        assert!(r.passed, "{}", r.to_kv());
        assert_eq!(r.max_freq_error, 0.0);
        assert_eq!(r.max_conf_error, Some(0.0));
        assert_eq!(r.recall, 1.0);
    }

    #[test]
    fn boundary_slack_tolerates_decimal_serialization() {
        let d = toy_dataset();
        let exact = miner::mine_fi(d.transactions(), 0.5).unwrap();
        let text = exact.to_lines();
        let parsed = PatternCollection::parse(&text, PatternKind::Itemsets).unwrap();
        // Frequencies went through 10-digit decimal; exact equality is gone
        // but the slack keeps every property green at any epsilon.
        let r = check_fi(&d, &exact, &parsed, 0.5, 1e-9, Mode::Absolute).unwrap();
        assert!(r.passed, "{}", r.to_kv());
    }

    #[test]
    fn error_stats_worked_example() {
        let d = toy_dataset();
        let exact = miner::mine_fi(d.transactions(), 0.5).unwrap();
        // One itemset with claimed frequency 0.49 against truth 0.5.
        let approx = PatternCollection {
            entries: PatternEntries::Itemsets(vec![FrequentItemset {
                items: vec![2],
                support: None,
                frequency: 0.49,
            }]),
            threshold_used: f64::NAN,
            confidence_threshold_used: None,
            source_size: 0,
        };
        let s = error_stats(&d, &exact, &approx).unwrap();
        assert!((s.max_abs_freq_error - 0.01).abs() < 1e-12);
        assert!((s.max_rel_freq_error - 0.02).abs() < 1e-12);
        assert_eq!(s.precision, 1.0);
        assert_eq!(s.zero_true_frequency, 0);

        // Stats of the exact collection against itself are all zero, and
        // max >= avg >= 0 throughout.
        let s = error_stats(&d, &exact, &exact).unwrap();
        assert_eq!(s.max_abs_freq_error, 0.0);
        assert!(s.max_abs_freq_error >= s.avg_abs_freq_error);
    }

    #[test]
    fn report_serializes_to_kv_and_csv() {
        let d = toy_dataset();
        let exact = miner::mine_fi(d.transactions(), 0.5).unwrap();
        let r = check_fi(&d, &exact, &exact, 0.5, 0.1, Mode::Absolute).unwrap();
        let kv = r.to_kv();
        assert!(kv.starts_with("passed=true\n"));
        assert!(kv.contains("property_3=true\n"));
        assert!(kv.contains("recall=1\n"));
        let row = r.to_csv_row();
        assert_eq!(
            row.split(',').count(),
            VerificationReport::csv_header().split(',').count()
        );
        assert!(row.starts_with("true,0,0,"));

        let ar = miner::mine_ar(d.transactions(), 0.5, 0.9).unwrap();
        let r = check_ar(&d, &ar, &ar, 0.5, 0.9, 0.1, Mode::Absolute).unwrap();
        assert_eq!(r.property_results.len(), 5);
        assert!(r.to_csv_row().contains("true,0,0,0,0,"));
    }

    #[test]
    fn kind_mismatch_is_reported() {
        let d = toy_dataset();
        let fi = miner::mine_fi(d.transactions(), 0.5).unwrap();
        let ar = miner::mine_ar(d.transactions(), 0.5, 0.9).unwrap();
        assert!(check_fi(&d, &fi, &ar, 0.5, 0.1, Mode::Absolute).is_err());
        assert!(check_ar(&d, &ar, &fi, 0.5, 0.9, 0.1, Mode::Absolute).is_err());
        assert!(error_stats(&d, &fi, &ar).is_err());
    }
}
