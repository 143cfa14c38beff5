//! Complexity measures of a dataset's range space: the streaming d-index
//! upper bound, the exact d-index via maximum anti-chains, and a brute-force
//! VC-dimension oracle for small instances.
//!
//! All three quantities ignore transaction multiplicity and skip any
//! transaction equal to the whole ground set: such a transaction lies in
//! every range, so it can never help shatter a set.

use std::collections::{HashSet, VecDeque};

use crate::corpus::{Dataset, Transaction};
use crate::error::{Error, Result};

/// d-index bounds and, when computed, the exact values.
///
/// When every field is present, `vc_dim_exact <= dindex_exact <=
/// dindex_upper_bound <= max_len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityProfile {
    pub dindex_upper_bound: usize,
    pub dindex_exact: Option<usize>,
    pub vc_dim_exact: Option<usize>,
    pub max_len: usize,
}

impl ComplexityProfile {
    /// Computes the streaming bound always, the exact d-index when `exact`
    /// is set, and the VC-dimension when `vc_max_k` is given (subject to the
    /// oracle's instance-size guard).
    pub fn compute(dataset: &Dataset, exact: bool, vc_max_k: Option<usize>) -> Result<Self> {
        let dindex_upper_bound =
            dindex_upper_bound_stream(dataset.transactions(), dataset.num_items());
        let dindex_exact = if exact { Some(dindex_exact(dataset)) } else { None };
        let vc_dim_exact = match vc_max_k {
            Some(max_k) => Some(vc_dimension_exact(dataset, max_k)?),
            None => None,
        };
        Ok(ComplexityProfile {
            dindex_upper_bound,
            dindex_exact,
            vc_dim_exact,
            max_len: dataset.max_len(),
        })
    }
}

/// Single-pass upper bound on the d-index: the maximum `q` such that the
/// stream holds at least `q` distinct transactions of length at least `q`
/// and shorter than the ground set.
///
/// Keeps only the `q` longest distinct transactions seen so far (earliest
/// seen retained on length ties), so memory stays `O(q)`.
pub fn dindex_upper_bound_stream<'a, I>(stream: I, ground_set_size: usize) -> usize
where
    I: IntoIterator<Item = &'a Transaction>,
{
    let mut retained: Vec<&Transaction> = Vec::new(); // sorted by length desc, arrival asc
    let mut q = 0usize;
    for t in stream {
        if t.len() <= q || t.len() >= ground_set_size {
            continue;
        }
        if retained.contains(&t) {
            continue;
        }
        let pos = retained.partition_point(|r| r.len() >= t.len());
        retained.insert(pos, t);
        // Largest q' such that the q' longest retained all have length >= q'.
        let mut q2 = 0;
        for (i, r) in retained.iter().enumerate() {
            if r.len() > i {
                q2 = i + 1;
            } else {
                break;
            }
        }
        q = q2;
        retained.truncate(q);
    }
    q
}

/// Maximum size of an anti-chain (no member a subset of another) among
/// pairwise-distinct transactions.
///
/// Uses the chain-cover duality: a minimum chain cover of the containment
/// order has size `n - M` where `M` is a maximum matching of the bipartite
/// graph with an edge per strictly contained pair, and the minimum chain
/// cover size equals the maximum anti-chain size.
pub fn max_antichain_size(transactions: &[Transaction]) -> usize {
    let refs: Vec<&Transaction> = transactions.iter().collect();
    max_antichain_of(&refs)
}

fn max_antichain_of(transactions: &[&Transaction]) -> usize {
    let n = transactions.len();
    if n == 0 {
        return 0;
    }
    let mut adj = vec![Vec::new(); n];
    for (u, tu) in transactions.iter().enumerate() {
        for (v, tv) in transactions.iter().enumerate() {
            if tu.len() < tv.len() && tu.is_subset_of(tv) {
                adj[u].push(v);
            }
        }
    }
    n - hopcroft_karp(&adj, n)
}

const NIL: usize = usize::MAX;

/// Maximum bipartite matching; `adj[u]` lists right-side neighbours of left
/// vertex `u`.
fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> usize {
    let n_left = adj.len();
    let mut match_left = vec![NIL; n_left];
    let mut match_right = vec![NIL; n_right];
    let mut matched = 0;
    loop {
        // BFS from unmatched left vertices builds alternating layers.
        let mut dist = vec![NIL; n_left];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for u in 0..n_left {
            if match_left[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            }
        }
        let mut reachable_free = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match match_right[v] {
                    NIL => reachable_free = true,
                    u2 => {
                        if dist[u2] == NIL {
                            dist[u2] = dist[u] + 1;
                            queue.push_back(u2);
                        }
                    }
                }
            }
        }
        if !reachable_free {
            return matched;
        }
        for u in 0..n_left {
            if match_left[u] == NIL && augment(adj, &mut match_left, &mut match_right, &mut dist, u)
            {
                matched += 1;
            }
        }
    }
}

fn augment(
    adj: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    dist: &mut [usize],
    u: usize,
) -> bool {
    let du = dist[u];
    dist[u] = NIL;
    for &v in &adj[u] {
        let u2 = match_right[v];
        if u2 == NIL
            || (dist[u2] == du.wrapping_add(1)
                && augment(adj, match_left, match_right, dist, u2))
        {
            match_left[u] = v;
            match_right[v] = u;
            return true;
        }
    }
    false
}

/// Exact d-index: the maximum `l` such that the distinct transactions of
/// length at least `l` (excluding any equal to the ground set) contain an
/// anti-chain of size at least `l`.
///
/// Scans `l` downward from the streaming bound, so the expensive anti-chain
/// computations run only below a certified ceiling.
pub fn dindex_exact(dataset: &Dataset) -> usize {
    let q = dindex_upper_bound_stream(dataset.transactions(), dataset.num_items());
    let distinct = distinct_non_ground(dataset);
    for l in (1..=q).rev() {
        let candidates: Vec<&Transaction> =
            distinct.iter().copied().filter(|t| t.len() >= l).collect();
        if max_antichain_of(&candidates) >= l {
            return l;
        }
    }
    0
}

fn distinct_non_ground(dataset: &Dataset) -> Vec<&Transaction> {
    let num_items = dataset.num_items();
    let mut seen = HashSet::new();
    dataset
        .transactions()
        .iter()
        .filter(|t| t.len() < num_items && seen.insert(*t))
        .collect()
}

const VC_DISTINCT_GUARD: usize = 15;
const VC_ITEM_GUARD: usize = 64;

/// Brute-force VC-dimension of the dataset's range space: the largest
/// `k <= max_k` for which some `k`-subset of the distinct transactions is
/// shattered by the support sets of the itemsets.
///
/// Exists as a test oracle; guarded to at most 15 distinct transactions over
/// at most 64 items.
pub fn vc_dimension_exact(dataset: &Dataset, max_k: usize) -> Result<usize> {
    let distinct = distinct_transactions(dataset);
    if distinct.len() > VC_DISTINCT_GUARD {
        return Err(Error::InstanceTooLarge(format!(
            "{} distinct transactions exceed the oracle guard of {VC_DISTINCT_GUARD}",
            distinct.len()
        )));
    }
    if dataset.num_items() > VC_ITEM_GUARD {
        return Err(Error::InstanceTooLarge(format!(
            "{} items exceed the oracle guard of {VC_ITEM_GUARD}",
            dataset.num_items()
        )));
    }
    let items = dataset.items();
    let to_mask = |t: &Transaction| -> u64 {
        t.items()
            .iter()
            .map(|i| 1u64 << items.binary_search(i).expect("item in ground set"))
            .fold(0, |a, b| a | b)
    };
    let masks: Vec<u64> = distinct.iter().map(|t| to_mask(t)).collect();
    let ground: u64 = if items.len() == 64 {
        u64::MAX
    } else {
        (1u64 << items.len()) - 1
    };

    let upper = max_k.min(masks.len());
    for k in (1..=upper).rev() {
        let mut found = false;
        for_each_combination(masks.len(), k, &mut |chosen| {
            if !found {
                let subset: Vec<u64> = chosen.iter().map(|&i| masks[i]).collect();
                if is_shattered(&subset, ground) {
                    found = true;
                }
            }
        });
        if found {
            return Ok(k);
        }
    }
    Ok(0)
}

fn distinct_transactions(dataset: &Dataset) -> Vec<&Transaction> {
    let mut seen = HashSet::new();
    dataset
        .transactions()
        .iter()
        .filter(|t| seen.insert(*t))
        .collect()
}

/// Shattering test for a set of transactions given as item masks.
///
/// A non-empty subset `B` is cut out by some itemset iff the intersection of
/// `B`'s members is non-empty and contained in no member outside `B`: any
/// witness itemset is a subset of that intersection, so the intersection
/// itself is the canonical witness. The empty subset is cut out iff no member
/// equals the whole ground set: some non-empty itemset lies in no member
/// exactly when the full ground set does (every itemset is a subset of the
/// ground set, and only a member equal to it can contain it).
fn is_shattered(subset: &[u64], ground: u64) -> bool {
    if subset.contains(&ground) {
        return false;
    }
    let k = subset.len();
    debug_assert!(k < 32);
    for chosen in 1u32..(1u32 << k) {
        let mut inter = u64::MAX;
        for (i, &m) in subset.iter().enumerate() {
            if chosen >> i & 1 == 1 {
                inter &= m;
            }
        }
        if inter == 0 {
            return false;
        }
        for (i, &m) in subset.iter().enumerate() {
            if chosen >> i & 1 == 0 && m & inter == inter {
                return false;
            }
        }
    }
    true
}

/// Calls `f` with each size-`k` index combination out of `0..n`.
fn for_each_combination(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    debug_assert!(k >= 1 && k <= n);
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // Advance to the next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
