//! Level-wise (horizontal) miners: classic apriori, the multiple
//! minimum-support variant, and the rare-itemset variant.

use std::collections::HashSet;

use super::{count_support, singleton_counts, FrequentItemsetSet, Itemset, MiningError, MiningParams};
use crate::corpus::{ItemId, TransactionDatabase};

/// Generates and counts all itemsets whose support count passes `keep`,
/// levels 1..=max_size. `keep` must be anti-monotone in the count for
/// the candidate pruning to be exhaustive.
fn expand_levelwise(
    db: &TransactionDatabase,
    counts: &[usize],
    keep: &dyn Fn(usize) -> bool,
    max_size: Option<usize>,
) -> Vec<(Vec<ItemId>, usize)> {
    let cap = max_size.unwrap_or(usize::MAX);
    let mut out: Vec<(Vec<ItemId>, usize)> = Vec::new();
    if cap == 0 {
        return out;
    }
    let mut frontier: Vec<Vec<ItemId>> = Vec::new();
    for (idx, &c) in counts.iter().enumerate() {
        if keep(c) {
            let items = vec![ItemId(idx as u32)];
            out.push((items.clone(), c));
            frontier.push(items);
        }
    }
    let mut k = 2;
    while !frontier.is_empty() && k <= cap {
        let members: HashSet<&[ItemId]> = frontier.iter().map(Vec::as_slice).collect();
        let mut next = Vec::new();
        for i in 0..frontier.len() {
            for j in i + 1..frontier.len() {
                // Frontier is lexicographically sorted, so sets sharing a
                // (k-2)-prefix are adjacent; the first mismatch ends the run.
                if frontier[i][..k - 2] != frontier[j][..k - 2] {
                    break;
                }
                let mut candidate = frontier[i].clone();
                candidate.push(*frontier[j].last().unwrap());
                let mut subset = Vec::with_capacity(k - 1);
                let pruned = (0..k).any(|skip| {
                    subset.clear();
                    subset.extend(candidate.iter().enumerate().filter(|(p, _)| *p != skip).map(|(_, &it)| it));
                    !members.contains(subset.as_slice())
                });
                if pruned {
                    continue;
                }
                let count = count_support(db, &candidate);
                if keep(count) {
                    out.push((candidate.clone(), count));
                    next.push(candidate);
                }
            }
        }
        frontier = next;
        k += 1;
    }
    out
}

/// Classic frequent-itemset mining: returns exactly the itemsets with
/// supp(X) >= min_support, downward closed.
pub fn apriori(
    db: &TransactionDatabase,
    params: &MiningParams,
) -> Result<FrequentItemsetSet, MiningError> {
    params.validate()?;
    if db.is_empty() {
        return Err(MiningError::EmptyDatabase);
    }
    let n = db.len();
    let counts = singleton_counts(db);
    let keep = |c: usize| params.min_support.is_met_by(c, n);
    let found = expand_levelwise(db, &counts, &keep, params.max_itemset_size);
    Ok(FrequentItemsetSet::new(
        found.into_iter().map(|(items, c)| Itemset::new(items, c)).collect(),
        n,
    ))
}

/// Rare-itemset mining: keeps X when supp(X) >= min_support, or when
/// supp(X) >= rare_min_support and the relative support
/// supp(X) / min over i in X of supp({i}) reaches relative_support.
///
/// The lattice is expanded at the looser rare_min_support bound; both
/// keep conditions imply it, so nothing reachable is pruned away.
pub fn rsapriori(
    db: &TransactionDatabase,
    params: &MiningParams,
) -> Result<FrequentItemsetSet, MiningError> {
    params.validate()?;
    if db.is_empty() {
        return Err(MiningError::EmptyDatabase);
    }
    let n = db.len();
    let counts = singleton_counts(db);
    let grow = |c: usize| params.rare_min_support.is_met_by(c, n);
    let found = expand_levelwise(db, &counts, &grow, params.max_itemset_size);
    let kept = found
        .into_iter()
        .filter(|(items, c)| {
            if params.min_support.is_met_by(*c, n) {
                return true;
            }
            let min_singleton =
                items.iter().map(|i| counts[i.index()]).min().expect("nonempty itemset");
            params.relative_support.scaled_le(min_singleton, *c)
        })
        .map(|(items, c)| Itemset::new(items, c))
        .collect();
    Ok(FrequentItemsetSet::new(kept, n))
}

/// Multiple minimum supports: each item i carries
/// MIS(i) = max(mis_beta * supp({i}), mis_floor), and an itemset is kept
/// iff its support reaches the smallest MIS among its members.
///
/// Items are processed in ascending (count, id) order, which is
/// ascending MIS order, so the smallest MIS always belongs to the first
/// member. Candidates may contain items failing their own MIS as long
/// as the first member anchors a lower bar.
pub fn msapriori(
    db: &TransactionDatabase,
    params: &MiningParams,
) -> Result<FrequentItemsetSet, MiningError> {
    params.validate()?;
    if db.is_empty() {
        return Err(MiningError::EmptyDatabase);
    }
    let n = db.len();
    let counts = singleton_counts(db);
    let cap = params.max_itemset_size.unwrap_or(usize::MAX);

    // order[rank] = item, ranked by ascending (count, id).
    let mut order: Vec<u32> = (0..db.vocab_size() as u32).collect();
    order.sort_unstable_by_key(|&i| (counts[i as usize], i));
    let count_of_rank = |r: usize| counts[order[r] as usize];

    // supp >= MIS(anchor): both branches of the max, checked exactly.
    let meets_anchor_mis = |anchor_count: usize, count: usize| {
        params.mis_beta.scaled_le(anchor_count, count)
            && params.mis_floor.is_met_by(count, n)
    };

    let to_items = |ranks: &[usize]| {
        let mut items: Vec<ItemId> = ranks.iter().map(|&r| ItemId(order[r])).collect();
        items.sort_unstable();
        items
    };

    let mut found: Vec<(Vec<ItemId>, usize)> = Vec::new();
    // Level 1: items meeting their own MIS.
    for (rank, &item) in order.iter().enumerate() {
        let c = count_of_rank(rank);
        if meets_anchor_mis(c, c) {
            found.push((vec![ItemId(item)], c));
        }
    }

    // Level 2 pairs by rank: the anchor (lower rank) must meet its own
    // MIS; the partner only needs support >= MIS(anchor).
    let mut frontier: Vec<(Vec<usize>, usize)> = Vec::new();
    if cap >= 2 {
        for lo in 0..order.len() {
            let c_lo = count_of_rank(lo);
            if !meets_anchor_mis(c_lo, c_lo) {
                continue;
            }
            for hi in lo + 1..order.len() {
                if !meets_anchor_mis(c_lo, count_of_rank(hi)) {
                    continue;
                }
                let ranks = vec![lo, hi];
                let count = count_support(db, &to_items(&ranks));
                if meets_anchor_mis(c_lo, count) {
                    found.push((to_items(&ranks), count));
                    frontier.push((ranks, count));
                }
            }
        }
    }

    // Levels 3+: join frontier sets sharing a (k-2)-prefix of ranks.
    // Only subsets retaining the anchor rank are required to be present,
    // so pruning checks skip position 0.
    let mut k = 3;
    while !frontier.is_empty() && k <= cap {
        let members: HashSet<&[usize]> = frontier.iter().map(|(r, _)| r.as_slice()).collect();
        let mut next = Vec::new();
        for i in 0..frontier.len() {
            for j in i + 1..frontier.len() {
                let (left, _) = &frontier[i];
                let (right, _) = &frontier[j];
                if left[..k - 2] != right[..k - 2] {
                    break;
                }
                let mut candidate = left.clone();
                candidate.push(*right.last().unwrap());
                let mut subset = Vec::with_capacity(k - 1);
                let pruned = (1..k).any(|skip| {
                    subset.clear();
                    subset.extend(
                        candidate.iter().enumerate().filter(|(p, _)| *p != skip).map(|(_, &r)| r),
                    );
                    !members.contains(subset.as_slice())
                });
                if pruned {
                    continue;
                }
                let anchor_count = count_of_rank(candidate[0]);
                let count = count_support(db, &to_items(&candidate));
                if meets_anchor_mis(anchor_count, count) {
                    found.push((to_items(&candidate), count));
                    next.push((candidate, count));
                }
            }
        }
        frontier = next;
        k += 1;
    }

    Ok(FrequentItemsetSet::new(
        found.into_iter().map(|(items, c)| Itemset::new(items, c)).collect(),
        n,
    ))
}
