//! Vertical mining with diffsets.
//!
//! Transactions are inverted into per-item tid lists once; below the
//! first level each extension stores only the difference against its
//! prefix class, so support falls out of subtraction instead of
//! intersection. Output is pinned to [`super::apriori`] by tests.

use super::{FrequentItemsetSet, Itemset, MiningError, MiningParams};
use crate::corpus::{ItemId, TransactionDatabase};

/// Elements of `a` not present in `b`; both sorted ascending.
fn difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let mut bi = b.iter().peekable();
    for &x in a {
        while let Some(&&y) = bi.peek() {
            if y < x {
                bi.next();
            } else {
                break;
            }
        }
        if bi.peek() != Some(&&x) {
            out.push(x);
        }
    }
    out
}

struct Extension {
    item: ItemId,
    diffset: Vec<u32>,
    support: usize,
}

fn grow(
    prefix: &[ItemId],
    class: &[Extension],
    n: usize,
    params: &MiningParams,
    cap: usize,
    out: &mut Vec<(Vec<ItemId>, usize)>,
) {
    // Members of `class` extend `prefix` by one item; joining two of
    // them yields prefix.len() + 2 items.
    if prefix.len() + 2 > cap {
        return;
    }
    for (idx, x) in class.iter().enumerate() {
        let mut with_x = prefix.to_vec();
        with_x.push(x.item);
        let mut subclass = Vec::new();
        for y in &class[idx + 1..] {
            let d = difference(&y.diffset, &x.diffset);
            let support = x.support - d.len();
            if params.min_support.is_met_by(support, n) {
                let mut items = with_x.clone();
                items.push(y.item);
                out.push((items, support));
                subclass.push(Extension { item: y.item, diffset: d, support });
            }
        }
        if !subclass.is_empty() {
            grow(&with_x, &subclass, n, params, cap, out);
        }
    }
}

/// Mines the same itemsets as [`super::apriori`] using vertical tid
/// lists and diffsets.
pub fn diffset_mine(
    db: &TransactionDatabase,
    params: &MiningParams,
) -> Result<FrequentItemsetSet, MiningError> {
    params.validate()?;
    if db.is_empty() {
        return Err(MiningError::EmptyDatabase);
    }
    let n = db.len();
    let cap = params.max_itemset_size.unwrap_or(usize::MAX);

    let mut tidsets: Vec<Vec<u32>> = vec![Vec::new(); db.vocab_size()];
    for (tid, t) in db.transactions().iter().enumerate() {
        for &i in t.items() {
            tidsets[i.index()].push(tid as u32);
        }
    }
    let frequent: Vec<(ItemId, &[u32])> = tidsets
        .iter()
        .enumerate()
        .filter(|(_, tids)| params.min_support.is_met_by(tids.len(), n))
        .map(|(i, tids)| (ItemId(i as u32), tids.as_slice()))
        .collect();

    let mut found: Vec<(Vec<ItemId>, usize)> =
        frequent.iter().map(|&(i, tids)| (vec![i], tids.len())).collect();

    if cap >= 2 {
        for (idx, &(xi, ti)) in frequent.iter().enumerate() {
            let prefix = [xi];
            let mut class = Vec::new();
            for &(xj, tj) in &frequent[idx + 1..] {
                // First level works on tidsets: d(xy) = t(x) - t(y).
                let d = difference(ti, tj);
                let support = ti.len() - d.len();
                if params.min_support.is_met_by(support, n) {
                    found.push((vec![xi, xj], support));
                    class.push(Extension { item: xj, diffset: d, support });
                }
            }
            if !class.is_empty() {
                grow(&prefix, &class, n, params, cap, &mut found);
            }
        }
    }

    Ok(FrequentItemsetSet::new(
        found.into_iter().map(|(items, c)| Itemset::new(items, c)).collect(),
        n,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mining::{apriori, db_from_sentences};
    use crate::num::Fraction;

    fn at_min_support(min: Fraction) -> MiningParams {
        MiningParams { min_support: min, ..MiningParams::default() }
    }

    #[test]
    fn difference_subtracts_sorted_lists() {
        assert_eq!(difference(&[1, 3, 5, 7], &[3, 4, 7]), vec![1, 5]);
        assert_eq!(difference(&[1, 2], &[]), vec![1, 2]);
        assert_eq!(difference(&[], &[1]), Vec::<u32>::new());
        assert_eq!(difference(&[2, 4], &[2, 4]), Vec::<u32>::new());
    }

    #[test]
    fn single_transaction_pair_has_empty_diffset() {
        let db = db_from_sentences(&[&["a", "b"]]);
        let fis = diffset_mine(&db, &at_min_support(Fraction::one())).unwrap();
        let pair: Vec<ItemId> = vec![ItemId(0), ItemId(1)];
        assert_eq!(fis.support_count_of(&pair), Some(1));
        assert_eq!(fis.len(), 3);
    }

    #[test]
    fn matches_apriori_on_the_four_transaction_example() {
        let db = db_from_sentences(&[&["a", "b", "c"], &["a", "b"], &["a", "c"], &["b"]]);
        let params = at_min_support(Fraction::new(1, 2).unwrap());
        assert_eq!(diffset_mine(&db, &params).unwrap(), apriori(&db, &params).unwrap());
        assert_eq!(diffset_mine(&db, &params).unwrap().len(), 5);
    }

    #[test]
    fn matches_apriori_on_a_database_with_deep_itemsets() {
        let db = db_from_sentences(&[
            &["a", "b", "c", "d"],
            &["a", "b", "c", "d", "e"],
            &["a", "b", "c"],
            &["a", "b", "d", "e"],
            &["b", "c", "e"],
            &["a", "c", "d"],
            &["f"],
            &["a", "b", "c", "d"],
        ]);
        for denom in [8, 4, 2] {
            let params = at_min_support(Fraction::new(1, denom).unwrap());
            assert_eq!(diffset_mine(&db, &params).unwrap(), apriori(&db, &params).unwrap());
        }
    }

    #[test]
    fn honors_itemset_size_cap() {
        let db = db_from_sentences(&[&["a", "b", "c", "d"], &["a", "b", "c", "d"]]);
        let params = MiningParams {
            min_support: Fraction::one(),
            max_itemset_size: Some(3),
            ..MiningParams::default()
        };
        let fis = diffset_mine(&db, &params).unwrap();
        assert!(fis.itemsets().iter().all(|s| s.len() <= 3));
        assert_eq!(fis, apriori(&db, &params).unwrap());
    }

    #[test]
    fn rejects_empty_database() {
        let db = TransactionDatabase::new();
        assert_eq!(
            diffset_mine(&db, &MiningParams::default()).unwrap_err(),
            MiningError::EmptyDatabase
        );
    }
}
