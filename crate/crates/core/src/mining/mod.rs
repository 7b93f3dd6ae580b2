//! Frequent-itemset mining over sentence transactions.
//!
//! Four algorithms share one output contract: [`apriori`] and
//! [`diffset_mine`] return exactly the itemsets meeting `min_support`,
//! [`rsapriori`] additionally keeps rare itemsets with high relative
//! support, and [`msapriori`] applies a per-item minimum support. All
//! threshold comparisons are exact rational arithmetic; see
//! [`crate::num::Fraction`].

mod diffset;
mod levelwise;

pub use diffset::diffset_mine;
pub use levelwise::{apriori, msapriori, rsapriori};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::corpus::{ItemId, TransactionDatabase};
use crate::num::{Fraction, Real};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MiningError {
    #[error("empty database")]
    EmptyDatabase,
    #[error("empty itemset")]
    EmptyItemset,
    #[error("item id {0} not in the database vocabulary")]
    ItemOutOfRange(u32),
    #[error("antecedent and consequent overlap")]
    NotDisjoint,
    #[error("zero antecedent support")]
    ZeroAntecedentSupport,
    #[error("vocabulary of {0} items is too large for exhaustive mining (max 20)")]
    VocabularyTooLarge(usize),
    #[error("invalid mining parameters: {0}")]
    InvalidParams(String),
}

/// Mining algorithm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Algorithm {
    #[default]
    Apriori,
    MsApriori,
    RsApriori,
    Diffset,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] =
        [Algorithm::Apriori, Algorithm::MsApriori, Algorithm::RsApriori, Algorithm::Diffset];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Apriori => "apriori",
            Algorithm::MsApriori => "msapriori",
            Algorithm::RsApriori => "rsapriori",
            Algorithm::Diffset => "diffset",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = MiningError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "apriori" => Ok(Algorithm::Apriori),
            "msapriori" => Ok(Algorithm::MsApriori),
            "rsapriori" => Ok(Algorithm::RsApriori),
            "diffset" => Ok(Algorithm::Diffset),
            other => Err(MiningError::InvalidParams(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Thresholds and algorithm selection for one mining run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiningParams {
    pub algorithm: Algorithm,
    pub min_support: Fraction,
    /// Lower support bound for rare itemsets (rsapriori only).
    pub rare_min_support: Fraction,
    /// Minimum supp(X) / min-singleton-supp for rare itemsets.
    pub relative_support: Fraction,
    /// Per-item minimum support factor (msapriori only).
    pub mis_beta: Fraction,
    /// Lower bound on any per-item minimum support (msapriori only).
    pub mis_floor: Fraction,
    pub max_itemset_size: Option<usize>,
}

impl Default for MiningParams {
    fn default() -> Self {
        MiningParams {
            algorithm: Algorithm::Apriori,
            min_support: Fraction::constant(1, 20),
            rare_min_support: Fraction::constant(3, 100),
            relative_support: Fraction::constant(3, 5),
            mis_beta: Fraction::constant(1, 2),
            mis_floor: Fraction::constant(3, 100),
            max_itemset_size: None,
        }
    }
}

impl MiningParams {
    pub fn validate(&self) -> Result<(), MiningError> {
        let fail = |msg: String| Err(MiningError::InvalidParams(msg));
        if self.min_support.is_zero() || self.min_support > Fraction::one() {
            return fail(format!("min_support {} outside (0, 1]", self.min_support));
        }
        if self.rare_min_support.is_zero() || self.rare_min_support > self.min_support {
            return fail(format!(
                "rare_min_support {} outside (0, min_support {}]",
                self.rare_min_support, self.min_support
            ));
        }
        if self.relative_support.is_zero() || self.relative_support > Fraction::one() {
            return fail(format!("relative_support {} outside (0, 1]", self.relative_support));
        }
        if self.mis_beta > Fraction::one() {
            return fail(format!("mis_beta {} exceeds 1", self.mis_beta));
        }
        if self.mis_floor > self.min_support {
            return fail(format!(
                "mis_floor {} exceeds min_support {}",
                self.mis_floor, self.min_support
            ));
        }
        if self.max_itemset_size == Some(0) {
            return fail("max_itemset_size must be at least 1".to_string());
        }
        Ok(())
    }
}

/// A sorted set of items with its transaction count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Itemset {
    /// Strictly ascending item ids.
    pub items: Vec<ItemId>,
    pub support_count: usize,
}

impl Itemset {
    pub fn new(items: Vec<ItemId>, support_count: usize) -> Self {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        Itemset { items, support_count }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Mining result in canonical order: size ascending, then items
/// lexicographic by id. Two results compare equal iff they contain the
/// same itemsets with the same counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequentItemsetSet {
    itemsets: Vec<Itemset>,
    db_size: usize,
}

impl FrequentItemsetSet {
    pub fn new(mut itemsets: Vec<Itemset>, db_size: usize) -> Self {
        itemsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.items.cmp(&b.items)));
        debug_assert!(itemsets.windows(2).all(|w| w[0].items != w[1].items));
        debug_assert!(itemsets.iter().all(|s| s.support_count <= db_size));
        FrequentItemsetSet { itemsets, db_size }
    }

    pub fn itemsets(&self) -> &[Itemset] {
        &self.itemsets
    }

    pub fn db_size(&self) -> usize {
        self.db_size
    }

    pub fn len(&self) -> usize {
        self.itemsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.itemsets.is_empty()
    }

    pub fn support_count_of(&self, items: &[ItemId]) -> Option<usize> {
        self.itemsets
            .iter()
            .find(|s| s.items == items)
            .map(|s| s.support_count)
    }

    pub fn contains(&self, items: &[ItemId]) -> bool {
        self.support_count_of(items).is_some()
    }
}

/// An implication between two disjoint itemsets.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationRule<R: Real> {
    pub antecedent: Vec<ItemId>,
    pub consequent: Vec<ItemId>,
    pub support: R,
    pub confidence: R,
}

/// True when every element of `needles` occurs in `haystack`; both
/// slices must be sorted ascending.
pub(crate) fn is_subset(needles: &[ItemId], haystack: &[ItemId]) -> bool {
    let mut hay = haystack.iter();
    'outer: for n in needles {
        for h in hay.by_ref() {
            match h.cmp(n) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// Transactions containing every item of `items` (sorted ascending).
pub(crate) fn count_support(db: &TransactionDatabase, items: &[ItemId]) -> usize {
    db.transactions().iter().filter(|t| is_subset(items, t.items())).count()
}

/// Per-item transaction counts, indexed by item id.
pub(crate) fn singleton_counts(db: &TransactionDatabase) -> Vec<usize> {
    let mut counts = vec![0usize; db.vocab_size()];
    for t in db.transactions() {
        for &i in t.items() {
            counts[i.index()] += 1;
        }
    }
    counts
}

fn checked_items(db: &TransactionDatabase, items: &[ItemId]) -> Result<Vec<ItemId>, MiningError> {
    if items.is_empty() {
        return Err(MiningError::EmptyItemset);
    }
    if let Some(bad) = items.iter().find(|i| i.index() >= db.vocab_size()) {
        return Err(MiningError::ItemOutOfRange(bad.0));
    }
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted)
}

/// Fraction of transactions containing all of `items`.
pub fn support<R: Real>(db: &TransactionDatabase, items: &[ItemId]) -> Result<R, MiningError> {
    if db.is_empty() {
        return Err(MiningError::EmptyDatabase);
    }
    let items = checked_items(db, items)?;
    let count = count_support(db, &items);
    Ok(R::from_usize(count).unwrap() / R::from_usize(db.len()).unwrap())
}

/// supp(x ∪ y) / supp(x) for disjoint nonempty x, y.
pub fn confidence<R: Real>(
    db: &TransactionDatabase,
    x: &[ItemId],
    y: &[ItemId],
) -> Result<R, MiningError> {
    if db.is_empty() {
        return Err(MiningError::EmptyDatabase);
    }
    let x = checked_items(db, x)?;
    let y = checked_items(db, y)?;
    if x.iter().any(|i| y.binary_search(i).is_ok()) {
        return Err(MiningError::NotDisjoint);
    }
    let mut union = x.clone();
    union.extend_from_slice(&y);
    union.sort_unstable();
    let count_x = count_support(db, &x);
    if count_x == 0 {
        return Err(MiningError::ZeroAntecedentSupport);
    }
    let count_xy = count_support(db, &union);
    Ok(R::from_usize(count_xy).unwrap() / R::from_usize(count_x).unwrap())
}

/// Dispatches to the algorithm selected in `params`.
pub fn mine(
    db: &TransactionDatabase,
    params: &MiningParams,
) -> Result<FrequentItemsetSet, MiningError> {
    match params.algorithm {
        Algorithm::Apriori => apriori(db, params),
        Algorithm::MsApriori => msapriori(db, params),
        Algorithm::RsApriori => rsapriori(db, params),
        Algorithm::Diffset => diffset_mine(db, params),
    }
}

/// Emits every rule A ⇒ X∖A over frequent itemsets X of size ≥ 2 whose
/// confidence meets `min_confidence`. Confidence is compared exactly;
/// the stored support and confidence fields are float conversions.
pub fn generate_rules<R: Real>(
    fis: &FrequentItemsetSet,
    db: &TransactionDatabase,
    min_confidence: Fraction,
) -> Result<Vec<AssociationRule<R>>, MiningError> {
    let n = db.len();
    let mut rules = Vec::new();
    for itemset in fis.itemsets() {
        let k = itemset.len();
        if k < 2 {
            continue;
        }
        let count_x = itemset.support_count;
        // Masks enumerate nonempty proper subsets as antecedents.
        for mask in 1..(1u32 << k) - 1 {
            let mut antecedent = Vec::new();
            let mut consequent = Vec::new();
            for (pos, &item) in itemset.items.iter().enumerate() {
                if mask & (1 << pos) != 0 {
                    antecedent.push(item);
                } else {
                    consequent.push(item);
                }
            }
            let count_a = count_support(db, &antecedent);
            if count_a == 0 {
                return Err(MiningError::ZeroAntecedentSupport);
            }
            if min_confidence.scaled_le(count_a, count_x) {
                rules.push(AssociationRule {
                    antecedent,
                    consequent,
                    support: R::from_usize(count_x).unwrap() / R::from_usize(n).unwrap(),
                    confidence: R::from_usize(count_x).unwrap() / R::from_usize(count_a).unwrap(),
                });
            }
        }
    }
    Ok(rules)
}

/// Union of all items across the frequent itemsets, as terms, sorted
/// lexicographically.
pub fn extract_features(fis: &FrequentItemsetSet, db: &TransactionDatabase) -> Vec<String> {
    let ids: BTreeSet<ItemId> =
        fis.itemsets().iter().flat_map(|s| s.items.iter().copied()).collect();
    let mut terms: Vec<String> = ids.into_iter().map(|i| db.term(i).to_string()).collect();
    terms.sort_unstable();
    terms
}

/// Exhaustive mining oracle: enumerates every nonempty subset of the
/// vocabulary, counts its support, and applies `keep(items, count)`.
pub fn brute_force_mine(
    db: &TransactionDatabase,
    keep: impl Fn(&[ItemId], usize) -> bool,
) -> Result<FrequentItemsetSet, MiningError> {
    if db.is_empty() {
        return Err(MiningError::EmptyDatabase);
    }
    let v = db.vocab_size();
    if v > 20 {
        return Err(MiningError::VocabularyTooLarge(v));
    }
    let mut itemsets = Vec::new();
    for mask in 1u32..(1u32 << v) {
        let items: Vec<ItemId> =
            (0..v as u32).filter(|b| mask & (1 << b) != 0).map(ItemId).collect();
        let count = count_support(db, &items);
        if keep(&items, count) {
            itemsets.push(Itemset::new(items, count));
        }
    }
    Ok(FrequentItemsetSet::new(itemsets, db.len()))
}

#[cfg(test)]
pub(crate) fn db_from_sentences(sentences: &[&[&str]]) -> TransactionDatabase {
    let mut db = TransactionDatabase::new();
    for s in sentences {
        db.push_sentence(s.iter().copied());
    }
    db
}
