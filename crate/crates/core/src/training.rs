//! Per-context model training.
//!
//! For every document: mine its frequent features, group them by
//! sentence frequency, weight each group by rank, then fold the weights
//! into a running per-feature mean across the context's documents.
//!
//! The fold is accumulated in exact rational arithmetic and converted
//! to the score scalar once per feature, so the resulting table (and
//! its serialized form) is identical under any document order.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::corpus::{build_transactions, Document, LabeledCorpus, TokenConfig};
use crate::mining::{extract_features, mine, singleton_counts, MiningError, MiningParams};
use crate::num::{ratio_to_f64, Real};

#[derive(Debug, thiserror::Error)]
pub enum TrainError {
    #[error("empty context")]
    EmptyContext,
    #[error("index out of range: group {index} of {groups}")]
    IndexOutOfRange { index: usize, groups: usize },
    #[error("weight {0} outside (0, 1]")]
    WeightOutOfRange(f64),
    #[error("unknown context label `{0}`")]
    UnknownLabel(String),
    #[error("context `{context}`: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<TrainError>,
    },
    #[error(transparent)]
    Mining(#[from] MiningError),
}

/// Features sharing one sentence frequency within a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyGroup {
    pub frequency: usize,
    /// Lexicographically sorted member features.
    pub features: Vec<String>,
    /// 0 for the highest frequency, increasing as frequency falls.
    pub index: usize,
}

/// A feature's running-mean weight and how many documents carried it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureScore<R: Real> {
    /// Always in (0, 1].
    pub score: R,
    pub doc_frequency: u32,
}

/// All scored features of one context.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureScoreTable<R: Real> {
    pub context: String,
    pub entries: BTreeMap<String, FeatureScore<R>>,
}

impl<R: Real> FeatureScoreTable<R> {
    pub fn score_of(&self, feature: &str) -> Option<R> {
        self.entries.get(feature).map(|e| e.score)
    }
}

/// The trained classifier: one score table per context, plus the
/// mining and tokenizer settings needed to process queries identically.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextModel<R: Real> {
    /// Sorted lexicographically; parallel to `tables`.
    pub contexts: Vec<String>,
    pub tables: Vec<FeatureScoreTable<R>>,
    pub params: MiningParams,
    pub token: TokenConfig,
}

impl<R: Real> ContextModel<R> {
    pub fn table(&self, context: &str) -> Option<&FeatureScoreTable<R>> {
        let idx = self.contexts.binary_search_by(|c| c.as_str().cmp(context)).ok()?;
        self.tables.get(idx)
    }
}

/// Mines one document and reports each extracted feature with its
/// sentence frequency (number of transactions containing it).
///
/// A document with zero usable sentences yields an empty map.
pub fn document_features(
    doc: &Document,
    params: &MiningParams,
) -> Result<BTreeMap<String, usize>, TrainError> {
    let db = build_transactions(doc);
    if db.is_empty() {
        return Ok(BTreeMap::new());
    }
    let fis = mine(&db, params)?;
    let counts = singleton_counts(&db);
    let mut out = BTreeMap::new();
    for term in extract_features(&fis, &db) {
        let id = db.item_id(&term).expect("extracted feature is interned");
        out.insert(term, counts[id.index()]);
    }
    Ok(out)
}

/// Buckets features by distinct frequency, highest first; the group
/// index is its rank.
pub fn group_by_frequency(freqs: &BTreeMap<String, usize>) -> Vec<FrequencyGroup> {
    let mut by_freq: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (feature, &freq) in freqs {
        by_freq.entry(freq).or_default().push(feature.clone());
    }
    by_freq
        .into_iter()
        .rev()
        .enumerate()
        .map(|(index, (frequency, features))| FrequencyGroup { frequency, features, index })
        .collect()
}

/// Weight of a feature sitting in group `gamma` of `n` groups:
/// 1 - gamma/n, in (0, 1].
pub fn feature_weight<R: Real>(gamma: usize, n: usize) -> Result<R, TrainError> {
    if gamma >= n {
        return Err(TrainError::IndexOutOfRange { index: gamma, groups: n });
    }
    let g = R::from_usize(gamma).unwrap();
    let n = R::from_usize(n).unwrap();
    Ok(R::one() - g / n)
}

/// Folds one document's weight into a feature's running mean.
pub fn update_score<R: Real>(
    prev: Option<&FeatureScore<R>>,
    weight: R,
) -> Result<FeatureScore<R>, TrainError> {
    if !(weight > R::zero() && weight <= R::one()) {
        return Err(TrainError::WeightOutOfRange(weight.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(match prev {
        None => FeatureScore { score: weight, doc_frequency: 1 },
        Some(prev) => {
            let d_prev = R::from_u32(prev.doc_frequency).unwrap();
            let d_next = prev.doc_frequency + 1;
            FeatureScore {
                score: (prev.score * d_prev + weight) / R::from_u32(d_next).unwrap(),
                doc_frequency: d_next,
            }
        }
    })
}

/// Trains one context table over its documents (preprocessed, in any
/// order). Weight sums are kept as exact rationals; each feature's
/// score is the mean of its per-document weights.
pub fn train_context<'a, R, I>(
    docs: I,
    context: &str,
    params: &MiningParams,
) -> Result<FeatureScoreTable<R>, TrainError>
where
    R: Real,
    I: IntoIterator<Item = &'a Document>,
{
    let mut acc: HashMap<String, (BigRational, u32)> = HashMap::new();
    let mut n_docs = 0usize;
    for doc in docs {
        n_docs += 1;
        let freqs = document_features(doc, params)?;
        let groups = group_by_frequency(&freqs);
        let n = groups.len();
        for group in &groups {
            let weight =
                BigRational::new(BigInt::from(n - group.index), BigInt::from(n));
            for feature in &group.features {
                let entry = acc
                    .entry(feature.clone())
                    .or_insert_with(|| (BigRational::zero(), 0));
                entry.0 += &weight;
                entry.1 += 1;
            }
        }
    }
    if n_docs == 0 {
        return Err(TrainError::EmptyContext);
    }
    let entries = acc
        .into_iter()
        .map(|(feature, (sum, docs))| {
            let mean = sum / BigRational::from_integer(BigInt::from(docs));
            let score = R::from_f64(ratio_to_f64(&mean)).unwrap_or_else(R::one);
            (feature, FeatureScore { score, doc_frequency: docs })
        })
        .collect();
    Ok(FeatureScoreTable { context: context.to_string(), entries })
}

/// Trains a model over every context of a preprocessed corpus. The
/// token config is recorded in the model so classification tokenizes
/// queries the same way; it must be the config the corpus was
/// preprocessed with.
pub fn train_model<R: Real>(
    corpus: &LabeledCorpus,
    params: &MiningParams,
    token: &TokenConfig,
) -> Result<ContextModel<R>, TrainError> {
    params.validate().map_err(TrainError::Mining)?;
    let mut contexts = corpus.contexts.clone();
    contexts.sort_unstable();
    contexts.dedup();
    for (_, label) in &corpus.documents {
        if contexts.binary_search(label).is_err() {
            return Err(TrainError::UnknownLabel(label.clone()));
        }
    }
    let mut tables = Vec::with_capacity(contexts.len());
    for context in &contexts {
        let table = train_context(corpus.documents_for(context), context, params)
            .map_err(|e| TrainError::Context { context: context.clone(), source: Box::new(e) })?;
        tables.push(table);
    }
    Ok(ContextModel { contexts, tables, params: params.clone(), token: token.clone() })
}
