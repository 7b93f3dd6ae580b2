//! Context assignment for unseen documents.
//!
//! A query document is mined with the model's own parameters; its
//! features index into every context's score table, forming a matrix
//! whose row sums rank the contexts.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::corpus::{build_transactions, Document};
use crate::mining::{extract_features, mine, MiningError};
use crate::num::Real;
use crate::training::ContextModel;

#[derive(Debug, thiserror::Error)]
pub enum ClassifyError {
    #[error("no features extracted")]
    NoFeatures,
    #[error("model has no contexts")]
    EmptyModel,
    #[error(transparent)]
    Mining(#[from] MiningError),
}

/// The distinct features mined from a query document, sorted
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryFeatures {
    pub features: Vec<String>,
}

/// Scores of every query feature under every context: rows follow the
/// model's context order, columns the query feature order. An entry is
/// the trained score, or zero when the context never saw the feature.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextFeatureMatrix<R: Real> {
    pub contexts: Vec<String>,
    pub features: Vec<String>,
    pub values: Vec<Vec<R>>,
}

/// The winning context plus the full ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<R: Real> {
    pub best_context: String,
    /// Sorted by score descending, ties broken by context name.
    pub ranking: Vec<(String, R)>,
    /// True when every context scored zero; the winner is then purely
    /// the tie-break order.
    pub zero_confidence: bool,
    /// True when the top two scores are exactly equal.
    pub tied: bool,
}

/// Mines the document with the model's recorded parameters and returns
/// the extracted feature terms.
pub fn extract_query_features<R: Real>(
    doc: &Document,
    model: &ContextModel<R>,
) -> Result<QueryFeatures, ClassifyError> {
    let db = build_transactions(doc);
    if db.is_empty() {
        return Err(ClassifyError::NoFeatures);
    }
    let fis = mine(&db, &model.params)?;
    let features = extract_features(&fis, &db);
    if features.is_empty() {
        return Err(ClassifyError::NoFeatures);
    }
    Ok(QueryFeatures { features })
}

/// Looks every query feature up in every context table.
pub fn build_cfm<R: Real>(q: &QueryFeatures, model: &ContextModel<R>) -> ContextFeatureMatrix<R> {
    let values = model
        .tables
        .iter()
        .map(|table| {
            q.features
                .iter()
                .map(|f| table.score_of(f).unwrap_or_else(R::zero))
                .collect()
        })
        .collect();
    ContextFeatureMatrix {
        contexts: model.contexts.clone(),
        features: q.features.clone(),
        values,
    }
}

/// Row sums of the matrix, keyed by context.
pub fn context_scores<R: Real>(cfm: &ContextFeatureMatrix<R>) -> BTreeMap<String, R> {
    cfm.contexts
        .iter()
        .zip(&cfm.values)
        .map(|(c, row)| (c.clone(), row.iter().fold(R::zero(), |acc, &v| acc + v)))
        .collect()
}

/// Ranks contexts for one document: feature extraction, matrix lookup,
/// row sums, then argmax with a lexicographic tie-break.
pub fn predict<R: Real>(doc: &Document, model: &ContextModel<R>) -> Result<Prediction<R>, ClassifyError> {
    if model.contexts.is_empty() {
        return Err(ClassifyError::EmptyModel);
    }
    let q = extract_query_features(doc, model)?;
    let cfm = build_cfm(&q, model);
    let scores = context_scores(&cfm);
    let mut ranking: Vec<(String, R)> = scores.into_iter().collect();
    ranking.sort_by(|a, b| {
        b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then_with(|| a.0.cmp(&b.0))
    });
    let best = &ranking[0];
    let zero_confidence = best.1 == R::zero();
    let tied = ranking.len() > 1 && ranking[1].1 == best.1;
    Ok(Prediction {
        best_context: best.0.clone(),
        ranking: ranking.clone(),
        zero_confidence,
        tied,
    })
}
