//! Context-aware text categorization built on frequent-itemset mining.
//!
//! The pipeline treats each sentence of a document as a transaction of
//! distinct terms, mines frequent itemsets per labeled context, scores
//! the mined features by how prominent they are in each document, and
//! classifies new text by summing per-context scores over the features
//! mined from the query itself.
//!
//! Modules follow the pipeline order:
//!
//! * [`corpus`]: segmentation, tokenization, transaction databases,
//!   labeled corpus loading.
//! * [`mining`]: apriori, two rare-item variants, and a
//!   diffset-based miner, plus association rules.
//! * [`training`]: frequency-rank weighting and per-context feature
//!   score tables.
//! * [`classify`]: query feature extraction, the context-feature
//!   matrix, and prediction.
//! * [`eval`]: confusion matrices and precision/recall/f-measure
//!   reports.
//! * [`model`]: deterministic model (de)serialization.
//!
//! Scoring arithmetic is generic over [`Real`] (any float type with
//! the usual conversions; `f32` and `f64` both work). Support
//! thresholds are exact rationals ([`Fraction`]), so mining decisions
//! never depend on float rounding. The `*F64` aliases fix the scalar
//! for callers that do not need the generality.

pub mod classify;
pub mod corpus;
pub mod eval;
pub mod mining;
pub mod model;
pub mod num;
pub mod training;

pub use classify::{
    build_cfm, context_scores, extract_query_features, predict, ClassifyError,
    ContextFeatureMatrix, Prediction, QueryFeatures,
};
pub use corpus::{
    build_cluster_transactions, build_transactions, load_labeled_corpus, parse_stopword_list,
    segment_sentences, tokenize, CorpusError, Document, ItemId, LabeledCorpus,
    SentenceTransaction, TokenConfig, TransactionDatabase,
};
pub use eval::{
    evaluate, f_measure, precision, recall, CategoryReport, ConfusionCounts, EvalError, EvalReport,
};
pub use mining::{
    brute_force_mine, confidence, extract_features, generate_rules, mine, support, Algorithm,
    AssociationRule, FrequentItemsetSet, Itemset, MiningError, MiningParams,
};
pub use model::{load_model, save_model, ModelError, MODEL_VERSION};
pub use num::{Fraction, FractionError, Real};
pub use training::{
    document_features, feature_weight, group_by_frequency, train_context, train_model,
    update_score, ContextModel, FeatureScore, FeatureScoreTable, FrequencyGroup, TrainError,
};

/// [`AssociationRule`] over `f64`.
pub type AssociationRuleF64 = AssociationRule<f64>;
/// [`ContextFeatureMatrix`] over `f64`.
pub type ContextFeatureMatrixF64 = ContextFeatureMatrix<f64>;
/// [`ContextModel`] over `f64`.
pub type ContextModelF64 = ContextModel<f64>;
/// [`EvalReport`] over `f64`.
pub type EvalReportF64 = EvalReport<f64>;
/// [`FeatureScore`] over `f64`.
pub type FeatureScoreF64 = FeatureScore<f64>;
/// [`FeatureScoreTable`] over `f64`.
pub type FeatureScoreTableF64 = FeatureScoreTable<f64>;
/// [`Prediction`] over `f64`.
pub type PredictionF64 = Prediction<f64>;
