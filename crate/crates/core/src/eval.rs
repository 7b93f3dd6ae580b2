//! Precision, recall, and F-measure over a labeled test corpus.
//!
//! Single-label predictions are folded into a contexts × contexts
//! confusion matrix; per-category counts are one-vs-rest views of it.
//! Every 0/0 metric is defined as 0 so reports stay total.

use std::fmt::Write as _;

use crate::classify::{predict, ClassifyError};
use crate::corpus::LabeledCorpus;
use crate::num::Real;
use crate::training::ContextModel;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("unknown context label `{0}`")]
    UnknownLabel(String),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// One-vs-rest outcome counts for a single category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub true_positive: usize,
    pub false_positive: usize,
    pub false_negative: usize,
    pub true_negative: usize,
}

/// tp / (tp + fp), or 0 when nothing was predicted positive.
pub fn precision<R: Real>(tp: usize, fp: usize) -> R {
    if tp + fp == 0 {
        return R::zero();
    }
    R::from_usize(tp).unwrap() / R::from_usize(tp + fp).unwrap()
}

/// tp / (tp + fn), or 0 when the category has no positives.
pub fn recall<R: Real>(tp: usize, fn_count: usize) -> R {
    if tp + fn_count == 0 {
        return R::zero();
    }
    R::from_usize(tp).unwrap() / R::from_usize(tp + fn_count).unwrap()
}

/// Harmonic mean 2pr/(p+r), or 0 when both inputs are 0.
pub fn f_measure<R: Real>(p: R, r: R) -> R {
    if p + r == R::zero() {
        return R::zero();
    }
    let two = R::from_u8(2).unwrap();
    two * p * r / (p + r)
}

/// Metrics for one category of the report.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryReport<R: Real> {
    pub context: String,
    pub counts: ConfusionCounts,
    pub precision: R,
    pub recall: R,
    pub f_measure: R,
}

/// Full evaluation result; everything derives from `matrix`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport<R: Real> {
    pub contexts: Vec<String>,
    /// Row = true context, column = predicted context.
    pub matrix: Vec<Vec<usize>>,
    pub categories: Vec<CategoryReport<R>>,
    pub macro_precision: R,
    pub macro_recall: R,
    pub macro_f_measure: R,
    pub n_documents: usize,
}

impl<R: Real> EvalReport<R> {
    /// Derives every metric from a confusion matrix. Recomputing a
    /// report from its own matrix reproduces it exactly.
    pub fn from_matrix(contexts: Vec<String>, matrix: Vec<Vec<usize>>) -> Self {
        assert_eq!(matrix.len(), contexts.len());
        assert!(matrix.iter().all(|row| row.len() == contexts.len()));
        let n_documents: usize = matrix.iter().flatten().sum();
        let k = contexts.len();
        let mut categories = Vec::with_capacity(k);
        for i in 0..k {
            let tp = matrix[i][i];
            let fp: usize = (0..k).filter(|&j| j != i).map(|j| matrix[j][i]).sum();
            let fn_count: usize = (0..k).filter(|&j| j != i).map(|j| matrix[i][j]).sum();
            let counts = ConfusionCounts {
                true_positive: tp,
                false_positive: fp,
                false_negative: fn_count,
                true_negative: n_documents - tp - fp - fn_count,
            };
            let p = precision::<R>(tp, fp);
            let r = recall::<R>(tp, fn_count);
            categories.push(CategoryReport {
                context: contexts[i].clone(),
                counts,
                precision: p,
                recall: r,
                f_measure: f_measure(p, r),
            });
        }
        let mean = |get: fn(&CategoryReport<R>) -> R| {
            if categories.is_empty() {
                return R::zero();
            }
            categories.iter().map(get).fold(R::zero(), |a, v| a + v)
                / R::from_usize(categories.len()).unwrap()
        };
        EvalReport {
            macro_precision: mean(|c| c.precision),
            macro_recall: mean(|c| c.recall),
            macro_f_measure: mean(|c| c.f_measure),
            contexts,
            matrix,
            categories,
            n_documents,
        }
    }

    /// Aligned human-readable table.
    pub fn to_text_table(&self) -> String {
        let name_width = self
            .categories
            .iter()
            .map(|c| c.context.len())
            .chain(["category".len(), "macro".len()])
            .max()
            .unwrap_or(8);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<name_width$}  {:>9}  {:>9}  {:>9}",
            "category", "precision", "recall", "f-measure"
        );
        for c in &self.categories {
            let _ = writeln!(
                out,
                "{:<name_width$}  {:>9.4}  {:>9.4}  {:>9.4}",
                c.context,
                c.precision.to_f64().unwrap_or(f64::NAN),
                c.recall.to_f64().unwrap_or(f64::NAN),
                c.f_measure.to_f64().unwrap_or(f64::NAN),
            );
        }
        let _ = writeln!(
            out,
            "{:<name_width$}  {:>9.4}  {:>9.4}  {:>9.4}",
            "macro",
            self.macro_precision.to_f64().unwrap_or(f64::NAN),
            self.macro_recall.to_f64().unwrap_or(f64::NAN),
            self.macro_f_measure.to_f64().unwrap_or(f64::NAN),
        );
        let _ = writeln!(out, "documents: {}", self.n_documents);
        out
    }

    /// Machine-readable rows: category, precision, recall, f-measure,
    /// tab-separated with 4 decimal places; the last row is the macro
    /// average.
    pub fn to_delimited(&self) -> String {
        let mut out = String::new();
        for c in &self.categories {
            let _ = writeln!(
                out,
                "{}\t{:.4}\t{:.4}\t{:.4}",
                c.context,
                c.precision.to_f64().unwrap_or(f64::NAN),
                c.recall.to_f64().unwrap_or(f64::NAN),
                c.f_measure.to_f64().unwrap_or(f64::NAN),
            );
        }
        let _ = writeln!(
            out,
            "macro\t{:.4}\t{:.4}\t{:.4}",
            self.macro_precision.to_f64().unwrap_or(f64::NAN),
            self.macro_recall.to_f64().unwrap_or(f64::NAN),
            self.macro_f_measure.to_f64().unwrap_or(f64::NAN),
        );
        out
    }
}

/// Predicts every test document and tallies the confusion matrix over
/// the model's contexts. Documents yielding no extractable features
/// count as predictions of the model's first context, matching the
/// all-zero tie-break of [`predict`].
pub fn evaluate<R: Real>(
    model: &ContextModel<R>,
    test: &LabeledCorpus,
) -> Result<EvalReport<R>, EvalError> {
    let context_index = |name: &str| -> Result<usize, EvalError> {
        model
            .contexts
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| EvalError::UnknownLabel(name.to_string()))
    };
    for label in &test.contexts {
        context_index(label)?;
    }
    let k = model.contexts.len();
    let mut matrix = vec![vec![0usize; k]; k];
    for (doc, label) in &test.documents {
        let truth = context_index(label)?;
        let predicted = match predict(doc, model) {
            Ok(p) => context_index(&p.best_context)?,
            Err(ClassifyError::NoFeatures) => 0,
            Err(e) => return Err(e.into()),
        };
        matrix[truth][predicted] += 1;
    }
    Ok(EvalReport::from_matrix(model.contexts.clone(), matrix))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Document, LabeledCorpus, TokenConfig};
    use crate::mining::MiningParams;
    use crate::num::Fraction;
    use crate::training::train_model;

    #[test]
    fn precision_divides_tp_by_predicted_positives() {
        assert_eq!(precision::<f64>(7, 3), 0.7);
        assert_eq!(precision::<f64>(0, 0), 0.0);
        assert_eq!(precision::<f64>(5, 0), 1.0);
    }

    #[test]
    fn recall_divides_tp_by_actual_positives() {
        assert_eq!(recall::<f64>(7, 7), 0.5);
        assert_eq!(recall::<f64>(0, 4), 0.0);
        assert_eq!(recall::<f64>(11, 0), 1.0);
    }

    #[test]
    fn f_measure_matches_published_reuters_rows() {
        assert!((f_measure::<f64>(0.625, 0.5) - 0.5556).abs() < 1e-4);
        assert!((f_measure::<f64>(0.8462, 0.4889) - 0.6197).abs() < 1e-4);
    }

    #[test]
    fn f_measure_of_equal_inputs_is_the_input() {
        assert!((f_measure::<f64>(0.7795, 0.7795) - 0.7795).abs() < 1e-12);
    }

    #[test]
    fn f_measure_of_zeros_is_zero() {
        assert_eq!(f_measure::<f64>(0.0, 0.0), 0.0);
    }

    #[test]
    fn f_measure_is_symmetric() {
        for (p, r) in [(0.3, 0.9), (0.1, 0.2), (1.0, 0.5)] {
            assert_eq!(f_measure::<f64>(p, r), f_measure::<f64>(r, p));
        }
    }

    fn doc(id: &str, sentences: &[&[&str]]) -> Document {
        Document {
            id: id.into(),
            text: String::new(),
            sentences: sentences
                .iter()
                .map(|s| s.iter().map(|t| t.to_string()).collect())
                .collect(),
        }
    }

    fn loose_params() -> MiningParams {
        MiningParams {
            min_support: Fraction::new(1, 10).unwrap(),
            rare_min_support: Fraction::new(1, 10).unwrap(),
            mis_floor: Fraction::new(1, 10).unwrap(),
            ..MiningParams::default()
        }
    }

    fn separable_model_and_corpus() -> (ContextModel<f64>, LabeledCorpus) {
        let corpus = LabeledCorpus::from_documents(vec![
            (doc("a1", &[&["bow", "arrow"], &["bow"]]), "archery".into()),
            (doc("a2", &[&["arrow", "target"]]), "archery".into()),
            (doc("c1", &[&["king", "pawn"], &["pawn"]]), "chess".into()),
            (doc("c2", &[&["rook", "king"]]), "chess".into()),
        ])
        .unwrap();
        let model = train_model(&corpus, &loose_params(), &TokenConfig::default()).unwrap();
        (model, corpus)
    }

    #[test]
    fn perfect_model_scores_all_ones() {
        let (model, corpus) = separable_model_and_corpus();
        let report = evaluate(&model, &corpus).unwrap();
        for c in &report.categories {
            assert_eq!(c.precision, 1.0, "{}", c.context);
            assert_eq!(c.recall, 1.0, "{}", c.context);
            assert_eq!(c.f_measure, 1.0, "{}", c.context);
        }
        assert_eq!(report.macro_f_measure, 1.0);
        assert_eq!(report.n_documents, 4);
    }

    #[test]
    fn single_wrong_prediction_splits_into_fn_and_fp() {
        let report = EvalReport::<f64>::from_matrix(
            vec!["c".into(), "cprime".into()],
            vec![vec![0, 1], vec![0, 0]],
        );
        let c = &report.categories[0];
        assert_eq!(c.counts.false_negative, 1);
        assert_eq!(c.recall, 0.0);
        let cprime = &report.categories[1];
        assert_eq!(cprime.counts.false_positive, 1);
        assert_eq!(cprime.precision, 0.0);
    }

    #[test]
    fn featureless_documents_count_as_the_first_context() {
        let (model, _) = separable_model_and_corpus();
        let test = LabeledCorpus::from_documents(vec![
            (doc("empty", &[]), "chess".into()),
            (doc("foreign", &[&["zamboni", "rink"], &["zamboni"]]), "chess".into()),
        ])
        .unwrap();
        let report = evaluate(&model, &test).unwrap();
        // both land on "archery", the lexicographically first context
        assert_eq!(report.matrix[1][0], 2);
        assert_eq!(report.matrix[1][1], 0);
    }

    #[test]
    fn unknown_test_label_is_rejected() {
        let (model, _) = separable_model_and_corpus();
        let test = LabeledCorpus::from_documents(vec![(
            doc("g", &[&["putt"]]),
            "golf".into(),
        )])
        .unwrap();
        let err = evaluate(&model, &test).unwrap_err();
        assert!(matches!(err, EvalError::UnknownLabel(l) if l == "golf"));
    }

    #[test]
    fn report_recomputes_exactly_from_its_own_matrix() {
        let (model, corpus) = separable_model_and_corpus();
        let report = evaluate(&model, &corpus).unwrap();
        let again = EvalReport::<f64>::from_matrix(report.contexts.clone(), report.matrix.clone());
        assert_eq!(report, again);
    }

    #[test]
    fn counts_partition_the_documents() {
        let report = EvalReport::<f64>::from_matrix(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![3, 1, 0], vec![2, 4, 1], vec![0, 0, 5]],
        );
        let n = report.n_documents;
        assert_eq!(n, 16);
        let tp_sum: usize = report.categories.iter().map(|c| c.counts.true_positive).sum();
        let fp_sum: usize = report.categories.iter().map(|c| c.counts.false_positive).sum();
        assert_eq!(tp_sum, 12);
        assert_eq!(tp_sum + fp_sum, n);
        for c in &report.categories {
            let t = c.counts;
            assert_eq!(
                t.true_positive + t.false_positive + t.false_negative + t.true_negative,
                n
            );
        }
    }

    #[test]
    fn delimited_output_prints_four_decimals() {
        // interest row: tp=5, fp=3, fn=5 gives P=0.625, R=0.5
        let report = EvalReport::<f64>::from_matrix(
            vec!["interest".into(), "other".into()],
            vec![vec![5, 5], vec![3, 7]],
        );
        let text = report.to_delimited();
        assert!(text.contains("interest\t0.6250\t0.5000\t0.5556"), "{text}");
        assert!(text.lines().last().unwrap().starts_with("macro\t"));
    }

    #[test]
    fn text_table_aligns_and_totals() {
        let report = EvalReport::<f64>::from_matrix(
            vec!["archery".into(), "chess".into()],
            vec![vec![10, 0], vec![2, 8]],
        );
        let table = report.to_text_table();
        assert!(table.starts_with("category"));
        assert!(table.contains("documents: 20"));
        let header_cols = table.lines().next().unwrap();
        assert!(header_cols.contains("precision") && header_cols.contains("f-measure"));
    }
}
