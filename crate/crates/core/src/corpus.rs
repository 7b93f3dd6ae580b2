//! Document ingestion: sentence segmentation, tokenization, and the
//! transaction databases consumed by the mining layer.
//!
//! Each sentence becomes one transaction whose items are the distinct
//! surviving tokens, so downstream support counts are per-sentence
//! co-occurrence counts.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

const BUILTIN_STOPWORDS: &str = include_str!("../data/stopwords_en.txt");

fn builtin_stopwords() -> &'static BTreeSet<String> {
    static SET: OnceLock<BTreeSet<String>> = OnceLock::new();
    SET.get_or_init(|| parse_stopword_list(BUILTIN_STOPWORDS))
}

/// Parses a stopword list: whitespace-separated terms, `#` starts a
/// comment line. Splitting on whitespace keeps every stored stopword
/// free of spaces, which model serialization relies on.
pub fn parse_stopword_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .flat_map(str::split_whitespace)
        .map(|w| w.to_lowercase())
        .collect()
}

/// Tokenizer settings shared by training and classification.
///
/// A model stores its config so queries are tokenized exactly like the
/// corpus the model was trained on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenConfig {
    /// Tokens with fewer chars than this are dropped.
    pub min_token_len: usize,
    pub stopwords: BTreeSet<String>,
}

impl Default for TokenConfig {
    fn default() -> Self {
        TokenConfig { min_token_len: 2, stopwords: builtin_stopwords().clone() }
    }
}

impl TokenConfig {
    pub fn new(min_token_len: usize, stopwords: BTreeSet<String>) -> Self {
        TokenConfig { min_token_len, stopwords }
    }

    /// Keeps every token of length >= 2; useful for synthetic corpora.
    pub fn without_stopwords() -> Self {
        TokenConfig { min_token_len: 2, stopwords: BTreeSet::new() }
    }
}

/// Splits text into sentences on runs of `.`, `!`, `?`.
///
/// A trailing unterminated fragment counts as a sentence. Surrounding
/// whitespace is trimmed and empty fragments are dropped.
pub fn segment_sentences(text: &str) -> Vec<String> {
    text.split(['.', '!', '?'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

/// Lowercases, splits on non-alphanumeric boundaries, and filters by
/// length and stopword membership.
pub fn tokenize(sentence: &str, config: &TokenConfig) -> Vec<String> {
    sentence
        .to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .filter(|t| t.chars().count() >= config.min_token_len)
        .filter(|t| !config.stopwords.contains(*t))
        .map(str::to_string)
        .collect()
}

/// A single text document, optionally preprocessed into token lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
    /// One token list per sentence; empty until [`Document::preprocess`].
    pub sentences: Vec<Vec<String>>,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Document { id: id.into(), text: text.into(), sentences: Vec::new() }
    }

    /// Segments and tokenizes `text`; sentences with no surviving tokens
    /// are dropped.
    pub fn preprocess(&mut self, config: &TokenConfig) {
        self.sentences = segment_sentences(&self.text)
            .iter()
            .map(|s| tokenize(s, config))
            .filter(|tokens| !tokens.is_empty())
            .collect();
    }

    pub fn preprocessed(
        id: impl Into<String>,
        text: impl Into<String>,
        config: &TokenConfig,
    ) -> Self {
        let mut doc = Document::new(id, text);
        doc.preprocess(config);
        doc
    }
}

/// Dense vocabulary index of a term within one [`TransactionDatabase`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub u32);

impl ItemId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The distinct items of one sentence, stored in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceTransaction {
    items: Vec<ItemId>,
}

impl SentenceTransaction {
    fn from_sorted(items: Vec<ItemId>) -> Self {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        SentenceTransaction { items }
    }

    pub fn items(&self) -> &[ItemId] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.items.binary_search(&item).is_ok()
    }
}

/// An ordered multiset of transactions over a dense vocabulary.
///
/// Ids are assigned in first-appearance order, so identical input bytes
/// always produce an identical database.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransactionDatabase {
    vocabulary: Vec<String>,
    term_ids: HashMap<String, ItemId>,
    transactions: Vec<SentenceTransaction>,
}

impl TransactionDatabase {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of transactions.
    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn vocab_size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn transactions(&self) -> &[SentenceTransaction] {
        &self.transactions
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    /// Panics if `id` was not issued by this database.
    pub fn term(&self, id: ItemId) -> &str {
        &self.vocabulary[id.index()]
    }

    pub fn item_id(&self, term: &str) -> Option<ItemId> {
        self.term_ids.get(term).copied()
    }

    fn intern(&mut self, term: &str) -> ItemId {
        if let Some(&id) = self.term_ids.get(term) {
            return id;
        }
        let id = ItemId(self.vocabulary.len() as u32);
        self.vocabulary.push(term.to_string());
        self.term_ids.insert(term.to_string(), id);
        id
    }

    /// Adds one transaction; duplicate terms collapse and an empty token
    /// list is ignored entirely (the vocabulary only ever holds terms
    /// that appear in at least one stored transaction).
    pub fn push_sentence<I, S>(&mut self, tokens: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut items: Vec<ItemId> =
            tokens.into_iter().map(|t| self.intern(t.as_ref())).collect();
        if items.is_empty() {
            return;
        }
        items.sort_unstable();
        items.dedup();
        self.transactions.push(SentenceTransaction::from_sorted(items));
    }
}

/// Builds the per-document database: one transaction per preprocessed
/// sentence.
pub fn build_transactions(doc: &Document) -> TransactionDatabase {
    let mut db = TransactionDatabase::new();
    for sentence in &doc.sentences {
        db.push_sentence(sentence);
    }
    db
}

/// Builds a union database over several documents with a shared
/// vocabulary; transaction order is document order, then sentence order.
pub fn build_cluster_transactions<'a, I>(docs: I) -> TransactionDatabase
where
    I: IntoIterator<Item = &'a Document>,
{
    let mut db = TransactionDatabase::new();
    for doc in docs {
        for sentence in &doc.sentences {
            db.push_sentence(sentence);
        }
    }
    db
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("corpus root not found: {0}")]
    RootNotFound(PathBuf),
    #[error("no context directories under {0}")]
    NoContexts(PathBuf),
    #[error("empty context: {0}")]
    EmptyContext(String),
    #[error("unreadable file {path}")]
    Unreadable {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown context label `{0}`")]
    UnknownLabel(String),
    #[error("corpus has no documents")]
    NoDocuments,
}

/// A set of documents, each labeled with exactly one context.
#[derive(Debug, Clone, Default)]
pub struct LabeledCorpus {
    /// Sorted, deduplicated context names.
    pub contexts: Vec<String>,
    pub documents: Vec<(Document, String)>,
}

impl LabeledCorpus {
    /// Builds a corpus from in-memory documents; contexts are derived
    /// from the labels, sorted lexicographically.
    pub fn from_documents(documents: Vec<(Document, String)>) -> Result<Self, CorpusError> {
        if documents.is_empty() {
            return Err(CorpusError::NoDocuments);
        }
        let contexts: BTreeSet<&String> = documents.iter().map(|(_, c)| c).collect();
        Ok(LabeledCorpus {
            contexts: contexts.into_iter().cloned().collect(),
            documents,
        })
    }

    pub fn preprocess(&mut self, config: &TokenConfig) {
        for (doc, _) in &mut self.documents {
            doc.preprocess(config);
        }
    }

    pub fn documents_for<'a>(&'a self, context: &'a str) -> impl Iterator<Item = &'a Document> {
        self.documents.iter().filter(move |(_, c)| c == context).map(|(d, _)| d)
    }
}

/// Loads `<root>/<context>/<file>` into a labeled corpus.
///
/// Context names are the subdirectory names, sorted; document ids are
/// `<context>/<filename>`. Documents are returned raw; callers decide
/// when and how to preprocess.
pub fn load_labeled_corpus(root: &Path) -> Result<LabeledCorpus, CorpusError> {
    if !root.is_dir() {
        return Err(CorpusError::RootNotFound(root.to_path_buf()));
    }
    let read_dir = |p: &Path| -> Result<Vec<PathBuf>, CorpusError> {
        let entries = fs::read_dir(p)
            .map_err(|source| CorpusError::Unreadable { path: p.to_path_buf(), source })?;
        let mut paths = Vec::new();
        for entry in entries {
            let entry = entry
                .map_err(|source| CorpusError::Unreadable { path: p.to_path_buf(), source })?;
            paths.push(entry.path());
        }
        paths.sort();
        Ok(paths)
    };

    let context_dirs: Vec<PathBuf> =
        read_dir(root)?.into_iter().filter(|p| p.is_dir()).collect();
    if context_dirs.is_empty() {
        return Err(CorpusError::NoContexts(root.to_path_buf()));
    }

    let mut contexts = Vec::new();
    let mut documents = Vec::new();
    for dir in context_dirs {
        let context = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let files: Vec<PathBuf> = read_dir(&dir)?.into_iter().filter(|p| p.is_file()).collect();
        if files.is_empty() {
            return Err(CorpusError::EmptyContext(context));
        }
        for file in files {
            let text = fs::read_to_string(&file)
                .map_err(|source| CorpusError::Unreadable { path: file.clone(), source })?;
            let name = file.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            documents.push((Document::new(format!("{context}/{name}"), text), context.clone()));
        }
        contexts.push(context);
    }
    Ok(LabeledCorpus { contexts, documents })
}
