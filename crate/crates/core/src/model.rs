//! Trained-model persistence.
//!
//! The file is line-oriented UTF-8: `!key<TAB>value` header lines in a
//! fixed order, then one `context<TAB>feature<TAB>score<TAB>docfreq`
//! record per line, sorted by (context, feature). Scores are printed in
//! shortest round-trip decimal form, so saving is byte-deterministic
//! and loading reproduces the model exactly. A sha256 of the record
//! section guards against silent corruption.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::corpus::TokenConfig;
use crate::mining::{Algorithm, MiningParams};
use crate::num::{Fraction, Real};
use crate::training::{ContextModel, FeatureScore, FeatureScoreTable};

pub const MODEL_VERSION: &str = "ctxcat-model-v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("invalid utf-8 at byte {offset}")]
    Utf8 { offset: usize },
    #[error("unsupported model version `{found}`")]
    Version { found: String },
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("checksum mismatch (expected {expected}, computed {computed})")]
    Checksum { expected: String, computed: String },
    #[error("duplicate record for `{context}`/`{feature}` at byte {offset}")]
    Duplicate { context: String, feature: String, offset: usize },
    #[error("record out of order at byte {offset}")]
    OutOfOrder { offset: usize },
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c.is_control())
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

/// Serializes a model to its canonical byte form. The same model
/// always produces identical bytes.
pub fn save_model<R: Real>(model: &ContextModel<R>) -> Result<String, ModelError> {
    if model.contexts.len() != model.tables.len() {
        return Err(ModelError::Invalid(format!(
            "{} contexts but {} tables",
            model.contexts.len(),
            model.tables.len()
        )));
    }
    if !model.contexts.windows(2).all(|w| w[0] < w[1]) {
        return Err(ModelError::Invalid("contexts not sorted".into()));
    }
    for (context, table) in model.contexts.iter().zip(&model.tables) {
        if !valid_name(context) {
            return Err(ModelError::Invalid(format!("bad context name `{context}`")));
        }
        if table.context != *context {
            return Err(ModelError::Invalid(format!(
                "table `{}` out of place under context `{context}`",
                table.context
            )));
        }
    }
    for w in &model.token.stopwords {
        if !valid_name(w) {
            return Err(ModelError::Invalid(format!("bad stopword `{w}`")));
        }
    }

    let mut body = String::new();
    let mut records = 0usize;
    for (context, table) in model.contexts.iter().zip(&model.tables) {
        for (feature, entry) in &table.entries {
            if !valid_name(feature) {
                return Err(ModelError::Invalid(format!("bad feature name `{feature}`")));
            }
            let score = entry.score.to_f64().unwrap_or(f64::NAN);
            if !(score > 0.0 && score <= 1.0) {
                return Err(ModelError::Invalid(format!(
                    "score {} for `{context}`/`{feature}` outside (0, 1]",
                    entry.score
                )));
            }
            if entry.doc_frequency == 0 {
                return Err(ModelError::Invalid(format!(
                    "zero doc frequency for `{context}`/`{feature}`"
                )));
            }
            let _ = writeln!(body, "{context}\t{feature}\t{}\t{}", entry.score, entry.doc_frequency);
            records += 1;
        }
    }

    let stopwords: Vec<&str> = model.token.stopwords.iter().map(String::as_str).collect();
    let max_size = match model.params.max_itemset_size {
        None => "none".to_string(),
        Some(k) => k.to_string(),
    };
    let mut out = String::new();
    let _ = writeln!(out, "!version\t{MODEL_VERSION}");
    let _ = writeln!(out, "!min_token_len\t{}", model.token.min_token_len);
    let _ = writeln!(out, "!stopwords\t{}", stopwords.join(" "));
    let _ = writeln!(out, "!algorithm\t{}", model.params.algorithm);
    let _ = writeln!(out, "!min_support\t{}", model.params.min_support);
    let _ = writeln!(out, "!rare_min_support\t{}", model.params.rare_min_support);
    let _ = writeln!(out, "!relative_support\t{}", model.params.relative_support);
    let _ = writeln!(out, "!mis_beta\t{}", model.params.mis_beta);
    let _ = writeln!(out, "!mis_floor\t{}", model.params.mis_floor);
    let _ = writeln!(out, "!max_itemset_size\t{max_size}");
    let _ = writeln!(out, "!contexts\t{}", model.contexts.join("\t"));
    let _ = writeln!(out, "!records\t{records}");
    let _ = writeln!(out, "!checksum\t{}", sha256_hex(body.as_bytes()));
    out.push_str(&body);
    Ok(out)
}

struct Lines<'a> {
    text: &'a str,
    offset: usize,
}

impl<'a> Lines<'a> {
    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        if self.offset >= self.text.len() {
            return None;
        }
        let start = self.offset;
        let rest = &self.text[start..];
        match rest.find('\n') {
            Some(i) => {
                self.offset = start + i + 1;
                Some((start, &rest[..i]))
            }
            None => {
                self.offset = self.text.len();
                Some((start, rest))
            }
        }
    }
}

fn header_value<'a>(
    lines: &mut Lines<'a>,
    key: &str,
) -> Result<(usize, &'a str), ModelError> {
    let (offset, line) = lines
        .next_line()
        .ok_or(ModelError::Parse { offset: usize::MAX, msg: format!("missing `!{key}` header") })
        .map_err(|e| match e {
            ModelError::Parse { msg, .. } => ModelError::Parse { offset: 0, msg },
            other => other,
        })?;
    let value = line
        .strip_prefix('!')
        .and_then(|l| l.strip_prefix(key))
        .and_then(|l| l.strip_prefix('\t'))
        .ok_or_else(|| ModelError::Parse {
            offset,
            msg: format!("expected `!{key}` header"),
        })?;
    Ok((offset, value))
}

fn parse_fraction(offset: usize, key: &str, value: &str) -> Result<Fraction, ModelError> {
    Fraction::parse(value).map_err(|_| ModelError::Parse {
        offset,
        msg: format!("bad {key} value `{value}`"),
    })
}

/// Parses model bytes, validating structure, ordering, value ranges,
/// and the body checksum.
pub fn load_model<R: Real>(bytes: &[u8]) -> Result<ContextModel<R>, ModelError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| ModelError::Utf8 { offset: e.valid_up_to() })?;
    let mut lines = Lines { text, offset: 0 };

    let (offset, version) = header_value(&mut lines, "version")?;
    let _ = offset;
    if version != MODEL_VERSION {
        return Err(ModelError::Version { found: version.to_string() });
    }

    let (offset, value) = header_value(&mut lines, "min_token_len")?;
    let min_token_len: usize = value.parse().map_err(|_| ModelError::Parse {
        offset,
        msg: format!("bad min_token_len `{value}`"),
    })?;

    let (_, value) = header_value(&mut lines, "stopwords")?;
    let stopwords: BTreeSet<String> = value.split_whitespace().map(str::to_string).collect();

    let (offset, value) = header_value(&mut lines, "algorithm")?;
    let algorithm: Algorithm = value.parse().map_err(|_| ModelError::Parse {
        offset,
        msg: format!("bad algorithm `{value}`"),
    })?;

    let (offset, value) = header_value(&mut lines, "min_support")?;
    let min_support = parse_fraction(offset, "min_support", value)?;
    let (offset, value) = header_value(&mut lines, "rare_min_support")?;
    let rare_min_support = parse_fraction(offset, "rare_min_support", value)?;
    let (offset, value) = header_value(&mut lines, "relative_support")?;
    let relative_support = parse_fraction(offset, "relative_support", value)?;
    let (offset, value) = header_value(&mut lines, "mis_beta")?;
    let mis_beta = parse_fraction(offset, "mis_beta", value)?;
    let (offset, value) = header_value(&mut lines, "mis_floor")?;
    let mis_floor = parse_fraction(offset, "mis_floor", value)?;

    let (offset, value) = header_value(&mut lines, "max_itemset_size")?;
    let max_itemset_size = if value == "none" {
        None
    } else {
        Some(value.parse::<usize>().map_err(|_| ModelError::Parse {
            offset,
            msg: format!("bad max_itemset_size `{value}`"),
        })?)
    };

    let (offset, value) = header_value(&mut lines, "contexts")?;
    let contexts: Vec<String> = value.split('\t').map(str::to_string).collect();
    if contexts.iter().any(|c| c.is_empty()) {
        return Err(ModelError::Parse { offset, msg: "empty context name".into() });
    }
    if !contexts.windows(2).all(|w| w[0] < w[1]) {
        return Err(ModelError::Parse { offset, msg: "contexts not sorted".into() });
    }

    let (offset, value) = header_value(&mut lines, "records")?;
    let records: usize = value.parse().map_err(|_| ModelError::Parse {
        offset,
        msg: format!("bad records count `{value}`"),
    })?;

    let (_, expected_checksum) = header_value(&mut lines, "checksum")?;
    let expected_checksum = expected_checksum.to_string();

    let body_offset = lines.offset;
    let mut tables: BTreeMap<&str, BTreeMap<String, FeatureScore<R>>> =
        contexts.iter().map(|c| (c.as_str(), BTreeMap::new())).collect();
    let mut previous: Option<(String, String)> = None;
    for _ in 0..records {
        let (offset, line) = lines.next_line().ok_or_else(|| ModelError::Parse {
            offset: text.len(),
            msg: format!("truncated body: expected {records} records"),
        })?;
        let mut fields = line.split('\t');
        let (context, feature, score, docfreq) = match (
            fields.next(),
            fields.next(),
            fields.next(),
            fields.next(),
            fields.next(),
        ) {
            (Some(c), Some(f), Some(s), Some(d), None) => (c, f, s, d),
            _ => {
                return Err(ModelError::Parse {
                    offset,
                    msg: "record needs exactly 4 tab-separated fields".into(),
                })
            }
        };
        if feature.is_empty() {
            return Err(ModelError::Parse { offset, msg: "empty feature name".into() });
        }
        if let Some(prev) = &previous {
            let key = (context, feature);
            match (prev.0.as_str(), prev.1.as_str()).cmp(&key) {
                std::cmp::Ordering::Less => {}
                std::cmp::Ordering::Equal => {
                    return Err(ModelError::Duplicate {
                        context: context.to_string(),
                        feature: feature.to_string(),
                        offset,
                    })
                }
                std::cmp::Ordering::Greater => return Err(ModelError::OutOfOrder { offset }),
            }
        }
        previous = Some((context.to_string(), feature.to_string()));
        let score: R = score.parse().map_err(|_| ModelError::Parse {
            offset,
            msg: format!("bad score `{score}`"),
        })?;
        let score_f = score.to_f64().unwrap_or(f64::NAN);
        if !(score_f > 0.0 && score_f <= 1.0) {
            return Err(ModelError::Parse {
                offset,
                msg: format!("score {score} outside (0, 1]"),
            });
        }
        let doc_frequency: u32 = docfreq.parse().map_err(|_| ModelError::Parse {
            offset,
            msg: format!("bad doc frequency `{docfreq}`"),
        })?;
        if doc_frequency == 0 {
            return Err(ModelError::Parse { offset, msg: "zero doc frequency".into() });
        }
        let table = tables.get_mut(context).ok_or_else(|| ModelError::Parse {
            offset,
            msg: format!("unknown context `{context}` in record"),
        })?;
        table.insert(feature.to_string(), FeatureScore { score, doc_frequency });
    }
    if let Some((offset, extra)) = lines.next_line() {
        if !extra.is_empty() || lines.next_line().is_some() {
            return Err(ModelError::Parse { offset, msg: "trailing data after records".into() });
        }
    }

    let computed = sha256_hex(&text.as_bytes()[body_offset..]);
    if computed != expected_checksum {
        return Err(ModelError::Checksum { expected: expected_checksum, computed });
    }

    let tables: Vec<FeatureScoreTable<R>> = contexts
        .iter()
        .map(|c| FeatureScoreTable {
            context: c.clone(),
            entries: tables.remove(c.as_str()).unwrap_or_default(),
        })
        .collect();
    Ok(ContextModel {
        contexts,
        tables,
        params: MiningParams {
            algorithm,
            min_support,
            rare_min_support,
            relative_support,
            mis_beta,
            mis_floor,
            max_itemset_size,
        },
        token: TokenConfig { min_token_len, stopwords },
    })
}
