//! Corpus utilities: JSONL loading, QA-pair construction, seeded
//! splits, and descriptive statistics.
//!
//! Corpus files are JSON Lines, one record per line:
//! `{"id": ..., "description": ..., "actions": ..., "reaction": ...|null}`.
//! Prediction files pair ids with generated text:
//! `{"id": ..., "prediction": ...}`.

mod templates;

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::schema::{self, Dialect};

pub use templates::default_templates;

/// One corpus entry: a free-text procedure description, its structured
/// action sequence, and optionally the underlying reaction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub description: String,
    pub actions: String,
    #[serde(default)]
    pub reaction: Option<String>,
}

/// One model output keyed by corpus id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    pub prediction: String,
}

/// A line the corpus loader could not accept, with its 1-based line
/// number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MalformedLine {
    pub line: usize,
    pub message: String,
}

/// Result of [`load_corpus`]: accepted records plus every rejected line.
#[derive(Debug, Clone)]
pub struct LoadedCorpus {
    pub records: Vec<CorpusRecord>,
    pub malformed: Vec<MalformedLine>,
}

impl LoadedCorpus {
    /// Demand a fully clean corpus: the records if nothing was
    /// malformed, otherwise the first malformed line as an error.
    pub fn strict(self) -> Result<Vec<CorpusRecord>, DataError> {
        match self.malformed.into_iter().next() {
            None => Ok(self.records),
            Some(m) => Err(DataError::MalformedLine { line: m.line, message: m.message }),
        }
    }
}

/// Errors raised by corpus loading and transformation.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed line {line}: {message}")]
    MalformedLine { line: usize, message: String },
    #[error("record `{id}` is missing required field `{field}`")]
    MissingField { id: String, field: String },
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("no templates supplied")]
    EmptyTemplates,
    #[error("invalid split ratios: {detail}")]
    InvalidRatios { detail: String },
}

/// Load a JSONL corpus.
///
/// Malformed lines (bad JSON, missing or empty `id`/`description`,
/// duplicate ids) are collected with their line numbers rather than
/// aborting the load; blank lines are skipped. With `strip_yield` set,
/// yield-reporting actions are removed from each parseable `actions`
/// text at load time (unparseable texts are left untouched and surface
/// later through validity checks).
pub fn load_corpus(
    path: &Path,
    dialect: Dialect,
    strip_yield: bool,
) -> Result<LoadedCorpus, DataError> {
    let reader = BufReader::new(File::open(path)?);
    let mut records = Vec::new();
    let mut malformed = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = index + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut record: CorpusRecord = match serde_json::from_str(&line) {
            Ok(record) => record,
            Err(err) => {
                malformed.push(MalformedLine { line: lineno, message: err.to_string() });
                continue;
            }
        };
        let problem = if record.id.trim().is_empty() {
            Some("empty id".to_string())
        } else if record.description.trim().is_empty() {
            Some("empty description".to_string())
        } else if !seen.insert(record.id.clone()) {
            Some(format!("duplicate id `{}`", record.id))
        } else {
            None
        };
        if let Some(message) = problem {
            malformed.push(MalformedLine { line: lineno, message });
            continue;
        }
        if strip_yield {
            if let Ok(seq) = schema::parse(&record.actions, dialect) {
                record.actions = schema::remove_yield_actions(&seq).source_text;
            }
        }
        records.push(record);
    }
    Ok(LoadedCorpus { records, malformed })
}

/// Load a JSONL prediction file. Prediction files are machine-written,
/// so any malformed line is an error rather than a warning.
pub fn load_predictions(path: &Path) -> Result<Vec<Prediction>, DataError> {
    let reader = BufReader::new(File::open(path)?);
    let mut predictions = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = index + 1;
        if line.trim().is_empty() {
            continue;
        }
        let prediction: Prediction = serde_json::from_str(&line)
            .map_err(|err| DataError::MalformedLine { line: lineno, message: err.to_string() })?;
        if prediction.id.trim().is_empty() {
            return Err(DataError::MalformedLine {
                line: lineno,
                message: "empty id".to_string(),
            });
        }
        predictions.push(prediction);
    }
    Ok(predictions)
}

/// Task direction for QA-pair construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Description to actions.
    D2A,
    /// Reaction to description.
    R2D,
    /// Actions to description.
    A2D,
}

impl Direction {
    /// Placeholder a template may embed to inline the source text.
    pub fn source_slot(self) -> &'static str {
        match self {
            Direction::D2A => "{description}",
            Direction::R2D => "{reaction}",
            Direction::A2D => "{actions}",
        }
    }
}

/// One instruction-tuning example. The model input is exactly
/// `instruction` followed by `source`; `target` is the expected output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QAPair {
    pub instruction: String,
    pub source: String,
    pub target: String,
    pub template_id: usize,
}

/// Build one QA pair per record, choosing the template for each record
/// uniformly at random from `templates` under a seeded generator.
///
/// Plain templates become the `instruction` verbatim, with the record's
/// source field as `source`. A template containing the direction's
/// source slot (e.g. `{description}`) absorbs the source text into the
/// instruction instead, leaving `source` empty — either way the
/// composed model input is identical.
pub fn build_qa(
    records: &[CorpusRecord],
    templates: &[String],
    direction: Direction,
    seed: u64,
) -> Result<Vec<QAPair>, DataError> {
    if templates.is_empty() {
        return Err(DataError::EmptyTemplates);
    }
    let slot = direction.source_slot();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    records
        .iter()
        .map(|record| {
            let template_id = rng.gen_range(0..templates.len());
            let source_text = match direction {
                Direction::D2A => record.description.clone(),
                Direction::A2D => record.actions.clone(),
                Direction::R2D => record.reaction.clone().ok_or_else(|| {
                    DataError::MissingField {
                        id: record.id.clone(),
                        field: "reaction".to_string(),
                    }
                })?,
            };
            let template = &templates[template_id];
            let (instruction, source) = if template.contains(slot) {
                (template.replace(slot, &source_text), String::new())
            } else {
                (template.clone(), source_text)
            };
            let target = match direction {
                Direction::D2A => record.actions.clone(),
                Direction::R2D | Direction::A2D => record.description.clone(),
            };
            Ok(QAPair { instruction, source, target, template_id })
        })
        .collect()
}

/// Partition sizes for `n` records under `ratios` (must be positive and
/// sum to 1 within 1e-9). Cumulative rounding keeps every part within
/// one record of its exact share.
pub fn split_sizes(
    n: usize,
    ratios: (f64, f64, f64),
) -> Result<(usize, usize, usize), DataError> {
    let (a, b, c) = ratios;
    for r in [a, b, c] {
        if !r.is_finite() || r <= 0.0 {
            return Err(DataError::InvalidRatios {
                detail: format!("ratios must be positive, got {a}:{b}:{c}"),
            });
        }
    }
    if (a + b + c - 1.0).abs() > 1e-9 {
        return Err(DataError::InvalidRatios {
            detail: format!("ratios must sum to 1, got {}", a + b + c),
        });
    }
    let first = (n as f64 * a).round() as usize;
    let second = (n as f64 * (a + b)).round() as usize;
    let first = first.min(n);
    let second = second.clamp(first, n);
    Ok((first, second - first, n - second))
}

/// Split a corpus into train/validation/test parts: seeded shuffle,
/// then contiguous cuts at the [`split_sizes`] boundaries. The same
/// seed always reproduces the same partition.
pub fn split(
    records: &[CorpusRecord],
    ratios: (f64, f64, f64),
    seed: u64,
) -> Result<(Vec<CorpusRecord>, Vec<CorpusRecord>, Vec<CorpusRecord>), DataError> {
    if records.is_empty() {
        return Err(DataError::EmptyCorpus);
    }
    let (n_train, n_valid, _) = split_sizes(records.len(), ratios)?;
    let mut shuffled: Vec<CorpusRecord> = records.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    shuffled.shuffle(&mut rng);
    let test = shuffled.split_off(n_train + n_valid);
    let valid = shuffled.split_off(n_train);
    Ok((shuffled, valid, test))
}

/// Bucket width (in whitespace tokens) of the description-length
/// histogram.
pub const TOKEN_BUCKET_WIDTH: usize = 50;

/// Descriptive statistics over a corpus.
///
/// `action_count_hist` maps action counts to record counts and covers
/// every record: a record whose `actions` text does not parse counts as
/// zero actions and increments `parse_failures`. `token_count_hist`
/// buckets description lengths by [`TOKEN_BUCKET_WIDTH`], keyed by
/// bucket lower bound. `type_freq` is each action type's share of all
/// parsed actions and sums to 1 when any action parsed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub record_count: usize,
    pub action_count_hist: BTreeMap<usize, u64>,
    pub token_count_hist: BTreeMap<usize, u64>,
    pub type_freq: BTreeMap<String, f64>,
    pub parse_failures: usize,
}

/// Compute corpus statistics. Per-record parse failures are counted,
/// never fatal.
pub fn stats(records: &[CorpusRecord], dialect: Dialect) -> CorpusStats {
    let mut action_count_hist: BTreeMap<usize, u64> = BTreeMap::new();
    let mut token_count_hist: BTreeMap<usize, u64> = BTreeMap::new();
    let mut type_counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut parse_failures = 0usize;
    let mut total_actions = 0u64;
    for record in records {
        let tokens = record.description.split_whitespace().count();
        let bucket = (tokens / TOKEN_BUCKET_WIDTH) * TOKEN_BUCKET_WIDTH;
        *token_count_hist.entry(bucket).or_insert(0) += 1;
        let action_count = match schema::parse(&record.actions, dialect) {
            Ok(seq) => {
                for action in &seq.actions {
                    *type_counts.entry(action.action_type.name.clone()).or_insert(0) += 1;
                }
                total_actions += seq.actions.len() as u64;
                seq.actions.len()
            }
            Err(_) => {
                parse_failures += 1;
                0
            }
        };
        *action_count_hist.entry(action_count).or_insert(0) += 1;
    }
    let type_freq = type_counts
        .into_iter()
        .map(|(name, count)| (name, count as f64 / total_actions as f64))
        .collect();
    CorpusStats {
        record_count: records.len(),
        action_count_hist,
        token_count_hist,
        type_freq,
        parse_failures,
    }
}
