//! Round-trip experiment over a directory of portals.

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use super::metrics::{bleu3_detail, rouge, tokenize, Bleu, Rouge};
use crate::gf::Grammar;
use crate::ingest::{parse_conllu, IngestError, SentenceFacts};
use crate::pipeline::{encode, regenerate, PipelineError};
use crate::exporter::merge;

pub const SENTENCES_FILE: &str = "sentences.tsv";
pub const PARSES_FILE: &str = "parses.conllu";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: IngestError,
    },
    #[error("{path}: {source}")]
    Table {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path} line {line}: expected id<TAB>sentence")]
    Row { path: PathBuf, line: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalScores {
    pub portal: String,
    pub n_sentences: usize,
    pub n_recognized: usize,
    pub n_bleu_assessable: usize,
    /// Mean over assessable sentences.
    pub bleu3: Option<f64>,
    /// Means over recognized sentences.
    pub rouge1_f: Option<f64>,
    pub rouge2_f: Option<f64>,
    pub rouge_l_f: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SentenceOutcome {
    pub id: String,
    pub original: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regenerated: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bleu: Option<Bleu>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rouge: Option<Rouge>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct PortalRun {
    pub scores: EvalScores,
    pub grammar: Grammar,
    pub sentences: Vec<SentenceOutcome>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Scores `(id, original)` pairs whose parses are looked up by sentence id.
pub fn run_portal(portal: &str, originals: &[(String, String)], parses: &[SentenceFacts]) -> PortalRun {
    let by_id: HashMap<&str, &SentenceFacts> = parses.iter().map(|f| (f.sentence_id.as_str(), f)).collect();
    let mut fragments = Vec::new();
    let mut pending = Vec::new();
    let mut sentences = Vec::new();
    for (id, original) in originals {
        let outcome = |error: String| SentenceOutcome {
            id: id.clone(),
            original: original.clone(),
            regenerated: None,
            bleu: None,
            rouge: None,
            error: Some(error),
        };
        let Some(facts) = by_id.get(id.as_str()) else {
            log::warn!("{portal}/{id}: no parse; counted as unrecognized");
            sentences.push(outcome("no parse".into()));
            continue;
        };
        match encode(facts) {
            Ok(g) => {
                fragments.push(g);
                pending.push(sentences.len());
                sentences.push(outcome(String::new()));
            }
            Err(e) => {
                if !matches!(e, PipelineError::Unrecognized(_)) {
                    log::warn!("{portal}: {e}");
                }
                sentences.push(outcome(e.to_string()));
            }
        }
    }
    let grammar = merge(&fragments);
    for &i in &pending {
        let s = &mut sentences[i];
        s.error = None;
        match regenerate(&grammar, by_id[s.id.as_str()]) {
            Ok(text) => {
                let (hyp, reference) = (tokenize(&text), tokenize(&s.original));
                s.bleu = Some(bleu3_detail(&hyp, &reference));
                s.rouge = Some(rouge(&hyp, &reference));
                s.regenerated = Some(text);
            }
            Err(e) => s.error = Some(e.to_string()),
        }
    }
    let recognized: Vec<&SentenceOutcome> = sentences.iter().filter(|s| s.rouge.is_some()).collect();
    let assessable: Vec<&Bleu> = recognized
        .iter()
        .filter_map(|s| s.bleu.as_ref())
        .filter(|b| b.assessable())
        .collect();
    let scores = EvalScores {
        portal: portal.to_string(),
        n_sentences: sentences.len(),
        n_recognized: recognized.len(),
        n_bleu_assessable: assessable.len(),
        bleu3: mean(assessable.iter().map(|b| b.score)),
        rouge1_f: mean(recognized.iter().filter_map(|s| s.rouge).map(|r| r.rouge1)),
        rouge2_f: mean(recognized.iter().filter_map(|s| s.rouge).map(|r| r.rouge2)),
        rouge_l_f: mean(recognized.iter().filter_map(|s| s.rouge).map(|r| r.rouge_l)),
    };
    PortalRun {
        scores,
        grammar,
        sentences,
    }
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads `id<TAB>sentence` rows.
pub fn read_sentences(path: &Path) -> Result<Vec<(String, String)>, CorpusError> {
    let text = read(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(false)
        .flexible(true)
        .quoting(false)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|source| CorpusError::Table {
            path: path.to_path_buf(),
            source,
        })?;
        match (record.get(0), record.get(1), record.len()) {
            (Some(id), Some(sentence), 2) if !id.trim().is_empty() => {
                out.push((id.trim().to_string(), sentence.trim().to_string()))
            }
            _ => {
                return Err(CorpusError::Row {
                    path: path.to_path_buf(),
                    line: record.position().map_or(i + 1, |p| p.line() as usize),
                })
            }
        }
    }
    Ok(out)
}

/// Runs every portal subdirectory of `dir`, in name order.
pub fn run_corpus(dir: &Path) -> Result<Vec<PortalRun>, CorpusError> {
    let io_err = |source| CorpusError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut portals: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err)?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.join(SENTENCES_FILE).is_file())
        .collect();
    portals.sort();
    let mut runs = Vec::new();
    for portal in portals {
        let name = portal.file_name().unwrap_or_default().to_string_lossy().into_owned();
        let originals = read_sentences(&portal.join(SENTENCES_FILE))?;
        let parse_path = portal.join(PARSES_FILE);
        let parses = if parse_path.is_file() {
            parse_conllu(&read(&parse_path)?).map_err(|source| CorpusError::Parse {
                path: parse_path.clone(),
                source,
            })?
        } else {
            log::warn!("{}: missing; every sentence counts as unrecognized", parse_path.display());
            Vec::new()
        };
        runs.push(run_portal(&name, &originals, &parses));
    }
    Ok(runs)
}

fn one_decimal(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.1}")).unwrap_or_default()
}

/// The report table as CSV.
pub fn report_csv(scores: &[EvalScores]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "portal",
        "n_sentences",
        "n_recognized",
        "n_bleu_assessable",
        "bleu3",
        "rouge1",
        "rouge2",
        "rougeL",
    ])?;
    for s in scores {
        w.write_record([
            s.portal.clone(),
            s.n_sentences.to_string(),
            s.n_recognized.to_string(),
            s.n_bleu_assessable.to_string(),
            one_decimal(s.bleu3),
            one_decimal(s.rouge1_f),
            one_decimal(s.rouge2_f),
            one_decimal(s.rouge_l_f),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).unwrap_or_default())
}
