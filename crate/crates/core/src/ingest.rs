//! CoNLL-U reading and the per-sentence fact representation.
//!
//! Every sentence becomes a [`SentenceFacts`]: its tokens with lowercased
//! Penn tags plus the basic dependency edges. The `root` edge is not a fact;
//! the root token is remembered separately so clause selection can use it.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("sentence {sentence_id}: {message}")]
    Structure { sentence_id: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 1-based position in the sentence.
    pub index: usize,
    pub surface: String,
    /// `None` when the LEMMA column was `_`.
    pub lemma: Option<String>,
    /// Lowercased Penn tag, `punct` for punctuation.
    pub pos: String,
}

impl Token {
    pub fn lemma_or_surface(&self) -> &str {
        self.lemma.as_deref().unwrap_or(&self.surface)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DependencyFact {
    pub relation: String,
    pub head: usize,
    pub dependent: usize,
}

impl DependencyFact {
    pub fn new(relation: impl Into<String>, head: usize, dependent: usize) -> Self {
        DependencyFact {
            relation: relation.into(),
            head,
            dependent,
        }
    }

    /// The relation label as a fact predicate (`nmod:poss` becomes `nmod_poss`).
    pub fn predicate(&self) -> String {
        predicate_name(&self.relation)
    }
}

pub(crate) fn predicate_name(relation: &str) -> String {
    relation.to_lowercase().replace(':', "_")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceFacts {
    pub sentence_id: String,
    pub tokens: Vec<Token>,
    /// Ordered by dependent index.
    pub deps: Vec<DependencyFact>,
    pub source_text: String,
    /// Token attached to the artificial root, if the parse had one.
    pub root: Option<usize>,
}

impl SentenceFacts {
    /// Builds and validates a fact set from parts. Deps are re-sorted by
    /// dependent index.
    pub fn new(
        sentence_id: impl Into<String>,
        tokens: Vec<Token>,
        mut deps: Vec<DependencyFact>,
        root: Option<usize>,
    ) -> Result<Self, IngestError> {
        let source_text = tokens
            .iter()
            .map(|t| t.surface.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        deps.sort_by_key(|d| (d.dependent, d.head, d.relation.clone()));
        let facts = SentenceFacts {
            sentence_id: sentence_id.into(),
            tokens,
            deps,
            source_text,
            root,
        };
        facts.validate()?;
        Ok(facts)
    }

    pub fn token(&self, index: usize) -> Option<&Token> {
        index.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    pub fn pos(&self, index: usize) -> Option<&str> {
        self.token(index).map(|t| t.pos.as_str())
    }

    /// Dependents of `head` under `relation` (exact label match), in sentence order.
    pub fn dependents<'a>(
        &'a self,
        head: usize,
        relation: &'a str,
    ) -> impl Iterator<Item = usize> + 'a {
        self.deps
            .iter()
            .filter(move |d| d.head == head && d.relation == relation)
            .map(|d| d.dependent)
    }

    pub fn head_of(&self, dependent: usize) -> Option<&DependencyFact> {
        self.deps.iter().find(|d| d.dependent == dependent)
    }

    /// Number of edges between `index` and the root (0 for the root itself).
    pub fn depth(&self, index: usize) -> usize {
        let mut depth = 0;
        let mut current = index;
        while let Some(edge) = self.head_of(current) {
            depth += 1;
            current = edge.head;
            if depth > self.tokens.len() {
                break;
            }
        }
        depth
    }

    fn structural(&self, message: impl Into<String>) -> IngestError {
        IngestError::Structure {
            sentence_id: self.sentence_id.clone(),
            message: message.into(),
        }
    }

    pub fn validate(&self) -> Result<(), IngestError> {
        for (i, token) in self.tokens.iter().enumerate() {
            if token.index != i + 1 {
                return Err(self.structural(format!(
                    "token indices must be consecutive from 1, found {} at position {}",
                    token.index,
                    i + 1
                )));
            }
            if token.pos.is_empty()
                || token.pos.chars().any(|c| c.is_whitespace() || c.is_uppercase())
            {
                return Err(self.structural(format!(
                    "token {} has malformed pos tag {:?}",
                    token.index, token.pos
                )));
            }
        }
        let n = self.tokens.len();
        let mut seen = BTreeSet::new();
        for dep in &self.deps {
            if dep.head == 0 || dep.head > n || dep.dependent == 0 || dep.dependent > n {
                return Err(self.structural(format!(
                    "edge {}({},{}) refers to a missing token",
                    dep.relation, dep.head, dep.dependent
                )));
            }
            if !seen.insert((dep.relation.as_str(), dep.head, dep.dependent)) {
                return Err(self.structural(format!(
                    "duplicate edge {}({},{})",
                    dep.relation, dep.head, dep.dependent
                )));
            }
        }
        self.check_acyclic()
    }

    fn check_acyclic(&self) -> Result<(), IngestError> {
        let n = self.tokens.len();
        let mut parent = vec![None; n + 1];
        for dep in &self.deps {
            if parent[dep.dependent].replace(dep.head).is_some() {
                return Err(self.structural(format!("token {} has two heads", dep.dependent)));
            }
        }
        for start in 1..=n {
            let mut current = start;
            let mut steps = 0;
            while let Some(next) = parent[current] {
                steps += 1;
                if next == start || steps > n {
                    return Err(self.structural(format!(
                        "cyclic heads through token {start}"
                    )));
                }
                current = next;
            }
        }
        Ok(())
    }
}

const PUNCT_TAGS: &[&str] = &[
    ".", ",", ":", "``", "''", "-lrb-", "-rrb-", "#", "hyph", "nfp", "(", ")", "\"",
];

fn pos_from_columns(upos: &str, xpos: &str) -> Option<String> {
    if upos == "PUNCT" {
        return Some("punct".to_string());
    }
    if xpos != "_" && !xpos.is_empty() {
        let lower = xpos.to_lowercase();
        if PUNCT_TAGS.contains(&lower.as_str()) {
            return Some("punct".to_string());
        }
        return Some(lower);
    }
    if upos == "_" || upos.is_empty() {
        return None;
    }
    let mapped = match upos {
        "NOUN" => "nn".to_string(),
        "PROPN" => "nnp".to_string(),
        "ADJ" => "jj".to_string(),
        "NUM" => "cd".to_string(),
        "VERB" => "vbp".to_string(),
        other => other.to_lowercase(),
    };
    Some(mapped)
}

/// Parses CoNLL-U text into one fact set per sentence block.
pub fn parse_conllu(text: &str) -> Result<Vec<SentenceFacts>, IngestError> {
    let mut sentences = Vec::new();
    let mut block = Block::default();
    for (line_no, raw) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            if let Some(facts) = block.finish(sentences.len() + 1)? {
                sentences.push(facts);
            }
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(id) = comment.strip_prefix("sent_id") {
                block.sent_id = Some(id.trim_start_matches([' ', '=']).trim().to_string());
            } else if let Some(t) = comment.strip_prefix("text") {
                if t.trim_start().starts_with('=') {
                    block.text = Some(t.trim_start()[1..].trim().to_string());
                }
            }
            continue;
        }
        block.push_row(line, line_no)?;
    }
    if let Some(facts) = block.finish(sentences.len() + 1)? {
        sentences.push(facts);
    }
    Ok(sentences)
}

#[derive(Default)]
struct Block {
    sent_id: Option<String>,
    text: Option<String>,
    tokens: Vec<Token>,
    edges: Vec<(String, usize, usize, usize)>,
    first_line: usize,
}

impl Block {
    fn push_row(&mut self, line: &str, line_no: usize) -> Result<(), IngestError> {
        let err = |message: String| IngestError::Parse {
            line: line_no,
            message,
        };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(err(format!("expected 10 columns, found {}", cols.len())));
        }
        if self.tokens.is_empty() && self.edges.is_empty() {
            self.first_line = line_no;
        }
        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            return Ok(());
        }
        let index: usize = id
            .parse()
            .map_err(|_| err(format!("token id {id:?} is not an integer")))?;
        let head: usize = cols[6]
            .parse()
            .map_err(|_| err(format!("head {:?} is not an integer", cols[6])))?;
        let surface = cols[1].to_string();
        let lemma = match cols[2] {
            "_" | "" if surface != "_" => None,
            l => Some(l.to_string()),
        };
        let pos = pos_from_columns(cols[3], cols[4])
            .ok_or_else(|| err("token has neither UPOS nor XPOS".to_string()))?;
        self.tokens.push(Token {
            index,
            surface,
            lemma,
            pos,
        });
        self.edges.push((cols[7].to_string(), head, index, line_no));
        Ok(())
    }

    fn finish(&mut self, ordinal: usize) -> Result<Option<SentenceFacts>, IngestError> {
        let block = std::mem::take(self);
        if block.tokens.is_empty() {
            return Ok(None);
        }
        let sentence_id = block.sent_id.unwrap_or_else(|| format!("s{ordinal}"));
        let mut root = None;
        let mut deps = Vec::new();
        let n = block.tokens.len();
        for (relation, head, dependent, line) in block.edges {
            if head == 0 {
                root.get_or_insert(dependent);
                continue;
            }
            if head > n {
                return Err(IngestError::Parse {
                    line,
                    message: format!("head {head} is outside the sentence"),
                });
            }
            deps.push(DependencyFact::new(relation, head, dependent));
        }
        let text = block.text;
        let mut facts = SentenceFacts::new(sentence_id, block.tokens, deps, root)?;
        if let Some(text) = text {
            facts.source_text = text;
        }
        Ok(Some(facts))
    }
}

/// Renders the fact program: dependency facts by dependent index, then one
/// `pos_tag` fact per token.
pub fn facts_to_text(facts: &SentenceFacts) -> String {
    let mut out = String::new();
    let mut deps: Vec<&DependencyFact> = facts.deps.iter().collect();
    deps.sort_by_key(|d| (d.dependent, d.head));
    for dep in deps {
        let _ = writeln!(out, "{}({},{}).", dep.predicate(), dep.head, dep.dependent);
    }
    for token in &facts.tokens {
        let _ = writeln!(out, "pos_tag({},{}).", token.index, token.pos);
    }
    out
}
