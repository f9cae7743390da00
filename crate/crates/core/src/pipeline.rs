//! Sentence-to-grammar pipeline: structure, components, chunks, encoding.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::components::{main_components_at, role_chunks, Chunk, ComponentError, ComponentMap, Role};
use crate::encoder::{encode_sentence, sentence_function_name, EncodeError};
use crate::exporter::merge;
use crate::gf::{Grammar, SentenceGrammar};
use crate::ingest::SentenceFacts;
use crate::linearizer::{linearize, LinearizeError};
use crate::structure::{select_for_sentence, Recognition};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("sentence {0}: structure not recognized")]
    Unrecognized(String),
    #[error("sentence {id}: {source}")]
    Components {
        id: String,
        #[source]
        source: ComponentError,
    },
    #[error("sentence {id}: {source}")]
    Encode {
        id: String,
        #[source]
        source: EncodeError,
    },
    #[error("sentence {id}: {source}")]
    Linearize {
        id: String,
        #[source]
        source: LinearizeError,
    },
}

/// Everything the analysis stages know about a sentence.
#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub sentence_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<Recognition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roles: Option<ComponentMap>,
    pub chunks: BTreeMap<Role, Chunk>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn analyze(facts: &SentenceFacts) -> Analysis {
    let mut analysis = Analysis {
        sentence_id: facts.sentence_id.clone(),
        structure: select_for_sentence(facts),
        roles: None,
        chunks: BTreeMap::new(),
        error: None,
    };
    match analysis.structure {
        None => analysis.error = Some("structure not recognized".into()),
        Some(r) => match main_components_at(facts, r) {
            Ok(map) => {
                analysis.chunks = role_chunks(facts, &map);
                analysis.roles = Some(map);
            }
            Err(e) => analysis.error = Some(e.to_string()),
        },
    }
    analysis
}

/// The grammar fragment of one sentence.
pub fn encode(facts: &SentenceFacts) -> Result<SentenceGrammar, PipelineError> {
    let id = || facts.sentence_id.clone();
    let recognition = select_for_sentence(facts).ok_or_else(|| PipelineError::Unrecognized(id()))?;
    let map = main_components_at(facts, recognition)
        .map_err(|source| PipelineError::Components { id: id(), source })?;
    let chunks = role_chunks(facts, &map);
    encode_sentence(facts, recognition.structure, &map, &chunks)
        .map_err(|source| PipelineError::Encode { id: id(), source })
}

/// Fragments for every encodable sentence plus the failures, in input order.
pub fn encode_all(sentences: &[SentenceFacts]) -> (Vec<SentenceGrammar>, Vec<PipelineError>) {
    let mut fragments = Vec::new();
    let mut failures = Vec::new();
    for facts in sentences {
        match encode(facts) {
            Ok(g) => fragments.push(g),
            Err(e) => failures.push(e),
        }
    }
    (fragments, failures)
}

/// One grammar for a paragraph.
pub fn synthesize(sentences: &[SentenceFacts]) -> (Grammar, Vec<PipelineError>) {
    let (fragments, failures) = encode_all(sentences);
    (merge(&fragments), failures)
}

/// Realizes the sentence function of `facts` from grammar `g`.
pub fn regenerate(g: &Grammar, facts: &SentenceFacts) -> Result<String, PipelineError> {
    linearize(g, &sentence_function_name(&facts.sentence_id)).map_err(|source| PipelineError::Linearize {
        id: facts.sentence_id.clone(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::parse_conllu;

    const BILL: &str = "# sent_id = t1
# text = Bill plays a game .
1\tBill\tBill\tPRP\tPRP\t_\t2\tnsubj\t_\t_
2\tplays\tplay\tVERB\tVBP\t_\t0\tROOT\t_\t_
3\ta\ta\tDET\tDT\t_\t4\tdet\t_\t_
4\tgame\tgame\tNOUN\tNN\t_\t2\tdobj\t_\t_
5\t.\t.\tPUNCT\t.\t_\t2\tpunct\t_\t_

# sent_id = t2
1\tGo\tgo\tVERB\tVB\t_\t0\troot\t_\t_
";

    #[test]
    fn bill_plays_game() {
        let sentences = parse_conllu(BILL).unwrap();
        let (g, failures) = synthesize(&sentences);
        assert_eq!(failures.len(), 1);
        assert!(matches!(failures[0], PipelineError::Unrecognized(ref id) if id == "t2"));
        assert_eq!(regenerate(&g, &sentences[0]).unwrap(), "Bill plays game");
        g.check().unwrap();
    }

    #[test]
    fn analysis_reports_roles() {
        let sentences = parse_conllu(BILL).unwrap();
        let a = analyze(&sentences[0]);
        let roles = a.roles.unwrap();
        assert_eq!((roles.sub, roles.verb, roles.obj), (1, Some(2), Some(4)));
        assert!(analyze(&sentences[1]).error.is_some());
    }
}
