//! Scoring of regenerated text against the original sentences.

mod corpus;
mod metrics;

pub use corpus::{
    read_sentences, report_csv, run_corpus, run_portal, CorpusError, EvalScores, PortalRun, SentenceOutcome,
    PARSES_FILE, SENTENCES_FILE,
};
pub use metrics::{bleu3, bleu3_detail, rouge, tokenize, Bleu, Rouge};
