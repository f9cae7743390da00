//! Grammar synthesis from dependency parses: rule-based sentence analysis,
//! grammar encoding and merging, English linearization, verbalization of
//! logical atoms and round-trip scoring.

pub mod components;
pub mod encoder;
pub mod eval;
pub mod exporter;
pub mod gf;
pub mod ingest;
pub mod linearizer;
pub mod pipeline;
pub mod rule_engine;
pub mod structure;
pub mod verbalizer;
