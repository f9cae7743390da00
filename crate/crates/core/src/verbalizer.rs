//! Descriptions of logical atoms and RDF triples, realized through grammar
//! functions synthesized from one annotation sentence per predicate.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::components::{main_components_at, role_chunks};
use crate::encoder::{encode_clause, identifier, EncodeError, ENTITY};
use crate::exporter::merge;
use crate::gf::{Cat, Function, Grammar};
use crate::ingest::{DependencyFact, SentenceFacts, Token};
use crate::linearizer::{linearize_tree, AbsTree, LinearizeError};
use crate::structure::select_for_sentence;

#[derive(Debug, Error)]
pub enum VerbalizeError {
    #[error("annotation line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("annotation {predicate}/{arity}: no dependency parse for {template:?}")]
    MissingParse {
        predicate: String,
        arity: usize,
        template: String,
    },
    #[error("annotation {predicate}/{arity} rejected: {reason}")]
    Rejected {
        predicate: String,
        arity: usize,
        reason: String,
    },
    #[error("no annotation for {}", .0.join(", "))]
    Uncovered(Vec<String>),
    #[error("atoms line {line}: {message}")]
    Atoms { line: usize, message: String },
    #[error("triples line {line}: expected 3 tab-separated fields")]
    Triples { line: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Linearize(#[from] LinearizeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: &[&str]) -> Self {
        GroundAtom {
            predicate: predicate.into(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub subject: String,
    pub relation: String,
    pub object: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomAnnotation {
    pub predicate: String,
    pub arity: usize,
    pub template: String,
    /// Grammar function realizing the template.
    pub function: String,
}

/// Loaded annotations together with the grammar compiled from them.
#[derive(Debug, Clone)]
pub struct Annotations {
    pub entries: Vec<AtomAnnotation>,
    pub grammar: Grammar,
}

impl Annotations {
    pub fn get(&self, predicate: &str, arity: usize) -> Option<&AtomAnnotation> {
        self.entries
            .iter()
            .find(|a| a.predicate == predicate && a.arity == arity)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub const RDF_TYPE: &str = "rdf:type";

/// The copular template used for `rdf:type` when no annotation is given.
fn rdf_type_parse() -> SentenceFacts {
    let token = |index: usize, surface: &str, lemma: &str, pos: &str| Token {
        index,
        surface: surface.into(),
        lemma: Some(lemma.into()),
        pos: pos.into(),
    };
    let tokens = vec![
        token(1, "$1", "$1", "nnp"),
        token(2, "is", "be", "vbz"),
        token(3, "$2", "$2", "nn"),
    ];
    let deps = vec![DependencyFact::new("nsubj", 3, 1), DependencyFact::new("cop", 3, 2)];
    let mut facts = SentenceFacts::new(RDF_TYPE, tokens, deps, Some(3))
        .unwrap_or_else(|e| unreachable!("built-in parse is well formed: {e}"));
    facts.source_text = "$1 is $2".into();
    facts
}

fn slot_numbers(template: &str) -> Vec<usize> {
    let mut out = Vec::new();
    let mut rest = template;
    while let Some(i) = rest.find('$') {
        rest = &rest[i + 1..];
        let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
        if let Ok(n) = digits.parse() {
            out.push(n);
        }
    }
    out
}

fn normalize(text: &str) -> String {
    text.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .trim_end_matches(|c: char| c == '.' || c.is_whitespace())
        .to_string()
}

/// Parses `predicate/arity<TAB>template` lines and compiles each template,
/// using the parse in `parses` whose text matches it.
pub fn load_annotations(text: &str, parses: &[SentenceFacts]) -> Result<Annotations, VerbalizeError> {
    let mut records: Vec<(String, usize, String, Option<SentenceFacts>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let format = |message: String| VerbalizeError::Format { line, message };
        let (key, template) = raw
            .split_once('\t')
            .ok_or_else(|| format("expected predicate/arity<TAB>sentence".into()))?;
        let (predicate, arity) = key
            .rsplit_once('/')
            .ok_or_else(|| format(format!("{key:?} lacks /arity")))?;
        let arity: usize = arity
            .trim()
            .parse()
            .map_err(|_| format(format!("bad arity in {key:?}")))?;
        let template = template.trim().to_string();
        let mut slots = slot_numbers(&template);
        slots.sort_unstable();
        if slots != (1..=arity).collect::<Vec<_>>() {
            return Err(format(format!(
                "template must use each of $1..${arity} exactly once: {template:?}"
            )));
        }
        let wanted = normalize(&template);
        let parse = parses
            .iter()
            .find(|p| normalize(&p.source_text) == wanted)
            .cloned();
        records.push((predicate.trim().to_string(), arity, template, parse));
    }
    if !records.iter().any(|r| r.0 == RDF_TYPE && r.1 == 2) {
        records.push((RDF_TYPE.into(), 2, "$1 is $2".into(), Some(rdf_type_parse())));
    }

    let mut entries = Vec::new();
    let mut fragments = Vec::new();
    let mut taken = BTreeSet::new();
    for (predicate, arity, template, parse) in records {
        let parse = parse.ok_or_else(|| VerbalizeError::MissingParse {
            predicate: predicate.clone(),
            arity,
            template: template.clone(),
        })?;
        let reject = |reason: String| VerbalizeError::Rejected {
            predicate: predicate.clone(),
            arity,
            reason,
        };
        let recognition = select_for_sentence(&parse).ok_or_else(|| reject("structure not recognized".into()))?;
        let map = main_components_at(&parse, recognition).map_err(|e| reject(e.to_string()))?;
        let clause = encode_clause(&parse, recognition.structure, &map, &role_chunks(&parse, &map))
            .map_err(|e: EncodeError| reject(e.to_string()))?;
        let params: Vec<String> = (1..=arity).map(|n| format!("X{n}")).collect();
        let mut used: Vec<&str> = clause.clause.vars();
        used.sort_unstable();
        let mut expected: Vec<&str> = params.iter().map(String::as_str).collect();
        expected.sort_unstable();
        if used != expected {
            return Err(reject(format!(
                "slots in the parse ({}) do not match the arity",
                used.join(", ")
            )));
        }
        let base = format!("{}_{arity}", identifier(&[&predicate]));
        let mut name = base.clone();
        let mut n = 1;
        while !taken.insert(name.clone()) {
            n += 1;
            name = format!("{base}_{n}");
        }
        let mut g = Grammar::new(name.clone());
        g.declare_category(ENTITY, Cat::NP);
        g.opers = clause.opers;
        g.functions.insert(
            name.clone(),
            Function {
                name: name.clone(),
                arg_categories: vec![ENTITY.to_string(); arity],
                result: crate::gf::MESSAGE.to_string(),
                params,
                lin: clause.clause,
            },
        );
        g.check().map_err(|e| reject(e.to_string()))?;
        fragments.push(g);
        entries.push(AtomAnnotation {
            predicate,
            arity,
            template,
            function: name,
        });
    }
    Ok(Annotations {
        entries,
        grammar: merge(&fragments),
    })
}

/// Reads atoms written as facts (`pred(a, b).`, several per line allowed).
pub fn parse_atoms(text: &str) -> Result<Vec<GroundAtom>, VerbalizeError> {
    let mut atoms = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let err = |message: &str| VerbalizeError::Atoms {
            line: i + 1,
            message: message.to_string(),
        };
        let line = line.split('%').next().unwrap_or_default();
        let mut rest = line.trim();
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| err("expected '('"))?;
            let predicate = rest[..open].trim();
            if predicate.is_empty() {
                return Err(err("missing predicate"));
            }
            let close = rest.find(')').ok_or_else(|| err("expected ')'"))?;
            let args: Vec<String> = rest[open + 1..close]
                .split(',')
                .map(|a| a.trim().trim_matches('"').to_string())
                .collect();
            if args.iter().any(String::is_empty) {
                return Err(err("empty argument"));
            }
            atoms.push(GroundAtom {
                predicate: predicate.to_string(),
                args,
            });
            rest = rest[close + 1..].trim_start();
            rest = rest
                .strip_prefix('.')
                .ok_or_else(|| err("expected '.' after atom"))?
                .trim_start();
        }
    }
    Ok(atoms)
}

/// Reads atoms from fact text, or from a JSON array of `{predicate, args}`.
pub fn read_atoms(text: &str) -> Result<Vec<GroundAtom>, VerbalizeError> {
    if text.trim_start().starts_with('[') {
        Ok(serde_json::from_str(text)?)
    } else {
        parse_atoms(text)
    }
}

/// Reads triples from 3-column TSV, or from a JSON array of objects.
pub fn read_triples(text: &str) -> Result<Vec<Triple>, VerbalizeError> {
    if text.trim_start().starts_with('[') {
        return Ok(serde_json::from_str(text)?);
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        match fields.as_slice() {
            [s, r, o] if !s.is_empty() && !r.is_empty() && !o.is_empty() => out.push(Triple {
                subject: s.to_string(),
                relation: r.to_string(),
                object: o.to_string(),
            }),
            _ => return Err(VerbalizeError::Triples { line: i + 1 }),
        }
    }
    Ok(out)
}

fn sentence_case(text: &str) -> String {
    let mut chars = text.chars();
    match chars.next() {
        Some(first) => format!("{}{}.", first.to_uppercase(), chars.as_str()),
        None => String::new(),
    }
}

fn check_coverage(atoms: &[GroundAtom], annotations: &Annotations) -> Result<(), VerbalizeError> {
    let missing: BTreeSet<String> = atoms
        .iter()
        .filter(|a| annotations.get(&a.predicate, a.args.len()).is_none())
        .map(|a| format!("{}/{}", a.predicate, a.args.len()))
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(VerbalizeError::Uncovered(missing.into_iter().collect()))
    }
}

/// One sentence per atom, in input order.
pub fn verbalize_sentences(atoms: &[GroundAtom], annotations: &Annotations) -> Result<Vec<String>, VerbalizeError> {
    check_coverage(atoms, annotations)?;
    let functions: BTreeMap<(&str, usize), &str> = annotations
        .entries
        .iter()
        .map(|a| ((a.predicate.as_str(), a.arity), a.function.as_str()))
        .collect();
    atoms
        .iter()
        .map(|atom| {
            let function = functions[&(atom.predicate.as_str(), atom.args.len())];
            let args = atom
                .args
                .iter()
                .map(|a| AbsTree::Symbol(a.replace('_', " ")))
                .collect();
            let text = linearize_tree(&annotations.grammar, &AbsTree::App(function.to_string(), args))?;
            Ok(sentence_case(&text))
        })
        .collect()
}

/// A paragraph describing the atoms.
pub fn verbalize_atoms(atoms: &[GroundAtom], annotations: &Annotations) -> Result<String, VerbalizeError> {
    Ok(verbalize_sentences(atoms, annotations)?.join(" "))
}

/// One sentence per triple, reading the relation as a binary predicate.
pub fn verbalize_triples(triples: &[Triple], annotations: &Annotations) -> Result<Vec<String>, VerbalizeError> {
    let atoms: Vec<GroundAtom> = triples
        .iter()
        .map(|t| GroundAtom::new(t.relation.clone(), &[&t.subject, &t.object]))
        .collect();
    verbalize_sentences(&atoms, annotations)
}
