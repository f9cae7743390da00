//! Main component roles and the complement chunks that hang off them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{SentenceFacts, Token};
use crate::rule_engine::{derive, sentence_atoms, Firing, RuleFamily};
use crate::structure::{recognize_anchored, Recognition, StructureAtom, StructureKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComponentError {
    #[error("unsupported copular complement with pos tag {pos:?}")]
    UnsupportedCopularComplement { pos: String },
    #[error("no role assignment for {structure} at token {anchor}")]
    NoAssignment {
        structure: StructureAtom,
        anchor: usize,
    },
    #[error("token {index} fills more than one role")]
    NotInjective { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Sub,
    Verb,
    #[serde(rename = "verb_1")]
    Verb1,
    #[serde(rename = "verb_2")]
    Verb2,
    Obj,
    Adj,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentMap {
    pub sub: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verb: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verb_1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verb_2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obj: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adj: Option<usize>,
}

impl ComponentMap {
    pub fn roles(&self) -> Vec<(Role, usize)> {
        let mut out = vec![(Role::Sub, self.sub)];
        let optional = [
            (Role::Verb, self.verb),
            (Role::Verb1, self.verb_1),
            (Role::Verb2, self.verb_2),
            (Role::Obj, self.obj),
            (Role::Adj, self.adj),
        ];
        out.extend(optional.into_iter().filter_map(|(r, i)| i.map(|i| (r, i))));
        out
    }

    pub fn get(&self, role: Role) -> Option<usize> {
        self.roles().into_iter().find(|(r, _)| *r == role).map(|(_, i)| i)
    }

    fn check_injective(&self) -> Result<(), ComponentError> {
        let mut seen = BTreeSet::new();
        for (_, index) in self.roles() {
            if !seen.insert(index) {
                return Err(ComponentError::NotInjective { index });
            }
        }
        Ok(())
    }
}

/// Main-component rule indices per structure, with the rule variable that
/// names the clause head.
fn main_rules(kind: StructureKind) -> (&'static [usize], &'static str) {
    match kind {
        StructureKind::Intransitive => (&[0], "V"),
        StructureKind::Transitive => (&[1], "V"),
        StructureKind::Passive => (&[2], "V"),
        StructureKind::Catenative => (&[3], "V1"),
        StructureKind::Copular => (&[4, 5, 6, 7], "O"),
    }
}

fn map_from_firing(firing: &Firing) -> ComponentMap {
    let get = |v: &str| firing.index(v);
    let mut map = ComponentMap {
        sub: get("S").unwrap_or_default(),
        ..ComponentMap::default()
    };
    match firing.rule {
        0 | 2 => map.verb = get("V"),
        1 => {
            map.verb = get("V");
            map.obj = get("O");
        }
        3 => {
            map.verb_1 = get("V1");
            map.verb_2 = get("V2");
            map.obj = get("O");
        }
        4 => map.adj = get("O"),
        _ => map.obj = get("O"),
    }
    map
}

/// Role assignment for the clause that `recognition` names.
pub fn main_components_at(
    facts: &SentenceFacts,
    recognition: Recognition,
) -> Result<ComponentMap, ComponentError> {
    let model = derive(&sentence_atoms(facts), RuleFamily::MainComponents);
    let (rules, anchor_var) = main_rules(recognition.structure.kind);
    let firing = model
        .firings
        .iter()
        .filter(|f| rules.contains(&f.rule) && f.index(anchor_var) == Some(recognition.anchor))
        .min_by_key(|f| (f.index("S"), f.index("O"), f.rule));
    let Some(firing) = firing else {
        if recognition.structure.kind == StructureKind::Copular {
            let pos = facts.pos(recognition.anchor).unwrap_or_default().to_string();
            return Err(ComponentError::UnsupportedCopularComplement { pos });
        }
        return Err(ComponentError::NoAssignment {
            structure: recognition.structure,
            anchor: recognition.anchor,
        });
    };
    let map = map_from_firing(firing);
    map.check_injective()?;
    Ok(map)
}

/// Role assignment for structure `s`, using the clause headed by the root
/// token when `s` is found there.
pub fn main_components(
    facts: &SentenceFacts,
    s: StructureAtom,
) -> Result<ComponentMap, ComponentError> {
    let candidates: Vec<Recognition> = recognize_anchored(facts)
        .into_iter()
        .filter(|r| r.structure == s)
        .collect();
    let chosen = candidates
        .iter()
        .copied()
        .min_by_key(|r| (Some(r.anchor) != facts.root, facts.depth(r.anchor), r.anchor))
        .ok_or(ComponentError::NoAssignment {
            structure: s,
            anchor: facts.root.unwrap_or_default(),
        })?;
    main_components_at(facts, chosen)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplementKind {
    NounCompound,
    AdjMod,
    NounConjunction,
    Preposition,
    AdverbialModifier,
}

impl ComplementKind {
    fn from_predicate(p: &str) -> Option<Self> {
        Some(match p {
            "noun_compound" => ComplementKind::NounCompound,
            "adj_mod" => ComplementKind::AdjMod,
            "noun_conjunction" => ComplementKind::NounConjunction,
            "preposition" => ComplementKind::Preposition,
            "adverbial_modifier" => ComplementKind::AdverbialModifier,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ComplementAttachment {
    pub kind: ComplementKind,
    pub host: usize,
    pub dependent: usize,
    /// Set for prepositions only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case_marker: Option<usize>,
}

fn all_complements(facts: &SentenceFacts) -> BTreeSet<ComplementAttachment> {
    let model = derive(&sentence_atoms(facts), RuleFamily::Complements);
    model
        .derived
        .iter()
        .filter_map(|atom| {
            let kind = ComplementKind::from_predicate(&atom.predicate)?;
            let host = atom.args.first()?.as_index()?;
            let dependent = atom.args.get(1)?.as_index()?;
            let case_marker = atom.args.get(2).and_then(|v| v.as_index());
            Some(ComplementAttachment {
                kind,
                host,
                dependent,
                case_marker,
            })
        })
        .collect()
}

/// Complement attachments whose host is the token at `pos`.
pub fn complements(facts: &SentenceFacts, pos: usize) -> BTreeSet<ComplementAttachment> {
    all_complements(facts)
        .into_iter()
        .filter(|c| c.host == pos)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkAttachment {
    pub kind: ComplementKind,
    /// Case markers of a prepositional attachment, in sentence order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub case_markers: Vec<usize>,
    pub chunk: Chunk,
}

/// A head word with its recursively discovered complements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub head: usize,
    pub lemma: String,
    pub attachments: Vec<ChunkAttachment>,
}

impl Chunk {
    /// Every token in the chunk, case markers included.
    pub fn tokens(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::from([self.head]);
        for a in &self.attachments {
            out.extend(a.case_markers.iter().copied());
            out.extend(a.chunk.tokens());
        }
        out
    }

    pub fn attachments_of(&self, kind: ComplementKind) -> impl Iterator<Item = &ChunkAttachment> {
        self.attachments.iter().filter(move |a| a.kind == kind)
    }
}

/// Lemma used for lexicon entries: the LEMMA column, else a plural/3sg `s`
/// stripped from the surface form.
pub fn lexical_lemma(token: &Token) -> String {
    if let Some(lemma) = &token.lemma {
        return lemma.clone();
    }
    match token.pos.as_str() {
        "nns" | "vbz" => token
            .surface
            .strip_suffix('s')
            .filter(|s| !s.is_empty())
            .unwrap_or(&token.surface)
            .to_string(),
        _ => token.surface.clone(),
    }
}

/// Builds the maximal chunk around `head`.
pub fn build_chunk(facts: &SentenceFacts, head: usize) -> Chunk {
    let all = all_complements(facts);
    let mut visited = BTreeSet::new();
    chunk_from(facts, &all, head, &mut visited)
}

fn chunk_from(
    facts: &SentenceFacts,
    all: &BTreeSet<ComplementAttachment>,
    head: usize,
    visited: &mut BTreeSet<usize>,
) -> Chunk {
    visited.insert(head);
    let lemma = facts.token(head).map(lexical_lemma).unwrap_or_default();
    // group prepositional atoms by their object so each gets one attachment
    let mut grouped: BTreeMap<usize, (ComplementKind, Vec<usize>)> = BTreeMap::new();
    for c in all.iter().filter(|c| c.host == head) {
        let entry = grouped.entry(c.dependent).or_insert((c.kind, Vec::new()));
        if let Some(marker) = c.case_marker {
            entry.1.push(marker);
        }
    }
    let mut attachments = Vec::new();
    for (dependent, (kind, mut case_markers)) in grouped {
        if visited.contains(&dependent) {
            continue;
        }
        case_markers.sort_unstable();
        case_markers.dedup();
        visited.extend(case_markers.iter().copied());
        let chunk = chunk_from(facts, all, dependent, visited);
        attachments.push(ChunkAttachment {
            kind,
            case_markers,
            chunk,
        });
    }
    Chunk {
        head,
        lemma,
        attachments,
    }
}

/// Chunks for every filled role, keyed by role.
pub fn role_chunks(facts: &SentenceFacts, map: &ComponentMap) -> BTreeMap<Role, Chunk> {
    map.roles()
        .into_iter()
        .map(|(role, index)| (role, build_chunk(facts, index)))
        .collect()
}
