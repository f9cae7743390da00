//! Sentence structure recognition and selection of the most informative one.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ingest::SentenceFacts;
use crate::rule_engine::{derive, sentence_atoms, RuleFamily, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StructureKind {
    /// subject + verb
    Intransitive = 1,
    /// subject + verb + direct object
    Transitive = 2,
    /// subject + catenative verb + verb + object
    Catenative = 3,
    /// subject + copula + predicate
    Copular = 4,
    /// passive subject + auxiliary + participle
    Passive = 5,
}

impl StructureKind {
    pub const ALL: [StructureKind; 5] = [
        StructureKind::Intransitive,
        StructureKind::Transitive,
        StructureKind::Catenative,
        StructureKind::Copular,
        StructureKind::Passive,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn from_number(n: i64) -> Option<Self> {
        StructureKind::ALL.into_iter().find(|k| i64::from(k.number()) == n)
    }

    /// Number of dependency relations the recognizing rule consumes.
    pub fn i_value(self) -> u8 {
        match self {
            StructureKind::Intransitive => 1,
            StructureKind::Transitive | StructureKind::Copular | StructureKind::Passive => 2,
            StructureKind::Catenative => 3,
        }
    }

    /// Tie-break rank among equal i-values; higher wins.
    fn priority(self) -> u8 {
        match self {
            StructureKind::Catenative => 5,
            StructureKind::Transitive => 4,
            StructureKind::Passive => 3,
            StructureKind::Copular => 2,
            StructureKind::Intransitive => 1,
        }
    }

    /// Variable of the structure rule naming the clause head.
    fn anchor_variable(self) -> &'static str {
        match self {
            StructureKind::Catenative => "V1",
            StructureKind::Copular => "O",
            _ => "V",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StructureAtom {
    pub kind: StructureKind,
    pub i_value: u8,
}

impl StructureAtom {
    pub fn of(kind: StructureKind) -> Self {
        StructureAtom {
            kind,
            i_value: kind.i_value(),
        }
    }

    /// Accepts only the pairs the structure rules can produce.
    pub fn new(kind: i64, i_value: i64) -> Option<Self> {
        let kind = StructureKind::from_number(kind)?;
        (i64::from(kind.i_value()) == i_value).then(|| StructureAtom::of(kind))
    }

    fn rank(&self) -> (u8, u8) {
        (self.i_value, self.kind.priority())
    }
}

impl Ord for StructureAtom {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.kind.cmp(&other.kind)
    }
}

impl PartialOrd for StructureAtom {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for StructureAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "structure({},{})", self.kind.number(), self.i_value)
    }
}

/// All structures the sentence supports.
pub fn recognize(facts: &SentenceFacts) -> BTreeSet<StructureAtom> {
    let model = derive(&sentence_atoms(facts), RuleFamily::Structure);
    model
        .derived
        .iter()
        .filter(|a| a.predicate == "structure")
        .filter_map(|a| match a.args.as_slice() {
            [Value::Int(k), Value::Int(i)] => StructureAtom::new(*k, *i),
            _ => None,
        })
        .collect()
}

/// The atom with the highest i-value; ties go 3 > 2 > 5 > 4 > 1.
pub fn select<'a>(atoms: impl IntoIterator<Item = &'a StructureAtom>) -> Option<StructureAtom> {
    atoms.into_iter().copied().max_by_key(StructureAtom::rank)
}

/// A structure together with the token heading the clause that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recognition {
    pub structure: StructureAtom,
    pub anchor: usize,
}

/// Every (structure, clause head) pair the structure rules fire on.
pub fn recognize_anchored(facts: &SentenceFacts) -> Vec<Recognition> {
    let model = derive(&sentence_atoms(facts), RuleFamily::Structure);
    let mut out: Vec<Recognition> = model
        .firings
        .iter()
        .filter_map(|firing| {
            let kind = StructureKind::from_number(firing.rule as i64 + 1)?;
            let anchor = firing.index(kind.anchor_variable())?;
            Some(Recognition {
                structure: StructureAtom::of(kind),
                anchor,
            })
        })
        .collect();
    out.sort_by_key(|r| (r.structure.kind, r.anchor));
    out.dedup();
    out
}

/// Picks the structure for a sentence. Clauses headed by the root token win
/// over embedded clauses; within the chosen clauses the usual selection applies.
pub fn select_for_sentence(facts: &SentenceFacts) -> Option<Recognition> {
    let all = recognize_anchored(facts);
    let at_root: Vec<Recognition> = all
        .iter()
        .copied()
        .filter(|r| Some(r.anchor) == facts.root)
        .collect();
    let pool = if at_root.is_empty() { all } else { at_root };
    pool.into_iter().max_by(|a, b| {
        a.structure
            .rank()
            .cmp(&b.structure.rank())
            .then_with(|| facts.depth(b.anchor).cmp(&facts.depth(a.anchor)))
            .then_with(|| b.anchor.cmp(&a.anchor))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{DependencyFact, Token};

    fn sentence(words: &[(&str, &str)], deps: &[(&str, usize, usize)], root: usize) -> SentenceFacts {
        let tokens = words
            .iter()
            .enumerate()
            .map(|(i, (w, p))| Token {
                index: i + 1,
                surface: w.to_string(),
                lemma: None,
                pos: p.to_string(),
            })
            .collect();
        let deps = deps
            .iter()
            .map(|(r, h, d)| DependencyFact::new(*r, *h, *d))
            .collect();
        SentenceFacts::new("t", tokens, deps, Some(root)).unwrap()
    }

    fn atoms(pairs: &[(i64, i64)]) -> BTreeSet<StructureAtom> {
        pairs
            .iter()
            .map(|&(k, i)| StructureAtom::new(k, i).unwrap())
            .collect()
    }

    #[test]
    fn only_listed_pairs_are_valid() {
        assert!(StructureAtom::new(2, 2).is_some());
        assert!(StructureAtom::new(2, 1).is_none());
        assert!(StructureAtom::new(6, 1).is_none());
    }

    #[test]
    fn bill_plays_a_game() {
        let s = sentence(
            &[("Bill", "prp"), ("plays", "vbp"), ("a", "dt"), ("game", "nn"), (".", "punct")],
            &[("nsubj", 2, 1), ("det", 4, 3), ("dobj", 2, 4), ("punct", 2, 5)],
            2,
        );
        let found = recognize(&s);
        assert_eq!(found, atoms(&[(1, 1), (2, 2)]));
        assert_eq!(select(&found), StructureAtom::new(2, 2));
    }

    #[test]
    fn cathy_is_gorgeous() {
        let s = sentence(
            &[("Cathy", "nnp"), ("is", "vbz"), ("gorgeous", "jj")],
            &[("nsubj", 3, 1), ("cop", 3, 2)],
            3,
        );
        assert_eq!(recognize(&s), atoms(&[(1, 1), (4, 2)]));
    }

    #[test]
    fn no_subject_is_unrecognized() {
        let s = sentence(&[("Go", "vb"), ("home", "nn")], &[("advmod", 1, 2)], 1);
        assert!(recognize(&s).is_empty());
        assert_eq!(select_for_sentence(&s), None);
    }

    #[test]
    fn selection_examples() {
        assert_eq!(select(&atoms(&[(1, 1)])), StructureAtom::new(1, 1));
        assert_eq!(select(&atoms(&[(2, 2), (5, 2)])), StructureAtom::new(2, 2));
        assert_eq!(select(&atoms(&[(4, 2), (5, 2)])), StructureAtom::new(5, 2));
        assert_eq!(select(&atoms(&[(1, 1), (2, 2), (3, 3)])), StructureAtom::new(3, 3));
        assert_eq!(select(&BTreeSet::new()), None);
    }

    #[test]
    fn root_clause_wins() {
        // The man who owns a car sleeps .
        let s = sentence(
            &[
                ("The", "dt"),
                ("man", "nn"),
                ("who", "wp"),
                ("owns", "vbz"),
                ("a", "dt"),
                ("car", "nn"),
                ("sleeps", "vbz"),
            ],
            &[
                ("det", 2, 1),
                ("nsubj", 4, 3),
                ("acl:relcl", 2, 4),
                ("det", 6, 5),
                ("dobj", 4, 6),
                ("nsubj", 7, 2),
            ],
            7,
        );
        assert_eq!(select(&recognize(&s)), StructureAtom::new(2, 2));
        let chosen = select_for_sentence(&s).unwrap();
        assert_eq!(chosen.structure, StructureAtom::new(1, 1).unwrap());
        assert_eq!(chosen.anchor, 7);
    }
}
