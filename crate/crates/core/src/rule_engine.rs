//! Forward chaining over positive, stratified rule programs.
//!
//! Programs are written in a small ASP-like syntax:
//!
//! ```text
//! structure(2,2) :- nsubj(V,S), dobj(V,O).
//! 3 { sub(S); obj(O); verb(V) } :- nsubj(V,S), dobj(V,O).
//! ```
//!
//! A cardinality head is accepted only when its lower bound equals the number
//! of atoms in the braces; the choice is then forced and every atom is derived.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::SentenceFacts;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Sym(String),
}

impl Value {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            Value::Sym(_) => None,
        }
    }

    pub fn as_index(&self) -> Option<usize> {
        self.as_int().and_then(|i| usize::try_from(i).ok())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Sym(s) => f.write_str(s),
        }
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Sym(s.to_string())
    }
}

/// A ground atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Value>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Value>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Const(Value),
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Pattern {
    fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            Term::Const(_) => None,
        })
    }

    fn instantiate(&self, bindings: &Bindings) -> Atom {
        let args = self
            .args
            .iter()
            .map(|t| match t {
                Term::Const(c) => c.clone(),
                Term::Var(v) => bindings[v].clone(),
            })
            .collect();
        Atom::new(self.predicate.clone(), args)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    /// Every head atom is derived when the body holds.
    pub head: Vec<Pattern>,
    pub body: Vec<Pattern>,
}

pub type Bindings = BTreeMap<String, Value>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleParseError {
    #[error("rule {rule}: {message}")]
    Syntax { rule: usize, message: String },
    #[error("rule {rule}: head variable {variable} does not occur in the body")]
    Unsafe { rule: usize, variable: String },
    #[error("rule {rule}: choice bound {bound} does not force all {count} head atoms")]
    OpenChoice {
        rule: usize,
        bound: usize,
        count: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl FromStr for Program {
    type Err = RuleParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let stripped: String = text
            .lines()
            .map(|l| l.split('%').next().unwrap_or(""))
            .collect::<Vec<_>>()
            .join("\n");
        let mut rules = Vec::new();
        for (number, statement) in split_statements(&stripped).into_iter().enumerate() {
            let rule = parse_rule(&statement, number + 1)?;
            rules.push(rule);
        }
        Ok(Program { rules })
    }
}

/// Splits on `.` terminators that are outside parentheses and braces.
fn split_statements(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            _ => {}
        }
        if c == '.' && depth == 0 {
            if !current.trim().is_empty() {
                out.push(current.trim().to_string());
            }
            current.clear();
        } else {
            current.push(c);
        }
    }
    out
}

fn parse_rule(statement: &str, rule: usize) -> Result<Rule, RuleParseError> {
    let syntax = |message: String| RuleParseError::Syntax { rule, message };
    let (head_text, body_text) = match statement.split_once(":-") {
        Some((h, b)) => (h.trim(), b.trim()),
        None => (statement.trim(), ""),
    };
    let head = if let Some(open) = head_text.find('{') {
        let bound: usize = head_text[..open]
            .trim()
            .parse()
            .map_err(|_| syntax(format!("bad choice bound in {head_text:?}")))?;
        let close = head_text
            .rfind('}')
            .ok_or_else(|| syntax("unterminated choice head".into()))?;
        let atoms = head_text[open + 1..close]
            .split(';')
            .map(|a| parse_pattern(a.trim(), rule))
            .collect::<Result<Vec<_>, _>>()?;
        if bound != atoms.len() {
            return Err(RuleParseError::OpenChoice {
                rule,
                bound,
                count: atoms.len(),
            });
        }
        atoms
    } else {
        vec![parse_pattern(head_text, rule)?]
    };
    let body = if body_text.is_empty() {
        Vec::new()
    } else {
        split_top_level(body_text, ',')
            .iter()
            .map(|a| parse_pattern(a.trim(), rule))
            .collect::<Result<Vec<_>, _>>()?
    };
    let body_vars: BTreeSet<&str> = body.iter().flat_map(Pattern::variables).collect();
    for pattern in &head {
        for v in pattern.variables() {
            if !body_vars.contains(v) {
                return Err(RuleParseError::Unsafe {
                    rule,
                    variable: v.to_string(),
                });
            }
        }
    }
    Ok(Rule { head, body })
}

fn split_top_level(text: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(std::mem::take(&mut current));
        } else {
            current.push(c);
        }
    }
    out.push(current);
    out
}

fn parse_pattern(text: &str, rule: usize) -> Result<Pattern, RuleParseError> {
    let syntax = |message: String| RuleParseError::Syntax { rule, message };
    let (predicate, args) = match text.find('(') {
        Some(open) => {
            let inner = text[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| syntax(format!("unbalanced atom {text:?}")))?;
            let args = split_top_level(inner, ',')
                .iter()
                .map(|a| parse_term(a.trim()))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| syntax(format!("bad argument in {text:?}")))?;
            (text[..open].trim(), args)
        }
        None => (text, Vec::new()),
    };
    let valid = predicate
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_lowercase())
        && predicate.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !valid {
        return Err(syntax(format!("bad predicate name {predicate:?}")));
    }
    Ok(Pattern {
        predicate: predicate.to_string(),
        args,
    })
}

fn parse_term(text: &str) -> Option<Term> {
    let first = text.chars().next()?;
    if let Ok(i) = text.parse::<i64>() {
        return Some(Term::Const(Value::Int(i)));
    }
    if let Some(inner) = text.strip_prefix('"').and_then(|t| t.strip_suffix('"')) {
        return Some(Term::Const(Value::Sym(inner.to_string())));
    }
    if !text.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return None;
    }
    if first.is_uppercase() || first == '_' {
        Some(Term::Var(text.to_string()))
    } else {
        Some(Term::Const(Value::Sym(text.to_string())))
    }
}

/// One satisfied ground instance of a rule body.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Firing {
    pub rule: usize,
    pub bindings: Bindings,
}

impl Firing {
    pub fn index(&self, var: &str) -> Option<usize> {
        self.bindings.get(var).and_then(Value::as_index)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    pub facts: BTreeSet<Atom>,
    /// Atoms produced by rules that were not already input facts.
    pub derived: BTreeSet<Atom>,
    pub firings: Vec<Firing>,
}

impl Model {
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.facts.union(&self.derived).cloned().collect()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.facts.contains(atom) || self.derived.contains(atom)
    }

    /// Derived atoms as fact text, one per line.
    pub fn to_fact_text(&self) -> String {
        self.derived.iter().map(|a| format!("{a}.\n")).collect()
    }
}

struct Index<'a> {
    by_predicate: HashMap<&'a str, Vec<&'a Atom>>,
}

impl<'a> Index<'a> {
    fn new(atoms: impl IntoIterator<Item = &'a Atom>) -> Self {
        let mut by_predicate: HashMap<&str, Vec<&Atom>> = HashMap::new();
        for atom in atoms {
            by_predicate.entry(&atom.predicate).or_default().push(atom);
        }
        Index { by_predicate }
    }

    fn matches(&self, body: &[Pattern], bindings: &mut Bindings, out: &mut Vec<Bindings>) {
        let Some((first, rest)) = body.split_first() else {
            out.push(bindings.clone());
            return;
        };
        let Some(candidates) = self.by_predicate.get(first.predicate.as_str()) else {
            return;
        };
        for atom in candidates {
            if atom.args.len() != first.args.len() {
                continue;
            }
            let mut added = Vec::new();
            let mut ok = true;
            for (term, value) in first.args.iter().zip(&atom.args) {
                match term {
                    Term::Const(c) => {
                        if c != value {
                            ok = false;
                            break;
                        }
                    }
                    Term::Var(v) => match bindings.get(v) {
                        Some(bound) if bound != value => {
                            ok = false;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            bindings.insert(v.clone(), value.clone());
                            added.push(v.clone());
                        }
                    },
                }
            }
            if ok {
                self.matches(rest, bindings, out);
            }
            for v in added {
                bindings.remove(&v);
            }
        }
    }
}

fn satisfying(rule: &Rule, atoms: &BTreeSet<Atom>) -> Vec<Bindings> {
    let index = Index::new(atoms);
    let mut out = Vec::new();
    index.matches(&rule.body, &mut Bindings::new(), &mut out);
    out
}

/// Least fixpoint of `program` over `facts`.
pub fn derive_program(facts: &BTreeSet<Atom>, program: &Program) -> Model {
    let mut all = facts.clone();
    loop {
        let mut fresh = Vec::new();
        for rule in &program.rules {
            for bindings in satisfying(rule, &all) {
                for head in &rule.head {
                    let atom = head.instantiate(&bindings);
                    if !all.contains(&atom) {
                        fresh.push(atom);
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        all.extend(fresh);
    }
    let mut firings = BTreeSet::new();
    for (i, rule) in program.rules.iter().enumerate() {
        for bindings in satisfying(rule, &all) {
            firings.insert(Firing { rule: i, bindings });
        }
    }
    let derived = all.difference(facts).cloned().collect();
    Model {
        facts: facts.clone(),
        derived,
        firings: firings.into_iter().collect(),
    }
}

/// The three rule families used by the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleFamily {
    /// Sentence structure recognition.
    Structure,
    /// Subject, verb, object and adjective roles.
    MainComponents,
    /// Complement attachments; heads carry the host token as first argument.
    Complements,
}

const STRUCTURE_RULES: &str = "
structure(1,1) :- nsubj(V,S).
structure(2,2) :- nsubj(V,S), dobj(V,O).
structure(3,3) :- nsubj(V1,S), xcomp(V1,V2), dobj(V2,O).
structure(4,2) :- nsubj(O,S), cop(O,TOBE).
structure(5,2) :- nsubjpass(V,S), auxpass(V,TOBE).
";

const MAIN_COMPONENT_RULES: &str = "
2 { sub(S); verb(V) }         :- nsubj(V,S).
3 { sub(S); obj(O); verb(V) } :- nsubj(V,S), dobj(V,O).
2 { sub(S); verb(V) }         :- nsubjpass(V,S), auxpass(V,TOBE).
4 { sub(S); obj(O); verb_1(V1); verb_2(V2) } :- nsubj(V1,S), xcomp(V1,V2), dobj(V2,O).
2 { sub(S); adj(O) }          :- nsubj(O,S), pos_tag(O,jj).
2 { sub(S); obj(O) }          :- nsubj(O,S), pos_tag(O,nn).
2 { sub(S); obj(O) }          :- nsubj(O,S), pos_tag(O,nns).
2 { sub(S); obj(O) }          :- nsubj(O,S), pos_tag(O,cd).
";

// `obl` is the UD v2 name for verb-attached `nmod`.
const COMPLEMENT_RULES: &str = "
noun_compound(P,N)        :- compound(P,N).
adj_mod(P,JJ)             :- amod(P,JJ).
noun_conjunction(P,N)     :- conj(P,N).
preposition(P,COMP,IN)    :- nmod(P,COMP), case(COMP,IN).
preposition(P,COMP,IN)    :- obl(P,COMP), case(COMP,IN).
adverbial_modifier(P,ADV) :- advmod(P,ADV).
";

impl RuleFamily {
    pub fn source(self) -> &'static str {
        match self {
            RuleFamily::Structure => STRUCTURE_RULES,
            RuleFamily::MainComponents => MAIN_COMPONENT_RULES,
            RuleFamily::Complements => COMPLEMENT_RULES,
        }
    }

    pub fn program(self) -> &'static Program {
        static STRUCTURE: OnceLock<Program> = OnceLock::new();
        static MAIN: OnceLock<Program> = OnceLock::new();
        static COMPLEMENTS: OnceLock<Program> = OnceLock::new();
        let cell = match self {
            RuleFamily::Structure => &STRUCTURE,
            RuleFamily::MainComponents => &MAIN,
            RuleFamily::Complements => &COMPLEMENTS,
        };
        cell.get_or_init(|| {
            self.source()
                .parse()
                .expect("built-in rule programs are well formed")
        })
    }
}

pub fn derive(facts: &BTreeSet<Atom>, family: RuleFamily) -> Model {
    derive_program(facts, family.program())
}

/// The fact atoms of a sentence: one per dependency edge plus `pos_tag/2`.
pub fn sentence_atoms(facts: &SentenceFacts) -> BTreeSet<Atom> {
    let mut atoms = BTreeSet::new();
    for dep in &facts.deps {
        atoms.insert(Atom::new(
            dep.predicate(),
            vec![dep.head.into(), dep.dependent.into()],
        ));
    }
    for token in &facts.tokens {
        atoms.insert(Atom::new(
            "pos_tag",
            vec![token.index.into(), Value::Sym(token.pos.clone())],
        ));
    }
    atoms
}
