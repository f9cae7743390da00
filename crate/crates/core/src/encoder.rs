//! Per-sentence grammar fragments: a clause skeleton chosen by structure,
//! filled with constructor expressions built from the component chunks.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::components::{lexical_lemma, Chunk, ChunkAttachment, ComplementKind, ComponentMap, Role};
use crate::gf::{typecheck, Cat, Expr, Function, Grammar, GrammarError, Oper, SentenceGrammar};
use crate::ingest::{SentenceFacts, Token};
use crate::linearizer::morphology::{
    inflect_verb_3sg, past_participle, past_tense, pluralize_noun, present_participle,
};
use crate::structure::{StructureAtom, StructureKind};

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("token {index} ({surface:?}, {pos}) cannot head a noun phrase")]
    NotNominal {
        index: usize,
        surface: String,
        pos: String,
    },
    #[error("no extended rule builds {output} from ({inputs}); {matches} candidates")]
    Rule {
        inputs: String,
        output: Cat,
        matches: usize,
    },
    #[error("role {0:?} is missing for the selected structure")]
    MissingRole(Role),
    #[error("clause does not have the shape required by {structure}: {found}")]
    Shape {
        structure: StructureAtom,
        found: String,
    },
    #[error("token {0} is not part of the sentence")]
    UnknownToken(usize),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

/// Abstract categories for the main components of a sentence.
pub const ENTITY: &str = "Entity";
pub const ACTION: &str = "Action";
pub const EVENT: &str = "Event";
pub const INTENT: &str = "Intent";
pub const QUALITY: &str = "Quality";

/// A rule producing `output` from `inputs` with `constructor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtendedRule {
    pub inputs: &'static [Cat],
    pub output: Cat,
    pub constructor: &'static str,
}

const fn rule(inputs: &'static [Cat], output: Cat, constructor: &'static str) -> ExtendedRule {
    ExtendedRule {
        inputs,
        output,
        constructor,
    }
}

/// Rules for growing components, scanned from the top.
pub static EXTENDED_RULES: &[ExtendedRule] = &[
    rule(&[Cat::AP, Cat::N], Cat::CN, "mkCN"),
    rule(&[Cat::N], Cat::NP, "mkNP"),
    rule(&[Cat::AP, Cat::CN], Cat::CN, "mkCN"),
    rule(&[Cat::CN], Cat::NP, "mkNP"),
    rule(&[Cat::Pron], Cat::NP, "mkNP"),
    rule(&[Cat::NP, Cat::Adv], Cat::NP, "mkNP"),
    rule(&[Cat::Prep, Cat::NP], Cat::Adv, "ConstructorsEng.mkAdv"),
    rule(&[Cat::NP, Cat::NP], Cat::ListNP, "mkListNP"),
    rule(&[Cat::NP, Cat::ListNP], Cat::ListNP, "mkListNP"),
    rule(&[Cat::Conj, Cat::ListNP], Cat::NP, "mkNP"),
    rule(&[Cat::VP, Cat::Adv], Cat::VP, "mkVP"),
    rule(&[Cat::A], Cat::AP, "mkAP"),
    rule(&[Cat::AdA, Cat::AP], Cat::AP, "mkAP"),
];

/// The rule for the given input and output categories. Exactly one rule in
/// the scan may apply.
pub fn extended_rule(inputs: &[Cat], output: Cat) -> Result<&'static ExtendedRule, EncodeError> {
    let mut found = EXTENDED_RULES
        .iter()
        .filter(|r| r.inputs == inputs && r.output == output);
    match (found.next(), found.next()) {
        (Some(r), None) => Ok(r),
        (first, _) => Err(EncodeError::Rule {
            inputs: inputs.iter().map(|c| c.name()).collect::<Vec<_>>().join(", "),
            output,
            matches: if first.is_none() { 0 } else { 2 },
        }),
    }
}

/// The clause skeleton for a structure; parameters are named by category.
pub fn top_rule(s: StructureAtom, adjectival: bool) -> Expr {
    let slot = |c: Cat| Expr::Var(c.name().to_string());
    let app = Expr::app;
    let predicate = match s.kind {
        StructureKind::Intransitive => slot(Cat::VP),
        StructureKind::Transitive => app("mkVP", vec![slot(Cat::V2), slot(Cat::NP)]),
        StructureKind::Catenative => app(
            "mkVP",
            vec![slot(Cat::VV), app("mkVP", vec![slot(Cat::V2), slot(Cat::NP)])],
        ),
        StructureKind::Copular if adjectival => slot(Cat::AP),
        StructureKind::Copular => slot(Cat::NP),
        StructureKind::Passive => app("passiveVP", vec![slot(Cat::V2)]),
    };
    app("mkCl", vec![slot(Cat::NP), predicate])
}

/// Whether `expr` instantiates `skeleton`, looking through adverbial
/// `mkVP VP Adv` wrappers.
fn fits(skeleton: &Expr, expr: &Expr, g: &Grammar, env: &BTreeMap<String, Cat>) -> bool {
    let cat_of = |e: &Expr| typecheck(e, g, env).ok();
    match skeleton {
        Expr::Var(cat) => cat_of(expr).is_some_and(|c| c.name() == cat),
        Expr::App { func, args } => {
            let mut e = expr;
            if func != "mkCl" {
                while e.head() == Some("mkVP")
                    && e.children().len() == 2
                    && cat_of(&e.children()[1]) == Some(Cat::Adv)
                {
                    e = &e.children()[0];
                }
            }
            e.head() == Some(func.as_str())
                && e.children().len() == args.len()
                && args.iter().zip(e.children()).all(|(s, c)| fits(s, c, g, env))
        }
        _ => false,
    }
}

/// Lowercase identifier from words: non-alphanumerics become `_`.
pub fn identifier(words: &[&str]) -> String {
    let mut out = String::new();
    for word in words {
        for c in word.chars() {
            if c.is_ascii_alphanumeric() {
                out.push(c.to_ascii_lowercase());
            } else if !out.ends_with('_') {
                out.push('_');
            }
        }
        if !out.ends_with('_') {
            out.push('_');
        }
    }
    let trimmed = out.trim_matches('_');
    match trimmed.chars().next() {
        None => "w".to_string(),
        Some(c) if c.is_ascii_digit() => format!("num_{trimmed}"),
        Some(_) => trimmed.to_string(),
    }
}

fn capitalized(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Name of the sentence function for a sentence id.
pub fn sentence_function_name(sentence_id: &str) -> String {
    let body: String = sentence_id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    format!("sent_{body}")
}

const PRONOUNS: &[(&str, &str)] = &[
    ("i", "i_Pron"),
    ("me", "i_Pron"),
    ("you", "youSg_Pron"),
    ("he", "he_Pron"),
    ("him", "he_Pron"),
    ("she", "she_Pron"),
    ("her", "she_Pron"),
    ("it", "it_Pron"),
    ("we", "we_Pron"),
    ("us", "we_Pron"),
    ("they", "they_Pron"),
    ("them", "they_Pron"),
];

fn is_nominal(pos: &str) -> bool {
    matches!(pos, "nn" | "nns" | "nnp" | "nnps" | "cd" | "prp")
}

fn is_plural(pos: &str) -> bool {
    matches!(pos, "nns" | "nnps")
}

/// Parameter bound by a template slot token such as `$2`.
fn slot_param(token: &Token) -> Option<String> {
    let n = token.surface.strip_prefix('$')?;
    (!n.is_empty() && n.chars().all(|c| c.is_ascii_digit())).then(|| format!("X{n}"))
}

/// `text` as it would appear mid-sentence: sentence-initial capitals of
/// ordinary words are dropped.
fn mid_sentence(token: &Token, text: &str) -> String {
    if token.index == 1 && token.pos != "nnp" && token.pos != "nnps" {
        let mut chars = text.chars();
        if let Some(first) = chars.next() {
            let rest = chars.as_str();
            if !rest.chars().any(char::is_uppercase) {
                return first.to_lowercase().chain(rest.chars()).collect();
            }
        }
    }
    text.to_string()
}

fn word(token: &Token) -> String {
    mid_sentence(token, &token.surface)
}

/// A main component realized for the abstract syntax.
#[derive(Debug, Clone)]
pub struct Component {
    pub role: Role,
    pub head: usize,
    pub category: &'static str,
    pub expr: Expr,
}

/// An encoded clause: the fully applied expression, its component
/// expressions, and the opers they rely on.
#[derive(Debug, Clone)]
pub struct EncodedClause {
    pub clause: Expr,
    pub components: Vec<Component>,
    pub opers: BTreeMap<String, Oper>,
}

struct Encoder<'a> {
    facts: &'a SentenceFacts,
    grammar: Grammar,
}

impl<'a> Encoder<'a> {
    fn token(&self, index: usize) -> Result<&'a Token, EncodeError> {
        self.facts.token(index).ok_or(EncodeError::UnknownToken(index))
    }

    /// Adds an oper, reusing an identical one and suffixing on a clash.
    fn intern(&mut self, base: String, definition: Expr) -> Expr {
        let mut name = base.clone();
        let mut n = 1;
        loop {
            match self.grammar.opers.get(&name) {
                Some(existing) if existing.definition == definition => return Expr::Oper(name),
                Some(_) => {
                    n += 1;
                    name = format!("{base}_{n}");
                }
                None => {
                    self.grammar.opers.insert(
                        name.clone(),
                        Oper {
                            name: name.clone(),
                            definition,
                        },
                    );
                    return Expr::Oper(name);
                }
            }
        }
    }

    fn apply(&self, inputs: &[Cat], output: Cat, args: Vec<Expr>) -> Result<Expr, EncodeError> {
        let rule = extended_rule(inputs, output)?;
        Ok(Expr::app(rule.constructor, args))
    }

    fn np(&mut self, chunk: &Chunk) -> Result<Expr, EncodeError> {
        let token = self.token(chunk.head)?;
        let mut np = if let Some(param) = slot_param(token) {
            Expr::Var(param)
        } else if let Some(pron) = self.pronoun(token) {
            self.apply(&[Cat::Pron], Cat::NP, vec![Expr::Lib(pron.to_string())])?
        } else if is_nominal(&token.pos) {
            self.noun_base(chunk)?
        } else {
            return Err(EncodeError::NotNominal {
                index: token.index,
                surface: token.surface.clone(),
                pos: token.pos.clone(),
            });
        };
        for attachment in &chunk.attachments {
            let adv = match attachment.kind {
                ComplementKind::Preposition => self.prepositional(attachment)?,
                ComplementKind::AdverbialModifier => self.adverb(&attachment.chunk)?,
                _ => continue,
            };
            np = self.apply(&[Cat::NP, Cat::Adv], Cat::NP, vec![np, adv])?;
        }
        let conjuncts: Vec<&ChunkAttachment> = chunk.attachments_of(ComplementKind::NounConjunction).collect();
        if conjuncts.is_empty() {
            return Ok(np);
        }
        let mut items = vec![np];
        for c in conjuncts {
            items.push(self.np(&c.chunk)?);
        }
        let n = items.len();
        let mut list = self.apply(&[Cat::NP, Cat::NP], Cat::ListNP, items.split_off(n - 2))?;
        while let Some(item) = items.pop() {
            list = self.apply(&[Cat::NP, Cat::ListNP], Cat::ListNP, vec![item, list])?;
        }
        let conj = Expr::Lib(self.coordinator(chunk).to_string());
        self.apply(&[Cat::Conj, Cat::ListNP], Cat::NP, vec![conj, list])
    }

    fn pronoun(&self, token: &Token) -> Option<&'static str> {
        if token.pos != "prp" {
            return None;
        }
        let lower = token.surface.to_lowercase();
        PRONOUNS.iter().find(|(w, _)| *w == lower).map(|(_, p)| *p)
    }

    /// `or` when a coordinator of the conjunction says so, else `and`.
    fn coordinator(&self, chunk: &Chunk) -> &'static str {
        let hosts = std::iter::once(chunk.head).chain(
            chunk
                .attachments_of(ComplementKind::NounConjunction)
                .map(|a| a.chunk.head),
        );
        for host in hosts {
            for cc in self.facts.dependents(host, "cc") {
                if let Ok(t) = self.token(cc) {
                    if t.surface.eq_ignore_ascii_case("or") {
                        return "or_Conj";
                    }
                }
            }
        }
        "and_Conj"
    }

    /// Noun with its compounds and adjectives, as a noun phrase.
    fn noun_base(&mut self, chunk: &Chunk) -> Result<Expr, EncodeError> {
        let mut compound_tokens = Vec::new();
        let mut adjectives: Vec<&Chunk> = Vec::new();
        collect_noun_parts(chunk, &mut compound_tokens, &mut adjectives);
        compound_tokens.sort_unstable();
        adjectives.sort_by_key(|c| c.head);

        let head = self.token(chunk.head)?;
        let proper = matches!(head.pos.as_str(), "nnp" | "nnps" | "prp" | "cd");
        let mut modifiers = Vec::new();
        for &index in &compound_tokens {
            let t = self.token(index)?;
            modifiers.push(if proper { t.surface.clone() } else { word(t) });
        }
        let (head_sg, head_pl) = if proper {
            (head.surface.clone(), head.surface.clone())
        } else {
            let lemma = mid_sentence(head, &lexical_lemma(head));
            let plural = if is_plural(&head.pos) {
                word(head)
            } else {
                pluralize_noun(&lemma)
            };
            (lemma, plural)
        };
        let prefix: String = modifiers.iter().map(|m| format!("{m} ")).collect();
        let sg = format!("{prefix}{head_sg}");
        let pl = format!("{prefix}{head_pl}");
        let noun_words: Vec<&str> = sg.split(' ').collect();
        let mut name_words: Vec<String> = noun_words.iter().map(|w| w.to_string()).collect();
        let noun = self.intern(
            format!("{}_N", identifier(&noun_words)),
            Expr::app("mkN", vec![Expr::string(sg.clone()), Expr::string(pl)]),
        );

        let mut current = noun;
        let mut current_cat = Cat::N;
        for adj in adjectives.iter().rev() {
            let (ap, words) = self.adjective_phrase(adj)?;
            let mut all: Vec<String> = words;
            all.extend(name_words);
            name_words = all;
            let refs: Vec<&str> = name_words.iter().map(String::as_str).collect();
            let cn = self.apply(&[Cat::AP, current_cat], Cat::CN, vec![ap, current])?;
            current = self.intern(format!("{}_CN", identifier(&refs)), cn);
            current_cat = Cat::CN;
        }
        let np = self.apply(&[current_cat], Cat::NP, vec![current])?;
        Ok(if is_plural(&head.pos) { np.plural() } else { np })
    }

    /// Adjective chunk as an AP oper, with the words naming it.
    fn adjective_phrase(&mut self, chunk: &Chunk) -> Result<(Expr, Vec<String>), EncodeError> {
        let t = self.token(chunk.head)?;
        let w = word(t);
        let a = self.intern(
            format!("{}_A", identifier(&[&w])),
            Expr::app("mkA", vec![Expr::string(w.clone())]),
        );
        let ap = self.apply(&[Cat::A], Cat::AP, vec![a])?;
        let mut ap = self.intern(format!("{}_AP", identifier(&[&w])), ap);
        let mut words = vec![w];
        let modifiers: Vec<&ChunkAttachment> = chunk.attachments_of(ComplementKind::AdverbialModifier).collect();
        for m in modifiers.iter().rev() {
            let adv_words = self.chunk_words(&m.chunk)?;
            let text = adv_words.join(" ");
            let refs: Vec<&str> = adv_words.iter().map(String::as_str).collect();
            let ada = self.intern(
                format!("{}_AdA", identifier(&refs)),
                Expr::app("mkAdA", vec![Expr::string(text)]),
            );
            let mut all = adv_words.clone();
            all.extend(words);
            words = all;
            let refs: Vec<&str> = words.iter().map(String::as_str).collect();
            let grown = self.apply(&[Cat::AdA, Cat::AP], Cat::AP, vec![ada, ap])?;
            ap = self.intern(format!("{}_AP", identifier(&refs)), grown);
        }
        Ok((ap, words))
    }

    /// Surface words of a chunk in sentence order.
    fn chunk_words(&self, chunk: &Chunk) -> Result<Vec<String>, EncodeError> {
        chunk
            .tokens()
            .into_iter()
            .map(|i| self.token(i).map(word))
            .collect()
    }

    fn adverb(&mut self, chunk: &Chunk) -> Result<Expr, EncodeError> {
        let words = self.chunk_words(chunk)?;
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        Ok(self.intern(
            format!("{}_Adv", identifier(&refs)),
            Expr::app("mkAdv", vec![Expr::string(words.join(" "))]),
        ))
    }

    fn prepositional(&mut self, attachment: &ChunkAttachment) -> Result<Expr, EncodeError> {
        let words: Vec<String> = attachment
            .case_markers
            .iter()
            .map(|&i| self.token(i).map(|t| word(t).to_lowercase()))
            .collect::<Result<_, _>>()?;
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let prep = self.intern(
            format!("{}_Prep", identifier(&refs)),
            Expr::app("mkPrep", vec![Expr::string(words.join(" "))]),
        );
        let object = self.np(&attachment.chunk)?;
        self.apply(&[Cat::Prep, Cat::NP], Cat::Adv, vec![prep, object])
    }

    /// Lexical verb oper of category V, V2 or VV.
    fn verb(&mut self, index: usize, cat: Cat) -> Result<Expr, EncodeError> {
        let t = self.token(index)?;
        let lemma = lexical_lemma(t).to_lowercase();
        let surface = t.surface.to_lowercase();
        let third = if t.pos == "vbz" { surface.clone() } else { inflect_verb_3sg(&lemma) };
        let participle = if t.pos == "vbn" { surface.clone() } else { past_participle(&lemma) };
        let irregular = third != inflect_verb_3sg(&lemma) || participle != past_participle(&lemma);
        let v = if irregular {
            Expr::app(
                "mkV",
                vec![
                    Expr::string(lemma.clone()),
                    Expr::string(third),
                    Expr::string(past_tense(&lemma)),
                    Expr::string(participle),
                    Expr::string(present_participle(&lemma)),
                ],
            )
        } else {
            Expr::app("mkV", vec![Expr::string(lemma.clone())])
        };
        let definition = match cat {
            Cat::V => v,
            Cat::V2 if !irregular => Expr::app("mkV2", vec![Expr::string(lemma.clone())]),
            Cat::V2 => Expr::app("mkV2", vec![v]),
            _ => Expr::app("mkVV", vec![v]),
        };
        Ok(self.intern(format!("{}_{}", identifier(&[&lemma]), cat.name()), definition))
    }

    /// Wraps a verb phrase with the adverbials hanging off its verb.
    fn modified(&mut self, mut vp: Expr, verb: usize) -> Result<Expr, EncodeError> {
        let chunk = crate::components::build_chunk(self.facts, verb);
        for attachment in &chunk.attachments {
            let adv = match attachment.kind {
                ComplementKind::Preposition => self.prepositional(attachment)?,
                ComplementKind::AdverbialModifier => self.adverb(&attachment.chunk)?,
                _ => continue,
            };
            vp = self.apply(&[Cat::VP, Cat::Adv], Cat::VP, vec![vp, adv])?;
        }
        Ok(vp)
    }
}

fn collect_noun_parts<'c>(chunk: &'c Chunk, compounds: &mut Vec<usize>, adjectives: &mut Vec<&'c Chunk>) {
    for a in &chunk.attachments {
        match a.kind {
            ComplementKind::NounCompound => {
                compounds.push(a.chunk.head);
                collect_noun_parts(&a.chunk, compounds, adjectives);
            }
            ComplementKind::AdjMod => adjectives.push(&a.chunk),
            _ => {}
        }
    }
}

fn required(map: &ComponentMap, role: Role) -> Result<usize, EncodeError> {
    map.get(role).ok_or(EncodeError::MissingRole(role))
}

/// Encodes the clause for structure `s` with role assignment `map`. Slot
/// tokens (`$1`, `$2`, ...) become parameters `X1`, `X2`, ...
pub fn encode_clause(
    facts: &SentenceFacts,
    s: StructureAtom,
    map: &ComponentMap,
    chunks: &BTreeMap<Role, Chunk>,
) -> Result<EncodedClause, EncodeError> {
    let mut enc = Encoder {
        facts,
        grammar: Grammar::new("Fragment"),
    };
    let chunk = |role: Role| -> Result<Chunk, EncodeError> {
        match chunks.get(&role) {
            Some(c) => Ok(c.clone()),
            None => Ok(crate::components::build_chunk(facts, required(map, role)?)),
        }
    };
    let mut components = Vec::new();
    let mut component = |role: Role, head: usize, category: &'static str, expr: &Expr| {
        components.push(Component {
            role,
            head,
            category,
            expr: expr.clone(),
        })
    };

    let sub = enc.np(&chunk(Role::Sub)?)?;
    component(Role::Sub, map.sub, ENTITY, &sub);
    let (predicate, adjectival) = match s.kind {
        StructureKind::Intransitive => {
            let verb = required(map, Role::Verb)?;
            let v = enc.verb(verb, Cat::V)?;
            component(Role::Verb, verb, EVENT, &v);
            (enc.modified(Expr::app("mkVP", vec![v]), verb)?, false)
        }
        StructureKind::Transitive => {
            let verb = required(map, Role::Verb)?;
            let v = enc.verb(verb, Cat::V2)?;
            component(Role::Verb, verb, ACTION, &v);
            let obj = enc.np(&chunk(Role::Obj)?)?;
            component(Role::Obj, required(map, Role::Obj)?, ENTITY, &obj);
            (enc.modified(Expr::app("mkVP", vec![v, obj]), verb)?, false)
        }
        StructureKind::Catenative => {
            let (v1, v2) = (required(map, Role::Verb1)?, required(map, Role::Verb2)?);
            let vv = enc.verb(v1, Cat::VV)?;
            component(Role::Verb1, v1, INTENT, &vv);
            let v = enc.verb(v2, Cat::V2)?;
            component(Role::Verb2, v2, ACTION, &v);
            let obj = enc.np(&chunk(Role::Obj)?)?;
            component(Role::Obj, required(map, Role::Obj)?, ENTITY, &obj);
            let inner = enc.modified(Expr::app("mkVP", vec![v, obj]), v2)?;
            (enc.modified(Expr::app("mkVP", vec![vv, inner]), v1)?, false)
        }
        StructureKind::Copular => match map.adj {
            Some(adj) => {
                let (ap, _) = enc.adjective_phrase(&chunk(Role::Adj)?)?;
                component(Role::Adj, adj, QUALITY, &ap);
                (ap, true)
            }
            None => {
                let obj = enc.np(&chunk(Role::Obj)?)?;
                component(Role::Obj, required(map, Role::Obj)?, ENTITY, &obj);
                (obj, false)
            }
        },
        StructureKind::Passive => {
            let verb = required(map, Role::Verb)?;
            let v = enc.verb(verb, Cat::V2)?;
            component(Role::Verb, verb, ACTION, &v);
            (enc.modified(Expr::app("passiveVP", vec![v]), verb)?, false)
        }
    };
    let clause = Expr::app("mkCl", vec![sub, predicate]);

    let slots: BTreeMap<String, Cat> = clause
        .vars()
        .into_iter()
        .map(|v| (v.to_string(), Cat::NP))
        .collect();
    if !fits(&top_rule(s, adjectival), &clause, &enc.grammar, &slots) {
        return Err(EncodeError::Shape {
            structure: s,
            found: clause.to_string(),
        });
    }
    Ok(EncodedClause {
        clause,
        components,
        opers: enc.grammar.opers,
    })
}

/// The grammar fragment for one recognized sentence: a closed `sent_<id>`
/// clause plus one constant per main component.
pub fn encode_sentence(
    facts: &SentenceFacts,
    s: StructureAtom,
    map: &ComponentMap,
    chunks: &BTreeMap<Role, Chunk>,
) -> Result<SentenceGrammar, EncodeError> {
    let encoded = encode_clause(facts, s, map, chunks)?;
    let mut g = Grammar::new(sentence_function_name(&facts.sentence_id));
    g.opers = encoded.opers;
    let sent = sentence_function_name(&facts.sentence_id);
    g.functions
        .insert(sent.clone(), Function::constant(sent, crate::gf::MESSAGE, encoded.clause));
    let lincat = |category: &str| match category {
        ENTITY => Cat::NP,
        ACTION => Cat::V2,
        EVENT => Cat::V,
        INTENT => Cat::VV,
        _ => Cat::AP,
    };
    for c in &encoded.components {
        if !c.expr.vars().is_empty() {
            continue;
        }
        g.declare_category(c.category, lincat(c.category));
        let lemma = facts.token(c.head).map(lexical_lemma).unwrap_or_default();
        let base = capitalized(&identifier(&[&lemma]));
        let mut name = base.clone();
        let mut n = 1;
        while let Some(existing) = g.functions.get(&name) {
            if existing.lin == c.expr && existing.result == c.category {
                break;
            }
            n += 1;
            name = format!("{base}_{n}");
        }
        g.functions
            .insert(name.clone(), Function::constant(name, c.category, c.expr.clone()));
    }
    g.check()?;
    Ok(g)
}
