//! English realization of the supported constructor subset: present tense,
//! third-person agreement, no articles.

pub mod morphology;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf::{typecheck, unqualified, Cat, Expr, Grammar, TypeError};
pub use morphology::{inflect_verb_3sg, past_participle, pluralize_noun};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinearizeError {
    #[error("unknown function {0}")]
    UnknownFunction(String),
    #[error("{function} takes {expected} arguments, {given} given")]
    Arity {
        function: String,
        expected: usize,
        given: usize,
    },
    #[error("{function}: argument {position} must be {expected}, found {found}")]
    Argument {
        function: String,
        position: usize,
        expected: String,
        found: String,
    },
    #[error("{function}: {source}")]
    Type {
        function: String,
        #[source]
        source: TypeError,
    },
    #[error("cannot realize {0}")]
    Unsupported(String),
    #[error("bad tree at {position}: {message}")]
    Tree { position: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Number {
    Singular,
    Plural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Person {
    First,
    Second,
    Third,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Verb {
    base: String,
    third: String,
    participle: String,
}

impl Verb {
    fn regular(lemma: &str) -> Self {
        Verb {
            base: lemma.to_string(),
            third: inflect_verb_3sg(lemma),
            participle: past_participle(lemma),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct NounPhrase {
    nom: String,
    acc: String,
    number: Number,
    person: Person,
}

impl NounPhrase {
    fn third(s: String, number: Number) -> Self {
        NounPhrase {
            nom: s.clone(),
            acc: s,
            number,
            person: Person::Third,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Head {
    Verb(Verb),
    Copula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct VerbPhrase {
    head: Head,
    rest: String,
}

impl VerbPhrase {
    fn finite(&self, subject: &NounPhrase) -> String {
        let verb = match (&self.head, subject.number, subject.person) {
            (Head::Copula, Number::Singular, Person::First) => "am".to_string(),
            (Head::Copula, Number::Singular, Person::Third) => "is".to_string(),
            (Head::Copula, _, _) => "are".to_string(),
            (Head::Verb(v), Number::Singular, Person::Third) => v.third.clone(),
            (Head::Verb(v), _, _) => v.base.clone(),
        };
        join(&[&verb, &self.rest])
    }

    fn infinitive(&self) -> String {
        let verb = match &self.head {
            Head::Copula => "be",
            Head::Verb(v) => &v.base,
        };
        join(&[verb, &self.rest])
    }

    fn with(head: Head, rest: String) -> Value {
        Value::VP(VerbPhrase { head, rest })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Value {
    Str(String),
    N { sg: String, pl: String },
    CN { sg: String, pl: String },
    A(String),
    AP(String),
    AdA(String),
    Adv(String),
    Prep(String),
    Conj(String),
    V(Verb),
    V2(Verb),
    VV(Verb),
    NP(NounPhrase),
    ListNP(Vec<NounPhrase>),
    VP(VerbPhrase),
    Cl(String),
}

impl Value {
    fn describe(&self) -> &'static str {
        match self {
            Value::Str(_) => "Str",
            Value::N { .. } => "N",
            Value::CN { .. } => "CN",
            Value::A(_) => "A",
            Value::AP(_) => "AP",
            Value::AdA(_) => "AdA",
            Value::Adv(_) => "Adv",
            Value::Prep(_) => "Prep",
            Value::Conj(_) => "Conj",
            Value::V(_) => "V",
            Value::V2(_) => "V2",
            Value::VV(_) => "VV",
            Value::NP(_) => "NP",
            Value::ListNP(_) => "ListNP",
            Value::VP(_) => "VP",
            Value::Cl(_) => "Cl",
        }
    }

    fn text(&self) -> String {
        match self {
            Value::Str(s)
            | Value::A(s)
            | Value::AP(s)
            | Value::AdA(s)
            | Value::Adv(s)
            | Value::Prep(s)
            | Value::Conj(s)
            | Value::Cl(s) => s.clone(),
            Value::N { sg, .. } | Value::CN { sg, .. } => sg.clone(),
            Value::V(v) | Value::V2(v) | Value::VV(v) => v.base.clone(),
            Value::NP(np) => np.nom.clone(),
            Value::ListNP(items) => items.iter().map(|i| i.nom.as_str()).collect::<Vec<_>>().join(", "),
            Value::VP(vp) => vp.infinitive(),
        }
    }
}

fn join(parts: &[&str]) -> String {
    parts
        .iter()
        .flat_map(|p| p.split_whitespace())
        .collect::<Vec<_>>()
        .join(" ")
}

fn pronoun(name: &str) -> Option<NounPhrase> {
    let (nom, acc, number, person) = match unqualified(name) {
        "i_Pron" => ("I", "me", Number::Singular, Person::First),
        "youSg_Pron" => ("you", "you", Number::Singular, Person::Second),
        "he_Pron" => ("he", "him", Number::Singular, Person::Third),
        "she_Pron" => ("she", "her", Number::Singular, Person::Third),
        "it_Pron" => ("it", "it", Number::Singular, Person::Third),
        "we_Pron" => ("we", "us", Number::Plural, Person::First),
        "youPl_Pron" => ("you", "you", Number::Plural, Person::Second),
        "they_Pron" => ("they", "them", Number::Plural, Person::Third),
        _ => return None,
    };
    Some(NounPhrase {
        nom: nom.into(),
        acc: acc.into(),
        number,
        person,
    })
}

fn coordinate(conj: &str, items: &[NounPhrase]) -> NounPhrase {
    let list = |f: fn(&NounPhrase) -> &str| match items {
        [] => String::new(),
        [one] => f(one).to_string(),
        [init @ .., last] => {
            let init: Vec<&str> = init.iter().map(f).collect();
            format!("{} {conj} {}", init.join(", "), f(last))
        }
    };
    let number = match (conj, items.last()) {
        ("and", _) | (_, None) => Number::Plural,
        (_, Some(last)) => last.number,
    };
    NounPhrase {
        nom: list(|np| &np.nom),
        acc: list(|np| &np.acc),
        number,
        person: Person::Third,
    }
}

struct Evaluator<'g> {
    grammar: &'g Grammar,
    env: BTreeMap<String, Value>,
}

impl Evaluator<'_> {
    fn eval(&self, expr: &Expr, plural: bool) -> Result<Value, LinearizeError> {
        match expr {
            Expr::Str(s) => Ok(Value::Str(s.clone())),
            Expr::Var(v) => self
                .env
                .get(v)
                .cloned()
                .ok_or_else(|| LinearizeError::Unsupported(format!("unbound parameter {v}"))),
            Expr::Lib(name) => {
                if let Some(np) = pronoun(name) {
                    return Ok(Value::NP(np));
                }
                match unqualified(name) {
                    "and_Conj" => Ok(Value::Conj("and".into())),
                    "or_Conj" => Ok(Value::Conj("or".into())),
                    other => Err(LinearizeError::Unsupported(other.to_string())),
                }
            }
            Expr::Oper(name) => {
                let oper = self
                    .grammar
                    .opers
                    .get(name)
                    .ok_or_else(|| LinearizeError::Unsupported(format!("oper {name}")))?;
                let scope = Evaluator {
                    grammar: self.grammar,
                    env: BTreeMap::new(),
                };
                scope.eval(&oper.definition, plural)
            }
            Expr::Plural(inner) => match self.eval(inner, true)? {
                Value::NP(mut np) => {
                    np.number = Number::Plural;
                    Ok(Value::NP(np))
                }
                other => Ok(other),
            },
            Expr::App { func, args } => {
                let values = args
                    .iter()
                    .map(|a| self.eval(a, false))
                    .collect::<Result<Vec<_>, _>>()?;
                apply(unqualified(func), values, plural)
            }
        }
    }
}

fn apply(func: &str, args: Vec<Value>, plural: bool) -> Result<Value, LinearizeError> {
    use Value::*;
    let number = if plural { Number::Plural } else { Number::Singular };
    let value = match (func, args.as_slice()) {
        ("mkN", [Str(s)]) => N {
            sg: s.clone(),
            pl: pluralize_noun(s),
        },
        ("mkN", [Str(s), Str(p)]) => N {
            sg: s.clone(),
            pl: p.clone(),
        },
        ("mkA", [Str(s)]) => A(s.clone()),
        ("mkV", [Str(s)]) => V(Verb::regular(s)),
        ("mkV", [Str(b), Str(t), Str(_), Str(p), Str(_)]) => V(Verb {
            base: b.clone(),
            third: t.clone(),
            participle: p.clone(),
        }),
        ("mkV2", [Str(s)]) => V2(Verb::regular(s)),
        ("mkV2", [V(v)]) => V2(v.clone()),
        ("mkVV", [V(v)]) => VV(v.clone()),
        ("mkPrep", [Str(s)]) => Prep(s.clone()),
        ("mkAdv", [Str(s)]) => Adv(s.clone()),
        ("mkAdv", [Prep(p), NP(np)]) => Adv(join(&[p, &np.acc])),
        ("mkAdA", [Str(s)]) => AdA(s.clone()),
        ("mkAP", [A(a)]) => AP(a.clone()),
        ("mkAP", [AdA(d), AP(a)]) => AP(join(&[d, a])),
        ("mkCN", [N { sg, pl }]) => CN {
            sg: sg.clone(),
            pl: pl.clone(),
        },
        ("mkCN", [AP(a), N { sg, pl } | CN { sg, pl }]) => CN {
            sg: join(&[a, sg]),
            pl: join(&[a, pl]),
        },
        ("mkNP", [N { sg, pl } | CN { sg, pl }]) => {
            let form = if plural { pl } else { sg };
            NP(NounPhrase::third(form.clone(), number))
        }
        ("mkNP", [NP(np)]) => NP(np.clone()),
        ("mkNP", [NP(np), Adv(a)]) => NP(NounPhrase {
            nom: join(&[&np.nom, a]),
            acc: join(&[&np.acc, a]),
            ..np.clone()
        }),
        ("mkNP", [Conj(c), ListNP(items)]) => NP(coordinate(c, items)),
        ("mkListNP", [NP(a), NP(b)]) => ListNP(vec![a.clone(), b.clone()]),
        ("mkListNP", [NP(a), ListNP(rest)]) => {
            let mut items = vec![a.clone()];
            items.extend(rest.iter().cloned());
            ListNP(items)
        }
        ("symb", [Str(s)]) => NP(NounPhrase::third(s.clone(), Number::Singular)),
        ("mkVP", [V(v)]) => VerbPhrase::with(Head::Verb(v.clone()), String::new()),
        ("mkVP", [V2(v), NP(o)]) => VerbPhrase::with(Head::Verb(v.clone()), o.acc.clone()),
        ("mkVP", [VV(v), VP(inner)]) => {
            VerbPhrase::with(Head::Verb(v.clone()), join(&["to", &inner.infinitive()]))
        }
        ("mkVP", [VP(vp), Adv(a)]) => VerbPhrase::with(vp.head.clone(), join(&[&vp.rest, a])),
        ("mkVP", [AP(a)]) => VerbPhrase::with(Head::Copula, a.clone()),
        ("mkVP", [NP(np)]) => VerbPhrase::with(Head::Copula, np.nom.clone()),
        ("passiveVP", [V2(v)]) => VerbPhrase::with(Head::Copula, v.participle.clone()),
        ("mkCl", [NP(s), VP(vp)]) => Cl(join(&[&s.nom, &vp.finite(s)])),
        ("mkCl", [NP(_), V(_) | V2(_) | AP(_) | NP(_)]) | ("mkCl", [NP(_), V2(_), NP(_)]) => {
            let mut args = args.clone();
            let subject = args.remove(0);
            let vp = apply("mkVP", args, false)?;
            return apply("mkCl", vec![subject, vp], false);
        }
        _ => {
            let found: Vec<&str> = args.iter().map(Value::describe).collect();
            return Err(LinearizeError::Unsupported(format!("{func} ({})", found.join(", "))));
        }
    };
    Ok(value)
}

/// An abstract syntax tree: functions applied to subtrees, with quoted
/// symbols standing for noun phrases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbsTree {
    App(String, Vec<AbsTree>),
    Symbol(String),
}

impl AbsTree {
    pub fn leaf(name: impl Into<String>) -> Self {
        AbsTree::App(name.into(), Vec::new())
    }
}

impl fmt::Display for AbsTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsTree::Symbol(s) => write!(f, "{s:?}"),
            AbsTree::App(name, kids) => {
                f.write_str(name)?;
                for kid in kids {
                    match kid {
                        AbsTree::App(_, k) if !k.is_empty() => write!(f, " ({kid})")?,
                        _ => write!(f, " {kid}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for AbsTree {
    type Err = LinearizeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        #[derive(Debug)]
        enum Tok {
            Ident(String),
            Str(String),
            Open,
            Close,
        }
        let err = |position: usize, message: &str| LinearizeError::Tree {
            position,
            message: message.to_string(),
        };
        let mut toks = Vec::new();
        let mut chars = s.char_indices().peekable();
        while let Some(&(i, c)) = chars.peek() {
            match c {
                c if c.is_whitespace() => {
                    chars.next();
                }
                '(' => {
                    chars.next();
                    toks.push((i, Tok::Open));
                }
                ')' => {
                    chars.next();
                    toks.push((i, Tok::Close));
                }
                '"' => {
                    chars.next();
                    let mut text = String::new();
                    loop {
                        match chars.next() {
                            Some((_, '"')) => break,
                            Some((_, '\\')) => match chars.next() {
                                Some((_, e)) => text.push(e),
                                None => return Err(err(i, "unterminated string")),
                            },
                            Some((_, ch)) => text.push(ch),
                            None => return Err(err(i, "unterminated string")),
                        }
                    }
                    toks.push((i, Tok::Str(text)));
                }
                c if c.is_alphanumeric() || c == '_' => {
                    let mut name = String::new();
                    while let Some(&(_, ch)) = chars.peek() {
                        if ch.is_alphanumeric() || ch == '_' || ch == '\'' {
                            name.push(ch);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    toks.push((i, Tok::Ident(name)));
                }
                _ => return Err(err(i, "unexpected character")),
            }
        }

        fn atom(toks: &[(usize, Tok)], pos: &mut usize) -> Result<AbsTree, LinearizeError> {
            let err = |position: usize, message: &str| LinearizeError::Tree {
                position,
                message: message.to_string(),
            };
            let (at, tok) = toks.get(*pos).ok_or_else(|| err(usize::MAX, "unexpected end"))?;
            *pos += 1;
            match tok {
                Tok::Ident(n) => Ok(AbsTree::leaf(n.clone())),
                Tok::Str(s) => Ok(AbsTree::Symbol(s.clone())),
                Tok::Open => {
                    let inner = tree(toks, pos)?;
                    match toks.get(*pos) {
                        Some((_, Tok::Close)) => {
                            *pos += 1;
                            Ok(inner)
                        }
                        _ => Err(err(*at, "unbalanced parenthesis")),
                    }
                }
                Tok::Close => Err(err(*at, "unexpected ')'")),
            }
        }

        fn tree(toks: &[(usize, Tok)], pos: &mut usize) -> Result<AbsTree, LinearizeError> {
            let head = atom(toks, pos)?;
            let AbsTree::App(name, mut kids) = head else {
                return Ok(head);
            };
            if !kids.is_empty() {
                return Ok(AbsTree::App(name, kids));
            }
            while let Some((_, t)) = toks.get(*pos) {
                if matches!(t, Tok::Close) {
                    break;
                }
                kids.push(atom(toks, pos)?);
            }
            Ok(AbsTree::App(name, kids))
        }

        let mut pos = 0;
        let t = tree(&toks, &mut pos)?;
        if let Some((at, _)) = toks.get(pos) {
            return Err(err(*at, "trailing input"));
        }
        Ok(t)
    }
}

fn eval_tree(g: &Grammar, tree: &AbsTree) -> Result<(Value, String), LinearizeError> {
    let (name, kids) = match tree {
        AbsTree::Symbol(s) => {
            return Ok((Value::NP(NounPhrase::third(s.clone(), Number::Singular)), "NP".into()))
        }
        AbsTree::App(name, kids) => (name, kids),
    };
    let f = g
        .function(name)
        .ok_or_else(|| LinearizeError::UnknownFunction(name.clone()))?;
    if kids.len() != f.params.len() {
        return Err(LinearizeError::Arity {
            function: name.clone(),
            expected: f.params.len(),
            given: kids.len(),
        });
    }
    let mut env = BTreeMap::new();
    let mut env_cats = BTreeMap::new();
    for (i, ((param, cat), kid)) in f.params.iter().zip(&f.arg_categories).zip(kids).enumerate() {
        let (value, kid_cat) = eval_tree(g, kid)?;
        let lincat = g.lincats.get(cat).copied();
        let fits = match kid {
            AbsTree::Symbol(_) => lincat == Some(Cat::NP),
            AbsTree::App(..) => &kid_cat == cat,
        };
        if !fits {
            return Err(LinearizeError::Argument {
                function: name.clone(),
                position: i + 1,
                expected: cat.clone(),
                found: kid_cat,
            });
        }
        env.insert(param.clone(), value);
        env_cats.insert(param.clone(), lincat.unwrap_or(Cat::NP));
    }
    typecheck(&f.lin, g, &env_cats).map_err(|source| LinearizeError::Type {
        function: name.clone(),
        source,
    })?;
    let value = Evaluator { grammar: g, env }.eval(&f.lin, false)?;
    Ok((value, f.result.clone()))
}

/// Realizes a tree of grammar functions as an English string.
pub fn linearize_tree(g: &Grammar, tree: &AbsTree) -> Result<String, LinearizeError> {
    let (value, _) = eval_tree(g, tree)?;
    Ok(join(&[&value.text()]))
}

/// Realizes a zero-argument function of `g`.
pub fn linearize(g: &Grammar, function: &str) -> Result<String, LinearizeError> {
    linearize_tree(g, &AbsTree::leaf(function))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{grammar_from_sources, Function, Oper};

    const ABSTRACT: &str = "abstract People = {
  flags startcat = Message ;
  cat Message ; People ; Action ; Entity ;
  fun simple_sent : People -> Action -> Entity -> Message ;
      Bill : People;  Play : Action;   Soccer : Entity ; }";

    const CONCRETE: &str = "concrete PeopleEng of People =
open SyntaxEng, ParadigmsEng, ConstructorsEng in {
lincat
  Message = Cl ; People = NP ; Action = V2 ; Entity = NP ;
lin
  simple_sent People Action Entity = mkCl People (mkVP Action Entity) ;
  Bill = mkNP Bill_N; Play = play_V2; Soccer = mkNP soccer_N;
oper
  Bill_N = mkN \"Bill\" \"Bill\"; play_V2 = mkV2 \"play\";
  soccer_N = mkN \"soccer\"; }";

    fn people() -> Grammar {
        grammar_from_sources(&[ABSTRACT, CONCRETE]).unwrap()
    }

    fn with_lin(lin: Expr, opers: &[(&str, Expr)]) -> Grammar {
        let mut g = Grammar::new("T");
        for (n, d) in opers {
            g.opers.insert(
                n.to_string(),
                Oper {
                    name: n.to_string(),
                    definition: d.clone(),
                },
            );
        }
        g.functions.insert("s".into(), Function::constant("s", "Message", lin));
        g
    }

    fn s(x: &str) -> Expr {
        Expr::string(x)
    }

    fn app(f: &str, args: Vec<Expr>) -> Expr {
        Expr::app(f, args)
    }

    #[test]
    fn bill_plays_soccer() {
        let tree: AbsTree = "simple_sent Bill Play Soccer".parse().unwrap();
        assert_eq!(linearize_tree(&people(), &tree).unwrap(), "Bill plays soccer");
        assert_eq!(linearize(&people(), "Soccer").unwrap(), "soccer");
    }

    #[test]
    fn tree_errors() {
        let g = people();
        assert_eq!(
            linearize(&g, "simple_sent"),
            Err(LinearizeError::Arity {
                function: "simple_sent".into(),
                expected: 3,
                given: 0
            })
        );
        let swapped: AbsTree = "simple_sent Bill Soccer Play".parse().unwrap();
        assert!(matches!(linearize_tree(&g, &swapped), Err(LinearizeError::Argument { position: 2, .. })));
        assert!(matches!(linearize(&g, "Nobody"), Err(LinearizeError::UnknownFunction(_))));
        let symbols: AbsTree = "simple_sent \"Kevin\" Play (Soccer)".parse().unwrap();
        assert_eq!(linearize_tree(&g, &symbols).unwrap(), "Kevin plays soccer");
        assert!("simple_sent (Bill".parse::<AbsTree>().is_err());
    }

    #[test]
    fn agreement_and_copula() {
        let friends = app("mkNP", vec![app("mkN", vec![s("friend")])]).plural();
        let tall = app("mkAP", vec![app("mkA", vec![s("tall")])]);
        let g = with_lin(app("mkCl", vec![friends.clone(), tall.clone()]), &[]);
        assert_eq!(linearize(&g, "s").unwrap(), "friends are tall");
        let g = with_lin(app("mkCl", vec![Expr::app("mkNP", vec![Expr::Lib("i_Pron".into())]), tall]), &[]);
        assert_eq!(linearize(&g, "s").unwrap(), "I am tall");
        let watch = app("mkV2", vec![s("watch")]);
        let g = with_lin(
            app("mkCl", vec![app("mkNP", vec![Expr::Lib("she_Pron".into())]), app("mkVP", vec![watch, app("mkNP", vec![Expr::Lib("they_Pron".into())])])]),
            &[],
        );
        assert_eq!(linearize(&g, "s").unwrap(), "she watches them");
    }

    #[test]
    fn passive_catenative_and_lists() {
        let n = |w: &str| app("mkNP", vec![app("mkN", vec![s(w)])]);
        let pass = app("mkCl", vec![n("rice"), app("passiveVP", vec![app("mkV2", vec![s("grow")])])]);
        assert_eq!(linearize(&with_lin(pass, &[]), "s").unwrap(), "rice is grown");
        let want = app("mkVV", vec![app("mkV", vec![s("want")])]);
        let cat = app(
            "mkCl",
            vec![n("Ann"), app("mkVP", vec![want, app("mkVP", vec![app("mkV2", vec![s("buy")]), n("car")])])],
        );
        assert_eq!(linearize(&with_lin(cat, &[]), "s").unwrap(), "Ann wants to buy car");
        let list = app(
            "mkNP",
            vec![
                Expr::Lib("and_Conj".into()),
                app("mkListNP", vec![n("salt"), app("mkListNP", vec![n("pepper"), n("oil")])]),
            ],
        );
        let cl = app("mkCl", vec![list, app("mkVP", vec![app("mkV", vec![s("matter")])])]);
        assert_eq!(linearize(&with_lin(cl, &[]), "s").unwrap(), "salt, pepper and oil matter");
    }

    #[test]
    fn ill_typed() {
        let g = with_lin(app("mkCl", vec![app("mkA", vec![s("x")])]), &[]);
        assert!(matches!(linearize(&g, "s"), Err(LinearizeError::Type { .. })));
    }
}
