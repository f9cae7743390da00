//! In-memory Grammatical Framework grammars: abstract functions, concrete
//! linearizations and opers over a subset of the English resource library.

mod render;
mod signature;
mod syntax;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use render::{render_abstract, render_concrete, render_expr};
pub use signature::{library_constant, signatures_for, typecheck, Signature, TypeError};
pub use syntax::{grammar_from_sources, parse_source, GfSource, SyntaxError};

/// The start category of every generated grammar.
pub const MESSAGE: &str = "Message";

/// Resource-library categories used by linearization types and constructors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Cat {
    Cl,
    NP,
    VP,
    V,
    V2,
    VV,
    CN,
    AP,
    A,
    N,
    Adv,
    AdA,
    Prep,
    Conj,
    ListNP,
    Pron,
    Str,
}

impl Cat {
    pub const ALL: [Cat; 17] = [
        Cat::Cl,
        Cat::NP,
        Cat::VP,
        Cat::V,
        Cat::V2,
        Cat::VV,
        Cat::CN,
        Cat::AP,
        Cat::A,
        Cat::N,
        Cat::Adv,
        Cat::AdA,
        Cat::Prep,
        Cat::Conj,
        Cat::ListNP,
        Cat::Pron,
        Cat::Str,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Cat::Cl => "Cl",
            Cat::NP => "NP",
            Cat::VP => "VP",
            Cat::V => "V",
            Cat::V2 => "V2",
            Cat::VV => "VV",
            Cat::CN => "CN",
            Cat::AP => "AP",
            Cat::A => "A",
            Cat::N => "N",
            Cat::Adv => "Adv",
            Cat::AdA => "AdA",
            Cat::Prep => "Prep",
            Cat::Conj => "Conj",
            Cat::ListNP => "ListNP",
            Cat::Pron => "Pron",
            Cat::Str => "Str",
        }
    }
}

impl fmt::Display for Cat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Cat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Cat::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown resource category {s:?}"))
    }
}

/// A constructor expression as it appears in `lin` and `oper` bodies.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    /// Constructor application; `func` may carry a module qualifier.
    App { func: String, args: Vec<Expr> },
    /// Reference to an oper of the same grammar.
    Oper(String),
    /// Resource-library constant such as `and_Conj` or `he_Pron`.
    Lib(String),
    /// Parameter of the enclosing linearization rule.
    Var(String),
    Str(String),
    /// Marks a noun phrase used in the plural. Rendered as its inner
    /// expression; only the built-in linearizer reads it.
    Plural(Box<Expr>),
}

impl Expr {
    pub fn app(func: impl Into<String>, args: Vec<Expr>) -> Expr {
        Expr::App {
            func: func.into(),
            args,
        }
    }

    pub fn oper(name: impl Into<String>) -> Expr {
        Expr::Oper(name.into())
    }

    pub fn string(s: impl Into<String>) -> Expr {
        Expr::Str(s.into())
    }

    pub fn plural(self) -> Expr {
        match self {
            Expr::Plural(_) => self,
            other => Expr::Plural(Box::new(other)),
        }
    }

    /// Head constructor name without module qualifier.
    pub fn head(&self) -> Option<&str> {
        match self {
            Expr::App { func, .. } => Some(unqualified(func)),
            Expr::Plural(inner) => inner.head(),
            _ => None,
        }
    }

    pub fn children(&self) -> &[Expr] {
        match self {
            Expr::App { args, .. } => args,
            Expr::Plural(inner) => std::slice::from_ref(inner),
            _ => &[],
        }
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        for child in self.children() {
            child.visit(f);
        }
    }

    pub fn opers(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let Expr::Oper(name) = e {
                out.insert(name.as_str());
            }
        });
        out
    }

    /// Every parameter occurrence, in left-to-right order.
    pub fn vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Var(name) = e {
                out.push(name.as_str());
            }
        });
        out
    }

    pub fn rename_opers(&mut self, renames: &BTreeMap<String, String>) {
        match self {
            Expr::Oper(name) => {
                if let Some(new) = renames.get(name) {
                    *name = new.clone();
                }
            }
            Expr::App { args, .. } => args.iter_mut().for_each(|a| a.rename_opers(renames)),
            Expr::Plural(inner) => inner.rename_opers(renames),
            _ => {}
        }
    }

    /// Replaces parameters by the given expressions.
    pub fn substitute(&self, bindings: &BTreeMap<String, Expr>) -> Expr {
        match self {
            Expr::Var(v) => bindings.get(v).cloned().unwrap_or_else(|| self.clone()),
            Expr::App { func, args } => Expr::App {
                func: func.clone(),
                args: args.iter().map(|a| a.substitute(bindings)).collect(),
            },
            Expr::Plural(inner) => Expr::Plural(Box::new(inner.substitute(bindings))),
            other => other.clone(),
        }
    }

    /// Drops plural markers, leaving exactly what the GF source shows.
    pub fn erase_number(&self) -> Expr {
        match self {
            Expr::Plural(inner) => inner.erase_number(),
            Expr::App { func, args } => Expr::App {
                func: func.clone(),
                args: args.iter().map(Expr::erase_number).collect(),
            },
            other => other.clone(),
        }
    }
}

pub(crate) fn unqualified(name: &str) -> &str {
    name.rsplit('.').next().unwrap_or(name)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_expr(self))
    }
}

/// An abstract function together with its English linearization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Function {
    pub name: String,
    pub arg_categories: Vec<String>,
    pub result: String,
    /// Parameter names bound by the linearization rule, one per argument.
    pub params: Vec<String>,
    pub lin: Expr,
}

impl Function {
    pub fn constant(name: impl Into<String>, result: impl Into<String>, lin: Expr) -> Self {
        Function {
            name: name.into(),
            arg_categories: Vec::new(),
            result: result.into(),
            params: Vec::new(),
            lin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Oper {
    pub name: String,
    pub definition: Expr,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("category {0} is used but not declared")]
    UndeclaredCategory(String),
    #[error("category {0} has no linearization type")]
    MissingLincat(String),
    #[error("oper {0} is referenced but not defined")]
    DanglingOper(String),
    #[error("oper {0} is defined but never used")]
    OrphanOper(String),
    #[error("function {function}: parameter {param} must occur exactly once, found {count}")]
    ParamUse {
        function: String,
        param: String,
        count: usize,
    },
    #[error("function {function}: {source}")]
    Type {
        function: String,
        #[source]
        source: TypeError,
    },
    #[error("{0} is not a valid GF identifier")]
    BadIdentifier(String),
}

/// A grammar: one abstract syntax plus its English concrete syntax.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grammar {
    pub name: String,
    pub start: String,
    pub categories: BTreeSet<String>,
    pub lincats: BTreeMap<String, Cat>,
    pub functions: BTreeMap<String, Function>,
    pub opers: BTreeMap<String, Oper>,
}

/// A fragment produced for a single sentence; same shape as a full grammar.
pub type SentenceGrammar = Grammar;

impl Default for Grammar {
    fn default() -> Self {
        Grammar::new("Grammar")
    }
}

impl Grammar {
    /// An empty grammar declaring only the start category.
    pub fn new(name: impl Into<String>) -> Self {
        Grammar {
            name: name.into(),
            start: MESSAGE.to_string(),
            categories: BTreeSet::from([MESSAGE.to_string()]),
            lincats: BTreeMap::from([(MESSAGE.to_string(), Cat::Cl)]),
            functions: BTreeMap::new(),
            opers: BTreeMap::new(),
        }
    }

    pub fn declare_category(&mut self, name: &str, lincat: Cat) {
        self.categories.insert(name.to_string());
        self.lincats.insert(name.to_string(), lincat);
    }

    pub fn function(&self, name: &str) -> Option<&Function> {
        self.functions.get(name)
    }

    /// Functions in rendering order: natural order of their names, so
    /// `sent_s2` precedes `sent_s10`.
    pub fn ordered_functions(&self) -> Vec<&Function> {
        let mut out: Vec<&Function> = self.functions.values().collect();
        out.sort_by(|a, b| natural_cmp(&a.name, &b.name));
        out
    }

    pub fn oper_category(&self, name: &str) -> Option<Cat> {
        let oper = self.opers.get(name)?;
        typecheck(&oper.definition, self, &BTreeMap::new()).ok()
    }

    /// Opers reachable from the linearization rules.
    pub fn reachable_opers(&self) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<String> = self
            .functions
            .values()
            .flat_map(|f| f.lin.opers())
            .map(String::from)
            .collect();
        while let Some(name) = stack.pop() {
            if !seen.insert(name.clone()) {
                continue;
            }
            if let Some(oper) = self.opers.get(&name) {
                stack.extend(oper.definition.opers().into_iter().map(String::from));
            }
        }
        seen
    }

    /// Checks that the grammar is closed and every linearization type-checks.
    pub fn check(&self) -> Result<(), GrammarError> {
        for name in self
            .functions
            .keys()
            .chain(self.opers.keys())
            .chain(self.categories.iter())
        {
            if !is_identifier(name) {
                return Err(GrammarError::BadIdentifier(name.clone()));
            }
        }
        for cat in &self.categories {
            if !self.lincats.contains_key(cat) {
                return Err(GrammarError::MissingLincat(cat.clone()));
            }
        }
        let reachable = self.reachable_opers();
        for name in &reachable {
            if !self.opers.contains_key(name) {
                return Err(GrammarError::DanglingOper(name.clone()));
            }
        }
        for name in self.opers.keys() {
            if !reachable.contains(name) {
                return Err(GrammarError::OrphanOper(name.clone()));
            }
        }
        for function in self.functions.values() {
            for cat in function.arg_categories.iter().chain([&function.result]) {
                if !self.categories.contains(cat) {
                    return Err(GrammarError::UndeclaredCategory(cat.clone()));
                }
            }
            let uses = function.lin.vars();
            for param in &function.params {
                let count = uses.iter().filter(|v| **v == param).count();
                if count != 1 {
                    return Err(GrammarError::ParamUse {
                        function: function.name.clone(),
                        param: param.clone(),
                        count,
                    });
                }
            }
            let env: BTreeMap<String, Cat> = function
                .params
                .iter()
                .zip(&function.arg_categories)
                .map(|(p, c)| (p.clone(), self.lincats[c]))
                .collect();
            let expected = self.lincats[&function.result];
            let type_err = |source| GrammarError::Type {
                function: function.name.clone(),
                source,
            };
            let found = typecheck(&function.lin, self, &env).map_err(type_err)?;
            if !signature::accepts(expected, found) {
                return Err(type_err(TypeError::Mismatch {
                    expected,
                    found,
                    context: function.name.clone(),
                }));
            }
        }
        Ok(())
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Orders strings treating digit runs as numbers.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(&cb) {
        let ord = match (x, y) {
            ((true, nx), (true, ny)) => {
                let (tx, ty) = (nx.trim_start_matches('0'), ny.trim_start_matches('0'));
                tx.len().cmp(&ty.len()).then_with(|| tx.cmp(ty))
            }
            ((_, sx), (_, sy)) => sx.cmp(sy),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut names = vec!["sent_s10", "sent_s2", "Game", "sent_s1", "Bill"];
        names.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(names, ["Bill", "Game", "sent_s1", "sent_s2", "sent_s10"]);
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("board_game_N"));
        assert!(is_identifier("Bill"));
        assert!(!is_identifier("42_N"));
        assert!(!is_identifier("a-b"));
    }

    #[test]
    fn expr_helpers() {
        let e = Expr::app(
            "mkNP",
            vec![
                Expr::app("mkNP", vec![Expr::oper("a_CN")]).plural(),
                Expr::app(
                    "ConstructorsEng.mkAdv",
                    vec![Expr::oper("with_Prep"), Expr::Var("X".into())],
                ),
            ],
        );
        assert_eq!(e.opers(), BTreeSet::from(["a_CN", "with_Prep"]));
        assert_eq!(e.vars(), vec!["X"]);
        assert_eq!(e.children()[1].head(), Some("mkAdv"));
        let mut renamed = e.clone();
        renamed.rename_opers(&BTreeMap::from([("a_CN".into(), "a_CN_2".into())]));
        assert!(renamed.opers().contains("a_CN_2"));
        assert_eq!(e.erase_number().to_string(), e.to_string());
    }

    #[test]
    fn empty_grammar_is_well_formed() {
        let g = Grammar::new("Empty");
        assert!(g.check().is_ok());
        assert_eq!(g.categories.len(), 1);
    }
}
