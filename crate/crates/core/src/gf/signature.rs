//! Constructor signatures for the supported slice of the resource library,
//! shared by the type checker and the linearizer.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{unqualified, Cat, Expr, Grammar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub func: &'static str,
    pub args: &'static [Cat],
    pub result: Cat,
}

const fn sig(func: &'static str, args: &'static [Cat], result: Cat) -> Signature {
    Signature { func, args, result }
}

use Cat::*;

const S5: &[Cat] = &[Str, Str, Str, Str, Str];

static SIGNATURES: &[Signature] = &[
    sig("mkN", &[Str], N),
    sig("mkN", &[Str, Str], N),
    sig("mkA", &[Str], A),
    sig("mkV", &[Str], V),
    sig("mkV", S5, V),
    sig("mkV2", &[Str], V2),
    sig("mkV2", &[V], V2),
    sig("mkVV", &[V], VV),
    sig("mkPrep", &[Str], Prep),
    sig("mkAdv", &[Str], Adv),
    sig("mkAdv", &[Prep, NP], Adv),
    sig("mkAdA", &[Str], AdA),
    sig("mkAP", &[A], AP),
    sig("mkAP", &[AdA, AP], AP),
    sig("mkCN", &[N], CN),
    sig("mkCN", &[AP, N], CN),
    sig("mkCN", &[AP, CN], CN),
    sig("mkNP", &[N], NP),
    sig("mkNP", &[CN], NP),
    sig("mkNP", &[Pron], NP),
    sig("mkNP", &[NP, Adv], NP),
    sig("mkNP", &[Conj, ListNP], NP),
    sig("mkListNP", &[NP, NP], ListNP),
    sig("mkListNP", &[NP, ListNP], ListNP),
    sig("mkVP", &[V], VP),
    sig("mkVP", &[V2, NP], VP),
    sig("mkVP", &[VV, VP], VP),
    sig("mkVP", &[VP, Adv], VP),
    sig("mkVP", &[AP], VP),
    sig("mkVP", &[NP], VP),
    sig("passiveVP", &[V2], VP),
    sig("mkCl", &[NP, VP], Cl),
    sig("mkCl", &[NP, V], Cl),
    sig("mkCl", &[NP, V2, NP], Cl),
    sig("mkCl", &[NP, AP], Cl),
    sig("mkCl", &[NP, NP], Cl),
    sig("symb", &[Str], NP),
];

const PRONOUNS: &[&str] = &[
    "i_Pron",
    "youSg_Pron",
    "he_Pron",
    "she_Pron",
    "it_Pron",
    "we_Pron",
    "youPl_Pron",
    "they_Pron",
];

const CONJUNCTIONS: &[&str] = &["and_Conj", "or_Conj"];

/// Every overload of a constructor, looked up without module qualifier.
pub fn signatures_for(func: &str) -> Vec<Signature> {
    let func = unqualified(func);
    SIGNATURES.iter().filter(|s| s.func == func).copied().collect()
}

/// Category of a resource-library constant such as `and_Conj`.
pub fn library_constant(name: &str) -> Option<Cat> {
    let name = unqualified(name);
    if PRONOUNS.contains(&name) {
        Some(Pron)
    } else if CONJUNCTIONS.contains(&name) {
        Some(Conj)
    } else {
        None
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("unknown constructor {0}")]
    UnknownConstructor(String),
    #[error("no overload of {func} takes ({})", join(.args))]
    NoOverload { func: String, args: Vec<Cat> },
    #[error("unknown oper {0}")]
    UnknownOper(String),
    #[error("unbound parameter {0}")]
    UnboundVar(String),
    #[error("unknown library constant {0}")]
    UnknownConstant(String),
    #[error("oper {0} refers to itself")]
    Cyclic(String),
    #[error("{context}: expected {expected}, found {found}")]
    Mismatch {
        expected: Cat,
        found: Cat,
        context: String,
    },
    #[error("plural marker on a {0}")]
    PluralNonNominal(Cat),
}

fn join(cats: &[Cat]) -> String {
    cats.iter().map(|c| c.name()).collect::<Vec<_>>().join(", ")
}

/// Whether a value of category `found` may stand where `expected` is required.
pub(crate) fn accepts(expected: Cat, found: Cat) -> bool {
    expected == found
}

/// Category of `expr` in the context of grammar `g`, with parameters typed by `env`.
pub fn typecheck(expr: &Expr, g: &Grammar, env: &BTreeMap<String, Cat>) -> Result<Cat, TypeError> {
    check(expr, g, env, &mut BTreeSet::new())
}

fn check<'a>(
    expr: &'a Expr,
    g: &'a Grammar,
    env: &BTreeMap<String, Cat>,
    active: &mut BTreeSet<&'a str>,
) -> Result<Cat, TypeError> {
    match expr {
        Expr::Str(_) => Ok(Str),
        Expr::Var(v) => env.get(v).copied().ok_or_else(|| TypeError::UnboundVar(v.clone())),
        Expr::Lib(name) => library_constant(name).ok_or_else(|| TypeError::UnknownConstant(name.clone())),
        Expr::Oper(name) => {
            let oper = g
                .opers
                .get(name)
                .ok_or_else(|| TypeError::UnknownOper(name.clone()))?;
            if !active.insert(name) {
                return Err(TypeError::Cyclic(name.clone()));
            }
            let cat = check(&oper.definition, g, &BTreeMap::new(), active);
            active.remove(name.as_str());
            cat
        }
        Expr::Plural(inner) => match check(inner, g, env, active)? {
            NP => Ok(NP),
            other => Err(TypeError::PluralNonNominal(other)),
        },
        Expr::App { func, args } => {
            let overloads = signatures_for(func);
            if overloads.is_empty() {
                return Err(TypeError::UnknownConstructor(func.clone()));
            }
            let arg_cats = args
                .iter()
                .map(|a| check(a, g, env, active))
                .collect::<Result<Vec<_>, _>>()?;
            overloads
                .iter()
                .find(|s| s.args == arg_cats.as_slice())
                .map(|s| s.result)
                .ok_or_else(|| TypeError::NoOverload {
                    func: func.clone(),
                    args: arg_cats,
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Oper;

    fn grammar_with(opers: &[(&str, Expr)]) -> Grammar {
        let mut g = Grammar::new("T");
        for (name, def) in opers {
            g.opers.insert(
                name.to_string(),
                Oper {
                    name: name.to_string(),
                    definition: def.clone(),
                },
            );
        }
        g
    }

    #[test]
    fn overloads_are_unique() {
        for (i, a) in SIGNATURES.iter().enumerate() {
            for b in &SIGNATURES[i + 1..] {
                assert!(!(a.func == b.func && a.args == b.args), "{}", a.func);
            }
        }
    }

    #[test]
    fn qualified_names_resolve() {
        assert_eq!(signatures_for("ConstructorsEng.mkAdv").len(), 2);
        assert_eq!(library_constant("and_Conj"), Some(Conj));
        assert_eq!(library_constant("she_Pron"), Some(Pron));
        assert_eq!(library_constant("with_Prep"), None);
    }

    #[test]
    fn checks_the_game_phrase() {
        let g = grammar_with(&[
            ("game_N", Expr::app("mkN", vec![Expr::string("game"), Expr::string("games")])),
            ("with_Prep", Expr::app("mkPrep", vec![Expr::string("with")])),
        ]);
        let np = Expr::app("mkNP", vec![Expr::oper("game_N")]);
        let e = Expr::app(
            "mkNP",
            vec![
                np.clone(),
                Expr::app("ConstructorsEng.mkAdv", vec![Expr::oper("with_Prep"), np.plural()]),
            ],
        );
        assert_eq!(typecheck(&e, &g, &BTreeMap::new()), Ok(NP));
    }

    #[test]
    fn reports_bad_arguments() {
        let g = grammar_with(&[("a_A", Expr::app("mkA", vec![Expr::string("a")]))]);
        let e = Expr::app("mkNP", vec![Expr::oper("a_A")]);
        assert!(matches!(
            typecheck(&e, &g, &BTreeMap::new()),
            Err(TypeError::NoOverload { .. })
        ));
        assert!(matches!(
            typecheck(&Expr::oper("missing"), &g, &BTreeMap::new()),
            Err(TypeError::UnknownOper(_))
        ));
    }

    #[test]
    fn detects_cycles() {
        let g = grammar_with(&[("x_NP", Expr::app("mkNP", vec![Expr::oper("x_NP"), Expr::Lib("and_Conj".into())]))]);
        assert_eq!(
            typecheck(&Expr::oper("x_NP"), &g, &BTreeMap::new()),
            Err(TypeError::Cyclic("x_NP".into()))
        );
    }
}
