//! Union of sentence fragments into one grammar, and its source files.

use std::collections::{BTreeMap, BTreeSet};

use crate::gf::{natural_cmp, render_abstract, render_concrete, Function, Grammar, Oper};

/// Fragments in a canonical order so the union does not depend on input order.
fn canonical(fragments: &[Grammar]) -> Vec<&Grammar> {
    let key = |g: &Grammar| {
        let first = g
            .ordered_functions()
            .iter()
            .find(|f| f.arg_categories.is_empty() && f.result == g.start)
            .map(|f| f.name.clone())
            .unwrap_or_default();
        (first, serde_json::to_string(g).unwrap_or_default())
    };
    let mut keyed: Vec<(_, &Grammar)> = fragments.iter().map(|g| (key(g), g)).collect();
    keyed.sort_by(|(a, _), (b, _)| natural_cmp(&a.0, &b.0).then_with(|| a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, g)| g).collect()
}

/// Opers of `g` with every oper listed after the opers it refers to.
fn dependency_order(g: &Grammar) -> Vec<&Oper> {
    fn visit<'g>(name: &str, g: &'g Grammar, done: &mut BTreeSet<String>, out: &mut Vec<&'g Oper>) {
        if !done.insert(name.to_string()) {
            return;
        }
        if let Some(oper) = g.opers.get(name) {
            for dep in oper.definition.opers() {
                visit(dep, g, done, out);
            }
            out.push(oper);
        }
    }
    let mut done = BTreeSet::new();
    let mut out = Vec::new();
    for name in g.opers.keys() {
        visit(name, g, &mut done, &mut out);
    }
    out
}

/// First name among `base`, `base_2`, `base_3`, ... that is free or already
/// bound to a value equal to `same`.
fn free_name<T>(base: &str, taken: &BTreeMap<String, T>, same: impl Fn(&T) -> bool) -> String {
    let mut name = base.to_string();
    let mut n = 1;
    while let Some(existing) = taken.get(&name) {
        if same(existing) {
            break;
        }
        n += 1;
        name = format!("{base}_{n}");
    }
    name
}

/// Union of grammar fragments. Identical definitions collapse; a clashing
/// name gets the first free numeric suffix and references follow the rename.
pub fn merge(fragments: &[Grammar]) -> Grammar {
    let mut out = Grammar::new("Grammar");
    for fragment in canonical(fragments) {
        out.categories.extend(fragment.categories.iter().cloned());
        for (cat, lincat) in &fragment.lincats {
            if let Some(existing) = out.lincats.get(cat) {
                if existing != lincat {
                    log::warn!("category {cat} has lincats {existing} and {lincat}; keeping {existing}");
                }
                continue;
            }
            out.lincats.insert(cat.clone(), *lincat);
        }
        let mut renames = BTreeMap::new();
        for oper in dependency_order(fragment) {
            let mut definition = oper.definition.clone();
            definition.rename_opers(&renames);
            let name = free_name(&oper.name, &out.opers, |o: &Oper| o.definition == definition);
            if name != oper.name {
                renames.insert(oper.name.clone(), name.clone());
            }
            out.opers.insert(name.clone(), Oper { name, definition });
        }
        for function in fragment.functions.values() {
            let mut f = function.clone();
            f.lin.rename_opers(&renames);
            let name = free_name(&f.name, &out.functions, |g: &Function| {
                g.lin == f.lin && g.params == f.params && g.arg_categories == f.arg_categories && g.result == f.result
            });
            f.name = name.clone();
            out.functions.insert(name, f);
        }
    }
    out
}

/// The abstract and English concrete source of `g` under module name `name`.
pub fn render(g: &Grammar, name: &str) -> (String, String) {
    (render_abstract(g, name), render_concrete(g, name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{Cat, Expr};

    fn fragment(sent: &str, noun: &str, plural: &str) -> Grammar {
        let mut g = Grammar::new(sent);
        g.declare_category("Entity", Cat::NP);
        let n = Expr::app("mkN", vec![Expr::string(noun), Expr::string(plural)]);
        let name = format!("{noun}_N");
        g.opers.insert(
            name.clone(),
            Oper {
                name: name.clone(),
                definition: n,
            },
        );
        let np = Expr::app("mkNP", vec![Expr::oper(&name)]);
        let cl = Expr::app("mkCl", vec![np.clone(), np.clone()]);
        g.functions
            .insert(sent.into(), Function::constant(sent, "Message", cl));
        g.functions.insert("Thing".into(), Function::constant("Thing", "Entity", np));
        g
    }

    #[test]
    fn identical_opers_collapse() {
        let g = merge(&[fragment("sent_a", "friend", "friends"), fragment("sent_b", "friend", "friends")]);
        assert_eq!(g.opers.len(), 1);
        assert_eq!(g.functions.len(), 3);
        g.check().unwrap();
    }

    #[test]
    fn clashing_opers_are_suffixed() {
        let g = merge(&[fragment("sent_a", "fish", "fish"), fragment("sent_b", "fish", "fishes")]);
        assert_eq!(g.opers.keys().collect::<Vec<_>>(), ["fish_N", "fish_N_2"]);
        assert!(g.functions.contains_key("Thing_2"));
        assert!(g.functions["sent_b"].lin.opers().contains("fish_N_2"));
        g.check().unwrap();
    }

    #[test]
    fn empty_merge() {
        let g = merge(&[]);
        assert_eq!(g, Grammar::new("Grammar"));
        let (abs, conc) = render(&g, "Empty");
        assert!(abs.contains("flags startcat = Message ;"));
        crate::gf::grammar_from_sources(&[abs, conc]).unwrap();
    }
}
