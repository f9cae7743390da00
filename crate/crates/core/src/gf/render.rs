//! GF source rendering in the layout of the resource-library tutorials.

use std::fmt::Write;

use super::{Expr, Grammar};

/// Renders an expression as it appears on the right-hand side of `=`.
pub fn render_expr(expr: &Expr) -> String {
    match expr {
        Expr::Plural(inner) => render_expr(inner),
        Expr::App { func, args } => {
            let mut out = func.clone();
            for arg in args {
                out.push(' ');
                out.push_str(&render_arg(arg));
            }
            out
        }
        leaf => render_leaf(leaf),
    }
}

fn render_leaf(expr: &Expr) -> String {
    match expr {
        Expr::Oper(n) | Expr::Lib(n) | Expr::Var(n) => n.clone(),
        Expr::Str(s) => quote(s),
        other => render_expr(other),
    }
}

/// Argument position: applications are parenthesized, with a space before
/// the closing parenthesis when the group ends in a named constant.
fn render_arg(expr: &Expr) -> String {
    match expr {
        Expr::Plural(inner) => render_arg(inner),
        Expr::App { func, args } if args.is_empty() => func.clone(),
        Expr::App { args, .. } => {
            let pad = match args.last().map(strip_number) {
                Some(Expr::Oper(_)) | Some(Expr::Lib(_)) => " ",
                _ => "",
            };
            format!("({}{pad})", render_expr(expr))
        }
        leaf => render_leaf(leaf),
    }
}

fn strip_number(expr: &Expr) -> &Expr {
    match expr {
        Expr::Plural(inner) => strip_number(inner),
        other => other,
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

pub fn render_abstract(g: &Grammar, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "abstract {name} = {{");
    let _ = writeln!(out, "  flags startcat = {} ;", g.start);
    if !g.categories.is_empty() {
        out.push_str("cat\n");
        for cat in &g.categories {
            let _ = writeln!(out, "  {cat} ;");
        }
    }
    let functions = g.ordered_functions();
    if !functions.is_empty() {
        out.push_str("fun\n");
        for f in functions {
            let mut ty: Vec<&str> = f.arg_categories.iter().map(String::as_str).collect();
            ty.push(&f.result);
            let _ = writeln!(out, "  {} : {} ;", f.name, ty.join(" -> "));
        }
    }
    out.push_str("}\n");
    out
}

pub fn render_concrete(g: &Grammar, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "concrete {name}Eng of {name} =");
    out.push_str("open SyntaxEng, ParadigmsEng, ConstructorsEng in {\n");
    if !g.lincats.is_empty() {
        out.push_str("lincat\n");
        for (cat, lincat) in &g.lincats {
            let _ = writeln!(out, "  {cat} = {lincat} ;");
        }
    }
    let functions = g.ordered_functions();
    if !functions.is_empty() {
        out.push_str("lin\n");
        for f in functions {
            let mut lhs = f.name.clone();
            for p in &f.params {
                lhs.push(' ');
                lhs.push_str(p);
            }
            let _ = writeln!(out, "  {lhs} = {} ;", render_expr(&f.lin));
        }
    }
    if !g.opers.is_empty() {
        out.push_str("oper\n");
        for oper in g.opers.values() {
            let _ = writeln!(out, "  {} = {} ;", oper.name, render_expr(&oper.definition));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{Cat, Function};

    #[test]
    fn golden_spacing() {
        let e = Expr::app(
            "mkNP",
            vec![
                Expr::app("mkNP", vec![Expr::oper("popular_board_game_CN")]),
                Expr::app(
                    "ConstructorsEng.mkAdv",
                    vec![
                        Expr::oper("with_Prep"),
                        Expr::app("mkNP", vec![Expr::oper("close_friend_CN")]).plural(),
                    ],
                ),
            ],
        );
        assert_eq!(
            render_expr(&e),
            "mkNP (mkNP popular_board_game_CN ) (ConstructorsEng.mkAdv with_Prep (mkNP close_friend_CN ))"
        );
        let cl = Expr::app(
            "mkCl",
            vec![
                Expr::Var("People".into()),
                Expr::app("mkVP", vec![Expr::Var("Action".into()), Expr::Var("Entity".into())]),
            ],
        );
        assert_eq!(render_expr(&cl), "mkCl People (mkVP Action Entity)");
        let vv = Expr::app("mkVV", vec![Expr::app("mkV", vec![Expr::string("want")])]);
        assert_eq!(render_expr(&vv), "mkVV (mkV \"want\")");
    }

    #[test]
    fn escapes_strings() {
        assert_eq!(render_expr(&Expr::string("a\"b")), "\"a\\\"b\"");
    }

    #[test]
    fn layout() {
        let mut g = Grammar::new("People");
        g.declare_category("People", Cat::NP);
        g.functions.insert(
            "Bill".into(),
            Function::constant("Bill", "People", Expr::app("mkNP", vec![Expr::oper("Bill_N")])),
        );
        let abs = render_abstract(&g, "People");
        assert_eq!(
            abs,
            "abstract People = {\n  flags startcat = Message ;\ncat\n  Message ;\n  People ;\nfun\n  Bill : People ;\n}\n"
        );
        let conc = render_concrete(&g, "People");
        assert!(conc.starts_with("concrete PeopleEng of People =\nopen SyntaxEng, ParadigmsEng, ConstructorsEng in {\nlincat\n"));
        assert!(conc.contains("  Bill = mkNP Bill_N ;\n"));
        assert!(!conc.contains("oper\n"));
    }
}
