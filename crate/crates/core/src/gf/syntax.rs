//! Reader for the GF source subset this crate writes: one abstract module
//! and one English concrete module built on the resource library.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{is_identifier, signatures_for, Cat, Expr, Function, Grammar, Oper};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("line {line}: {message}")]
    At { line: usize, message: String },
    #[error("{0}")]
    Module(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    Sym(&'static str),
}

fn at(line: usize, message: impl Into<String>) -> SyntaxError {
    SyntaxError::At {
        line,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut line = 1;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => {
                line += 1;
                i += 1;
            }
            c if c.is_whitespace() => i += 1,
            '-' if chars.get(i + 1) == Some(&'-') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Sym("->"), line));
                i += 2;
            }
            '{' if chars.get(i + 1) == Some(&'-') => {
                let start = line;
                i += 2;
                loop {
                    match chars.get(i) {
                        None => return Err(at(start, "unterminated comment")),
                        Some('-') if chars.get(i + 1) == Some(&'}') => {
                            i += 2;
                            break;
                        }
                        Some('\n') => line += 1,
                        _ => {}
                    }
                    i += 1;
                }
            }
            '"' => {
                let start = line;
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None | Some('\n') => return Err(at(start, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => {
                            let escaped = chars.get(i + 1).ok_or_else(|| at(start, "unterminated string"))?;
                            s.push(*escaped);
                            i += 1;
                        }
                        Some(ch) => s.push(*ch),
                    }
                    i += 1;
                }
                i += 1;
                out.push((Tok::Str(s), line));
            }
            '{' | '}' | '=' | ';' | ':' | '(' | ')' | ',' => {
                let sym = match c {
                    '{' => "{",
                    '}' => "}",
                    '=' => "=",
                    ';' => ";",
                    ':' => ":",
                    '(' => "(",
                    ')' => ")",
                    _ => ",",
                };
                out.push((Tok::Sym(sym), line));
                i += 1;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || matches!(chars[i], '_' | '\'' | '.'))
                {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), line));
            }
            other => return Err(at(line, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

const KEYWORDS: &[&str] = &["flags", "cat", "fun", "lincat", "lin", "oper"];

/// Unresolved right-hand side: identifiers are classified once every oper
/// and parameter name is known.
#[derive(Debug, Clone)]
enum Raw {
    Ident(String),
    Str(String),
    Apply(Vec<Raw>),
}

/// One parsed module.
#[derive(Debug, Clone)]
pub enum GfSource {
    Abstract {
        name: String,
        start: Option<String>,
        categories: Vec<String>,
        functions: Vec<(String, Vec<String>, String)>,
    },
    Concrete {
        name: String,
        of: String,
        opens: Vec<String>,
        lincats: Vec<(String, Cat)>,
        lins: Vec<(String, Vec<String>, Expr)>,
        opers: Vec<(String, Expr)>,
    },
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.1)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn next(&mut self) -> Result<Tok, SyntaxError> {
        let tok = self
            .toks
            .get(self.pos)
            .map(|t| t.0.clone())
            .ok_or_else(|| at(self.line(), "unexpected end of input"))?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect(&mut self, sym: &'static str) -> Result<(), SyntaxError> {
        match self.next()? {
            Tok::Sym(s) if s == sym => Ok(()),
            other => Err(at(self.line(), format!("expected {sym:?}, found {other:?}"))),
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.next()? {
            Tok::Ident(s) => Ok(s),
            other => Err(at(self.line(), format!("expected identifier, found {other:?}"))),
        }
    }

    fn at_sym(&self, sym: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym)
    }

    fn at_section_end(&self) -> bool {
        match self.peek() {
            None => true,
            Some(Tok::Sym("}")) => true,
            Some(Tok::Ident(w)) => KEYWORDS.contains(&w.as_str()),
            _ => false,
        }
    }

    fn module(&mut self) -> Result<GfSource, SyntaxError> {
        let kind = self.ident()?;
        let name = self.ident()?;
        let mut source = match kind.as_str() {
            "abstract" => {
                self.expect("=")?;
                GfSource::Abstract {
                    name,
                    start: None,
                    categories: Vec::new(),
                    functions: Vec::new(),
                }
            }
            "concrete" => {
                if self.ident()? != "of" {
                    return Err(at(self.line(), "expected `of`"));
                }
                let of = self.ident()?;
                self.expect("=")?;
                let mut opens = Vec::new();
                if matches!(self.peek(), Some(Tok::Ident(w)) if w == "open") {
                    self.pos += 1;
                    loop {
                        opens.push(self.ident()?);
                        if self.at_sym(",") {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                    if self.ident()? != "in" {
                        return Err(at(self.line(), "expected `in`"));
                    }
                }
                GfSource::Concrete {
                    name,
                    of,
                    opens,
                    lincats: Vec::new(),
                    lins: Vec::new(),
                    opers: Vec::new(),
                }
            }
            other => return Err(at(self.line(), format!("unknown module kind {other:?}"))),
        };
        self.expect("{")?;
        let mut raw_lins = Vec::new();
        let mut raw_opers = Vec::new();
        while !self.at_sym("}") {
            let keyword = self.ident()?;
            if !KEYWORDS.contains(&keyword.as_str()) {
                return Err(at(self.line(), format!("expected a section keyword, found {keyword:?}")));
            }
            while !self.at_section_end() {
                match (&mut source, keyword.as_str()) {
                    (GfSource::Abstract { start, .. }, "flags") => {
                        let flag = self.ident()?;
                        self.expect("=")?;
                        let value = self.ident()?;
                        if flag == "startcat" {
                            *start = Some(value);
                        }
                    }
                    (GfSource::Concrete { .. }, "flags") => {
                        self.ident()?;
                        self.expect("=")?;
                        self.ident()?;
                    }
                    (GfSource::Abstract { categories, .. }, "cat") => categories.push(self.ident()?),
                    (GfSource::Abstract { functions, .. }, "fun") => {
                        let mut names = vec![self.ident()?];
                        while self.at_sym(",") {
                            self.pos += 1;
                            names.push(self.ident()?);
                        }
                        self.expect(":")?;
                        let mut ty = vec![self.ident()?];
                        while self.at_sym("->") {
                            self.pos += 1;
                            ty.push(self.ident()?);
                        }
                        let result = ty.pop().unwrap_or_default();
                        for name in names {
                            functions.push((name, ty.clone(), result.clone()));
                        }
                    }
                    (GfSource::Concrete { lincats, .. }, "lincat") => {
                        let cat = self.ident()?;
                        self.expect("=")?;
                        let line = self.line();
                        let lincat = self.ident()?.parse::<Cat>().map_err(|e| at(line, e))?;
                        lincats.push((cat, lincat));
                    }
                    (GfSource::Concrete { .. }, "lin") => {
                        let name = self.ident()?;
                        let mut params = Vec::new();
                        while !self.at_sym("=") {
                            params.push(self.ident()?);
                        }
                        self.expect("=")?;
                        raw_lins.push((name, params, self.expr()?));
                    }
                    (GfSource::Concrete { .. }, "oper") => {
                        let name = self.ident()?;
                        if self.at_sym(":") {
                            self.pos += 1;
                            self.ident()?;
                        }
                        self.expect("=")?;
                        raw_opers.push((name, self.expr()?));
                    }
                    (_, section) => {
                        return Err(at(self.line(), format!("section {section:?} not allowed here")))
                    }
                }
                self.expect(";")?;
            }
        }
        self.expect("}")?;
        if let Some((tok, line)) = self.toks.get(self.pos) {
            return Err(at(*line, format!("trailing input {tok:?}")));
        }
        if let GfSource::Concrete { lins, opers, .. } = &mut source {
            let oper_names: BTreeSet<String> = raw_opers.iter().map(|(n, _)| n.clone()).collect();
            let none = BTreeSet::new();
            *opers = raw_opers
                .iter()
                .map(|(n, r)| (n.clone(), resolve(r, &none, &oper_names)))
                .collect();
            *lins = raw_lins
                .iter()
                .map(|(n, params, r)| {
                    let params_set: BTreeSet<String> = params.iter().cloned().collect();
                    (n.clone(), params.clone(), resolve(r, &params_set, &oper_names))
                })
                .collect();
        }
        Ok(source)
    }

    fn expr(&mut self) -> Result<Raw, SyntaxError> {
        let mut items = Vec::new();
        while let Some(Tok::Ident(_) | Tok::Str(_) | Tok::Sym("(")) = self.peek() {
            items.push(self.atom()?);
        }
        match items.len() {
            0 => Err(at(self.line(), "expected an expression")),
            1 => Ok(items.pop().unwrap_or(Raw::Apply(Vec::new()))),
            _ => Ok(Raw::Apply(items)),
        }
    }

    fn atom(&mut self) -> Result<Raw, SyntaxError> {
        match self.next()? {
            Tok::Ident(s) => Ok(Raw::Ident(s)),
            Tok::Str(s) => Ok(Raw::Str(s)),
            Tok::Sym("(") => {
                let inner = self.expr()?;
                self.expect(")")?;
                Ok(inner)
            }
            other => Err(at(self.line(), format!("unexpected {other:?}"))),
        }
    }
}

fn resolve(raw: &Raw, params: &BTreeSet<String>, opers: &BTreeSet<String>) -> Expr {
    match raw {
        Raw::Str(s) => Expr::Str(s.clone()),
        Raw::Ident(name) if params.contains(name) => Expr::Var(name.clone()),
        Raw::Ident(name) if opers.contains(name) => Expr::Oper(name.clone()),
        Raw::Ident(name) if !signatures_for(name).is_empty() => Expr::app(name.clone(), Vec::new()),
        Raw::Ident(name) => Expr::Lib(name.clone()),
        Raw::Apply(items) => {
            let func = match &items[0] {
                Raw::Ident(name) => name.clone(),
                other => return resolve(other, params, opers),
            };
            Expr::app(func, items[1..].iter().map(|r| resolve(r, params, opers)).collect())
        }
    }
}

/// Parses a single abstract or concrete module.
pub fn parse_source(src: &str) -> Result<GfSource, SyntaxError> {
    let mut parser = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    parser.module()
}

/// Builds a grammar from an abstract module and its English concrete module,
/// given in any order. Other concrete modules are ignored.
pub fn grammar_from_sources<S: AsRef<str>>(sources: &[S]) -> Result<Grammar, SyntaxError> {
    let mut abstracts = Vec::new();
    let mut concretes = Vec::new();
    for src in sources {
        match parse_source(src.as_ref())? {
            a @ GfSource::Abstract { .. } => abstracts.push(a),
            c @ GfSource::Concrete { .. } => concretes.push(c),
        }
    }
    let Some(GfSource::Abstract {
        name,
        start,
        categories,
        functions,
    }) = abstracts.pop()
    else {
        return Err(SyntaxError::Module("no abstract module given".into()));
    };
    if !abstracts.is_empty() {
        return Err(SyntaxError::Module("more than one abstract module given".into()));
    }
    let concrete = concretes.into_iter().find(|c| match c {
        GfSource::Concrete { name: cname, of, .. } => of == &name && cname.ends_with("Eng"),
        _ => false,
    });
    let Some(GfSource::Concrete {
        lincats,
        lins,
        opers,
        ..
    }) = concrete
    else {
        return Err(SyntaxError::Module(format!("no English concrete module of {name}")));
    };

    let mut g = Grammar {
        name: name.clone(),
        start: start.unwrap_or_else(|| super::MESSAGE.to_string()),
        categories: categories.into_iter().collect(),
        lincats: lincats.into_iter().collect(),
        functions: BTreeMap::new(),
        opers: opers
            .into_iter()
            .map(|(n, definition)| (n.clone(), Oper { name: n, definition }))
            .collect(),
    };
    let mut lin_map: BTreeMap<String, (Vec<String>, Expr)> =
        lins.into_iter().map(|(n, p, e)| (n, (p, e))).collect();
    for (fname, args, result) in functions {
        let (params, lin) = lin_map
            .remove(&fname)
            .ok_or_else(|| SyntaxError::Module(format!("function {fname} has no linearization")))?;
        if params.len() != args.len() {
            return Err(SyntaxError::Module(format!(
                "function {fname} takes {} arguments but its linearization binds {}",
                args.len(),
                params.len()
            )));
        }
        g.functions.insert(
            fname.clone(),
            Function {
                name: fname,
                arg_categories: args,
                result,
                params,
                lin,
            },
        );
    }
    if let Some(extra) = lin_map.keys().next() {
        return Err(SyntaxError::Module(format!("linearization {extra} has no abstract function")));
    }
    if let Some(bad) = g.categories.iter().find(|c| !is_identifier(c)) {
        return Err(SyntaxError::Module(format!("bad category name {bad}")));
    }
    Ok(g)
}
