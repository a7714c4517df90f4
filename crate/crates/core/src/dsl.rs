//! The line-oriented presentation language.
//!
//! ```text
//! algebra H1 over Q
//! gens: x, g, ginv
//! inverses: (g, ginv)
//! comul:
//!   x -> 1 (x) x + x (x) g
//!   g -> g (x) g
//! counit: x -> 0, g -> 1
//! antipode: x -> -x*ginv, g -> ginv
//! ```
//!
//! `#` starts a comment. Entries within a section are separated by commas
//! or line breaks. `(x)` separates tensor legs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::coeffs::{FieldSpec, Scalar};
use crate::error::{Error, ParseErrorKind, Result};
use crate::freealg::{Alphabet, Letter, NCPoly, TensorPoly, Word};
use crate::hopf::{HopfPresentation, HopfSpec, DEFAULT_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Arrow,
    Lt,
    Eq,
    Tensor,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Tensor => "`(x)`".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: Pos,
}

fn err(kind: ParseErrorKind, pos: Pos, msg: impl Into<String>) -> Error {
    Error::Parse {
        kind,
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos {
            line,
            col: col0 + i,
        };
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '<' => Some(Tok::Lt),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(t) = single {
            out.push(Token { tok: t, pos });
            i += 1;
        } else if c == '-' {
            if chars.get(i + 1) == Some(&'>') {
                out.push(Token { tok: Tok::Arrow, pos });
                i += 2;
            } else {
                out.push(Token { tok: Tok::Minus, pos });
                i += 1;
            }
        } else if c == '(' {
            if chars.get(i + 1) == Some(&'x') && chars.get(i + 2) == Some(&')') {
                out.push(Token { tok: Tok::Tensor, pos });
                i += 3;
            } else {
                out.push(Token { tok: Tok::LParen, pos });
                i += 1;
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Int(s.parse().expect("digits")),
                pos,
            });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                pos,
            });
        } else {
            return Err(err(ParseErrorKind::Lexical, pos, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// One comma- or line-separated entry of a section.
#[derive(Debug, Clone)]
struct Item {
    toks: Vec<Token>,
    pos: Pos,
}

#[derive(Debug, Clone, Default)]
struct Section {
    pos: Option<Pos>,
    items: Vec<Item>,
}

fn split_items(toks: Vec<Token>, fallback: Pos, items: &mut Vec<Item>) {
    let mut depth = 0i32;
    let mut cur: Vec<Token> = Vec::new();
    for t in toks {
        match t.tok {
            Tok::LParen | Tok::LBracket => depth += 1,
            Tok::RParen | Tok::RBracket => depth -= 1,
            _ => {}
        }
        if t.tok == Tok::Comma && depth == 0 {
            if !cur.is_empty() {
                let pos = cur[0].pos;
                items.push(Item {
                    toks: std::mem::take(&mut cur),
                    pos,
                });
            }
            continue;
        }
        cur.push(t);
    }
    if !cur.is_empty() {
        let pos = cur.first().map(|t| t.pos).unwrap_or(fallback);
        items.push(Item { toks: cur, pos });
    }
}

const SECTIONS: [&str; 12] = [
    "params",
    "gens",
    "inverses",
    "precedence",
    "rels",
    "comul",
    "counit",
    "antipode",
    "antipode_inv",
    "resolution",
    "coaction",
    "cap",
];

/// A resolution of the trivial left module by free modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionSpec {
    pub ranks: Vec<usize>,
    /// `maps[k]` is the matrix of `d_{k+1}`: one row per basis element of
    /// `P_{k+1}`, holding its image in `P_k`.
    pub maps: Vec<Vec<Vec<NCPoly>>>,
}

/// A coaction of the algebra on a commutative polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoactionSpec {
    pub vars: Alphabet,
    pub images: Vec<TensorPoly>,
}

/// Everything a presentation file says, in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationFile {
    pub name: String,
    pub field: FieldSpec,
    pub params: Vec<(String, Scalar)>,
    pub gens: Vec<String>,
    pub inverses: Vec<(String, String)>,
    pub precedence: Option<Vec<String>>,
    pub relations: Vec<NCPoly>,
    pub comul: BTreeMap<Letter, TensorPoly>,
    pub counit: BTreeMap<Letter, Scalar>,
    pub antipode: BTreeMap<Letter, NCPoly>,
    pub antipode_inv: Option<BTreeMap<Letter, NCPoly>>,
    pub cap: usize,
    pub resolution: Option<ResolutionSpec>,
    pub coaction: Option<CoactionSpec>,
    pub alphabet: Alphabet,
}

/// A parsed file together with its validated presentation.
#[derive(Debug, Clone)]
pub struct ParsedPresentation {
    pub file: PresentationFile,
    pub hopf: HopfPresentation,
}

struct ExprParser<'a> {
    toks: &'a [Token],
    i: usize,
    field: FieldSpec,
    params: &'a [(String, Scalar)],
    alphabet: &'a Alphabet,
    end: Pos,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map(|t| t.pos).unwrap_or(self.end)
    }

    fn syntax(&self, msg: impl Into<String>) -> Error {
        err(ParseErrorKind::Syntax, self.pos(), msg)
    }

    fn unexpected(&self, wanted: &str) -> Error {
        match self.toks.get(self.i) {
            Some(t) => self.syntax(format!("expected {wanted}, found {}", t.tok.describe())),
            None => self.syntax(format!("expected {wanted}, found end of entry")),
        }
    }

    fn done(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn expr(&mut self) -> Result<NCPoly> {
        let mut acc = self.signed_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.i += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.i += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn signed_term(&mut self) -> Result<NCPoly> {
        if self.peek() == Some(&Tok::Minus) {
            self.i += 1;
            return Ok(-&self.term()?);
        }
        if self.peek() == Some(&Tok::Plus) {
            self.i += 1;
        }
        self.term()
    }

    fn term(&mut self) -> Result<NCPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.i += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Slash) => {
                    self.i += 1;
                    let pos = self.pos();
                    let d = self.factor()?;
                    if d.degree().unwrap_or(0) > 0 {
                        return Err(err(ParseErrorKind::Semantic, pos, "can only divide by a scalar"));
                    }
                    let c = d.constant_term();
                    let inv = c
                        .inv()
                        .map_err(|_| err(ParseErrorKind::Semantic, pos, "division by zero"))?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<NCPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.i += 1;
            let pos = self.pos();
            let n = match self.peek() {
                Some(Tok::Int(n)) => n.clone(),
                _ => return Err(self.unexpected("a positive integer exponent")),
            };
            self.i += 1;
            let n: usize = n
                .try_into()
                .ok()
                .filter(|&n: &usize| (1..=64).contains(&n))
                .ok_or_else(|| err(ParseErrorKind::Semantic, pos, "exponent must be between 1 and 64"))?;
            let mut acc = base.clone();
            for _ in 1..n {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<NCPoly> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.i += 1;
                Ok(NCPoly::constant(self.field.from_bigint(&n)))
            }
            Some(Tok::Ident(name)) => {
                self.i += 1;
                if let Some((_, v)) = self.params.iter().find(|(p, _)| *p == name) {
                    return Ok(NCPoly::constant(v.clone()));
                }
                match self.alphabet.letter(&name) {
                    Some(l) => Ok(NCPoly::letter(l, self.field)),
                    None => Err(err(ParseErrorKind::Semantic, pos, format!("unknown generator `{name}`"))),
                }
            }
            Some(Tok::LParen) => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                self.i += 1;
                Ok(e)
            }
            _ => Err(self.unexpected("a number, generator or `(`")),
        }
    }
}

struct Ctx<'a> {
    field: FieldSpec,
    params: &'a [(String, Scalar)],
}

impl Ctx<'_> {
    fn poly(&self, toks: &[Token], a: &Alphabet, end: Pos) -> Result<NCPoly> {
        let mut p = ExprParser {
            toks,
            i: 0,
            field: self.field,
            params: self.params,
            alphabet: a,
            end,
        };
        if p.done() {
            return Err(err(ParseErrorKind::Syntax, end, "empty expression"));
        }
        let e = p.expr()?;
        if !p.done() {
            return Err(p.unexpected("an operator or end of entry"));
        }
        Ok(e)
    }

    fn scalar(&self, toks: &[Token], a: &Alphabet, end: Pos) -> Result<Scalar> {
        let p = self.poly(toks, a, end)?;
        if p.degree().unwrap_or(0) > 0 {
            return Err(err(ParseErrorKind::Semantic, end, "expected a scalar"));
        }
        Ok(p.constant_term())
    }

    /// A sum of tensor terms `leg (x) leg (x) ...`, leg `i` over `alphabets[i]`.
    fn tensor(&self, toks: &[Token], alphabets: &[&Alphabet], end: Pos) -> Result<TensorPoly> {
        let legs = alphabets.len();
        let mut out = TensorPoly::zero(legs, self.field);
        // Split into signed terms at top-level + and -.
        let mut depth = 0;
        let mut terms: Vec<(bool, usize, usize)> = Vec::new();
        let mut start = 0;
        let mut neg = false;
        for (i, t) in toks.iter().enumerate() {
            match t.tok {
                Tok::LParen => depth += 1,
                Tok::RParen => depth -= 1,
                Tok::Plus | Tok::Minus if depth == 0 => {
                    let prev_is_op = i == 0
                        || matches!(
                            toks[i - 1].tok,
                            Tok::Star | Tok::Slash | Tok::Tensor | Tok::Caret
                        );
                    if prev_is_op {
                        continue;
                    }
                    if i > start {
                        terms.push((neg, start, i));
                    }
                    neg = t.tok == Tok::Minus;
                    start = i + 1;
                }
                _ => {}
            }
        }
        if start >= toks.len() {
            let pos = toks.last().map(|t| t.pos).unwrap_or(end);
            return Err(err(ParseErrorKind::Syntax, pos, "expected a tensor term"));
        }
        terms.push((neg, start, toks.len()));
        for (neg, s, e) in terms {
            let slice = &toks[s..e];
            let parts: Vec<&[Token]> = slice.split(|t| t.tok == Tok::Tensor).collect();
            if parts.len() != legs {
                let pos = slice.first().map(|t| t.pos).unwrap_or(end);
                return Err(err(
                    ParseErrorKind::Syntax,
                    pos,
                    format!("expected {legs} tensor legs separated by `(x)`, found {}", parts.len()),
                ));
            }
            let polys: Vec<NCPoly> = parts
                .iter()
                .zip(alphabets)
                .map(|(p, a)| {
                    let pend = p.last().map(|t| t.pos).unwrap_or(end);
                    self.poly(p, a, pend)
                })
                .collect::<Result<_>>()?;
            let sign = if neg { -self.field.one() } else { self.field.one() };
            out.add_scaled(&TensorPoly::from_legs(&polys), &sign);
        }
        Ok(out)
    }
}

fn ident_list(items: &[Item], what: &str) -> Result<Vec<(String, Pos)>> {
    items
        .iter()
        .map(|it| match it.toks.as_slice() {
            [Token {
                tok: Tok::Ident(n),
                pos,
            }] => Ok((n.clone(), *pos)),
            _ => Err(err(ParseErrorKind::Syntax, it.pos, format!("expected a {what} name"))),
        })
        .collect()
}

/// Splits `lhs -> rhs`.
fn arrow_entry(it: &Item) -> Result<(String, Pos, &[Token])> {
    match it.toks.as_slice() {
        [Token {
            tok: Tok::Ident(n),
            pos,
        }, Token { tok: Tok::Arrow, .. }, rest @ ..] => Ok((n.clone(), *pos, rest)),
        _ => Err(err(ParseErrorKind::Syntax, it.pos, "expected `name -> expression`")),
    }
}

fn end_of(it: &Item) -> Pos {
    it.toks.last().map(|t| t.pos).unwrap_or(it.pos)
}

struct Raw {
    name: String,
    field: FieldSpec,
    header: Pos,
    sections: BTreeMap<&'static str, Section>,
    res_ranks: Option<Section>,
    res_maps: BTreeMap<usize, Section>,
    co_vars: Option<Section>,
}

fn split_sections(text: &str) -> Result<Raw> {
    let mut name = None;
    let mut field = FieldSpec::Rationals;
    let mut header = Pos { line: 1, col: 1 };
    let mut sections: BTreeMap<&'static str, Section> = BTreeMap::new();
    let mut res_ranks: Option<Section> = None;
    let mut res_maps: BTreeMap<usize, Section> = BTreeMap::new();
    let mut co_vars: Option<Section> = None;
    // (section, subkey) receiving continuation lines.
    let mut cur: Option<(&'static str, Option<String>)> = None;
    for (ln, raw_line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw_line.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("algebra ") {
            let words: Vec<&str> = rest.split_whitespace().collect();
            let pos = Pos {
                line: line_no,
                col: indent + 1,
            };
            if words.len() != 3 || words[1] != "over" {
                return Err(err(ParseErrorKind::Syntax, pos, "expected `algebra NAME over FIELD`"));
            }
            if name.is_some() {
                return Err(err(ParseErrorKind::Syntax, pos, "duplicate `algebra` header"));
            }
            name = Some(words[0].to_string());
            field = FieldSpec::parse(words[2]).map_err(|e| err(ParseErrorKind::Semantic, pos, e.to_string()))?;
            header = pos;
            cur = None;
            continue;
        }
        let (key, body, body_col) = match trimmed.find(':') {
            Some(k) if trimmed[..k].chars().all(|c| c.is_alphanumeric() || c == '_') && k > 0 => {
                (Some(&trimmed[..k]), &trimmed[k + 1..], indent + k + 2)
            }
            _ => (None, trimmed, indent + 1),
        };
        let pos = Pos {
            line: line_no,
            col: indent + 1,
        };
        let target: Option<&mut Section>;
        if let Some(k) = key {
            if let Some(s) = SECTIONS.iter().find(|s| **s == k) {
                if sections.contains_key(s) {
                    return Err(err(ParseErrorKind::Syntax, pos, format!("duplicate section `{k}`")));
                }
                sections.insert(
                    s,
                    Section {
                        pos: Some(pos),
                        items: Vec::new(),
                    },
                );
                cur = Some((s, None));
                target = sections.get_mut(s);
            } else if matches!(cur, Some(("resolution", _))) && (k == "ranks" || k.starts_with('d')) {
                if k == "ranks" {
                    res_ranks = Some(Section {
                        pos: Some(pos),
                        items: Vec::new(),
                    });
                    cur = Some(("resolution", Some(k.to_string())));
                    target = res_ranks.as_mut();
                } else {
                    let n: usize = k[1..].parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
                        err(ParseErrorKind::Syntax, pos, format!("unknown resolution entry `{k}`"))
                    })?;
                    if res_maps.contains_key(&n) {
                        return Err(err(ParseErrorKind::Syntax, pos, format!("duplicate `{k}`")));
                    }
                    res_maps.insert(
                        n,
                        Section {
                            pos: Some(pos),
                            items: Vec::new(),
                        },
                    );
                    cur = Some(("resolution", Some(k.to_string())));
                    target = res_maps.get_mut(&n);
                }
            } else if matches!(cur, Some(("coaction", _))) && k == "vars" {
                co_vars = Some(Section {
                    pos: Some(pos),
                    items: Vec::new(),
                });
                cur = Some(("coaction", Some("vars".into())));
                target = co_vars.as_mut();
            } else {
                return Err(err(ParseErrorKind::Syntax, pos, format!("unknown section `{k}`")));
            }
        } else {
            match &cur {
                None => {
                    return Err(err(ParseErrorKind::Syntax, pos, "text outside of any section"));
                }
                Some(("resolution", Some(sub))) if sub == "ranks" => target = res_ranks.as_mut(),
                Some(("resolution", Some(sub))) => {
                    let n: usize = sub[1..].parse().expect("checked");
                    target = res_maps.get_mut(&n);
                }
                Some(("coaction", Some(_))) => {
                    // Image lines after `vars:` belong to the coaction itself.
                    cur = Some(("coaction", None));
                    target = sections.get_mut("coaction");
                }
                Some((s, _)) => target = sections.get_mut(s),
            }
        }
        let toks = lex(body, line_no, body_col)?;
        let sec = target.expect("section exists");
        split_items(toks, pos, &mut sec.items);
    }
    let name = name.ok_or_else(|| {
        err(
            ParseErrorKind::Syntax,
            Pos { line: 1, col: 1 },
            "missing `algebra NAME over FIELD` header",
        )
    })?;
    Ok(Raw {
        name,
        field,
        header,
        sections,
        res_ranks,
        res_maps,
        co_vars,
    })
}

fn semantic(pos: Pos, msg: impl Into<String>) -> Error {
    err(ParseErrorKind::Semantic, pos, msg)
}

/// Parses a presentation file and validates the resulting Hopf structure.
pub fn parse_presentation(text: &str) -> Result<ParsedPresentation> {
    parse_inner(text, true)
}

/// Like [`parse_presentation`] but skips Hopf compatibility checks.
pub fn parse_presentation_unchecked(text: &str) -> Result<ParsedPresentation> {
    parse_inner(text, false)
}

/// Parses without building the Hopf structure.
pub fn parse_file(text: &str) -> Result<PresentationFile> {
    Ok(parse_raw(text)?.0)
}

type Located = (Vec<Pos>, Option<Pos>);

fn parse_raw(text: &str) -> Result<(PresentationFile, Located)> {
    let raw = split_sections(text)?;
    let field = raw.field;
    let empty = Section::default();
    let sec = |k: &str| raw.sections.get(k).unwrap_or(&empty);

    let mut params: Vec<(String, Scalar)> = Vec::new();
    let no_gens = Alphabet::new(&[], None)?;
    for it in &sec("params").items {
        match it.toks.as_slice() {
            [Token {
                tok: Tok::Ident(n),
                pos,
            }, Token { tok: Tok::Eq, .. }, rest @ ..] => {
                if params.iter().any(|(p, _)| p == n) {
                    return Err(semantic(*pos, format!("parameter `{n}` defined twice")));
                }
                let ctx = Ctx {
                    field,
                    params: &params,
                };
                let v = ctx.scalar(rest, &no_gens, end_of(it))?;
                params.push((n.clone(), v));
            }
            _ => return Err(err(ParseErrorKind::Syntax, it.pos, "expected `name = value`")),
        }
    }

    let gens_sec = raw.sections.get("gens");
    let gens = ident_list(gens_sec.map(|s| s.items.as_slice()).unwrap_or(&[]), "generator")?;
    if gens.is_empty() {
        let pos = gens_sec.and_then(|s| s.pos).unwrap_or(raw.header);
        return Err(semantic(pos, "at least one generator required"));
    }
    for (i, (g, pos)) in gens.iter().enumerate() {
        if gens[..i].iter().any(|(h, _)| h == g) {
            return Err(semantic(*pos, format!("generator `{g}` declared twice")));
        }
        if params.iter().any(|(p, _)| p == g) {
            return Err(semantic(*pos, format!("`{g}` is both a parameter and a generator")));
        }
    }
    let gen_names: Vec<String> = gens.iter().map(|(g, _)| g.clone()).collect();
    let known = |n: &str, pos: Pos| -> Result<()> {
        if gen_names.iter().any(|g| g == n) {
            Ok(())
        } else {
            Err(semantic(pos, format!("unknown generator `{n}`")))
        }
    };

    let precedence = match raw.sections.get("precedence") {
        None => None,
        Some(s) => {
            let mut order = Vec::new();
            for it in &s.items {
                for (k, t) in it.toks.iter().enumerate() {
                    match (&t.tok, k % 2) {
                        (Tok::Ident(n), 0) => {
                            known(n, t.pos)?;
                            order.push(n.clone());
                        }
                        (Tok::Lt, 1) => {}
                        _ => return Err(err(ParseErrorKind::Syntax, t.pos, "expected `a < b < ...`")),
                    }
                }
            }
            let pos = s.pos.unwrap_or(raw.header);
            let mut sorted = order.clone();
            sorted.sort();
            sorted.dedup();
            if order.len() != gen_names.len() || sorted.len() != order.len() {
                return Err(semantic(pos, "precedence must list every generator exactly once"));
            }
            Some(order)
        }
    };
    let alphabet = Alphabet::new(&gen_names, precedence.as_deref())?;
    let ctx = Ctx {
        field,
        params: &params,
    };

    let mut inverses = Vec::new();
    for it in &sec("inverses").items {
        match it.toks.as_slice() {
            [Token { tok: Tok::LParen, .. }, Token {
                tok: Tok::Ident(a),
                pos: pa,
            }, Token { tok: Tok::Comma, .. }, Token {
                tok: Tok::Ident(b),
                pos: pb,
            }, Token { tok: Tok::RParen, .. }] => {
                known(a, *pa)?;
                known(b, *pb)?;
                inverses.push((a.clone(), b.clone()));
            }
            _ => return Err(err(ParseErrorKind::Syntax, it.pos, "expected `(generator, inverse)`")),
        }
    }

    let mut relations = Vec::new();
    let mut rel_pos = Vec::new();
    for it in &sec("rels").items {
        let parts: Vec<&[Token]> = it.toks.split(|t| t.tok == Tok::Eq).collect();
        let p = match parts.as_slice() {
            [one] => ctx.poly(one, &alphabet, end_of(it))?,
            [l, r] => &ctx.poly(l, &alphabet, end_of(it))? - &ctx.poly(r, &alphabet, end_of(it))?,
            _ => return Err(err(ParseErrorKind::Syntax, it.pos, "at most one `=` per relation")),
        };
        if p.is_zero() {
            return Err(semantic(it.pos, "relation is identically zero"));
        }
        relations.push(p);
        rel_pos.push(it.pos);
    }

    fn gen_map<T>(
        items: &[Item],
        alphabet: &Alphabet,
        what: &str,
        mut value: impl FnMut(&[Token], Pos) -> Result<T>,
    ) -> Result<BTreeMap<Letter, T>> {
        let mut out = BTreeMap::new();
        for it in items {
            let (g, pos, rest) = arrow_entry(it)?;
            let l = alphabet
                .letter(&g)
                .ok_or_else(|| semantic(pos, format!("unknown generator `{g}` in {what}")))?;
            if out.contains_key(&l) {
                return Err(semantic(pos, format!("{what} of `{g}` given twice")));
            }
            out.insert(l, value(rest, end_of(it))?);
        }
        Ok(out)
    }

    let comul = gen_map(&sec("comul").items, &alphabet, "comul", |t, e| {
        ctx.tensor(t, &[&alphabet, &alphabet], e)
    })?;
    let counit = gen_map(&sec("counit").items, &alphabet, "counit", |t, e| {
        ctx.scalar(t, &alphabet, e)
    })?;
    let antipode = gen_map(&sec("antipode").items, &alphabet, "antipode", |t, e| {
        ctx.poly(t, &alphabet, e)
    })?;
    let antipode_inv = match raw.sections.get("antipode_inv") {
        None => None,
        Some(s) => Some(gen_map(&s.items, &alphabet, "antipode_inv", |t, e| {
            ctx.poly(t, &alphabet, e)
        })?),
    };
    for (what, missing, s) in [
        ("comul", alphabet.letters().find(|l| !comul.contains_key(l)), "comul"),
        ("counit", alphabet.letters().find(|l| !counit.contains_key(l)), "counit"),
        ("antipode", alphabet.letters().find(|l| !antipode.contains_key(l)), "antipode"),
    ] {
        if let Some(l) = missing {
            let pos = raw.sections.get(s).and_then(|x| x.pos).unwrap_or(raw.header);
            return Err(semantic(pos, format!("{what} missing for generator `{}`", alphabet.name(l))));
        }
    }
    if let Some(si) = &antipode_inv {
        if let Some(l) = alphabet.letters().find(|l| !si.contains_key(l)) {
            let pos = raw.sections["antipode_inv"].pos.unwrap_or(raw.header);
            return Err(semantic(pos, format!("antipode_inv missing for generator `{}`", alphabet.name(l))));
        }
    }

    let cap = match raw.sections.get("cap") {
        None => DEFAULT_CAP,
        Some(s) => match s.items.as_slice() {
            [Item { toks, .. }] if matches!(toks.as_slice(), [Token { tok: Tok::Int(_), .. }]) => {
                let Tok::Int(n) = &toks[0].tok else { unreachable!() };
                usize::try_from(n.clone())
                    .ok()
                    .filter(|&n| (2..=64).contains(&n))
                    .ok_or_else(|| semantic(toks[0].pos, "cap must be between 2 and 64"))?
            }
            _ => return Err(err(ParseErrorKind::Syntax, s.pos.unwrap_or(raw.header), "expected `cap: N`")),
        },
    };

    let resolution = match raw.sections.get("resolution") {
        None => None,
        Some(s) => {
            let spos = s.pos.unwrap_or(raw.header);
            if !s.items.is_empty() {
                return Err(err(ParseErrorKind::Syntax, s.items[0].pos, "expected `ranks:` or `dN:`"));
            }
            let rs = raw
                .res_ranks
                .as_ref()
                .ok_or_else(|| semantic(spos, "resolution needs `ranks:`"))?;
            let mut ranks = Vec::new();
            for it in &rs.items {
                match it.toks.as_slice() {
                    [Token { tok: Tok::Int(n), pos }] => ranks.push(
                        usize::try_from(n.clone()).map_err(|_| semantic(*pos, "rank too large"))?,
                    ),
                    _ => return Err(err(ParseErrorKind::Syntax, it.pos, "expected an integer rank")),
                }
            }
            if ranks.is_empty() {
                return Err(semantic(spos, "resolution needs at least one rank"));
            }
            let mut maps = Vec::new();
            for k in 1..ranks.len() {
                let ms = raw
                    .res_maps
                    .get(&k)
                    .ok_or_else(|| semantic(spos, format!("resolution is missing `d{k}`")))?;
                let mpos = ms.pos.unwrap_or(spos);
                let mut rows: Vec<Vec<NCPoly>> = Vec::new();
                for it in &ms.items {
                    let mut i = 0;
                    let t = &it.toks;
                    while i < t.len() {
                        if t[i].tok != Tok::LBracket {
                            return Err(err(ParseErrorKind::Syntax, t[i].pos, "expected `[` starting a matrix row"));
                        }
                        let close = t[i..]
                            .iter()
                            .position(|x| x.tok == Tok::RBracket)
                            .map(|p| p + i)
                            .ok_or_else(|| err(ParseErrorKind::Syntax, t[i].pos, "unclosed `[`"))?;
                        let mut row = Vec::new();
                        for entry in t[i + 1..close].split(|x| x.tok == Tok::Comma) {
                            row.push(ctx.poly(entry, &alphabet, t[close].pos)?);
                        }
                        if row.len() != ranks[k - 1] {
                            return Err(semantic(
                                t[i].pos,
                                format!("row of d{k} must have {} entries", ranks[k - 1]),
                            ));
                        }
                        rows.push(row);
                        i = close + 1;
                    }
                }
                if rows.len() != ranks[k] {
                    return Err(semantic(mpos, format!("d{k} must have {} rows", ranks[k])));
                }
                maps.push(rows);
            }
            if let Some((&k, m)) = raw.res_maps.iter().find(|(&k, _)| k >= ranks.len()) {
                return Err(semantic(m.pos.unwrap_or(spos), format!("`d{k}` has no target rank")));
            }
            Some(ResolutionSpec { ranks, maps })
        }
    };

    let coaction = match raw.sections.get("coaction") {
        None => None,
        Some(s) => {
            let spos = s.pos.unwrap_or(raw.header);
            let vs = raw
                .co_vars
                .as_ref()
                .ok_or_else(|| semantic(spos, "coaction needs `vars:`"))?;
            let var_names: Vec<String> = ident_list(&vs.items, "variable")?.into_iter().map(|(n, _)| n).collect();
            if var_names.is_empty() {
                return Err(semantic(spos, "coaction needs at least one variable"));
            }
            let vars = Alphabet::new(&var_names, None).map_err(|e| semantic(spos, e.to_string()))?;
            let map = gen_map(&s.items, &vars, "coaction", |t, e| ctx.tensor(t, &[&vars, &alphabet], e))?;
            if let Some(l) = vars.letters().find(|l| !map.contains_key(l)) {
                return Err(semantic(spos, format!("coaction missing for variable `{}`", vars.name(l))));
            }
            Some(CoactionSpec {
                images: map.into_values().collect(),
                vars,
            })
        }
    };

    let inv_pos = raw.sections.get("antipode_inv").and_then(|s| s.pos);
    let file = PresentationFile {
        name: raw.name,
        field,
        params,
        gens: gen_names,
        inverses,
        precedence,
        relations,
        comul,
        counit,
        antipode,
        antipode_inv,
        cap,
        resolution,
        coaction,
        alphabet,
    };
    Ok((file, (rel_pos, inv_pos)))
}

fn parse_inner(text: &str, check: bool) -> Result<ParsedPresentation> {
    let (file, (rel_pos, inv_pos)) = parse_raw(text)?;
    let hopf = HopfPresentation::new_unchecked(file.spec()).map_err(|e| match e {
        Error::Parse { .. } => e,
        other => semantic(Pos { line: 1, col: 1 }, other.to_string()),
    })?;
    if check {
        let n_inv = 2 * file.inverses.len();
        for (k, r) in hopf.relations().iter().enumerate() {
            let pos = if k < n_inv {
                Pos { line: 1, col: 1 }
            } else {
                rel_pos[k - n_inv]
            };
            let shown = hopf.show(r);
            if !hopf.comul(r)?.is_zero() {
                return Err(semantic(pos, format!("relation {shown} does not reduce to zero under the comultiplication")));
            }
            if !hopf.counit(r).is_zero() {
                return Err(semantic(pos, format!("relation {shown} does not vanish under the counit")));
            }
            if !hopf.antipode(r)?.is_zero() {
                return Err(semantic(pos, format!("relation {shown} does not reduce to zero under the antipode")));
            }
        }
        if let Some(p) = hopf.validate()?.into_iter().next() {
            return Err(semantic(inv_pos.unwrap_or(Pos { line: 1, col: 1 }), p));
        }
    }
    Ok(ParsedPresentation { file, hopf })
}

impl PresentationFile {
    /// Inverse-pair relations followed by the listed relations.
    pub fn all_relations(&self) -> Vec<NCPoly> {
        let mut out = Vec::new();
        for (a, b) in &self.inverses {
            let x = NCPoly::letter(self.alphabet.letter(a).expect("declared"), self.field);
            let y = NCPoly::letter(self.alphabet.letter(b).expect("declared"), self.field);
            let one = NCPoly::one(self.field);
            out.push(&(&x * &y) - &one);
            out.push(&(&y * &x) - &one);
        }
        out.extend(self.relations.iter().cloned());
        out
    }

    pub fn spec(&self) -> HopfSpec {
        HopfSpec {
            name: self.name.clone(),
            field: self.field,
            alphabet: self.alphabet.clone(),
            relations: self.all_relations(),
            comul: self.comul.clone(),
            counit: self.counit.clone(),
            antipode: self.antipode.clone(),
            antipode_inv: self.antipode_inv.clone(),
            cap: self.cap,
        }
    }

    /// Canonical text; parsing it yields an identical structure.
    pub fn to_text(&self) -> String {
        let a = &self.alphabet;
        let mut s = String::new();
        writeln!(s, "algebra {} over {}", self.name, self.field).unwrap();
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|(n, v)| format!("{n} = {}", scalar_text(v))).collect();
            writeln!(s, "params: {}", ps.join(", ")).unwrap();
        }
        writeln!(s, "gens: {}", self.gens.join(", ")).unwrap();
        if !self.inverses.is_empty() {
            let ps: Vec<String> = self.inverses.iter().map(|(x, y)| format!("({x}, {y})")).collect();
            writeln!(s, "inverses: {}", ps.join(", ")).unwrap();
        }
        if let Some(p) = &self.precedence {
            writeln!(s, "precedence: {}", p.join(" < ")).unwrap();
        }
        if self.cap != DEFAULT_CAP {
            writeln!(s, "cap: {}", self.cap).unwrap();
        }
        if !self.relations.is_empty() {
            writeln!(s, "rels:").unwrap();
            for r in &self.relations {
                writeln!(s, "  {}", r.display(a)).unwrap();
            }
        }
        let declared = a.declared();
        writeln!(s, "comul:").unwrap();
        for l in &declared {
            writeln!(s, "  {} -> {}", a.name(*l), self.comul[l].display(&[a])).unwrap();
        }
        writeln!(s, "counit:").unwrap();
        for l in &declared {
            writeln!(s, "  {} -> {}", a.name(*l), scalar_text(&self.counit[l])).unwrap();
        }
        writeln!(s, "antipode:").unwrap();
        for l in &declared {
            writeln!(s, "  {} -> {}", a.name(*l), self.antipode[l].display(a)).unwrap();
        }
        if let Some(si) = &self.antipode_inv {
            writeln!(s, "antipode_inv:").unwrap();
            for l in &declared {
                writeln!(s, "  {} -> {}", a.name(*l), si[l].display(a)).unwrap();
            }
        }
        if let Some(r) = &self.resolution {
            writeln!(s, "resolution:").unwrap();
            let ranks: Vec<String> = r.ranks.iter().map(|n| n.to_string()).collect();
            writeln!(s, "  ranks: {}", ranks.join(", ")).unwrap();
            for (k, m) in r.maps.iter().enumerate() {
                let rows: Vec<String> = m
                    .iter()
                    .map(|row| {
                        let es: Vec<String> = row.iter().map(|e| e.display(a).to_string()).collect();
                        format!("[{}]", es.join(", "))
                    })
                    .collect();
                writeln!(s, "  d{}: {}", k + 1, rows.join(" ")).unwrap();
            }
        }
        if let Some(c) = &self.coaction {
            writeln!(s, "coaction:").unwrap();
            let names: Vec<&str> = c.vars.symbols().iter().map(|x| x.name.as_str()).collect();
            writeln!(s, "  vars: {}", names.join(", ")).unwrap();
            for (l, img) in c.vars.letters().zip(&c.images) {
                writeln!(s, "  {} -> {}", c.vars.name(l), img.display(&[&c.vars, a])).unwrap();
            }
        }
        s
    }
}

fn scalar_text(c: &Scalar) -> String {
    c.to_string()
}

/// Parses a polynomial over an alphabet (no parameters).
pub fn parse_poly(text: &str, alphabet: &Alphabet, field: FieldSpec) -> Result<NCPoly> {
    parse_poly_with(text, alphabet, field, &[])
}

pub fn parse_poly_with(
    text: &str,
    alphabet: &Alphabet,
    field: FieldSpec,
    params: &[(String, Scalar)],
) -> Result<NCPoly> {
    let toks = lex(text, 1, 1)?;
    let end = Pos {
        line: 1,
        col: text.chars().count() + 1,
    };
    Ctx { field, params }.poly(&toks, alphabet, end)
}

/// Parses `name -> expr, name -> expr, ...` entries (a generator map).
pub fn parse_assignments(
    text: &str,
    line: usize,
    source: &Alphabet,
    target: &Alphabet,
    field: FieldSpec,
) -> Result<BTreeMap<Letter, NCPoly>> {
    let toks = lex(text, line, 1)?;
    let mut items = Vec::new();
    split_items(toks, Pos { line, col: 1 }, &mut items);
    let ctx = Ctx { field, params: &[] };
    let mut out = BTreeMap::new();
    for it in &items {
        let (g, pos, rest) = arrow_entry(it)?;
        let l = source
            .letter(&g)
            .ok_or_else(|| semantic(pos, format!("unknown generator `{g}`")))?;
        if out.contains_key(&l) {
            return Err(semantic(pos, format!("`{g}` assigned twice")));
        }
        out.insert(l, ctx.poly(rest, target, end_of(it))?);
    }
    Ok(out)
}

/// Parses a comma-separated list of names.
pub fn parse_names(text: &str, line: usize) -> Result<Vec<String>> {
    let toks = lex(text, line, 1)?;
    let mut items = Vec::new();
    split_items(toks, Pos { line, col: 1 }, &mut items);
    Ok(ident_list(&items, "name")?.into_iter().map(|(n, _)| n).collect())
}

/// A word given by generator names.
pub fn word_of(alphabet: &Alphabet, names: &[&str]) -> Option<Word> {
    let ls: Option<Vec<Letter>> = names.iter().map(|n| alphabet.letter(n)).collect();
    ls.map(|v| Word::from_letters(&v))
}

#[cfg(test)]
mod tests {
    use super::*;

    const H1: &str = "\
algebra H1 over Q
gens: x, g, ginv
inverses: (g, ginv)
comul:
  x -> 1 (x) x + x (x) g
  g -> g (x) g
  ginv -> ginv (x) ginv
counit: x -> 0, g -> 1, ginv -> 1
antipode: x -> -x*ginv, g -> ginv, ginv -> g
antipode_inv: x -> -ginv*x, g -> ginv, ginv -> g
resolution:
  ranks: 1, 2
  d1: [g - 1] [x]
";

    #[test]
    fn parses_h1() {
        let p = parse_presentation(H1).unwrap();
        assert_eq!(p.file.gens.len(), 3);
        assert_eq!(p.hopf.relations().len(), 2);
        let r = p.file.resolution.as_ref().unwrap();
        assert_eq!(r.ranks, vec![1, 2]);
        assert_eq!(r.maps[0].len(), 2);
    }

    #[test]
    fn round_trip() {
        let f1 = parse_file(H1).unwrap();
        let text = f1.to_text();
        let f2 = parse_file(&text).unwrap();
        assert_eq!(f1, f2);
        assert_eq!(f2.to_text(), text);
    }

    #[test]
    fn params_and_division() {
        let a = Alphabet::new(&["a".to_string()], None).unwrap();
        let f = FieldSpec::PrimeField(7);
        let params = vec![("q".to_string(), f.from_i64(3))];
        let p = parse_poly_with("a^2/q - 5*a*a + 1/q", &a, f, &params).unwrap();
        assert_eq!(p, NCPoly::constant(f.from_i64(5)));
        let src = "algebra T over F7\nparams: q = 3\ngens: a\nrels: a^2/q - 5*a*a\n";
        let e = parse_file(src).unwrap_err();
        assert!(e.to_string().contains("identically zero"), "{e}");
    }

    #[test]
    fn empty_gens_is_an_error() {
        let e = parse_file("algebra E over Q\ngens:\n").unwrap_err();
        assert!(e.to_string().contains("at least one generator required"), "{e}");
    }

    #[test]
    fn undeclared_generator_in_comul_has_a_location() {
        let src = "algebra E over Q\ngens: a\ncomul:\n  b -> b (x) b\n";
        match parse_file(src).unwrap_err() {
            Error::Parse { kind, line, col, .. } => {
                assert_eq!(kind, ParseErrorKind::Semantic);
                assert_eq!((line, col), (4, 3));
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn lexical_and_syntax_errors_are_distinct() {
        let lexical = parse_file("algebra E over Q\ngens: a, $\n").unwrap_err();
        assert!(matches!(lexical, Error::Parse { kind: ParseErrorKind::Lexical, .. }));
        let syntax = parse_file("algebra E over Q\ngens: a\nrels: a * * a\n").unwrap_err();
        assert!(matches!(syntax, Error::Parse { kind: ParseErrorKind::Syntax, .. }));
    }

    #[test]
    fn relation_incompatible_with_comul_is_rejected() {
        let src = "\
algebra Bad over Q
gens: x
rels: x*x - 1
comul: x -> 1 (x) x + x (x) 1
counit: x -> 0
antipode: x -> -x
";
        let e = parse_presentation(src).unwrap_err();
        assert!(matches!(e, Error::Parse { kind: ParseErrorKind::Semantic, line: 3, .. }), "{e}");
    }
}
