//! Readers and writers for N-Triples and a Turtle subset.
//!
//! The Turtle subset covers `@prefix`/`PREFIX` directives, the `a` keyword,
//! predicate lists (`;`) and object lists (`,`), quoted literals with
//! language tags or datatypes, and bare numeric/boolean literals.
//! Collections, blank-node property lists, `@base` and quoted triples are
//! rejected with a syntax error.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use super::term::{escape_string, XSD_BOOLEAN, XSD_DECIMAL, XSD_INTEGER};
use super::{LiteralTag, PrefixTable, StoreError, Term, Triple};

const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    NTriples,
    Turtle,
}

impl FromStr for Format {
    type Err = StoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "nt" | "ntriples" | "n-triples" => Ok(Format::NTriples),
            "ttl" | "turtle" | "turtle-subset" => Ok(Format::Turtle),
            other => Err(StoreError::Config(format!("unknown graph format `{other}`"))),
        }
    }
}

impl Format {
    pub fn from_extension(path: &std::path::Path) -> Option<Format> {
        match path.extension()?.to_str()? {
            "nt" => Some(Format::NTriples),
            "ttl" => Some(Format::Turtle),
            _ => None,
        }
    }
}

/// Parses a whole document into its statements, in document order.
pub fn parse(document: &str, format: Format) -> Result<Vec<Triple>, StoreError> {
    let mut parser = Parser::new(document, format);
    parser.document()?;
    Ok(parser.triples)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
    format: Format,
    prefixes: BTreeMap<String, String>,
    triples: Vec<Triple>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, format: Format) -> Self {
        Parser { src, pos: 0, line: 1, col: 1, format, prefixes: BTreeMap::new(), triples: Vec::new() }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, StoreError> {
        Err(StoreError::Syntax { line: self.line, column: self.col, message: message.into() })
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    /// Skips whitespace and comments. In N-Triples mode a newline is only
    /// skipped between statements, which `document` handles.
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                if self.format == Format::NTriples && c == '\n' {
                    return;
                }
                self.bump();
            } else {
                return;
            }
        }
    }

    fn skip_all_ws(&mut self) {
        loop {
            self.skip_ws();
            if self.peek() == Some('\n') {
                self.bump();
            } else {
                return;
            }
        }
    }

    fn expect(&mut self, c: char) -> Result<(), StoreError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected `{c}`, found `{found}`")),
                None => self.err(format!("expected `{c}`, found end of input")),
            }
        }
    }

    fn document(&mut self) -> Result<(), StoreError> {
        loop {
            self.skip_all_ws();
            if self.peek().is_none() {
                return Ok(());
            }
            match self.format {
                Format::NTriples => self.ntriples_statement()?,
                Format::Turtle => self.turtle_statement()?,
            }
        }
    }

    fn ntriples_statement(&mut self) -> Result<(), StoreError> {
        let subject = self.subject()?;
        self.skip_ws();
        let predicate = match self.peek() {
            Some('<') => self.iriref()?,
            _ => return self.err("predicate must be an IRI reference"),
        };
        self.skip_ws();
        let object = self.object()?;
        self.expect('.')?;
        self.skip_ws();
        match self.peek() {
            None | Some('\n') => {}
            Some(c) => return self.err(format!("unexpected `{c}` after statement")),
        }
        self.push(subject, predicate, object)
    }

    fn turtle_statement(&mut self) -> Result<(), StoreError> {
        if self.rest().starts_with("@prefix") {
            for _ in 0.."@prefix".len() {
                self.bump();
            }
            self.prefix_decl()?;
            return self.expect('.');
        }
        if self.rest().get(..6).is_some_and(|s| s.eq_ignore_ascii_case("prefix")) {
            let after = self.rest()[6..].chars().next();
            if after.is_some_and(char::is_whitespace) {
                for _ in 0..6 {
                    self.bump();
                }
                return self.prefix_decl();
            }
        }
        if self.rest().starts_with("@base") || self.rest().get(..5).is_some_and(|s| s.eq_ignore_ascii_case("base ")) {
            return self.err("`@base` is not supported");
        }
        let subject = self.subject()?;
        loop {
            self.skip_ws();
            let predicate = self.verb()?;
            loop {
                self.skip_ws();
                let object = self.object()?;
                self.push(subject.clone(), predicate.clone(), object)?;
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            self.skip_ws();
            if self.peek() == Some(';') {
                while self.peek() == Some(';') {
                    self.bump();
                    self.skip_ws();
                }
                if self.peek() == Some('.') {
                    break;
                }
            } else {
                break;
            }
        }
        self.expect('.')
    }

    fn prefix_decl(&mut self) -> Result<(), StoreError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !(c.is_alphanumeric() || c == '_' || c == '-' || c == '.') {
                return self.err(format!("invalid character `{c}` in prefix name"));
            }
            self.bump();
        }
        let name = self.src[start..self.pos].to_string();
        self.expect(':')?;
        self.skip_ws();
        let ns = match self.iriref()? {
            Term::Iri(iri) => iri,
            _ => unreachable!(),
        };
        self.prefixes.insert(name, ns);
        Ok(())
    }

    fn push(&mut self, s: Term, p: Term, o: Term) -> Result<(), StoreError> {
        match Triple::new(s, p, o) {
            Ok(t) => {
                self.triples.push(t);
                Ok(())
            }
            Err(e) => self.err(e.to_string()),
        }
    }

    fn subject(&mut self) -> Result<Term, StoreError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => self.iriref(),
            Some('_') => self.blank(),
            Some('[') | Some('(') => self.err("collections and blank-node property lists are not supported"),
            Some(_) if self.format == Format::Turtle => self.prefixed_name(),
            Some(c) => self.err(format!("unexpected `{c}` at start of subject")),
            None => self.err("unexpected end of input"),
        }
    }

    fn verb(&mut self) -> Result<Term, StoreError> {
        if self.peek() == Some('a') {
            let next = self.peek_at(1);
            if next.is_none_or(|c| c.is_whitespace() || c == '<' || c == '"') {
                self.bump();
                return Ok(Term::Iri(RDF_TYPE.to_string()));
            }
        }
        match self.peek() {
            Some('<') => self.iriref(),
            Some('_') => self.err("predicate must be an IRI"),
            Some(_) => self.prefixed_name(),
            None => self.err("unexpected end of input"),
        }
    }

    fn object(&mut self) -> Result<Term, StoreError> {
        match self.peek() {
            Some('<') => self.iriref(),
            Some('_') if self.peek_at(1) == Some(':') => self.blank(),
            Some('"') => self.literal('"'),
            Some('\'') if self.format == Format::Turtle => self.literal('\''),
            Some('[') | Some('(') => self.err("collections and blank-node property lists are not supported"),
            Some(c) if self.format == Format::Turtle && (c.is_ascii_digit() || c == '-' || c == '+') => {
                self.numeric()
            }
            Some(_) if self.format == Format::Turtle => {
                if self.starts_keyword("true") {
                    return Ok(self.keyword_literal("true"));
                }
                if self.starts_keyword("false") {
                    return Ok(self.keyword_literal("false"));
                }
                self.prefixed_name()
            }
            Some(c) => self.err(format!("unexpected `{c}` at start of object")),
            None => self.err("unexpected end of input"),
        }
    }

    fn starts_keyword(&self, kw: &str) -> bool {
        self.rest().starts_with(kw)
            && self.rest()[kw.len()..]
                .chars()
                .next()
                .is_none_or(|c| c.is_whitespace() || matches!(c, '.' | ';' | ','))
    }

    fn keyword_literal(&mut self, kw: &str) -> Term {
        for _ in 0..kw.len() {
            self.bump();
        }
        Term::typed_literal(kw, XSD_BOOLEAN)
    }

    fn numeric(&mut self) -> Result<Term, StoreError> {
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.bump();
        }
        let mut seen_dot = false;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                self.bump();
            } else if c == '.' && !seen_dot && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
                seen_dot = true;
                self.bump();
            } else {
                break;
            }
        }
        let text = &self.src[start..self.pos];
        if !text.chars().any(|c| c.is_ascii_digit()) {
            return self.err("malformed numeric literal");
        }
        let dt = if seen_dot { XSD_DECIMAL } else { XSD_INTEGER };
        Ok(Term::typed_literal(text, dt))
    }

    fn iriref(&mut self) -> Result<Term, StoreError> {
        self.expect('<')?;
        let mut iri = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some('\\') => iri.push(self.unicode_escape()?),
                Some(c) if c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => {
                    return self.err(format!("invalid character `{}` in IRI", c.escape_debug()));
                }
                Some(c) => iri.push(c),
                None => return self.err("unterminated IRI"),
            }
        }
        match Term::iri(iri) {
            Ok(t) => Ok(t),
            Err(e) => self.err(e.to_string()),
        }
    }

    fn unicode_escape(&mut self) -> Result<char, StoreError> {
        let len = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return self.err("invalid escape in IRI"),
        };
        self.hex_char(len)
    }

    fn hex_char(&mut self, len: usize) -> Result<char, StoreError> {
        let mut code = 0u32;
        for _ in 0..len {
            match self.bump().and_then(|c| c.to_digit(16)) {
                Some(d) => code = code * 16 + d,
                None => return self.err("invalid hex digit in escape"),
            }
        }
        match char::from_u32(code) {
            Some(c) => Ok(c),
            None => self.err("escape is not a valid code point"),
        }
    }

    fn blank(&mut self) -> Result<Term, StoreError> {
        self.bump();
        if self.bump() != Some(':') {
            return self.err("expected `:` after `_`");
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            let inner_dot = c == '.' && self.peek_at(1).is_some_and(|n| n.is_alphanumeric() || n == '_' || n == '-');
            if c.is_alphanumeric() || c == '_' || c == '-' || inner_dot {
                self.bump();
            } else {
                break;
            }
        }
        if start == self.pos {
            return self.err("empty blank node label");
        }
        Ok(Term::blank(&self.src[start..self.pos]))
    }

    fn prefixed_name(&mut self) -> Result<Term, StoreError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !(c.is_alphanumeric() || c == '_' || c == '-' || c == '.') {
                return self.err(format!("unexpected `{c}`"));
            }
            self.bump();
        }
        let prefix = self.src[start..self.pos].to_string();
        if self.bump() != Some(':') {
            return self.err("expected prefixed name");
        }
        let local_start = self.pos;
        while let Some(c) = self.peek() {
            // a dot belongs to the name only when more name follows
            let inner_dot = c == '.' && self.peek_at(1).is_some_and(|n| n.is_alphanumeric() || matches!(n, '_' | '-'));
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '%') || inner_dot {
                self.bump();
            } else {
                break;
            }
        }
        let local = &self.src[local_start..self.pos];
        let Some(ns) = self.prefixes.get(&prefix) else {
            return self.err(format!("undeclared prefix `{prefix}:`"));
        };
        let iri = format!("{ns}{local}");
        match Term::iri(iri) {
            Ok(t) => Ok(t),
            Err(e) => self.err(e.to_string()),
        }
    }

    fn literal(&mut self, quote: char) -> Result<Term, StoreError> {
        self.bump();
        let mut value = String::new();
        loop {
            if matches!(self.peek(), Some('\n') | Some('\r')) {
                return self.err("newline in string literal");
            }
            match self.bump() {
                Some(c) if c == quote => break,
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('b') => '\u{8}',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_char(4)?,
                        Some('U') => self.hex_char(8)?,
                        _ => return self.err("invalid string escape"),
                    };
                    value.push(c);
                }
                Some(c) => value.push(c),
                None => return self.err("unterminated string literal"),
            }
        }
        match self.peek() {
            Some('@') => {
                self.bump();
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        self.bump();
                    } else {
                        break;
                    }
                }
                if start == self.pos {
                    return self.err("empty language tag");
                }
                Ok(Term::lang_literal(value, &self.src[start..self.pos]))
            }
            Some('^') => {
                self.bump();
                if self.bump() != Some('^') {
                    return self.err("expected `^^`");
                }
                let dt = match self.peek() {
                    Some('<') => self.iriref()?,
                    _ if self.format == Format::Turtle => self.prefixed_name()?,
                    _ => return self.err("datatype must be an IRI reference"),
                };
                Ok(Term::typed_literal(value, dt.value()))
            }
            _ => Ok(Term::literal(value)),
        }
    }
}

/// Writes statements as N-Triples sorted by subject, predicate, object.
pub fn write_ntriples<'t>(triples: impl IntoIterator<Item = &'t Triple>) -> String {
    let sorted: BTreeSet<(String, String, String)> = triples
        .into_iter()
        .map(|t| (t.subject.to_string(), t.predicate.to_string(), t.object.to_string()))
        .collect();
    let mut out = String::new();
    for (s, p, o) in sorted {
        out.push_str(&s);
        out.push(' ');
        out.push_str(&p);
        out.push(' ');
        out.push_str(&o);
        out.push_str(" .\n");
    }
    out
}

fn turtle_local_ok(local: &str) -> bool {
    !local.is_empty()
        && !local.ends_with('.')
        && !local.starts_with(['.', '-'])
        && local.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

fn turtle_term(term: &Term, prefixes: &PrefixTable, used: &mut BTreeSet<String>) -> String {
    match term {
        Term::Iri(iri) => {
            if let Some(curie) = prefixes.compact(iri) {
                let (p, local) = curie.split_once(':').expect("compact form has a colon");
                if turtle_local_ok(local) && !p.is_empty() {
                    used.insert(p.to_string());
                    return curie;
                }
            }
            format!("<{iri}>")
        }
        Term::Literal { lexical, tag } => {
            let mut s = String::from("\"");
            escape_string(lexical, &mut s);
            s.push('"');
            match tag {
                LiteralTag::Plain => {}
                LiteralTag::Lang(l) => {
                    s.push('@');
                    s.push_str(l);
                }
                LiteralTag::Datatype(dt) => {
                    s.push_str("^^");
                    s.push_str(&turtle_term(&Term::Iri(dt.clone()), prefixes, used));
                }
            }
            s
        }
        Term::Blank(b) => format!("_:{b}"),
    }
}

/// Writes statements in the Turtle subset, grouped by subject, using the
/// given prefix table for compact names.
pub fn write_turtle<'t>(triples: impl IntoIterator<Item = &'t Triple>, prefixes: &PrefixTable) -> String {
    let mut grouped: BTreeMap<&Term, BTreeMap<&Term, BTreeSet<&Term>>> = BTreeMap::new();
    for t in triples {
        grouped.entry(&t.subject).or_default().entry(&t.predicate).or_default().insert(&t.object);
    }
    let mut used = BTreeSet::new();
    let mut body = String::new();
    for (s, preds) in &grouped {
        body.push_str(&turtle_term(s, prefixes, &mut used));
        let mut first_pred = true;
        for (p, objs) in preds {
            body.push_str(if first_pred { " " } else { " ;\n    " });
            first_pred = false;
            if p.value() == RDF_TYPE {
                body.push('a');
            } else {
                body.push_str(&turtle_term(p, prefixes, &mut used));
            }
            let objs: Vec<String> = objs.iter().map(|o| turtle_term(o, prefixes, &mut used)).collect();
            body.push(' ');
            body.push_str(&objs.join(" , "));
        }
        body.push_str(" .\n");
    }
    let mut out = String::new();
    for p in &used {
        let ns = prefixes.namespace(p).expect("used prefix is in table");
        out.push_str(&format!("@prefix {p}: <{ns}> .\n"));
    }
    if !used.is_empty() && !body.is_empty() {
        out.push('\n');
    }
    out.push_str(&body);
    out
}
