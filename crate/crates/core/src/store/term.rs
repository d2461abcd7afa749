use std::fmt;

use super::StoreError;

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";

/// Datatype or language annotation carried by a literal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LiteralTag {
    Plain,
    Lang(String),
    Datatype(String),
}

/// An RDF term: IRI, literal, or blank node.
///
/// Ordering follows the variant order (IRIs, then literals, then blank
/// nodes) and is used to keep query results and serialization stable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(String),
    Literal { lexical: String, tag: LiteralTag },
    Blank(String),
}

impl Term {
    /// Builds an IRI term, rejecting strings without a scheme separator.
    pub fn iri(value: impl Into<String>) -> Result<Term, StoreError> {
        let value = value.into();
        if !is_absolute_iri(&value) {
            return Err(StoreError::InvalidTerm(format!("not an absolute IRI: {value}")));
        }
        Ok(Term::Iri(value))
    }

    /// IRI constructor for compile-time constants; panics on a relative IRI.
    pub fn named(value: &str) -> Term {
        Term::iri(value).expect("constant IRI must be absolute")
    }

    pub fn literal(lexical: impl Into<String>) -> Term {
        Term::Literal { lexical: lexical.into(), tag: LiteralTag::Plain }
    }

    pub fn lang_literal(lexical: impl Into<String>, lang: impl Into<String>) -> Term {
        Term::Literal { lexical: lexical.into(), tag: LiteralTag::Lang(lang.into()) }
    }

    pub fn typed_literal(lexical: impl Into<String>, datatype: impl Into<String>) -> Term {
        let datatype = datatype.into();
        if datatype == XSD_STRING {
            return Term::literal(lexical);
        }
        Term::Literal { lexical: lexical.into(), tag: LiteralTag::Datatype(datatype) }
    }

    pub fn integer(value: i64) -> Term {
        Term::typed_literal(value.to_string(), XSD_INTEGER)
    }

    pub fn blank(label: impl Into<String>) -> Term {
        Term::Blank(label.into())
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal { .. })
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(s) => Some(s),
            _ => None,
        }
    }

    /// IRI string, literal lexical form, or blank label.
    pub fn value(&self) -> &str {
        match self {
            Term::Iri(s) | Term::Blank(s) => s,
            Term::Literal { lexical, .. } => lexical,
        }
    }

    /// Trailing segment of an IRI after the last `#` or `/`.
    pub fn local_name(&self) -> &str {
        let v = self.value();
        match v.rfind(['#', '/']) {
            Some(i) => &v[i + 1..],
            None => v,
        }
    }
}

pub(crate) fn is_absolute_iri(value: &str) -> bool {
    match value.find(':') {
        Some(0) | None => false,
        Some(i) => {
            let scheme = &value[..i];
            scheme.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && scheme.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        }
    }
}

pub(crate) fn escape_string(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
}

/// Renders the N-Triples form of the term.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Blank(label) => write!(f, "_:{label}"),
            Term::Literal { lexical, tag } => {
                let mut s = String::with_capacity(lexical.len() + 2);
                s.push('"');
                escape_string(lexical, &mut s);
                s.push('"');
                match tag {
                    LiteralTag::Plain => {}
                    LiteralTag::Lang(lang) => {
                        s.push('@');
                        s.push_str(lang);
                    }
                    LiteralTag::Datatype(dt) => {
                        s.push_str("^^<");
                        s.push_str(dt);
                        s.push('>');
                    }
                }
                f.write_str(&s)
            }
        }
    }
}

/// A statement. Subjects are IRIs or blank nodes and predicates are IRIs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Triple, StoreError> {
        if subject.is_literal() {
            return Err(StoreError::InvalidTerm(format!("literal in subject position: {subject}")));
        }
        if !predicate.is_iri() {
            return Err(StoreError::InvalidTerm(format!("predicate must be an IRI: {predicate}")));
        }
        Ok(Triple { subject, predicate, object })
    }

    /// Constructor for statements built from already-valid IRIs.
    pub fn iris(subject: &Term, predicate: &Term, object: &Term) -> Triple {
        debug_assert!(predicate.is_iri() && !subject.is_literal());
        Triple { subject: subject.clone(), predicate: predicate.clone(), object: object.clone() }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
