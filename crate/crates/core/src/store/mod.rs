//! Indexed triple store with named graphs.
//!
//! Terms are interned once per store; every named graph keeps three sorted
//! indexes (SPO, POS, OSP) so any pattern with at least one bound position
//! is a range scan. The store is writable until [`Store::freeze`], after
//! which it is read-only and can be shared between threads.

mod bgp;
mod prefixes;
mod syntax;
mod term;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Bound;

pub use bgp::{Binding, Pattern, PatternTerm};
pub use prefixes::PrefixTable;
pub use syntax::{parse, write_ntriples, write_turtle, Format};
pub use term::{LiteralTag, Term, Triple, XSD_INTEGER, XSD_STRING};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum StoreError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("graph already registered: {0}")]
    DuplicateGraph(String),
    #[error("unknown graph: {0}")]
    UnknownGraph(String),
    #[error("store is frozen")]
    Frozen,
    #[error("invalid term: {0}")]
    InvalidTerm(String),
    #[error("empty pattern list")]
    EmptyQuery,
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub(crate) type TermId = u32;
type Key = (TermId, TermId, TermId);

#[derive(Default, Debug, Clone)]
struct GraphIndex {
    spo: BTreeSet<Key>,
    pos: BTreeSet<Key>,
    osp: BTreeSet<Key>,
}

impl GraphIndex {
    fn insert(&mut self, (s, p, o): Key) -> bool {
        if !self.spo.insert((s, p, o)) {
            return false;
        }
        self.pos.insert((p, o, s));
        self.osp.insert((o, s, p));
        true
    }

    fn len(&self) -> usize {
        self.spo.len()
    }

    /// All (s, p, o) keys compatible with the bound positions.
    fn scan(&self, s: Option<TermId>, p: Option<TermId>, o: Option<TermId>) -> Vec<Key> {
        fn range(idx: &BTreeSet<Key>, a: Option<TermId>, b: Option<TermId>) -> impl Iterator<Item = &Key> {
            let lo = (a.unwrap_or(0), b.unwrap_or(0), 0);
            let hi = match (a, b) {
                (Some(a), Some(b)) => (a, b, TermId::MAX),
                (Some(a), None) => (a, TermId::MAX, TermId::MAX),
                _ => (TermId::MAX, TermId::MAX, TermId::MAX),
            };
            idx.range((Bound::Included(lo), Bound::Included(hi)))
        }
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                if self.spo.contains(&(s, p, o)) {
                    vec![(s, p, o)]
                } else {
                    vec![]
                }
            }
            (Some(_), _, None) => range(&self.spo, s, p).copied().collect(),
            (None, Some(_), _) => range(&self.pos, p, o).map(|&(p, o, s)| (s, p, o)).collect(),
            (_, None, Some(_)) => range(&self.osp, o, s).map(|&(o, s, p)| (s, p, o)).collect(),
            (None, None, None) => self.spo.iter().copied().collect(),
        }
    }
}

/// A named graph as a plain set of statements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedGraph {
    pub name: Term,
    pub triples: BTreeSet<Triple>,
}

impl NamedGraph {
    pub fn new(name: Term) -> Self {
        NamedGraph { name, triples: BTreeSet::new() }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn to_ntriples(&self) -> String {
        write_ntriples(&self.triples)
    }
}

#[derive(Default, Debug, Clone)]
pub struct Store {
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
    graphs: BTreeMap<Term, GraphIndex>,
    documents: usize,
    frozen: bool,
}

impl Store {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    /// Ends the load phase. Further writes fail with [`StoreError::Frozen`].
    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    fn intern(&mut self, term: &Term) -> TermId {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = TermId::try_from(self.terms.len()).expect("term dictionary overflow");
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        id
    }

    pub(crate) fn id_of(&self, term: &Term) -> Option<TermId> {
        self.ids.get(term).copied()
    }

    pub(crate) fn term(&self, id: TermId) -> &Term {
        &self.terms[id as usize]
    }

    /// Registers an empty graph. Fails if the name is taken.
    pub fn create_graph(&mut self, name: &Term) -> Result<(), StoreError> {
        if self.frozen {
            return Err(StoreError::Frozen);
        }
        if !name.is_iri() {
            return Err(StoreError::InvalidTerm(format!("graph name must be an IRI: {name}")));
        }
        if self.graphs.contains_key(name) {
            return Err(StoreError::DuplicateGraph(name.value().to_string()));
        }
        self.graphs.insert(name.clone(), GraphIndex::default());
        Ok(())
    }

    /// Adds a statement to an existing graph; returns false if it was present.
    pub fn insert(&mut self, graph: &Term, triple: &Triple) -> Result<bool, StoreError> {
        if self.frozen {
            return Err(StoreError::Frozen);
        }
        if !self.graphs.contains_key(graph) {
            return Err(StoreError::UnknownGraph(graph.value().to_string()));
        }
        let key = (self.intern(&triple.subject), self.intern(&triple.predicate), self.intern(&triple.object));
        Ok(self.graphs.get_mut(graph).expect("checked above").insert(key))
    }

    /// Parses a document and registers it as a new named graph.
    ///
    /// Blank-node labels are scoped to the document: each load renames them
    /// with a per-document prefix so two files never share a blank node.
    pub fn load(&mut self, document: &str, format: Format, graph_name: &Term) -> Result<NamedGraph, StoreError> {
        if self.frozen {
            return Err(StoreError::Frozen);
        }
        if self.graphs.contains_key(graph_name) {
            return Err(StoreError::DuplicateGraph(graph_name.value().to_string()));
        }
        let parsed = parse(document, format)?;
        self.documents += 1;
        let doc = self.documents;
        let scope = |t: Term| match t {
            Term::Blank(label) => Term::Blank(format!("d{doc}x{label}")),
            other => other,
        };
        let mut graph = NamedGraph::new(graph_name.clone());
        for t in parsed {
            graph.insert(Triple { subject: scope(t.subject), predicate: t.predicate, object: scope(t.object) });
        }
        self.add_graph(&graph)?;
        Ok(graph)
    }

    /// Registers an in-memory graph under its own name.
    pub fn add_graph(&mut self, graph: &NamedGraph) -> Result<(), StoreError> {
        self.create_graph(&graph.name)?;
        for t in &graph.triples {
            self.insert(&graph.name, t)?;
        }
        Ok(())
    }

    /// Removes a graph. Only allowed before freezing.
    pub fn remove_graph(&mut self, name: &Term) -> Result<(), StoreError> {
        if self.frozen {
            return Err(StoreError::Frozen);
        }
        self.graphs
            .remove(name)
            .map(|_| ())
            .ok_or_else(|| StoreError::UnknownGraph(name.value().to_string()))
    }

    pub fn graph_names(&self) -> impl Iterator<Item = &Term> {
        self.graphs.keys()
    }

    pub fn has_graph(&self, name: &Term) -> bool {
        self.graphs.contains_key(name)
    }

    pub fn graph_len(&self, name: &Term) -> Option<usize> {
        self.graphs.get(name).map(GraphIndex::len)
    }

    /// Total statements over all graphs, counting per graph.
    pub fn len(&self) -> usize {
        self.graphs.values().map(GraphIndex::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Materializes a registered graph.
    pub fn graph(&self, name: &Term) -> Result<NamedGraph, StoreError> {
        let idx = self.graphs.get(name).ok_or_else(|| StoreError::UnknownGraph(name.value().to_string()))?;
        let triples = idx
            .spo
            .iter()
            .map(|&(s, p, o)| Triple {
                subject: self.term(s).clone(),
                predicate: self.term(p).clone(),
                object: self.term(o).clone(),
            })
            .collect();
        Ok(NamedGraph { name: name.clone(), triples })
    }

    /// Serializes a registered graph.
    pub fn serialize(&self, name: &Term, format: Format, prefixes: &PrefixTable) -> Result<String, StoreError> {
        let g = self.graph(name)?;
        Ok(match format {
            Format::NTriples => write_ntriples(&g.triples),
            Format::Turtle => write_turtle(&g.triples, prefixes),
        })
    }

    /// Direct membership test, in one graph or in any graph.
    pub fn contains(&self, graph: Option<&Term>, triple: &Triple) -> bool {
        let (Some(s), Some(p), Some(o)) =
            (self.id_of(&triple.subject), self.id_of(&triple.predicate), self.id_of(&triple.object))
        else {
            return false;
        };
        match graph {
            Some(g) => self.graphs.get(g).is_some_and(|idx| idx.spo.contains(&(s, p, o))),
            None => self.graphs.values().any(|idx| idx.spo.contains(&(s, p, o))),
        }
    }

    fn scopes(&self, scope: Option<&Term>) -> Result<Vec<&GraphIndex>, StoreError> {
        match scope {
            Some(name) => self
                .graphs
                .get(name)
                .map(|g| vec![g])
                .ok_or_else(|| StoreError::UnknownGraph(name.value().to_string())),
            None => Ok(self.graphs.values().collect()),
        }
    }

    /// Statements matching the bound positions, across the scoped graphs,
    /// without duplicates. Unbound positions are `None`.
    pub fn triples_matching(
        &self,
        scope: Option<&Term>,
        s: Option<&Term>,
        p: Option<&Term>,
        o: Option<&Term>,
    ) -> Result<Vec<Triple>, StoreError> {
        let graphs = self.scopes(scope)?;
        let lookup = |t: Option<&Term>| -> Result<Option<TermId>, ()> {
            match t {
                None => Ok(None),
                Some(t) => self.id_of(t).map(Some).ok_or(()),
            }
        };
        let (Ok(s), Ok(p), Ok(o)) = (lookup(s), lookup(p), lookup(o)) else {
            return Ok(Vec::new());
        };
        let mut keys = BTreeSet::new();
        for g in graphs {
            keys.extend(g.scan(s, p, o));
        }
        Ok(keys
            .into_iter()
            .map(|(s, p, o)| Triple {
                subject: self.term(s).clone(),
                predicate: self.term(p).clone(),
                object: self.term(o).clone(),
            })
            .collect())
    }

    /// Objects of `(subject, predicate, ?o)`, sorted.
    pub fn objects(&self, scope: Option<&Term>, subject: &Term, predicate: &Term) -> Vec<Term> {
        let mut out: Vec<Term> = self
            .triples_matching(scope, Some(subject), Some(predicate), None)
            .unwrap_or_default()
            .into_iter()
            .map(|t| t.object)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Subjects of `(?s, predicate, object)`, sorted.
    pub fn subjects(&self, scope: Option<&Term>, predicate: &Term, object: &Term) -> Vec<Term> {
        let mut out: Vec<Term> = self
            .triples_matching(scope, None, Some(predicate), Some(object))
            .unwrap_or_default()
            .into_iter()
            .map(|t| t.subject)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Evaluates a basic graph pattern. See [`bgp`] for semantics.
    pub fn match_bgp(&self, patterns: &[Pattern]) -> Result<Vec<Binding>, StoreError> {
        bgp::evaluate(self, patterns)
    }
}
