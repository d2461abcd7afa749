//! Trigger expansion: from seed lexemes to a curated trigger graph.
//!
//! Query dependencies:
//!
//! ```text
//! frame ──┬─> frame_element
//!         ├─> lexical_unit ──> yago
//!         └─> close_match
//! concept ──> factual
//! ```
//!
//! Each query proposes candidates; the accepted subset comes from a
//! selection file or from auto-acceptance, and only accepted entities feed
//! downstream queries. Without either, a query runs in propose-only mode
//! and accepts nothing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lexicon::{ElementType, Lexicon, LexiconError, Pos, CONCEPT_RELATIONS};
use crate::store::{NamedGraph, PrefixTable, StoreError, Term, Triple};
use crate::vocab;

#[derive(Debug, thiserror::Error)]
pub enum QuokkaError {
    #[error("plan {path}: {message}")]
    Plan { path: String, message: String },
    #[error("selection {path} line {line}: {message}")]
    SelectionSyntax { path: String, line: usize, message: String },
    #[error("stale selection for {query} query: {entity} is not a candidate")]
    StaleSelection { query: QueryKind, entity: String },
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Store(#[from] StoreError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryKind {
    Frame,
    FrameElement,
    LexicalUnit,
    Yago,
    CloseMatch,
    Concept,
    Factual,
}

impl QueryKind {
    /// Execution order; every query runs after its inputs.
    pub const ALL: [QueryKind; 7] = [
        QueryKind::Frame,
        QueryKind::FrameElement,
        QueryKind::LexicalUnit,
        QueryKind::Yago,
        QueryKind::CloseMatch,
        QueryKind::Concept,
        QueryKind::Factual,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            QueryKind::Frame => "frame",
            QueryKind::FrameElement => "frame_element",
            QueryKind::LexicalUnit => "lexical_unit",
            QueryKind::Yago => "yago",
            QueryKind::CloseMatch => "close_match",
            QueryKind::Concept => "concept",
            QueryKind::Factual => "factual",
        }
    }

    pub fn provenance(self) -> Provenance {
        match self {
            QueryKind::Frame | QueryKind::FrameElement => Provenance::SeedSelection,
            QueryKind::LexicalUnit => Provenance::DerivedClosure,
            QueryKind::Yago => Provenance::YagoQuery,
            QueryKind::CloseMatch => Provenance::CloseMatchQuery,
            QueryKind::Concept => Provenance::ConceptQuery,
            QueryKind::Factual => Provenance::FactualQuery,
        }
    }
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QueryKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        QueryKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| format!("unknown query kind `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ActivationKind {
    Frame,
    Synset,
    VerbClass,
    Concept,
    FactualEntity,
    FrameElement,
    CloseMatch,
}

impl ActivationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ActivationKind::Frame => "frame",
            ActivationKind::Synset => "synset",
            ActivationKind::VerbClass => "verbClass",
            ActivationKind::Concept => "concept",
            ActivationKind::FactualEntity => "factualEntity",
            ActivationKind::FrameElement => "frameElement",
            ActivationKind::CloseMatch => "closeMatch",
        }
    }

    pub fn term(self) -> Term {
        vocab::vcore(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Provenance {
    SeedSelection,
    DerivedClosure,
    CloseMatchQuery,
    YagoQuery,
    ConceptQuery,
    FactualQuery,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::SeedSelection => "seedSelection",
            Provenance::DerivedClosure => "derivedClosure",
            Provenance::CloseMatchQuery => "closeMatchQuery",
            Provenance::YagoQuery => "yagoQuery",
            Provenance::ConceptQuery => "conceptQuery",
            Provenance::FactualQuery => "factualQuery",
        }
    }

    pub fn term(self) -> Term {
        vocab::vcore(self.as_str())
    }
}

/// Unique on (trigger_entity, value, activation_kind).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriggerEdge {
    pub trigger_entity: Term,
    pub value: Term,
    pub activation_kind: ActivationKind,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub lemma: String,
    #[serde(default)]
    pub pos: Option<Pos>,
}

impl Seed {
    pub fn new(lemma: &str, pos: Option<Pos>) -> Self {
        Seed { lemma: lemma.to_string(), pos }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionPlan {
    pub value: Term,
    pub seeds: Vec<Seed>,
    pub selection_files: BTreeMap<QueryKind, PathBuf>,
    pub auto_accept: BTreeSet<QueryKind>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    value: String,
    #[serde(default)]
    seeds: Vec<Seed>,
    #[serde(default)]
    auto_accept: Vec<QueryKind>,
    #[serde(default)]
    selections: BTreeMap<QueryKind, PathBuf>,
}

impl ExpansionPlan {
    pub fn new(value: Term, seeds: Vec<Seed>) -> Self {
        ExpansionPlan { value, seeds, selection_files: BTreeMap::new(), auto_accept: BTreeSet::new() }
    }

    /// Plan that accepts every candidate of every query.
    pub fn accept_all(value: Term, seeds: Vec<Seed>) -> Self {
        ExpansionPlan { auto_accept: QueryKind::ALL.into_iter().collect(), ..ExpansionPlan::new(value, seeds) }
    }

    /// Parses a TOML plan. Relative selection paths resolve against `base`.
    pub fn from_toml_str(src: &str, base: &Path, prefixes: &PrefixTable, origin: &str) -> Result<Self, QuokkaError> {
        let err = |message: String| QuokkaError::Plan { path: origin.to_string(), message };
        let file: PlanFile = toml::from_str(src).map_err(|e| err(e.to_string()))?;
        let value = prefixes.expand(&file.value).map_err(|e| err(e.to_string()))?;
        let plan = ExpansionPlan {
            value,
            seeds: file.seeds,
            selection_files: file.selections.into_iter().map(|(k, p)| (k, base.join(p))).collect(),
            auto_accept: file.auto_accept.into_iter().collect(),
        };
        plan.check().map_err(err)?;
        Ok(plan)
    }

    pub fn from_file(path: &Path, prefixes: &PrefixTable) -> Result<Self, QuokkaError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| QuokkaError::Plan { path: path.display().to_string(), message: e.to_string() })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml_str(&src, base, prefixes, &path.display().to_string())
    }

    fn check(&self) -> Result<(), String> {
        if let Some(k) = self.auto_accept.iter().find(|k| self.selection_files.contains_key(k)) {
            return Err(format!("query `{k}` has both a selection file and auto-acceptance"));
        }
        if self.seeds.iter().any(|s| s.lemma.trim().is_empty()) {
            return Err("seed lemma must be non-empty".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum SelectionMode {
    Selected,
    AutoAccepted,
    ProposeOnly,
}

impl SelectionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SelectionMode::Selected => "selected",
            SelectionMode::AutoAccepted => "autoAccepted",
            SelectionMode::ProposeOnly => "proposeOnly",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QueryReport {
    pub mode: SelectionMode,
    pub candidates: Vec<String>,
    pub accepted: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EdgeReport {
    pub trigger_entity: String,
    pub activation_kind: ActivationKind,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExpansionReport {
    pub value: String,
    pub per_query: BTreeMap<QueryKind, QueryReport>,
    pub emitted_edges: Vec<EdgeReport>,
}

impl ExpansionReport {
    pub fn propose_only(&self) -> Vec<QueryKind> {
        self.per_query.iter().filter(|(_, r)| r.mode == SelectionMode::ProposeOnly).map(|(k, _)| *k).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable") + "\n"
    }
}

#[derive(Clone, Debug)]
pub struct ExpansionOutcome {
    pub report: ExpansionReport,
    pub edges: Vec<TriggerEdge>,
    /// `None` when nothing was accepted.
    pub graph: Option<NamedGraph>,
}

/// Name of the trigger graph of a value.
pub fn trigger_graph_name(value: &Term) -> Term {
    vocab::graph_name(&format!("triggers/{}", value.local_name()))
}

/// Reads a selection file: `#` comments and one IRI or CURIE per line.
pub fn read_selection(src: &str, prefixes: &PrefixTable, origin: &str) -> Result<BTreeSet<Term>, QuokkaError> {
    let mut out = BTreeSet::new();
    for (i, line) in src.lines().enumerate() {
        // `#` opens a comment only at line start or after whitespace; IRIs may contain it
        let line = line.trim();
        let line = match line.find(" #").or_else(|| line.find("\t#")) {
            Some(k) => line[..k].trim_end(),
            None if line.starts_with('#') => "",
            None => line,
        };
        if line.is_empty() {
            continue;
        }
        let t = prefixes.expand(line).map_err(|e| QuokkaError::SelectionSyntax {
            path: origin.to_string(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.insert(t);
    }
    Ok(out)
}

pub struct Quokka<'a> {
    lexicon: &'a Lexicon<'a>,
    prefixes: &'a PrefixTable,
}

impl<'a> Quokka<'a> {
    pub fn new(lexicon: &'a Lexicon<'a>, prefixes: &'a PrefixTable) -> Self {
        Quokka { lexicon, prefixes }
    }

    fn entries(&self, seed: &Seed) -> Vec<&'a crate::lexicon::LexicalEntry> {
        self.lexicon.lookup_lemma(&seed.lemma, seed.pos).unwrap_or_default()
    }

    /// Frames evoked by any sense of any entry of the lexeme.
    pub fn frame_activation_query(&self, seed: &Seed) -> Vec<Term> {
        let mut out = BTreeSet::new();
        for e in self.entries(seed) {
            for s in &e.senses {
                out.extend(self.lexicon.frames_of_sense(s));
            }
        }
        out.into_iter().collect()
    }

    /// Concept anchors of the lexeme and their one-hop neighbours.
    pub fn concept_activation_query(&self, seed: &Seed) -> Vec<Term> {
        let mut out = BTreeSet::new();
        let anchors = self.lexicon.concept_anchors(&seed.lemma, seed.pos).unwrap_or_default();
        for a in anchors {
            for edge in self.lexicon.concept_neighbours(&a, &CONCEPT_RELATIONS) {
                out.insert(edge.source);
                out.insert(edge.target);
            }
            out.insert(a);
        }
        out.into_iter().collect()
    }

    pub fn factual_expansion_query(&self, concept: &Term) -> Vec<Term> {
        self.lexicon.external_links(concept)
    }

    /// Element IRIs of the frames, all element types included.
    pub fn frame_element_query(&self, frames: &[Term]) -> Result<Vec<Term>, QuokkaError> {
        let all: BTreeSet<ElementType> = ElementType::ALL.into_iter().collect();
        let mut out = BTreeSet::new();
        for f in frames {
            if self.lexicon.is_frame(f) {
                out.extend(self.lexicon.frame_elements(f, &all)?.into_iter().map(|fe| fe.id));
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Synsets evoking any of the frames, split from the verb classes their
    /// sense keys point at. Returns `(synsets, verb_classes)`.
    pub fn lexical_unit_expansion(&self, frames: &[Term]) -> (Vec<Term>, Vec<Term>) {
        let mut synsets = BTreeSet::new();
        for f in frames {
            synsets.extend(self.lexicon.evokers_of(f).into_iter().filter(|e| self.lexicon.is_synset(e)));
        }
        let verb_classes: BTreeSet<Term> =
            synsets.iter().flat_map(|s| self.lexicon.verb_classes_of_sense(s)).collect();
        (synsets.into_iter().collect(), verb_classes.into_iter().collect())
    }

    pub fn yago_expansion(&self, synsets: &[Term]) -> Vec<Term> {
        let out: BTreeSet<Term> = synsets
            .iter()
            .flat_map(|s| self.lexicon.same_as(s))
            .filter(|t| t.as_iri().is_some_and(|i| i.starts_with(vocab::YAGO)))
            .collect();
        out.into_iter().collect()
    }

    pub fn close_match_expansion(&self, frames: &[Term]) -> Vec<Term> {
        let out: BTreeSet<Term> = frames.iter().flat_map(|f| self.lexicon.close_matches(f)).collect();
        out.into_iter().collect()
    }

    fn select(
        &self,
        plan: &ExpansionPlan,
        kind: QueryKind,
        candidates: &[Term],
    ) -> Result<(SelectionMode, Vec<Term>), QuokkaError> {
        if plan.auto_accept.contains(&kind) {
            return Ok((SelectionMode::AutoAccepted, candidates.to_vec()));
        }
        let Some(path) = plan.selection_files.get(&kind) else {
            return Ok((SelectionMode::ProposeOnly, Vec::new()));
        };
        let src = match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((SelectionMode::ProposeOnly, Vec::new())),
            Err(e) => return Err(StoreError::Io(format!("{}: {e}", path.display())).into()),
        };
        let chosen = read_selection(&src, self.prefixes, &path.display().to_string())?;
        let known: BTreeSet<&Term> = candidates.iter().collect();
        if let Some(stale) = chosen.iter().find(|t| !known.contains(t)) {
            return Err(QuokkaError::StaleSelection { query: kind, entity: self.prefixes.display(stale) });
        }
        Ok((SelectionMode::Selected, chosen.into_iter().collect()))
    }

    /// Runs every query of the plan and builds the value's trigger graph.
    pub fn run_plan(&self, plan: &ExpansionPlan) -> Result<ExpansionOutcome, QuokkaError> {
        plan.check().map_err(|message| QuokkaError::Plan { path: plan.value.value().to_string(), message })?;
        let mut per_query = BTreeMap::new();
        let mut edges: BTreeSet<TriggerEdge> = BTreeSet::new();
        let value = &plan.value;

        if plan.seeds.is_empty() {
            let report = ExpansionReport { value: value.value().to_string(), per_query, emitted_edges: Vec::new() };
            return Ok(ExpansionOutcome { report, edges: Vec::new(), graph: None });
        }

        let mut accepted: BTreeMap<QueryKind, Vec<Term>> = BTreeMap::new();
        let mut verb_classes: BTreeSet<Term> = BTreeSet::new();
        for kind in QueryKind::ALL {
            let input = |k: QueryKind| accepted.get(&k).cloned().unwrap_or_default();
            let candidates: Vec<Term> = match kind {
                QueryKind::Frame => {
                    let set: BTreeSet<Term> = plan.seeds.iter().flat_map(|s| self.frame_activation_query(s)).collect();
                    set.into_iter().collect()
                }
                QueryKind::FrameElement => self.frame_element_query(&input(QueryKind::Frame))?,
                QueryKind::LexicalUnit => {
                    let (synsets, vcs) = self.lexical_unit_expansion(&input(QueryKind::Frame));
                    verb_classes = vcs.iter().cloned().collect();
                    let set: BTreeSet<Term> = synsets.into_iter().chain(vcs).collect();
                    set.into_iter().collect()
                }
                QueryKind::Yago => {
                    let synsets: Vec<Term> =
                        input(QueryKind::LexicalUnit).into_iter().filter(|t| !verb_classes.contains(t)).collect();
                    self.yago_expansion(&synsets)
                }
                QueryKind::CloseMatch => self.close_match_expansion(&input(QueryKind::Frame)),
                QueryKind::Concept => {
                    let set: BTreeSet<Term> = plan.seeds.iter().flat_map(|s| self.concept_activation_query(s)).collect();
                    set.into_iter().collect()
                }
                QueryKind::Factual => {
                    let set: BTreeSet<Term> =
                        input(QueryKind::Concept).iter().flat_map(|c| self.factual_expansion_query(c)).collect();
                    set.into_iter().collect()
                }
            };
            let (mode, chosen) = self.select(plan, kind, &candidates)?;
            for entity in &chosen {
                let activation_kind = match kind {
                    QueryKind::Frame => ActivationKind::Frame,
                    QueryKind::FrameElement => ActivationKind::FrameElement,
                    QueryKind::LexicalUnit if verb_classes.contains(entity) => ActivationKind::VerbClass,
                    QueryKind::LexicalUnit => ActivationKind::Synset,
                    QueryKind::Yago | QueryKind::Factual => ActivationKind::FactualEntity,
                    QueryKind::CloseMatch => ActivationKind::CloseMatch,
                    QueryKind::Concept => ActivationKind::Concept,
                };
                edges.insert(TriggerEdge {
                    trigger_entity: entity.clone(),
                    value: value.clone(),
                    activation_kind,
                    provenance: kind.provenance(),
                });
            }
            per_query.insert(
                kind,
                QueryReport {
                    mode,
                    candidates: candidates.iter().map(|t| t.value().to_string()).collect(),
                    accepted: chosen.iter().map(|t| t.value().to_string()).collect(),
                },
            );
            accepted.insert(kind, chosen);
        }

        let edges: Vec<TriggerEdge> = edges.into_iter().collect();
        let graph = (!edges.is_empty()).then(|| emit_graph(value, &edges));
        let emitted_edges = edges
            .iter()
            .map(|e| EdgeReport {
                trigger_entity: e.trigger_entity.value().to_string(),
                activation_kind: e.activation_kind,
                provenance: e.provenance,
            })
            .collect();
        let report = ExpansionReport { value: value.value().to_string(), per_query, emitted_edges };
        Ok(ExpansionOutcome { report, edges, graph })
    }
}

/// One `triggers` triple per distinct entity plus a reified statement per
/// edge carrying its kind and provenance.
fn emit_graph(value: &Term, edges: &[TriggerEdge]) -> NamedGraph {
    let mut g = NamedGraph::new(trigger_graph_name(value));
    for (n, e) in edges.iter().enumerate() {
        g.insert(Triple::iris(&e.trigger_entity, &vocab::triggers(), value));
        let stmt = Term::Iri(format!("{}{}_{}_{}", vocab::TAF, value.local_name(), e.activation_kind.as_str(), n + 1));
        g.insert(Triple::iris(&stmt, &vocab::rdf_type(), &vocab::trigger_statement_class()));
        g.insert(Triple::iris(&stmt, &vocab::trigger_entity(), &e.trigger_entity));
        g.insert(Triple::iris(&stmt, &vocab::triggered_value(), value));
        g.insert(Triple::iris(&stmt, &vocab::activation_kind(), &e.activation_kind.term()));
        g.insert(Triple::iris(&stmt, &vocab::prov_was_generated_by(), &e.provenance.term()));
    }
    g
}
