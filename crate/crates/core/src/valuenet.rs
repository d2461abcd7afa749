//! Value model: MFT dyads, BHV values, and FOLK values with provenance.
//!
//! Each value is punned: the same IRI is typed as a value concept and
//! declared as a class of value situations. Registration emits the value's
//! statements into its module graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lexicon::{AlignmentEdge, AlignmentRelation, Lexicon};
use crate::store::{NamedGraph, PrefixTable, StoreError, Term, Triple};
use crate::vocab;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ValueError {
    #[error("value already registered: {0}")]
    Duplicate(String),
    #[error("unknown value: {0}")]
    Unknown(String),
    #[error("MFT value {0} needs a dyad partner")]
    MissingDyadPartner(String),
    #[error("dyad of {value} is inconsistent: {reason}")]
    InconsistentDyad { value: String, reason: String },
    #[error("FOLK value {0} needs at least one provenance URL")]
    MissingProvenance(String),
    #[error("taxonomy of {value} is invalid: {reason}")]
    Taxonomy { value: String, reason: String },
    #[error("cannot align {from} to {to}: {reason}")]
    Alignment { from: String, to: String, reason: String },
    #[error("value table line {line}: {message}")]
    Table { line: usize, message: String },
    #[error(transparent)]
    Store(#[from] StoreError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ValueModule {
    Mft,
    Bhv,
    Folk,
}

impl ValueModule {
    pub const ALL: [ValueModule; 3] = [ValueModule::Mft, ValueModule::Bhv, ValueModule::Folk];

    pub fn as_str(self) -> &'static str {
        match self {
            ValueModule::Mft => "MFT",
            ValueModule::Bhv => "BHV",
            ValueModule::Folk => "FOLK",
        }
    }

    /// Name of the module graph holding the value statements.
    pub fn graph(self) -> Term {
        vocab::graph_name(self.as_str())
    }
}

impl fmt::Display for ValueModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ValueModule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ValueModule::ALL.into_iter().find(|m| m.as_str().eq_ignore_ascii_case(s)).ok_or_else(|| format!("unknown module `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
    Unpolarized,
}

impl Polarity {
    fn term(self) -> Term {
        vocab::vcore(match self {
            Polarity::Positive => "Positive",
            Polarity::Negative => "Negative",
            Polarity::Unpolarized => "Unpolarized",
        })
    }

    fn opposite(self) -> Option<Polarity> {
        match self {
            Polarity::Positive => Some(Polarity::Negative),
            Polarity::Negative => Some(Polarity::Positive),
            Polarity::Unpolarized => None,
        }
    }
}

impl FromStr for Polarity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "positive" | "+" => Ok(Polarity::Positive),
            "negative" | "-" => Ok(Polarity::Negative),
            "unpolarized" | "" => Ok(Polarity::Unpolarized),
            other => Err(format!("unknown polarity `{other}`")),
        }
    }
}

/// Registration request for a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueSpec {
    pub id: Term,
    pub module: ValueModule,
    pub label: Option<String>,
    pub polarity: Polarity,
    pub dyad_partner: Option<Term>,
    pub parents: Vec<Term>,
    pub provenance: Vec<Term>,
}

impl ValueSpec {
    pub fn new(id: Term, module: ValueModule) -> Self {
        ValueSpec {
            id,
            module,
            label: None,
            polarity: Polarity::Unpolarized,
            dyad_partner: None,
            parents: Vec::new(),
            provenance: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueConcept {
    pub id: Term,
    pub module: ValueModule,
    pub label: String,
    /// The value read as a concept.
    pub concept_node: Term,
    /// The value read as a class of situations; same IRI as `concept_node`.
    pub situation_class_node: Term,
    pub polarity: Polarity,
    pub dyad_partner: Option<Term>,
    pub parents: Vec<Term>,
    pub provenance_urls: Vec<Term>,
    pub aligned_to: Vec<Term>,
}

#[derive(Debug, Default)]
pub struct ValueModel {
    values: BTreeMap<Term, ValueConcept>,
    order: Vec<Term>,
    graphs: BTreeMap<ValueModule, NamedGraph>,
    alignments: BTreeSet<AlignmentEdge>,
    bhv_circle: Vec<Term>,
}

impl ValueModel {
    pub fn new() -> Self {
        let graphs = ValueModule::ALL.into_iter().map(|m| (m, NamedGraph::new(m.graph()))).collect();
        ValueModel { graphs, ..Default::default() }
    }

    pub fn get(&self, id: &Term) -> Option<&ValueConcept> {
        self.values.get(id)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = &ValueConcept> {
        self.order.iter().map(|id| &self.values[id])
    }

    pub fn count(&self, module: ValueModule) -> usize {
        self.values.values().filter(|v| v.module == module).count()
    }

    pub fn graph(&self, module: ValueModule) -> &NamedGraph {
        &self.graphs[&module]
    }

    pub fn graphs(&self) -> impl Iterator<Item = &NamedGraph> {
        self.graphs.values()
    }

    pub fn alignments(&self) -> impl Iterator<Item = &AlignmentEdge> {
        self.alignments.iter()
    }

    /// BHV values in circumplex order; neighbours are congruent values.
    pub fn bhv_circle(&self) -> &[Term] {
        &self.bhv_circle
    }

    pub fn dyad_partner(&self, id: &Term) -> Option<&Term> {
        self.values.get(id)?.dyad_partner.as_ref()
    }

    fn emit(&mut self, module: ValueModule, s: &Term, p: Term, o: Term) {
        self.graphs.get_mut(&module).expect("all modules present").insert(Triple::iris(s, &p, &o));
    }

    pub fn register_value(&mut self, spec: ValueSpec) -> Result<&ValueConcept, ValueError> {
        let name = spec.id.value().to_string();
        if !spec.id.is_iri() {
            return Err(ValueError::Store(StoreError::InvalidTerm(format!("value id must be an IRI: {}", spec.id))));
        }
        if self.values.contains_key(&spec.id) {
            return Err(ValueError::Duplicate(name));
        }
        match spec.module {
            ValueModule::Mft => {
                let Some(partner) = &spec.dyad_partner else {
                    return Err(ValueError::MissingDyadPartner(name));
                };
                let Some(opposite) = spec.polarity.opposite() else {
                    return Err(ValueError::InconsistentDyad { value: name, reason: "MFT values must be polarized".into() });
                };
                if partner == &spec.id {
                    return Err(ValueError::InconsistentDyad { value: name, reason: "value cannot be its own partner".into() });
                }
                if let Some(other) = self.values.get(partner) {
                    if other.dyad_partner.as_ref() != Some(&spec.id) {
                        return Err(ValueError::InconsistentDyad { value: name, reason: "partner names a different dyad".into() });
                    }
                    if other.polarity != opposite {
                        return Err(ValueError::InconsistentDyad { value: name, reason: "partner has the same polarity".into() });
                    }
                }
            }
            ValueModule::Folk => {
                if spec.provenance.is_empty() {
                    return Err(ValueError::MissingProvenance(name));
                }
            }
            ValueModule::Bhv => {}
        }
        if spec.module != ValueModule::Mft && spec.dyad_partner.is_some() {
            return Err(ValueError::InconsistentDyad { value: name, reason: "only MFT values form dyads".into() });
        }
        for parent in &spec.parents {
            let Some(p) = self.values.get(parent) else {
                return Err(ValueError::Taxonomy { value: name, reason: format!("parent {} is not registered", parent.value()) });
            };
            if p.module != spec.module {
                return Err(ValueError::Taxonomy { value: name, reason: "parent belongs to another module".into() });
            }
        }
        if self.reaches(&spec.parents, &spec.id) {
            return Err(ValueError::Taxonomy { value: name, reason: "taxonomy cycle".into() });
        }

        let module = spec.module;
        let id = spec.id.clone();
        let label = spec.label.clone().unwrap_or_else(|| id.local_name().to_string());
        self.emit(module, &id, vocab::rdf_type(), vocab::value_concept_class());
        self.emit(module, &id, vocab::rdf_type(), vocab::owl_class());
        self.emit(module, &id, vocab::rdfs_subclass_of(), vocab::value_situation_class());
        self.emit(module, &id, vocab::rdfs_label(), Term::literal(label.clone()));
        self.emit(module, &id, vocab::polarity(), spec.polarity.term());
        if let Some(p) = &spec.dyad_partner {
            self.emit(module, &id, vocab::dyad_partner(), p.clone());
        }
        for p in &spec.parents {
            self.emit(module, &id, vocab::rdfs_subclass_of(), p.clone());
        }
        for url in &spec.provenance {
            self.emit(module, &id, vocab::prov_was_attributed_to(), url.clone());
        }
        let concept = ValueConcept {
            concept_node: id.clone(),
            situation_class_node: id.clone(),
            id: id.clone(),
            module,
            label,
            polarity: spec.polarity,
            dyad_partner: spec.dyad_partner,
            parents: spec.parents,
            provenance_urls: spec.provenance,
            aligned_to: Vec::new(),
        };
        self.order.push(id.clone());
        self.values.insert(id.clone(), concept);
        Ok(&self.values[&id])
    }

    /// True if `target` is reachable from any of `from` via parent links.
    fn reaches(&self, from: &[Term], target: &Term) -> bool {
        let mut stack: Vec<&Term> = from.iter().collect();
        let mut seen = BTreeSet::new();
        while let Some(t) = stack.pop() {
            if t == target {
                return true;
            }
            if seen.insert(t) {
                if let Some(v) = self.values.get(t) {
                    stack.extend(v.parents.iter());
                }
            }
        }
        false
    }

    /// Records a `skos:closeMatch` from a FOLK value to an MFT or BHV value.
    pub fn align_value(&mut self, folk_value: &Term, target: &Term) -> Result<AlignmentEdge, ValueError> {
        let err = |reason: &str| ValueError::Alignment {
            from: folk_value.value().to_string(),
            to: target.value().to_string(),
            reason: reason.to_string(),
        };
        let source = self.values.get(folk_value).ok_or_else(|| ValueError::Unknown(folk_value.value().to_string()))?;
        let dest = self.values.get(target).ok_or_else(|| ValueError::Unknown(target.value().to_string()))?;
        if source.module != ValueModule::Folk {
            return Err(err("source is not a FOLK value"));
        }
        if dest.module == ValueModule::Folk {
            return Err(err("target must be an MFT or BHV value"));
        }
        let edge = AlignmentEdge { source: folk_value.clone(), relation: AlignmentRelation::CloseMatch, target: target.clone() };
        if self.alignments.insert(edge.clone()) {
            self.emit(ValueModule::Folk, folk_value, vocab::skos_close_match(), target.clone());
            self.values.get_mut(folk_value).expect("checked").aligned_to.push(target.clone());
        }
        Ok(edge)
    }

    /// Fixes the BHV circumplex order and emits the adjacency ring.
    pub fn set_bhv_circle(&mut self, ring: Vec<Term>) -> Result<(), ValueError> {
        for v in &ring {
            match self.values.get(v) {
                Some(c) if c.module == ValueModule::Bhv => {}
                _ => return Err(ValueError::Unknown(v.value().to_string())),
            }
        }
        for (i, v) in ring.iter().enumerate() {
            let next = ring[(i + 1) % ring.len()].clone();
            self.emit(ValueModule::Bhv, v, vocab::next_in_circle(), next);
        }
        self.bhv_circle = ring;
        Ok(())
    }

    /// Checks that every dyad partner is registered and points back.
    pub fn validate(&self) -> Result<(), ValueError> {
        for v in self.values.values() {
            if let Some(p) = &v.dyad_partner {
                let other = self.values.get(p).ok_or_else(|| ValueError::InconsistentDyad {
                    value: v.id.value().to_string(),
                    reason: format!("partner {} is not registered", p.value()),
                })?;
                if other.dyad_partner.as_ref() != Some(&v.id) {
                    return Err(ValueError::InconsistentDyad { value: v.id.value().to_string(), reason: "dyad is not symmetric".into() });
                }
            }
        }
        Ok(())
    }

    /// Loads a tab-separated value table.
    ///
    /// Columns: `id module polarity dyad_partner parents provenance
    /// alignments label`. List cells are `|`-separated; `-` or an empty
    /// cell means none. Rows are registered in file order, so parents must
    /// precede their children. BHV rows that have a parent form the
    /// circumplex ring in file order.
    pub fn from_table(src: &str, prefixes: &PrefixTable) -> Result<ValueModel, ValueError> {
        let mut model = ValueModel::new();
        let mut pending_alignments = Vec::new();
        let mut ring = Vec::new();
        for (idx, line) in src.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') || (idx == 0 && line.starts_with("id\t")) {
                continue;
            }
            let table_err = |message: String| ValueError::Table { line: lineno, message };
            let cells: Vec<&str> = line.split('\t').collect();
            if cells.len() < 7 {
                return Err(table_err(format!("expected at least 7 columns, found {}", cells.len())));
            }
            let term = |s: &str| prefixes.expand(s).map_err(|e| table_err(e.to_string()));
            let list = |s: &str| -> Result<Vec<Term>, ValueError> {
                let s = s.trim();
                if s.is_empty() || s == "-" {
                    return Ok(Vec::new());
                }
                s.split('|').map(|x| term(x.trim())).collect()
            };
            let module = ValueModule::from_str(cells[1].trim()).map_err(table_err)?;
            let polarity = Polarity::from_str(cells[2].trim()).map_err(table_err)?;
            let mut spec = ValueSpec::new(term(cells[0])?, module);
            spec.polarity = polarity;
            spec.dyad_partner = list(cells[3])?.into_iter().next();
            spec.parents = list(cells[4])?;
            spec.provenance = list(cells[5])?;
            spec.label = cells.get(7).map(|s| s.trim().to_string()).filter(|s| !s.is_empty());
            let alignments = list(cells[6])?;
            if module == ValueModule::Bhv && !spec.parents.is_empty() {
                ring.push(spec.id.clone());
            }
            let id = spec.id.clone();
            model.register_value(spec).map_err(|e| table_err(e.to_string()))?;
            pending_alignments.extend(alignments.into_iter().map(|t| (lineno, id.clone(), t)));
        }
        for (lineno, from, to) in pending_alignments {
            model.align_value(&from, &to).map_err(|e| ValueError::Table { line: lineno, message: e.to_string() })?;
        }
        if !ring.is_empty() {
            model.set_bhv_circle(ring)?;
        }
        model.validate()?;
        Ok(model)
    }
}

/// A scraped value candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub label: String,
    pub definition: String,
    pub source_url: Term,
}

/// Manual decisions that take precedence over lexical synonymy.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DedupeOverrides {
    merge: Vec<(String, String)>,
    keep_apart: BTreeSet<(String, String)>,
}

impl DedupeOverrides {
    /// Parses lines of `A = B` (merge) or `A != B` (keep apart); `#` starts a comment.
    pub fn parse(src: &str) -> Result<Self, ValueError> {
        let mut out = DedupeOverrides::default();
        for (i, line) in src.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some((a, b)) = line.split_once("!=") {
                out.keep_apart.insert(ordered(normalize(a), normalize(b)));
            } else if let Some((a, b)) = line.split_once('=') {
                out.merge.push((normalize(a), normalize(b)));
            } else {
                return Err(ValueError::Table { line: i + 1, message: format!("expected `A = B` or `A != B`: {line}") });
            }
        }
        Ok(out)
    }
}

fn ordered(a: String, b: String) -> (String, String) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn normalize(label: &str) -> String {
    label.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// Turns a label into an IRI-safe PascalCase local name.
pub fn value_local_name(label: &str) -> String {
    label
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| {
            let mut cs = w.chars();
            let first = cs.next().expect("non-empty").to_uppercase();
            first.chain(cs.flat_map(char::to_lowercase)).collect::<String>()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeRecord {
    pub kept: String,
    pub merged: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DedupeOutcome {
    pub specs: Vec<ValueSpec>,
    pub report: Vec<MergeRecord>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut x = x;
        while self.0[x] != root {
            let next = self.0[x];
            self.0[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // lower index stays the root so the first-seen label wins
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Merges candidates that name the same value.
///
/// Two labels are merged when they normalize to the same string, when the
/// override file merges them, or when their lexicon entries share a
/// synset (unless the override file keeps them apart). The first-seen
/// label names the merged value; all source URLs are kept as provenance.
pub fn dedupe_candidates(
    candidates: &[Candidate],
    lexicon: Option<&Lexicon<'_>>,
    overrides: &DedupeOverrides,
    folk_namespace: &str,
) -> Result<DedupeOutcome, ValueError> {
    let mut labels: Vec<String> = Vec::new();
    let mut label_index: HashMap<String, usize> = HashMap::new();
    let mut first_label: Vec<String> = Vec::new();
    for c in candidates {
        let n = normalize(&c.label);
        if n.is_empty() {
            return Err(ValueError::Table { line: 0, message: "candidate label must be non-empty".into() });
        }
        if !label_index.contains_key(&n) {
            label_index.insert(n.clone(), labels.len());
            labels.push(n);
            first_label.push(c.label.trim().to_string());
        }
    }
    let mut uf = UnionFind((0..labels.len()).collect());
    for (a, b) in &overrides.merge {
        if let (Some(&i), Some(&j)) = (label_index.get(a), label_index.get(b)) {
            uf.union(i, j);
        }
    }
    if let Some(lex) = lexicon {
        let mut by_synset: BTreeMap<Term, Vec<usize>> = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            let senses: BTreeSet<Term> = lex
                .lookup_lemma(l, None)
                .map_err(|e| ValueError::Table { line: 0, message: e.to_string() })?
                .into_iter()
                .flat_map(|e| e.senses.iter().cloned())
                .collect();
            for s in senses {
                by_synset.entry(s).or_default().push(i);
            }
        }
        for group in by_synset.values() {
            for (k, &i) in group.iter().enumerate() {
                for &j in &group[k + 1..] {
                    if !overrides.keep_apart.contains(&ordered(labels[i].clone(), labels[j].clone())) {
                        uf.union(i, j);
                    }
                }
            }
        }
    }

    let mut groups: BTreeMap<usize, (Vec<Term>, BTreeSet<usize>)> = BTreeMap::new();
    for c in candidates {
        let i = label_index[&normalize(&c.label)];
        let root = uf.find(i);
        let entry = groups.entry(root).or_default();
        if !entry.0.contains(&c.source_url) {
            entry.0.push(c.source_url.clone());
        }
        entry.1.insert(i);
    }
    let mut specs = Vec::new();
    let mut report = Vec::new();
    for (root, (urls, members)) in groups {
        let label = first_label[root].clone();
        let id = Term::iri(format!("{folk_namespace}{}", value_local_name(&label)))?;
        let mut spec = ValueSpec::new(id, ValueModule::Folk);
        spec.label = Some(label.clone());
        spec.provenance = urls;
        specs.push(spec);
        let merged: Vec<String> = members.into_iter().filter(|&m| m != root).map(|m| first_label[m].clone()).collect();
        if !merged.is_empty() {
            report.push(MergeRecord { kept: label, merged });
        }
    }
    Ok(DedupeOutcome { specs, report })
}

/// Parses a tab-separated candidate file: `label definition source_url`.
pub fn parse_candidates(src: &str, prefixes: &PrefixTable) -> Result<Vec<Candidate>, ValueError> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') || (i == 0 && line.starts_with("label\t")) {
            continue;
        }
        let cells: Vec<&str> = line.split('\t').collect();
        if cells.len() != 3 {
            return Err(ValueError::Table { line: i + 1, message: format!("expected 3 columns, found {}", cells.len()) });
        }
        out.push(Candidate {
            label: cells[0].trim().to_string(),
            definition: cells[1].trim().to_string(),
            source_url: prefixes.expand(cells[2]).map_err(|e| ValueError::Table { line: i + 1, message: e.to_string() })?,
        });
    }
    Ok(out)
}
