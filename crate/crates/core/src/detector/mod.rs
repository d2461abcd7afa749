//! Frame-based value detection over sentences.
//!
//! A sentence is tokenized, matched against the lexicon (multiwords
//! longest-first, then single forms) and each matched node is annotated
//! with a sense, the frames the sense evokes and the verb classes its sense
//! key points at. Every such entity is then looked up in the trigger
//! graphs, directly or through one `evokes` hop.

mod tokenize;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lexicon::{LexicalEntry, Lexicon, Pos};
use crate::quokka::ActivationKind;
use crate::store::{StoreError, Term, Triple};
use crate::vocab;

pub use tokenize::{tokenize, Token};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DetectorError {
    #[error("sentence {0} has empty text")]
    EmptyText(String),
    #[error("invalid sentence id `{0}`")]
    InvalidId(String),
    #[error("could not start {0} worker threads")]
    Pool(usize),
    #[error(transparent)]
    Store(#[from] StoreError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SenseMode {
    /// One node per matched span: rank-1 sense of the preferred entry.
    #[default]
    FirstSense,
    /// One node per sense of every matching entry.
    AllSenses,
}

impl FromStr for SenseMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "firstSense" | "first-sense" | "first" => Ok(SenseMode::FirstSense),
            "allSenses" | "all-senses" | "all" => Ok(SenseMode::AllSenses),
            _ => Err(format!("unknown detector mode `{s}`")),
        }
    }
}

impl fmt::Display for SenseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SenseMode::FirstSense => "firstSense",
            SenseMode::AllSenses => "allSenses",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NodeAnnotation {
    /// Char offsets into the sentence text, end exclusive.
    pub span: (usize, usize),
    pub surface: String,
    pub lemma: String,
    pub pos: Pos,
    pub sense: Option<String>,
    pub frames: Vec<String>,
    pub verb_classes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentenceGraph {
    pub sentence_id: String,
    pub text: String,
    pub nodes: Vec<NodeAnnotation>,
    pub triples: BTreeSet<Triple>,
}

impl SentenceGraph {
    pub fn no_graph(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// A chain of store triples from a node's sense to a value. The last
/// link is always a `triggers` triple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ActivationPath {
    pub value: Term,
    pub node: usize,
    pub links: Vec<Triple>,
}

impl ActivationPath {
    /// `(entity, edge)` pairs: each entity followed by the predicate leaving it.
    pub fn chain(&self) -> Vec<(&Term, &Term)> {
        self.links.iter().map(|t| (&t.subject, &t.predicate)).collect()
    }

    /// The entity carrying the `triggers` link.
    pub fn trigger_entity(&self) -> &Term {
        &self.links.last().expect("paths are non-empty").subject
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StancePolarity {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct StanceJudgment {
    pub node: usize,
    pub verb_class: Term,
    pub role: String,
    pub polarity: StancePolarity,
    /// Nearest preceding nominal node, if any.
    pub target: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectionResult {
    pub graph: SentenceGraph,
    pub values: Vec<Term>,
    pub paths: Vec<ActivationPath>,
    pub stances: Vec<StanceJudgment>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PathJson<'a> {
    value: &'a str,
    node: usize,
    surface: &'a str,
    chain: Vec<[&'a str; 3]>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct StanceJson<'a> {
    verb_class: &'a str,
    role: &'a str,
    polarity: StancePolarity,
    node: usize,
    target: Option<&'a str>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SummaryJson<'a> {
    id: &'a str,
    values: Vec<&'a str>,
    paths: Vec<PathJson<'a>>,
    stances: Vec<StanceJson<'a>>,
    no_graph: bool,
}

/// One line of a detection summary file, as read back by the evaluator.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DetectionSummary {
    pub id: String,
    pub values: Vec<String>,
    #[serde(default)]
    pub no_graph: bool,
}

impl DetectionResult {
    pub fn no_graph(&self) -> bool {
        self.graph.no_graph()
    }

    /// One JSON object on a single line.
    pub fn summary_json(&self) -> String {
        let value_strs: Vec<&str> = self.values.iter().map(Term::value).collect();
        let paths = self
            .paths
            .iter()
            .map(|p| PathJson {
                value: p.value.value(),
                node: p.node,
                surface: &self.graph.nodes[p.node].surface,
                chain: p.links.iter().map(|t| [t.subject.value(), t.predicate.value(), t.object.value()]).collect(),
            })
            .collect();
        let stances = self
            .stances
            .iter()
            .map(|s| StanceJson {
                verb_class: s.verb_class.value(),
                role: &s.role,
                polarity: s.polarity,
                node: s.node,
                target: s.target.map(|t| self.graph.nodes[t].surface.as_str()),
            })
            .collect();
        let summary =
            SummaryJson { id: &self.graph.sentence_id, values: value_strs, paths, stances, no_graph: self.no_graph() };
        serde_json::to_string(&summary).expect("summary is serializable")
    }

    /// Sentence graph with activation triples attached, as N-Triples.
    pub fn to_ntriples(&self) -> String {
        crate::store::write_ntriples(self.graph.triples.iter())
    }
}

pub struct Detector<'a> {
    lexicon: &'a Lexicon<'a>,
    trigger_graphs: Vec<Term>,
    mode: SenseMode,
    kinds: Option<BTreeSet<ActivationKind>>,
}

fn node_iri(sentence_id: &str, k: usize) -> Term {
    Term::Iri(format!("{}{sentence_id}/node{k}", vocab::SENTENCE))
}

fn sentence_iri(sentence_id: &str) -> Term {
    Term::Iri(format!("{}{sentence_id}", vocab::SENTENCE))
}

impl<'a> Detector<'a> {
    /// Trigger lookups are confined to `trigger_graphs`; frame evocation
    /// uses the lexicon's graphs.
    pub fn new(lexicon: &'a Lexicon<'a>, trigger_graphs: Vec<Term>, mode: SenseMode) -> Result<Self, DetectorError> {
        for g in &trigger_graphs {
            if !lexicon.store().has_graph(g) {
                return Err(StoreError::UnknownGraph(g.value().to_string()).into());
            }
        }
        Ok(Detector { lexicon, trigger_graphs, mode, kinds: None })
    }

    /// Keeps only activations whose triggering entity is of one of `kinds`
    /// (synset for senses, frame, or verb class).
    pub fn restrict_kinds(mut self, kinds: BTreeSet<ActivationKind>) -> Self {
        self.kinds = Some(kinds);
        self
    }

    pub fn mode(&self) -> SenseMode {
        self.mode
    }

    fn preferred<'e>(entries: &[&'e LexicalEntry]) -> Option<&'e LexicalEntry> {
        entries.iter().min_by_key(|e| e.pos).copied()
    }

    fn annotate(&self, tok_start: usize, tok_end: usize, text: &str, entries: &[&LexicalEntry], out: &mut Vec<NodeAnnotation>) {
        let surface: String = text.chars().skip(tok_start).take(tok_end - tok_start).collect();
        let mut push = |e: &LexicalEntry, sense: &Term| {
            let frames = self.lexicon.frames_of_sense(sense);
            let vcs = self.lexicon.verb_classes_of_sense(sense);
            out.push(NodeAnnotation {
                span: (tok_start, tok_end),
                surface: surface.clone(),
                lemma: e.lemma.clone(),
                pos: e.pos,
                sense: Some(sense.value().to_string()),
                frames: frames.iter().map(|t| t.value().to_string()).collect(),
                verb_classes: vcs.iter().map(|t| t.value().to_string()).collect(),
            });
        };
        match self.mode {
            SenseMode::FirstSense => {
                if let Some(e) = Self::preferred(entries) {
                    push(e, &e.senses[0]);
                }
            }
            SenseMode::AllSenses => {
                let mut sorted: Vec<&LexicalEntry> = entries.to_vec();
                sorted.sort_by_key(|e| e.pos);
                for e in sorted {
                    for s in &e.senses {
                        push(e, s);
                    }
                }
            }
        }
    }

    /// Builds the sentence graph. Zero matched nodes means no graph.
    pub fn analyze_sentence(&self, sentence_id: &str, text: &str) -> Result<SentenceGraph, DetectorError> {
        if text.trim().is_empty() {
            return Err(DetectorError::EmptyText(sentence_id.to_string()));
        }
        if sentence_id.is_empty() || !sentence_id.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            return Err(DetectorError::InvalidId(sentence_id.to_string()));
        }
        let tokens = tokenize(text);
        let words: Vec<String> = tokens.iter().map(|t| t.text.clone()).collect();
        let mut nodes = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let longest = self.lexicon.max_multiword_len().min(tokens.len() - i);
            let mut matched = false;
            for len in (2..=longest).rev() {
                let entries = self.lexicon.multiword(&words[i..i + len]);
                if !entries.is_empty() {
                    self.annotate(tokens[i].start, tokens[i + len - 1].end, text, &entries, &mut nodes);
                    i += len;
                    matched = true;
                    break;
                }
            }
            if matched {
                continue;
            }
            let entries = self.lexicon.entries_for_form(&words[i]);
            if !entries.is_empty() {
                self.annotate(tokens[i].start, tokens[i].end, text, &entries, &mut nodes);
            }
            i += 1;
        }

        let mut triples = BTreeSet::new();
        let sentence = sentence_iri(sentence_id);
        for (k, n) in nodes.iter().enumerate() {
            let node = node_iri(sentence_id, k);
            triples.insert(Triple::iris(&sentence, &vocab::vcore("hasNode"), &node));
            triples.insert(Triple::iris(&node, &vocab::rdfs_label(), &Term::literal(n.surface.clone())));
            if let Some(s) = &n.sense {
                triples.insert(Triple::iris(&node, &vocab::vcore("sense"), &Term::Iri(s.clone())));
            }
            for f in &n.frames {
                triples.insert(Triple::iris(&node, &vocab::evokes(), &Term::Iri(f.clone())));
            }
            for vc in &n.verb_classes {
                triples.insert(Triple::iris(&node, &vocab::sense_key(), &Term::Iri(vc.clone())));
            }
        }
        Ok(SentenceGraph { sentence_id: sentence_id.to_string(), text: text.to_string(), nodes, triples })
    }

    fn triggered_by(&self, entity: &Term) -> Vec<Term> {
        let store = self.lexicon.store();
        let set: BTreeSet<Term> =
            self.trigger_graphs.iter().flat_map(|g| store.objects(Some(g), entity, &vocab::triggers())).collect();
        set.into_iter().collect()
    }

    fn kind_allowed(&self, kind: ActivationKind) -> bool {
        self.kinds.as_ref().is_none_or(|k| k.contains(&kind))
    }

    /// Activation paths for the graph's nodes, plus activation triples
    /// attached to the graph.
    pub fn detect_values(&self, mut graph: SentenceGraph) -> DetectionResult {
        let mut paths = BTreeSet::new();
        for (k, n) in graph.nodes.iter().enumerate() {
            let Some(sense) = n.sense.as_ref().map(|s| Term::Iri(s.clone())) else { continue };
            let mut roots: Vec<(Term, Vec<Triple>, ActivationKind)> = vec![(sense.clone(), Vec::new(), ActivationKind::Synset)];
            for f in &n.frames {
                let f = Term::Iri(f.clone());
                roots.push((f.clone(), vec![Triple::iris(&sense, &vocab::evokes(), &f)], ActivationKind::Frame));
            }
            for vc in &n.verb_classes {
                let vc = Term::Iri(vc.clone());
                roots.push((vc.clone(), vec![Triple::iris(&sense, &vocab::sense_key(), &vc)], ActivationKind::VerbClass));
            }
            for (entity, prefix, kind) in roots {
                if self.kind_allowed(kind) {
                    for v in self.triggered_by(&entity) {
                        let mut links = prefix.clone();
                        links.push(Triple::iris(&entity, &vocab::triggers(), &v));
                        paths.insert(ActivationPath { value: v, node: k, links });
                    }
                }
                if !self.kind_allowed(ActivationKind::Frame) {
                    continue;
                }
                for f in self.lexicon.evoked_frames(&entity) {
                    for v in self.triggered_by(&f) {
                        let mut links = prefix.clone();
                        links.push(Triple::iris(&entity, &vocab::evokes(), &f));
                        links.push(Triple::iris(&f, &vocab::triggers(), &v));
                        paths.insert(ActivationPath { value: v, node: k, links });
                    }
                }
            }
        }
        let paths: Vec<ActivationPath> = paths.into_iter().collect();
        let values: BTreeSet<Term> = paths.iter().map(|p| p.value.clone()).collect();
        for p in &paths {
            graph.triples.extend(p.links.iter().cloned());
            graph.triples.insert(Triple::iris(&node_iri(&graph.sentence_id, p.node), &vocab::activates(), &p.value));
        }
        let stances = self.stance_query(&graph);
        DetectionResult { graph, values: values.into_iter().collect(), paths, stances }
    }

    /// Affect stance of verb-class nodes on their nearest preceding nominal.
    pub fn stance_query(&self, graph: &SentenceGraph) -> Vec<StanceJudgment> {
        let mut out = BTreeSet::new();
        for (k, n) in graph.nodes.iter().enumerate() {
            for vc in &n.verb_classes {
                let vc = Term::Iri(vc.clone());
                for stance in self.lexicon.role_stances(&vc) {
                    let target = graph.nodes[..k]
                        .iter()
                        .enumerate()
                        .rev()
                        .find(|(_, m)| m.span.1 <= n.span.0 && m.pos.is_nominal())
                        .map(|(j, _)| j);
                    out.insert(StanceJudgment {
                        node: k,
                        verb_class: vc.clone(),
                        role: stance.role,
                        polarity: if stance.negative { StancePolarity::Negative } else { StancePolarity::Positive },
                        target,
                    });
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn detect(&self, sentence_id: &str, text: &str) -> Result<DetectionResult, DetectorError> {
        Ok(self.detect_values(self.analyze_sentence(sentence_id, text)?))
    }

    /// Detects over `(id, text)` pairs on `jobs` threads; results keep input order.
    pub fn detect_corpus(&self, sentences: &[(String, String)], jobs: usize) -> Result<Vec<DetectionResult>, DetectorError> {
        let jobs = jobs.max(1);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|_| DetectorError::Pool(jobs))?;
        pool.install(|| sentences.par_iter().map(|(id, text)| self.detect(id, text)).collect())
    }
}

/// Count of activations per value across results.
pub fn value_histogram(results: &[DetectionResult]) -> BTreeMap<Term, usize> {
    let mut h = BTreeMap::new();
    for r in results {
        for v in &r.values {
            *h.entry(v.clone()).or_insert(0) += 1;
        }
    }
    h
}
