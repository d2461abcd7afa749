//! Read-only index over the lexical graphs: lemmas and inflected forms,
//! ranked senses, frame evocation, verb classes, frame elements, concept
//! relations and external alignments.
//!
//! Every answer is read straight from store triples; the index only adds
//! the lemma/form tables and the per-entry sense ranking.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::store::{Store, StoreError, Term};
use crate::vocab;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("lemma must be non-empty")]
    EmptyLemma,
    #[error("unknown frame: {0}")]
    UnknownFrame(String),
    #[error("lexical entry {entry} is malformed: {reason}")]
    MalformedEntry { entry: String, reason: String },
    #[error("store must be frozen before building the lexicon")]
    NotFrozen,
    #[error(transparent)]
    Store(#[from] StoreError),
}

/// Part of speech. The declaration order is the preference order used when
/// a single sense must be chosen for an ambiguous surface form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Multiword,
}

impl Pos {
    pub const ALL: [Pos; 5] = [Pos::Noun, Pos::Verb, Pos::Adjective, Pos::Adverb, Pos::Multiword];

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adjective => "adjective",
            Pos::Adverb => "adverb",
            Pos::Multiword => "multiword",
        }
    }

    fn from_term(t: &Term) -> Option<Pos> {
        Pos::ALL.into_iter().find(|p| vocab::lex_pos_value(p.as_str()) == *t)
    }

    /// Nominal heads: nouns and multiword noun phrases.
    pub fn is_nominal(self) -> bool {
        matches!(self, Pos::Noun | Pos::Multiword)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pos {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pos::ALL.into_iter().find(|p| p.as_str() == s.to_ascii_lowercase()).ok_or_else(|| format!("unknown part of speech `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexicalEntry {
    pub id: Term,
    pub lemma: String,
    pub pos: Pos,
    /// Rank order: index 0 is the default sense.
    pub senses: Vec<Term>,
    pub forms: Vec<String>,
    pub concepts: Vec<Term>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ElementType {
    Core,
    Peripheral,
    ExtraThematic,
}

impl ElementType {
    pub const ALL: [ElementType; 3] = [ElementType::Core, ElementType::Peripheral, ElementType::ExtraThematic];

    fn term(self) -> Term {
        match self {
            ElementType::Core => vocab::fe_type_core(),
            ElementType::Peripheral => vocab::fe_type_peripheral(),
            ElementType::ExtraThematic => vocab::fe_type_extra_thematic(),
        }
    }

    fn from_term(t: &Term) -> Option<ElementType> {
        ElementType::ALL.into_iter().find(|e| e.term() == *t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FrameElement {
    pub id: Term,
    pub name: String,
    pub element_type: ElementType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub id: Term,
    pub label: String,
    pub elements: Vec<FrameElement>,
}

/// Relations followed by the concept query.
pub const CONCEPT_RELATIONS: [&str; 6] = ["DerivedFrom", "Causes", "IsA", "UsedFor", "HasSubevent", "FormOf"];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AlignmentRelation {
    SameAs,
    CloseMatch,
    Evokes,
    SenseKey,
    ExternalUrl,
    ConceptRel(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AlignmentEdge {
    pub source: Term,
    pub relation: AlignmentRelation,
    pub target: Term,
}

impl AlignmentRelation {
    pub fn predicate(&self) -> Term {
        match self {
            AlignmentRelation::SameAs => vocab::owl_same_as(),
            AlignmentRelation::CloseMatch => vocab::skos_close_match(),
            AlignmentRelation::Evokes => vocab::evokes(),
            AlignmentRelation::SenseKey => vocab::sense_key(),
            AlignmentRelation::ExternalUrl => vocab::external_url(),
            AlignmentRelation::ConceptRel(name) => vocab::cn_relation(name),
        }
    }

    pub fn concept(name: &str) -> Option<AlignmentRelation> {
        CONCEPT_RELATIONS.contains(&name).then(|| AlignmentRelation::ConceptRel(name.to_string()))
    }
}

/// Affect-stance annotation of a verb class on one of its roles.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RoleStance {
    pub role: String,
    pub negative: bool,
}

#[derive(Debug)]
pub struct Lexicon<'s> {
    store: &'s Store,
    graphs: Vec<Term>,
    entries: Vec<LexicalEntry>,
    by_lemma: BTreeMap<String, Vec<usize>>,
    by_form: HashMap<String, Vec<usize>>,
    /// Multiword entries keyed by their token sequence.
    multiwords: HashMap<Vec<String>, Vec<usize>>,
    max_multiword_len: usize,
    synsets: BTreeSet<Term>,
}

impl<'s> Lexicon<'s> {
    /// Builds the index over the given lexical graphs of a frozen store.
    pub fn build(store: &'s Store, graphs: &[Term]) -> Result<Self, LexiconError> {
        if !store.is_frozen() {
            return Err(LexiconError::NotFrozen);
        }
        for g in graphs {
            if !store.has_graph(g) {
                return Err(StoreError::UnknownGraph(g.value().to_string()).into());
            }
        }
        let mut lex = Lexicon {
            store,
            graphs: graphs.to_vec(),
            entries: Vec::new(),
            by_lemma: BTreeMap::new(),
            by_form: HashMap::new(),
            multiwords: HashMap::new(),
            max_multiword_len: 0,
            synsets: BTreeSet::new(),
        };
        let entry_ids = lex.subjects(&vocab::rdf_type(), &vocab::lex_entry_class());
        for id in entry_ids {
            let entry = lex.read_entry(&id)?;
            lex.entries.push(entry);
        }
        lex.entries.sort_by(|a, b| (&a.lemma, a.pos, &a.id).cmp(&(&b.lemma, b.pos, &b.id)));
        for (i, e) in lex.entries.iter().enumerate() {
            lex.by_lemma.entry(e.lemma.clone()).or_default().push(i);
            let mut forms: BTreeSet<&str> = e.forms.iter().map(String::as_str).collect();
            forms.insert(&e.lemma);
            if e.pos == Pos::Multiword {
                let toks: Vec<String> = e.lemma.split_whitespace().map(str::to_string).collect();
                lex.max_multiword_len = lex.max_multiword_len.max(toks.len());
                lex.multiwords.entry(toks).or_default().push(i);
            } else {
                for f in forms {
                    lex.by_form.entry(f.to_string()).or_default().push(i);
                }
            }
            lex.synsets.extend(e.senses.iter().cloned());
        }
        Ok(lex)
    }

    fn read_entry(&self, id: &Term) -> Result<LexicalEntry, LexiconError> {
        let malformed = |reason: &str| LexiconError::MalformedEntry { entry: id.value().to_string(), reason: reason.to_string() };
        let lemma = match self.objects(id, &vocab::lex_lemma()).as_slice() {
            [Term::Literal { lexical, .. }] => lexical.to_lowercase(),
            _ => return Err(malformed("expected exactly one lemma literal")),
        };
        let pos = match self.objects(id, &vocab::lex_pos()).as_slice() {
            [p] => Pos::from_term(p).ok_or_else(|| malformed("unknown part of speech"))?,
            _ => return Err(malformed("expected exactly one part of speech")),
        };
        let mut ranked = Vec::new();
        for link in self.objects(id, &vocab::lex_has_sense()) {
            let synset = match self.objects(&link, &vocab::lex_synset()).as_slice() {
                [s] => s.clone(),
                _ => return Err(malformed("sense link without a single synset")),
            };
            let rank: u32 = match self.objects(&link, &vocab::lex_rank()).as_slice() {
                [Term::Literal { lexical, .. }] => lexical.parse().map_err(|_| malformed("non-numeric sense rank"))?,
                _ => return Err(malformed("sense link without a single rank")),
            };
            ranked.push((rank, synset));
        }
        if ranked.is_empty() {
            return Err(malformed("entry has no senses"));
        }
        ranked.sort();
        if ranked.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(malformed("duplicate sense rank"));
        }
        let forms = self
            .objects(id, &vocab::lex_form())
            .into_iter()
            .filter_map(|t| match t {
                Term::Literal { lexical, .. } => Some(lexical.to_lowercase()),
                _ => None,
            })
            .collect();
        Ok(LexicalEntry {
            id: id.clone(),
            lemma,
            pos,
            senses: ranked.into_iter().map(|(_, s)| s).collect(),
            forms,
            concepts: self.objects(id, &vocab::lex_concept()),
        })
    }

    pub fn store(&self) -> &'s Store {
        self.store
    }

    pub fn graphs(&self) -> &[Term] {
        &self.graphs
    }

    pub fn entries(&self) -> &[LexicalEntry] {
        &self.entries
    }

    fn objects(&self, s: &Term, p: &Term) -> Vec<Term> {
        let mut out: BTreeSet<Term> = BTreeSet::new();
        for g in &self.graphs {
            out.extend(self.store.objects(Some(g), s, p));
        }
        out.into_iter().collect()
    }

    fn subjects(&self, p: &Term, o: &Term) -> Vec<Term> {
        let mut out: BTreeSet<Term> = BTreeSet::new();
        for g in &self.graphs {
            out.extend(self.store.subjects(Some(g), p, o));
        }
        out.into_iter().collect()
    }

    /// Entries for a lemma, optionally restricted to one part of speech.
    pub fn lookup_lemma(&self, lemma: &str, pos: Option<Pos>) -> Result<Vec<&LexicalEntry>, LexiconError> {
        let lemma = lemma.trim().to_lowercase();
        if lemma.is_empty() {
            return Err(LexiconError::EmptyLemma);
        }
        Ok(self
            .by_lemma
            .get(&lemma)
            .into_iter()
            .flatten()
            .map(|&i| &self.entries[i])
            .filter(|e| pos.is_none_or(|p| e.pos == p))
            .collect())
    }

    /// Single-token entries whose lemma or inflected forms match `form`.
    pub fn entries_for_form(&self, form: &str) -> Vec<&LexicalEntry> {
        self.by_form.get(form).into_iter().flatten().map(|&i| &self.entries[i]).collect()
    }

    /// Multiword entries spelled exactly by `tokens`.
    pub fn multiword(&self, tokens: &[String]) -> Vec<&LexicalEntry> {
        self.multiwords.get(tokens).into_iter().flatten().map(|&i| &self.entries[i]).collect()
    }

    pub fn max_multiword_len(&self) -> usize {
        self.max_multiword_len
    }

    /// True when the term is the sense of at least one entry.
    pub fn is_synset(&self, t: &Term) -> bool {
        self.synsets.contains(t)
    }

    pub fn frames_of_sense(&self, sense: &Term) -> Vec<Term> {
        self.objects(sense, &vocab::evokes())
    }

    pub fn verb_classes_of_sense(&self, sense: &Term) -> Vec<Term> {
        self.objects(sense, &vocab::sense_key())
    }

    /// Frames evoked by any entity (synset or verb class).
    pub fn evoked_frames(&self, entity: &Term) -> Vec<Term> {
        self.objects(entity, &vocab::evokes())
    }

    /// Entities with an `evokes` edge into the frame.
    pub fn evokers_of(&self, frame: &Term) -> Vec<Term> {
        self.subjects(&vocab::evokes(), frame)
    }

    /// Synsets whose sense key points at the verb class.
    pub fn synsets_of_verb_class(&self, verb_class: &Term) -> Vec<Term> {
        self.subjects(&vocab::sense_key(), verb_class)
    }

    pub fn is_frame(&self, t: &Term) -> bool {
        self.objects(t, &vocab::rdf_type()).contains(&vocab::frame_class())
    }

    pub fn frame(&self, id: &Term) -> Result<Frame, LexiconError> {
        if !self.is_frame(id) {
            return Err(LexiconError::UnknownFrame(id.value().to_string()));
        }
        let label = self
            .objects(id, &vocab::rdfs_label())
            .into_iter()
            .next()
            .map_or_else(|| id.local_name().to_string(), |t| t.value().to_string());
        let elements = self.frame_elements(id, &ElementType::ALL.into_iter().collect())?;
        Ok(Frame { id: id.clone(), label, elements })
    }

    /// Elements of a frame whose type is in `types`, sorted by IRI.
    pub fn frame_elements(&self, frame: &Term, types: &BTreeSet<ElementType>) -> Result<Vec<FrameElement>, LexiconError> {
        if !self.is_frame(frame) {
            return Err(LexiconError::UnknownFrame(frame.value().to_string()));
        }
        let mut out = Vec::new();
        for fe in self.objects(frame, &vocab::has_frame_element()) {
            let et = match self.objects(&fe, &vocab::element_type()).as_slice() {
                [t] => ElementType::from_term(t),
                _ => None,
            };
            let Some(element_type) = et else {
                return Err(LexiconError::MalformedEntry {
                    entry: fe.value().to_string(),
                    reason: "frame element needs exactly one known type".into(),
                });
            };
            if !types.contains(&element_type) {
                continue;
            }
            let name = self
                .objects(&fe, &vocab::fe_name())
                .into_iter()
                .next()
                .map_or_else(|| fe.local_name().to_string(), |t| t.value().to_string());
            out.push(FrameElement { id: fe, name, element_type });
        }
        Ok(out)
    }

    /// Concept anchors of all entries of a lemma.
    pub fn concept_anchors(&self, lemma: &str, pos: Option<Pos>) -> Result<Vec<Term>, LexiconError> {
        let set: BTreeSet<Term> =
            self.lookup_lemma(lemma, pos)?.into_iter().flat_map(|e| e.concepts.iter().cloned()).collect();
        Ok(set.into_iter().collect())
    }

    /// Concepts one relation hop away, following edges in either direction.
    pub fn concept_neighbours(&self, concept: &Term, relations: &[&str]) -> Vec<AlignmentEdge> {
        let mut out = BTreeSet::new();
        for rel in relations {
            let Some(relation) = AlignmentRelation::concept(rel) else { continue };
            let p = relation.predicate();
            for o in self.objects(concept, &p) {
                out.insert(AlignmentEdge { source: concept.clone(), relation: relation.clone(), target: o });
            }
            for s in self.subjects(&p, concept) {
                out.insert(AlignmentEdge { source: s, relation: relation.clone(), target: concept.clone() });
            }
        }
        out.into_iter().collect()
    }

    pub fn external_links(&self, concept: &Term) -> Vec<Term> {
        self.objects(concept, &vocab::external_url())
    }

    /// `owl:sameAs` neighbours in either direction.
    pub fn same_as(&self, t: &Term) -> Vec<Term> {
        let mut out: BTreeSet<Term> = self.objects(t, &vocab::owl_same_as()).into_iter().collect();
        out.extend(self.subjects(&vocab::owl_same_as(), t));
        out.remove(t);
        out.into_iter().collect()
    }

    /// Entities declared `skos:closeMatch` to the frame.
    pub fn close_matches(&self, frame: &Term) -> Vec<Term> {
        let mut out: BTreeSet<Term> = self.subjects(&vocab::skos_close_match(), frame).into_iter().collect();
        out.extend(self.objects(frame, &vocab::skos_close_match()));
        out.into_iter().collect()
    }

    /// Affect-stance annotations of a verb class, sorted by role.
    pub fn role_stances(&self, verb_class: &Term) -> Vec<RoleStance> {
        let mut out = Vec::new();
        for (pred, negative) in [(vocab::negative_on_role(), true), (vocab::positive_on_role(), false)] {
            for role in self.objects(verb_class, &pred) {
                out.push(RoleStance { role: role.value().to_string(), negative });
            }
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::{Format, Pattern, PatternTerm};

    pub(crate) const MINI: &str = r#"
@prefix lex: <https://w3id.org/framester/lexicon/> .
@prefix fschema: <https://w3id.org/framester/schema/> .
@prefix wn: <https://w3id.org/framester/wn/wn30/instances/synset-> .
@prefix fs: <https://w3id.org/framester/framenet/abox/frame/> .
@prefix fe: <https://w3id.org/framester/framenet/abox/fe/> .
@prefix vn: <https://w3id.org/framester/vn/vn31/data/> .
lex:risk-verb a lex:LexicalEntry ; lex:lemma "risk" ; lex:pos lex:verb ; lex:form "risks" , "risked" ;
    lex:hasSense lex:risk-verb-s1 , lex:risk-verb-s2 .
lex:risk-verb-s2 lex:synset wn:risk-verb-2 ; lex:rank 2 .
lex:risk-verb-s1 lex:synset wn:risk-verb-1 ; lex:rank 1 .
lex:act_of_dishonesty-mw a lex:LexicalEntry ; lex:lemma "act of dishonesty" ; lex:pos lex:multiword ;
    lex:hasSense lex:act_of_dishonesty-mw-s1 .
lex:act_of_dishonesty-mw-s1 lex:synset wn:act_of_dishonesty-noun-1 ; lex:rank 1 .
wn:risk-verb-2 fschema:evokes fs:RunRisk , fs:Daring ; fschema:senseKey vn:Risk_94000000 .
fs:RunRisk a fschema:Frame ; fschema:hasFrameElement fe:Agent.RunRisk , fe:Harm.RunRisk , fe:Time.RunRisk .
fe:Agent.RunRisk fschema:frameElementType fschema:Core ; fschema:frameElementName "Agent" .
fe:Harm.RunRisk fschema:frameElementType fschema:Peripheral .
fe:Time.RunRisk fschema:frameElementType fschema:ExtraThematic .
fs:Daring a fschema:Frame .
"#;

    fn store() -> Store {
        let mut s = Store::new();
        s.load(MINI, Format::Turtle, &vocab::graph_name("lexical")).unwrap();
        s.freeze();
        s
    }

    fn wn(local: &str) -> Term {
        Term::Iri(format!("https://w3id.org/framester/wn/wn30/instances/synset-{local}"))
    }

    fn fs(local: &str) -> Term {
        Term::Iri(format!("https://w3id.org/framester/framenet/abox/frame/{local}"))
    }

    #[test]
    fn requires_frozen_store() {
        let s = Store::new();
        assert_eq!(Lexicon::build(&s, &[]).unwrap_err(), LexiconError::NotFrozen);
    }

    #[test]
    fn lemma_lookup_and_ranking() {
        let s = store();
        let lex = Lexicon::build(&s, &[vocab::graph_name("lexical")]).unwrap();
        let entries = lex.lookup_lemma("Risk", None).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].senses, vec![wn("risk-verb-1"), wn("risk-verb-2")]);
        assert!(lex.lookup_lemma("risk", Some(Pos::Noun)).unwrap().is_empty());
        assert!(lex.lookup_lemma("zzzz-not-a-word", None).unwrap().is_empty());
        assert_eq!(lex.lookup_lemma("  ", None).unwrap_err(), LexiconError::EmptyLemma);
        assert_eq!(lex.entries_for_form("risked").len(), 1);
        let mw: Vec<String> = ["act", "of", "dishonesty"].iter().map(|s| s.to_string()).collect();
        assert_eq!(lex.multiword(&mw).len(), 1);
        assert_eq!(lex.max_multiword_len(), 3);
    }

    #[test]
    fn frames_match_bgp() {
        let s = store();
        let lex = Lexicon::build(&s, &[vocab::graph_name("lexical")]).unwrap();
        let sense = wn("risk-verb-2");
        let frames = lex.frames_of_sense(&sense);
        assert_eq!(frames, vec![fs("Daring"), fs("RunRisk")]);
        let via_bgp: Vec<Term> = s
            .match_bgp(&[Pattern::new(&sense, vocab::evokes(), PatternTerm::var("f"))])
            .unwrap()
            .into_iter()
            .map(|b| b["f"].clone())
            .collect();
        assert_eq!(frames, via_bgp);
        assert!(lex.frames_of_sense(&wn("risk-verb-1")).is_empty());
        assert_eq!(lex.verb_classes_of_sense(&sense).len(), 1);
    }

    #[test]
    fn frame_element_types_partition() {
        let s = store();
        let lex = Lexicon::build(&s, &[vocab::graph_name("lexical")]).unwrap();
        let all = lex.frame_elements(&fs("RunRisk"), &ElementType::ALL.into_iter().collect()).unwrap();
        assert_eq!(all.len(), 3);
        let mut union = Vec::new();
        for t in ElementType::ALL {
            union.extend(lex.frame_elements(&fs("RunRisk"), &[t].into_iter().collect()).unwrap());
        }
        union.sort();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(union, sorted);
        assert!(lex.frame_elements(&fs("RunRisk"), &BTreeSet::new()).unwrap().is_empty());
        assert!(matches!(lex.frame_elements(&fs("Nope"), &BTreeSet::new()), Err(LexiconError::UnknownFrame(_))));
        assert_eq!(lex.frame(&fs("RunRisk")).unwrap().elements.iter().find(|e| e.element_type == ElementType::Core).unwrap().name, "Agent");
    }
}
