//! IRIs of the schema vocabulary shared by fixtures, queries and emitters.

use crate::store::Term;

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";
pub const PROV: &str = "http://www.w3.org/ns/prov#";
/// Framester schema: evocation, sense keys, frame elements, affect stance.
pub const FSCHEMA: &str = "https://w3id.org/framester/schema/";
/// Lexical entries, forms and ranked senses.
pub const LEX: &str = "https://w3id.org/framester/lexicon/";
/// ConceptNet concepts and relations.
pub const CN: &str = "https://w3id.org/framester/conceptnet5/data/en/";
pub const VCORE: &str = "https://w3id.org/spice/SON/ValueCore#";
pub const TAF: &str = "https://w3id.org/spice/SON/ThatsAllFolks#";
/// YAGO resources, reachable from synsets through `owl:sameAs`.
pub const YAGO: &str = "http://yago-knowledge.org/resource/";
/// Named graphs.
pub const GRAPH: &str = "https://w3id.org/spice/SON/graph/";
/// Sentence graphs produced by the detector.
pub const SENTENCE: &str = "https://w3id.org/spice/SON/sentence/";

fn iri(ns: &str, local: &str) -> Term {
    Term::Iri(format!("{ns}{local}"))
}

pub fn rdf_type() -> Term {
    iri(RDF, "type")
}
pub fn rdfs_label() -> Term {
    iri(RDFS, "label")
}
pub fn rdfs_subclass_of() -> Term {
    iri(RDFS, "subClassOf")
}
pub fn owl_class() -> Term {
    iri(OWL, "Class")
}
pub fn owl_same_as() -> Term {
    iri(OWL, "sameAs")
}
pub fn skos_close_match() -> Term {
    iri(SKOS, "closeMatch")
}
pub fn prov_was_attributed_to() -> Term {
    iri(PROV, "wasAttributedTo")
}
pub fn prov_was_generated_by() -> Term {
    iri(PROV, "wasGeneratedBy")
}

pub fn evokes() -> Term {
    iri(FSCHEMA, "evokes")
}
pub fn sense_key() -> Term {
    iri(FSCHEMA, "senseKey")
}
pub fn external_url() -> Term {
    iri(FSCHEMA, "externalUrl")
}
pub fn frame_class() -> Term {
    iri(FSCHEMA, "Frame")
}
pub fn has_frame_element() -> Term {
    iri(FSCHEMA, "hasFrameElement")
}
pub fn element_type() -> Term {
    iri(FSCHEMA, "frameElementType")
}
pub fn fe_name() -> Term {
    iri(FSCHEMA, "frameElementName")
}
pub fn fe_type_core() -> Term {
    iri(FSCHEMA, "Core")
}
pub fn fe_type_peripheral() -> Term {
    iri(FSCHEMA, "Peripheral")
}
pub fn fe_type_extra_thematic() -> Term {
    iri(FSCHEMA, "ExtraThematic")
}
pub fn negative_on_role() -> Term {
    iri(FSCHEMA, "negativeAffectOnRole")
}
pub fn positive_on_role() -> Term {
    iri(FSCHEMA, "positiveAffectOnRole")
}

pub fn lex_entry_class() -> Term {
    iri(LEX, "LexicalEntry")
}
pub fn lex_lemma() -> Term {
    iri(LEX, "lemma")
}
pub fn lex_pos() -> Term {
    iri(LEX, "pos")
}
pub fn lex_form() -> Term {
    iri(LEX, "form")
}
pub fn lex_has_sense() -> Term {
    iri(LEX, "hasSense")
}
pub fn lex_synset() -> Term {
    iri(LEX, "synset")
}
pub fn lex_rank() -> Term {
    iri(LEX, "rank")
}
pub fn lex_concept() -> Term {
    iri(LEX, "concept")
}
pub fn lex_pos_value(local: &str) -> Term {
    iri(LEX, local)
}

pub fn cn_relation(name: &str) -> Term {
    iri(CN, name)
}

pub fn triggers() -> Term {
    iri(VCORE, "triggers")
}
pub fn activates() -> Term {
    iri(VCORE, "activates")
}
pub fn value_concept_class() -> Term {
    iri(VCORE, "Value")
}
pub fn value_situation_class() -> Term {
    iri(VCORE, "ValueSituation")
}
pub fn polarity() -> Term {
    iri(VCORE, "polarity")
}
pub fn dyad_partner() -> Term {
    iri(VCORE, "dyadPartner")
}
pub fn value_module() -> Term {
    iri(VCORE, "module")
}
pub fn next_in_circle() -> Term {
    iri(VCORE, "nextInCircle")
}
pub fn trigger_statement_class() -> Term {
    iri(VCORE, "TriggerStatement")
}
pub fn trigger_entity() -> Term {
    iri(VCORE, "triggerEntity")
}
pub fn triggered_value() -> Term {
    iri(VCORE, "triggeredValue")
}
pub fn activation_kind() -> Term {
    iri(VCORE, "activationKind")
}
pub fn vcore(local: &str) -> Term {
    iri(VCORE, local)
}
pub fn graph_name(local: &str) -> Term {
    iri(GRAPH, local)
}
