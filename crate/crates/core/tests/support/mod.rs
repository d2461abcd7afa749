//! Independent oracles and random generators shared by the property tests
//! and the acceptance target. Nothing here calls the engine's query code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use folkgraph::lexicon::Pos;
use folkgraph::quokka::{ActivationKind, Provenance, TriggerEdge};
use folkgraph::store::{Binding, NamedGraph, Pattern, PatternTerm, Store, Term, Triple};
use folkgraph::vocab;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn ex(local: &str) -> Term {
    Term::Iri(format!("http://ex.org/{local}"))
}

// ---------------------------------------------------------------------------
// random graphs

fn random_literal(rng: &mut StdRng) -> Term {
    const LEX: [&str; 8] = ["plain", "with \"quotes\"", "back\\slash", "line\nbreak", "tab\there", "caf\u{e9}", "", "42"];
    let lexical = LEX[rng.gen_range(0..LEX.len())];
    match rng.gen_range(0..4) {
        0 => Term::literal(lexical),
        1 => Term::lang_literal(lexical, ["en", "en-GB", "it"][rng.gen_range(0..3)]),
        2 => Term::integer(rng.gen_range(-5..50)),
        _ => Term::typed_literal(lexical, "http://ex.org/dt"),
    }
}

/// Term pool for one random graph: subjects, predicates, objects.
pub struct Pool {
    pub subjects: Vec<Term>,
    pub predicates: Vec<Term>,
    pub objects: Vec<Term>,
}

pub fn random_pool(rng: &mut StdRng, blanks: usize) -> Pool {
    let iris: Vec<Term> = (0..rng.gen_range(3..14)).map(|i| ex(&format!("n{i}"))).collect();
    let bnodes: Vec<Term> = (0..blanks).map(|i| Term::blank(format!("b{i}"))).collect();
    let predicates: Vec<Term> = (0..rng.gen_range(1..5)).map(|i| ex(&format!("p{i}"))).collect();
    let literals: Vec<Term> = (0..rng.gen_range(0..6)).map(|_| random_literal(rng)).collect();
    let subjects: Vec<Term> = iris.iter().chain(&bnodes).cloned().collect();
    let objects: Vec<Term> = subjects.iter().chain(&literals).chain(&predicates).cloned().collect();
    Pool { subjects, predicates, objects }
}

pub fn random_triples(rng: &mut StdRng, pool: &Pool, n: usize) -> BTreeSet<Triple> {
    (0..n)
        .map(|_| {
            Triple::new(
                pool.subjects.choose(rng).unwrap().clone(),
                pool.predicates.choose(rng).unwrap().clone(),
                pool.objects.choose(rng).unwrap().clone(),
            )
            .unwrap()
        })
        .collect()
}

/// A store of 1 to 3 named graphs with at most `max_triples` statements in total.
pub fn random_store(rng: &mut StdRng, max_triples: usize) -> (Store, Vec<(Term, BTreeSet<Triple>)>, Pool) {
    let blanks = rng.gen_range(0..4);
    let pool = random_pool(rng, blanks);
    let ngraphs = rng.gen_range(1..4);
    let total = rng.gen_range(0..=max_triples);
    let mut store = Store::new();
    let mut graphs = Vec::new();
    for g in 0..ngraphs {
        let name = ex(&format!("g{g}"));
        let triples = random_triples(rng, &pool, total / ngraphs);
        store.create_graph(&name).unwrap();
        for t in &triples {
            store.insert(&name, t).unwrap();
        }
        graphs.push((name, triples));
    }
    store.freeze();
    (store, graphs, pool)
}

pub fn random_bgp(rng: &mut StdRng, pool: &Pool, graphs: &[(Term, BTreeSet<Triple>)]) -> Vec<Pattern> {
    const VARS: [&str; 4] = ["a", "b", "c", "d"];
    let absent = ex("absent");
    let pick = |rng: &mut StdRng, from: &[Term]| -> PatternTerm {
        match rng.gen_range(0..10) {
            0..=4 => PatternTerm::var(VARS[rng.gen_range(0..VARS.len())]),
            5 => PatternTerm::Const(absent.clone()),
            _ => PatternTerm::Const(from.choose(rng).unwrap().clone()),
        }
    };
    (0..rng.gen_range(1..4))
        .map(|_| {
            let mut p = Pattern::new(pick(rng, &pool.subjects), pick(rng, &pool.predicates), pick(rng, &pool.objects));
            if rng.gen_bool(0.3) {
                p = p.in_graph(&graphs.choose(rng).unwrap().0);
            }
            p
        })
        .collect()
}

// ---------------------------------------------------------------------------
// brute-force BGP

fn unify(slot: &PatternTerm, value: &Term, b: &mut Binding) -> bool {
    match slot {
        PatternTerm::Const(c) => c == value,
        PatternTerm::Var(v) => match b.get(v) {
            Some(prev) => prev == value,
            None => {
                b.insert(v.clone(), value.clone());
                true
            }
        },
    }
}

/// Nested loop over the patterns in written order, scanning every
/// statement of the scoped graphs at each level.
pub fn brute_bgp(graphs: &[(Term, BTreeSet<Triple>)], patterns: &[Pattern]) -> BTreeSet<Binding> {
    let mut rows = vec![Binding::new()];
    for p in patterns {
        let scoped: BTreeSet<&Triple> = graphs
            .iter()
            .filter(|(name, _)| p.graph.as_ref().is_none_or(|g| g == name))
            .flat_map(|(_, ts)| ts.iter())
            .collect();
        let mut next = Vec::new();
        for row in &rows {
            for t in &scoped {
                let mut b = row.clone();
                if unify(&p.subject, &t.subject, &mut b)
                    && unify(&p.predicate, &t.predicate, &mut b)
                    && unify(&p.object, &t.object, &mut b)
                {
                    next.push(b);
                }
            }
        }
        rows = next;
    }
    rows.into_iter().collect()
}

// ---------------------------------------------------------------------------
// graph isomorphism

fn blanks(ts: &BTreeSet<Triple>) -> Vec<Term> {
    let set: BTreeSet<Term> = ts.iter().flat_map(|t| [&t.subject, &t.object]).filter(|t| t.is_blank()).cloned().collect();
    set.into_iter().collect()
}

fn relabel(ts: &BTreeSet<Triple>, map: &BTreeMap<Term, Term>) -> BTreeSet<Triple> {
    let m = |t: &Term| map.get(t).cloned().unwrap_or_else(|| t.clone());
    ts.iter().map(|t| Triple::iris(&m(&t.subject), &t.predicate, &m(&t.object))).collect()
}

/// Equality up to a bijection of blank node labels, by exhaustive search.
pub fn isomorphic(a: &BTreeSet<Triple>, b: &BTreeSet<Triple>) -> bool {
    let (ba, bb) = (blanks(a), blanks(b));
    if a.len() != b.len() || ba.len() != bb.len() {
        return false;
    }
    fn search(i: usize, ba: &[Term], bb: &[Term], used: &mut Vec<bool>, map: &mut BTreeMap<Term, Term>, a: &BTreeSet<Triple>, b: &BTreeSet<Triple>) -> bool {
        if i == ba.len() {
            return relabel(a, map) == *b;
        }
        for j in 0..bb.len() {
            if !used[j] {
                used[j] = true;
                map.insert(ba[i].clone(), bb[j].clone());
                if search(i + 1, ba, bb, used, map, a, b) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    search(0, &ba, &bb, &mut vec![false; bb.len()], &mut BTreeMap::new(), a, b)
}

// ---------------------------------------------------------------------------
// random lexical KBs

pub const LEMMAS: [&str; 6] = ["alpha", "beta", "gamma", "delta", "omega", "sigma"];
pub const FILLER: [&str; 4] = ["the", "and", "zzz", "of"];

pub struct RandomKb {
    pub store: Store,
    pub lexical: Term,
    pub triggers: Term,
    pub frames: Vec<Term>,
    pub verb_classes: Vec<Term>,
    pub synsets: Vec<Term>,
    pub values: Vec<Term>,
}

fn add(g: &mut NamedGraph, s: &Term, p: Term, o: Term) {
    g.insert(Triple::iris(s, &p, &o));
}

/// A lexicon over [`LEMMAS`] with random senses, frame evocations and
/// sense keys, plus a trigger graph of random `triggers` edges.
pub fn random_kb(rng: &mut StdRng) -> RandomKb {
    let lexical = vocab::graph_name("lexical");
    let triggers = vocab::graph_name("triggers/random");
    let frames: Vec<Term> = (0..rng.gen_range(1..7)).map(|i| ex(&format!("F{i}"))).collect();
    let verb_classes: Vec<Term> = (0..rng.gen_range(0..4)).map(|i| ex(&format!("VC{i}"))).collect();
    let values: Vec<Term> = (0..4).map(|i| ex(&format!("V{i}"))).collect();
    let mut lex = NamedGraph::new(lexical.clone());
    let mut synsets = Vec::new();
    for f in &frames {
        add(&mut lex, f, vocab::rdf_type(), vocab::frame_class());
    }
    for vc in &verb_classes {
        for f in frames.iter().filter(|_| rng.gen_bool(0.2)) {
            add(&mut lex, vc, vocab::evokes(), f.clone());
        }
    }
    let lemmas: Vec<&str> = LEMMAS.iter().copied().filter(|_| rng.gen_bool(0.8)).collect();
    for lemma in lemmas {
        let pos = [Pos::Noun, Pos::Verb, Pos::Adjective][rng.gen_range(0..3)];
        let entry = ex(&format!("{lemma}_{}", pos.as_str()));
        add(&mut lex, &entry, vocab::rdf_type(), vocab::lex_entry_class());
        add(&mut lex, &entry, vocab::lex_lemma(), Term::literal(lemma));
        add(&mut lex, &entry, vocab::lex_pos(), vocab::lex_pos_value(pos.as_str()));
        for k in 1..=rng.gen_range(1..4) {
            let syn = ex(&format!("syn-{lemma}-{}-{k}", pos.as_str()));
            let link = ex(&format!("{lemma}_{}_s{k}", pos.as_str()));
            add(&mut lex, &entry, vocab::lex_has_sense(), link.clone());
            add(&mut lex, &link, vocab::lex_synset(), syn.clone());
            add(&mut lex, &link, vocab::lex_rank(), Term::integer(k));
            for f in &frames {
                if rng.gen_bool(0.3) {
                    add(&mut lex, &syn, vocab::evokes(), f.clone());
                }
            }
            for vc in &verb_classes {
                if rng.gen_bool(0.3) {
                    add(&mut lex, &syn, vocab::sense_key(), vc.clone());
                }
            }
            synsets.push(syn);
        }
    }
    let mut trig = NamedGraph::new(triggers.clone());
    let entities: Vec<&Term> = frames.iter().chain(&verb_classes).chain(&synsets).collect();
    for e in entities {
        for v in values.iter().filter(|_| rng.gen_bool(0.15)) {
            add(&mut trig, e, vocab::triggers(), v.clone());
        }
    }
    let mut store = Store::new();
    store.add_graph(&lex).unwrap();
    store.add_graph(&trig).unwrap();
    store.freeze();
    RandomKb { store, lexical, triggers, frames, verb_classes, synsets, values }
}

/// A sentence of random lemmas and filler words.
pub fn random_sentence(rng: &mut StdRng) -> String {
    let words: Vec<&str> = (0..rng.gen_range(1..9))
        .map(|_| if rng.gen_bool(0.6) { LEMMAS[rng.gen_range(0..LEMMAS.len())] } else { FILLER[rng.gen_range(0..FILLER.len())] })
        .collect();
    words.join(" ")
}

// ---------------------------------------------------------------------------
// trigger closure

/// Checks every derived-closure edge against the statements of `lexical`
/// and the emitted graph: a synset must evoke an accepted frame that
/// triggers the value; a verb class must be the sense key of such a synset.
pub fn closure_violations(store: &Store, lexical: &Term, edges: &[TriggerEdge], emitted: Option<&NamedGraph>) -> Vec<String> {
    let has = |s: &Term, p: Term, o: &Term| store.contains(Some(lexical), &Triple::iris(s, &p, o));
    let frames: Vec<&Term> =
        edges.iter().filter(|e| e.activation_kind == ActivationKind::Frame).map(|e| &e.trigger_entity).collect();
    let mut out = Vec::new();
    for e in edges.iter().filter(|e| e.provenance == Provenance::DerivedClosure) {
        let Some(g) = emitted else {
            out.push(format!("{}: no graph emitted", e.trigger_entity));
            continue;
        };
        let frame_ok = |syn: &Term| {
            frames.iter().any(|f| has(syn, vocab::evokes(), f) && g.triples.contains(&Triple::iris(f, &vocab::triggers(), &e.value)))
        };
        let ok = match e.activation_kind {
            ActivationKind::Synset => frame_ok(&e.trigger_entity),
            ActivationKind::VerbClass => store
                .triples_matching(Some(lexical), None, Some(&vocab::sense_key()), Some(&e.trigger_entity))
                .unwrap()
                .iter()
                .any(|t| frame_ok(&t.subject)),
            _ => false,
        };
        if !ok || !g.triples.contains(&Triple::iris(&e.trigger_entity, &vocab::triggers(), &e.value)) {
            out.push(format!("{} ({:?}) lacks a justification path", e.trigger_entity, e.activation_kind));
        }
    }
    out
}
