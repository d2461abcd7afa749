use std::collections::{BTreeMap, BTreeSet};

use folkgraph::detector::DetectionSummary;
use folkgraph::eval::{annotator_stats, coverage_stats, AnnotatedSentence, Confidence, Label};
use folkgraph::store::Term;
use folkgraph::valuenet::{dedupe_candidates, Candidate, DedupeOverrides, ValueModel, ValueModule, ValueSpec, Polarity};
use proptest::prelude::*;

const FOLK: &str = "http://ex.org/folk#";
const WORDS: [&str; 5] = ["Risk", "Rigor", "Self respect", "Family", "Hard work"];

fn label_variant(word: &str, style: u8) -> String {
    match style % 3 {
        0 => word.to_string(),
        1 => word.to_uppercase(),
        _ => format!("  {}  ", word.replace(' ', "   ")),
    }
}

fn candidates() -> impl Strategy<Value = Vec<Candidate>> {
    prop::collection::vec((0..WORDS.len(), any::<u8>(), 0..4u8), 1..15).prop_map(|rows| {
        rows.into_iter()
            .map(|(w, style, src)| Candidate {
                label: label_variant(WORDS[w], style),
                definition: String::new(),
                source_url: Term::Iri(format!("http://src.org/{src}")),
            })
            .collect()
    })
}

fn norm(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

proptest! {
    #[test]
    fn dedupe_groups_by_normalized_label(cands in candidates()) {
        let out = dedupe_candidates(&cands, None, &DedupeOverrides::default(), FOLK).unwrap();
        let mut first: Vec<String> = Vec::new();
        let mut urls: BTreeMap<String, BTreeSet<Term>> = BTreeMap::new();
        for c in &cands {
            let n = norm(&c.label);
            if !first.iter().any(|f| norm(f) == n) {
                first.push(c.label.trim().to_string());
            }
            urls.entry(n).or_default().insert(c.source_url.clone());
        }
        prop_assert_eq!(out.specs.len(), first.len());
        for spec in &out.specs {
            let label = spec.label.clone().unwrap();
            prop_assert!(first.contains(&label), "label {} is not first-seen", label);
            let got: BTreeSet<Term> = spec.provenance.iter().cloned().collect();
            prop_assert_eq!(got.len(), spec.provenance.len(), "provenance has duplicates");
            prop_assert_eq!(&got, &urls[&norm(&label)]);
        }
    }

    #[test]
    fn merge_override_unites_provenance(cands in candidates()) {
        let overrides = DedupeOverrides::parse("Risk = Rigor\n").unwrap();
        let out = dedupe_candidates(&cands, None, &overrides, FOLK).unwrap();
        let has = |w: &str| cands.iter().any(|c| norm(&c.label) == norm(w));
        if has("Risk") && has("Rigor") {
            let merged = out.specs.iter().filter(|s| ["risk", "rigor"].contains(&norm(s.label.as_deref().unwrap()).as_str())).count();
            prop_assert_eq!(merged, 1);
        }
        let all: BTreeSet<Term> = cands.iter().map(|c| c.source_url.clone()).collect();
        let covered: BTreeSet<Term> = out.specs.iter().flat_map(|s| s.provenance.iter().cloned()).collect();
        prop_assert_eq!(all, covered);
    }

    #[test]
    fn registered_dyads_are_symmetric(n in 1usize..6) {
        let mut model = ValueModel::new();
        for i in 0..n {
            let (a, b) = (Term::Iri(format!("{FOLK}V{i}")), Term::Iri(format!("{FOLK}W{i}")));
            let mut spec = ValueSpec::new(a.clone(), ValueModule::Mft);
            spec.polarity = Polarity::Positive;
            spec.dyad_partner = Some(b.clone());
            model.register_value(spec).unwrap();
            let mut spec = ValueSpec::new(b.clone(), ValueModule::Mft);
            spec.polarity = Polarity::Negative;
            spec.dyad_partner = Some(a.clone());
            model.register_value(spec).unwrap();
            prop_assert_eq!(model.dyad_partner(&a), Some(&b));
            prop_assert_eq!(model.dyad_partner(&b), Some(&a));
        }
        prop_assert!(model.validate().is_ok());
    }
}

#[derive(Debug, Clone)]
struct Row {
    text: usize,
    annotator: usize,
    label: u8,
    confident: bool,
    graph: bool,
    detected: bool,
}

fn rows() -> impl Strategy<Value = Vec<Row>> {
    prop::collection::vec(
        (0..6usize, 0..4usize, 0..5u8, any::<bool>(), prop::bool::weighted(0.9), any::<bool>()).prop_map(
            |(text, annotator, label, confident, graph, detected)| Row { text, annotator, label, confident, graph, detected },
        ),
        1..40,
    )
}

fn labels(code: u8) -> BTreeSet<Label> {
    let v = |l: &str| Label::Value(Term::Iri(format!("http://ex.org/mft#{l}")));
    match code {
        0 => [Label::NonMoral].into(),
        1 => [Label::ThinMorality].into(),
        2 => [v("Care")].into(),
        3 => [v("Fairness")].into(),
        _ => [v("Care"), v("Fairness")].into(),
    }
}

fn corpus(rows: &[Row]) -> Vec<AnnotatedSentence> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| AnnotatedSentence {
            sentence_id: format!("r{i}"),
            text: format!("text {}", r.text),
            annotator: format!("A{}", r.annotator),
            labels: labels(r.label),
            confidence: if r.confident { Confidence::Confident } else { Confidence::NotConfident },
        })
        .collect()
}

proptest! {
    #[test]
    fn agreement_matches_naive_count(rows in rows()) {
        let corpus = corpus(&rows);
        let refs: Vec<&AnnotatedSentence> = corpus.iter().collect();
        let stats = annotator_stats(&refs);
        let mut want: BTreeMap<String, (usize, usize, usize, usize, usize)> = BTreeMap::new();
        for r in &corpus {
            let group: Vec<&AnnotatedSentence> = corpus.iter().filter(|o| o.text == r.text).collect();
            let majority: Vec<&Label> = group
                .iter()
                .flat_map(|o| o.labels.iter())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .filter(|l| 2 * group.iter().filter(|o| o.labels.contains(l)).count() > group.len())
                .collect();
            let agree = r.labels.iter().any(|l| majority.contains(&l));
            let agree_tm = agree || (r.labels.iter().any(|l| *l != Label::NonMoral) && majority.iter().any(|l| **l != Label::NonMoral));
            let nc = r.confidence != Confidence::NotConfident;
            let e = want.entry(r.annotator.clone()).or_default();
            e.0 += 1;
            e.1 += usize::from(nc);
            e.2 += usize::from(agree);
            e.3 += usize::from(agree_tm);
            e.4 += usize::from(agree_tm && nc);
        }
        let got: BTreeMap<String, (usize, usize, usize, usize, usize)> =
            stats.into_iter().map(|(a, s)| (a, (s.tot, s.tot_nc, s.agree, s.agree_tm, s.agree_tm_nc))).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn coverage_counts_are_consistent(rows in rows()) {
        let corpus = corpus(&rows);
        let dets: Vec<DetectionSummary> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| DetectionSummary {
                id: format!("r{i}"),
                values: if r.graph && r.detected { vec!["http://ex.org/v".into()] } else { Vec::new() },
                no_graph: !r.graph,
            })
            .collect();
        let rep = coverage_stats(&corpus, Some(&dets)).unwrap();
        prop_assert_eq!(rep.total_sentences, rows.len());
        prop_assert_eq!(rep.graphs_produced, rows.iter().filter(|r| r.graph).count());
        prop_assert_eq!(rep.mft_annotated + rep.thin_morality + rep.non_moral, rep.graphs_produced);
        prop_assert!(rep.overlap_with_tm_or_nm <= rep.detected_any && rep.detected_any <= rep.graphs_produced);
        prop_assert!(rep.mft_annotated_unique <= rep.mft_annotated);
        for a in rep.per_annotator.values() {
            prop_assert!(a.agree <= a.agree_tm && a.agree_tm <= a.tot);
            prop_assert!(a.agree_tm_nc <= a.agree_tm && a.agree_tm_nc <= a.tot_nc && a.tot_nc <= a.tot);
        }
        prop_assert_eq!(rep.per_annotator.values().map(|a| a.tot).sum::<usize>(), rep.graphs_produced);
    }

    #[test]
    fn missing_detection_is_rejected(rows in rows()) {
        let corpus = corpus(&rows);
        let dets: Vec<DetectionSummary> = (1..rows.len())
            .map(|i| DetectionSummary { id: format!("r{i}"), values: Vec::new(), no_graph: false })
            .collect();
        prop_assert!(coverage_stats(&corpus, Some(&dets)).is_err());
    }
}
