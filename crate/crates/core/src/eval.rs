//! Corpus statistics: per-annotator agreement and detection coverage.
//!
//! Each corpus row is one annotation token: one annotator's labels for one
//! text. Rows sharing the same text form a group; the majority label set
//! of a group holds the labels carried by more than half of its rows.
//!
//! Agreement of a row:
//! - `agree`: the row's labels intersect the majority set;
//! - `agree_tm`: `agree`, or both the row and the majority are moral
//!   (thin morality or any value) and the majority is non-empty;
//! - `agree_tm_nc`: `agree_tm` on rows not marked Not Confident.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::detector::DetectionSummary;
use crate::store::{PrefixTable, Term};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("corpus header must declare columns id,text,annotator,labels,confidence")]
    Header,
    #[error("line {line}: unknown label `{label}`")]
    UnknownLabel { line: usize, label: String },
    #[error("label map line {line}: {message}")]
    LabelMap { line: usize, message: String },
    #[error("duplicate row id `{0}`")]
    DuplicateId(String),
    #[error("detections for unknown sentence ids: {}", .0.join(", "))]
    UnknownIds(Vec<String>),
    #[error("no detection for sentence ids: {}", .0.join(", "))]
    MissingIds(Vec<String>),
    #[error("{0}")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Value(Term),
    ThinMorality,
    NonMoral,
}

impl Label {
    pub fn is_moral(&self) -> bool {
        !matches!(self, Label::NonMoral)
    }
}

/// Maps corpus label strings (case-insensitive) to labels.
#[derive(Clone, Debug, Default)]
pub struct LabelMap(BTreeMap<String, Label>);

impl LabelMap {
    /// Tab-separated `label<TAB>target`; target is `ThinMorality`,
    /// `NonMoral`, or a value IRI/CURIE.
    pub fn parse(src: &str, prefixes: &PrefixTable) -> Result<Self, EvalError> {
        let mut map = BTreeMap::new();
        for (i, line) in src.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| EvalError::LabelMap { line: i + 1, message };
            let (label, target) = line.split_once('\t').ok_or_else(|| err("expected two tab-separated columns".into()))?;
            let target = match target.trim() {
                "ThinMorality" => Label::ThinMorality,
                "NonMoral" => Label::NonMoral,
                t => Label::Value(prefixes.expand(t).map_err(|e| err(e.to_string()))?),
            };
            map.insert(label.trim().to_lowercase(), target);
        }
        Ok(LabelMap(map))
    }

    pub fn get(&self, label: &str) -> Option<&Label> {
        self.0.get(&label.trim().to_lowercase())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Confidence {
    Confident,
    SomewhatConfident,
    NotConfident,
}

impl FromStr for Confidence {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase();
        match norm.as_str() {
            "confident" => Ok(Confidence::Confident),
            "somewhatconfident" => Ok(Confidence::SomewhatConfident),
            "notconfident" => Ok(Confidence::NotConfident),
            _ => Err(format!("unknown confidence `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedSentence {
    pub sentence_id: String,
    pub text: String,
    pub annotator: String,
    /// Either one thin-morality label, one non-moral label, or values.
    pub labels: BTreeSet<Label>,
    pub confidence: Confidence,
}

impl AnnotatedSentence {
    pub fn has_value(&self) -> bool {
        self.labels.iter().any(|l| matches!(l, Label::Value(_)))
    }

    pub fn is_moral(&self) -> bool {
        self.labels.iter().any(Label::is_moral)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusFormat {
    Csv,
    Jsonl,
}

impl FromStr for CorpusFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(CorpusFormat::Csv),
            "jsonl" | "json" => Ok(CorpusFormat::Jsonl),
            _ => Err(format!("unknown corpus format `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkippedRow {
    pub line: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadedCorpus {
    pub rows: Vec<AnnotatedSentence>,
    pub skipped: Vec<SkippedRow>,
}

#[derive(Deserialize)]
struct RawRow {
    id: String,
    text: String,
    annotator: String,
    labels: String,
    confidence: String,
}

enum RowError {
    Skip(String),
    Fatal(EvalError),
}

fn convert(raw: RawRow, line: usize, labels: &LabelMap) -> Result<AnnotatedSentence, RowError> {
    if raw.id.trim().is_empty() || raw.text.trim().is_empty() || raw.annotator.trim().is_empty() {
        return Err(RowError::Skip("empty id, text or annotator".into()));
    }
    let confidence = Confidence::from_str(&raw.confidence).map_err(RowError::Skip)?;
    let mut set = BTreeSet::new();
    for part in raw.labels.split([',', '|']).map(str::trim).filter(|p| !p.is_empty()) {
        let l = labels.get(part).ok_or_else(|| RowError::Fatal(EvalError::UnknownLabel { line, label: part.to_string() }))?;
        set.insert(l.clone());
    }
    if set.is_empty() {
        return Err(RowError::Skip("row has no labels".into()));
    }
    let special = set.iter().filter(|l| !matches!(l, Label::Value(_))).count();
    if special > 0 && set.len() > 1 {
        return Err(RowError::Skip("thin morality and non-moral exclude every other label".into()));
    }
    Ok(AnnotatedSentence {
        sentence_id: raw.id.trim().to_string(),
        text: raw.text,
        annotator: raw.annotator.trim().to_string(),
        labels: set,
        confidence,
    })
}

/// Parses a corpus. Malformed rows are skipped and reported; unknown
/// labels and duplicate ids are errors.
pub fn load_corpus(src: &str, format: CorpusFormat, labels: &LabelMap) -> Result<LoadedCorpus, EvalError> {
    let mut out = LoadedCorpus::default();
    let push = |res: Result<AnnotatedSentence, RowError>, line: usize, out: &mut LoadedCorpus| match res {
        Ok(row) => {
            out.rows.push(row);
            Ok(())
        }
        Err(RowError::Skip(reason)) => {
            out.skipped.push(SkippedRow { line, reason });
            Ok(())
        }
        Err(RowError::Fatal(e)) => Err(e),
    };
    match format {
        CorpusFormat::Csv => {
            let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(src.as_bytes());
            let headers = reader.headers().map_err(|e| EvalError::Parse(e.to_string()))?.clone();
            for col in ["id", "text", "annotator", "labels", "confidence"] {
                if !headers.iter().any(|h| h.trim() == col) {
                    return Err(EvalError::Header);
                }
            }
            for record in reader.records() {
                let (line, res) = match record {
                    Ok(rec) => {
                        let line = rec.position().map_or(0, |p| p.line() as usize);
                        let res = rec
                            .deserialize::<RawRow>(Some(&headers))
                            .map_err(|e| RowError::Skip(e.to_string()))
                            .and_then(|raw| convert(raw, line, labels));
                        (line, res)
                    }
                    Err(e) => (e.position().map_or(0, |p| p.line() as usize), Err(RowError::Skip(e.to_string()))),
                };
                push(res, line, &mut out)?;
            }
        }
        CorpusFormat::Jsonl => {
            for (i, line) in src.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let res = serde_json::from_str::<RawRow>(line)
                    .map_err(|e| RowError::Skip(e.to_string()))
                    .and_then(|raw| convert(raw, i + 1, labels));
                push(res, i + 1, &mut out)?;
            }
        }
    }
    let mut seen = BTreeSet::new();
    for r in &out.rows {
        if !seen.insert(r.sentence_id.as_str()) {
            return Err(EvalError::DuplicateId(r.sentence_id.clone()));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnotatorRow {
    pub tot: usize,
    pub tot_nc: usize,
    pub agree: usize,
    pub agree_tm: usize,
    pub agree_tm_nc: usize,
}

/// Labels carried by more than half of the rows of each text.
fn majorities<'r>(rows: &[&'r AnnotatedSentence]) -> HashMap<&'r str, BTreeSet<&'r Label>> {
    let mut groups: HashMap<&str, Vec<&AnnotatedSentence>> = HashMap::new();
    for r in rows {
        groups.entry(r.text.as_str()).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(text, members)| {
            let mut counts: BTreeMap<&Label, usize> = BTreeMap::new();
            for m in &members {
                for l in &m.labels {
                    *counts.entry(l).or_insert(0) += 1;
                }
            }
            let majority = counts.into_iter().filter(|&(_, c)| 2 * c > members.len()).map(|(l, _)| l).collect();
            (text, majority)
        })
        .collect()
}

pub fn annotator_stats(rows: &[&AnnotatedSentence]) -> BTreeMap<String, AnnotatorRow> {
    let majority = majorities(rows);
    let mut out: BTreeMap<String, AnnotatorRow> = BTreeMap::new();
    for r in rows {
        let maj = &majority[r.text.as_str()];
        let agree = r.labels.iter().any(|l| maj.contains(l));
        let agree_tm = agree || (r.is_moral() && !maj.is_empty() && maj.iter().any(|l| l.is_moral()));
        let not_confident = r.confidence == Confidence::NotConfident;
        let row = out.entry(r.annotator.clone()).or_default();
        row.tot += 1;
        row.tot_nc += usize::from(!not_confident);
        row.agree += usize::from(agree);
        row.agree_tm += usize::from(agree_tm);
        row.agree_tm_nc += usize::from(agree_tm && !not_confident);
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CoverageReport {
    pub total_sentences: usize,
    pub graphs_produced: usize,
    /// Rows (annotation tokens) with at least one value label.
    pub mft_annotated: usize,
    /// Distinct texts with at least one value label on any row.
    pub mft_annotated_unique: usize,
    pub thin_morality: usize,
    pub non_moral: usize,
    pub detected_any: usize,
    pub overlap_with_tm_or_nm: usize,
    pub per_annotator: BTreeMap<String, AnnotatorRow>,
    pub per_value_histogram: BTreeMap<String, usize>,
}

/// Computes corpus statistics. With detections, label counts and agreement
/// cover rows that produced a graph; without, they cover every row.
pub fn coverage_stats(corpus: &[AnnotatedSentence], detections: Option<&[DetectionSummary]>) -> Result<CoverageReport, EvalError> {
    let by_id: HashMap<&str, &DetectionSummary> = match detections {
        None => HashMap::new(),
        Some(dets) => {
            let ids: BTreeSet<&str> = corpus.iter().map(|r| r.sentence_id.as_str()).collect();
            let unknown: Vec<String> = dets.iter().filter(|d| !ids.contains(d.id.as_str())).map(|d| d.id.clone()).collect();
            if !unknown.is_empty() {
                return Err(EvalError::UnknownIds(unknown));
            }
            let map: HashMap<&str, &DetectionSummary> = dets.iter().map(|d| (d.id.as_str(), d)).collect();
            let missing: Vec<String> =
                corpus.iter().filter(|r| !map.contains_key(r.sentence_id.as_str())).map(|r| r.sentence_id.clone()).collect();
            if !missing.is_empty() {
                return Err(EvalError::MissingIds(missing));
            }
            map
        }
    };
    let produced: Vec<&AnnotatedSentence> = corpus
        .iter()
        .filter(|r| detections.is_none() || !by_id[r.sentence_id.as_str()].no_graph)
        .collect();

    let mut report = CoverageReport {
        total_sentences: corpus.len(),
        graphs_produced: produced.len(),
        per_annotator: annotator_stats(&produced),
        ..CoverageReport::default()
    };
    let mut value_texts = BTreeSet::new();
    for r in &produced {
        let tm_or_nm = !r.has_value();
        if r.has_value() {
            report.mft_annotated += 1;
            value_texts.insert(r.text.as_str());
        } else if r.labels.contains(&Label::ThinMorality) {
            report.thin_morality += 1;
        } else {
            report.non_moral += 1;
        }
        if let Some(d) = by_id.get(r.sentence_id.as_str()) {
            if !d.values.is_empty() {
                report.detected_any += 1;
                report.overlap_with_tm_or_nm += usize::from(tm_or_nm);
                for v in &d.values {
                    *report.per_value_histogram.entry(v.clone()).or_insert(0) += 1;
                }
            }
        }
    }
    report.mft_annotated_unique = value_texts.len();
    Ok(report)
}

impl CoverageReport {
    pub fn table1(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{:<10} {:>5} {:>7} {:>6} {:>9} {:>12}", "Annotator", "Tot", "Tot-NC", "Agree", "Agree+TM", "Agree+TM-NC").unwrap();
        for (a, r) in &self.per_annotator {
            writeln!(s, "{:<10} {:>5} {:>7} {:>6} {:>9} {:>12}", a, r.tot, r.tot_nc, r.agree, r.agree_tm, r.agree_tm_nc).unwrap();
        }
        s
    }

    pub fn table2(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{:>6} {:>8} {:>12} {:>5} {:>5} {:>10} {:>8}", "Total", "Graphs", "Annotated", "TM", "NM", "Detected", "Overlap").unwrap();
        writeln!(
            s,
            "{:>6} {:>8} {:>12} {:>5} {:>5} {:>10} {:>8}",
            self.total_sentences,
            self.graphs_produced,
            format!("{}/{}", self.mft_annotated, self.total_sentences),
            self.thin_morality,
            self.non_moral,
            format!("{}/{}", self.detected_any, self.graphs_produced),
            self.overlap_with_tm_or_nm
        )
        .unwrap();
        s
    }

    /// `value<TAB>count` lines sorted by value.
    pub fn histogram_tsv(&self) -> String {
        self.per_value_histogram.iter().map(|(v, c)| format!("{v}\t{c}\n")).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable") + "\n"
    }
}

/// Reads a JSONL detection summary file.
pub fn read_detections(src: &str) -> Result<Vec<DetectionSummary>, EvalError> {
    src.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| EvalError::Parse(format!("detections line {}: {e}", i + 1))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels() -> LabelMap {
        let mut p = PrefixTable::new();
        p.insert("mft", "https://w3id.org/spice/SON/HaidtValues#").unwrap();
        LabelMap::parse("Care\tmft:Care\nHarm\tmft:Harm\nThin Morality\tThinMorality\nNon-Moral\tNonMoral\n", &p).unwrap()
    }

    const HEADER: &str = "id,text,annotator,labels,confidence\n";

    #[test]
    fn empty_corpus() {
        let c = load_corpus(HEADER, CorpusFormat::Csv, &labels()).unwrap();
        assert!(c.rows.is_empty());
        assert_eq!(coverage_stats(&c.rows, Some(&[])).unwrap().total_sentences, 0);
    }

    #[test]
    fn thin_morality_row() {
        let src = format!("{HEADER}r1,Some text,A00,Thin Morality,Confident\n");
        let c = load_corpus(&src, CorpusFormat::Csv, &labels()).unwrap();
        assert_eq!(c.rows[0].labels, [Label::ThinMorality].into_iter().collect());
        assert_eq!(c.rows[0].confidence, Confidence::Confident);
    }

    #[test]
    fn malformed_rows_are_skipped_and_unknown_labels_fail() {
        let src = format!("{HEADER}r1,t,A00,Care,Confident\nr2,t,A01,Care,Sure\nr3,t,A02,Care|Non-Moral,Confident\n");
        let c = load_corpus(&src, CorpusFormat::Csv, &labels()).unwrap();
        assert_eq!(c.rows.len(), 1);
        assert_eq!(c.skipped.iter().map(|s| s.line).collect::<Vec<_>>(), vec![3, 4]);
        let bad = format!("{HEADER}r1,t,A00,Courage,Confident\n");
        assert_eq!(load_corpus(&bad, CorpusFormat::Csv, &labels()), Err(EvalError::UnknownLabel { line: 2, label: "Courage".into() }));
        assert_eq!(load_corpus("a,b\n", CorpusFormat::Csv, &labels()), Err(EvalError::Header));
    }

    #[test]
    fn jsonl_rows() {
        let src = r#"{"id":"r1","text":"t","annotator":"A00","labels":"Care, Harm","confidence":"Not Confident"}"#;
        let c = load_corpus(src, CorpusFormat::Jsonl, &labels()).unwrap();
        assert_eq!(c.rows[0].labels.len(), 2);
        assert_eq!(c.rows[0].confidence, Confidence::NotConfident);
    }

    fn row(id: &str, text: &str, ann: &str, l: Label, conf: Confidence) -> AnnotatedSentence {
        AnnotatedSentence { sentence_id: id.into(), text: text.into(), annotator: ann.into(), labels: [l].into_iter().collect(), confidence: conf }
    }

    #[test]
    fn agreement_definitions() {
        let care = Label::Value(Term::named("https://w3id.org/spice/SON/HaidtValues#Care"));
        let harm = Label::Value(Term::named("https://w3id.org/spice/SON/HaidtValues#Harm"));
        let c = Confidence::Confident;
        let rows = [row("1", "x", "A", care.clone(), c),
            row("2", "x", "B", care.clone(), c),
            row("3", "x", "C", harm, Confidence::NotConfident),
            row("4", "y", "A", Label::NonMoral, c),
            row("5", "y", "B", Label::ThinMorality, c),
            row("6", "y", "C", Label::NonMoral, c)];
        let refs: Vec<&AnnotatedSentence> = rows.iter().collect();
        let s = annotator_stats(&refs);
        assert_eq!(s["A"], AnnotatorRow { tot: 2, tot_nc: 2, agree: 2, agree_tm: 2, agree_tm_nc: 2 });
        assert_eq!(s["B"], AnnotatorRow { tot: 2, tot_nc: 2, agree: 1, agree_tm: 1, agree_tm_nc: 1 });
        assert_eq!(s["C"], AnnotatorRow { tot: 2, tot_nc: 1, agree: 1, agree_tm: 2, agree_tm_nc: 1 });
    }

    #[test]
    fn single_annotator_agrees_with_itself() {
        let rows = [row("1", "x", "A", Label::NonMoral, Confidence::Confident), row("2", "y", "A", Label::ThinMorality, Confidence::Confident)];
        let refs: Vec<&AnnotatedSentence> = rows.iter().collect();
        let s = annotator_stats(&refs)["A"];
        assert_eq!((s.tot, s.agree, s.agree_tm), (2, 2, 2));
    }

    #[test]
    fn coverage_and_id_checks() {
        let rows = vec![
            row("1", "x", "A", Label::NonMoral, Confidence::Confident),
            row("2", "y", "A", Label::ThinMorality, Confidence::Confident),
            row("3", "z", "A", Label::NonMoral, Confidence::Confident),
        ];
        let det = |id: &str, v: &[&str], ng: bool| DetectionSummary { id: id.into(), values: v.iter().map(|s| s.to_string()).collect(), no_graph: ng };
        let dets = vec![det("1", &["v:A", "v:B"], false), det("2", &[], false), det("3", &[], true)];
        let r = coverage_stats(&rows, Some(&dets)).unwrap();
        assert_eq!((r.total_sentences, r.graphs_produced, r.detected_any, r.overlap_with_tm_or_nm), (3, 2, 1, 1));
        assert_eq!((r.thin_morality, r.non_moral), (1, 1));
        assert_eq!(r.per_value_histogram.values().sum::<usize>(), 2);
        assert_eq!(coverage_stats(&rows, Some(&dets[..2])), Err(EvalError::MissingIds(vec!["3".into()])));
        let mut extra = dets.clone();
        extra.push(det("9", &[], false));
        assert_eq!(coverage_stats(&rows, Some(&extra)), Err(EvalError::UnknownIds(vec!["9".into()])));
        let stats_only = coverage_stats(&rows, None).unwrap();
        assert_eq!((stats_only.graphs_produced, stats_only.detected_any), (3, 0));
    }
}
