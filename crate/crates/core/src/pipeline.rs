//! Manifest-driven pipeline over a workspace directory.
//!
//! `build_kb` loads the graph files and the value table, then writes every
//! graph as sorted N-Triples plus an index under `<workspace>/kb`. Later
//! steps reload the knowledge base from there: `expand` writes trigger
//! graphs and reports, `detect` writes sentence graphs and a summary,
//! `evaluate` writes the corpus tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::detector::{DetectionSummary, Detector, SenseMode};
use crate::eval::{self, CorpusFormat, CoverageReport, LabelMap};
use crate::lexicon::Lexicon;
use crate::quokka::{trigger_graph_name, ExpansionPlan, ExpansionReport, Quokka, QuokkaError};
use crate::store::{write_ntriples, Format, PrefixTable, Store, Term};
use crate::valuenet::{self, DedupeOverrides, ValueModel, ValueModule};
use crate::vocab;

/// Environment variable overriding the manifest's workspace directory.
pub const WORKSPACE_ENV: &str = "FOLKGRAPH_WORKSPACE";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PipelineError {
    /// Missing files, malformed configuration, unparsable input.
    #[error("{0}")]
    Input(String),
    /// Inputs that parse but contradict each other.
    #[error("{0}")]
    Consistency(String),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Input(_) => 2,
            PipelineError::Consistency(_) => 3,
        }
    }
}

fn input<E: fmt::Display>(context: impl fmt::Display) -> impl FnOnce(E) -> PipelineError {
    move |e| PipelineError::Input(format!("{context}: {e}"))
}

fn read(path: &Path) -> Result<String, PipelineError> {
    std::fs::read_to_string(path).map_err(input(path.display()))
}

fn write(path: &Path, contents: &str) -> Result<(), PipelineError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(input(dir.display()))?;
    }
    std::fs::write(path, contents).map_err(input(path.display()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphRole {
    Lexical,
    Values,
    Triggers,
}

impl GraphRole {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphRole::Lexical => "lexical",
            GraphRole::Values => "values",
            GraphRole::Triggers => "triggers",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    pub path: PathBuf,
    pub format: Format,
    pub name: Term,
    pub role: GraphRole,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    path: PathBuf,
    #[serde(default)]
    format: Option<String>,
    name: String,
    role: GraphRole,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    prefixes: PathBuf,
    #[serde(default)]
    graphs: Vec<RawGraph>,
    #[serde(default)]
    value_table: Option<PathBuf>,
    #[serde(default)]
    candidates: Option<PathBuf>,
    #[serde(default)]
    dedupe_overrides: Option<PathBuf>,
    #[serde(default)]
    plans: Vec<PathBuf>,
    #[serde(default)]
    detector_mode: Option<String>,
    #[serde(default)]
    corpus: Option<PathBuf>,
    #[serde(default)]
    corpus_format: Option<String>,
    #[serde(default)]
    label_map: Option<PathBuf>,
    #[serde(default)]
    workspace: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct Manifest {
    pub prefixes: PrefixTable,
    pub graphs: Vec<GraphSpec>,
    pub value_table: Option<PathBuf>,
    pub candidates: Option<PathBuf>,
    pub dedupe_overrides: Option<PathBuf>,
    pub plans: Vec<PathBuf>,
    pub detector_mode: SenseMode,
    pub corpus: Option<(PathBuf, CorpusFormat)>,
    pub label_map: Option<PathBuf>,
    pub workspace: PathBuf,
}

impl Manifest {
    /// Reads a manifest; relative paths resolve against its directory.
    /// `workspace_override` (usually from the environment) replaces the
    /// configured workspace.
    pub fn load(path: &Path, workspace_override: Option<PathBuf>) -> Result<Manifest, PipelineError> {
        let src = read(path)?;
        let raw: RawManifest = toml::from_str(&src).map_err(input(path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &Path| -> Result<PathBuf, PipelineError> {
            let full = base.join(p);
            if !full.exists() {
                return Err(PipelineError::Input(format!("{}: file not found", full.display())));
            }
            Ok(full)
        };
        let prefixes = PrefixTable::from_file(&resolve(&raw.prefixes)?).map_err(input(raw.prefixes.display()))?;
        let mut graphs = Vec::new();
        let mut names = BTreeSet::new();
        for g in raw.graphs {
            let path = resolve(&g.path)?;
            let format = match &g.format {
                Some(f) => Format::from_str(f).map_err(input(g.path.display()))?,
                None => Format::from_extension(&path)
                    .ok_or_else(|| PipelineError::Input(format!("{}: cannot infer format", path.display())))?,
            };
            let name = if g.name.contains(':') {
                prefixes.expand(&g.name).map_err(input(&g.name))?
            } else {
                vocab::graph_name(&g.name)
            };
            if !names.insert(name.clone()) {
                return Err(PipelineError::Input(format!("duplicate graph name `{}`", g.name)));
            }
            graphs.push(GraphSpec { path, format, name, role: g.role });
        }
        let opt = |p: &Option<PathBuf>| p.as_deref().map(resolve).transpose();
        let detector_mode = match &raw.detector_mode {
            Some(m) => SenseMode::from_str(m).map_err(input("detector_mode"))?,
            None => SenseMode::default(),
        };
        let corpus = match &raw.corpus {
            Some(p) => {
                let full = resolve(p)?;
                let format = match &raw.corpus_format {
                    Some(f) => CorpusFormat::from_str(f).map_err(input("corpus_format"))?,
                    None => {
                        let ext = full.extension().and_then(|e| e.to_str()).unwrap_or("");
                        CorpusFormat::from_str(ext).map_err(input(full.display()))?
                    }
                };
                Some((full, format))
            }
            None => None,
        };
        let workspace = workspace_override.unwrap_or_else(|| base.join(raw.workspace.unwrap_or_else(|| "workspace".into())));
        Ok(Manifest {
            prefixes,
            graphs,
            value_table: opt(&raw.value_table)?,
            candidates: opt(&raw.candidates)?,
            dedupe_overrides: opt(&raw.dedupe_overrides)?,
            plans: raw.plans.iter().map(|p| resolve(p)).collect::<Result<_, _>>()?,
            detector_mode,
            corpus,
            label_map: opt(&raw.label_map)?,
            workspace,
        })
    }

    fn kb_dir(&self) -> PathBuf {
        self.workspace.join("kb")
    }

    fn triggers_dir(&self) -> PathBuf {
        self.workspace.join("triggers")
    }

    fn reports_dir(&self) -> PathBuf {
        self.workspace.join("reports")
    }

    fn eval_dir(&self) -> PathBuf {
        self.workspace.join("eval")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct IndexEntry {
    name: String,
    role: GraphRole,
    file: String,
    triples: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
struct KbIndex {
    graphs: Vec<IndexEntry>,
    values: BTreeMap<String, usize>,
}

fn graph_file_name(name: &Term) -> String {
    let local = name.value().strip_prefix(vocab::GRAPH).unwrap_or_else(|| name.local_name());
    let safe: String = local.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect();
    format!("{safe}.nt")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildSummary {
    /// `(graph IRI, role, triple count)` in load order.
    pub graphs: Vec<(String, GraphRole, usize)>,
    pub values: BTreeMap<ValueModule, usize>,
    /// `(candidates, merged values)` when a candidate list is configured.
    pub dedupe: Option<(usize, usize)>,
}

impl fmt::Display for BuildSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graphs: {}", self.graphs.len())?;
        for (name, role, n) in &self.graphs {
            writeln!(f, "  {name} ({}) {n} triples", role.as_str())?;
        }
        let values: Vec<String> = self.values.iter().map(|(m, n)| format!("{m}={n}")).collect();
        writeln!(f, "values: {}", values.join(" "))?;
        if let Some((c, v)) = self.dedupe {
            writeln!(f, "dedupe: {c} candidates -> {v} values")?;
        }
        Ok(())
    }
}

/// Loads the manifest graphs and value table and writes the workspace KB.
pub fn build_kb(m: &Manifest) -> Result<BuildSummary, PipelineError> {
    let mut store = Store::new();
    let mut index = KbIndex::default();
    for g in &m.graphs {
        let src = read(&g.path)?;
        let graph = store.load(&src, g.format, &g.name).map_err(input(g.path.display()))?;
        index.graphs.push(IndexEntry {
            name: g.name.value().to_string(),
            role: g.role,
            file: graph_file_name(&g.name),
            triples: graph.len(),
        });
    }
    let model = match &m.value_table {
        Some(p) => ValueModel::from_table(&read(p)?, &m.prefixes)
            .map_err(|e| PipelineError::Consistency(format!("{}: {e}", p.display())))?,
        None => ValueModel::new(),
    };
    for vg in model.graphs() {
        if store.has_graph(&vg.name) {
            return Err(PipelineError::Input(format!("graph name `{}` is reserved for values", vg.name.value())));
        }
        store.add_graph(vg).map_err(input("value graphs"))?;
        index.graphs.push(IndexEntry {
            name: vg.name.value().to_string(),
            role: GraphRole::Values,
            file: graph_file_name(&vg.name),
            triples: vg.len(),
        });
    }
    for module in ValueModule::ALL {
        index.values.insert(module.as_str().to_string(), model.count(module));
    }
    store.freeze();

    let dedupe = match &m.candidates {
        Some(path) => {
            let candidates = valuenet::parse_candidates(&read(path)?, &m.prefixes).map_err(input(path.display()))?;
            let overrides = match &m.dedupe_overrides {
                Some(p) => DedupeOverrides::parse(&read(p)?).map_err(input(p.display()))?,
                None => DedupeOverrides::default(),
            };
            let lexical = names_with_role(&index, GraphRole::Lexical);
            let lexicon = Lexicon::build(&store, &lexical).map_err(input("lexicon"))?;
            let folk_ns = m.prefixes.namespace("folk").ok_or_else(|| PipelineError::Input("prefix `folk` is not declared".into()))?;
            let outcome = valuenet::dedupe_candidates(&candidates, Some(&lexicon), &overrides, folk_ns)
                .map_err(|e| PipelineError::Consistency(e.to_string()))?;
            let mut report = String::new();
            for spec in &outcome.specs {
                report.push_str(&format!("{}\t{}\n", m.prefixes.display(&spec.id), spec.provenance.len()));
            }
            for rec in &outcome.report {
                report.push_str(&format!("# merged into {}: {}\n", rec.kept, rec.merged.join(", ")));
            }
            write(&m.reports_dir().join("dedupe.tsv"), &report)?;
            Some((candidates.len(), outcome.specs.len()))
        }
        None => None,
    };

    let kb = m.kb_dir();
    for e in &index.graphs {
        let name = Term::Iri(e.name.clone());
        let g = store.graph(&name).map_err(input(&e.name))?;
        write(&kb.join(&e.file), &write_ntriples(g.triples.iter()))?;
    }
    write(&kb.join("index.json"), &(serde_json::to_string_pretty(&index).expect("index is serializable") + "\n"))?;

    Ok(BuildSummary {
        graphs: index.graphs.iter().map(|e| (e.name.clone(), e.role, e.triples)).collect(),
        values: ValueModule::ALL.into_iter().map(|mm| (mm, model.count(mm))).collect(),
        dedupe,
    })
}

fn names_with_role(index: &KbIndex, role: GraphRole) -> Vec<Term> {
    index.graphs.iter().filter(|e| e.role == role).map(|e| Term::Iri(e.name.clone())).collect()
}

/// A frozen store rebuilt from the workspace.
pub struct WorkspaceKb {
    pub store: Store,
    pub lexical: Vec<Term>,
    pub triggers: Vec<Term>,
}

/// Reloads the workspace KB; with `with_expanded`, also every trigger
/// graph written by `expand`.
pub fn load_kb(m: &Manifest, with_expanded: bool) -> Result<WorkspaceKb, PipelineError> {
    let kb = m.kb_dir();
    let index_path = kb.join("index.json");
    if !index_path.exists() {
        return Err(PipelineError::Input(format!("{}: workspace not built; run build-kb first", index_path.display())));
    }
    let index: KbIndex = serde_json::from_str(&read(&index_path)?).map_err(input(index_path.display()))?;
    let mut store = Store::new();
    for e in &index.graphs {
        let path = kb.join(&e.file);
        store.load(&read(&path)?, Format::NTriples, &Term::Iri(e.name.clone())).map_err(input(path.display()))?;
    }
    let mut triggers = names_with_role(&index, GraphRole::Triggers);
    if with_expanded {
        let dir = m.triggers_dir();
        if dir.exists() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
                .map_err(input(dir.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "nt"))
                .collect();
            files.sort();
            for path in files {
                let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
                let name = vocab::graph_name(&format!("triggers/{stem}"));
                store.load(&read(&path)?, Format::NTriples, &name).map_err(input(path.display()))?;
                triggers.push(name);
            }
        }
    }
    store.freeze();
    Ok(WorkspaceKb { store, lexical: names_with_role(&index, GraphRole::Lexical), triggers })
}

pub enum ExpandTarget {
    All,
    Value(String),
}

#[derive(Clone, Debug)]
pub struct ExpandSummary {
    pub value: Term,
    pub edges: usize,
    pub graph_file: Option<PathBuf>,
    pub report: ExpansionReport,
}

/// Runs the selected expansion plans, writing `triggers/<Value>.nt` and
/// `reports/<Value>.json` per plan.
pub fn expand(m: &Manifest, target: &ExpandTarget) -> Result<Vec<ExpandSummary>, PipelineError> {
    let plans: Vec<ExpansionPlan> = m
        .plans
        .iter()
        .map(|p| ExpansionPlan::from_file(p, &m.prefixes).map_err(|e| PipelineError::Input(e.to_string())))
        .collect::<Result<_, _>>()?;
    let selected: Vec<&ExpansionPlan> = match target {
        ExpandTarget::All => plans.iter().collect(),
        ExpandTarget::Value(v) => {
            let id = m.prefixes.expand(v).map_err(input(v))?;
            let found: Vec<&ExpansionPlan> = plans.iter().filter(|p| p.value == id).collect();
            if found.is_empty() {
                return Err(PipelineError::Input(format!("no expansion plan for value `{v}`")));
            }
            found
        }
    };
    if selected.is_empty() {
        return Ok(Vec::new());
    }
    let kb = load_kb(m, false)?;
    let lexicon = Lexicon::build(&kb.store, &kb.lexical).map_err(input("lexicon"))?;
    let quokka = Quokka::new(&lexicon, &m.prefixes);
    let mut out = Vec::new();
    for plan in selected {
        let outcome = quokka.run_plan(plan).map_err(|e| match e {
            QuokkaError::StaleSelection { .. } => PipelineError::Consistency(e.to_string()),
            other => PipelineError::Input(other.to_string()),
        })?;
        let local = plan.value.local_name().to_string();
        let graph_file = match &outcome.graph {
            Some(g) => {
                debug_assert_eq!(g.name, trigger_graph_name(&plan.value));
                let path = m.triggers_dir().join(format!("{local}.nt"));
                write(&path, &g.to_ntriples())?;
                Some(path)
            }
            None => None,
        };
        write(&m.reports_dir().join(format!("{local}.json")), &outcome.report.to_json())?;
        out.push(ExpandSummary { value: plan.value.clone(), edges: outcome.edges.len(), graph_file, report: outcome.report });
    }
    Ok(out)
}

#[derive(Deserialize)]
struct SentenceLine {
    id: serde_json::Value,
    text: String,
}

/// Reads `{id, text}` JSONL, or plain text with one sentence per line
/// (ids `s1`, `s2`, ... by line number; blank lines skipped).
pub fn read_sentences(path: &Path) -> Result<Vec<(String, String)>, PipelineError> {
    let src = read(path)?;
    let jsonl = path.extension().is_some_and(|e| e == "jsonl" || e == "json");
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        if jsonl {
            let s: SentenceLine =
                serde_json::from_str(line).map_err(|e| PipelineError::Input(format!("{} line {}: {e}", path.display(), i + 1)))?;
            let id = match s.id {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            };
            out.push((id, s.text));
        } else {
            out.push((format!("s{}", i + 1), line.to_string()));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectSummary {
    pub sentences: usize,
    pub graphs: usize,
    pub no_graph: usize,
    pub detected: usize,
    pub summary_file: PathBuf,
}

/// Detects values for every input sentence. Writes `<out>/<id>.nt` for
/// each sentence with a graph and `<out>/summary.jsonl` in input order.
pub fn detect(m: &Manifest, input_path: &Path, out_dir: &Path, jobs: usize) -> Result<DetectSummary, PipelineError> {
    let sentences = read_sentences(input_path)?;
    let kb = load_kb(m, true)?;
    let lexicon = Lexicon::build(&kb.store, &kb.lexical).map_err(input("lexicon"))?;
    let detector = Detector::new(&lexicon, kb.triggers.clone(), m.detector_mode).map_err(input("detector"))?;
    let results = detector.detect_corpus(&sentences, jobs).map_err(input(input_path.display()))?;
    std::fs::create_dir_all(out_dir).map_err(input(out_dir.display()))?;
    let mut summary = String::new();
    let mut seen = BTreeSet::new();
    let (mut graphs, mut detected) = (0, 0);
    for r in &results {
        if !seen.insert(r.graph.sentence_id.as_str()) {
            return Err(PipelineError::Input(format!("duplicate sentence id `{}`", r.graph.sentence_id)));
        }
        summary.push_str(&r.summary_json());
        summary.push('\n');
        if !r.no_graph() {
            graphs += 1;
            write(&out_dir.join(format!("{}.nt", r.graph.sentence_id)), &r.to_ntriples())?;
        }
        detected += usize::from(!r.values.is_empty());
    }
    let summary_file = out_dir.join("summary.jsonl");
    write(&summary_file, &summary)?;
    Ok(DetectSummary { sentences: results.len(), graphs, no_graph: results.len() - graphs, detected, summary_file })
}

#[derive(Clone, Debug)]
pub struct EvalOutcome {
    pub report: CoverageReport,
    pub skipped_rows: usize,
    pub with_detections: bool,
}

/// Computes corpus statistics and writes them under `<workspace>/eval`.
pub fn evaluate(m: &Manifest, detections: Option<&Path>) -> Result<EvalOutcome, PipelineError> {
    let (corpus_path, format) = m.corpus.as_ref().ok_or_else(|| PipelineError::Input("manifest has no corpus".into()))?;
    let label_path = m.label_map.as_ref().ok_or_else(|| PipelineError::Input("manifest has no label_map".into()))?;
    let labels = LabelMap::parse(&read(label_path)?, &m.prefixes).map_err(input(label_path.display()))?;
    let corpus = eval::load_corpus(&read(corpus_path)?, *format, &labels).map_err(input(corpus_path.display()))?;
    let dets: Option<Vec<DetectionSummary>> = match detections {
        Some(p) => Some(eval::read_detections(&read(p)?).map_err(input(p.display()))?),
        None => None,
    };
    let report = eval::coverage_stats(&corpus.rows, dets.as_deref()).map_err(|e| match e {
        eval::EvalError::MissingIds(_) | eval::EvalError::UnknownIds(_) => PipelineError::Consistency(e.to_string()),
        other => PipelineError::Input(other.to_string()),
    })?;
    let dir = m.eval_dir();
    write(&dir.join("report.json"), &report.to_json())?;
    write(&dir.join("table1.txt"), &report.table1())?;
    write(&dir.join("table2.txt"), &report.table2())?;
    write(&dir.join("histogram.tsv"), &report.histogram_tsv())?;
    Ok(EvalOutcome { report, skipped_rows: corpus.skipped.len(), with_detections: dets.is_some() })
}
