//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exits non-zero when the set of failing criteria differs from
//! `KNOWN_RED`. A criterion listed there fails for a reason recorded
//! outside the code; it is still evaluated in full on every run.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use folkgraph::lexicon::Lexicon;
use folkgraph::pipeline::{self, Manifest};
use folkgraph::quokka::{ExpansionPlan, Provenance, QueryKind, Quokka, Seed};
use folkgraph::store::{Format, PrefixTable, Store, Term, Triple};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

const KNOWN_RED: [u32; 1] = [3];

type Outcome = Result<String, String>;
type Link<'a> = (&'a str, &'a str, &'a str);
type Criterion = (u32, &'static str, fn() -> Outcome);

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn manifest_path() -> PathBuf {
    fixtures().join("manifest.toml")
}

fn cli(workspace: &Path, args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_folkgraph"))
        .arg("--manifest")
        .arg(manifest_path())
        .arg("--workspace")
        .arg(workspace)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("`{}` failed: {}", args.join(" "), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:.0?}"))
}

fn set(prefixes: &PrefixTable, curies: &[&str]) -> BTreeSet<Term> {
    curies.iter().map(|c| prefixes.expand(c).unwrap()).collect()
}

// 1 ---------------------------------------------------------------------------

fn risk_expansion() -> Outcome {
    let start = Instant::now();
    let ws = tempfile::tempdir().map_err(|e| e.to_string())?;
    let m = Manifest::load(&manifest_path(), Some(ws.path().to_path_buf())).map_err(|e| e.to_string())?;
    let mut store = Store::new();
    let mut lexical = Vec::new();
    for g in &m.graphs {
        let src = std::fs::read_to_string(&g.path).map_err(|e| e.to_string())?;
        store.load(&src, g.format, &g.name).map_err(|e| e.to_string())?;
        if g.role == pipeline::GraphRole::Lexical {
            lexical.push(g.name.clone());
        }
    }
    store.freeze();
    let lex = Lexicon::build(&store, &lexical).map_err(|e| e.to_string())?;
    let p = &m.prefixes;
    let q = Quokka::new(&lex, p);

    let frames: BTreeSet<Term> = q.frame_activation_query(&Seed::new("risk", None)).into_iter().collect();
    let want = set(p, &["fs:RiskySituation", "fs:RunRisk", "fs:BeingAtRisk", "fs:Daring", "fs:Endangering"]);
    check(frames == want, || format!("frames {frames:?}"))?;

    let accepted: Vec<Term> = frames.into_iter().collect();
    let (synsets, vcs) = q.lexical_unit_expansion(&accepted);
    let lus: BTreeSet<Term> = synsets.into_iter().chain(vcs).collect();
    let need = set(
        p,
        &["wn:risk-verb-2", "wn:gamble-verb-1", "wn:venture-verb-3", "vn:Risk_94000000", "vn:Gamble_70000000", "vn:Venture_94100000"],
    );
    let missing: Vec<&Term> = need.difference(&lus).collect();
    check(missing.is_empty(), || format!("lexical units missing {missing:?}"))?;

    let factual: BTreeSet<Term> = q.factual_expansion_query(&p.expand("cn:risk").unwrap()).into_iter().collect();
    let want = set(p, &["dbpedia:Risk", "wiki:Q104493", "wikt:risky", "wikt:riskful", "wikt:risktaker"]);
    check(factual == want, || format!("factual {factual:?}"))?;

    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("5 frames, {} lexical units, {} factual entities in {elapsed:.2?}", lus.len(), factual.len()))
}

// 2 ---------------------------------------------------------------------------

fn chain_of(path: &Value) -> Vec<(String, String, String)> {
    path["chain"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| {
            let s = |i: usize| l[i].as_str().unwrap().to_string();
            (s(0), s(1), s(2))
        })
        .collect()
}

fn macron_detection() -> Outcome {
    let ws = tempfile::tempdir().map_err(|e| e.to_string())?;
    cli(ws.path(), &["build-kb"])?;
    cli(ws.path(), &["expand", "--all"])?;
    let out = ws.path().join("macron");
    let start = Instant::now();
    cli(ws.path(), &["detect", "--input", fixtures().join("corpus/macron.txt").to_str().unwrap(), "--out", out.to_str().unwrap()])?;
    let elapsed = start.elapsed();

    let m = Manifest::load(&manifest_path(), None).map_err(|e| e.to_string())?;
    let p = &m.prefixes;
    let iri = |c: &str| p.expand(c).unwrap().value().to_string();
    let summary = std::fs::read_to_string(out.join("summary.jsonl")).map_err(|e| e.to_string())?;
    let line: Value = serde_json::from_str(summary.lines().next().ok_or("empty summary")?).map_err(|e| e.to_string())?;

    let values: BTreeSet<String> = line["values"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
    let want: BTreeSet<String> =
        ["mft:Loyalty", "mft:Betrayal", "folk:Rigor", "folk:Learning", "folk:Risk"].iter().map(|c| iri(c)).collect();
    check(values == want, || format!("values {values:?}"))?;

    let (ev, sk, tr) = (iri("fschema:evokes"), iri("fschema:senseKey"), iri("vcore:triggers"));
    let expected: Vec<(&str, Vec<Link>)> = vec![
        ("mft:Loyalty", vec![("wn:dishonest-adjective-1", "ev", "fs:Candidness"), ("fs:Candidness", "tr", "mft:Loyalty")]),
        ("mft:Loyalty", vec![("wn:national-adjective-1", "tr", "mft:Loyalty")]),
        (
            "mft:Betrayal",
            vec![
                ("wn:expose-verb-1", "sk", "vb:Expose_48012000"),
                ("vb:Expose_48012000", "ev", "fs:RevealSecret"),
                ("fs:RevealSecret", "tr", "mft:Betrayal"),
            ],
        ),
        ("folk:Learning", vec![("wn:course-noun-1", "ev", "fs:Education_teaching"), ("fs:Education_teaching", "tr", "folk:Learning")]),
        ("folk:Rigor", vec![("wn:act_of_dishonesty-noun-1", "ev", "fs:Law"), ("fs:Law", "tr", "folk:Rigor")]),
        ("folk:Risk", vec![("wn:dangerous-adjective-1", "tr", "folk:Risk")]),
        ("folk:Risk", vec![("wn:dangerous-adjective-1", "ev", "fs:RiskySituation"), ("fs:RiskySituation", "tr", "folk:Risk")]),
    ];
    let paths = line["paths"].as_array().unwrap();
    for (value, links) in &expected {
        let want: Vec<(String, String, String)> = links
            .iter()
            .map(|(s, pr, o)| {
                let pr = match *pr {
                    "ev" => ev.clone(),
                    "sk" => sk.clone(),
                    _ => tr.clone(),
                };
                (iri(s), pr, iri(o))
            })
            .collect();
        let found = paths.iter().any(|path| path["value"].as_str() == Some(&iri(value)) && chain_of(path) == want);
        check(found, || format!("no activation path for {value} via {}", links.iter().map(|l| l.0).collect::<Vec<_>>().join(" -> ")))?;
    }

    let stance = line["stances"]
        .as_array()
        .unwrap()
        .iter()
        .any(|s| s["verbClass"].as_str() == Some(&iri("vn:Steal_10050000")) && s["role"] == "Agent" && s["polarity"] == "negative" && s["target"] == "act of dishonesty");
    check(stance, || "missing negative Agent stance of the steal verb class on the dishonesty node".into())?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("5 values, {} paths, stance bound; detect in {elapsed:.2?}", paths.len()))
}

// 3 ---------------------------------------------------------------------------

fn table_reproduction() -> Outcome {
    let ws = tempfile::tempdir().map_err(|e| e.to_string())?;
    cli(ws.path(), &["build-kb"])?;
    cli(ws.path(), &["expand", "--all"])?;
    cli(ws.path(), &["detect", "--input", fixtures().join("corpus/sentences.jsonl").to_str().unwrap(), "--jobs", "4"])?;
    let summary = ws.path().join("detections/summary.jsonl");
    let m = Manifest::load(&manifest_path(), Some(ws.path().to_path_buf())).map_err(|e| e.to_string())?;
    let r = pipeline::evaluate(&m, Some(&summary)).map_err(|e| e.to_string())?.report;

    let table1: BTreeMap<&str, [usize; 5]> = [
        ("A00", [157, 63, 52, 62, 34]),
        ("A01", [137, 136, 53, 60, 60]),
        ("A02", [185, 180, 65, 75, 75]),
        ("A03", [302, 296, 122, 130, 130]),
        ("A04", [163, 163, 6, 63, 63]),
    ]
    .into();
    const COLS: [&str; 5] = ["Tot", "Tot-NC", "Agree", "Agree+TM", "Agree+TM-NC"];
    let mut wrong = Vec::new();
    let mut cells = 0;
    for (a, want) in &table1 {
        let got = r.per_annotator.get(*a).map(|g| [g.tot, g.tot_nc, g.agree, g.agree_tm, g.agree_tm_nc]).unwrap_or_default();
        for k in 0..5 {
            cells += 1;
            if got[k] != want[k] {
                wrong.push(format!("{a} {} {} (want {})", COLS[k], got[k], want[k]));
            }
        }
    }
    let table2 = [
        ("total", r.total_sentences, 1000),
        ("graphs", r.graphs_produced, 944),
        ("annotated", r.mft_annotated, 228),
        ("TM", r.thin_morality, 153),
        ("NM", r.non_moral, 563),
        ("detected", r.detected_any, 855),
        ("overlap", r.overlap_with_tm_or_nm, 635),
    ];
    for (name, got, want) in table2 {
        cells += 1;
        if got != want {
            wrong.push(format!("{name} {got} (want {want})"));
        }
    }
    check(wrong.is_empty(), || format!("{}/{cells} cells differ: {}", wrong.len(), wrong.join("; ")))?;
    Ok(format!("{cells} cells exact"))
}

// 4 ---------------------------------------------------------------------------

fn bgp_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xB6F);
    let (mut queries, mut mismatches, mut rows) = (0, 0, 0);
    for _ in 0..50 {
        let (store, graphs, pool) = support::random_store(&mut rng, 200);
        for _ in 0..10 {
            let bgp = support::random_bgp(&mut rng, &pool, &graphs);
            let got: BTreeSet<_> = store.match_bgp(&bgp).map_err(|e| e.to_string())?.into_iter().collect();
            let want = support::brute_bgp(&graphs, &bgp);
            rows += want.len();
            queries += 1;
            mismatches += usize::from(got != want);
        }
    }
    let elapsed = start.elapsed();
    check(mismatches == 0, || format!("{mismatches}/{queries} queries differ from the oracle"))?;
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!("{queries} queries, {rows} bindings, 0 mismatches in {elapsed:.2?}"))
}

// 5 ---------------------------------------------------------------------------

fn trigger_closure() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xC105);
    let prefixes = PrefixTable::new();
    let (mut checked, mut violations) = (0, Vec::new());
    for _ in 0..100 {
        let kb = support::random_kb(&mut rng);
        let lex = Lexicon::build(&kb.store, std::slice::from_ref(&kb.lexical)).map_err(|e| e.to_string())?;
        let q = Quokka::new(&lex, &prefixes);
        let seeds: Vec<Seed> = (0..rng.gen_range(1..3))
            .map(|_| Seed::new(support::LEMMAS[rng.gen_range(0..support::LEMMAS.len())], None))
            .collect();
        let mut plan = ExpansionPlan::accept_all(support::ex("Val"), seeds);
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        if rng.gen_bool(0.5) {
            plan.auto_accept.remove(&QueryKind::Frame);
            let candidates: BTreeSet<Term> = plan.seeds.iter().flat_map(|s| q.frame_activation_query(s)).collect();
            let chosen: Vec<String> = candidates.iter().filter(|_| rng.gen_bool(0.5)).map(|f| format!("<{}>", f.value())).collect();
            let path = dir.path().join("frame.txt");
            std::fs::write(&path, chosen.join("\n")).map_err(|e| e.to_string())?;
            plan.selection_files.insert(QueryKind::Frame, path);
        }
        let out = q.run_plan(&plan).map_err(|e| e.to_string())?;
        checked += out.edges.iter().filter(|e| e.provenance == Provenance::DerivedClosure).count();
        violations.extend(support::closure_violations(&kb.store, &kb.lexical, &out.edges, out.graph.as_ref()));
    }
    check(violations.is_empty(), || format!("{} violations, first: {}", violations.len(), violations[0]))?;
    check(checked > 0, || "no derived-closure edges were generated".into())?;
    Ok(format!("100 KBs, {checked} derived-closure edges justified"))
}

// 6 ---------------------------------------------------------------------------

fn round_trip() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x7217);
    let mut prefixes = PrefixTable::new();
    prefixes.insert("ex", "http://ex.org/").map_err(|e| e.to_string())?;
    let g = support::ex("g");
    let mut failures = Vec::new();
    let mut triples = 0;
    for i in 0..100 {
        let blanks = rng.gen_range(0..4);
        let pool = support::random_pool(&mut rng, blanks);
        let n = rng.gen_range(0..80);
        let graph: BTreeSet<Triple> = support::random_triples(&mut rng, &pool, n);
        triples += graph.len();
        let format = if i % 2 == 0 { Format::NTriples } else { Format::Turtle };
        let mut store = Store::new();
        store.create_graph(&g).map_err(|e| e.to_string())?;
        for t in &graph {
            store.insert(&g, t).map_err(|e| e.to_string())?;
        }
        let doc = store.serialize(&g, format, &prefixes).map_err(|e| e.to_string())?;
        let mut back = Store::new();
        let reloaded = back.load(&doc, format, &g).map(|ng| ng.triples);
        match reloaded {
            Ok(ts) if support::isomorphic(&graph, &ts) => {}
            Ok(_) => failures.push(format!("graph {i} ({format:?}) not isomorphic")),
            Err(e) => failures.push(format!("graph {i} ({format:?}): {e}")),
        }
    }
    check(failures.is_empty(), || failures.join("; "))?;
    Ok(format!("100 graphs, {triples} triples, N-Triples and Turtle"))
}

// 7 ---------------------------------------------------------------------------

fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(&dir).into_iter().flatten().flatten() {
            let p = e.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn determinism() -> Outcome {
    let mut runs = Vec::new();
    for _ in 0..2 {
        let ws = tempfile::tempdir().map_err(|e| e.to_string())?;
        cli(ws.path(), &["build-kb"])?;
        cli(ws.path(), &["expand", "--all"])?;
        cli(ws.path(), &["detect", "--input", fixtures().join("corpus/sentences.jsonl").to_str().unwrap(), "--jobs", "4"])?;
        runs.push((tree(&ws.path().join("triggers")), tree(&ws.path().join("detections")), tree(&ws.path().join("reports"))));
    }
    let (a, b) = (&runs[0], &runs[1]);
    let files = a.0.len() + a.1.len() + a.2.len();
    check(files > 0, || "no output files".into())?;
    for (name, x, y) in [("triggers", &a.0, &b.0), ("detections", &a.1, &b.1), ("reports", &a.2, &b.2)] {
        let differing: Vec<String> = x
            .keys()
            .chain(y.keys())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .filter(|k| x.get(*k) != y.get(*k))
            .map(|k| k.display().to_string())
            .collect();
        check(differing.is_empty(), || format!("{name} differ: {}", differing.join(", ")))?;
    }
    Ok(format!("{files} files byte-identical across two runs"))
}

// 8 ---------------------------------------------------------------------------

fn throughput() -> Outcome {
    let ws = tempfile::tempdir().map_err(|e| e.to_string())?;
    cli(ws.path(), &["build-kb"])?;
    cli(ws.path(), &["expand", "--all"])?;
    let start = Instant::now();
    let out = cli(ws.path(), &["detect", "--input", fixtures().join("corpus/sentences.jsonl").to_str().unwrap(), "--jobs", "4"])?;
    let elapsed = start.elapsed();
    check(out.contains("sentences: 1000"), || format!("unexpected output: {out}"))?;
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("1000 sentences in {elapsed:.2?}"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "risk expansion", risk_expansion),
        (2, "macron sentence detection", macron_detection),
        (3, "table reproduction", table_reproduction),
        (4, "query-engine oracle equivalence", bgp_oracle),
        (5, "trigger-closure property", trigger_closure),
        (6, "round-trip property", round_trip),
        (7, "determinism", determinism),
        (8, "throughput", throughput),
    ];
    let mut red = BTreeSet::new();
    for (n, name, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {n} {name}: {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                let tag = if KNOWN_RED.contains(&n) { " (known red)" } else { "" };
                println!("FAIL {n} {name}{tag}: {detail} [{elapsed:.2?}]");
                red.insert(n);
            }
        }
    }
    let expected: BTreeSet<u32> = KNOWN_RED.into_iter().collect();
    if red != expected {
        println!("unexpected outcome: failing {red:?}, known red {expected:?}");
        std::process::exit(1);
    }
    println!("acceptance: {} of 8 pass; known red {expected:?}", 8 - red.len());
}
