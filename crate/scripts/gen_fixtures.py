#!/usr/bin/env python3
"""Regenerates everything under fixtures/.

The lexical KB, value tables, plans and the annotated corpus are all
synthetic. The corpus group structure is solved as a small integer
program so that its per-annotator and per-class marginals land on the
target tables; the resulting expectations are written to
fixtures/expected/ by an implementation independent of the Rust code.

Usage: python3 scripts/gen_fixtures.py [--out fixtures]
"""

import argparse
import re
import csv
import io
import itertools
import json
import random
from collections import Counter, OrderedDict
from pathlib import Path

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

PREFIXES = OrderedDict(
    [
        ("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"),
        ("rdfs", "http://www.w3.org/2000/01/rdf-schema#"),
        ("owl", "http://www.w3.org/2002/07/owl#"),
        ("xsd", "http://www.w3.org/2001/XMLSchema#"),
        ("skos", "http://www.w3.org/2004/02/skos/core#"),
        ("prov", "http://www.w3.org/ns/prov#"),
        ("fschema", "https://w3id.org/framester/schema/"),
        ("lex", "https://w3id.org/framester/lexicon/"),
        ("fs", "https://w3id.org/framester/framenet/abox/frame/"),
        ("fe", "https://w3id.org/framester/framenet/abox/fe/"),
        ("wn", "https://w3id.org/framester/wn/wn30/instances/synset-"),
        ("vn", "https://w3id.org/framester/vn/vn31/data/"),
        ("vb", "https://w3id.org/framester/vb/data/"),
        ("pb", "https://w3id.org/framester/pb/data/"),
        ("bn", "http://babelnet.org/rdf/"),
        ("cn", "https://w3id.org/framester/conceptnet5/data/en/"),
        ("dbpedia", "http://dbpedia.org/resource/"),
        ("wiki", "http://www.wikidata.org/entity/"),
        ("wikt", "https://en.wiktionary.org/wiki/"),
        ("yago", "http://yago-knowledge.org/resource/"),
        ("vcore", "https://w3id.org/spice/SON/ValueCore#"),
        ("folk", "https://w3id.org/spice/SON/FolkValues#"),
        ("mft", "https://w3id.org/spice/SON/HaidtValues#"),
        ("bhv", "https://w3id.org/spice/SON/SchwartzValues#"),
        ("taf", "https://w3id.org/spice/SON/ThatsAllFolks#"),
        ("src", "https://lists.example.org/values/"),
    ]
)

MACRON = (
    "And however flawed or dishonest Macron may be.....it is a far greater act of dishonesty "
    "to steal his data and expose it, hoping to change the course of a national election for "
    "the purpose of an outside group. That is far far more dangerous than voting for one flawed man."
)


def expand(curie):
    p, local = curie.split(":", 1)
    return PREFIXES[p] + local


# ---------------------------------------------------------------------------
# lexical KB

FRAMES = OrderedDict()  # name -> [(fe, type)]
SYNSETS = OrderedDict()  # curie -> {"evokes": [], "keys": [], "same_as": []}
VERB_CLASSES = OrderedDict()  # curie -> {"evokes": [], "negative": [], "positive": []}
ENTRIES = []  # dicts: lemma, pos, forms, senses, concepts


def frame(name, elements=()):
    FRAMES.setdefault(name, list(elements))


def synset(curie, evokes=(), keys=(), same_as=()):
    s = SYNSETS.setdefault(curie, {"evokes": [], "keys": [], "same_as": []})
    for f in evokes:
        frame(f)
        s["evokes"].append(f)
    s["keys"].extend(keys)
    s["same_as"].extend(same_as)


def verb_class(curie, evokes=(), negative=(), positive=()):
    v = VERB_CLASSES.setdefault(curie, {"evokes": [], "negative": [], "positive": []})
    for f in evokes:
        frame(f)
        v["evokes"].append(f)
    v["negative"].extend(negative)
    v["positive"].extend(positive)


def entry(lemma, pos, senses, forms=(), concepts=()):
    for s in senses:
        SYNSETS.setdefault(s, {"evokes": [], "keys": [], "same_as": []})
    ENTRIES.append({"lemma": lemma, "pos": pos, "senses": list(senses), "forms": list(forms), "concepts": list(concepts)})


def build_lexicon():
    # risk neighbourhood
    frame("RiskySituation", [("Situation", "Core"), ("Asset", "Core"), ("Degree", "Peripheral"), ("Time", "ExtraThematic")])
    frame("RunRisk", [("Protagonist", "Core"), ("Bad_outcome", "Core"), ("Action", "Core"), ("Manner", "Peripheral")])
    frame("BeingAtRisk", [("Asset", "Core"), ("Harmful_event", "Peripheral")])
    frame("Daring", [("Agent", "Core"), ("Action", "Core"), ("Place", "ExtraThematic")])
    frame("Endangering", [("Cause", "Core"), ("Valued_entity", "Core")])
    synset("wn:risk-noun-1", ["RiskySituation"], same_as=["yago:wordnet_risk_114541044"])
    synset("wn:risk-noun-2", ["BeingAtRisk"])
    synset("wn:risk-verb-1", ["Daring"])
    synset("wn:risk-verb-2", ["RunRisk"], keys=["vn:Risk_94000000"], same_as=["yago:wordnet_risk_200797697"])
    synset("wn:risk-verb-3", ["Endangering"])
    synset("wn:gamble-verb-1", ["RunRisk"], keys=["vn:Gamble_70000000"])
    synset("wn:venture-verb-1")
    synset("wn:venture-verb-2")
    synset("wn:venture-verb-3", ["Daring"], keys=["vn:Venture_94100000"], same_as=["dbpedia:Venture"])
    synset("wn:dangerous-adjective-1", ["RiskySituation"])
    synset("wn:endanger-verb-1", ["Endangering"])
    synset("wn:vulnerable-adjective-1", ["BeingAtRisk"])
    verb_class("vn:Risk_94000000", ["RunRisk"])
    verb_class("vn:Gamble_70000000", ["RunRisk"])
    verb_class("vn:Venture_94100000", ["Daring"])
    entry("risk", "noun", ["wn:risk-noun-1", "wn:risk-noun-2"], ["risks"], ["cn:risk"])
    entry("risk", "verb", ["wn:risk-verb-1", "wn:risk-verb-2", "wn:risk-verb-3"], ["risks", "risked", "risking"], ["cn:risk"])
    entry("gamble", "verb", ["wn:gamble-verb-1"], ["gambles", "gambled", "gambling"], ["cn:gamble"])
    entry("venture", "verb", ["wn:venture-verb-1", "wn:venture-verb-2", "wn:venture-verb-3"], ["ventures", "ventured"], ["cn:venture"])
    entry("dangerous", "adjective", ["wn:dangerous-adjective-1"])
    entry("endanger", "verb", ["wn:endanger-verb-1"], ["endangers", "endangered"])
    entry("vulnerable", "adjective", ["wn:vulnerable-adjective-1"])

    # rigor and learning seeds
    frame("Strictness")
    frame("Law", [("Law", "Core"), ("Jurisdiction", "Peripheral"), ("Forbidden", "Peripheral")])
    frame("Education_teaching", [("Student", "Core"), ("Teacher", "Core"), ("Subject", "Core")])
    frame("Becoming_aware")
    synset("wn:rigor-noun-1", ["Strictness"])
    synset("wn:rigor-noun-2", ["Law"])
    synset("wn:strict-adjective-1", ["Strictness"])
    synset("wn:law-noun-1", ["Law"])
    synset("wn:act_of_dishonesty-noun-1", ["Law"])
    synset("wn:learning-noun-1", ["Education_teaching"])
    synset("wn:learn-verb-1", ["Education_teaching"])
    synset("wn:learn-verb-2", ["Becoming_aware"])
    synset("wn:course-noun-1", ["Education_teaching"])
    synset("wn:course-noun-2", ["Path_shape"])
    entry("rigor", "noun", ["wn:rigor-noun-1", "wn:rigor-noun-2"], ["rigour"])
    entry("strict", "adjective", ["wn:strict-adjective-1"])
    entry("law", "noun", ["wn:law-noun-1"], ["laws"])
    entry("act of dishonesty", "multiword", ["wn:act_of_dishonesty-noun-1"])
    entry("learning", "noun", ["wn:learning-noun-1"])
    entry("learn", "verb", ["wn:learn-verb-1", "wn:learn-verb-2"], ["learns", "learned", "learnt"])
    entry("course", "noun", ["wn:course-noun-1", "wn:course-noun-2"], ["courses"])

    # remaining words of the example sentence
    frame("Candidness", [("Speaker", "Core"), ("Message", "Core")])
    frame("RevealSecret", [("Speaker", "Core"), ("Information", "Core")])
    frame("Theft", [("Perpetrator", "Core"), ("Goods", "Core"), ("Victim", "Core")])
    synset("wn:dishonest-adjective-1", ["Candidness"])
    synset("wn:national-adjective-1", ["Political_locales"])
    synset("wn:expose-verb-1", keys=["vb:Expose_48012000"])
    synset("wn:steal-verb-1", ["Theft"], keys=["vn:Steal_10050000"])
    verb_class("vb:Expose_48012000", ["RevealSecret"])
    verb_class("vn:Steal_10050000", ["Theft"], negative=["Agent"])
    entry("dishonest", "adjective", ["wn:dishonest-adjective-1"])
    entry("national", "adjective", ["wn:national-adjective-1"])
    entry("expose", "verb", ["wn:expose-verb-1"], ["exposes", "exposed", "exposing"])
    entry("steal", "verb", ["wn:steal-verb-1"], ["steals", "stole", "stolen", "stealing"])
    for lemma, pos, fr, forms in NEUTRAL_WORDS:
        s = f"wn:{lemma}-{pos}-1"
        synset(s, [fr] if fr else [])
        entry(lemma, pos, [s], forms)

    for w in TRIGGER_WORDS:
        if not any(e["lemma"] == w["lemma"] and e["pos"] == w["pos"] for e in ENTRIES):
            synset(w["synset"], [w["frame"]] if w["frame"] else [])
            entry(w["lemma"], w["pos"], [w["synset"]], w["forms"])

    # synonym entries consumed by candidate deduplication
    for first, second in SYNONYM_PAIRS + [KEEP_APART]:
        s = f"wn:{first.lower()}-noun-1"
        synset(s)
        for lemma in (first.lower(), second.lower()):
            if not any(e["lemma"] == lemma for e in ENTRIES):
                entry(lemma, "noun", [s])
            else:
                for e in ENTRIES:
                    if e["lemma"] == lemma and s not in e["senses"]:
                        e["senses"].append(s)


# lemma, pos, evoked frame (non-triggering), inflected forms
NEUTRAL_WORDS = [
    ("flawed", "adjective", "Being_flawed", []),
    ("data", "noun", "Information", []),
    ("hope", "verb", "Desiring", ["hopes", "hoped", "hoping"]),
    ("change", "verb", "Cause_change", ["changes", "changed", "changing"]),
    ("election", "noun", "Change_of_leadership", ["elections"]),
    ("purpose", "noun", "Purpose", ["purposes"]),
    ("group", "noun", "Aggregate", ["groups"]),
    ("vote", "verb", "Voting", ["votes", "voted", "voting"]),
    ("man", "noun", "People", ["men"]),
    ("car", "noun", "Vehicle", ["cars"]),
    ("house", "noun", "Buildings", ["houses"]),
    ("phone", "noun", "Gizmo", ["phones"]),
    ("street", "noun", "Roadways", ["streets"]),
    ("weather", "noun", "Weather", []),
    ("game", "noun", "Competition", ["games"]),
    ("city", "noun", "Political_locales", ["cities"]),
    ("dog", "noun", "Animals", ["dogs"]),
    ("book", "noun", "Text", ["books"]),
    ("video", "noun", None, ["videos"]),
    ("thread", "noun", None, ["threads"]),
    ("comment", "noun", "Statement", ["comments"]),
    ("people", "noun", "People", []),
    ("week", "noun", "Calendric_unit", ["weeks"]),
    ("guy", "noun", "People", ["guys"]),
    ("idea", "noun", "Awareness", ["ideas"]),
    ("news", "noun", None, []),
    ("article", "noun", "Text", ["articles"]),
    ("job", "noun", "Being_employed", ["jobs"]),
    ("music", "noun", None, []),
    ("movie", "noun", None, ["movies"]),
    ("food", "noun", "Food", []),
    ("coffee", "noun", "Food", []),
    ("team", "noun", "Aggregate", ["teams"]),
    ("country", "noun", "Political_locales", ["countries"]),
    ("government", "noun", "Leadership", ["governments"]),
    ("policy", "noun", None, ["policies"]),
    ("tax", "noun", "Taxation", ["taxes"]),
    ("price", "noun", "Commerce_scenario", ["prices"]),
    ("company", "noun", "Businesses", ["companies"]),
    ("president", "noun", "Leadership", ["presidents"]),
    ("campaign", "noun", None, ["campaigns"]),
    ("debate", "noun", "Discussion", ["debates"]),
    ("say", "verb", "Statement", ["says", "said", "saying"]),
    ("think", "verb", "Opinion", ["thinks", "thought", "thinking"]),
    ("watch", "verb", "Perception_active", ["watches", "watched", "watching"]),
    ("read", "verb", "Reading_activity", ["reads", "reading"]),
    ("buy", "verb", "Commerce_buy", ["buys", "bought", "buying"]),
    ("drive", "verb", "Operate_vehicle", ["drives", "drove", "driving"]),
    ("argue", "verb", "Quarreling", ["argues", "argued", "arguing"]),
    ("post", "verb", None, ["posts", "posted", "posting"]),
    ("new", "adjective", "Age", []),
    ("old", "adjective", "Age", []),
    ("recent", "adjective", "Temporal_collocation", []),
    ("local", "adjective", None, []),
    ("political", "adjective", None, []),
    ("whole", "adjective", None, []),
    ("weird", "adjective", None, []),
    ("boring", "adjective", None, []),
]

# words whose senses trigger a value in the curated trigger graphs
TRIGGER_WORDS = [
    # MFT
    {"lemma": "help", "pos": "verb", "forms": ["helps", "helped", "helping"], "synset": "wn:help-verb-1", "frame": "Assistance", "value": "mft:Care", "via": "frame"},
    {"lemma": "hurt", "pos": "verb", "forms": ["hurts", "hurting"], "synset": "wn:hurt-verb-1", "frame": "Cause_harm", "value": "mft:Harm", "via": "frame"},
    {"lemma": "fair", "pos": "adjective", "forms": [], "synset": "wn:fair-adjective-1", "frame": "Fairness_evaluation", "value": "mft:Fairness", "via": "frame"},
    {"lemma": "cheat", "pos": "verb", "forms": ["cheats", "cheated", "cheating"], "synset": "wn:cheat-verb-1", "frame": "Prevarication", "value": "mft:Cheating", "via": "frame"},
    {"lemma": "loyal", "pos": "adjective", "forms": [], "synset": "wn:loyal-adjective-1", "frame": None, "value": "mft:Loyalty", "via": "synset"},
    {"lemma": "traitor", "pos": "noun", "forms": ["traitors"], "synset": "wn:traitor-noun-1", "frame": None, "value": "mft:Betrayal", "via": "synset"},
    {"lemma": "obey", "pos": "verb", "forms": ["obeys", "obeyed", "obeying"], "synset": "wn:obey-verb-1", "frame": "Compliance", "value": "mft:Authority", "via": "frame"},
    {"lemma": "rebel", "pos": "verb", "forms": ["rebels", "rebelled", "rebelling"], "synset": "wn:rebel-verb-1", "frame": "Rebellion", "value": "mft:Subversion", "via": "frame"},
    {"lemma": "pure", "pos": "adjective", "forms": [], "synset": "wn:pure-adjective-1", "frame": None, "value": "mft:Purity", "via": "synset"},
    {"lemma": "disgusting", "pos": "adjective", "forms": [], "synset": "wn:disgusting-adjective-1", "frame": None, "value": "mft:Degradation", "via": "synset"},
    {"lemma": "freedom", "pos": "noun", "forms": [], "synset": "wn:freedom-noun-1", "frame": "Freedom", "value": "mft:Liberty", "via": "frame"},
    {"lemma": "oppress", "pos": "verb", "forms": ["oppresses", "oppressed"], "synset": "wn:oppress-verb-1", "frame": None, "value": "mft:Oppression", "via": "synset"},
    # FOLK, curated
    {"lemma": "family", "pos": "noun", "forms": ["families"], "synset": "wn:family-noun-1", "frame": "Kinship", "value": "folk:Family", "via": "frame"},
    {"lemma": "friend", "pos": "noun", "forms": ["friends"], "synset": "wn:friend-noun-1", "frame": "Personal_relationship", "value": "folk:Friendship", "via": "frame"},
    {"lemma": "money", "pos": "noun", "forms": [], "synset": "wn:money-noun-1", "frame": "Money", "value": "folk:Wealth", "via": "frame"},
    {"lemma": "win", "pos": "verb", "forms": ["wins", "won"], "synset": "wn:win-verb-1", "frame": "Win_prize", "value": "folk:Winning", "via": "frame"},
    {"lemma": "smart", "pos": "adjective", "forms": [], "synset": "wn:smart-adjective-1", "frame": "Mental_property", "value": "folk:Intelligence", "via": "frame"},
    {"lemma": "joke", "pos": "noun", "forms": ["jokes"], "synset": "wn:joke-noun-1", "frame": "Humor", "value": "folk:Humor", "via": "frame"},
    {"lemma": "healthy", "pos": "adjective", "forms": [], "synset": "wn:healthy-adjective-1", "frame": None, "value": "folk:Health", "via": "synset"},
    {"lemma": "faith", "pos": "noun", "forms": [], "synset": "wn:faith-noun-1", "frame": "Religious_belief", "value": "folk:Faith", "via": "frame"},
    {"lemma": "peace", "pos": "noun", "forms": [], "synset": "wn:peace-noun-1", "frame": None, "value": "folk:Peace", "via": "synset"},
    {"lemma": "respect", "pos": "verb", "forms": ["respects", "respected"], "synset": "wn:respect-verb-1", "frame": "Judgment", "value": "folk:Respect", "via": "frame"},
    {"lemma": "beautiful", "pos": "adjective", "forms": [], "synset": "wn:beautiful-adjective-1", "frame": "Aesthetics", "value": "folk:Beauty", "via": "frame"},
    {"lemma": "brave", "pos": "adjective", "forms": [], "synset": "wn:brave-adjective-1", "frame": None, "value": "folk:Courage", "via": "synset"},
    {"lemma": "honest", "pos": "adjective", "forms": [], "synset": "wn:honest-adjective-1", "frame": None, "value": "folk:Honesty", "via": "synset"},
    {"lemma": "work", "pos": "verb", "forms": ["works", "worked", "working"], "synset": "wn:work-verb-1", "frame": "Work", "value": "folk:HardWork", "via": "frame"},
    {"lemma": "wise", "pos": "adjective", "forms": [], "synset": "wn:wise-adjective-1", "frame": None, "value": "folk:Wisdom", "via": "synset"},
    {"lemma": "clever", "pos": "adjective", "forms": [], "synset": "wn:clever-adjective-1", "frame": None, "value": "folk:Cleverness", "via": "synset"},
    {"lemma": "brilliant", "pos": "adjective", "forms": [], "synset": "wn:brilliant-adjective-1", "frame": None, "value": "folk:Brilliance", "via": "synset"},
    # reached through the expansion plans
    {"lemma": "gamble", "pos": "verb", "forms": ["gambles", "gambled", "gambling"], "synset": "wn:gamble-verb-1", "frame": "RunRisk", "value": "folk:Risk", "via": "plan"},
    {"lemma": "dangerous", "pos": "adjective", "forms": [], "synset": "wn:dangerous-adjective-1", "frame": "RiskySituation", "value": "folk:Risk", "via": "plan"},
    {"lemma": "law", "pos": "noun", "forms": ["laws"], "synset": "wn:law-noun-1", "frame": "Law", "value": "folk:Rigor", "via": "plan"},
    {"lemma": "strict", "pos": "adjective", "forms": [], "synset": "wn:strict-adjective-1", "frame": "Strictness", "value": "folk:Rigor", "via": "plan"},
    {"lemma": "learn", "pos": "verb", "forms": ["learns", "learned", "learnt"], "synset": "wn:learn-verb-1", "frame": "Education_teaching", "value": "folk:Learning", "via": "plan"},
]

# curated trigger edges beyond the word list; the example sentence relies on these
MFT_EXTRA = [("fs:Candidness", "mft:Loyalty"), ("wn:national-adjective-1", "mft:Loyalty"), ("fs:RevealSecret", "mft:Betrayal")]
FOLK_EXTRA = [("wn:winning-noun-1", "folk:Winning")]

SYNONYM_PAIRS = [
    ("Winning", "Victory"),
    ("Courage", "Bravery"),
    ("Honesty", "Truthfulness"),
    ("Wealth", "Prosperity"),
    ("Calmness", "Serenity"),
    ("Generosity", "Liberality"),
    ("Freedom", "Liberty"),
    ("Tranquility", "Peacefulness"),
    ("Diligence", "Industriousness"),
    ("Perseverance", "Persistence"),
    ("Modesty", "Humbleness"),
    ("Gratitude", "Thankfulness"),
    ("Playfulness", "Fun"),
    ("Strength", "Toughness"),
    ("Kindness", "Kindliness"),
    ("Wisdom", "Sagacity"),
    ("Happiness", "Gladness"),
    ("Fidelity", "Faithfulness"),
]
KEEP_APART = ("Cleverness", "Brilliance")
MERGE_OVERRIDE = ("Self-respect", "Dignity")


def concept_kb():
    rel = [
        ("cn:risk", "IsA", "cn:venture"),
        ("cn:risky", "DerivedFrom", "cn:risk"),
        ("cn:risk", "Causes", "cn:danger"),
        ("cn:gamble", "HasSubevent", "cn:risk"),
        ("cn:risk", "RelatedTo", "cn:chance"),
        ("cn:venture", "UsedFor", "cn:profit"),
    ]
    links = [
        ("cn:risk", "dbpedia:Risk"),
        ("cn:risk", "wiki:Q104493"),
        ("cn:risk", "wikt:risky"),
        ("cn:risk", "wikt:riskful"),
        ("cn:risk", "wikt:risktaker"),
        ("cn:venture", "dbpedia:Venture_capital"),
        ("cn:danger", "dbpedia:Danger"),
    ]
    return rel, links


CLOSE_MATCHES = [("pb:risk.01", "fs:RunRisk"), ("bn:s00067302n", "fs:RiskySituation"), ("pb:gamble.01", "fs:RunRisk")]


# ---------------------------------------------------------------------------
# turtle emission


def ttl_header(used, body=""):
    used = set(used) | {p for p in PREFIXES if re.search(rf"(?<![\\w/#]){re.escape(p)}:", body)}
    return "".join(f"@prefix {p}: <{PREFIXES[p]}> .\n" for p in PREFIXES if p in used) + "\n"


def lit(s):
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def entry_iri(e):
    return "lex:" + e["lemma"].replace(" ", "_") + "_" + e["pos"]


def write_lexicon(out):
    lines = []
    for e in ENTRIES:
        eid = entry_iri(e)
        parts = [f"{eid} a lex:LexicalEntry", f"lex:lemma {lit(e['lemma'])}", f"lex:pos lex:{e['pos']}"]
        for f in e["forms"]:
            parts.append(f"lex:form {lit(f)}")
        for i, _ in enumerate(e["senses"], 1):
            parts.append(f"lex:hasSense {eid}_s{i}")
        for c in e["concepts"]:
            parts.append(f"lex:concept {c}")
        lines.append(" ;\n    ".join(parts) + " .")
        for i, s in enumerate(e["senses"], 1):
            lines.append(f"{eid}_s{i} lex:synset {s} ; lex:rank {i} .")
    body = "\n".join(lines) + "\n"
    (out / "kb/lexicon.ttl").write_text(ttl_header({"lex", "wn"}, body) + body)


def write_frames(out):
    lines = []
    for name, fes in FRAMES.items():
        parts = [f"fs:{name} a fschema:Frame", f"rdfs:label {lit(name)}"]
        parts += [f"fschema:hasFrameElement fe:{fe}.{name}" for fe, _ in fes]
        lines.append(" ;\n    ".join(parts) + " .")
        for fe, t in fes:
            lines.append(f"fe:{fe}.{name} fschema:frameElementType fschema:{t} ; fschema:frameElementName {lit(fe)} .")
    for s, d in SYNSETS.items():
        for f in d["evokes"]:
            lines.append(f"{s} fschema:evokes fs:{f} .")
        for k in d["keys"]:
            lines.append(f"{s} fschema:senseKey {k} .")
    for v, d in VERB_CLASSES.items():
        for f in d["evokes"]:
            lines.append(f"{v} fschema:evokes fs:{f} .")
        for r in d["negative"]:
            lines.append(f"{v} fschema:negativeAffectOnRole {lit(r)} .")
        for r in d["positive"]:
            lines.append(f"{v} fschema:positiveAffectOnRole {lit(r)} .")
    for a, b in CLOSE_MATCHES:
        lines.append(f"{a} skos:closeMatch {b} .")
    body = "\n".join(lines) + "\n"
    (out / "kb/frames.ttl").write_text(ttl_header({"rdfs", "fschema", "fs", "fe", "wn", "vn", "vb", "pb", "bn", "skos"}, body) + body)


def write_alignments(out):
    rel, links = concept_kb()
    lines = [f"{a} cn:{r} {b} ." for a, r, b in rel]
    lines += [f"{a} fschema:externalUrl {b} ." for a, b in links]
    for s, d in SYNSETS.items():
        for y in d["same_as"]:
            lines.append(f"{s} owl:sameAs {y} .")
    # one alignment stated in the reverse direction
    lines.append("yago:wordnet_gamble_201080366 owl:sameAs wn:gamble-verb-1 .")
    body = "\n".join(lines) + "\n"
    (out / "kb/alignments.ttl").write_text(ttl_header({"cn", "fschema", "owl", "wn", "yago", "dbpedia", "wiki", "wikt"}, body) + body)


def trigger_pairs(module):
    pairs = []
    for w in TRIGGER_WORDS:
        if not w["value"].startswith(module + ":") or w["via"] == "plan":
            continue
        pairs.append((f"fs:{w['frame']}" if w["via"] == "frame" else w["synset"], w["value"]))
    pairs += MFT_EXTRA if module == "mft" else FOLK_EXTRA
    return pairs


def write_triggers(out):
    for module, fname in (("mft", "kb/mft_triggers.ttl"), ("folk", "kb/folk_triggers.ttl")):
        lines = [f"{e} vcore:triggers {v} ." for e, v in trigger_pairs(module)]
        (out / fname).write_text(ttl_header({"vcore", "fs", "wn", module}, "\n".join(lines)) + "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# values

MFT_DYADS = [("Care", "Harm"), ("Fairness", "Cheating"), ("Loyalty", "Betrayal"), ("Authority", "Subversion"), ("Purity", "Degradation"), ("Liberty", "Oppression")]
BHV_HIGHER = ["OpennessToChange", "SelfEnhancement", "Conservation", "SelfTranscendence"]
BHV_RING = [
    ("SelfDirectionThought", "OpennessToChange", "Self-direction thought"),
    ("SelfDirectionAction", "OpennessToChange", "Self-direction action"),
    ("Stimulation", "OpennessToChange", "Stimulation"),
    ("Hedonism", "OpennessToChange", "Hedonism"),
    ("Achievement", "SelfEnhancement", "Achievement"),
    ("PowerDominance", "SelfEnhancement", "Power dominance"),
    ("PowerResources", "SelfEnhancement", "Power resources"),
    ("Face", "SelfEnhancement", "Face"),
    ("SecurityPersonal", "Conservation", "Security personal"),
    ("SecuritySocietal", "Conservation", "Security societal"),
    ("Tradition", "Conservation", "Tradition"),
    ("ConformityRules", "Conservation", "Conformity rules"),
    ("ConformityInterpersonal", "Conservation", "Conformity interpersonal"),
    ("Humility", "Conservation", "Humility"),
    ("BenevolenceDependability", "SelfTranscendence", "Benevolence dependability"),
    ("BenevolenceCaring", "SelfTranscendence", "Benevolence caring"),
    ("UniversalismConcern", "SelfTranscendence", "Universalism concern"),
    ("UniversalismNature", "SelfTranscendence", "Universalism nature"),
    ("UniversalismTolerance", "SelfTranscendence", "Universalism tolerance"),
]

FOLK_LABELS = """
Risk Rigor Learning Intelligence Brilliance Cleverness Wisdom Winning Family Friendship Wealth
Hard_work Humor Health Faith Peace Respect Beauty Courage Honesty Loyalty Freedom
Acceptance Accomplishment Accountability Accuracy Adaptability Adventure Affection Altruism Ambition
Appreciation Assertiveness Attentiveness Authenticity Autonomy Awareness Balance Belonging Boldness
Calmness Candor Capability Caring Certainty Challenge Charity Cheerfulness Cleanliness Clarity Comfort
Commitment Community Compassion Competence Competition Composure Confidence Connection Consistency
Contentment Contribution Control Cooperation Courtesy Creativity Credibility Curiosity Decisiveness
Dedication Dependability Determination Devotion Diligence Discipline Discovery Diversity Drive Duty
Education Effectiveness Efficiency Elegance Empathy Encouragement Endurance Energy Enjoyment Enthusiasm
Equality Excellence Excitement Experience Expertise Exploration Expressiveness Fame Fearlessness
Fidelity Fitness Flexibility Focus Forgiveness Fortitude Frugality Generosity Gentleness Genuineness
Giving Goodness Grace Gratitude Growth Happiness Harmony Helpfulness Heroism Holiness Honor Hope
Hospitality Imagination Impact Independence Individuality Influence Ingenuity Initiative Innovation
Insight Inspiration Integrity Intensity Intimacy Intuition Justice Kindness Knowledge Leadership Legacy
Leisure Love Mastery Maturity Meaning Mindfulness Moderation Modesty Motivation Nature Openness Optimism
Order Organization Originality Passion Patience Patriotism Perfection Perseverance Philanthropy
Playfulness Pleasure Poise Popularity Positivity Power Practicality Precision Preparedness Presence
Privacy Proactivity Productivity Professionalism Prudence Punctuality Purpose Quality Recognition
Recreation Reflection Reliability Religion Reputation Resilience Resourcefulness Responsibility
Restraint Reverence Romance Safety Security Self-control Self-expression Self-reliance Self-respect
Selflessness Sensitivity Service Sharing Simplicity Sincerity Skill Solitude Spirituality Spontaneity
Stability Status Stewardship Strength Structure Success Support Sustainability Teamwork Temperance
Thoroughness Thoughtfulness Thrift Timeliness Tolerance Tradition Tranquility Transparency Trust
Trustworthiness Truth Understanding Uniqueness Unity Usefulness Valor Vision Vitality Warmth Wellness
Wonder Youthfulness Zeal Abundance Agility Alertness Amusement Anticipation Artistry Athleticism
Attractiveness Audacity Bliss Brotherhood Camaraderie Carefulness Chastity Citizenship Collaboration
Connectedness Conscientiousness Conviction Craftsmanship Daring Decency Decorum Deference Delight
Democracy Depth Dexterity Dynamism Eagerness Ecstasy Empowerment Entrepreneurship Ethics Exuberance
Fascination Fluency Freshness Friendliness Frankness Gallantry Grit Guidance Heritage Idealism
Inclusiveness Inquisitiveness Intellect Inventiveness Judiciousness Kinship Liveliness Logic Longevity
Mercy Meticulousness Neatness Obedience Open-mindedness Persuasiveness Piety Pragmatism Pride Progress
Rationality Realism Relaxation Resolve Sacrifice Satisfaction Science Self-discipline Shrewdness
Silence Sophistication Speed Sportsmanship Stillness Strategy Surprise Sympathy Tact Tenacity
Tenderness Thrill Travel Triumph Vigor Virtue Vivacity Volunteering Watchfulness Willingness Wittiness
""".split()

SOURCES = [
    "src:personal-core-values",
    "src:list-of-virtues",
    "src:character-strengths",
    "src:workplace-values",
    "src:family-values-survey",
    "src:life-values-inventory",
    "src:values-word-list",
]

N_FOLK = 311

FOLK_PARENTS = {"Brilliance": "Intelligence", "Cleverness": "Intelligence", "Wisdom": "Intelligence", "Intellect": "Intelligence"}
FOLK_ALIGN = {
    "Rigor": ["mft:Authority"],
    "Loyalty": ["mft:Loyalty"],
    "Freedom": ["mft:Liberty"],
    "Caring": ["mft:Care", "bhv:BenevolenceCaring"],
    "Risk": ["bhv:Stimulation"],
    "Learning": ["bhv:SelfDirectionThought"],
    "Tradition": ["bhv:Tradition"],
    "Accomplishment": ["bhv:Achievement"],
    "Pleasure": ["bhv:Hedonism"],
    "Obedience": ["bhv:ConformityRules", "mft:Authority"],
    "Nature": ["bhv:UniversalismNature"],
    "Tolerance": ["bhv:UniversalismTolerance"],
    "Piety": ["mft:Purity"],
}


def local_name(label):
    words = []
    cur = ""
    for ch in label:
        if ch.isalnum():
            cur += ch
        elif cur:
            words.append(cur)
            cur = ""
    if cur:
        words.append(cur)
    return "".join(w[0].upper() + w[1:].lower() for w in words)


def folk_labels():
    labels = [l.replace("_", " ") for l in FOLK_LABELS]
    labels = [l[0].upper() + l[1:] for l in labels][:N_FOLK]
    assert len(labels) == len(set(labels)), [k for k, c in Counter(labels).items() if c > 1]
    seconds = {b for _, b in SYNONYM_PAIRS} | {MERGE_OVERRIDE[1]}
    assert not seconds & set(labels), seconds & set(labels)
    for a, _ in SYNONYM_PAIRS + [KEEP_APART, MERGE_OVERRIDE]:
        assert a in labels, a
    assert KEEP_APART[1] in labels
    for l in list(FOLK_PARENTS) + list(FOLK_PARENTS.values()) + list(FOLK_ALIGN):
        assert l in labels, l
    return labels


def build_candidates():
    """Candidate rows in scrape order plus the merged outcome computed here."""
    labels = folk_labels()
    rng = random.Random(7)
    rows = []
    prov = OrderedDict()
    for i, l in enumerate(labels):
        src = SOURCES[i % len(SOURCES)]
        rows.append((l, f"valuing {l.lower()}", src))
        prov[l] = [src]
    for k, (first, second) in enumerate(SYNONYM_PAIRS):
        src = SOURCES[(k + 3) % len(SOURCES)]
        if src == prov[first][0]:
            src = SOURCES[(k + 4) % len(SOURCES)]
        rows.append((second, f"valuing {second.lower()}", src))
        prov[first].append(src)
    first, second = MERGE_OVERRIDE
    src = SOURCES[(SOURCES.index(prov[first][0]) + 1) % len(SOURCES)]
    rows.append((second, f"valuing {second.lower()}", src))
    prov[first].append(src)
    repeats = ["Risk", "Risk", "Learning", "Intelligence", "Family", "Friendship", "Honesty", "Kindness", "Respect", "Courage",
               "Wisdom", "Growth", "Love", "Health", "Justice", "Integrity", "Creativity", "Balance", "Trust", "Humor"]
    used_extra = Counter()
    for l in repeats:
        used_extra[l] += 1
        src = SOURCES[(SOURCES.index(prov[l][0]) + 1 + used_extra[l]) % len(SOURCES)]
        while src in prov[l]:
            src = SOURCES[(SOURCES.index(src) + 1) % len(SOURCES)]
        rows.append((l, f"valuing {l.lower()}", src))
        prov[l].append(src)
    # scrape order interleaves the lists
    tail = rows[len(labels):]
    rng.shuffle(tail)
    rows = rows[: len(labels)] + tail
    assert len(rows) == 350, len(rows)
    # provenance in candidate order
    group_of = {l: l for l in labels}
    for a, b in SYNONYM_PAIRS + [MERGE_OVERRIDE]:
        group_of[b] = a
    ordered = OrderedDict((l, []) for l in labels)
    for l, _, src in rows:
        g = group_of[l]
        if src not in ordered[g]:
            ordered[g].append(src)
    return rows, ordered


def write_values(out):
    rows, merged = build_candidates()
    header = "id\tmodule\tpolarity\tdyad_partner\tparents\tprovenance\talignments\tlabel"
    lines = [header]
    for pos, neg in MFT_DYADS:
        lines.append(f"mft:{pos}\tMFT\tpositive\tmft:{neg}\t-\t-\t-\t{pos}")
        lines.append(f"mft:{neg}\tMFT\tnegative\tmft:{pos}\t-\t-\t-\t{neg}")
    for h in BHV_HIGHER:
        lines.append(f"bhv:{h}\tBHV\tunpolarized\t-\t-\t-\t-\t{h}")
    for local, parent, label in BHV_RING:
        lines.append(f"bhv:{local}\tBHV\tunpolarized\t-\tbhv:{parent}\t-\t-\t{label}")
    for label, urls in merged.items():
        parent = FOLK_PARENTS.get(label)
        lines.append(
            "\t".join(
                [
                    "folk:" + local_name(label),
                    "FOLK",
                    "positive",
                    "-",
                    "folk:" + local_name(parent) if parent else "-",
                    "|".join(urls),
                    "|".join(FOLK_ALIGN.get(label, [])) or "-",
                    label,
                ]
            )
        )
    (out / "values/values.tsv").write_text("\n".join(lines) + "\n")
    cand = ["label\tdefinition\tsource_url"] + ["\t".join(r) for r in rows]
    (out / "values/folk_candidates.tsv").write_text("\n".join(cand) + "\n")
    (out / "values/dedupe_overrides.txt").write_text(
        "# manual curation decisions, applied before lexical synonymy\n"
        f"{MERGE_OVERRIDE[0]} = {MERGE_OVERRIDE[1]}\n"
        f"{KEEP_APART[1]} != {KEEP_APART[0]}\n"
    )
    return merged


# ---------------------------------------------------------------------------
# plans


def write_plans(out):
    plans = {
        "risk": {
            "value": "folk:Risk",
            "seeds": [("risk", None)],
            "auto": ["lexical_unit", "yago", "close_match"],
            "sel": {
                "frame": ["fs:RiskySituation", "fs:RunRisk", "fs:BeingAtRisk", "fs:Daring", "fs:Endangering"],
                "frame_element": ["fe:Bad_outcome.RunRisk", "fe:Situation.RiskySituation", "fe:Asset.BeingAtRisk"],
                "concept": ["cn:risk", "cn:venture", "cn:risky"],
                "factual": ["dbpedia:Risk", "wiki:Q104493", "wikt:risky", "wikt:riskful", "wikt:risktaker"],
            },
        },
        "rigor": {
            "value": "folk:Rigor",
            "seeds": [("rigor", "noun")],
            "auto": ["lexical_unit"],
            "sel": {"frame": ["fs:Strictness", "fs:Law"]},
        },
        "learning": {
            "value": "folk:Learning",
            "seeds": [("learning", "noun"), ("learn", "verb")],
            "auto": ["lexical_unit"],
            "sel": {"frame": ["fs:Education_teaching"]},
        },
    }
    for name, p in plans.items():
        lines = [f'value = "{p["value"]}"', "auto_accept = [" + ", ".join(f'"{a}"' for a in p["auto"]) + "]", ""]
        for lemma, pos in p["seeds"]:
            lines.append("[[seeds]]")
            lines.append(f'lemma = "{lemma}"')
            if pos:
                lines.append(f'pos = "{pos}"')
            lines.append("")
        lines.append("[selections]")
        for kind, items in p["sel"].items():
            rel = f"selections/{name}/{kind}.txt"
            lines.append(f'{kind} = "{rel}"')
            path = out / "plans" / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(f"# accepted {kind.replace('_', ' ')} candidates\n" + "\n".join(items) + "\n")
        (out / f"plans/{name}.toml").write_text("\n".join(lines) + "\n")
    return plans


def expected_risk_triggers(plans):
    """Trigger entities of the risk plan, derived from the fixture tables."""
    p = plans["risk"]
    frames = p["sel"]["frame"]
    fr = {f.split(":", 1)[1] for f in frames}
    synsets = sorted(s for s, d in SYNSETS.items() if set(d["evokes"]) & fr)
    vcs = sorted({k for s in synsets for k in SYNSETS[s]["keys"]})
    yago = sorted({y for s in synsets for y in SYNSETS[s]["same_as"] if y.startswith("yago:")} | {"yago:wordnet_gamble_201080366"})
    close = sorted(a for a, b in CLOSE_MATCHES if b in frames)
    ents = frames + p["sel"]["frame_element"] + synsets + vcs + yago + close + p["sel"]["concept"] + p["sel"]["factual"]
    return ents


def write_expected_risk(out, plans):
    ents = expected_risk_triggers(plans)
    used = {e.split(":", 1)[0] for e in ents} | {"vcore", "folk"}
    body = "\n".join(f"{e} vcore:triggers folk:Risk ." for e in ents) + "\n"
    (out / "expected/taf_risk.ttl").write_text(ttl_header(used, body) + body)


# ---------------------------------------------------------------------------
# corpus

ANN = ["A00", "A01", "A02", "A03", "A04"]
TOT = {"A00": 157, "A01": 137, "A02": 185, "A03": 302, "A04": 163}
TOT_NC = {"A00": 63, "A01": 136, "A02": 180, "A03": 296, "A04": 163}
AGREE = {"A00": 52, "A01": 53, "A02": 65, "A03": 122, "A04": 6}
AGREE_TM = {"A00": 62, "A01": 60, "A02": 75, "A03": 130, "A04": 63}
AGREE_TM_NC = {"A00": 34, "A01": 60, "A02": 75, "A03": 130, "A04": 63}
GROUPS3, GROUPS4 = 280, 26
FAIL_GROUPS = [3] * 16 + [4] * 2
N_MFT, N_TM, N_NM = 228, 153, 563
DET_TMNM, DET_MFT = 635, 220

ALPHABET = [("NM",), ("TM",), ("V1",), ("V2",), ("V1", "V2")]


def is_moral(labels):
    return labels != ("NM",)


def majority(group):
    cnt = Counter(l for labels in group for l in labels)
    return {l for l, c in cnt.items() if 2 * c > len(group)}


def row_roles(group):
    """Agreement role per row: A agrees, T agrees only under thin morality, N neither."""
    maj = majority(group)
    out = []
    for labels in group:
        a = bool(set(labels) & maj)
        t = a or (is_moral(labels) and any(m != "NM" for m in maj))
        out.append("A" if a else ("T" if t else "N"))
    return out


def solve_groups():
    templates = [t for k in (3, 4) for t in itertools.combinations_with_replacement(ALPHABET, k)]
    variables = []
    for t in templates:
        roles = row_roles(t)
        for perm in itertools.permutations(ANN, len(t)):
            for d in (0, 1):
                variables.append((t, roles, perm, d))
    n = len(variables)
    rows, lo, hi = [], [], []

    def add(coef, l, h):
        rows.append(coef)
        lo.append(l)
        hi.append(h)

    add([int(len(v[0]) == 3) for v in variables], GROUPS3, GROUPS3)
    add([int(len(v[0]) == 4) for v in variables], GROUPS4, GROUPS4)
    for a in ANN:
        add([sum(1 for s in v[2] if s == a) for v in variables], TOT[a], TOT[a])
    cls = lambda labels: "MFT" if labels[0].startswith("V") else labels[0]
    for c, num in (("MFT", N_MFT), ("TM", N_TM), ("NM", N_NM)):
        add([sum(1 for l in v[0] if cls(l) == c) for v in variables], num, num)
    add([v[3] * sum(1 for l in v[0] if cls(l) != "MFT") for v in variables], DET_TMNM, DET_TMNM)
    add([v[3] * sum(1 for l in v[0] if cls(l) == "MFT") for v in variables], DET_MFT, DET_MFT)
    macron = (("NM",), ("TM",), ("TM",))
    add([int(v[0] == macron and v[2] == ("A01", "A00", "A03") and v[3] == 1) for v in variables], 1, np.inf)
    # soft targets: agree and agree+tm per annotator, with L1 slack
    soft = []
    for a in ANN:
        soft.append(([sum(1 for s, r in zip(v[2], v[1]) if s == a and r == "A") for v in variables], AGREE[a]))
        soft.append(([sum(1 for s, r in zip(v[2], v[1]) if s == a and r in "AT") for v in variables], AGREE_TM[a]))
    ns = 2 * len(soft)
    A = np.zeros((len(rows) + len(soft), n + ns))
    A[: len(rows), :n] = np.array(rows, dtype=float)
    for k, (coef, target) in enumerate(soft):
        A[len(rows) + k, :n] = coef
        A[len(rows) + k, n + 2 * k] = 1
        A[len(rows) + k, n + 2 * k + 1] = -1
        lo.append(target)
        hi.append(target)
    c = np.concatenate([np.zeros(n), np.ones(ns)])
    res = milp(
        c=c,
        constraints=LinearConstraint(A, lo, hi),
        integrality=np.concatenate([np.ones(n), np.zeros(ns)]),
        bounds=Bounds(0, np.inf),
    )
    assert res.status == 0, res.message
    x = np.round(res.x[:n]).astype(int)
    groups = []
    for v, k in zip(variables, x):
        groups += [v] * int(k)
    return groups, res.fun


def mft_pair(i):
    pos, neg = MFT_DYADS[i % len(MFT_DYADS)]
    return {"V1": pos, "V2": neg}


FILLERS_A = ["honestly", "so", "well", "yeah", "look", "okay", "ok", "basically", "actually", "seriously", "anyway", "sure"]
FILLERS_B = ["i", "we", "you", "they", "everyone", "nobody", "someone", "my uncle", "this sub", "op"]
FAIL_TOKENS = ["imho", "lol", "smh", "tbh", "idk", "btw", "omg", "fwiw", "ikr", "afaik", "ymmv", "iirc", "rofl", "lmao", "nvm", "gg", "brb", "irl"]


def sentence(rng, seen, trigger, neutral_pool):
    while True:
        a, b = rng.sample(neutral_pool, 2)
        opener = rng.choice(FILLERS_A)
        subj = rng.choice(FILLERS_B)
        if trigger is None:
            text = rng.choice(
                [
                    f"{opener.capitalize()}, {subj} just saw the {a} about the {b}.",
                    f"{opener.capitalize()} the {a} and the {b} are the point here.",
                    f"{subj.capitalize()} would not care about the {a} or the {b}.",
                    f"{opener.capitalize()}, what about the {a} and that {b}?",
                ]
            )
        else:
            text = rng.choice(
                [
                    f"{opener.capitalize()}, {subj} said the {a} is about {trigger} and the {b}.",
                    f"{subj.capitalize()} keep saying {trigger} matters more than the {a} or the {b}.",
                    f"{opener.capitalize()} this {a} thing is {trigger}, not the {b}.",
                    f"{opener.capitalize()}, {trigger} over the {a} every time, forget the {b}.",
                ]
            )
        if text not in seen:
            seen.add(text)
            return text


def neutral_surfaces():
    out = []
    for lemma, pos, _, forms in NEUTRAL_WORDS:
        if pos == "noun" and lemma not in ("data", "election", "purpose", "group", "man"):
            out.append(lemma)
    return out


def trigger_surfaces():
    out = []
    for w in TRIGGER_WORDS:
        out.append((w["lemma"], w["value"]))
    return out


def build_corpus(groups):
    rng = random.Random(2023)
    seen = {MACRON}
    neutral = neutral_surfaces()
    triggers = trigger_surfaces()
    mft_triggers = {}
    for lemma, v in triggers:
        if v.startswith("mft:"):
            mft_triggers.setdefault(v.split(":")[1], []).append(lemma)
    folk_triggers = [l for l, v in triggers if not v.startswith("mft:")]
    order = list(range(len(groups)))
    rng.shuffle(order)
    texts = []  # (text, [(annotator, labels)], detected)
    macron_done = False
    for gi, idx in enumerate(order):
        t, roles, perm, d = groups[idx]
        pair = mft_pair(gi)
        labels = [tuple(pair[l] if l.startswith("V") else l for l in lab) for lab in t]
        if not macron_done and t == (("NM",), ("TM",), ("TM",)) and perm == ("A01", "A00", "A03") and d == 1:
            text = MACRON
            macron_done = True
        elif d:
            if any(l.startswith("V") for lab in t for l in lab):
                trig = rng.choice(mft_triggers[pair["V1"]] + folk_triggers[:3])
            else:
                trig = rng.choice(folk_triggers + [w for ws in mft_triggers.values() for w in ws])
            text = sentence(rng, seen, trig, neutral)
        else:
            text = sentence(rng, seen, None, neutral)
        texts.append((text, list(zip(perm, labels)), bool(d), list(roles)))
    assert macron_done
    for size in FAIL_GROUPS:
        while True:
            k = rng.randint(2, 4)
            text = " ".join(rng.sample(FAIL_TOKENS, k))
            if rng.random() < 0.5:
                text += rng.choice(["!!", "...", " :)", "?"])
            if text not in seen:
                seen.add(text)
                break
        anns = rng.sample(ANN, size)
        labels = [(rng.choice(["NM", "NM", "TM"]),) for _ in anns]
        texts.append((text, list(zip(anns, labels)), None, [None] * size))
    return texts


def assign_confidence(texts, rng):
    """Not-confident flags per annotator, split between agreeing and other rows."""
    rows_by = {a: {"AT": [], "N": []} for a in ANN}
    for ti, (_, rows, det, roles) in enumerate(texts):
        if det is None:
            continue
        for ri, ((a, _), r) in enumerate(zip(rows, roles)):
            rows_by[a]["AT" if r in "AT" else "N"].append((ti, ri))
    nc = set()
    for a in ANN:
        total = TOT[a] - TOT_NC[a]
        at = AGREE_TM[a] - AGREE_TM_NC[a]
        at = min(at, len(rows_by[a]["AT"]))
        pick = rng.sample(rows_by[a]["AT"], at)
        rest = total - at
        n_pool = rows_by[a]["N"]
        if rest > len(n_pool):
            extra = [r for r in rows_by[a]["AT"] if r not in pick]
            pick += rng.sample(extra, rest - len(n_pool))
            rest = len(n_pool)
        pick += rng.sample(n_pool, rest)
        nc.update(pick)
    return nc


def oracle_tables(records):
    """Agreement and coverage tables computed directly from the generated rows."""
    graph = [r for r in records if r["detected"] is not None]
    by_text = {}
    for r in graph:
        by_text.setdefault(r["text"], []).append(r)
    t1 = {}
    for a in ANN:
        t1[a] = {"tot": 0, "tot_nc": 0, "agree": 0, "agree_tm": 0, "agree_tm_nc": 0}
    for rs in by_text.values():
        group = [r["labels"] for r in rs]
        roles = row_roles(group)
        for r, role in zip(rs, roles):
            row = t1[r["annotator"]]
            nc = r["confidence"] == "Not Confident"
            row["tot"] += 1
            row["tot_nc"] += 0 if nc else 1
            row["agree"] += role == "A"
            row["agree_tm"] += role in "AT"
            row["agree_tm_nc"] += role in "AT" and not nc
    mft = sum(1 for r in graph if is_moral(r["labels"]) and r["labels"] != ("TM",))
    tm = sum(1 for r in graph if r["labels"] == ("TM",))
    nm = sum(1 for r in graph if r["labels"] == ("NM",))
    det = sum(1 for r in graph if r["detected"])
    overlap = sum(1 for r in graph if r["detected"] and r["labels"] in (("TM",), ("NM",)))
    mft_unique = len({r["text"] for r in graph if r["labels"] not in (("TM",), ("NM",))})
    t2 = {
        "total_sentences": len(records),
        "graphs_produced": len(graph),
        "mft_annotated": mft,
        "mft_annotated_unique": mft_unique,
        "thin_morality": tm,
        "non_moral": nm,
        "detected_any": det,
        "overlap_with_tm_or_nm": overlap,
    }
    return t1, t2


def write_corpus(out):
    groups, deviation = solve_groups()
    texts = build_corpus(groups)
    rng = random.Random(99)
    nc = assign_confidence(texts, rng)
    records = []
    for ti, (text, rows, det, _) in enumerate(texts):
        for ri, (a, labels) in enumerate(rows):
            if (ti, ri) in nc:
                conf = "Not Confident"
            else:
                conf = "Confident" if (ti + ri) % 3 else "Somewhat Confident"
            records.append({"text": text, "annotator": a, "labels": labels, "confidence": conf, "detected": det})
    rng.shuffle(records)
    # the example sentence keeps its graph number as the id of its first row
    mi = next(i for i, r in enumerate(records) if r["text"] == MACRON)
    records[mi], records[356] = records[356], records[mi]
    for i, r in enumerate(records, 1):
        r["id"] = f"m{i:04d}"
    assert len(records) == 1000
    label_text = lambda l: {"NM": "Non-Moral", "TM": "Thin Morality"}.get(l, l)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "text", "annotator", "labels", "confidence"])
    for r in records:
        w.writerow([r["id"], r["text"], r["annotator"], ",".join(label_text(l) for l in r["labels"]), r["confidence"]])
    (out / "corpus/mfrc_1k.csv").write_text(buf.getvalue())
    with open(out / "corpus/sentences.jsonl", "w") as f:
        for r in records:
            f.write(json.dumps({"id": r["id"], "text": r["text"]}) + "\n")
    lm = ["# corpus label\ttarget"]
    for pos, neg in MFT_DYADS:
        lm.append(f"{pos}\tmft:{pos}")
        lm.append(f"{neg}\tmft:{neg}")
    lm += ["Thin Morality\tThinMorality", "Non-Moral\tNonMoral"]
    (out / "corpus/labels.tsv").write_text("\n".join(lm) + "\n")
    t1, t2 = oracle_tables(records)
    expected = {
        "table1": t1,
        "table2": t2,
        "detected_ids": sorted(r["id"] for r in records if r["detected"]),
        "no_graph_ids": sorted(r["id"] for r in records if r["detected"] is None),
        "ilp_soft_deviation": deviation,
    }
    (out / "expected/corpus_tables.json").write_text(json.dumps(expected, indent=1, sort_keys=True) + "\n")
    return t1, t2, deviation


# ---------------------------------------------------------------------------


def write_manifest(out):
    (out / "manifest.toml").write_text(
        """prefixes = "prefixes.toml"
value_table = "values/values.tsv"
candidates = "values/folk_candidates.tsv"
dedupe_overrides = "values/dedupe_overrides.txt"
plans = ["plans/risk.toml", "plans/rigor.toml", "plans/learning.toml"]
detector_mode = "firstSense"
corpus = "corpus/mfrc_1k.csv"
corpus_format = "csv"
label_map = "corpus/labels.tsv"
workspace = "../target/fixture-workspace"

[[graphs]]
path = "kb/lexicon.ttl"
name = "lexicon"
role = "lexical"

[[graphs]]
path = "kb/frames.ttl"
name = "frames"
role = "lexical"

[[graphs]]
path = "kb/alignments.ttl"
name = "alignments"
role = "lexical"

[[graphs]]
path = "kb/mft_triggers.ttl"
name = "triggers/mft"
role = "triggers"

[[graphs]]
path = "kb/folk_triggers.ttl"
name = "triggers/folk-curated"
role = "triggers"
"""
    )
    pre = "\n".join(f'{p} = "{ns}"' for p, ns in PREFIXES.items())
    (out / "prefixes.toml").write_text("[prefixes]\n" + pre + "\n")
    (out / "corpus/macron.txt").write_text(MACRON + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    args = ap.parse_args()
    out = Path(args.out)
    for d in ("kb", "values", "plans", "corpus", "expected"):
        (out / d).mkdir(parents=True, exist_ok=True)
    build_lexicon()
    write_lexicon(out)
    write_frames(out)
    write_alignments(out)
    write_triggers(out)
    merged = write_values(out)
    plans = write_plans(out)
    write_expected_risk(out, plans)
    write_manifest(out)
    t1, t2, dev = write_corpus(out)
    print(f"folk values: {len(merged)}")
    print(f"coverage: {t2}")
    for a in ANN:
        print(a, t1[a])
    print(f"agreement deviation (L1): {dev}")


if __name__ == "__main__":
    main()
