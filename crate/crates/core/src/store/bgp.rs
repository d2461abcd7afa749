//! Basic graph pattern evaluation.
//!
//! Patterns are joined on shared variable names. Evaluation is an index
//! nested-loop join: at each step the pattern with the most positions
//! already bound is evaluated next, with current bindings substituted.
//! Results are deduplicated and returned in sorted order.

use std::collections::{BTreeMap, BTreeSet};

use super::{Store, StoreError, Term, TermId};

/// Maps variable names to terms.
pub type Binding = BTreeMap<String, Term>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Const(Term),
    Var(String),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(name.trim_start_matches('?').to_string())
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Const(t)
    }
}

impl From<&Term> for PatternTerm {
    fn from(t: &Term) -> Self {
        PatternTerm::Const(t.clone())
    }
}

/// A triple pattern, optionally restricted to one named graph. Without a
/// graph scope the pattern matches over the union of all graphs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
    pub graph: Option<Term>,
}

impl Pattern {
    pub fn new(s: impl Into<PatternTerm>, p: impl Into<PatternTerm>, o: impl Into<PatternTerm>) -> Self {
        Pattern { subject: s.into(), predicate: p.into(), object: o.into(), graph: None }
    }

    pub fn in_graph(mut self, graph: &Term) -> Self {
        self.graph = Some(graph.clone());
        self
    }

    fn positions(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    fn variables(&self) -> impl Iterator<Item = &str> {
        self.positions().into_iter().filter_map(|p| match p {
            PatternTerm::Var(v) => Some(v.as_str()),
            PatternTerm::Const(_) => None,
        })
    }
}

enum Slot {
    Bound(TermId),
    Free(usize),
    /// A constant absent from the dictionary: nothing can match.
    Missing,
}

pub(super) fn evaluate(store: &Store, patterns: &[Pattern]) -> Result<Vec<Binding>, StoreError> {
    if patterns.is_empty() {
        return Err(StoreError::EmptyQuery);
    }
    for p in patterns {
        if let Some(g) = &p.graph {
            if !store.has_graph(g) {
                return Err(StoreError::UnknownGraph(g.value().to_string()));
            }
        }
    }

    let mut var_names: Vec<String> = Vec::new();
    for p in patterns {
        for v in p.variables() {
            if !var_names.iter().any(|n| n == v) {
                var_names.push(v.to_string());
            }
        }
    }
    let var_index = |v: &str| var_names.iter().position(|n| n == v).expect("collected above");

    // Static join order: greedily pick the pattern with the most positions
    // bound by constants or by variables of already-chosen patterns.
    let mut order = Vec::with_capacity(patterns.len());
    let mut bound_vars: BTreeSet<&str> = BTreeSet::new();
    let mut remaining: Vec<usize> = (0..patterns.len()).collect();
    while !remaining.is_empty() {
        let (pick_at, _) = remaining
            .iter()
            .enumerate()
            .map(|(at, &i)| {
                let bound = patterns[i]
                    .positions()
                    .iter()
                    .filter(|p| match p {
                        PatternTerm::Const(_) => true,
                        PatternTerm::Var(v) => bound_vars.contains(v.as_str()),
                    })
                    .count();
                (at, bound)
            })
            .max_by_key(|&(at, bound)| (bound, std::cmp::Reverse(at)))
            .expect("remaining is non-empty");
        let i = remaining.remove(pick_at);
        bound_vars.extend(patterns[i].variables());
        order.push(i);
    }

    let mut rows: Vec<Vec<Option<TermId>>> = vec![vec![None; var_names.len()]];
    for &i in &order {
        let pattern = &patterns[i];
        let graphs = store.scopes(pattern.graph.as_ref())?;
        let mut next = Vec::new();
        for row in &rows {
            let slots: Vec<Slot> = pattern
                .positions()
                .iter()
                .map(|p| match p {
                    PatternTerm::Const(t) => store.id_of(t).map_or(Slot::Missing, Slot::Bound),
                    PatternTerm::Var(v) => {
                        let vi = var_index(v);
                        row[vi].map_or(Slot::Free(vi), Slot::Bound)
                    }
                })
                .collect();
            if slots.iter().any(|s| matches!(s, Slot::Missing)) {
                continue;
            }
            let bound = |k: usize| match slots[k] {
                Slot::Bound(id) => Some(id),
                _ => None,
            };
            let mut keys = BTreeSet::new();
            for g in &graphs {
                keys.extend(g.scan(bound(0), bound(1), bound(2)));
            }
            'keys: for (s, p, o) in keys {
                let mut new_row = row.clone();
                for (slot, id) in slots.iter().zip([s, p, o]) {
                    if let Slot::Free(vi) = *slot {
                        match new_row[vi] {
                            Some(prev) if prev != id => continue 'keys,
                            _ => new_row[vi] = Some(id),
                        }
                    }
                }
                next.push(new_row);
            }
        }
        rows = next;
        if rows.is_empty() {
            break;
        }
    }

    let results: BTreeSet<Binding> = rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .filter_map(|(vi, id)| id.map(|id| (var_names[vi].clone(), store.term(id).clone())))
                .collect()
        })
        .collect();
    Ok(results.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::super::{Format, Store};
    use super::*;

    fn store() -> Store {
        let mut s = Store::new();
        let doc = "<http://ex.org/a> <http://ex.org/p> <http://ex.org/b> .\n\
                   <http://ex.org/b> <http://ex.org/p> <http://ex.org/c> .\n\
                   <http://ex.org/c> <http://ex.org/q> <http://ex.org/c> .\n";
        s.load(doc, Format::NTriples, &Term::named("http://ex.org/g")).unwrap();
        s
    }

    #[test]
    fn full_scan_returns_every_triple() {
        let s = store();
        let r = s.match_bgp(&[Pattern::new(PatternTerm::var("s"), PatternTerm::var("p"), PatternTerm::var("o"))]).unwrap();
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn join_on_shared_variable() {
        let s = store();
        let p = Term::named("http://ex.org/p");
        let r = s
            .match_bgp(&[
                Pattern::new(PatternTerm::var("x"), &p, PatternTerm::var("y")),
                Pattern::new(PatternTerm::var("y"), &p, PatternTerm::var("z")),
            ])
            .unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0]["z"], Term::named("http://ex.org/c"));
    }

    #[test]
    fn repeated_variable_in_one_pattern() {
        let s = store();
        let r = s.match_bgp(&[Pattern::new(PatternTerm::var("x"), PatternTerm::var("p"), PatternTerm::var("x"))]).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0]["x"], Term::named("http://ex.org/c"));
    }

    #[test]
    fn constant_only_pattern_is_membership() {
        let s = store();
        let a = Term::named("http://ex.org/a");
        let p = Term::named("http://ex.org/p");
        let b = Term::named("http://ex.org/b");
        assert_eq!(s.match_bgp(&[Pattern::new(&a, &p, &b)]).unwrap(), vec![Binding::new()]);
        assert!(s.match_bgp(&[Pattern::new(&b, &p, &a)]).unwrap().is_empty());
        let unknown = Term::named("http://ex.org/unknown");
        assert!(s.match_bgp(&[Pattern::new(&unknown, &p, &a)]).unwrap().is_empty());
    }

    #[test]
    fn errors() {
        let s = store();
        assert_eq!(s.match_bgp(&[]), Err(StoreError::EmptyQuery));
        let pat = Pattern::new(PatternTerm::var("s"), PatternTerm::var("p"), PatternTerm::var("o"))
            .in_graph(&Term::named("http://ex.org/nope"));
        assert!(matches!(s.match_bgp(&[pat]), Err(StoreError::UnknownGraph(_))));
    }
}
