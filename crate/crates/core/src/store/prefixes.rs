use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use super::{StoreError, Term};

/// Prefix table mapping short names (`fs`, `wn`, ...) to namespace IRIs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrefixTable {
    map: BTreeMap<String, String>,
}

#[derive(Deserialize)]
struct PrefixFile {
    prefixes: BTreeMap<String, String>,
}

impl PrefixTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reads a TOML file with a single `[prefixes]` table.
    pub fn from_toml_str(src: &str) -> Result<Self, StoreError> {
        let file: PrefixFile =
            toml::from_str(src).map_err(|e| StoreError::Config(format!("prefix table: {e}")))?;
        let mut table = PrefixTable::new();
        for (k, v) in file.prefixes {
            table.insert(&k, &v)?;
        }
        Ok(table)
    }

    pub fn from_file(path: &Path) -> Result<Self, StoreError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| StoreError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&src)
    }

    pub fn insert(&mut self, prefix: &str, namespace: &str) -> Result<(), StoreError> {
        if !super::term::is_absolute_iri(namespace) {
            return Err(StoreError::Config(format!("namespace for `{prefix}` is not absolute: {namespace}")));
        }
        self.map.insert(prefix.to_string(), namespace.to_string());
        Ok(())
    }

    pub fn namespace(&self, prefix: &str) -> Option<&str> {
        self.map.get(prefix).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Expands `prefix:local`, `<iri>`, or an absolute IRI into an IRI term.
    pub fn expand(&self, text: &str) -> Result<Term, StoreError> {
        let text = text.trim();
        if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
            return Term::iri(inner);
        }
        if let Some((prefix, local)) = text.split_once(':') {
            if let Some(ns) = self.map.get(prefix) {
                return Term::iri(format!("{ns}{local}"));
            }
        }
        Term::iri(text)
    }

    /// Shortest `prefix:local` form of an IRI, if a namespace matches.
    pub fn compact(&self, iri: &str) -> Option<String> {
        self.map
            .iter()
            .filter(|(_, ns)| iri.starts_with(ns.as_str()))
            .max_by_key(|(_, ns)| ns.len())
            .map(|(p, ns)| format!("{p}:{}", &iri[ns.len()..]))
    }

    /// Compact form when available, otherwise `<iri>`.
    pub fn display(&self, term: &Term) -> String {
        match term {
            Term::Iri(iri) => self.compact(iri).unwrap_or_else(|| format!("<{iri}>")),
            other => other.to_string(),
        }
    }

    pub fn in_namespace(&self, term: &Term, prefix: &str) -> bool {
        match (term, self.namespace(prefix)) {
            (Term::Iri(iri), Some(ns)) => iri.starts_with(ns),
            _ => false,
        }
    }
}
