//! Value knowledge graph engine: an embedded triple store, a lexical
//! resource index, the value model, trigger-graph expansion, frame-based
//! value detection over text, and corpus evaluation statistics.

pub mod store;
pub mod lexicon;
pub mod vocab;
pub mod valuenet;
pub mod quokka;
pub mod detector;
pub mod eval;
pub mod pipeline;
