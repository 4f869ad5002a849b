//! Toolkit for AIDA nanopublications: scientific claims written as short,
//! self-contained English sentences and published as RDF named graphs.
//!
//! - [`aida`]: sentences, their `purl.org/aida` URIs and compliance checks
//! - [`nanopub`]: the extended nanopublication model and TriG I/O
//! - [`extraction`]: GeneRIF ingestion and filtering into nanopublications
//! - [`clustering`]: tf-idf vectors and local repeated k-means clustering

pub mod aida;
pub mod nanopub;
pub mod clustering;
pub mod extraction;
