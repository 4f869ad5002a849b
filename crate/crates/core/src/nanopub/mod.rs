//! Extended nanopublication model, minting and TriG serialization.

mod model;
mod term;
mod trig;
mod trig_parse;
pub mod vocab;

pub use model::{
    build_aida_nanopub, build_plain_nanopub, validate_structure, Certainty, Channel, ModelError, NamedGraph,
    Nanopublication, Provenance, StructureViolation,
};
pub use term::{BlankNode, Iri, Literal, Term, TermError, Triple};
pub use trig::{serialize_trig, serialize_trig_all};
pub use trig_parse::{parse_dataset, parse_trig, Dataset, ParsedTrig, TrigError};
