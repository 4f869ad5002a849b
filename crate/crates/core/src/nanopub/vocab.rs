//! Namespaces and terms used by AIDA nanopublications.

use super::term::Iri;

pub const NP: &str = "http://www.nanopub.org/nschema#";
pub const NPX: &str = "http://purl.org/nanopub/x/";
pub const AIDA: &str = crate::aida::AIDA_PREFIX;
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const PROV: &str = "http://www.w3.org/ns/prov#";

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";

/// Prefix block written at the top of every TriG document.
pub const PREFIXES: [(&str, &str); 6] =
    [("np", NP), ("npx", NPX), ("aida", AIDA), ("rdf", RDF), ("xsd", XSD), ("prov", PROV)];

/// Prefix used for minted nanopublication URIs.
pub const NANOPUB_URI_PREFIX: &str = "urn:aidapub:";

fn iri(ns: &str, local: &str) -> Iri {
    Iri::new(format!("{ns}{local}")).expect("vocabulary IRIs are valid")
}

macro_rules! terms {
    ($($name:ident = $ns:ident : $local:literal;)*) => {
        $(
            pub fn $name() -> Iri {
                iri($ns, $local)
            }
        )*
    };
}

terms! {
    nanopublication = NP: "Nanopublication";
    has_assertion = NP: "hasAssertion";
    has_provenance = NP: "hasProvenance";
    has_publication_info = NP: "hasPublicationInfo";
    contains_graph = NP: "containsGraph";

    as_sentence = NPX: "asSentence";
    as_formula = NPX: "asFormula";
    has_same_meaning = NPX: "hasSameMeaning";
    has_related_meaning = NPX: "hasRelatedMeaning";
    agrees_with = NPX: "agreesWith";
    disagrees_with = NPX: "disagreesWith";
    is_convinced_by = NPX: "isConvincedBy";
    is_not_convinced_by = NPX: "isNotConvincedBy";
    created_by_channel = NPX: "createdByChannel";
    has_certainty = NPX: "hasCertainty";
    mint_salt = NPX: "mintSalt";
    generated_with_parameters = NPX: "generatedWithParameters";

    rdf_type = RDF: "type";
    rdf_about = RDF: "about";
    rdf_first = RDF: "first";
    rdf_rest = RDF: "rest";
    rdf_nil = RDF: "nil";

    xsd_date_time = XSD: "dateTime";
    xsd_integer = XSD: "integer";
    xsd_decimal = XSD: "decimal";
    xsd_double = XSD: "double";
    xsd_boolean = XSD: "boolean";

    was_attributed_to = PROV: "wasAttributedTo";
    generated_at_time = PROV: "generatedAtTime";
    was_derived_from = PROV: "wasDerivedFrom";
}

/// An npx: term by local name, e.g. the individuals naming channels.
pub fn npx(local: &str) -> Iri {
    iri(NPX, local)
}

/// PubMed record IRI for a PMID.
pub fn pubmed(pmid: u64) -> Iri {
    Iri::new(format!("http://www.ncbi.nlm.nih.gov/pubmed/{pmid}")).expect("valid IRI")
}
