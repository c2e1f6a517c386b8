#pragma once

#include <string>
#include <string_view>

#include "dlkb/knowledge_base.hpp"
#include "dlkb/text_format.hpp"

namespace dlkb {

// Imports the OWL-in-RDF/XML subset: classes with subClassOf/equivalentClass/
// disjointWith, restrictions (some, only, hasValue, cardinalities), boolean
// class constructors, oneOf, object and datatype properties, datatype facet
// restrictions, labels and named individuals. Fragments without an rdf:RDF
// root, and documents using &owl; style entities without declaring them,
// are accepted. Errors are ParseError; unknown elements give
// ParseErrorKind::UnsupportedConstruct naming the element.
KnowledgeBase import_rdfxml(std::string_view source);

// Inverse of import. Throws UnsupportedConstruct for content the subset
// cannot express (inverse sub-properties, inverted role assertions, property
// names that are not XML names).
std::string export_rdfxml(const KnowledgeBase& kb);

}  // namespace dlkb
