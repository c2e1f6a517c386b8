#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dlkb/errors.hpp"
#include "dlkb/knowledge_base.hpp"

namespace dlkb {

class IoError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// First non-blank byte is '<'.
bool looks_like_rdfxml(std::string_view document);

// Native text or RDF/XML, chosen by looks_like_rdfxml.
KnowledgeBase parse_document(std::string_view document);

// Plain path, file: URI or http:// URL. Relative paths resolve against base.
KnowledgeBase load_ontology(const std::string& uri, const std::filesystem::path& base = {});

}  // namespace dlkb
