#pragma once

#include <string>
#include <string_view>

#include "dlkb/concept.hpp"
#include "dlkb/errors.hpp"
#include "dlkb/knowledge_base.hpp"

namespace dlkb {

struct SourceLocation {
  int line = 1;    // 1-based
  int column = 1;  // 1-based, in bytes
  bool operator==(const SourceLocation&) const = default;
};

enum class ParseErrorKind {
  UnexpectedToken,
  UnknownKeyword,
  UndeclaredEntity,
  MalformedNumber,
  DuplicateDeclaration,
  UnsupportedConstruct,
};

const char* to_string(ParseErrorKind kind);

class ParseError : public Error {
 public:
  ParseError(SourceLocation location, ParseErrorKind kind, std::string message);

  const SourceLocation& location() const { return location_; }
  ParseErrorKind kind() const { return kind_; }
  // Message without the "line:col: kind:" prefix that what() carries.
  const std::string& detail() const { return detail_; }

 private:
  SourceLocation location_;
  ParseErrorKind kind_;
  std::string detail_;
};

// Manchester-flavoured native format. See docs/format.md for the grammar.
KnowledgeBase parse_text(std::string_view source);

// Entities sorted by name, axioms in insertion order within each frame.
// parse_text(serialize_text(kb)) is logically identical to kb.
std::string serialize_text(const KnowledgeBase& kb);

// Parses the expression sublanguage. When kb is given, nominals must name
// individuals it declares.
Concept parse_concept(std::string_view text, const KnowledgeBase* kb = nullptr);

std::string to_text(const Concept& c);
std::string to_text(const RoleExpr& r);

// Quotes a name when it is not a plain identifier or collides with a keyword.
std::string quote_name(const std::string& name);

}  // namespace dlkb
