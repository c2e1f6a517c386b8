#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "dlkb/decimal.hpp"

namespace dlkb {

// A role name, possibly inverted. inverse() of an inverse is the base role.
struct RoleExpr {
  std::string name;
  bool inverted = false;

  RoleExpr inverse() const { return {name, !inverted}; }

  auto operator<=>(const RoleExpr&) const = default;
  bool operator==(const RoleExpr&) const = default;
};

enum class ConceptKind {
  Top,
  Bottom,
  Atomic,
  Not,
  And,
  Or,
  Exists,
  ForAll,
  AtLeast,
  AtMost,
  HasValue,
  OneOf,
  DataSome,
};

// Immutable description-logic concept expression with structural equality.
// Copies share the underlying tree. Operand order inside And/Or is kept as
// constructed; equality is order-sensitive.
class Concept {
 public:
  static Concept top();
  static Concept bottom();
  static Concept atomic(std::string name);
  static Concept negation(Concept operand);
  // Zero operands give Top / Bottom; a single operand is returned as is.
  static Concept conjunction(std::vector<Concept> operands);
  static Concept disjunction(std::vector<Concept> operands);
  static Concept exists(RoleExpr role, Concept filler);
  static Concept forall(RoleExpr role, Concept filler);
  static Concept at_least(unsigned n, RoleExpr role);
  static Concept at_most(unsigned n, RoleExpr role);
  static Concept has_value(RoleExpr role, std::string individual);
  static Concept one_of(std::vector<std::string> individuals);
  static Concept data_some(std::string property, NumericRange range);

  ConceptKind kind() const;
  bool is(ConceptKind k) const { return kind() == k; }

  // Atomic: concept name. HasValue: individual. DataSome: data property.
  const std::string& name() const;
  // Exists/ForAll/AtLeast/AtMost/HasValue.
  const RoleExpr& role() const;
  // And/Or operands; Not has exactly one.
  const std::vector<Concept>& operands() const;
  // Not: the negated concept. Exists/ForAll: the filler.
  const Concept& child() const;
  unsigned cardinality() const;
  const std::vector<std::string>& individuals() const;
  const NumericRange& range() const;

  std::strong_ordering operator<=>(const Concept& other) const;
  bool operator==(const Concept& other) const;

  std::size_t hash() const;

 private:
  struct Node;
  explicit Concept(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Negation normal form: Not only directly above Atomic, HasValue, OneOf or
// DataSome. Operand order and nesting are preserved.
Concept nnf(const Concept& c);

// Every concept name occurring in c (not Top/Bottom).
void collect_concept_names(const Concept& c, std::vector<std::string>& out);
void collect_role_names(const Concept& c, std::vector<std::string>& out);
void collect_individuals(const Concept& c, std::vector<std::string>& out);
void collect_data_properties(const Concept& c, std::vector<std::string>& out);

}  // namespace dlkb

template <>
struct std::hash<dlkb::Concept> {
  std::size_t operator()(const dlkb::Concept& c) const noexcept { return c.hash(); }
};
