#include "dlkb/concept.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace dlkb {

struct Concept::Node {
  ConceptKind kind;
  std::string name;
  RoleExpr role;
  std::vector<Concept> operands;
  unsigned n = 0;
  std::vector<std::string> individuals;
  NumericRange range;
  std::size_t hash = 0;

  void seal();
};

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_range(const NumericRange& r) {
  std::size_t h = 0;
  for (const auto* facet : {&r.min_inclusive, &r.min_exclusive, &r.max_inclusive,
                            &r.max_exclusive}) {
    h = mix(h, facet->has_value() ? std::hash<std::string>{}(facet->value().to_string())
                                  : 7);
  }
  return h;
}

const std::vector<Concept>& no_operands() {
  static const std::vector<Concept> empty;
  return empty;
}

}  // namespace

// Hash is computed once, when the node is complete.
void Concept::Node::seal() {
  std::size_t h = static_cast<std::size_t>(kind) * 1315423911u;
  h = mix(h, std::hash<std::string>{}(name));
  h = mix(h, std::hash<std::string>{}(role.name));
  h = mix(h, role.inverted ? 17 : 3);
  for (const Concept& op : operands) h = mix(h, op.hash());
  h = mix(h, n);
  for (const auto& ind : individuals) h = mix(h, std::hash<std::string>{}(ind));
  h = mix(h, hash_range(range));
  hash = h;
}

Concept Concept::top() {
  static const Concept value = [] {
    auto node = std::make_shared<Node>();
    node->kind = ConceptKind::Top;
    node->seal();
    return Concept(std::move(node));
  }();
  return value;
}

Concept Concept::bottom() {
  static const Concept value = [] {
    auto node = std::make_shared<Node>();
    node->kind = ConceptKind::Bottom;
    node->seal();
    return Concept(std::move(node));
  }();
  return value;
}

Concept Concept::atomic(std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = ConceptKind::Atomic;
  node->name = std::move(name);
  node->seal();
  return Concept(std::move(node));
}

Concept Concept::negation(Concept operand) {
  auto node = std::make_shared<Node>();
  node->kind = ConceptKind::Not;
  node->operands.push_back(std::move(operand));
  node->seal();
  return Concept(std::move(node));
}

Concept Concept::conjunction(std::vector<Concept> operands) {
  if (operands.empty()) return top();
  if (operands.size() == 1) return operands.front();
  auto node = std::make_shared<Node>();
  node->kind = ConceptKind::And;
  node->operands = std::move(operands);
  node->seal();
  return Concept(std::move(node));
}

Concept Concept::disjunction(std::vector<Concept> operands) {
  if (operands.empty()) return bottom();
  if (operands.size() == 1) return operands.front();
  auto node = std::make_shared<Node>();
  node->kind = ConceptKind::Or;
  node->operands = std::move(operands);
  node->seal();
  return Concept(std::move(node));
}

Concept Concept::exists(RoleExpr role, Concept filler) {
  auto node = std::make_shared<Node>();
  node->kind = ConceptKind::Exists;
  node->role = std::move(role);
  node->operands.push_back(std::move(filler));
  node->seal();
  return Concept(std::move(node));
}

Concept Concept::forall(RoleExpr role, Concept filler) {
  auto node = std::make_shared<Node>();
  node->kind = ConceptKind::ForAll;
  node->role = std::move(role);
  node->operands.push_back(std::move(filler));
  node->seal();
  return Concept(std::move(node));
}

Concept Concept::at_least(unsigned n, RoleExpr role) {
  auto node = std::make_shared<Node>();
  node->kind = ConceptKind::AtLeast;
  node->n = n;
  node->role = std::move(role);
  node->seal();
  return Concept(std::move(node));
}

Concept Concept::at_most(unsigned n, RoleExpr role) {
  auto node = std::make_shared<Node>();
  node->kind = ConceptKind::AtMost;
  node->n = n;
  node->role = std::move(role);
  node->seal();
  return Concept(std::move(node));
}

Concept Concept::has_value(RoleExpr role, std::string individual) {
  auto node = std::make_shared<Node>();
  node->kind = ConceptKind::HasValue;
  node->role = std::move(role);
  node->name = std::move(individual);
  node->seal();
  return Concept(std::move(node));
}

Concept Concept::one_of(std::vector<std::string> individuals) {
  assert(!individuals.empty());
  auto node = std::make_shared<Node>();
  node->kind = ConceptKind::OneOf;
  node->individuals = std::move(individuals);
  node->seal();
  return Concept(std::move(node));
}

Concept Concept::data_some(std::string property, NumericRange range) {
  auto node = std::make_shared<Node>();
  node->kind = ConceptKind::DataSome;
  node->name = std::move(property);
  node->range = std::move(range);
  node->seal();
  return Concept(std::move(node));
}

ConceptKind Concept::kind() const { return node_->kind; }
const std::string& Concept::name() const { return node_->name; }
const RoleExpr& Concept::role() const { return node_->role; }
const std::vector<Concept>& Concept::operands() const {
  return node_->kind == ConceptKind::And || node_->kind == ConceptKind::Or
             ? node_->operands
             : no_operands();
}
const Concept& Concept::child() const {
  assert(node_->operands.size() == 1);
  return node_->operands.front();
}
unsigned Concept::cardinality() const { return node_->n; }
const std::vector<std::string>& Concept::individuals() const {
  return node_->individuals;
}
const NumericRange& Concept::range() const { return node_->range; }
std::size_t Concept::hash() const { return node_->hash; }

namespace {

std::strong_ordering compare_optional(const std::optional<Decimal>& a,
                                      const std::optional<Decimal>& b) {
  if (a.has_value() != b.has_value()) {
    return a.has_value() ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  if (!a) return std::strong_ordering::equal;
  return *a <=> *b;
}

}  // namespace

std::strong_ordering Concept::operator<=>(const Concept& other) const {
  if (node_ == other.node_) return std::strong_ordering::equal;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.name <=> b.name; c != 0) return c;
  if (auto c = a.role <=> b.role; c != 0) return c;
  if (auto c = a.n <=> b.n; c != 0) return c;
  if (auto c = a.individuals <=> b.individuals; c != 0) return c;
  for (auto [x, y] : {std::pair{&a.range.min_inclusive, &b.range.min_inclusive},
                      std::pair{&a.range.min_exclusive, &b.range.min_exclusive},
                      std::pair{&a.range.max_inclusive, &b.range.max_inclusive},
                      std::pair{&a.range.max_exclusive, &b.range.max_exclusive}}) {
    if (auto c = compare_optional(*x, *y); c != 0) return c;
  }
  return std::lexicographical_compare_three_way(a.operands.begin(), a.operands.end(),
                                                b.operands.begin(), b.operands.end());
}

bool Concept::operator==(const Concept& other) const {
  if (node_ == other.node_) return true;
  if (node_->hash != other.node_->hash) return false;
  return (*this <=> other) == 0;
}

namespace {

Concept nnf_negated(const Concept& c);

Concept nnf_positive(const Concept& c) {
  switch (c.kind()) {
    case ConceptKind::Top:
    case ConceptKind::Bottom:
    case ConceptKind::Atomic:
    case ConceptKind::AtLeast:
    case ConceptKind::AtMost:
    case ConceptKind::HasValue:
    case ConceptKind::OneOf:
    case ConceptKind::DataSome:
      return c;
    case ConceptKind::Not:
      return nnf_negated(c.child());
    case ConceptKind::And:
    case ConceptKind::Or: {
      std::vector<Concept> ops;
      ops.reserve(c.operands().size());
      for (const Concept& op : c.operands()) ops.push_back(nnf_positive(op));
      return c.is(ConceptKind::And) ? Concept::conjunction(std::move(ops))
                                    : Concept::disjunction(std::move(ops));
    }
    case ConceptKind::Exists:
      return Concept::exists(c.role(), nnf_positive(c.child()));
    case ConceptKind::ForAll:
      return Concept::forall(c.role(), nnf_positive(c.child()));
  }
  return c;
}

// nnf of Not(c).
Concept nnf_negated(const Concept& c) {
  switch (c.kind()) {
    case ConceptKind::Top:
      return Concept::bottom();
    case ConceptKind::Bottom:
      return Concept::top();
    case ConceptKind::Atomic:
    case ConceptKind::HasValue:
    case ConceptKind::OneOf:
    case ConceptKind::DataSome:
      return Concept::negation(c);
    case ConceptKind::Not:
      return nnf_positive(c.child());
    case ConceptKind::And:
    case ConceptKind::Or: {
      std::vector<Concept> ops;
      ops.reserve(c.operands().size());
      for (const Concept& op : c.operands()) ops.push_back(nnf_negated(op));
      return c.is(ConceptKind::And) ? Concept::disjunction(std::move(ops))
                                    : Concept::conjunction(std::move(ops));
    }
    case ConceptKind::Exists:
      return Concept::forall(c.role(), nnf_negated(c.child()));
    case ConceptKind::ForAll:
      return Concept::exists(c.role(), nnf_negated(c.child()));
    case ConceptKind::AtLeast:
      if (c.cardinality() == 0) return Concept::bottom();
      return Concept::at_most(c.cardinality() - 1, c.role());
    case ConceptKind::AtMost:
      return Concept::at_least(c.cardinality() + 1, c.role());
  }
  return Concept::negation(c);
}

template <typename F>
void walk(const Concept& c, F&& visit) {
  visit(c);
  switch (c.kind()) {
    case ConceptKind::Not:
    case ConceptKind::Exists:
    case ConceptKind::ForAll:
      walk(c.child(), visit);
      break;
    case ConceptKind::And:
    case ConceptKind::Or:
      for (const Concept& op : c.operands()) walk(op, visit);
      break;
    default:
      break;
  }
}

}  // namespace

Concept nnf(const Concept& c) { return nnf_positive(c); }

void collect_concept_names(const Concept& c, std::vector<std::string>& out) {
  walk(c, [&](const Concept& x) {
    if (x.is(ConceptKind::Atomic)) out.push_back(x.name());
  });
}

void collect_role_names(const Concept& c, std::vector<std::string>& out) {
  walk(c, [&](const Concept& x) {
    switch (x.kind()) {
      case ConceptKind::Exists:
      case ConceptKind::ForAll:
      case ConceptKind::AtLeast:
      case ConceptKind::AtMost:
      case ConceptKind::HasValue:
        out.push_back(x.role().name);
        break;
      default:
        break;
    }
  });
}

void collect_individuals(const Concept& c, std::vector<std::string>& out) {
  walk(c, [&](const Concept& x) {
    if (x.is(ConceptKind::HasValue)) out.push_back(x.name());
    if (x.is(ConceptKind::OneOf)) {
      out.insert(out.end(), x.individuals().begin(), x.individuals().end());
    }
  });
}

void collect_data_properties(const Concept& c, std::vector<std::string>& out) {
  walk(c, [&](const Concept& x) {
    if (x.is(ConceptKind::DataSome)) out.push_back(x.name());
  });
}

}  // namespace dlkb
