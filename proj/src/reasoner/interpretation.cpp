#include "dlkb/interpretation.hpp"

#include <algorithm>

#include "dlkb/errors.hpp"

namespace dlkb {

namespace {

const std::set<std::pair<Element, Element>>& role_ext(const FiniteInterpretation& i,
                                                      const RoleExpr& r) {
  auto it = i.roles.find(r.name);
  if (it == i.roles.end()) throw UnmappedName("unmapped role '" + r.name + "'");
  return it->second;
}

Element individual(const FiniteInterpretation& i, const std::string& name) {
  auto it = i.individuals.find(name);
  if (it == i.individuals.end()) throw UnmappedName("unmapped individual '" + name + "'");
  return it->second;
}

// Successors of x along r, honouring inversion.
std::vector<Element> successors(const std::set<std::pair<Element, Element>>& ext,
                                bool inverted, Element x) {
  std::vector<Element> out;
  for (const auto& [a, b] : ext) {
    if (!inverted && a == x) out.push_back(b);
    if (inverted && b == x) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Extension domain(const FiniteInterpretation& i) {
  Extension all;
  for (Element x = 0; x < i.domain_size; ++x) all.insert(x);
  return all;
}

}  // namespace

Extension evaluate(const Concept& c, const FiniteInterpretation& i) {
  switch (c.kind()) {
    case ConceptKind::Top:
      return domain(i);
    case ConceptKind::Bottom:
      return {};
    case ConceptKind::Atomic: {
      auto it = i.concepts.find(c.name());
      if (it == i.concepts.end()) throw UnmappedName("unmapped concept '" + c.name() + "'");
      return it->second;
    }
    case ConceptKind::Not: {
      Extension inner = evaluate(c.child(), i);
      Extension out;
      for (Element x = 0; x < i.domain_size; ++x) {
        if (!inner.contains(x)) out.insert(x);
      }
      return out;
    }
    case ConceptKind::And: {
      Extension out = domain(i);
      for (const Concept& op : c.operands()) {
        Extension e = evaluate(op, i);
        std::erase_if(out, [&](Element x) { return !e.contains(x); });
      }
      return out;
    }
    case ConceptKind::Or: {
      Extension out;
      for (const Concept& op : c.operands()) out.merge(evaluate(op, i));
      return out;
    }
    case ConceptKind::Exists:
    case ConceptKind::ForAll: {
      const auto& ext = role_ext(i, c.role());
      Extension filler = evaluate(c.child(), i);
      bool exists = c.is(ConceptKind::Exists);
      Extension out;
      for (Element x = 0; x < i.domain_size; ++x) {
        auto succ = successors(ext, c.role().inverted, x);
        bool hit = exists ? std::any_of(succ.begin(), succ.end(),
                                        [&](Element y) { return filler.contains(y); })
                          : std::all_of(succ.begin(), succ.end(),
                                        [&](Element y) { return filler.contains(y); });
        if (hit) out.insert(x);
      }
      return out;
    }
    case ConceptKind::AtLeast:
    case ConceptKind::AtMost: {
      const auto& ext = role_ext(i, c.role());
      Extension out;
      for (Element x = 0; x < i.domain_size; ++x) {
        std::size_t n = successors(ext, c.role().inverted, x).size();
        bool hit = c.is(ConceptKind::AtLeast) ? n >= c.cardinality() : n <= c.cardinality();
        if (hit) out.insert(x);
      }
      return out;
    }
    case ConceptKind::HasValue: {
      const auto& ext = role_ext(i, c.role());
      Element target = individual(i, c.name());
      Extension out;
      for (Element x = 0; x < i.domain_size; ++x) {
        auto succ = successors(ext, c.role().inverted, x);
        if (std::binary_search(succ.begin(), succ.end(), target)) out.insert(x);
      }
      return out;
    }
    case ConceptKind::OneOf: {
      Extension out;
      for (const auto& name : c.individuals()) out.insert(individual(i, name));
      return out;
    }
    case ConceptKind::DataSome: {
      Extension out;
      auto it = i.data.find(c.name());
      if (it == i.data.end()) return out;
      for (const auto& [x, value] : it->second) {
        if (x < i.domain_size && c.range().contains(value)) out.insert(x);
      }
      return out;
    }
  }
  return {};
}

}  // namespace dlkb
