#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dlkb/concept.hpp"
#include "dlkb/decimal.hpp"

namespace dlkb {

using Element = std::size_t;
using Extension = std::set<Element>;

// Finite interpretation over the domain {0, ..., domain_size - 1}.
struct FiniteInterpretation {
  std::size_t domain_size = 1;
  std::map<std::string, Extension> concepts;
  std::map<std::string, std::set<std::pair<Element, Element>>> roles;
  std::map<std::string, Element> individuals;
  // Optional data valuation; a data property absent here has no values.
  std::map<std::string, std::multimap<Element, Decimal>> data;
};

// The model-theoretic semantics, computed literally. Throws UnmappedName
// when c mentions a concept, role or individual that i does not map.
Extension evaluate(const Concept& c, const FiniteInterpretation& i);

}  // namespace dlkb
