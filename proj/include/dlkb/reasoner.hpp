#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "dlkb/concept.hpp"
#include "dlkb/knowledge_base.hpp"
#include "dlkb/taxonomy.hpp"

namespace dlkb {

struct ReasonerOptions {
  std::size_t node_budget = 100000;  // per satisfiability test
  int threads = 0;                   // 0: OpenMP default
};

struct QueryAnswer {
  std::set<std::string> equivalents;
  std::set<std::string> direct_subclasses;
  std::set<std::string> all_subclasses;
  std::set<std::string> direct_superclasses;
  std::set<std::string> instances;
};

using Realization = std::map<std::string, std::set<std::string>>;

// Tableau reasoner bound to one knowledge base snapshot. The snapshot is
// copied; all member functions are safe to call from several threads.
class Reasoner {
 public:
  explicit Reasoner(KnowledgeBase kb, ReasonerOptions options = {});
  ~Reasoner();
  Reasoner(const Reasoner&) = delete;
  Reasoner& operator=(const Reasoner&) = delete;

  const KnowledgeBase& kb() const;

  bool is_consistent() const;
  // On an inconsistent KB every concept is unsatisfiable; these two report
  // that rather than throwing.
  bool is_satisfiable(const Concept& c) const;
  bool subsumes(const Concept& super, const Concept& sub) const;

  // The remaining services throw InconsistentKb on an inconsistent KB.
  bool is_instance(const std::string& individual, const Concept& c) const;
  std::set<std::string> instances_of(const Concept& c) const;

  // Pairwise subsumption matrix in parallel, then transitive reduction.
  // The result is cached.
  const Taxonomy& classify() const;
  // Serial top-down/bottom-up insertion seeded with told subsumers.
  Taxonomy classify_reference() const;

  // Most specific named classes per individual, one name per equivalence
  // group (the alphabetically first). Individuals whose only type is Thing
  // map to an empty set.
  Realization realize() const;
  Realization realize_reference() const;

  QueryAnswer dl_query(const Concept& c) const;

  // Satisfiability tests run so far, for benchmarks and tests.
  std::size_t tests_run() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

bool is_satisfiable(const Concept& c, const KnowledgeBase& kb);
bool is_consistent(const KnowledgeBase& kb);
bool subsumes(const Concept& super, const Concept& sub, const KnowledgeBase& kb);
Taxonomy classify(const KnowledgeBase& kb);
Realization realize(const KnowledgeBase& kb);
std::set<std::string> instances_of(const Concept& c, const KnowledgeBase& kb);
QueryAnswer dl_query(const Concept& c, const KnowledgeBase& kb);

}  // namespace dlkb
