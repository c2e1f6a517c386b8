#include "dlkb/reasoner.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <vector>

#include "dlkb/errors.hpp"
#include "pool.hpp"
#include "tableau.hpp"

namespace dlkb {

namespace {

// OpenMP regions must not leak exceptions; the first one is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  std::exception_ptr failure;
  std::mutex m;
  const int t = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(t)
  for (std::size_t i = 0; i < n; ++i) {
    {
      std::lock_guard lock(m);
      if (failure) continue;
    }
    try {
      body(i);
    } catch (...) {
      std::lock_guard lock(m);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

struct Reasoner::Impl {
  KnowledgeBase kb;
  ReasonerOptions options;
  detail::TBoxIndex index;
  detail::AboxIndex abox;
  std::vector<std::string> names;
  std::vector<std::string> individuals;
  std::vector<std::set<std::string>> told;  // by position in names

  std::once_flag consistency_once;
  bool consistent = false;
  std::once_flag taxonomy_once;
  Taxonomy taxonomy;
  std::atomic<std::size_t> tests{0};

  Impl(KnowledgeBase k, ReasonerOptions o)
      : kb(std::move(k)), options(o), index(kb),
        names(kb.concept_names().begin(), kb.concept_names().end()),
        individuals(kb.individual_names().begin(), kb.individual_names().end()) {
    auto& pool = index.pool;
    for (const auto& a : kb.abox()) {
      std::visit([&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ClassAssertion>) {
          abox.types.emplace_back(pool.individual(x.individual), pool.intern(x.cls));
        } else if constexpr (std::is_same_v<T, RoleAssertion>) {
          abox.roles.emplace_back(pool.role(x.role.name, x.role.inverted),
                                  pool.individual(x.subject), pool.individual(x.object));
        } else if constexpr (std::is_same_v<T, DataAssertion>) {
          abox.data.emplace_back(pool.data_property(x.property), pool.individual(x.individual),
                                 x.value);
        } else if constexpr (std::is_same_v<T, SameAs>) {
          abox.same.emplace_back(pool.individual(x.a), pool.individual(x.b));
        } else {
          abox.different.emplace_back(pool.individual(x.a), pool.individual(x.b));
        }
      }, a);
    }
    told.reserve(names.size());
    for (const auto& n : names) told.push_back(told_subsumers(n, kb));
  }

  // Satisfiability of the ABox plus an anonymous instance of c (if any) plus
  // extra asserted on individual (if any).
  bool test(const Concept* c, const std::string* individual = nullptr,
            const Concept* extra = nullptr) {
    ++tests;
    detail::ConceptPool pool = index.pool;
    const int query = c ? pool.intern(*c) : -1;
    const int ind = individual ? pool.individual(*individual) : -1;
    const int more = extra ? pool.intern(*extra) : -1;
    detail::Tableau t(index, abox, pool, options.node_budget);
    return t.satisfiable(query, ind, more);
  }

  bool is_consistent() {
    std::call_once(consistency_once, [&] { consistent = test(nullptr); });
    return consistent;
  }

  void require_consistent() {
    if (!is_consistent()) throw InconsistentKb();
  }

  bool satisfiable(const Concept& c) { return is_consistent() && test(&c); }

  bool subsumes(const Concept& super, const Concept& sub) {
    if (super.is(ConceptKind::Top) || super == sub) return true;
    return !satisfiable(Concept::conjunction({sub, Concept::negation(super)}));
  }

  bool is_instance(const std::string& individual, const Concept& c) {
    require_consistent();
    const Concept negated = Concept::negation(c);
    return !test(nullptr, &individual, &negated);
  }

  bool told_below(std::size_t i, const std::string& super) const {
    return told[i].contains(super);
  }

  std::size_t position(const std::string& name) const {
    return std::lower_bound(names.begin(), names.end(), name) - names.begin();
  }

  const Taxonomy& classify();
  Taxonomy classify_reference();
};

const Taxonomy& Reasoner::Impl::classify() {
  require_consistent();
  std::call_once(taxonomy_once, [&] {
    const std::size_t n = names.size();
    std::vector<char> unsat(n, 0), top(n, 0);
    parallel_for(n, options.threads, [&](std::size_t i) {
      const Concept a = Concept::atomic(names[i]);
      unsat[i] = !satisfiable(a);
      top[i] = !unsat[i] && subsumes(a, Concept::top());
    });
    std::vector<std::vector<char>> below(n, std::vector<char>(n, 0));
    parallel_for(n, options.threads, [&](std::size_t i) {
      if (unsat[i]) return;
      const Concept sub = Concept::atomic(names[i]);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || unsat[j]) continue;
        below[i][j] = top[j] || told_below(i, names[j]) ||
                      subsumes(Concept::atomic(names[j]), sub);
      }
    });
    std::vector<bool> u(unsat.begin(), unsat.end()), t(top.begin(), top.end());
    std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) rel[i][j] = i == j || below[i][j];
    }
    taxonomy = Taxonomy::from_relation(names, u, rel, t);
  });
  return taxonomy;
}

Taxonomy Reasoner::Impl::classify_reference() {
  require_consistent();
  Taxonomy t;
  auto concept_of = [&](std::size_t node) {
    return node == Taxonomy::kTop ? Concept::top()
                                  : Concept::atomic(*t.nodes()[node].names.begin());
  };

  // Roughly top-down: fewer told subsumers first.
  std::vector<std::size_t> order(names.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return told[a].size() < told[b].size();
  });

  for (std::size_t i : order) {
    const std::string& name = names[i];
    const Concept a = Concept::atomic(name);
    if (!satisfiable(a)) {
      t.add_name(Taxonomy::kBottom, name);
      continue;
    }
    if (subsumes(a, Concept::top())) {
      t.add_name(Taxonomy::kTop, name);
      continue;
    }
    // a ⊑ node?
    auto below = [&](std::size_t node) {
      if (node == Taxonomy::kTop) return true;
      const std::string& rep = *t.nodes()[node].names.begin();
      return told_below(i, rep) || subsumes(Concept::atomic(rep), a);
    };

    std::map<std::size_t, bool> upper;
    std::set<std::size_t> parents, expanded;
    std::function<void(std::size_t)> search = [&](std::size_t node) {
      if (!expanded.insert(node).second) return;
      bool deeper = false;
      for (std::size_t c : t.nodes()[node].children) {
        if (c == Taxonomy::kBottom) continue;
        auto it = upper.find(c);
        if (it == upper.end()) it = upper.emplace(c, below(c)).first;
        if (it->second) {
          deeper = true;
          search(c);
        }
      }
      if (!deeper) parents.insert(node);
    };
    search(Taxonomy::kTop);

    bool merged = false;
    for (std::size_t p : parents) {
      if (p != Taxonomy::kTop && subsumes(a, concept_of(p))) {
        t.add_name(p, name);
        merged = true;
        break;
      }
    }
    if (merged) continue;

    // Bottom search among common descendants of the parents.
    std::optional<std::set<std::size_t>> common;
    for (std::size_t p : parents) {
      std::set<std::size_t> d = t.descendants(p);
      d.erase(Taxonomy::kBottom);
      if (!common) {
        common = std::move(d);
      } else {
        std::set<std::size_t> keep;
        std::set_intersection(common->begin(), common->end(), d.begin(), d.end(),
                              std::inserter(keep, keep.begin()));
        common = std::move(keep);
      }
    }
    std::set<std::size_t> lower;
    for (std::size_t d : *common) {
      if (subsumes(a, concept_of(d))) lower.insert(d);
    }
    std::set<std::size_t> children;
    for (std::size_t d : lower) {
      const auto up = t.ancestors(d);
      if (std::none_of(up.begin(), up.end(), [&](std::size_t x) { return lower.contains(x); })) {
        children.insert(d);
      }
    }

    const std::size_t node = t.add_node({name});
    for (std::size_t p : parents) {
      t.link(p, node);
      t.unlink(p, Taxonomy::kBottom);
      for (std::size_t c : children) t.unlink(p, c);
    }
    for (std::size_t c : children) t.link(node, c);
    if (children.empty()) t.link(node, Taxonomy::kBottom);
  }
  return t;
}

Reasoner::Reasoner(KnowledgeBase kb, ReasonerOptions options)
    : impl_(std::make_unique<Impl>(std::move(kb), options)) {}

Reasoner::~Reasoner() = default;

const KnowledgeBase& Reasoner::kb() const { return impl_->kb; }

bool Reasoner::is_consistent() const { return impl_->is_consistent(); }

bool Reasoner::is_satisfiable(const Concept& c) const { return impl_->satisfiable(c); }

bool Reasoner::subsumes(const Concept& super, const Concept& sub) const {
  return impl_->subsumes(super, sub);
}

bool Reasoner::is_instance(const std::string& individual, const Concept& c) const {
  return impl_->is_instance(individual, c);
}

std::set<std::string> Reasoner::instances_of(const Concept& c) const {
  impl_->require_consistent();
  const auto& inds = impl_->individuals;
  std::vector<char> hit(inds.size(), 0);
  parallel_for(inds.size(), impl_->options.threads,
               [&](std::size_t i) { hit[i] = impl_->is_instance(inds[i], c); });
  std::set<std::string> out;
  for (std::size_t i = 0; i < inds.size(); ++i) {
    if (hit[i]) out.insert(inds[i]);
  }
  return out;
}

const Taxonomy& Reasoner::classify() const { return impl_->classify(); }

Taxonomy Reasoner::classify_reference() const { return impl_->classify_reference(); }

Realization Reasoner::realize() const {
  const Taxonomy& t = classify();
  const auto& inds = impl_->individuals;
  std::vector<std::set<std::string>> types(inds.size());
  parallel_for(inds.size(), impl_->options.threads, [&](std::size_t i) {
    std::map<std::size_t, bool> holds;
    std::function<void(std::size_t)> descend = [&](std::size_t node) {
      for (std::size_t c : t.nodes()[node].children) {
        if (c == Taxonomy::kBottom || holds.contains(c)) continue;
        const bool yes =
            impl_->is_instance(inds[i], Concept::atomic(*t.nodes()[c].names.begin()));
        holds[c] = yes;
        if (yes) descend(c);
      }
    };
    descend(Taxonomy::kTop);
    for (const auto& [node, yes] : holds) {
      if (!yes) continue;
      const auto& kids = t.nodes()[node].children;
      bool specific = std::none_of(kids.begin(), kids.end(), [&](std::size_t c) {
        auto it = holds.find(c);
        return it != holds.end() && it->second;
      });
      if (specific) types[i].insert(*t.nodes()[node].names.begin());
    }
  });
  Realization out;
  for (std::size_t i = 0; i < inds.size(); ++i) out[inds[i]] = std::move(types[i]);
  return out;
}

Realization Reasoner::realize_reference() const {
  impl_->require_consistent();
  Realization out;
  for (const auto& ind : impl_->individuals) {
    std::vector<std::string> types;
    for (const auto& name : impl_->names) {
      if (impl_->is_instance(ind, Concept::atomic(name))) types.push_back(name);
    }
    auto& keep = out[ind];
    for (const auto& a : types) {
      const Concept ca = Concept::atomic(a);
      bool drop = false;
      for (const auto& b : types) {
        if (a == b) continue;
        const Concept cb = Concept::atomic(b);
        const bool b_below = subsumes(ca, cb);
        const bool a_below = subsumes(cb, ca);
        // A strictly more specific type, or an equivalent one that sorts first.
        if ((b_below && !a_below) || (b_below && a_below && b < a)) {
          drop = true;
          break;
        }
      }
      if (!drop) keep.insert(a);
    }
  }
  return out;
}

QueryAnswer Reasoner::dl_query(const Concept& c) const {
  impl_->require_consistent();
  const Taxonomy& t = classify();
  const bool sat = is_satisfiable(c);
  const auto& names = impl_->names;
  const std::size_t n = names.size();
  std::vector<char> sub(n, 0), sup(n, 0), bottom(n, 0);
  parallel_for(n, impl_->options.threads, [&](std::size_t i) {
    bottom[i] = t.node_of(names[i]) == Taxonomy::kBottom;
    const Concept a = Concept::atomic(names[i]);
    sub[i] = bottom[i] || (sat && impl_->subsumes(c, a));
    sup[i] = !sat || impl_->subsumes(a, c);
  });

  QueryAnswer q;
  if (c.is(ConceptKind::Atomic)) q.equivalents.insert(c.name());
  std::vector<std::string> strict_sub, strict_sup;
  for (std::size_t i = 0; i < n; ++i) {
    if (sub[i] && sup[i]) {
      q.equivalents.insert(names[i]);
      if (!sat) q.all_subclasses.insert(names[i]);
    } else if (sub[i] && !bottom[i]) {
      q.all_subclasses.insert(names[i]);
      strict_sub.push_back(names[i]);
    } else if (sup[i] && !sub[i]) {
      strict_sup.push_back(names[i]);
    }
  }
  auto strictly_below = [&](const std::string& x, const std::string& y) {
    return t.is_subclass(x, y) && !t.is_subclass(y, x);
  };
  for (const auto& a : strict_sub) {
    if (std::none_of(strict_sub.begin(), strict_sub.end(),
                     [&](const std::string& b) { return strictly_below(a, b); })) {
      q.direct_subclasses.insert(a);
    }
  }
  for (const auto& a : strict_sup) {
    if (std::none_of(strict_sup.begin(), strict_sup.end(),
                     [&](const std::string& b) { return strictly_below(b, a); })) {
      q.direct_superclasses.insert(a);
    }
  }
  if (sat) q.instances = instances_of(c);
  return q;
}

std::size_t Reasoner::tests_run() const { return impl_->tests.load(); }

bool is_satisfiable(const Concept& c, const KnowledgeBase& kb) {
  return Reasoner(kb).is_satisfiable(c);
}
bool is_consistent(const KnowledgeBase& kb) { return Reasoner(kb).is_consistent(); }
bool subsumes(const Concept& super, const Concept& sub, const KnowledgeBase& kb) {
  return Reasoner(kb).subsumes(super, sub);
}
Taxonomy classify(const KnowledgeBase& kb) { return Reasoner(kb).classify(); }
Realization realize(const KnowledgeBase& kb) { return Reasoner(kb).realize(); }
std::set<std::string> instances_of(const Concept& c, const KnowledgeBase& kb) {
  return Reasoner(kb).instances_of(c);
}
QueryAnswer dl_query(const Concept& c, const KnowledgeBase& kb) {
  return Reasoner(kb).dl_query(c);
}

}  // namespace dlkb
