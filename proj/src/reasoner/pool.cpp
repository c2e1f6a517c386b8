#include "pool.hpp"

#include <algorithm>
#include <functional>

namespace dlkb::detail {

ConceptPool::ConceptPool() {
  make(Entry{Kind::Top});
  make(Entry{Kind::Bottom});
  complement_[0] = 1;
  complement_[1] = 0;
}

std::string ConceptPool::key(const Entry& e) const {
  std::string k;
  k.reserve(32);
  auto put = [&](long v) {
    k += std::to_string(v);
    k += ',';
  };
  put(static_cast<int>(e.kind));
  put(e.name);
  put(e.role);
  put(e.n);
  k += '[';
  for (int c : e.kids) put(c);
  k += '|';
  for (int i : e.individuals) put(i);
  k += '|';
  auto facet = [&](const std::optional<Decimal>& d) { k += d ? d->to_string() : "-"; k += ','; };
  facet(e.range.min_inclusive);
  facet(e.range.min_exclusive);
  facet(e.range.max_inclusive);
  facet(e.range.max_exclusive);
  return k;
}

int ConceptPool::make(Entry e) {
  // Light normalisation of n-ary nodes: unit elements dropped, absorbing
  // elements short-circuit, duplicates removed, singletons collapse.
  if (e.kind == Kind::And || e.kind == Kind::Or) {
    const bool conj = e.kind == Kind::And;
    const int unit = conj ? top() : bottom();
    const int zero = conj ? bottom() : top();
    std::vector<int> kids;
    for (int c : e.kids) {
      if (c == zero) return zero;
      if (c == unit) continue;
      const Entry& sub = entries_[c];
      if (sub.kind == e.kind) {  // flatten
        for (int g : sub.kids) {
          if (std::find(kids.begin(), kids.end(), g) == kids.end()) kids.push_back(g);
        }
        continue;
      }
      if (std::find(kids.begin(), kids.end(), c) == kids.end()) kids.push_back(c);
    }
    if (kids.empty()) return unit;
    if (kids.size() == 1) return kids[0];
    e.kids = std::move(kids);
  }
  std::string k = key(e);
  auto it = index_.find(k);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(entries_.size());
  entries_.push_back(std::move(e));
  complement_.push_back(-1);
  index_.emplace(std::move(k), id);
  return id;
}

namespace {

template <class Map>
int lookup_or_add(Map& ids, std::vector<std::string>& names, const std::string& name) {
  auto it = ids.find(name);
  if (it != ids.end()) return it->second;
  int id = static_cast<int>(names.size());
  names.push_back(name);
  ids.emplace(name, id);
  return id;
}

}  // namespace

int ConceptPool::atom(const std::string& name) { return lookup_or_add(atom_ids_, atoms_, name); }
int ConceptPool::role(const std::string& name, bool inverted) {
  return 2 * lookup_or_add(role_ids_, roles_, name) + (inverted ? 1 : 0);
}
int ConceptPool::individual(const std::string& name) {
  return lookup_or_add(individual_ids_, individuals_, name);
}
int ConceptPool::data_property(const std::string& name) {
  return lookup_or_add(data_ids_, data_, name);
}

std::optional<int> ConceptPool::find_individual(const std::string& name) const {
  auto it = individual_ids_.find(name);
  if (it == individual_ids_.end()) return std::nullopt;
  return it->second;
}

int ConceptPool::intern(const Concept& c, bool negated) {
  auto pair = [&](Entry pos, Entry neg) {
    int p = make(std::move(pos));
    int q = make(std::move(neg));
    complement_[p] = q;
    complement_[q] = p;
    return negated ? q : p;
  };
  switch (c.kind()) {
    case ConceptKind::Top:
      return negated ? bottom() : top();
    case ConceptKind::Bottom:
      return negated ? top() : bottom();
    case ConceptKind::Atomic: {
      int a = atom(c.name());
      return pair(Entry{Kind::Atom, a}, Entry{Kind::NotAtom, a});
    }
    case ConceptKind::Not:
      return intern(c.child(), !negated);
    case ConceptKind::And:
    case ConceptKind::Or: {
      Entry e;
      e.kind = (c.is(ConceptKind::And) != negated) ? Kind::And : Kind::Or;
      for (const Concept& op : c.operands()) e.kids.push_back(intern(op, negated));
      return make(std::move(e));
    }
    case ConceptKind::Exists:
    case ConceptKind::ForAll: {
      Entry e;
      e.kind = (c.is(ConceptKind::Exists) != negated) ? Kind::Exists : Kind::ForAll;
      e.role = role(c.role().name, c.role().inverted);
      e.kids = {intern(c.child(), negated)};
      return make(std::move(e));
    }
    case ConceptKind::AtLeast:
    case ConceptKind::AtMost: {
      Entry e;
      e.role = role(c.role().name, c.role().inverted);
      const bool at_least = c.is(ConceptKind::AtLeast) != negated;
      unsigned n = c.cardinality();
      if (c.is(ConceptKind::AtLeast) && negated) {
        if (n == 0) return bottom();
        n -= 1;
      } else if (c.is(ConceptKind::AtMost) && negated) {
        n += 1;
      }
      if (at_least && n == 0) return top();
      e.kind = at_least ? Kind::AtLeast : Kind::AtMost;
      e.n = n;
      return make(std::move(e));
    }
    case ConceptKind::HasValue: {
      int r = role(c.role().name, c.role().inverted);
      int a = individual(c.name());
      if (!negated) {
        Entry e{Kind::HasValue, a, r};
        return make(std::move(e));
      }
      Entry not_a{Kind::NotOneOf};
      not_a.individuals = {a};
      Entry e{Kind::ForAll, -1, r};
      e.kids = {make(std::move(not_a))};
      return make(std::move(e));
    }
    case ConceptKind::OneOf: {
      Entry pos{Kind::OneOf}, neg{Kind::NotOneOf};
      for (const auto& name : c.individuals()) pos.individuals.push_back(individual(name));
      std::sort(pos.individuals.begin(), pos.individuals.end());
      pos.individuals.erase(std::unique(pos.individuals.begin(), pos.individuals.end()),
                            pos.individuals.end());
      neg.individuals = pos.individuals;
      return pair(std::move(pos), std::move(neg));
    }
    case ConceptKind::DataSome: {
      int p = data_property(c.name());
      Entry pos{Kind::DataSome, p}, neg{Kind::NotDataSome, p};
      pos.range = c.range();
      neg.range = c.range();
      return pair(std::move(pos), std::move(neg));
    }
  }
  return top();
}

int ConceptPool::negate(int id) {
  if (complement_[id] >= 0) return complement_[id];
  Entry e = entries_[id];  // copy: make() may reallocate
  int out = -1;
  switch (e.kind) {
    case Kind::Top: out = bottom(); break;
    case Kind::Bottom: out = top(); break;
    case Kind::Atom: out = make(Entry{Kind::NotAtom, e.name}); break;
    case Kind::NotAtom: out = make(Entry{Kind::Atom, e.name}); break;
    case Kind::And:
    case Kind::Or: {
      Entry n{e.kind == Kind::And ? Kind::Or : Kind::And};
      for (int k : e.kids) n.kids.push_back(negate(k));
      out = make(std::move(n));
      break;
    }
    case Kind::Exists:
    case Kind::ForAll: {
      Entry n{e.kind == Kind::Exists ? Kind::ForAll : Kind::Exists, -1, e.role};
      n.kids = {negate(e.kids[0])};
      out = make(std::move(n));
      break;
    }
    case Kind::AtLeast:
      out = make(Entry{Kind::AtMost, -1, e.role, e.n - 1});
      break;
    case Kind::AtMost:
      out = make(Entry{Kind::AtLeast, -1, e.role, e.n + 1});
      break;
    case Kind::HasValue: {
      Entry not_a{Kind::NotOneOf};
      not_a.individuals = {e.name};
      Entry n{Kind::ForAll, -1, e.role};
      n.kids = {make(std::move(not_a))};
      out = make(std::move(n));
      break;
    }
    case Kind::OneOf:
    case Kind::NotOneOf: {
      Entry n{e.kind == Kind::OneOf ? Kind::NotOneOf : Kind::OneOf};
      n.individuals = e.individuals;
      out = make(std::move(n));
      break;
    }
    case Kind::DataSome:
    case Kind::NotDataSome: {
      Entry n{e.kind == Kind::DataSome ? Kind::NotDataSome : Kind::DataSome, e.name};
      n.range = e.range;
      out = make(std::move(n));
      break;
    }
  }
  complement_[id] = out;
  if (complement_[out] < 0) complement_[out] = id;
  return out;
}

// ---- TBox index -------------------------------------------------------------

namespace {

struct Gci {
  Concept sub;
  Concept super;
};

void split_or(const Concept& sub, const Concept& super, std::vector<Gci>& out) {
  if (sub.is(ConceptKind::Or)) {
    for (const Concept& op : sub.operands()) split_or(op, super, out);
  } else {
    out.push_back({sub, super});
  }
}

}  // namespace

TBoxIndex::TBoxIndex(const KnowledgeBase& kb) {
  for (const auto& name : kb.concept_names()) pool.intern(Concept::atomic(name));
  for (const auto& name : kb.role_names()) pool.role(name, false);
  for (const auto& name : kb.individual_names()) pool.individual(name);
  for (const auto& name : kb.data_property_names()) pool.data_property(name);
  // Data properties used only inside concepts are declared too.
  for (const auto& ax : kb.tbox()) {
    std::visit([&](const auto& a) {
      using T = std::decay_t<decltype(a)>;
      if constexpr (std::is_same_v<T, SubClassOf>) {
        pool.intern(a.sub);
        pool.intern(a.super);
      } else if constexpr (std::is_same_v<T, EquivalentClasses>) {
        pool.intern(a.a);
        pool.intern(a.b);
      }
    }, ax);
  }

  const std::size_t literals = 2 * pool.role_count();
  supers.assign(literals, {});
  for (const SubRole& s : kb.rbox().closure(kb.role_names())) {
    supers[pool.role(s.sub.name, s.sub.inverted)].push_back(
        pool.role(s.super.name, s.super.inverted));
  }
  for (std::size_t lit = 0; lit < literals; ++lit) {
    auto& v = supers[lit];
    v.push_back(static_cast<int>(lit));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  transitive.assign(literals, false);
  for (const auto& name : kb.rbox().transitive) {
    int lit = pool.role(name, false);
    transitive[lit] = transitive[lit + 1] = true;
  }
  trans_below.assign(literals, {});
  for (std::size_t s = 0; s < literals; ++s) {
    if (!transitive[s]) continue;
    for (int r : supers[s]) trans_below[r].push_back(static_cast<int>(s));
  }
  functional_data.assign(kb.data_property_names().size() + 1, false);
  for (const auto& p : kb.functional_data_properties()) {
    int id = pool.data_property(p);
    if (static_cast<std::size_t>(id) >= functional_data.size()) functional_data.resize(id + 1);
    functional_data[id] = true;
  }

  domain.assign(literals, {});
  for (const Concept& g : kb.rbox().global_restrictions()) {
    // ≤ 1 r only constrains nodes that have an r-neighbour.
    domain[pool.role(g.role().name, g.role().inverted)].push_back(pool.intern(g));
  }

  // ---- lazy unfolding candidates
  const std::size_t atoms = pool.atom_count();
  unfold_pos.assign(atoms, {});
  unfold_neg.assign(atoms, {});
  fully_defined.assign(atoms, false);

  std::vector<int> lhs_count(atoms, 0);
  auto count_lhs = [&](const Concept& sub, const Concept& super) {
    std::vector<Gci> parts;
    split_or(sub, super, parts);
    for (const Gci& g : parts) {
      if (g.sub.is(ConceptKind::Atomic)) ++lhs_count[pool.atom(g.sub.name())];
    }
  };
  for (const auto& ax : kb.tbox()) {
    if (const auto* s = std::get_if<SubClassOf>(&ax)) {
      count_lhs(s->sub, s->super);
    } else if (const auto* e = std::get_if<EquivalentClasses>(&ax)) {
      count_lhs(e->a, e->b);
      count_lhs(e->b, e->a);
    }
  }

  // Definition chosen per atom: index of the axiom and the defining side.
  std::vector<int> def_axiom(atoms, -1);
  std::vector<Concept> definition(atoms, Concept::top());
  for (std::size_t i = 0; i < kb.tbox().size(); ++i) {
    const auto* e = std::get_if<EquivalentClasses>(&kb.tbox()[i]);
    if (e == nullptr || e->a == e->b) continue;
    auto try_define = [&](const Concept& side, const Concept& other) {
      if (!side.is(ConceptKind::Atomic)) return false;
      int a = pool.atom(side.name());
      if (lhs_count[a] != 1 || def_axiom[a] >= 0) return false;
      def_axiom[a] = static_cast<int>(i);
      definition[a] = other;
      return true;
    };
    if (!try_define(e->a, e->b)) try_define(e->b, e->a);
  }

  // Definitions must be acyclic among themselves.
  std::vector<std::vector<int>> deps(atoms);
  for (std::size_t a = 0; a < atoms; ++a) {
    if (def_axiom[a] < 0) continue;
    std::vector<std::string> names;
    collect_concept_names(definition[a], names);
    for (const auto& n : names) deps[a].push_back(pool.atom(n));
  }
  std::vector<int> state(atoms, 0);  // 0 new, 1 on stack, 2 done
  std::vector<bool> cyclic(atoms, false);
  std::vector<int> stack;
  std::function<void(int)> dfs = [&](int a) {
    state[a] = 1;
    stack.push_back(a);
    for (int b : deps[a]) {
      if (static_cast<std::size_t>(b) >= atoms || def_axiom[b] < 0) continue;
      if (state[b] == 1) {
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
          cyclic[*it] = true;
          if (*it == b) break;
        }
      } else if (state[b] == 0) {
        dfs(b);
      }
    }
    stack.pop_back();
    state[a] = 2;
  };
  for (std::size_t a = 0; a < atoms; ++a) {
    if (def_axiom[a] >= 0 && state[a] == 0) dfs(static_cast<int>(a));
  }
  std::vector<bool> consumed(kb.tbox().size(), false);
  for (std::size_t a = 0; a < atoms; ++a) {
    if (def_axiom[a] < 0 || cyclic[a]) continue;
    fully_defined[a] = true;
    consumed[def_axiom[a]] = true;
    unfold_pos[a].push_back(pool.intern(definition[a]));
    unfold_neg[a].push_back(pool.intern(definition[a], true));
  }

  // ---- absorption of everything else
  std::vector<Gci> gcis;
  for (std::size_t i = 0; i < kb.tbox().size(); ++i) {
    if (consumed[i]) continue;
    const auto& ax = kb.tbox()[i];
    if (const auto* s = std::get_if<SubClassOf>(&ax)) {
      split_or(s->sub, s->super, gcis);
    } else if (const auto* e = std::get_if<EquivalentClasses>(&ax)) {
      split_or(e->a, e->b, gcis);
      split_or(e->b, e->a, gcis);
    }
  }
  for (const Gci& g : gcis) {
    const Concept& c = g.sub;
    if (c.is(ConceptKind::Bottom) || g.super.is(ConceptKind::Top)) continue;
    if (c.is(ConceptKind::Top)) {
      if (g.super.is(ConceptKind::ForAll)) {
        // Range: ⊤ ⊑ ∀r.X is ∃r⁻.⊤ ⊑ X.
        int lit = pool.role(g.super.role().name, !g.super.role().inverted);
        domain[lit].push_back(pool.intern(g.super.child()));
      } else {
        global.push_back(pool.intern(g.super));
      }
      continue;
    }
    if (c.is(ConceptKind::Atomic)) {
      unfold_pos[pool.atom(c.name())].push_back(pool.intern(g.super));
      continue;
    }
    if (c.is(ConceptKind::Exists) && c.child().is(ConceptKind::Top)) {
      domain[pool.role(c.role().name, c.role().inverted)].push_back(pool.intern(g.super));
      continue;
    }
    if (c.is(ConceptKind::And)) {
      const auto& ops = c.operands();
      auto target = std::find_if(ops.begin(), ops.end(), [&](const Concept& op) {
        return op.is(ConceptKind::Atomic) && !fully_defined[pool.atom(op.name())];
      });
      if (target != ops.end()) {
        std::vector<Concept> rest;
        for (auto it = ops.begin(); it != ops.end(); ++it) {
          if (it != target) rest.push_back(*it);
        }
        Concept body = Concept::disjunction(
            {Concept::negation(Concept::conjunction(std::move(rest))), g.super});
        unfold_pos[pool.atom(target->name())].push_back(pool.intern(body));
        continue;
      }
    }
    global.push_back(pool.intern(Concept::disjunction({Concept::negation(c), g.super})));
  }
}

const std::vector<int>& TBoxIndex::supers_of(int lit, std::vector<int>& scratch) const {
  if (static_cast<std::size_t>(lit) < supers.size()) return supers[lit];
  scratch = {lit};
  return scratch;
}

const std::vector<int>* TBoxIndex::trans_below_of(int lit) const {
  if (static_cast<std::size_t>(lit) < trans_below.size()) return &trans_below[lit];
  return nullptr;
}

const std::vector<int>* TBoxIndex::domain_of(int lit) const {
  if (static_cast<std::size_t>(lit) < domain.size()) return &domain[lit];
  return nullptr;
}

bool TBoxIndex::is_transitive(int lit) const {
  return static_cast<std::size_t>(lit) < transitive.size() && transitive[lit];
}

bool TBoxIndex::is_functional_data(int prop) const {
  return static_cast<std::size_t>(prop) < functional_data.size() && functional_data[prop];
}

const std::vector<int>* TBoxIndex::unfold(int atom, bool negative) const {
  const auto& table = negative ? unfold_neg : unfold_pos;
  if (static_cast<std::size_t>(atom) < table.size()) return &table[atom];
  return nullptr;
}

}  // namespace dlkb::detail
