#include "tableau.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "dlkb/datatype.hpp"
#include "dlkb/errors.hpp"

namespace dlkb::detail {

Tableau::Tableau(const TBoxIndex& index, const AboxIndex& abox, ConceptPool& pool,
                 std::size_t node_budget)
    : index_(index), abox_(abox), pool_(pool), budget_(node_budget) {}

// ---- graph primitives -------------------------------------------------------

int Tableau::create_node(Graph& g, int parent, bool root, int individual) {
  if (created_ >= budget_) {
    throw ResourceLimit("completion graph exceeded the budget of " + std::to_string(budget_) +
                        " nodes");
  }
  ++created_;
  const int id = static_cast<int>(g.nodes.size());
  Node n;
  n.parent = parent;
  n.root = root;
  n.individual = individual;
  g.nodes.push_back(std::move(n));
  for (int c : index_.global) add(g, id, c);
  return id;
}

int Tableau::find(const Graph& g, int x) const {
  while (g.nodes[x].merged_into >= 0) x = g.nodes[x].merged_into;
  return x;
}

int Tableau::individual_node(const Graph& g, int individual) const {
  return find(g, g.individual_node[individual]);
}

void Tableau::add(Graph& g, int x, int c) {
  x = find(g, x);
  Node& n = g.nodes[x];
  if (n.pruned || !n.label.insert(c).second) return;
  if (c == pool_.bottom()) g.clash = true;
  const int k = pool_.known_complement(c);
  if (k >= 0 && n.label.contains(k)) g.clash = true;
  g.pending.emplace_back(x, c);
}

Edge& Tableau::edge_of(Graph& g, int x, int y) {
  auto& edges = g.nodes[x].edges;
  for (Edge& e : edges) {
    if (e.to == y) return e;
  }
  edges.push_back(Edge{y, {}});
  return edges.back();
}

void Tableau::add_edge(Graph& g, int x, int y, int role) {
  const auto& sup = index_.supers_of(role, scratch_);
  Label roles(sup.begin(), sup.end());
  add_edge_roles(g, x, y, roles);
}

void Tableau::add_edge_roles(Graph& g, int x, int y, const Label& roles) {
  x = find(g, x);
  y = find(g, y);
  Label fresh;
  {
    Edge& e = edge_of(g, x, y);
    for (int r : roles) {
      if (e.roles.insert(r).second) fresh.insert(r);
    }
  }
  if (fresh.empty()) return;
  {
    Edge& back = edge_of(g, y, x);
    for (int r : fresh) back.roles.insert(inverse_role(r));
  }
  for (int r : fresh) {
    if (const auto* d = index_.domain_of(r)) {
      for (int c : *d) add(g, x, c);
    }
    if (const auto* d = index_.domain_of(inverse_role(r))) {
      for (int c : *d) add(g, y, c);
    }
  }
  requeue(g, x, Kind::ForAll);
  if (y != x) requeue(g, y, Kind::ForAll);
}

void Tableau::requeue(Graph& g, int x, Kind kind) {
  for (int c : g.nodes[x].label) {
    if (pool_[c].kind == kind) g.pending.emplace_back(x, c);
  }
}

bool Tableau::is_distinct(const Graph& g, int a, int b) const {
  return g.distinct.contains({std::min(a, b), std::max(a, b)});
}

void Tableau::set_distinct(Graph& g, int a, int b) {
  if (a == b) {
    g.clash = true;
    return;
  }
  g.distinct.insert({std::min(a, b), std::max(a, b)});
}

void Tableau::prune(Graph& g, int x) {
  if (g.nodes[x].pruned) return;
  g.nodes[x].pruned = true;
  std::vector<Edge> edges = std::move(g.nodes[x].edges);
  g.nodes[x].edges.clear();
  for (const Edge& e : edges) {
    const int y = e.to;
    if (y == x) continue;
    auto& back = g.nodes[y].edges;
    std::erase_if(back, [&](const Edge& b) { return b.to == x; });
    if (!g.nodes[y].root && g.nodes[y].parent == x) prune(g, y);
  }
}

void Tableau::merge(Graph& g, int from, int into) {
  from = find(g, from);
  into = find(g, into);
  if (from == into) return;
  if (is_distinct(g, from, into)) {
    g.clash = true;
    return;
  }
  Node moved = std::move(g.nodes[from]);
  Node& f = g.nodes[from];
  f = Node{};
  f.parent = moved.parent;
  f.root = moved.root;
  f.individual = moved.individual;
  f.pruned = true;
  f.merged_into = into;

  std::vector<int> others;
  for (auto it = g.distinct.begin(); it != g.distinct.end();) {
    if (it->first == from || it->second == from) {
      others.push_back(it->first == from ? it->second : it->first);
      it = g.distinct.erase(it);
    } else {
      ++it;
    }
  }
  for (int o : others) set_distinct(g, into, find(g, o));

  for (const Edge& e : moved.edges) {
    const int y = e.to;
    if (y == from) {
      add_edge_roles(g, into, into, e.roles);
      continue;
    }
    std::erase_if(g.nodes[y].edges, [&](const Edge& b) { return b.to == from; });
    if (!g.nodes[y].root && g.nodes[y].parent == from) {
      prune(g, y);
      continue;
    }
    add_edge_roles(g, into, y, e.roles);
  }
  for (int c : moved.label) add(g, into, c);
  if (!moved.values.empty()) {
    auto& values = g.nodes[into].values;
    values.insert(values.end(), moved.values.begin(), moved.values.end());
    check_data(g, into);
  }
  // into may now stand for an individual it was told to differ from.
  requeue(g, into, Kind::NotOneOf);
  requeue(g, into, Kind::OneOf);
}

std::vector<int> Tableau::neighbours(const Graph& g, int x, int role) const {
  std::vector<int> out;
  for (const Edge& e : g.nodes[x].edges) {
    if (e.roles.contains(role)) out.push_back(e.to);
  }
  return out;
}

// ---- deterministic rules ----------------------------------------------------

bool Tableau::propagate(Graph& g) {
  while (!g.pending.empty() && !g.clash) {
    auto [x, c] = g.pending.front();
    g.pending.pop_front();
    process(g, x, c);
  }
  return !g.clash;
}

void Tableau::process(Graph& g, int x, int c) {
  x = find(g, x);
  if (g.nodes[x].pruned) return;
  const Kind kind = pool_[c].kind;
  switch (kind) {
    case Kind::Bottom:
      g.clash = true;
      return;
    case Kind::Atom:
    case Kind::NotAtom:
      if (const auto* list = index_.unfold(pool_[c].name, kind == Kind::NotAtom)) {
        for (int d : *list) add(g, x, d);
      }
      return;
    case Kind::And: {
      const std::vector<int> kids = pool_[c].kids;
      for (int k : kids) add(g, x, k);
      return;
    }
    case Kind::ForAll: {
      const int role = pool_[c].role;
      const int filler = pool_[c].kids[0];
      for (int y : neighbours(g, x, role)) add(g, y, filler);
      if (const auto* trans = index_.trans_below_of(role)) {
        for (int t : *trans) {
          std::vector<int> ys = neighbours(g, x, t);
          if (ys.empty()) continue;
          Entry e{Kind::ForAll, -1, t};
          e.kids = {filler};
          const int carried = pool_.make(std::move(e));
          for (int y : ys) add(g, y, carried);
        }
      }
      return;
    }
    case Kind::HasValue: {
      const int y = individual_node(g, pool_[c].name);
      add_edge(g, x, y, pool_[c].role);
      return;
    }
    case Kind::OneOf: {
      const std::vector<int> inds = pool_[c].individuals;
      for (int i : inds) {
        if (individual_node(g, i) == x) return;
      }
      if (inds.size() == 1) merge(g, x, individual_node(g, inds[0]));
      return;
    }
    case Kind::NotOneOf:
      for (int i : pool_[c].individuals) {
        if (individual_node(g, i) == x) g.clash = true;
      }
      return;
    case Kind::AtLeast:
    case Kind::AtMost:
      check_counting(g, x);
      return;
    case Kind::DataSome:
    case Kind::NotDataSome:
      check_data(g, x);
      return;
    default:
      return;
  }
}

void Tableau::check_counting(Graph& g, int x) {
  const Label& label = g.nodes[x].label;
  for (int a : label) {
    const Entry& least = pool_[a];
    if (least.kind != Kind::AtLeast) continue;
    const auto& sup = index_.supers_of(least.role, scratch_);
    for (int b : label) {
      const Entry& most = pool_[b];
      if (most.kind != Kind::AtMost || least.n <= most.n) continue;
      if (std::binary_search(sup.begin(), sup.end(), most.role)) {
        g.clash = true;
        return;
      }
    }
  }
}

void Tableau::check_data(Graph& g, int x) {
  struct Facts {
    std::vector<NumericRange> positive, negative;
    std::vector<Decimal> values;
  };
  std::map<int, Facts> by_property;
  const Node& n = g.nodes[x];
  for (int c : n.label) {
    const Entry& e = pool_[c];
    if (e.kind == Kind::DataSome) by_property[e.name].positive.push_back(e.range);
    if (e.kind == Kind::NotDataSome) by_property[e.name].negative.push_back(e.range);
  }
  for (const auto& [p, v] : n.values) by_property[p].values.push_back(v);

  for (const auto& [p, facts] : by_property) {
    for (const Decimal& v : facts.values) {
      for (const NumericRange& r : facts.negative) {
        if (r.contains(v)) g.clash = true;
      }
    }
    for (const NumericRange& r : facts.positive) {
      if (range_covered(r, facts.negative)) g.clash = true;
    }
    if (!index_.is_functional_data(p)) continue;
    if (facts.positive.empty() && facts.values.empty()) continue;
    NumericRange all;
    for (const NumericRange& r : facts.positive) all = range_intersection(all, r);
    for (const Decimal& v : facts.values) {
      NumericRange point;
      point.min_inclusive = v;
      point.max_inclusive = v;
      all = range_intersection(all, point);
    }
    if (range_covered(all, facts.negative)) g.clash = true;
  }
}

// ---- blocking and nondeterminism --------------------------------------------

// 0: active, 1: directly blocked, 2: indirectly blocked.
std::vector<char> Tableau::blocking(const Graph& g) const {
  std::vector<char> status(g.nodes.size(), 0);
  auto roles_between = [&](int from, int to) -> const Label* {
    for (const Edge& e : g.nodes[from].edges) {
      if (e.to == to) return &e.roles;
    }
    return nullptr;
  };
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const Node& x = g.nodes[i];
    if (x.pruned || x.root) continue;
    const int p = x.parent;
    if (status[p] != 0) {
      status[i] = 2;
      continue;
    }
    const Label* px = roles_between(p, static_cast<int>(i));
    if (px == nullptr) continue;
    for (int a = p; a >= 0 && !g.nodes[a].root; a = g.nodes[a].parent) {
      const int pa = g.nodes[a].parent;
      if (g.nodes[a].label != x.label || g.nodes[pa].label != g.nodes[p].label) continue;
      const Label* edge = roles_between(pa, a);
      if (edge != nullptr && *edge == *px) {
        status[i] = 1;
        break;
      }
    }
  }
  return status;
}

bool Tableau::branch(Graph& g, const std::vector<char>& blocked, bool& result) {
  const std::size_t count = g.nodes.size();

  // ≤-rule: merge two neighbours, newest first.
  for (std::size_t i = 0; i < count; ++i) {
    const int x = static_cast<int>(i);
    if (g.nodes[x].pruned || blocked[x] == 2) continue;
    for (int c : g.nodes[x].label) {
      const Entry& e = pool_[c];
      if (e.kind != Kind::AtMost) continue;
      std::vector<int> ys = neighbours(g, x, e.role);
      if (ys.size() <= e.n) continue;
      std::sort(ys.begin(), ys.end());
      std::vector<std::pair<int, int>> merges;  // (from, into)
      for (std::size_t b = ys.size(); b-- > 0;) {
        for (std::size_t a = 0; a < b; ++a) {
          if (is_distinct(g, ys[a], ys[b])) continue;
          const Node& na = g.nodes[ys[a]];
          const Node& nb = g.nodes[ys[b]];
          if (na.root && nb.root) {
            if (na.individual >= 0 && nb.individual >= 0) {
              throw UnsupportedConstruct(
                  "at-most restriction would merge individuals '" +
                  pool_.individual_name(na.individual) + "' and '" +
                  pool_.individual_name(nb.individual) + "'");
            }
            merges.emplace_back(na.individual >= 0 ? ys[b] : ys[a],
                                na.individual >= 0 ? ys[a] : ys[b]);
          } else if (nb.root) {
            merges.emplace_back(ys[a], ys[b]);
          } else {
            merges.emplace_back(ys[b], ys[a]);
          }
        }
      }
      result = false;
      for (std::size_t k = 0; k < merges.size(); ++k) {
        Graph h = k + 1 == merges.size() ? std::move(g) : g;
        merge(h, merges[k].first, merges[k].second);
        if (run(h)) {
          result = true;
          break;
        }
      }
      return true;
    }
  }

  // Nominal choice.
  for (std::size_t i = 0; i < count; ++i) {
    const int x = static_cast<int>(i);
    if (g.nodes[x].pruned || blocked[x] == 2) continue;
    for (int c : g.nodes[x].label) {
      const Entry& e = pool_[c];
      if (e.kind != Kind::OneOf || e.individuals.size() < 2) continue;
      const std::vector<int> inds = e.individuals;
      bool satisfied = std::any_of(inds.begin(), inds.end(),
                                   [&](int ind) { return individual_node(g, ind) == x; });
      if (satisfied) continue;
      result = false;
      for (std::size_t k = 0; k < inds.size(); ++k) {
        Graph h = k + 1 == inds.size() ? std::move(g) : g;
        merge(h, x, individual_node(h, inds[k]));
        if (run(h)) {
          result = true;
          break;
        }
      }
      return true;
    }
  }

  // ⊔-rule, left to right with semantic branching.
  for (std::size_t i = 0; i < count; ++i) {
    const int x = static_cast<int>(i);
    if (g.nodes[x].pruned || blocked[x] == 2) continue;
    for (int c : g.nodes[x].label) {
      if (pool_[c].kind != Kind::Or) continue;
      const std::vector<int> kids = pool_[c].kids;
      const Label& label = g.nodes[x].label;
      if (std::any_of(kids.begin(), kids.end(), [&](int k) { return label.contains(k); })) {
        continue;
      }
      result = false;
      for (std::size_t k = 0; k < kids.size(); ++k) {
        Graph h = k + 1 == kids.size() ? std::move(g) : g;
        for (std::size_t j = 0; j < k; ++j) add(h, x, pool_.negate(kids[j]));
        add(h, x, kids[k]);
        if (run(h)) {
          result = true;
          break;
        }
      }
      return true;
    }
  }
  return false;
}

bool Tableau::has_distinct_clique(const Graph& g, const std::vector<int>& candidates,
                                  unsigned n) const {
  if (n == 0) return true;
  if (candidates.size() < n) return false;
  std::vector<int> chosen;
  auto search = [&](auto& self, std::size_t from) -> bool {
    if (chosen.size() == n) return true;
    for (std::size_t k = from; k < candidates.size(); ++k) {
      int y = candidates[k];
      if (std::all_of(chosen.begin(), chosen.end(),
                      [&](int z) { return is_distinct(g, y, z); })) {
        chosen.push_back(y);
        if (self(self, k + 1)) return true;
        chosen.pop_back();
      }
    }
    return false;
  };
  return search(search, 0);
}

bool Tableau::generate(Graph& g, const std::vector<char>& blocked) {
  bool any = false;
  const std::size_t count = g.nodes.size();
  for (std::size_t i = 0; i < count; ++i) {
    const int x = static_cast<int>(i);
    if (g.nodes[x].pruned || blocked[x] != 0) continue;
    const std::vector<int> label(g.nodes[x].label.begin(), g.nodes[x].label.end());
    for (int c : label) {
      const Kind kind = pool_[c].kind;
      if (kind == Kind::Exists) {
        const int role = pool_[c].role;
        const int filler = pool_[c].kids[0];
        bool satisfied = false;
        for (int y : neighbours(g, x, role)) {
          if (g.nodes[y].label.contains(filler)) {
            satisfied = true;
            break;
          }
        }
        if (satisfied) continue;
        const int y = create_node(g, x, false, -1);
        add_edge(g, x, y, role);
        add(g, y, filler);
        any = true;
      } else if (kind == Kind::AtLeast) {
        const int role = pool_[c].role;
        const unsigned n = pool_[c].n;
        if (has_distinct_clique(g, neighbours(g, x, role), n)) continue;
        std::vector<int> fresh;
        for (unsigned k = 0; k < n; ++k) {
          const int y = create_node(g, x, false, -1);
          add_edge(g, x, y, role);
          for (int z : fresh) set_distinct(g, y, z);
          fresh.push_back(y);
        }
        any = true;
      }
    }
  }
  return any;
}

bool Tableau::run(Graph& g) {
  for (;;) {
    if (!propagate(g)) return false;
    const std::vector<char> blocked = blocking(g);
    bool result = false;
    if (branch(g, blocked, result)) return result;
    if (!generate(g, blocked)) return true;
  }
}

bool Tableau::satisfiable(int query, int individual, int extra) {
  Graph g;
  const std::size_t individuals = pool_.individual_count();
  g.individual_node.resize(individuals);
  for (std::size_t i = 0; i < individuals; ++i) {
    g.individual_node[i] = create_node(g, -1, true, static_cast<int>(i));
  }
  for (const auto& [ind, c] : abox_.types) add(g, individual_node(g, ind), c);
  for (const auto& [role, a, b] : abox_.roles) {
    add_edge(g, individual_node(g, a), individual_node(g, b), role);
  }
  for (const auto& [p, ind, v] : abox_.data) {
    g.nodes[individual_node(g, ind)].values.emplace_back(p, v);
  }
  for (const auto& [a, b] : abox_.different) {
    set_distinct(g, individual_node(g, a), individual_node(g, b));
  }
  for (const auto& [a, b] : abox_.same) merge(g, individual_node(g, b), individual_node(g, a));
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (!g.nodes[i].pruned && !g.nodes[i].values.empty()) check_data(g, static_cast<int>(i));
  }
  if (individual >= 0 && extra >= 0) add(g, individual_node(g, individual), extra);
  if (query >= 0) {
    const int r = create_node(g, -1, true, -1);
    add(g, r, query);
  }
  return run(g);
}

}  // namespace dlkb::detail
