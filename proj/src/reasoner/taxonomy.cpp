#include "dlkb/taxonomy.hpp"

#include <algorithm>
#include <sstream>

namespace dlkb {

Taxonomy::Taxonomy() {
  nodes_.resize(2);
  link(kTop, kBottom);
}

std::size_t Taxonomy::add_node(std::set<std::string> names) {
  std::size_t id = nodes_.size();
  for (const auto& n : names) index_[n] = id;
  nodes_.push_back(Node{std::move(names), {}, {}});
  return id;
}

void Taxonomy::add_name(std::size_t node, const std::string& name) {
  nodes_[node].names.insert(name);
  index_[name] = node;
}

void Taxonomy::link(std::size_t parent, std::size_t child) {
  nodes_[parent].children.insert(child);
  nodes_[child].parents.insert(parent);
}

void Taxonomy::unlink(std::size_t parent, std::size_t child) {
  nodes_[parent].children.erase(child);
  nodes_[child].parents.erase(parent);
}

Taxonomy Taxonomy::from_relation(const std::vector<std::string>& names,
                                 const std::vector<bool>& unsatisfiable,
                                 const std::vector<std::vector<bool>>& subsumed,
                                 const std::vector<bool>& equivalent_to_top) {
  Taxonomy t;
  const std::size_t n = names.size();
  std::vector<std::size_t> group(n, SIZE_MAX);

  for (std::size_t i = 0; i < n; ++i) {
    if (unsatisfiable[i]) {
      group[i] = kBottom;
    } else if (equivalent_to_top[i]) {
      group[i] = kTop;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (group[i] != SIZE_MAX) {
      t.add_name(group[i], names[i]);
      continue;
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (group[j] > kBottom && group[j] != SIZE_MAX && subsumed[i][j] && subsumed[j][i]) {
        group[i] = group[j];
        break;
      }
    }
    if (group[i] == SIZE_MAX) {
      group[i] = t.add_node({names[i]});
    } else {
      t.add_name(group[i], names[i]);
    }
  }

  // Representative per group, then the transitive reduction.
  std::vector<std::size_t> rep(t.nodes_.size(), SIZE_MAX);
  for (std::size_t i = 0; i < n; ++i) {
    if (rep[group[i]] == SIZE_MAX) rep[group[i]] = i;
  }
  std::vector<std::size_t> inner;
  for (std::size_t g = 2; g < t.nodes_.size(); ++g) inner.push_back(g);
  auto below = [&](std::size_t a, std::size_t b) {  // group a strictly under group b
    return a != b && subsumed[rep[a]][rep[b]];
  };
  t.unlink(kTop, kBottom);
  for (std::size_t a : inner) {
    bool has_parent = false, has_child = false;
    for (std::size_t b : inner) {
      if (!below(a, b)) continue;
      bool direct = std::none_of(inner.begin(), inner.end(), [&](std::size_t m) {
        return m != a && m != b && below(a, m) && below(m, b);
      });
      if (direct) {
        t.link(b, a);
        has_parent = true;
      }
    }
    for (std::size_t b : inner) has_child = has_child || below(b, a);
    if (!has_parent) t.link(kTop, a);
    if (!has_child) t.link(a, kBottom);
  }
  if (inner.empty()) t.link(kTop, kBottom);
  return t;
}

std::optional<std::size_t> Taxonomy::node_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::set<std::size_t> Taxonomy::descendants(std::size_t node) const {
  std::set<std::size_t> out;
  std::vector<std::size_t> stack(nodes_[node].children.begin(), nodes_[node].children.end());
  while (!stack.empty()) {
    std::size_t n = stack.back();
    stack.pop_back();
    if (!out.insert(n).second) continue;
    stack.insert(stack.end(), nodes_[n].children.begin(), nodes_[n].children.end());
  }
  return out;
}

std::set<std::size_t> Taxonomy::ancestors(std::size_t node) const {
  std::set<std::size_t> out;
  std::vector<std::size_t> stack(nodes_[node].parents.begin(), nodes_[node].parents.end());
  while (!stack.empty()) {
    std::size_t n = stack.back();
    stack.pop_back();
    if (!out.insert(n).second) continue;
    stack.insert(stack.end(), nodes_[n].parents.begin(), nodes_[n].parents.end());
  }
  return out;
}

namespace {

std::set<std::string> names_of(const std::vector<Taxonomy::Node>& nodes,
                               const std::set<std::size_t>& ids) {
  std::set<std::string> out;
  for (std::size_t id : ids) out.insert(nodes[id].names.begin(), nodes[id].names.end());
  return out;
}

}  // namespace

std::set<std::string> Taxonomy::equivalents(const std::string& name) const {
  auto n = node_of(name);
  return n ? nodes_[*n].names : std::set<std::string>{};
}

std::set<std::string> Taxonomy::direct_subclasses(const std::string& name) const {
  auto n = node_of(name);
  return n ? names_of(nodes_, nodes_[*n].children) : std::set<std::string>{};
}

std::set<std::string> Taxonomy::direct_superclasses(const std::string& name) const {
  auto n = node_of(name);
  return n ? names_of(nodes_, nodes_[*n].parents) : std::set<std::string>{};
}

std::set<std::string> Taxonomy::all_subclasses(const std::string& name) const {
  auto n = node_of(name);
  return n ? names_of(nodes_, descendants(*n)) : std::set<std::string>{};
}

std::set<std::string> Taxonomy::all_superclasses(const std::string& name) const {
  auto n = node_of(name);
  return n ? names_of(nodes_, ancestors(*n)) : std::set<std::string>{};
}

bool Taxonomy::is_subclass(const std::string& name, const std::string& super) const {
  auto a = node_of(name), b = node_of(super);
  if (!a || !b) return false;
  return *a == *b || *b == kTop || *a == kBottom || ancestors(*a).contains(*b);
}

std::set<std::pair<std::string, std::string>> Taxonomy::closure_pairs() const {
  std::set<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    std::set<std::size_t> up = ancestors(i);
    up.insert(i);
    if (i == kBottom) {
      for (std::size_t k = 0; k < nodes_.size(); ++k) up.insert(k);
    }
    up.insert(kTop);
    for (const auto& a : nodes_[i].names) {
      for (std::size_t j : up) {
        for (const auto& b : nodes_[j].names) {
          if (a != b) out.insert({a, b});
        }
      }
    }
  }
  return out;
}

bool Taxonomy::operator==(const Taxonomy& other) const {
  auto signature = [](const Taxonomy& t) {
    std::set<std::set<std::string>> groups;
    std::set<std::pair<std::set<std::string>, std::set<std::string>>> edges;
    auto label = [&](std::size_t id) {
      std::set<std::string> l = t.nodes_[id].names;
      if (id == kTop) l.insert("\x01top");
      if (id == kBottom) l.insert("\x01bottom");
      return l;
    };
    for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
      groups.insert(label(i));
      for (std::size_t c : t.nodes_[i].children) edges.insert({label(i), label(c)});
    }
    return std::make_pair(groups, edges);
  };
  return signature(*this) == signature(other);
}

namespace {

std::string group_text(const Taxonomy::Node& n, const char* fallback) {
  std::string out;
  if (fallback) out = fallback;
  for (const auto& name : n.names) {
    if (!out.empty()) out += " = ";
    out += name;
  }
  return out;
}

void render(const Taxonomy& t, std::size_t id, int depth, std::ostringstream& out) {
  const auto& nodes = t.nodes();
  std::vector<std::size_t> kids;
  for (std::size_t c : nodes[id].children) {
    if (c != Taxonomy::kBottom) kids.push_back(c);
  }
  std::sort(kids.begin(), kids.end(), [&](std::size_t a, std::size_t b) {
    return *nodes[a].names.begin() < *nodes[b].names.begin();
  });
  for (std::size_t c : kids) {
    out << std::string(2 * depth, ' ') << group_text(nodes[c], nullptr) << '\n';
    render(t, c, depth + 1, out);
  }
}

}  // namespace

std::string render_tree(const Taxonomy& t) {
  std::ostringstream out;
  out << group_text(t.nodes()[Taxonomy::kTop], "Thing") << '\n';
  render(t, Taxonomy::kTop, 1, out);
  if (!t.nodes()[Taxonomy::kBottom].names.empty()) {
    out << group_text(t.nodes()[Taxonomy::kBottom], "Nothing") << '\n';
  }
  return out.str();
}

std::string render_pairs(const Taxonomy& t) {
  std::set<std::pair<std::string, std::string>> lines;
  const auto& nodes = t.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t p : nodes[i].parents) {
      for (const auto& a : nodes[i].names) {
        if (p == Taxonomy::kTop && nodes[p].names.empty()) {
          lines.insert({a, "Thing"});
        }
        for (const auto& b : nodes[p].names) lines.insert({a, b});
      }
    }
  }
  std::ostringstream out;
  for (const auto& [a, b] : lines) out << a << ' ' << b << '\n';
  return out.str();
}

}  // namespace dlkb
