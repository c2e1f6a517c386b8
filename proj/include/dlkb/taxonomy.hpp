#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dlkb {

// Inferred subsumption hierarchy over named classes. Each node is a group of
// equivalent names; edges are direct subsumptions (a transitive reduction).
// Node 0 is Top, node 1 is Bottom; either may hold declared names too
// (classes equivalent to Thing, unsatisfiable classes).
class Taxonomy {
 public:
  struct Node {
    std::set<std::string> names;
    std::set<std::size_t> parents;
    std::set<std::size_t> children;
  };

  static constexpr std::size_t kTop = 0;
  static constexpr std::size_t kBottom = 1;

  Taxonomy();

  // Builds the hierarchy from a complete relation: subsumed(i, j) is true
  // iff names[i] ⊑ names[j]. Unsatisfiable names go to Bottom.
  static Taxonomy from_relation(const std::vector<std::string>& names,
                                const std::vector<bool>& unsatisfiable,
                                const std::vector<std::vector<bool>>& subsumed,
                                const std::vector<bool>& equivalent_to_top);

  const std::vector<Node>& nodes() const { return nodes_; }
  std::optional<std::size_t> node_of(const std::string& name) const;

  // All queries below take declared names; "Thing"/"Nothing" are not names.
  std::set<std::string> equivalents(const std::string& name) const;
  std::set<std::string> direct_subclasses(const std::string& name) const;
  std::set<std::string> direct_superclasses(const std::string& name) const;
  std::set<std::string> all_subclasses(const std::string& name) const;
  std::set<std::string> all_superclasses(const std::string& name) const;
  // name ⊑ super, reflexive.
  bool is_subclass(const std::string& name, const std::string& super) const;

  std::set<std::size_t> descendants(std::size_t node) const;  // strict
  std::set<std::size_t> ancestors(std::size_t node) const;    // strict

  // Pairs (sub, super) of distinct names in the reflexive-transitive closure,
  // with Bottom/Top members included. Used to compare taxonomies.
  std::set<std::pair<std::string, std::string>> closure_pairs() const;

  // Same groups and same direct edges, independent of node numbering.
  bool operator==(const Taxonomy& other) const;

  // Incremental construction, used by top-down insertion.
  std::size_t add_node(std::set<std::string> names);
  void add_name(std::size_t node, const std::string& name);
  void link(std::size_t parent, std::size_t child);
  void unlink(std::size_t parent, std::size_t child);

 private:
  std::vector<Node> nodes_;
  std::map<std::string, std::size_t> index_;
};

// Indented tree with one line per group, children sorted by first name.
std::string render_tree(const Taxonomy& t);
// "sub super" lines for every direct edge between named groups.
std::string render_pairs(const Taxonomy& t);

}  // namespace dlkb
