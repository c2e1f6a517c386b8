#pragma once

#include <boost/container/flat_set.hpp>
#include <cstddef>
#include <deque>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "dlkb/decimal.hpp"
#include "pool.hpp"

namespace dlkb::detail {

using Label = boost::container::flat_set<int>;

struct Edge {
  int to = -1;
  Label roles;  // role literals as seen from the owning node, closed upwards
};

struct Node {
  Label label;
  std::vector<Edge> edges;
  std::vector<std::pair<int, Decimal>> values;  // (data property, value)
  int parent = -1;        // creating node, for tree nodes
  int individual = -1;    // named individual this root stands for
  bool root = false;
  bool pruned = false;
  int merged_into = -1;
};

struct Graph {
  std::vector<Node> nodes;
  std::set<std::pair<int, int>> distinct;  // ordered pairs (min, max)
  std::vector<int> individual_node;        // by individual id, resolve with find
  std::deque<std::pair<int, int>> pending; // (node, concept) still to process
  bool clash = false;
};

// ABox facts resolved to pool ids, shared by every test on one reasoner.
struct AboxIndex {
  std::vector<std::pair<int, int>> types;            // (individual, concept)
  std::vector<std::tuple<int, int, int>> roles;      // (role literal, subject, object)
  std::vector<std::tuple<int, int, Decimal>> data;   // (property, individual, value)
  std::vector<std::pair<int, int>> same;
  std::vector<std::pair<int, int>> different;
};

// One satisfiability test. The pool is private to the test; the index and
// the ABox are shared read-only.
class Tableau {
 public:
  Tableau(const TBoxIndex& index, const AboxIndex& abox, ConceptPool& pool,
          std::size_t node_budget);

  // Is the ABox, plus query for a fresh anonymous root (when >= 0), plus
  // extra on the given individual (when >= 0), satisfiable?
  bool satisfiable(int query, int individual = -1, int extra = -1);

  std::size_t nodes_created() const { return created_; }

 private:
  int create_node(Graph& g, int parent, bool root, int individual);
  int find(const Graph& g, int x) const;
  void add(Graph& g, int x, int c);
  Edge& edge_of(Graph& g, int x, int y);
  void add_edge(Graph& g, int x, int y, int role);
  void add_edge_roles(Graph& g, int x, int y, const Label& roles);
  void requeue(Graph& g, int x, Kind kind);
  void merge(Graph& g, int from, int into);
  void prune(Graph& g, int x);
  bool is_distinct(const Graph& g, int a, int b) const;
  void set_distinct(Graph& g, int a, int b);
  int individual_node(const Graph& g, int individual) const;

  bool propagate(Graph& g);
  void process(Graph& g, int x, int c);
  void check_counting(Graph& g, int x);
  void check_data(Graph& g, int x);
  std::vector<int> neighbours(const Graph& g, int x, int role) const;

  std::vector<char> blocking(const Graph& g) const;
  bool branch(Graph& g, const std::vector<char>& blocked, bool& result);
  bool generate(Graph& g, const std::vector<char>& blocked);
  bool has_distinct_clique(const Graph& g, const std::vector<int>& candidates,
                           unsigned n) const;
  bool run(Graph& g);

  const TBoxIndex& index_;
  const AboxIndex& abox_;
  ConceptPool& pool_;
  std::size_t budget_;
  std::size_t created_ = 0;
  std::vector<int> scratch_;
};

}  // namespace dlkb::detail
