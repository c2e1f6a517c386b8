#include "oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "dlkb/text_format.hpp"

namespace dlkb::testing {

namespace {

// Conflict-driven clause learning with two watched literals. Literal 2v is
// v, 2v+1 is not v.
class Solver {
 public:
  int new_var() {
    val_.push_back(-1);
    level_.push_back(0);
    reason_.push_back(-1);
    activity_.push_back(0.0);
    phase_.push_back(0);
    seen_.push_back(0);
    watches_.resize(2 * val_.size());
    return static_cast<int>(val_.size()) - 1;
  }

  void add_clause(std::vector<int> c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t k = 1; k < c.size(); ++k) {
      if ((c[k] ^ 1) == c[k - 1]) return;  // tautology
    }
    if (c.empty()) {
      unsat_ = true;
    } else if (c.size() == 1) {
      units_.push_back(c[0]);
    } else {
      attach(std::move(c));
    }
  }

  bool solve() {
    if (unsat_) return false;
    for (int u : units_) {
      int v = value(u);
      if (v == 0) return false;
      if (v < 0) enqueue(u, -1);
    }
    std::vector<int> learnt;
    for (;;) {
      int confl = propagate();
      if (confl >= 0) {
        if (trail_lim_.empty()) return false;
        int bt = analyze(confl, learnt);
        backtrack(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          int idx = attach(learnt);
          enqueue(learnt[0], idx);
        }
        var_inc_ *= 1.05;
      } else {
        int v = pick_branch();
        if (v < 0) return true;
        trail_lim_.push_back(trail_.size());
        enqueue(2 * v + (phase_[v] ? 0 : 1), -1);
      }
    }
  }

  bool model_value(int var) const { return val_[var] == 1; }

 private:
  int value(int lit) const {
    int v = val_[lit >> 1];
    return v < 0 ? -1 : v ^ (lit & 1);
  }

  int attach(std::vector<int> c) {
    int idx = static_cast<int>(clauses_.size());
    watches_[c[0]].push_back(idx);
    watches_[c[1]].push_back(idx);
    clauses_.push_back(std::move(c));
    return idx;
  }

  void enqueue(int lit, int reason) {
    int v = lit >> 1;
    val_[v] = (lit & 1) ? 0 : 1;
    level_[v] = static_cast<int>(trail_lim_.size());
    reason_[v] = reason;
    trail_.push_back(lit);
  }

  int propagate() {
    while (qhead_ < trail_.size()) {
      int falsified = trail_[qhead_++] ^ 1;
      auto& ws = watches_[falsified];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        int ci = ws[i++];
        auto& c = clauses_[ci];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (value(c[0]) == 1) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[c[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (value(c[0]) == 0) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          return ci;
        }
        enqueue(c[0], ci);
      }
      ws.resize(j);
    }
    return -1;
  }

  void bump(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
  }

  // First-UIP learning; returns the backjump level.
  int analyze(int confl, std::vector<int>& learnt) {
    const int current = static_cast<int>(trail_lim_.size());
    learnt.assign(1, -1);
    int pending = 0;
    int p = -1;
    std::size_t idx = trail_.size();
    do {
      const auto& c = clauses_[confl];
      for (std::size_t k = (p < 0 ? 0 : 1); k < c.size(); ++k) {
        int v = c[k] >> 1;
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        bump(v);
        if (level_[v] >= current) {
          ++pending;
        } else {
          learnt.push_back(c[k]);
        }
      }
      while (!seen_[trail_[--idx] >> 1]) {
      }
      p = trail_[idx];
      confl = reason_[p >> 1];
      seen_[p >> 1] = 0;
      --pending;
    } while (pending > 0);
    learnt[0] = p ^ 1;

    int bt = 0;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      seen_[learnt[k] >> 1] = 0;
      if (level_[learnt[k] >> 1] > bt) {
        bt = level_[learnt[k] >> 1];
        std::swap(learnt[1], learnt[k]);
      }
    }
    return bt;
  }

  void backtrack(int level) {
    if (static_cast<int>(trail_lim_.size()) <= level) return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[level];) {
      int v = trail_[i] >> 1;
      phase_[v] = static_cast<char>(val_[v]);
      val_[v] = -1;
      reason_[v] = -1;
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
  }

  int pick_branch() const {
    int best = -1;
    for (std::size_t v = 0; v < val_.size(); ++v) {
      if (val_[v] < 0 && (best < 0 || activity_[v] > activity_[best])) {
        best = static_cast<int>(v);
      }
    }
    return best;
  }

  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> units_;
  std::vector<signed char> val_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<double> activity_;
  std::vector<char> phase_;
  std::vector<char> seen_;
  std::vector<int> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1.0;
  bool unsat_ = false;
};

int pos(int v) { return 2 * v; }
int neg(int v) { return 2 * v + 1; }

void collect_subconcepts(const Concept& c, std::unordered_map<Concept, int>& index,
                         std::vector<Concept>& order) {
  if (index.contains(c)) return;
  switch (c.kind()) {
    case ConceptKind::Not:
    case ConceptKind::Exists:
    case ConceptKind::ForAll:
      collect_subconcepts(c.child(), index, order);
      break;
    case ConceptKind::And:
    case ConceptKind::Or:
      for (const Concept& op : c.operands()) collect_subconcepts(op, index, order);
      break;
    case ConceptKind::Top:
    case ConceptKind::Bottom:
    case ConceptKind::Atomic:
      break;
    default:
      throw std::invalid_argument("oracle supports ALC only");
  }
  index.emplace(c, static_cast<int>(order.size()));
  order.push_back(c);
}

std::size_t count_exists(const Concept& c) {
  switch (c.kind()) {
    case ConceptKind::Exists:
      return 1 + count_exists(c.child());
    case ConceptKind::Not:
    case ConceptKind::ForAll:
      return count_exists(c.child());
    case ConceptKind::And:
    case ConceptKind::Or: {
      std::size_t n = 0;
      for (const Concept& op : c.operands()) n += count_exists(op);
      return n;
    }
    default:
      return 0;
  }
}

template <class T>
std::vector<T> unique_sorted(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::size_t existential_count(const Concept& c) { return count_exists(nnf(c)); }

std::optional<FiniteInterpretation> find_model(const Concept& input, std::size_t n) {
  const Concept c = nnf(input);
  std::unordered_map<Concept, int> index;
  std::vector<Concept> subs;
  collect_subconcepts(c, index, subs);

  std::vector<std::string> atoms, roles;
  collect_concept_names(c, atoms);
  collect_role_names(c, roles);
  atoms = unique_sorted(atoms);
  roles = unique_sorted(roles);

  Solver s;
  // x[k][e]: element e must belong to subconcept k.
  std::vector<std::vector<int>> x(subs.size(), std::vector<int>(n));
  for (auto& row : x) {
    for (auto& v : row) v = s.new_var();
  }
  std::map<std::string, std::vector<std::vector<int>>> edge;
  for (const auto& r : roles) {
    auto& m = edge[r];
    m.assign(n, std::vector<int>(n));
    for (auto& row : m) {
      for (auto& v : row) v = s.new_var();
    }
  }
  auto edge_var = [&](const RoleExpr& r, std::size_t from, std::size_t to) {
    return r.inverted ? edge[r.name][to][from] : edge[r.name][from][to];
  };

  for (std::size_t k = 0; k < subs.size(); ++k) {
    const Concept& d = subs[k];
    for (std::size_t e = 0; e < n; ++e) {
      const int me = x[k][e];
      switch (d.kind()) {
        case ConceptKind::Top:
        case ConceptKind::Atomic:
          break;
        case ConceptKind::Bottom:
          s.add_clause({neg(me)});
          break;
        case ConceptKind::Not:  // NNF: operand is an atom
          s.add_clause({neg(me), neg(x[index.at(d.child())][e])});
          break;
        case ConceptKind::And:
          for (const Concept& op : d.operands()) {
            s.add_clause({neg(me), pos(x[index.at(op)][e])});
          }
          break;
        case ConceptKind::Or: {
          std::vector<int> cl{neg(me)};
          for (const Concept& op : d.operands()) cl.push_back(pos(x[index.at(op)][e]));
          s.add_clause(cl);
          break;
        }
        case ConceptKind::Exists: {
          std::vector<int> cl{neg(me)};
          const int filler = index.at(d.child());
          for (std::size_t f = 0; f < n; ++f) {
            int w = s.new_var();
            cl.push_back(pos(w));
            s.add_clause({neg(w), pos(edge_var(d.role(), e, f))});
            s.add_clause({neg(w), pos(x[filler][f])});
          }
          s.add_clause(cl);
          break;
        }
        case ConceptKind::ForAll: {
          const int filler = index.at(d.child());
          for (std::size_t f = 0; f < n; ++f) {
            s.add_clause({neg(me), neg(edge_var(d.role(), e, f)), pos(x[filler][f])});
          }
          break;
        }
        default:
          break;
      }
    }
  }
  s.add_clause({pos(x[index.at(c)][0])});

  if (!s.solve()) return std::nullopt;

  FiniteInterpretation model;
  model.domain_size = n;
  for (const auto& a : atoms) {
    auto& ext = model.concepts[a];
    const int k = index.at(Concept::atomic(a));
    for (std::size_t e = 0; e < n; ++e) {
      if (s.model_value(x[k][e])) ext.insert(e);
    }
  }
  for (const auto& r : roles) {
    auto& ext = model.roles[r];
    for (std::size_t e = 0; e < n; ++e) {
      for (std::size_t f = 0; f < n; ++f) {
        if (s.model_value(edge[r][e][f])) ext.insert({e, f});
      }
    }
  }
  if (!evaluate(input, model).contains(0)) {
    throw std::logic_error("oracle produced a non-model for " + to_text(input));
  }
  return model;
}

bool oracle_satisfiable(const Concept& c) {
  if (find_model(c, 1)) return true;
  std::size_t bound = existential_count(c) + 1;
  return bound > 1 && find_model(c, bound).has_value();
}

bool brute_force_satisfiable(const Concept& c, std::size_t n) {
  std::vector<std::string> atoms, roles;
  collect_concept_names(c, atoms);
  collect_role_names(c, roles);
  atoms = unique_sorted(atoms);
  roles = unique_sorted(roles);
  const std::size_t bits = atoms.size() * n + roles.size() * n * n;
  if (bits > 24) throw std::invalid_argument("brute force search space too large");

  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    FiniteInterpretation i;
    i.domain_size = n;
    std::size_t bit = 0;
    for (const auto& a : atoms) {
      auto& ext = i.concepts[a];
      for (std::size_t e = 0; e < n; ++e, ++bit) {
        if (code >> bit & 1) ext.insert(e);
      }
    }
    for (const auto& r : roles) {
      auto& ext = i.roles[r];
      for (std::size_t e = 0; e < n; ++e) {
        for (std::size_t f = 0; f < n; ++f, ++bit) {
          if (code >> bit & 1) ext.insert({e, f});
        }
      }
    }
    if (evaluate(c, i).contains(0)) return true;
  }
  return false;
}

}  // namespace dlkb::testing
