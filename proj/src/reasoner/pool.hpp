#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dlkb/concept.hpp"
#include "dlkb/knowledge_base.hpp"

namespace dlkb::detail {

// Concepts in negation normal form, interned to dense ids. Roles are
// literals: 2 * role index, plus 1 when inverted.
enum class Kind : std::uint8_t {
  Top,
  Bottom,
  Atom,
  NotAtom,
  And,
  Or,
  Exists,
  ForAll,
  AtLeast,
  AtMost,
  HasValue,
  OneOf,
  NotOneOf,
  DataSome,
  NotDataSome,
};

struct Entry {
  Kind kind = Kind::Top;
  int name = -1;  // atom, data property, or HasValue individual
  int role = -1;
  unsigned n = 0;
  std::vector<int> kids;  // And/Or operands, or the filler of Exists/ForAll
  std::vector<int> individuals;
  NumericRange range;
};

inline int inverse_role(int lit) { return lit ^ 1; }

class ConceptPool {
 public:
  ConceptPool();

  int top() const { return 0; }
  int bottom() const { return 1; }

  // Interns nnf(c), or nnf(not c) when negated is set.
  int intern(const Concept& c, bool negated = false);
  int negate(int id);
  // Complement if it is already known; -1 otherwise.
  int known_complement(int id) const { return complement_[id]; }

  const Entry& operator[](int id) const { return entries_[id]; }
  std::size_t size() const { return entries_.size(); }

  int atom(const std::string& name);
  int role(const std::string& name, bool inverted);
  int individual(const std::string& name);
  int data_property(const std::string& name);

  std::size_t atom_count() const { return atoms_.size(); }
  std::size_t role_count() const { return roles_.size(); }
  std::size_t individual_count() const { return individuals_.size(); }
  const std::string& atom_name(int id) const { return atoms_[id]; }
  const std::string& role_name(int lit) const { return roles_[lit >> 1]; }
  const std::string& individual_name(int id) const { return individuals_[id]; }
  std::optional<int> find_individual(const std::string& name) const;

  int make(Entry e);

 private:
  std::string key(const Entry& e) const;

  std::vector<Entry> entries_;
  std::vector<int> complement_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> atoms_, roles_, individuals_, data_;
  std::unordered_map<std::string, int> atom_ids_, role_ids_, individual_ids_, data_ids_;
};

// Preprocessed TBox and RBox: lazy unfolding tables, absorbed GCIs, role
// hierarchy. Built once per reasoner; read-only afterwards.
struct TBoxIndex {
  ConceptPool pool;
  std::vector<std::vector<int>> unfold_pos;  // by atom id
  std::vector<std::vector<int>> unfold_neg;  // by atom id
  std::vector<std::vector<int>> domain;      // by role literal
  std::vector<int> global;
  std::vector<std::vector<int>> supers;        // by role literal, reflexive
  std::vector<std::vector<int>> trans_below;   // transitive s with s ⊑* r
  std::vector<bool> transitive;                // by role literal
  std::vector<bool> functional_data;           // by data property id
  std::vector<bool> fully_defined;             // by atom id

  explicit TBoxIndex(const KnowledgeBase& kb);

  // Role tables for literals beyond those known when the index was built
  // (fresh roles mentioned only by a query) are trivial.
  const std::vector<int>& supers_of(int lit, std::vector<int>& scratch) const;
  const std::vector<int>* trans_below_of(int lit) const;
  const std::vector<int>* domain_of(int lit) const;
  bool is_transitive(int lit) const;
  bool is_functional_data(int prop) const;
  const std::vector<int>* unfold(int atom, bool negative) const;
};

}  // namespace dlkb::detail
