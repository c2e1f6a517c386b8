#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dlkb/concept.hpp"
#include "dlkb/decimal.hpp"

namespace dlkb {

// ---- TBox ------------------------------------------------------------------

struct SubClassOf {
  Concept sub;
  Concept super;
  bool operator==(const SubClassOf&) const = default;
};

struct EquivalentClasses {
  Concept a;
  Concept b;
  bool operator==(const EquivalentClasses&) const = default;
};

struct DisjointClasses {
  Concept a;
  Concept b;
  bool operator==(const DisjointClasses&) const = default;
};

struct Domain {
  RoleExpr role;
  Concept cls;
  bool operator==(const Domain&) const = default;
};

struct Range {
  RoleExpr role;
  Concept cls;
  bool operator==(const Range&) const = default;
};

// Input form. KnowledgeBase::add rewrites Domain/Range/DisjointClasses, so
// a loaded KB only ever holds SubClassOf and EquivalentClasses.
using TBoxAxiom =
    std::variant<SubClassOf, EquivalentClasses, DisjointClasses, Domain, Range>;

// ---- RBox ------------------------------------------------------------------

struct SubRole {
  RoleExpr sub;
  RoleExpr super;
  auto operator<=>(const SubRole&) const = default;
};

struct RBox {
  // Declared axioms, kept as written for serialization.
  std::vector<SubRole> sub_roles;
  std::vector<std::pair<std::string, std::string>> inverse_pairs;
  std::vector<std::pair<std::string, std::string>> equivalent_roles;
  std::set<std::string> transitive;
  std::set<std::string> functional;
  std::set<std::string> inverse_functional;
  std::set<std::string> symmetric;

  // Uniform representation: inverse pairs, equivalences and symmetry as
  // plain sub-role axioms (both orientations)...
  std::vector<SubRole> uniform_sub_roles() const;
  // ...and (inverse) functionality as Top ⊑ (≤ 1 r) restrictions.
  std::vector<Concept> global_restrictions() const;

  // Reflexive-transitive closure of uniform_sub_roles over the given role
  // names, closed under inversion.
  std::set<SubRole> closure(const std::set<std::string>& role_names) const;

  bool operator==(const RBox&) const = default;
};

// ---- ABox ------------------------------------------------------------------

struct ClassAssertion {
  Concept cls;
  std::string individual;
  bool operator==(const ClassAssertion&) const = default;
};

struct RoleAssertion {
  RoleExpr role;
  std::string subject;
  std::string object;
  bool operator==(const RoleAssertion&) const = default;
};

struct DataAssertion {
  std::string property;
  std::string individual;
  Decimal value;
  bool operator==(const DataAssertion&) const = default;
};

struct SameAs {
  std::string a;
  std::string b;
  bool operator==(const SameAs&) const = default;
};

struct DifferentFrom {
  std::string a;
  std::string b;
  bool operator==(const DifferentFrom&) const = default;
};

using ABoxAssertion =
    std::variant<ClassAssertion, RoleAssertion, DataAssertion, SameAs, DifferentFrom>;

// ---- Knowledge base --------------------------------------------------------

class KnowledgeBase {
 public:
  // Rewrites Domain(r,C) to ∃r.⊤ ⊑ C, Range(r,C) to ⊤ ⊑ ∀r.C and
  // DisjointClasses(A,B) to A ⊑ ¬B, then auto-declares every name used.
  void add(const TBoxAxiom& axiom);
  // Throws KbError for DifferentFrom(a, a).
  void add(const ABoxAssertion& assertion);

  void declare_class(const std::string& name);
  void declare_role(const std::string& name);
  void declare_individual(const std::string& name);
  void declare_data_property(const std::string& name);

  void add_sub_role(const RoleExpr& sub, const RoleExpr& super);
  void add_inverse_pair(const std::string& role, const std::string& inverse);
  void add_equivalent_roles(const std::string& a, const std::string& b);
  void set_transitive(const std::string& role);
  void set_functional(const std::string& role);
  void set_inverse_functional(const std::string& role);
  void set_symmetric(const std::string& role);
  void set_functional_data(const std::string& property);

  void set_label(const std::string& entity, const std::string& lang,
                 const std::string& text);
  // requested language, then "en", then the raw entity name.
  std::string label(const std::string& entity, const std::string& lang) const;

  // Nominals may only name declared individuals. Returns the first offending
  // individual name, if any.
  std::optional<std::string> undeclared_nominal() const;

  const std::vector<TBoxAxiom>& tbox() const { return tbox_; }
  const std::vector<ABoxAssertion>& abox() const { return abox_; }
  const RBox& rbox() const { return rbox_; }
  const std::map<std::pair<std::string, std::string>, std::string>& labels() const {
    return labels_;
  }
  const std::set<std::string>& concept_names() const { return concept_names_; }
  const std::set<std::string>& role_names() const { return role_names_; }
  const std::set<std::string>& individual_names() const { return individual_names_; }
  const std::set<std::string>& data_property_names() const { return data_properties_; }
  const std::set<std::string>& functional_data_properties() const {
    return functional_data_;
  }

  std::size_t axiom_count() const { return tbox_.size() + abox_.size(); }

 private:
  void declare_names_in(const Concept& c);
  void declare_role_expr(const RoleExpr& r) { declare_role(r.name); }

  std::vector<TBoxAxiom> tbox_;
  std::vector<ABoxAssertion> abox_;
  RBox rbox_;
  std::map<std::pair<std::string, std::string>, std::string> labels_;
  std::set<std::string> concept_names_;
  std::set<std::string> role_names_;
  std::set<std::string> individual_names_;
  std::set<std::string> data_properties_;
  std::set<std::string> functional_data_;
};

// Same signature, RBox, labels, and equal TBox/ABox axiom multisets.
bool logically_identical(const KnowledgeBase& a, const KnowledgeBase& b);

// SubClassOf(cls, ∀role.(F1 ⊔ … ⊔ Fk)) over the existential fillers the KB
// asserts for cls along role, in axiom order. Throws NoExistentialFillers.
SubClassOf build_closure_axiom(const std::string& cls, const RoleExpr& role,
                               const KnowledgeBase& kb);

// cls is one side of an EquivalentClasses axiom.
bool is_defined_class(const std::string& cls, const KnowledgeBase& kb);

// Named classes reachable through told SubClassOf/EquivalentClasses
// axioms with atomic (or conjunctive) right-hand sides; includes cls.
std::set<std::string> told_subsumers(const std::string& cls, const KnowledgeBase& kb);

}  // namespace dlkb
