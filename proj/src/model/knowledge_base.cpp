#include "dlkb/knowledge_base.hpp"

#include <algorithm>
#include <deque>

#include "dlkb/errors.hpp"

namespace dlkb {

// ---- RBox ------------------------------------------------------------------

std::vector<SubRole> RBox::uniform_sub_roles() const {
  std::vector<SubRole> out = sub_roles;
  for (const auto& [role, inverse] : inverse_pairs) {
    out.push_back({{inverse, false}, {role, true}});
    out.push_back({{role, true}, {inverse, false}});
  }
  for (const auto& [a, b] : equivalent_roles) {
    out.push_back({{a, false}, {b, false}});
    out.push_back({{b, false}, {a, false}});
  }
  for (const std::string& r : symmetric) {
    out.push_back({{r, false}, {r, true}});
    out.push_back({{r, true}, {r, false}});
  }
  return out;
}

std::vector<Concept> RBox::global_restrictions() const {
  std::vector<Concept> out;
  for (const std::string& r : functional) out.push_back(Concept::at_most(1, {r, false}));
  for (const std::string& r : inverse_functional) {
    out.push_back(Concept::at_most(1, {r, true}));
  }
  return out;
}

std::set<SubRole> RBox::closure(const std::set<std::string>& role_names) const {
  std::vector<SubRole> base = uniform_sub_roles();
  std::set<RoleExpr> roles;
  for (const std::string& r : role_names) {
    roles.insert({r, false});
    roles.insert({r, true});
  }
  std::map<RoleExpr, std::vector<RoleExpr>> up;
  for (const SubRole& ax : base) {
    up[ax.sub].push_back(ax.super);
    up[ax.sub.inverse()].push_back(ax.super.inverse());
    for (const RoleExpr& r : {ax.sub, ax.super}) {
      roles.insert(r);
      roles.insert(r.inverse());
    }
  }
  std::set<SubRole> out;
  for (const RoleExpr& start : roles) {
    std::set<RoleExpr> seen{start};
    std::deque<RoleExpr> queue{start};
    while (!queue.empty()) {
      RoleExpr r = queue.front();
      queue.pop_front();
      out.insert({start, r});
      auto it = up.find(r);
      if (it == up.end()) continue;
      for (const RoleExpr& s : it->second) {
        if (seen.insert(s).second) queue.push_back(s);
      }
    }
  }
  return out;
}

// ---- KnowledgeBase ---------------------------------------------------------

void KnowledgeBase::declare_names_in(const Concept& c) {
  std::vector<std::string> names;
  collect_concept_names(c, names);
  for (const auto& n : names) declare_class(n);
  names.clear();
  collect_role_names(c, names);
  for (const auto& n : names) declare_role(n);
  names.clear();
  collect_data_properties(c, names);
  for (const auto& n : names) declare_data_property(n);
}

void KnowledgeBase::add(const TBoxAxiom& axiom) {
  std::visit(
      [this](const auto& ax) {
        using T = std::decay_t<decltype(ax)>;
        if constexpr (std::is_same_v<T, SubClassOf>) {
          declare_names_in(ax.sub);
          declare_names_in(ax.super);
          tbox_.push_back(ax);
        } else if constexpr (std::is_same_v<T, EquivalentClasses>) {
          declare_names_in(ax.a);
          declare_names_in(ax.b);
          tbox_.push_back(ax);
        } else if constexpr (std::is_same_v<T, DisjointClasses>) {
          add(SubClassOf{ax.a, Concept::negation(ax.b)});
        } else if constexpr (std::is_same_v<T, Domain>) {
          declare_role_expr(ax.role);
          add(SubClassOf{Concept::exists(ax.role, Concept::top()), ax.cls});
        } else if constexpr (std::is_same_v<T, Range>) {
          declare_role_expr(ax.role);
          add(SubClassOf{Concept::top(), Concept::forall(ax.role, ax.cls)});
        }
      },
      axiom);
}

void KnowledgeBase::add(const ABoxAssertion& assertion) {
  std::visit(
      [this](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, ClassAssertion>) {
          declare_names_in(a.cls);
          declare_individual(a.individual);
        } else if constexpr (std::is_same_v<T, RoleAssertion>) {
          declare_role_expr(a.role);
          declare_individual(a.subject);
          declare_individual(a.object);
        } else if constexpr (std::is_same_v<T, DataAssertion>) {
          declare_data_property(a.property);
          declare_individual(a.individual);
        } else if constexpr (std::is_same_v<T, SameAs>) {
          declare_individual(a.a);
          declare_individual(a.b);
        } else if constexpr (std::is_same_v<T, DifferentFrom>) {
          if (a.a == a.b) {
            throw KbError("individual '" + a.a + "' cannot be different from itself");
          }
          declare_individual(a.a);
          declare_individual(a.b);
        }
      },
      assertion);
  abox_.push_back(assertion);
}

void KnowledgeBase::declare_class(const std::string& name) { concept_names_.insert(name); }
void KnowledgeBase::declare_role(const std::string& name) { role_names_.insert(name); }
void KnowledgeBase::declare_individual(const std::string& name) {
  individual_names_.insert(name);
}
void KnowledgeBase::declare_data_property(const std::string& name) {
  data_properties_.insert(name);
}

void KnowledgeBase::add_sub_role(const RoleExpr& sub, const RoleExpr& super) {
  declare_role(sub.name);
  declare_role(super.name);
  SubRole ax{sub, super};
  if (std::find(rbox_.sub_roles.begin(), rbox_.sub_roles.end(), ax) ==
      rbox_.sub_roles.end()) {
    rbox_.sub_roles.push_back(ax);
  }
}

void KnowledgeBase::add_inverse_pair(const std::string& role, const std::string& inverse) {
  declare_role(role);
  declare_role(inverse);
  auto pair = std::make_pair(role, inverse);
  if (std::find(rbox_.inverse_pairs.begin(), rbox_.inverse_pairs.end(), pair) ==
      rbox_.inverse_pairs.end()) {
    rbox_.inverse_pairs.push_back(pair);
  }
}

void KnowledgeBase::add_equivalent_roles(const std::string& a, const std::string& b) {
  declare_role(a);
  declare_role(b);
  auto pair = std::make_pair(a, b);
  if (std::find(rbox_.equivalent_roles.begin(), rbox_.equivalent_roles.end(), pair) ==
      rbox_.equivalent_roles.end()) {
    rbox_.equivalent_roles.push_back(pair);
  }
}

void KnowledgeBase::set_transitive(const std::string& role) {
  declare_role(role);
  rbox_.transitive.insert(role);
}
void KnowledgeBase::set_functional(const std::string& role) {
  declare_role(role);
  rbox_.functional.insert(role);
}
void KnowledgeBase::set_inverse_functional(const std::string& role) {
  declare_role(role);
  rbox_.inverse_functional.insert(role);
}
void KnowledgeBase::set_symmetric(const std::string& role) {
  declare_role(role);
  rbox_.symmetric.insert(role);
}
void KnowledgeBase::set_functional_data(const std::string& property) {
  declare_data_property(property);
  functional_data_.insert(property);
}

void KnowledgeBase::set_label(const std::string& entity, const std::string& lang,
                              const std::string& text) {
  labels_[{entity, lang}] = text;
}

std::string KnowledgeBase::label(const std::string& entity,
                                 const std::string& lang) const {
  if (auto it = labels_.find({entity, lang}); it != labels_.end()) return it->second;
  if (auto it = labels_.find({entity, "en"}); it != labels_.end()) return it->second;
  return entity;
}

std::optional<std::string> KnowledgeBase::undeclared_nominal() const {
  std::vector<std::string> found;
  auto scan = [&](const Concept& c) -> std::optional<std::string> {
    found.clear();
    collect_individuals(c, found);
    for (const auto& ind : found) {
      if (!individual_names_.contains(ind)) return ind;
    }
    return std::nullopt;
  };
  for (const TBoxAxiom& ax : tbox_) {
    std::optional<std::string> bad;
    if (const auto* sub = std::get_if<SubClassOf>(&ax)) {
      if (!(bad = scan(sub->sub))) bad = scan(sub->super);
    } else if (const auto* eq = std::get_if<EquivalentClasses>(&ax)) {
      if (!(bad = scan(eq->a))) bad = scan(eq->b);
    }
    if (bad) return bad;
  }
  for (const ABoxAssertion& as : abox_) {
    if (const auto* ca = std::get_if<ClassAssertion>(&as)) {
      if (auto bad = scan(ca->cls)) return bad;
    }
  }
  return std::nullopt;
}

namespace {

template <typename T>
bool same_multiset(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const T& x : a) {
    bool matched = false;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!used[i] && b[i] == x) {
        used[i] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace

bool logically_identical(const KnowledgeBase& a, const KnowledgeBase& b) {
  if (a.concept_names() != b.concept_names() || a.role_names() != b.role_names() ||
      a.individual_names() != b.individual_names() ||
      a.data_property_names() != b.data_property_names() ||
      a.functional_data_properties() != b.functional_data_properties() ||
      a.labels() != b.labels()) {
    return false;
  }
  const RBox& ra = a.rbox();
  const RBox& rb = b.rbox();
  if (!same_multiset(ra.sub_roles, rb.sub_roles) ||
      !same_multiset(ra.inverse_pairs, rb.inverse_pairs) ||
      !same_multiset(ra.equivalent_roles, rb.equivalent_roles) ||
      ra.transitive != rb.transitive || ra.functional != rb.functional ||
      ra.inverse_functional != rb.inverse_functional || ra.symmetric != rb.symmetric) {
    return false;
  }
  return same_multiset(a.tbox(), b.tbox()) && same_multiset(a.abox(), b.abox());
}

// ---- Derived views ---------------------------------------------------------

SubClassOf build_closure_axiom(const std::string& cls, const RoleExpr& role,
                               const KnowledgeBase& kb) {
  std::vector<Concept> fillers;
  auto consider = [&](const Concept& c) {
    if (c.is(ConceptKind::Exists) && c.role() == role &&
        std::find(fillers.begin(), fillers.end(), c.child()) == fillers.end()) {
      fillers.push_back(c.child());
    }
  };
  const Concept self = Concept::atomic(cls);
  for (const TBoxAxiom& ax : kb.tbox()) {
    const auto* sub = std::get_if<SubClassOf>(&ax);
    if (sub == nullptr || sub->sub != self) continue;
    if (sub->super.is(ConceptKind::And)) {
      for (const Concept& op : sub->super.operands()) consider(op);
    } else {
      consider(sub->super);
    }
  }
  if (fillers.empty()) {
    throw NoExistentialFillers("class '" + cls + "' has no existential restriction on '" +
                               (role.inverted ? "inverse(" + role.name + ")" : role.name) +
                               "'");
  }
  return SubClassOf{self, Concept::forall(role, Concept::disjunction(std::move(fillers)))};
}

bool is_defined_class(const std::string& cls, const KnowledgeBase& kb) {
  const Concept self = Concept::atomic(cls);
  for (const TBoxAxiom& ax : kb.tbox()) {
    if (const auto* eq = std::get_if<EquivalentClasses>(&ax)) {
      if (eq->a == self || eq->b == self) return true;
    }
  }
  return false;
}

std::set<std::string> told_subsumers(const std::string& cls, const KnowledgeBase& kb) {
  // name -> directly told atomic superclasses
  std::map<std::string, std::vector<std::string>> told;
  auto record = [&](const Concept& lhs, const Concept& rhs) {
    if (!lhs.is(ConceptKind::Atomic)) return;
    if (rhs.is(ConceptKind::Atomic)) {
      told[lhs.name()].push_back(rhs.name());
    } else if (rhs.is(ConceptKind::And)) {
      for (const Concept& op : rhs.operands()) {
        if (op.is(ConceptKind::Atomic)) told[lhs.name()].push_back(op.name());
      }
    }
  };
  for (const TBoxAxiom& ax : kb.tbox()) {
    if (const auto* sub = std::get_if<SubClassOf>(&ax)) {
      record(sub->sub, sub->super);
    } else if (const auto* eq = std::get_if<EquivalentClasses>(&ax)) {
      record(eq->a, eq->b);
      record(eq->b, eq->a);
    }
  }
  std::set<std::string> out{cls};
  std::deque<std::string> queue{cls};
  while (!queue.empty()) {
    std::string current = queue.front();
    queue.pop_front();
    auto it = told.find(current);
    if (it == told.end()) continue;
    for (const std::string& up : it->second) {
      if (out.insert(up).second) queue.push_back(up);
    }
  }
  return out;
}

}  // namespace dlkb
