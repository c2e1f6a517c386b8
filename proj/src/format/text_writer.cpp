#include <sstream>

#include "dlkb/text_format.hpp"

namespace dlkb {

namespace {

enum Precedence { kOr = 1, kAnd = 2, kUnary = 3, kAtom = 4 };

int precedence(const Concept& c) {
  switch (c.kind()) {
    case ConceptKind::Or: return kOr;
    case ConceptKind::And: return kAnd;
    case ConceptKind::Not:
    case ConceptKind::Exists:
    case ConceptKind::ForAll:
    case ConceptKind::AtLeast:
    case ConceptKind::AtMost:
    case ConceptKind::HasValue:
    case ConceptKind::DataSome:
      return kUnary;
    default:
      return kAtom;
  }
}

void write(std::ostream& out, const Concept& c);

// Operands of an n-ary node, and fillers, are parenthesized unless atomic
// so that nesting survives a round trip.
void write_operand(std::ostream& out, const Concept& c) {
  if (precedence(c) == kAtom) {
    write(out, c);
  } else {
    out << '(';
    write(out, c);
    out << ')';
  }
}

void write_nary_operand(std::ostream& out, const Concept& c) {
  if (precedence(c) <= kAnd) {
    out << '(';
    write(out, c);
    out << ')';
  } else {
    write(out, c);
  }
}

void write_range(std::ostream& out, const NumericRange& r) {
  out << "range[";
  bool first = true;
  auto facet = [&](const char* op, const std::optional<Decimal>& v) {
    if (!v) return;
    if (!first) out << ", ";
    first = false;
    out << op << ' ' << v->to_string();
  };
  facet(">=", r.min_inclusive);
  facet(">", r.min_exclusive);
  facet("<=", r.max_inclusive);
  facet("<", r.max_exclusive);
  out << ']';
}

void write(std::ostream& out, const Concept& c) {
  switch (c.kind()) {
    case ConceptKind::Top: out << "Thing"; return;
    case ConceptKind::Bottom: out << "Nothing"; return;
    case ConceptKind::Atomic: out << quote_name(c.name()); return;
    case ConceptKind::Not:
      out << "not ";
      write_operand(out, c.child());
      return;
    case ConceptKind::And:
    case ConceptKind::Or: {
      const char* sep = c.is(ConceptKind::And) ? " and " : " or ";
      bool first = true;
      for (const Concept& op : c.operands()) {
        if (!first) out << sep;
        first = false;
        write_nary_operand(out, op);
      }
      return;
    }
    case ConceptKind::Exists:
    case ConceptKind::ForAll:
      out << to_text(c.role()) << (c.is(ConceptKind::Exists) ? " some " : " only ");
      write_operand(out, c.child());
      return;
    case ConceptKind::AtLeast:
      out << to_text(c.role()) << " min " << c.cardinality();
      return;
    case ConceptKind::AtMost:
      out << to_text(c.role()) << " max " << c.cardinality();
      return;
    case ConceptKind::HasValue:
      out << to_text(c.role()) << " value " << quote_name(c.name());
      return;
    case ConceptKind::OneOf: {
      out << '{';
      bool first = true;
      for (const auto& ind : c.individuals()) {
        if (!first) out << ", ";
        first = false;
        out << quote_name(ind);
      }
      out << '}';
      return;
    }
    case ConceptKind::DataSome:
      out << quote_name(c.name()) << " some ";
      write_range(out, c.range());
      return;
  }
}

std::string quoted_text(const std::string& text) {
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void write_labels(std::ostream& out, const KnowledgeBase& kb, const std::string& entity) {
  bool first = true;
  for (const auto& [key, text] : kb.labels()) {
    if (key.first != entity) continue;
    out << (first ? "    Annotations: " : ",\n        ");
    first = false;
    out << "label " << quoted_text(text) << '@' << key.second;
  }
  if (!first) out << '\n';
}

bool is_domain_shape(const SubClassOf& ax) {
  return ax.sub.is(ConceptKind::Exists) && !ax.sub.role().inverted &&
         ax.sub.child().is(ConceptKind::Top);
}

bool is_range_shape(const SubClassOf& ax) {
  return ax.sub.is(ConceptKind::Top) && ax.super.is(ConceptKind::ForAll) &&
         !ax.super.role().inverted;
}

}  // namespace

std::string to_text(const Concept& c) {
  std::ostringstream out;
  write(out, c);
  return out.str();
}

std::string to_text(const RoleExpr& r) {
  return r.inverted ? "inverse(" + quote_name(r.name) + ")" : quote_name(r.name);
}

std::string serialize_text(const KnowledgeBase& kb) {
  std::ostringstream out;
  out << "# dlkb knowledge base\n";
  const RBox& rbox = kb.rbox();

  for (const std::string& r : kb.role_names()) {
    out << "\nObjectProperty: " << quote_name(r) << '\n';
    write_labels(out, kb, r);
    for (const SubRole& ax : rbox.sub_roles) {
      if (ax.sub.name != r) continue;
      out << (ax.sub.inverted ? "    InverseSubPropertyOf: " : "    SubPropertyOf: ")
          << to_text(ax.super) << '\n';
    }
    for (const auto& [role, inverse] : rbox.inverse_pairs) {
      if (role == r) out << "    InverseOf: " << quote_name(inverse) << '\n';
    }
    for (const auto& [a, b] : rbox.equivalent_roles) {
      if (a == r) out << "    EquivalentTo: " << quote_name(b) << '\n';
    }
    std::vector<const char*> chars;
    if (rbox.transitive.contains(r)) chars.push_back("Transitive");
    if (rbox.functional.contains(r)) chars.push_back("Functional");
    if (rbox.inverse_functional.contains(r)) chars.push_back("InverseFunctional");
    if (rbox.symmetric.contains(r)) chars.push_back("Symmetric");
    if (!chars.empty()) {
      out << "    Characteristics: ";
      for (std::size_t i = 0; i < chars.size(); ++i) out << (i ? ", " : "") << chars[i];
      out << '\n';
    }
    for (const TBoxAxiom& ax : kb.tbox()) {
      const auto* sub = std::get_if<SubClassOf>(&ax);
      if (sub == nullptr) continue;
      if (is_domain_shape(*sub) && sub->sub.role().name == r) {
        out << "    Domain: " << to_text(sub->super) << '\n';
      } else if (is_range_shape(*sub) && sub->super.role().name == r) {
        out << "    Range: " << to_text(sub->super.child()) << '\n';
      }
    }
  }

  for (const std::string& p : kb.data_property_names()) {
    out << "\nDataProperty: " << quote_name(p) << '\n';
    write_labels(out, kb, p);
    if (kb.functional_data_properties().contains(p)) {
      out << "    Characteristics: Functional\n";
    }
  }

  for (const std::string& cls : kb.concept_names()) {
    out << "\nClass: " << quote_name(cls) << '\n';
    write_labels(out, kb, cls);
    const Concept self = Concept::atomic(cls);
    for (const TBoxAxiom& ax : kb.tbox()) {
      if (const auto* sub = std::get_if<SubClassOf>(&ax); sub && sub->sub == self) {
        out << "    SubClassOf: " << to_text(sub->super) << '\n';
      } else if (const auto* eq = std::get_if<EquivalentClasses>(&ax); eq && eq->a == self) {
        out << "    EquivalentTo: " << to_text(eq->b) << '\n';
      }
    }
  }

  for (const std::string& ind : kb.individual_names()) {
    out << "\nIndividual: " << quote_name(ind) << '\n';
    write_labels(out, kb, ind);
    for (const ABoxAssertion& as : kb.abox()) {
      if (const auto* ca = std::get_if<ClassAssertion>(&as); ca && ca->individual == ind) {
        out << "    Types: " << to_text(ca->cls) << '\n';
      } else if (const auto* ra = std::get_if<RoleAssertion>(&as);
                 ra && ra->subject == ind) {
        out << "    Facts: " << to_text(ra->role) << ' ' << quote_name(ra->object) << '\n';
      } else if (const auto* da = std::get_if<DataAssertion>(&as);
                 da && da->individual == ind) {
        out << "    Facts: " << quote_name(da->property) << ' ' << da->value.to_string()
            << '\n';
      } else if (const auto* sa = std::get_if<SameAs>(&as); sa && sa->a == ind) {
        out << "    SameAs: " << quote_name(sa->b) << '\n';
      } else if (const auto* df = std::get_if<DifferentFrom>(&as); df && df->a == ind) {
        out << "    DifferentFrom: " << quote_name(df->b) << '\n';
      }
    }
  }

  for (const TBoxAxiom& ax : kb.tbox()) {
    std::string line;
    if (const auto* sub = std::get_if<SubClassOf>(&ax)) {
      if (sub->sub.is(ConceptKind::Atomic) || is_domain_shape(*sub) ||
          is_range_shape(*sub)) {
        continue;
      }
      line = "GeneralAxiom: " + to_text(sub->sub) + "\n    SubClassOf: " +
             to_text(sub->super) + '\n';
    } else if (const auto* eq = std::get_if<EquivalentClasses>(&ax)) {
      if (eq->a.is(ConceptKind::Atomic)) continue;
      line = "GeneralAxiom: " + to_text(eq->a) + "\n    EquivalentTo: " +
             to_text(eq->b) + '\n';
    }
    out << '\n' << line;
  }
  return out.str();
}

}  // namespace dlkb
