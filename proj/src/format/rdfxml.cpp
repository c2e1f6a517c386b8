#include "dlkb/rdfxml.hpp"

#include <expat.h>

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>

#include "dlkb/errors.hpp"

namespace dlkb {

namespace {

const std::string kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
const std::string kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
const std::string kOwl = "http://www.w3.org/2002/07/owl#";
const std::string kXsd = "http://www.w3.org/2001/XMLSchema#";
const std::string kXml = "http://www.w3.org/XML/1998/namespace";
const std::string kBase = "http://dlkb.local/kb";

// ---- a tiny DOM over expat ---------------------------------------------------

struct XmlNode {
  std::string ns, local;
  std::map<std::string, std::string> attrs;  // "ns local" or "local"
  std::string text;
  std::vector<std::unique_ptr<XmlNode>> kids;
  SourceLocation at;

  bool is(const std::string& n, const char* l) const { return ns == n && local == l; }
  const std::string* attr(const std::string& n, const char* l) const {
    auto it = attrs.find(n + " " + l);
    return it == attrs.end() ? nullptr : &it->second;
  }
  std::string qname() const { return ns.empty() ? local : ns + local; }
};

void split_name(const char* raw, std::string& ns, std::string& local) {
  std::string s(raw);
  auto sp = s.find(' ');
  if (sp == std::string::npos) {
    ns.clear();
    local = s;
  } else {
    ns = s.substr(0, sp);
    local = s.substr(sp + 1);
  }
}

struct Builder {
  XML_Parser parser;
  std::unique_ptr<XmlNode> root;
  std::vector<XmlNode*> stack;
  int shift_line = 0;        // line where text was spliced in
  int shift_after = 0;       // column after which positions are shifted
  int shift_by = 0;

  SourceLocation here() const {
    int line = static_cast<int>(XML_GetCurrentLineNumber(parser));
    int col = static_cast<int>(XML_GetCurrentColumnNumber(parser)) + 1;
    if (line == shift_line && col > shift_after) col = std::max(1, col - shift_by);
    return {line, col};
  }

  static void start(void* data, const char* name, const char** atts) {
    auto* b = static_cast<Builder*>(data);
    auto node = std::make_unique<XmlNode>();
    split_name(name, node->ns, node->local);
    for (int i = 0; atts[i]; i += 2) node->attrs[atts[i]] = atts[i + 1];
    node->at = b->here();
    XmlNode* raw = node.get();
    if (b->stack.empty()) {
      b->root = std::move(node);
    } else {
      b->stack.back()->kids.push_back(std::move(node));
    }
    b->stack.push_back(raw);
  }
  static void end(void* data, const char*) { static_cast<Builder*>(data)->stack.pop_back(); }
  static void chars(void* data, const char* s, int len) {
    auto* b = static_cast<Builder*>(data);
    if (!b->stack.empty()) b->stack.back()->text.append(s, len);
  }
};

const char* kEntities =
    "<!DOCTYPE rdf:RDF ["
    "<!ENTITY owl \"http://www.w3.org/2002/07/owl#\">"
    "<!ENTITY rdf \"http://www.w3.org/1999/02/22-rdf-syntax-ns#\">"
    "<!ENTITY rdfs \"http://www.w3.org/2000/01/rdf-schema#\">"
    "<!ENTITY xsd \"http://www.w3.org/2001/XMLSchema#\">]>";

const char* kEnvelope =
    "<rdf:RDF xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\""
    " xmlns:rdfs=\"http://www.w3.org/2000/01/rdf-schema#\""
    " xmlns:owl=\"http://www.w3.org/2002/07/owl#\""
    " xmlns:xsd=\"http://www.w3.org/2001/XMLSchema#\">";

// Paper fragments come without declarations; splice them in on the first
// line so that line numbers stay those of the input.
std::unique_ptr<XmlNode> parse_xml(std::string_view source) {
  std::string text(source);
  std::size_t insert_at = 0;
  if (text.rfind("<?xml", 0) == 0) {
    auto close = text.find("?>");
    if (close != std::string::npos) insert_at = close + 2;
  }
  std::string prefix;
  if (text.find("<!DOCTYPE") == std::string::npos) prefix += kEntities;
  const bool wrap = text.find("<rdf:RDF") == std::string::npos;
  if (wrap) prefix += kEnvelope;
  const int column_of_insert = static_cast<int>(insert_at) + 1;
  text.insert(insert_at, prefix);
  if (wrap) text += "</rdf:RDF>";

  Builder b;
  b.parser = XML_ParserCreateNS(nullptr, ' ');
  b.shift_line = 1;
  b.shift_after = column_of_insert + static_cast<int>(prefix.size()) - 1;
  b.shift_by = static_cast<int>(prefix.size());
  XML_SetUserData(b.parser, &b);
  XML_SetElementHandler(b.parser, &Builder::start, &Builder::end);
  XML_SetCharacterDataHandler(b.parser, &Builder::chars);
  const bool ok = XML_Parse(b.parser, text.data(), static_cast<int>(text.size()), 1) !=
                  XML_STATUS_ERROR;
  if (!ok) {
    SourceLocation at = b.here();
    std::string message = XML_ErrorString(XML_GetErrorCode(b.parser));
    XML_ParserFree(b.parser);
    throw ParseError(at, ParseErrorKind::UnexpectedToken, "malformed XML: " + message);
  }
  XML_ParserFree(b.parser);
  return std::move(b.root);
}

// ---- interpretation ----------------------------------------------------------

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void unsupported(const XmlNode& n, const std::string& why = "") {
  throw ParseError(n.at, ParseErrorKind::UnsupportedConstruct,
                   "unsupported element <" + n.qname() + ">" + (why.empty() ? "" : ": " + why));
}

[[noreturn]] void unexpected(const XmlNode& n, const std::string& why) {
  throw ParseError(n.at, ParseErrorKind::UnexpectedToken, "<" + n.qname() + ">: " + why);
}

class Importer {
 public:
  KnowledgeBase run(const XmlNode& root) {
    if (!root.is(kRdf, "RDF")) unsupported(root, "expected rdf:RDF root");
    for (const auto& k : root.kids) top_level(*k);
    return std::move(kb_);
  }

 private:
  std::string name_of(const std::string& iri, const XmlNode& where) {
    std::string name;
    auto hash = iri.rfind('#');
    if (hash != std::string::npos) {
      name = iri.substr(hash + 1);
    } else {
      auto slash = iri.rfind('/');
      name = slash == std::string::npos ? iri : iri.substr(slash + 1);
    }
    if (name.empty()) unexpected(where, "cannot take an entity name from '" + iri + "'");
    return name;
  }

  std::string about(const XmlNode& n) {
    if (const auto* a = n.attr(kRdf, "about")) return name_of(*a, n);
    if (const auto* a = n.attr(kRdf, "ID")) return *a;
    return {};
  }

  std::string resource(const XmlNode& n) {
    const auto* r = n.attr(kRdf, "resource");
    if (!r) unexpected(n, "expected rdf:resource");
    return *r;
  }

  Concept named_class(const std::string& iri, const XmlNode& where) {
    if (iri == kOwl + "Thing") return Concept::top();
    if (iri == kOwl + "Nothing") return Concept::bottom();
    return Concept::atomic(name_of(iri, where));
  }

  std::vector<const XmlNode*> elements(const XmlNode& n) {
    std::vector<const XmlNode*> out;
    for (const auto& k : n.kids) out.push_back(k.get());
    return out;
  }

  // Object of a property element that denotes a class.
  Concept filler(const XmlNode& prop) {
    if (const auto* r = prop.attr(kRdf, "resource")) return named_class(*r, prop);
    auto kids = elements(prop);
    if (kids.size() != 1) unexpected(prop, "expected one class description");
    return class_node(*kids[0]);
  }

  std::vector<Concept> collection(const XmlNode& n) {
    std::vector<Concept> out;
    for (const auto* k : elements(n)) out.push_back(class_node(*k));
    return out;
  }

  static bool is_constructor(const XmlNode& k) {
    if (k.ns == kOwl) {
      static const char* names[] = {"intersectionOf", "unionOf", "complementOf", "oneOf",
                                    "onProperty", "someValuesFrom", "allValuesFrom",
                                    "hasValue", "minCardinality", "maxCardinality",
                                    "cardinality"};
      return std::any_of(std::begin(names), std::end(names),
                         [&](const char* l) { return k.local == l; });
    }
    if (k.is(kRdf, "type")) {
      const auto* r = k.attr(kRdf, "resource");
      return r && (*r == kOwl + "Class" || *r == kOwl + "Restriction" || *r == kRdfs + "Class");
    }
    return false;
  }

  Concept class_node(const XmlNode& n) {
    Concept c = Concept::top();
    const std::string name = about(n);
    if (n.is(kOwl, "Class") || n.is(kRdf, "Description") || n.is(kRdfs, "Class")) {
      if (!name.empty()) {
        c = named_class(n.attr(kRdf, "about") ? *n.attr(kRdf, "about") : name, n);
        if (c.is(ConceptKind::Atomic)) kb_.declare_class(c.name());
      } else {
        c = anonymous_class(n);
      }
    } else if (n.is(kOwl, "Restriction")) {
      c = restriction(n);
    } else {
      unsupported(n);
    }
    class_axioms(n, c);
    return c;
  }

  Concept anonymous_class(const XmlNode& n) {
    for (const auto* k : elements(n)) {
      if (k->is(kOwl, "intersectionOf")) return Concept::conjunction(collection(*k));
      if (k->is(kOwl, "unionOf")) return Concept::disjunction(collection(*k));
      if (k->is(kOwl, "complementOf")) return Concept::negation(filler(*k));
      if (k->is(kOwl, "oneOf")) {
        std::vector<std::string> inds;
        for (const auto* i : elements(*k)) {
          std::string ind = about(*i);
          if (ind.empty()) unexpected(*i, "oneOf members need rdf:about");
          kb_.declare_individual(ind);
          inds.push_back(ind);
        }
        return Concept::one_of(std::move(inds));
      }
    }
    unsupported(n, "anonymous class without a constructor");
  }

  RoleExpr on_property(const XmlNode& n) {
    if (const auto* r = n.attr(kRdf, "resource")) return {name_of(*r, n), false};
    auto kids = elements(n);
    if (kids.size() == 1) {
      for (const auto* k : elements(*kids[0])) {
        if (k->is(kOwl, "inverseOf")) return {name_of(resource(*k), *k), true};
      }
    }
    unexpected(n, "expected a property");
  }

  static bool is_datatype_iri(const std::string& iri) {
    return iri.rfind(kXsd, 0) == 0 || iri == kRdfs + "Literal";
  }

  bool is_datatype_node(const XmlNode& n) {
    if (n.is(kRdfs, "Datatype")) return true;
    for (const auto* k : elements(n)) {
      if (k->is(kOwl, "onDatatype") || k->is(kOwl, "withRestrictions")) return true;
      if (k->is(kRdf, "type") && k->attr(kRdf, "resource") &&
          *k->attr(kRdf, "resource") == kRdfs + "Datatype") {
        return true;
      }
    }
    return false;
  }

  Decimal number(const XmlNode& n) {
    auto v = Decimal::parse(trim(n.text));
    if (!v) {
      throw ParseError(n.at, ParseErrorKind::MalformedNumber,
                       "malformed number '" + trim(n.text) + "'");
    }
    return *v;
  }

  NumericRange datatype_range(const XmlNode& n) {
    NumericRange range;
    for (const auto* k : elements(n)) {
      if (k->is(kOwl, "onDatatype")) {
        if (!is_datatype_iri(resource(*k))) unsupported(*k, "non-XSD datatype");
      } else if (k->is(kRdf, "type")) {
        // rdfs:Datatype
      } else if (k->is(kOwl, "withRestrictions")) {
        for (const auto* item : elements(*k)) {
          for (const auto* facet : elements(*item)) {
            std::optional<Decimal>* slot = nullptr;
            if (facet->is(kXsd, "minInclusive")) slot = &range.min_inclusive;
            if (facet->is(kXsd, "minExclusive")) slot = &range.min_exclusive;
            if (facet->is(kXsd, "maxInclusive")) slot = &range.max_inclusive;
            if (facet->is(kXsd, "maxExclusive")) slot = &range.max_exclusive;
            if (!slot) unsupported(*facet);
            *slot = number(*facet);
          }
        }
      } else {
        unsupported(*k);
      }
    }
    if (!range.well_formed()) unexpected(n, "two facets bound the same side");
    return range;
  }

  unsigned cardinality(const XmlNode& n) {
    const std::string t = trim(n.text);
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](char ch) { return ch >= '0' && ch <= '9'; }) ||
        t.size() > 9) {
      throw ParseError(n.at, ParseErrorKind::MalformedNumber, "malformed cardinality '" + t + "'");
    }
    return static_cast<unsigned>(std::stoul(t));
  }

  Concept restriction(const XmlNode& n) {
    const XmlNode* prop = nullptr;
    const XmlNode* value = nullptr;
    for (const auto* k : elements(n)) {
      if (k->is(kOwl, "onProperty")) {
        prop = k;
      } else if (is_constructor(*k) && !k->is(kRdf, "type")) {
        value = k;
      }
    }
    if (!prop || !value) unexpected(n, "restriction needs owl:onProperty and a value");
    const RoleExpr role = on_property(*prop);
    if (value->is(kOwl, "someValuesFrom")) {
      const auto* r = value->attr(kRdf, "resource");
      if (r && is_datatype_iri(*r)) {
        kb_.declare_data_property(role.name);
        return Concept::data_some(role.name, NumericRange{});
      }
      auto kids = elements(*value);
      if (!r && kids.size() == 1 && is_datatype_node(*kids[0])) {
        kb_.declare_data_property(role.name);
        return Concept::data_some(role.name, datatype_range(*kids[0]));
      }
      return Concept::exists(role, filler(*value));
    }
    if (value->is(kOwl, "allValuesFrom")) return Concept::forall(role, filler(*value));
    if (value->is(kOwl, "hasValue")) {
      if (!value->attr(kRdf, "resource")) unsupported(*value, "data values in hasValue");
      std::string ind = name_of(resource(*value), *value);
      kb_.declare_individual(ind);
      return Concept::has_value(role, ind);
    }
    const unsigned k = cardinality(*value);
    if (value->is(kOwl, "minCardinality")) return Concept::at_least(k, role);
    if (value->is(kOwl, "maxCardinality")) return Concept::at_most(k, role);
    if (value->is(kOwl, "cardinality")) {
      return Concept::conjunction({Concept::at_least(k, role), Concept::at_most(k, role)});
    }
    unsupported(*value);
  }

  void label(const XmlNode& k, const std::string& entity) {
    if (entity.empty()) unsupported(k, "label on an anonymous node");
    const auto* lang = k.attr(kXml, "lang");
    kb_.set_label(entity, lang ? *lang : "", trim(k.text));
  }

  void class_axioms(const XmlNode& n, const Concept& subject) {
    for (const auto* k : elements(n)) {
      if (is_constructor(*k)) continue;
      if (k->is(kRdfs, "subClassOf")) {
        kb_.add(SubClassOf{subject, filler(*k)});
      } else if (k->is(kOwl, "equivalentClass")) {
        kb_.add(EquivalentClasses{subject, filler(*k)});
      } else if (k->is(kOwl, "disjointWith")) {
        kb_.add(DisjointClasses{subject, filler(*k)});
      } else if (k->is(kRdfs, "label")) {
        label(*k, subject.is(ConceptKind::Atomic) ? subject.name() : "");
      } else {
        unsupported(*k);
      }
    }
  }

  void object_property(const XmlNode& n, const std::string& name) {
    if (name.empty()) unexpected(n, "property without rdf:about");
    kb_.declare_role(name);
    if (n.is(kOwl, "TransitiveProperty")) kb_.set_transitive(name);
    if (n.is(kOwl, "FunctionalProperty")) kb_.set_functional(name);
    if (n.is(kOwl, "InverseFunctionalProperty")) kb_.set_inverse_functional(name);
    if (n.is(kOwl, "SymmetricProperty")) kb_.set_symmetric(name);
    const RoleExpr self{name, false};
    for (const auto* k : elements(n)) {
      if (k->is(kRdfs, "subPropertyOf")) {
        kb_.add_sub_role(self, {name_of(resource(*k), *k), false});
      } else if (k->is(kOwl, "inverseOf")) {
        kb_.add_inverse_pair(name, name_of(resource(*k), *k));
      } else if (k->is(kOwl, "equivalentProperty")) {
        kb_.add_equivalent_roles(name, name_of(resource(*k), *k));
      } else if (k->is(kRdf, "type")) {
        const std::string t = resource(*k);
        if (t == kOwl + "TransitiveProperty") kb_.set_transitive(name);
        else if (t == kOwl + "FunctionalProperty") kb_.set_functional(name);
        else if (t == kOwl + "InverseFunctionalProperty") kb_.set_inverse_functional(name);
        else if (t == kOwl + "SymmetricProperty") kb_.set_symmetric(name);
        else if (t != kOwl + "ObjectProperty") unsupported(*k, "type " + t);
      } else if (k->is(kRdfs, "domain")) {
        kb_.add(Domain{self, filler(*k)});
      } else if (k->is(kRdfs, "range")) {
        kb_.add(Range{self, filler(*k)});
      } else if (k->is(kRdfs, "label")) {
        label(*k, name);
      } else {
        unsupported(*k);
      }
    }
  }

  void data_property(const XmlNode& n, const std::string& name) {
    if (name.empty()) unexpected(n, "property without rdf:about");
    kb_.declare_data_property(name);
    for (const auto* k : elements(n)) {
      if (k->is(kRdf, "type") && resource(*k) == kOwl + "FunctionalProperty") {
        kb_.set_functional_data(name);
      } else if (k->is(kRdfs, "label")) {
        label(*k, name);
      } else if (k->is(kRdfs, "range") && is_datatype_iri(resource(*k))) {
        // every data value is a decimal here
      } else {
        unsupported(*k);
      }
    }
  }

  void individual(const XmlNode& n, const std::string& name) {
    if (name.empty()) unexpected(n, "individual without rdf:about");
    kb_.declare_individual(name);
    for (const auto* k : elements(n)) {
      if (k->is(kRdf, "type")) {
        if (const auto* r = k->attr(kRdf, "resource")) {
          if (*r == kOwl + "NamedIndividual" || *r == kOwl + "Thing") continue;
          kb_.add(ClassAssertion{named_class(*r, *k), name});
        } else {
          kb_.add(ClassAssertion{filler(*k), name});
        }
      } else if (k->is(kOwl, "sameAs")) {
        kb_.add(SameAs{name, name_of(resource(*k), *k)});
      } else if (k->is(kOwl, "differentFrom")) {
        try {
          kb_.add(DifferentFrom{name, name_of(resource(*k), *k)});
        } catch (const KbError& e) {
          unexpected(*k, e.what());
        }
      } else if (k->is(kRdfs, "label")) {
        label(*k, name);
      } else if (k->ns == kRdf || k->ns == kRdfs || k->ns == kOwl) {
        unsupported(*k);
      } else if (const auto* r = k->attr(kRdf, "resource")) {
        kb_.add(RoleAssertion{{k->local, false}, name, name_of(*r, *k)});
      } else {
        kb_.add(DataAssertion{k->local, name, number(*k)});
      }
    }
  }

  // rdf:Description at the top: a class axiom, an individual, or labels.
  void description(const XmlNode& n) {
    bool class_like = n.attr(kRdf, "about") == nullptr;
    bool individual_like = false;
    for (const auto* k : elements(n)) {
      if (k->is(kRdfs, "subClassOf") || k->is(kOwl, "equivalentClass") ||
          k->is(kOwl, "disjointWith") || is_constructor(*k)) {
        class_like = true;
      } else if (!k->is(kRdfs, "label")) {
        individual_like = true;
      }
    }
    if (class_like) {
      class_node(n);
    } else if (individual_like) {
      individual(n, about(n));
    } else {
      for (const auto* k : elements(n)) label(*k, about(n));
    }
  }

  void top_level(const XmlNode& n) {
    const std::string name = about(n);
    if (n.is(kOwl, "Ontology")) return;
    if (n.is(kOwl, "Class") || n.is(kOwl, "Restriction") || n.is(kRdfs, "Class")) {
      class_node(n);
    } else if (n.is(kOwl, "ObjectProperty") || n.is(kOwl, "TransitiveProperty") ||
               n.is(kOwl, "FunctionalProperty") || n.is(kOwl, "InverseFunctionalProperty") ||
               n.is(kOwl, "SymmetricProperty")) {
      object_property(n, name);
    } else if (n.is(kOwl, "DatatypeProperty")) {
      data_property(n, name);
    } else if (n.is(kOwl, "NamedIndividual")) {
      individual(n, name);
    } else if (n.is(kRdf, "Description")) {
      description(n);
    } else {
      unsupported(n);
    }
  }

  KnowledgeBase kb_;
};

// ---- export ------------------------------------------------------------------

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

bool is_xml_name(const std::string& s) {
  if (s.empty()) return false;
  auto start = [](unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; };
  auto rest = [&](unsigned char c) {
    return start(c) || std::isdigit(c) || c == '-' || c == '.';
  };
  if (!start(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin() + 1, s.end(), [&](char c) { return rest(static_cast<unsigned char>(c)); });
}

class Exporter {
 public:
  explicit Exporter(const KnowledgeBase& kb) : kb_(kb) {}

  std::string run() {
    for (const auto& name : kb_.concept_names()) {
      open("owl:Class", about(name));
      labels(name);
      close("owl:Class");
    }
    const RBox& rbox = kb_.rbox();
    for (const auto& name : kb_.role_names()) {
      open("owl:ObjectProperty", about(name));
      if (rbox.transitive.contains(name)) type(kOwl + "TransitiveProperty");
      if (rbox.functional.contains(name)) type(kOwl + "FunctionalProperty");
      if (rbox.inverse_functional.contains(name)) type(kOwl + "InverseFunctionalProperty");
      if (rbox.symmetric.contains(name)) type(kOwl + "SymmetricProperty");
      for (const SubRole& s : rbox.sub_roles) {
        if (s.sub.inverted || s.super.inverted) {
          throw UnsupportedConstruct("RDF/XML export: sub-property axiom over an inverse role");
        }
        if (s.sub.name == name) empty("rdfs:subPropertyOf", resource(s.super.name));
      }
      for (const auto& [a, b] : rbox.inverse_pairs) {
        if (a == name) empty("owl:inverseOf", resource(b));
      }
      for (const auto& [a, b] : rbox.equivalent_roles) {
        if (a == name) empty("owl:equivalentProperty", resource(b));
      }
      labels(name);
      close("owl:ObjectProperty");
    }
    for (const auto& name : kb_.data_property_names()) {
      open("owl:DatatypeProperty", about(name));
      if (kb_.functional_data_properties().contains(name)) type(kOwl + "FunctionalProperty");
      labels(name);
      close("owl:DatatypeProperty");
    }
    for (const auto& ax : kb_.tbox()) {
      if (const auto* s = std::get_if<SubClassOf>(&ax)) {
        axiom(s->sub, "rdfs:subClassOf", s->super);
      } else if (const auto* e = std::get_if<EquivalentClasses>(&ax)) {
        axiom(e->a, "owl:equivalentClass", e->b);
      }
    }
    for (const auto& name : kb_.individual_names()) {
      open("owl:NamedIndividual", about(name));
      labels(name);
      close("owl:NamedIndividual");
    }
    for (const auto& a : kb_.abox()) assertion(a);

    std::ostringstream doc;
    doc << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    doc << "<rdf:RDF xmlns:rdf=\"" << kRdf << "\"\n         xmlns:owl=\"" << kOwl << '"';
    if (uses_rdfs_) doc << "\n         xmlns:rdfs=\"" << kRdfs << '"';
    if (uses_xsd_) doc << "\n         xmlns:xsd=\"" << kXsd << '"';
    if (uses_kb_) doc << "\n         xmlns:kb=\"" << kBase << "#\"";
    if (!body_.empty()) doc << "\n         xml:base=\"" << kBase << '"';
    doc << ">\n" << body_ << "</rdf:RDF>\n";
    return doc.str();
  }

 private:
  std::string about(const std::string& name) { return "rdf:about=\"#" + escape(name) + "\""; }
  std::string resource(const std::string& name) {
    return "rdf:resource=\"#" + escape(name) + "\"";
  }
  std::string iri_attr(const char* attr, const Concept& named) {
    if (named.is(ConceptKind::Top)) return std::string(attr) + "=\"" + kOwl + "Thing\"";
    if (named.is(ConceptKind::Bottom)) return std::string(attr) + "=\"" + kOwl + "Nothing\"";
    return std::string(attr) + "=\"#" + escape(named.name()) + "\"";
  }
  static bool is_named(const Concept& c) {
    return c.is(ConceptKind::Atomic) || c.is(ConceptKind::Top) || c.is(ConceptKind::Bottom);
  }

  void indent() { body_ += std::string(2 * (depth_ + 1), ' '); }
  void note(const std::string& tag) {
    if (tag.rfind("rdfs:", 0) == 0) uses_rdfs_ = true;
    if (tag.rfind("xsd:", 0) == 0) uses_xsd_ = true;
    if (tag.rfind("kb:", 0) == 0) uses_kb_ = true;
  }
  void open(const std::string& tag, const std::string& attrs = "") {
    note(tag);
    indent();
    body_ += '<' + tag + (attrs.empty() ? "" : " " + attrs) + ">\n";
    open_ends_.push_back(body_.size());
    ++depth_;
  }
  // An element that got no children is rewritten as self-closing.
  void close(const std::string& tag) {
    --depth_;
    const std::size_t end = open_ends_.back();
    open_ends_.pop_back();
    if (body_.size() == end) {
      body_.replace(end - 2, 2, "/>\n");
      return;
    }
    indent();
    body_ += "</" + tag + ">\n";
  }
  void empty(const std::string& tag, const std::string& attrs) {
    note(tag);
    indent();
    body_ += '<' + tag + ' ' + attrs + "/>\n";
  }
  void leaf(const std::string& tag, const std::string& attrs, const std::string& text) {
    note(tag);
    indent();
    body_ += '<' + tag + (attrs.empty() ? "" : " " + attrs) + '>' + escape(text) + "</" + tag +
             ">\n";
  }
  void type(const std::string& iri) { empty("rdf:type", "rdf:resource=\"" + iri + "\""); }

  void labels(const std::string& entity) {
    for (const auto& [key, text] : kb_.labels()) {
      if (key.first != entity) continue;
      leaf("rdfs:label", key.second.empty() ? "" : "xml:lang=\"" + escape(key.second) + "\"",
           text);
    }
  }

  // Property element whose object is c.
  void property(const std::string& tag, const Concept& c) {
    if (is_named(c)) {
      empty(tag, iri_attr("rdf:resource", c));
      return;
    }
    open(tag);
    node(c, nullptr, nullptr);
    close(tag);
  }

  void on_property(const RoleExpr& r) {
    if (!r.inverted) {
      empty("owl:onProperty", resource(r.name));
      return;
    }
    open("owl:onProperty");
    open("owl:ObjectProperty");
    empty("owl:inverseOf", resource(r.name));
    close("owl:ObjectProperty");
    close("owl:onProperty");
  }

  void collection(const std::string& tag, const std::vector<Concept>& ops) {
    open(tag, "rdf:parseType=\"Collection\"");
    for (const Concept& op : ops) node(op, nullptr, nullptr);
    close(tag);
  }

  // Node element describing c, optionally carrying one axiom property.
  void node(const Concept& c, const char* axiom_tag, const Concept* axiom_object) {
    auto finish = [&](const std::string& tag) {
      if (axiom_tag) property(axiom_tag, *axiom_object);
      close(tag);
    };
    const std::string card = "rdf:datatype=\"" + kXsd + "nonNegativeInteger\"";
    switch (c.kind()) {
      case ConceptKind::Top:
      case ConceptKind::Bottom:
      case ConceptKind::Atomic:
        if (!axiom_tag) {
          empty("rdf:Description", iri_attr("rdf:about", c));
          return;
        }
        open(c.is(ConceptKind::Atomic) ? "owl:Class" : "rdf:Description",
             iri_attr("rdf:about", c));
        finish(c.is(ConceptKind::Atomic) ? "owl:Class" : "rdf:Description");
        return;
      case ConceptKind::And:
      case ConceptKind::Or:
        open("owl:Class");
        collection(c.is(ConceptKind::And) ? "owl:intersectionOf" : "owl:unionOf", c.operands());
        finish("owl:Class");
        return;
      case ConceptKind::Not:
        open("owl:Class");
        property("owl:complementOf", c.child());
        finish("owl:Class");
        return;
      case ConceptKind::OneOf:
        open("owl:Class");
        open("owl:oneOf", "rdf:parseType=\"Collection\"");
        for (const auto& i : c.individuals()) empty("rdf:Description", about(i));
        close("owl:oneOf");
        finish("owl:Class");
        return;
      case ConceptKind::Exists:
      case ConceptKind::ForAll:
        open("owl:Restriction");
        on_property(c.role());
        property(c.is(ConceptKind::Exists) ? "owl:someValuesFrom" : "owl:allValuesFrom",
                 c.child());
        finish("owl:Restriction");
        return;
      case ConceptKind::HasValue:
        open("owl:Restriction");
        on_property(c.role());
        empty("owl:hasValue", resource(c.name()));
        finish("owl:Restriction");
        return;
      case ConceptKind::AtLeast:
      case ConceptKind::AtMost:
        open("owl:Restriction");
        on_property(c.role());
        leaf(c.is(ConceptKind::AtLeast) ? "owl:minCardinality" : "owl:maxCardinality", card,
             std::to_string(c.cardinality()));
        finish("owl:Restriction");
        return;
      case ConceptKind::DataSome:
        open("owl:Restriction");
        empty("owl:onProperty", resource(c.name()));
        data_range(c.range());
        finish("owl:Restriction");
        return;
    }
  }

  void data_range(const NumericRange& r) {
    if (!r.has_lower() && !r.has_upper()) {
      empty("owl:someValuesFrom", "rdf:resource=\"" + kXsd + "decimal\"");
      return;
    }
    open("owl:someValuesFrom");
    open("rdfs:Datatype");
    empty("owl:onDatatype", "rdf:resource=\"" + kXsd + "decimal\"");
    open("owl:withRestrictions", "rdf:parseType=\"Collection\"");
    auto facet = [&](const char* tag, const std::optional<Decimal>& v) {
      if (!v) return;
      open("rdf:Description");
      leaf(tag, "rdf:datatype=\"" + kXsd + "decimal\"", v->to_string());
      close("rdf:Description");
    };
    facet("xsd:minInclusive", r.min_inclusive);
    facet("xsd:minExclusive", r.min_exclusive);
    facet("xsd:maxInclusive", r.max_inclusive);
    facet("xsd:maxExclusive", r.max_exclusive);
    close("owl:withRestrictions");
    close("rdfs:Datatype");
    close("owl:someValuesFrom");
  }

  void axiom(const Concept& subject, const char* tag, const Concept& object) {
    note(tag);
    node(subject, tag, &object);
  }

  std::string property_tag(const std::string& name) {
    if (!is_xml_name(name)) {
      throw UnsupportedConstruct("RDF/XML export: property name '" + name +
                                 "' is not an XML name");
    }
    return "kb:" + name;
  }

  void assertion(const ABoxAssertion& a) {
    std::visit([&](const auto& x) {
      using T = std::decay_t<decltype(x)>;
      if constexpr (std::is_same_v<T, ClassAssertion>) {
        open("owl:NamedIndividual", about(x.individual));
        property("rdf:type", x.cls);
        close("owl:NamedIndividual");
      } else if constexpr (std::is_same_v<T, RoleAssertion>) {
        if (x.role.inverted) {
          throw UnsupportedConstruct("RDF/XML export: assertion over an inverse role");
        }
        open("owl:NamedIndividual", about(x.subject));
        empty(property_tag(x.role.name), resource(x.object));
        close("owl:NamedIndividual");
      } else if constexpr (std::is_same_v<T, DataAssertion>) {
        open("owl:NamedIndividual", about(x.individual));
        leaf(property_tag(x.property), "rdf:datatype=\"" + kXsd + "decimal\"",
             x.value.to_string());
        close("owl:NamedIndividual");
      } else {
        open("owl:NamedIndividual", about(x.a));
        empty(std::is_same_v<T, SameAs> ? "owl:sameAs" : "owl:differentFrom", resource(x.b));
        close("owl:NamedIndividual");
      }
    }, a);
  }

  const KnowledgeBase& kb_;
  std::string body_;
  std::vector<std::size_t> open_ends_;
  int depth_ = 0;
  bool uses_rdfs_ = false, uses_xsd_ = false, uses_kb_ = false;
};

}  // namespace

KnowledgeBase import_rdfxml(std::string_view source) {
  auto root = parse_xml(source);
  return Importer().run(*root);
}

std::string export_rdfxml(const KnowledgeBase& kb) { return Exporter(kb).run(); }

}  // namespace dlkb
