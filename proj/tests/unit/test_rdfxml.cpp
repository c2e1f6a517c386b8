#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "dlkb/errors.hpp"
#include "dlkb/rdfxml.hpp"
#include "dlkb/text_format.hpp"

using namespace dlkb;

namespace {

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(DLKB_SOURCE_DIR) + "/" + rel);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Concept atom(const char* n) { return Concept::atomic(n); }
RoleExpr role(const char* n) { return {n, false}; }

template <class T>
std::vector<T> axioms_of(const KnowledgeBase& kb) {
  std::vector<T> out;
  for (const auto& ax : kb.tbox()) {
    if (const auto* a = std::get_if<T>(&ax)) out.push_back(*a);
  }
  return out;
}

void check_round_trips(const KnowledgeBase& kb) {
  const KnowledgeBase back = import_rdfxml(export_rdfxml(kb));
  CHECK(logically_identical(kb, back));
  CHECK(export_rdfxml(back) == export_rdfxml(kb));
  const std::string text = serialize_text(kb);
  CHECK(serialize_text(parse_text(text)) == text);
}

}  // namespace

TEST_CASE("existential PoorVisibility snippet: three SubClassOf axioms") {
  KnowledgeBase kb = import_rdfxml(slurp("data/snippets/poor_visibility_existentials.xml"));
  auto subs = axioms_of<SubClassOf>(kb);
  REQUIRE(subs.size() == 3);
  CHECK(kb.tbox().size() == 3);
  const char* fillers[] = {"FoggyCondition", "RainyCondition", "SnowyCondition"};
  for (int i = 0; i < 3; ++i) {
    CHECK(subs[i].sub == atom("PoorVisibilityDanger"));
    CHECK(subs[i].super == Concept::exists(role("hasPrecipitationCondition"), atom(fillers[i])));
  }
  CHECK(kb.label("PoorVisibilityDanger", "en") == "PoorVisibilityDanger");
  check_round_trips(kb);
}

TEST_CASE("closure snippet: one universal over a three-way union") {
  KnowledgeBase kb = import_rdfxml(slurp("data/snippets/poor_visibility_closure.xml"));
  auto subs = axioms_of<SubClassOf>(kb);
  REQUIRE(subs.size() == 1);
  CHECK(kb.tbox().size() == 1);
  CHECK(subs[0].super ==
        Concept::forall(role("hasPrecipitationCondition"),
                        Concept::disjunction({atom("FoggyCondition"), atom("RainyCondition"),
                                              atom("SnowyCondition")})));
  check_round_trips(kb);
}

TEST_CASE("GoodCPU snippet: one EquivalentClasses with the data facet") {
  KnowledgeBase kb = import_rdfxml(slurp("data/snippets/goodcpu.xml"));
  auto eqs = axioms_of<EquivalentClasses>(kb);
  REQUIRE(eqs.size() == 1);
  CHECK(kb.tbox().size() == 1);
  NumericRange four;
  four.min_inclusive = Decimal(4);
  const Concept expected = Concept::conjunction(
      {Concept::top(), Concept::exists(role("createdBy"), atom("ChipManufacturer")),
       Concept::exists(role("madeOf"), atom("Metalloid")),
       Concept::forall(role("hasFeature"),
                       Concept::disjunction({Concept::negation(atom("x86Arch")),
                                             Concept::data_some("hasCore", four)}))});
  CHECK(eqs[0].a == atom("GoodCPU"));
  CHECK(eqs[0].b == expected);
  CHECK(kb.data_property_names() == std::set<std::string>{"hasCore"});
  check_round_trips(kb);
}

TEST_CASE("constructor fragments") {
  auto kb = import_rdfxml(R"(<owl:Class rdf:about="#HumanMale">
  <owl:equivalentClass>
    <owl:Class>
      <owl:intersectionOf rdf:parseType="Collection">
        <rdf:Description rdf:about="#Human"/>
        <rdf:Description rdf:about="#Male"/>
      </owl:intersectionOf>
    </owl:Class>
  </owl:equivalentClass>
</owl:Class>
<owl:Class rdf:about="#American">
  <rdfs:subClassOf>
    <owl:Restriction>
      <owl:onProperty rdf:resource="#isCitizenOf"/>
      <owl:hasValue rdf:resource="#USA"/>
    </owl:Restriction>
  </rdfs:subClassOf>
</owl:Class>)");
  auto eqs = axioms_of<EquivalentClasses>(kb);
  REQUIRE(eqs.size() == 1);
  CHECK(eqs[0].b == Concept::conjunction({atom("Human"), atom("Male")}));
  auto subs = axioms_of<SubClassOf>(kb);
  REQUIRE(subs.size() == 1);
  CHECK(subs[0].super == Concept::has_value(role("isCitizenOf"), "USA"));
  CHECK(kb.individual_names().contains("USA"));
  check_round_trips(kb);
}

TEST_CASE("export of an empty KB is a bare envelope") {
  const std::string doc = export_rdfxml(KnowledgeBase{});
  CHECK(doc.find("<rdf:RDF") != std::string::npos);
  CHECK(doc.find("xmlns:owl=") != std::string::npos);
  CHECK(doc.find("xmlns:rdfs") == std::string::npos);
  CHECK(logically_identical(import_rdfxml(doc), KnowledgeBase{}));
}

TEST_CASE("conjunction exports as intersectionOf with Description members") {
  KnowledgeBase kb;
  kb.add(SubClassOf{atom("X"), Concept::conjunction({atom("Human"), atom("Male")})});
  const std::string doc = export_rdfxml(kb);
  CHECK(doc.find("<owl:intersectionOf rdf:parseType=\"Collection\">") != std::string::npos);
  CHECK(doc.find("<rdf:Description rdf:about=\"#Human\"/>") != std::string::npos);
}

TEST_CASE("bundled ontology and the CPU example survive export and import") {
  check_round_trips(parse_text(slurp("data/traffic.kb")));
  check_round_trips(parse_text(slurp("data/goodcpu.kb")));
}

TEST_CASE("every constructor round trips") {
  KnowledgeBase kb = parse_text(R"(
ObjectProperty: r
    Characteristics: Transitive Functional
    SubPropertyOf: s
ObjectProperty: s
    InverseOf: t
    Domain: A
    Range: B
DataProperty: d
    Characteristics: Functional
Class: A
    SubClassOf: r min 2, r max 3, inverse(r) some B, s value a, {a, b}, r exactly 1
    DisjointWith: B
Class: B
    EquivalentTo: d some range[> 1.5, <= 7]
Individual: a
    Types: A or not B
    Facts: r b, d 3.25
    DifferentFrom: b
Individual: b
    SameAs: c
Individual: c
)");
  check_round_trips(kb);
}

TEST_CASE("import errors") {
  SUBCASE("malformed XML carries a location") {
    try {
      import_rdfxml("<owl:Class rdf:about=\"#A\">\n  <rdfs:subClassOf>\n</owl:Class>");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.kind() == ParseErrorKind::UnexpectedToken);
      CHECK(e.location().line == 3);
    }
  }
  SUBCASE("unknown elements name themselves") {
    try {
      import_rdfxml("<owl:AllDifferent/>");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.kind() == ParseErrorKind::UnsupportedConstruct);
      CHECK(std::string(e.what()).find("AllDifferent") != std::string::npos);
    }
  }
  SUBCASE("restriction without a value") {
    CHECK_THROWS_AS(import_rdfxml(R"(<owl:Class rdf:about="#A"><rdfs:subClassOf>
      <owl:Restriction><owl:onProperty rdf:resource="#r"/></owl:Restriction>
      </rdfs:subClassOf></owl:Class>)"),
                    ParseError);
  }
  SUBCASE("bad facet number") {
    try {
      import_rdfxml(R"(<owl:Class rdf:about="#A"><rdfs:subClassOf><owl:Restriction>
        <owl:onProperty rdf:resource="#d"/><owl:someValuesFrom><rdfs:Datatype>
        <owl:withRestrictions rdf:parseType="Collection"><rdf:Description>
        <xsd:minInclusive>4x</xsd:minInclusive></rdf:Description></owl:withRestrictions>
        </rdfs:Datatype></owl:someValuesFrom></owl:Restriction></rdfs:subClassOf></owl:Class>)");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.kind() == ParseErrorKind::MalformedNumber);
    }
  }
}

TEST_CASE("export rejects what the subset cannot say") {
  KnowledgeBase kb;
  kb.add(RoleAssertion{role("r").inverse(), "a", "b"});
  CHECK_THROWS_AS(export_rdfxml(kb), UnsupportedConstruct);
}
