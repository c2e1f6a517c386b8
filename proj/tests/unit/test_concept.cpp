#include <random>

#include "doctest.h"
#include "dlkb/concept.hpp"
#include "dlkb/interpretation.hpp"
#include "dlkb/errors.hpp"
#include "generators.hpp"

using namespace dlkb;

namespace {

Concept A = Concept::atomic("A");
Concept B = Concept::atomic("B");
Concept C = Concept::atomic("C");
RoleExpr r{"r", false};

// Concept names may sit directly under Not only at the leaves.
bool negation_only_at_leaves(const Concept& c) {
  switch (c.kind()) {
    case ConceptKind::Not:
      return c.child().is(ConceptKind::Atomic) || c.child().is(ConceptKind::HasValue) ||
             c.child().is(ConceptKind::OneOf) || c.child().is(ConceptKind::DataSome);
    case ConceptKind::And:
    case ConceptKind::Or:
      for (const Concept& op : c.operands()) {
        if (!negation_only_at_leaves(op)) return false;
      }
      return true;
    case ConceptKind::Exists:
    case ConceptKind::ForAll:
      return negation_only_at_leaves(c.child());
    default:
      return true;
  }
}

}  // namespace

TEST_CASE("n-ary constructors collapse singletons and keep order") {
  CHECK(Concept::conjunction({A}) == A);
  CHECK(Concept::disjunction({B}) == B);
  CHECK(Concept::conjunction({}) == Concept::top());
  CHECK(Concept::disjunction({}) == Concept::bottom());
  CHECK(Concept::conjunction({A, B}) != Concept::conjunction({B, A}));
  CHECK(Concept::conjunction({A, B}).operands().size() == 2);
}

TEST_CASE("double inversion of a role is the base role") {
  CHECK(r.inverse().inverse() == r);
  CHECK(r.inverse() != r);
}

TEST_CASE("nnf examples") {
  CHECK(nnf(Concept::negation(Concept::conjunction({A, B}))) ==
        Concept::disjunction({Concept::negation(A), Concept::negation(B)}));
  CHECK(nnf(Concept::negation(Concept::exists(r, C))) ==
        Concept::forall(r, Concept::negation(C)));
  CHECK(nnf(Concept::negation(Concept::at_least(3, r))) == Concept::at_most(2, r));
  CHECK(nnf(Concept::negation(Concept::at_least(0, r))) == Concept::bottom());
  CHECK(nnf(Concept::negation(Concept::at_most(2, r))) == Concept::at_least(3, r));
  CHECK(nnf(Concept::negation(Concept::negation(A))) == A);
  CHECK(nnf(Concept::negation(Concept::top())) == Concept::bottom());
}

TEST_CASE("nnf is idempotent and pushes negation to the leaves") {
  std::mt19937 rng(7);
  testing::AlcShape shape;
  shape.inverses = true;
  for (int i = 0; i < 2000; ++i) {
    Concept c = testing::random_alc(rng, shape);
    Concept n = nnf(c);
    CHECK(nnf(n) == n);
    CHECK(negation_only_at_leaves(n));
  }
}

TEST_CASE("nnf preserves extensions on every small interpretation") {
  // Exhaustive over a reduced signature at |domain| = 3, random otherwise.
  std::mt19937 rng(11);
  testing::AlcShape small;
  small.atoms = {"A", "B"};
  small.roles = {"r"};
  small.max_depth = 3;
  std::vector<Concept> concepts;
  for (int i = 0; i < 12; ++i) concepts.push_back(testing::random_alc(rng, small));

  for (std::uint32_t code = 0; code < (1u << 15); ++code) {
    FiniteInterpretation in;
    in.domain_size = 3;
    std::size_t bit = 0;
    for (const char* a : {"A", "B"}) {
      auto& ext = in.concepts[a];
      for (Element x = 0; x < 3; ++x, ++bit) {
        if (code >> bit & 1) ext.insert(x);
      }
    }
    auto& edges = in.roles["r"];
    for (Element x = 0; x < 3; ++x) {
      for (Element y = 0; y < 3; ++y, ++bit) {
        if (code >> bit & 1) edges.insert({x, y});
      }
    }
    for (const Concept& c : concepts) {
      if (evaluate(c, in) != evaluate(nnf(c), in)) {
        FAIL("nnf changed the extension");
      }
    }
  }

  testing::AlcShape full;
  full.inverses = true;
  for (int i = 0; i < 1500; ++i) {
    Concept c = testing::random_alc(rng, full);
    std::size_t size = 1 + i % 3;
    FiniteInterpretation in = testing::random_interpretation(rng, size, full);
    CHECK(evaluate(c, in) == evaluate(nnf(c), in));
  }
}

TEST_CASE("evaluate follows the semantics table") {
  FiniteInterpretation in;
  in.domain_size = 3;
  in.concepts["A"] = {0, 2};
  in.concepts["B"] = {2};
  in.roles["r"] = {{0, 1}, {0, 2}, {2, 2}};
  in.individuals["a"] = 1;

  CHECK(evaluate(Concept::top(), in) == Extension{0, 1, 2});
  CHECK(evaluate(Concept::negation(A), in) == Extension{1});
  CHECK(evaluate(Concept::exists(r, B), in) == Extension{0, 2});
  CHECK(evaluate(Concept::forall(r, A), in) == Extension{1, 2});
  CHECK(evaluate(Concept::exists(r.inverse(), A), in) == Extension{1, 2});
  CHECK(evaluate(Concept::at_least(2, r), in) == Extension{0});
  CHECK(evaluate(Concept::at_most(0, r), in) == Extension{1});
  CHECK(evaluate(Concept::has_value(r, "a"), in) == Extension{0});
  CHECK(evaluate(Concept::one_of({"a"}), in) == Extension{1});
  CHECK_THROWS_AS(evaluate(Concept::atomic("Z"), in), UnmappedName);

  NumericRange at_least_four;
  at_least_four.min_inclusive = *Decimal::parse("4");
  in.data["hasCore"].emplace(0, *Decimal::parse("12"));
  in.data["hasCore"].emplace(1, *Decimal::parse("2"));
  CHECK(evaluate(Concept::data_some("hasCore", at_least_four), in) == Extension{0});
  CHECK(evaluate(Concept::data_some("other", at_least_four), in).empty());
}

TEST_CASE("universal restrictions distribute over conjunction") {
  std::mt19937 rng(3);
  testing::AlcShape shape;
  shape.max_depth = 2;
  for (int i = 0; i < 300; ++i) {
    Concept c = testing::random_alc(rng, shape);
    Concept d = testing::random_alc(rng, shape);
    FiniteInterpretation in = testing::random_interpretation(rng, 1 + i % 3, shape);
    Concept lhs = Concept::conjunction({Concept::forall(r, c), Concept::forall(r, d)});
    Concept rhs = Concept::forall(r, Concept::conjunction({c, d}));
    CHECK(evaluate(lhs, in) == evaluate(rhs, in));
  }
}

TEST_CASE("numeric ranges") {
  auto dec = [](const char* s) { return *Decimal::parse(s); };
  NumericRange r1;
  r1.min_inclusive = dec("4");
  CHECK(r1.contains(dec("12")));
  CHECK(r1.contains(dec("4")));
  CHECK_FALSE(r1.contains(dec("3.99")));

  NumericRange boundary;
  boundary.min_inclusive = dec("4");
  boundary.max_exclusive = dec("4");
  CHECK(boundary.empty());

  NumericRange point;
  point.min_inclusive = dec("0");
  point.max_inclusive = dec("0");
  CHECK_FALSE(point.empty());
  CHECK(point.contains(dec("0.000")));

  CHECK(dec("1.50") == dec("1.5"));
  CHECK(dec("-0.1") < dec("0"));
  CHECK(dec("1.5").to_string() == "1.5");
  CHECK_FALSE(Decimal::parse("1.2.3").has_value());
  CHECK_FALSE(Decimal::parse("abc").has_value());
}
