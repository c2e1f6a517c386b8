#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dlkb/reasoner.hpp"
#include "dlkb/store.hpp"
#include "dlkb/text_format.hpp"

using namespace dlkb;

namespace {

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(DLKB_SOURCE_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KnowledgeBase traffic() { return parse_text(slurp("data/traffic.kb")); }
Store sample() { return load_store(std::string(DLKB_SOURCE_DIR) + "/data/sample_store.json"); }

// 30-020 / Szpitalna / StareMiasto with HighCongestionCondition assigned.
Store tutorial() {
  Store s;
  s.streets = {{1, "Szpitalna"}};
  s.districts = {{1, "StareMiasto"}};
  s.postal_codes = {{1, "30-020"}};
  s.street_2_district = {{1, 1}};
  s.street_2_postal_code = {{1, 1}};
  s.traffic_conditions = {{1, std::nullopt, "CongestionCondition", ""},
                          {2, 1, "HighCongestionCondition", ""}};
  s.traffic_condition_2_postal_code = {{2, 1}};
  return s;
}

Concept danger_query(const std::string& location) {
  const RoleExpr has_condition{"hasCondition", false};
  const RoleExpr has_location{"hasLocation", false};
  return Concept::conjunction(
      {Concept::atomic("TrafficDanger"),
       Concept::exists(has_condition, Concept::exists(has_location, Concept::one_of({location})))});
}

std::string expect_store_error(const std::string& text) {
  try {
    store_from_json(text);
  } catch (const StoreError& e) {
    return e.what();
  }
  FAIL("no StoreError");
  return {};
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const char* name) : path(std::filesystem::temp_directory_path() / name) {}
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("sha1 test vectors") {
  CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
  CHECK(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
  CHECK(sha1_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "84983e441c3bd26ebaae4aa1f95129e5e54670f1");
  CHECK(sha1_hex(std::string(1000000, 'a')) == "34aa973cd4c4daa4f61eeb2bdbad27316534016f");
}

TEST_CASE("sample store credentials") {
  const Store s = sample();
  CHECK(verify_credentials(s, "sa", "traffic"));
  CHECK_FALSE(verify_credentials(s, "sa", "wrong"));
  CHECK_FALSE(verify_credentials(s, "ghost", "traffic"));
  // digest produced outside this code base
  CHECK(s.access.at(0).password_digest == "c8ab51895da8a2a3ea04f31bd7e317af88596327");
}

TEST_CASE("store round trip") {
  const Store s = sample();
  CHECK(s.postal_code_by_value("30-020") != nullptr);
  CHECK(s.condition_by_name("HighCongestionCondition")->parent_id == 14);
  CHECK(store_from_json(store_to_json(s)) == s);

  TempFile f("dlkb_store_roundtrip.json");
  save_store(s, f.path);
  CHECK(load_store(f.path) == s);
  CHECK_FALSE(std::filesystem::exists(f.path.string() + ".tmp"));

  const Store empty = store_from_json(R"({"schema_version": 1})");
  CHECK(empty == Store{});
  CHECK(store_from_json(store_to_json(empty)) == empty);
}

TEST_CASE("store validation") {
  CHECK(expect_store_error("{").find("not valid JSON") != std::string::npos);
  CHECK(expect_store_error(R"({"schema_version": 2})").find("schema_version") != std::string::npos);
  CHECK(expect_store_error(R"({"streets": []})").find("schema_version") != std::string::npos);

  const std::string dangling = R"({"schema_version": 1,
    "streets": [{"id": 1, "name": "Szpitalna"}],
    "districts": [{"id": 1, "name": "StareMiasto"}],
    "street_2_district": [{"street_id": 1, "district_id": 1}, {"street_id": 7, "district_id": 1}]})";
  const std::string msg = expect_store_error(dangling);
  CHECK(msg.find("street_2_district row 2") != std::string::npos);
  CHECK(msg.find("street_id 7") != std::string::npos);

  CHECK(expect_store_error(R"({"schema_version": 1, "streets": [{"id": 1, "name": "a"}, {"id": 1, "name": "b"}]})")
            .find("streets row 2: duplicate id") != std::string::npos);
  CHECK(expect_store_error(R"({"schema_version": 1, "postal_codes": [{"id": 1, "value": "x"}, {"id": 2, "value": "x"}]})")
            .find("duplicate value") != std::string::npos);
  CHECK(expect_store_error(R"({"schema_version": 1, "traffic_conditions": [
            {"id": 1, "parent_id": 2, "name": "A"}, {"id": 2, "parent_id": 1, "name": "B"}]})")
            .find("cycle") != std::string::npos);
  CHECK(expect_store_error(R"({"schema_version": 1, "access": [{"id": 1, "username": "sa", "password": "traffic"}]})")
            .find("access row 1") != std::string::npos);
  CHECK(expect_store_error(R"({"schema_version": 1, "streets": [{"id": "1", "name": "a"}]})")
            .find("'id' must be an integer") != std::string::npos);
  CHECK_THROWS_AS(load_store("/nonexistent/store.json"), StoreError);
}

TEST_CASE("update_assignments") {
  const Store s = sample();
  const int code = s.postal_code_by_value("30-147")->id;
  const int rain = s.condition_by_name("RainyCondition")->id;
  const int drainage = s.condition_by_name("DamagedDrainageCondition")->id;

  Store u = update_assignments(s, code, {rain, drainage});
  CHECK(u.traffic_condition_2_postal_code.size() == 3);
  CHECK(s.traffic_condition_2_postal_code.size() == 1);
  // other postal codes untouched, mappings untouched
  CHECK(u.traffic_condition_2_postal_code.front() == s.traffic_condition_2_postal_code.front());
  CHECK(u.street_2_postal_code == s.street_2_postal_code);

  Store cleared = update_assignments(u, code, {});
  CHECK(cleared.traffic_condition_2_postal_code == s.traffic_condition_2_postal_code);

  const int high = s.condition_by_name("HighCongestionCondition")->id;
  Store only = update_assignments(Store{s.streets, s.districts, s.postal_codes, {}, {}, s.traffic_conditions, {}, {}},
                                  s.postal_code_by_value("30-020")->id, {high});
  REQUIRE(only.traffic_condition_2_postal_code.size() == 1);
  CHECK(only.traffic_condition_2_postal_code[0].traffic_condition_id == high);

  CHECK_THROWS_AS(update_assignments(s, 99, {rain}), StoreError);
  CHECK_THROWS_AS(update_assignments(s, code, {99}), StoreError);
}

TEST_CASE("synchronize reproduces the tutorial") {
  const KnowledgeBase core = traffic();
  const KnowledgeBase synced = synchronize(core, tutorial());

  KnowledgeBase expected = core;
  expected.add(ClassAssertion{Concept::atomic("PostalCodeLocation"), "c30-020"});
  expected.add(ClassAssertion{Concept::atomic("StreetLocation"), "Szpitalna"});
  expected.add(ClassAssertion{Concept::atomic("DistrictLocation"), "StareMiasto"});
  expected.add(RoleAssertion{{"hasLocation", false}, "c30-020", "Szpitalna"});
  expected.add(RoleAssertion{{"hasLocation", false}, "Szpitalna", "StareMiasto"});
  expected.add(SubClassOf{Concept::atomic("HighCongestionCondition"),
                          Concept::has_value({"hasLocation", false}, "c30-020")});
  CHECK(serialize_text(synced) == serialize_text(expected));
  CHECK(synced.tbox() == expected.tbox());
  CHECK(synced.abox() == expected.abox());

  Reasoner r(synced);
  CHECK(r.is_consistent());
  CHECK(r.instances_of(Concept::atomic("StreetLocation")) == std::set<std::string>{"Szpitalna"});
  CHECK(r.instances_of(Concept::atomic("PostalCodeLocation")) == std::set<std::string>{"c30-020"});
  const QueryAnswer a = r.dl_query(danger_query("StareMiasto"));
  CHECK(a.all_subclasses == std::set<std::string>{"TrafficCongestionDanger"});
  CHECK(a.equivalents.empty());
}

TEST_CASE("synchronize invariants") {
  const KnowledgeBase core = traffic();
  const Store s = sample();
  const KnowledgeBase a = synchronize(core, s);
  const KnowledgeBase b = synchronize(core, s);
  CHECK(a.tbox() == b.tbox());
  CHECK(a.abox() == b.abox());
  CHECK(serialize_text(a) == serialize_text(b));
  CHECK(a.axiom_count() ==
        core.axiom_count() + s.postal_codes.size() + s.streets.size() + s.districts.size() +
            s.street_2_postal_code.size() + s.street_2_district.size() +
            s.traffic_condition_2_postal_code.size());
  CHECK(serialize_text(traffic()) == serialize_text(core));  // core untouched

  Store empty;
  empty.traffic_conditions = s.traffic_conditions;
  CHECK(serialize_text(synchronize(core, empty)) == serialize_text(core));

  // reassigning and re-synchronizing leaves no stale axioms
  const int code = s.postal_code_by_value("30-020")->id;
  const KnowledgeBase cleared = synchronize(core, update_assignments(s, code, {}));
  CHECK(cleared.tbox().size() == core.tbox().size());
  CHECK(dl_query(danger_query("StareMiasto"), cleared).all_subclasses.empty());
}

TEST_CASE("synchronized sample store") {
  const KnowledgeBase kb = synchronize(traffic(), sample());
  Reasoner r(kb);
  REQUIRE(r.is_consistent());
  CHECK(r.realize().at("c30-020") == std::set<std::string>{"PostalCodeLocation"});
  CHECK(r.instances_of(Concept::exists({"isLocationOf", false}, Concept::top())).contains("ArmiiKrajowej"));
  CHECK(r.instances_of(Concept::exists({"isLocationOf", false}, Concept::one_of({"c30-147"}))) ==
        (std::set<std::string>{"ArmiiKrajowej", "Krowodrza"}));  // hasLocation is transitive
  for (const char* loc : {"c30-020", "Szpitalna", "StareMiasto"}) {
    CAPTURE(loc);
    CHECK(r.dl_query(danger_query(loc)).all_subclasses == std::set<std::string>{"TrafficCongestionDanger"});
  }
  for (const char* loc : {"c30-147", "ArmiiKrajowej", "Krowodrza"}) {
    CAPTURE(loc);
    CHECK(r.dl_query(danger_query(loc)).all_subclasses.empty());
  }
}

TEST_CASE("synchronize errors") {
  const KnowledgeBase core = traffic();
  Store s = tutorial();
  s.traffic_conditions.push_back({3, std::nullopt, "VolcanicAshCondition", ""});
  CHECK_THROWS_WITH_AS(synchronize(core, s), doctest::Contains("VolcanicAshCondition"), MissingCoreEntity);

  CHECK_THROWS_WITH_AS(synchronize(KnowledgeBase{}, Store{}), doctest::Contains("PostalCodeLocation"),
                       MissingCoreEntity);
  KnowledgeBase no_role;
  for (const char* c : {"PostalCodeLocation", "StreetLocation", "DistrictLocation"}) no_role.declare_class(c);
  CHECK_THROWS_WITH_AS(synchronize(no_role, Store{}), doctest::Contains("hasLocation"), MissingCoreEntity);

  Store clash = tutorial();
  clash.districts.push_back({2, "Szpitalna"});
  CHECK_THROWS_AS(synchronize(core, clash), SyncError);
}
