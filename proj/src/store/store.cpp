#include "dlkb/store.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace dlkb {

using nlohmann::json;

namespace {

template <class T>
const T* find_id(const std::vector<T>& rows, int id) {
  auto it = std::find_if(rows.begin(), rows.end(), [&](const T& r) { return r.id == id; });
  return it == rows.end() ? nullptr : &*it;
}

[[noreturn]] void fail(const std::string& table, std::size_t row, const std::string& what) {
  throw StoreError(table + " row " + std::to_string(row + 1) + ": " + what);
}

template <class T>
void unique_ids(const std::vector<T>& rows, const std::string& table) {
  std::set<int> seen;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!seen.insert(rows[i].id).second) {
      fail(table, i, "duplicate id " + std::to_string(rows[i].id));
    }
  }
}

bool is_digest(const std::string& s) {
  return s.size() == 40 && std::all_of(s.begin(), s.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

// ---- JSON mapping ---------------------------------------------------------------

struct Reader {
  const json& doc;

  const json& table(const char* name) {
    if (!doc.contains(name)) return empty_array();
    const json& t = doc.at(name);
    if (!t.is_array()) throw StoreError(std::string(name) + ": expected an array");
    return t;
  }
  static const json& empty_array() {
    static const json a = json::array();
    return a;
  }
  static int integer(const json& row, const char* table, std::size_t i, const char* field) {
    if (!row.is_object() || !row.contains(field) || !row.at(field).is_number_integer()) {
      fail(table, i, std::string("field '") + field + "' must be an integer");
    }
    return row.at(field).get<int>();
  }
  static std::string text(const json& row, const char* table, std::size_t i, const char* field) {
    if (!row.is_object() || !row.contains(field) || !row.at(field).is_string()) {
      fail(table, i, std::string("field '") + field + "' must be a string");
    }
    return row.at(field).get<std::string>();
  }
};

}  // namespace

const Street* Store::street(int id) const { return find_id(streets, id); }
const District* Store::district(int id) const { return find_id(districts, id); }
const PostalCode* Store::postal_code(int id) const { return find_id(postal_codes, id); }
const TrafficCondition* Store::condition(int id) const { return find_id(traffic_conditions, id); }

const PostalCode* Store::postal_code_by_value(std::string_view value) const {
  for (const auto& p : postal_codes) {
    if (p.value == value) return &p;
  }
  return nullptr;
}

const TrafficCondition* Store::condition_by_name(std::string_view name) const {
  for (const auto& c : traffic_conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void validate(const Store& s) {
  unique_ids(s.streets, "streets");
  unique_ids(s.districts, "districts");
  unique_ids(s.postal_codes, "postal_codes");
  unique_ids(s.traffic_conditions, "traffic_conditions");
  unique_ids(s.access, "access");

  std::set<std::string> values;
  for (std::size_t i = 0; i < s.postal_codes.size(); ++i) {
    if (!values.insert(s.postal_codes[i].value).second) {
      fail("postal_codes", i, "duplicate value '" + s.postal_codes[i].value + "'");
    }
  }
  for (std::size_t i = 0; i < s.street_2_district.size(); ++i) {
    const auto& r = s.street_2_district[i];
    if (!s.street(r.street_id)) fail("street_2_district", i, "street_id " + std::to_string(r.street_id) + " does not exist");
    if (!s.district(r.district_id)) fail("street_2_district", i, "district_id " + std::to_string(r.district_id) + " does not exist");
  }
  for (std::size_t i = 0; i < s.street_2_postal_code.size(); ++i) {
    const auto& r = s.street_2_postal_code[i];
    if (!s.street(r.street_id)) fail("street_2_postal_code", i, "street_id " + std::to_string(r.street_id) + " does not exist");
    if (!s.postal_code(r.postal_code_id)) fail("street_2_postal_code", i, "postal_code_id " + std::to_string(r.postal_code_id) + " does not exist");
  }

  std::set<std::string> names;
  for (std::size_t i = 0; i < s.traffic_conditions.size(); ++i) {
    const auto& c = s.traffic_conditions[i];
    if (!names.insert(c.name).second) fail("traffic_conditions", i, "duplicate name '" + c.name + "'");
    if (c.parent_id && !s.condition(*c.parent_id)) {
      fail("traffic_conditions", i, "parent_id " + std::to_string(*c.parent_id) + " does not exist");
    }
    // Walking up must reach a root within as many steps as there are rows.
    std::optional<int> up = c.parent_id;
    for (std::size_t steps = 0; up; ++steps) {
      if (steps > s.traffic_conditions.size() || *up == c.id) {
        fail("traffic_conditions", i, "parent links form a cycle");
      }
      const TrafficCondition* p = s.condition(*up);
      up = p ? p->parent_id : std::nullopt;
    }
  }

  std::set<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < s.traffic_condition_2_postal_code.size(); ++i) {
    const auto& a = s.traffic_condition_2_postal_code[i];
    const std::string t = "traffic_condition_2_postal_code";
    if (!s.condition(a.traffic_condition_id)) fail(t, i, "traffic_condition_id " + std::to_string(a.traffic_condition_id) + " does not exist");
    if (!s.postal_code(a.postal_code_id)) fail(t, i, "postal_code_id " + std::to_string(a.postal_code_id) + " does not exist");
    if (!pairs.insert({a.traffic_condition_id, a.postal_code_id}).second) fail(t, i, "duplicate assignment");
  }

  std::set<std::string> users;
  for (std::size_t i = 0; i < s.access.size(); ++i) {
    if (!users.insert(s.access[i].username).second) fail("access", i, "duplicate username '" + s.access[i].username + "'");
    if (!is_digest(s.access[i].password_digest)) fail("access", i, "password must be 40 lowercase hex digits");
  }
}

Store store_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw StoreError(std::string("store is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw StoreError("store must be a JSON object");
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer()) {
    throw StoreError("store has no schema_version");
  }
  if (doc["schema_version"].get<int>() != kStoreSchemaVersion) {
    throw StoreError("unsupported schema_version " + doc["schema_version"].dump() +
                     " (expected " + std::to_string(kStoreSchemaVersion) + ")");
  }
  Reader r{doc};
  Store s;
  auto each = [&](const char* name, auto&& fn) {
    const json& t = r.table(name);
    for (std::size_t i = 0; i < t.size(); ++i) fn(t[i], name, i);
  };
  each("streets", [&](const json& row, const char* t, std::size_t i) {
    s.streets.push_back({Reader::integer(row, t, i, "id"), Reader::text(row, t, i, "name")});
  });
  each("districts", [&](const json& row, const char* t, std::size_t i) {
    s.districts.push_back({Reader::integer(row, t, i, "id"), Reader::text(row, t, i, "name")});
  });
  each("postal_codes", [&](const json& row, const char* t, std::size_t i) {
    s.postal_codes.push_back({Reader::integer(row, t, i, "id"), Reader::text(row, t, i, "value")});
  });
  each("street_2_district", [&](const json& row, const char* t, std::size_t i) {
    s.street_2_district.push_back(
        {Reader::integer(row, t, i, "street_id"), Reader::integer(row, t, i, "district_id")});
  });
  each("street_2_postal_code", [&](const json& row, const char* t, std::size_t i) {
    s.street_2_postal_code.push_back(
        {Reader::integer(row, t, i, "street_id"), Reader::integer(row, t, i, "postal_code_id")});
  });
  each("traffic_conditions", [&](const json& row, const char* t, std::size_t i) {
    TrafficCondition c;
    c.id = Reader::integer(row, t, i, "id");
    if (row.contains("parent_id") && !row["parent_id"].is_null()) {
      c.parent_id = Reader::integer(row, t, i, "parent_id");
    }
    c.name = Reader::text(row, t, i, "name");
    if (row.contains("description")) c.description = Reader::text(row, t, i, "description");
    s.traffic_conditions.push_back(std::move(c));
  });
  each("traffic_condition_2_postal_code", [&](const json& row, const char* t, std::size_t i) {
    s.traffic_condition_2_postal_code.push_back({Reader::integer(row, t, i, "traffic_condition_id"),
                                                 Reader::integer(row, t, i, "postal_code_id")});
  });
  each("access", [&](const json& row, const char* t, std::size_t i) {
    s.access.push_back({Reader::integer(row, t, i, "id"), Reader::text(row, t, i, "username"),
                        Reader::text(row, t, i, "password")});
  });
  validate(s);
  return s;
}

std::string store_to_json(const Store& s) {
  json doc = json::object();
  doc["schema_version"] = kStoreSchemaVersion;
  json& streets = doc["streets"] = json::array();
  for (const auto& r : s.streets) streets.push_back({{"id", r.id}, {"name", r.name}});
  json& districts = doc["districts"] = json::array();
  for (const auto& r : s.districts) districts.push_back({{"id", r.id}, {"name", r.name}});
  json& codes = doc["postal_codes"] = json::array();
  for (const auto& r : s.postal_codes) codes.push_back({{"id", r.id}, {"value", r.value}});
  json& s2d = doc["street_2_district"] = json::array();
  for (const auto& r : s.street_2_district) {
    s2d.push_back({{"street_id", r.street_id}, {"district_id", r.district_id}});
  }
  json& s2p = doc["street_2_postal_code"] = json::array();
  for (const auto& r : s.street_2_postal_code) {
    s2p.push_back({{"street_id", r.street_id}, {"postal_code_id", r.postal_code_id}});
  }
  json& conds = doc["traffic_conditions"] = json::array();
  for (const auto& r : s.traffic_conditions) {
    conds.push_back({{"id", r.id},
                     {"parent_id", r.parent_id ? json(*r.parent_id) : json(nullptr)},
                     {"name", r.name},
                     {"description", r.description}});
  }
  json& assigned = doc["traffic_condition_2_postal_code"] = json::array();
  for (const auto& r : s.traffic_condition_2_postal_code) {
    assigned.push_back(
        {{"traffic_condition_id", r.traffic_condition_id}, {"postal_code_id", r.postal_code_id}});
  }
  json& access = doc["access"] = json::array();
  for (const auto& r : s.access) {
    access.push_back({{"id", r.id}, {"username", r.username}, {"password", r.password_digest}});
  }
  return doc.dump(2) + "\n";
}

Store load_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("cannot read store '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return store_from_json(ss.str());
  } catch (const StoreError& e) {
    throw StoreError(path.string() + ": " + e.what());
  }
}

void save_store(const Store& store, const std::filesystem::path& path) {
  validate(store);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot write store '" + tmp.string() + "'");
    out << store_to_json(store);
    out.flush();
    if (!out) throw StoreError("cannot write store '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw StoreError("cannot replace store '" + path.string() + "': " + ec.message());
}

std::string sha1_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha1(), nullptr) != 1) {
    throw Error("SHA-1 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

bool verify_credentials(const Store& store, std::string_view username, std::string_view password) {
  for (const auto& c : store.access) {
    if (c.username == username) return c.password_digest == sha1_hex(password);
  }
  return false;
}

Store update_assignments(const Store& store, int postal_code_id, const std::set<int>& condition_ids) {
  if (!store.postal_code(postal_code_id)) {
    throw StoreError("unknown postal code id " + std::to_string(postal_code_id));
  }
  for (int id : condition_ids) {
    if (!store.condition(id)) throw StoreError("unknown traffic condition id " + std::to_string(id));
  }
  Store out = store;
  auto& rows = out.traffic_condition_2_postal_code;
  std::erase_if(rows, [&](const ConditionAssignment& a) { return a.postal_code_id == postal_code_id; });
  for (int id : condition_ids) rows.push_back({id, postal_code_id});
  return out;
}

std::string postal_code_individual(std::string_view value) { return "c" + std::string(value); }

KnowledgeBase synchronize(const KnowledgeBase& core, const Store& store) {
  for (const char* cls : {"PostalCodeLocation", "StreetLocation", "DistrictLocation"}) {
    if (!core.concept_names().contains(cls)) {
      throw MissingCoreEntity(std::string("core ontology has no class '") + cls + "'");
    }
  }
  if (!core.role_names().contains("hasLocation")) {
    throw MissingCoreEntity("core ontology has no object property 'hasLocation'");
  }
  for (const auto& c : store.traffic_conditions) {
    if (!core.concept_names().contains(c.name)) {
      throw MissingCoreEntity("core ontology has no class '" + c.name +
                              "' for traffic condition " + std::to_string(c.id));
    }
  }

  KnowledgeBase kb = core;
  std::set<std::string> taken = core.individual_names();
  std::map<int, std::string> code_names, street_names, district_names;
  auto claim = [&](const std::string& name, const char* what) {
    if (!taken.insert(name).second) {
      throw SyncError(std::string("individual '") + name + "' for " + what + " already exists");
    }
  };
  for (const auto& p : store.postal_codes) {
    std::string name = postal_code_individual(p.value);
    claim(name, "a postal code");
    kb.add(ClassAssertion{Concept::atomic("PostalCodeLocation"), name});
    code_names[p.id] = std::move(name);
  }
  for (const auto& s : store.streets) {
    claim(s.name, "a street");
    kb.add(ClassAssertion{Concept::atomic("StreetLocation"), s.name});
    street_names[s.id] = s.name;
  }
  for (const auto& d : store.districts) {
    claim(d.name, "a district");
    kb.add(ClassAssertion{Concept::atomic("DistrictLocation"), d.name});
    district_names[d.id] = d.name;
  }
  const RoleExpr has_location{"hasLocation", false};
  for (const auto& r : store.street_2_postal_code) {
    kb.add(RoleAssertion{has_location, code_names.at(r.postal_code_id), street_names.at(r.street_id)});
  }
  for (const auto& r : store.street_2_district) {
    kb.add(RoleAssertion{has_location, street_names.at(r.street_id), district_names.at(r.district_id)});
  }
  for (const auto& a : store.traffic_condition_2_postal_code) {
    kb.add(SubClassOf{Concept::atomic(store.condition(a.traffic_condition_id)->name),
                      Concept::has_value(has_location, code_names.at(a.postal_code_id))});
  }
  return kb;
}

}  // namespace dlkb
