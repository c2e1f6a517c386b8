#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dlkb/errors.hpp"
#include "dlkb/knowledge_base.hpp"

namespace dlkb {

// Relational data behind the synchronized ontology. One record type per
// table; JSON field names are the column names.
struct Street {
  int id = 0;
  std::string name;
  bool operator==(const Street&) const = default;
};

struct District {
  int id = 0;
  std::string name;
  bool operator==(const District&) const = default;
};

struct PostalCode {
  int id = 0;
  std::string value;
  bool operator==(const PostalCode&) const = default;
};

struct StreetDistrict {
  int street_id = 0;
  int district_id = 0;
  bool operator==(const StreetDistrict&) const = default;
};

struct StreetPostalCode {
  int street_id = 0;
  int postal_code_id = 0;
  bool operator==(const StreetPostalCode&) const = default;
};

struct TrafficCondition {
  int id = 0;
  std::optional<int> parent_id;
  std::string name;  // a class name in the core ontology
  std::string description;
  bool operator==(const TrafficCondition&) const = default;
};

struct ConditionAssignment {
  int traffic_condition_id = 0;
  int postal_code_id = 0;
  bool operator==(const ConditionAssignment&) const = default;
};

struct Credential {
  int id = 0;
  std::string username;
  std::string password_digest;  // lowercase hex SHA-1, column "password"
  bool operator==(const Credential&) const = default;
};

struct Store {
  std::vector<Street> streets;
  std::vector<District> districts;
  std::vector<PostalCode> postal_codes;
  std::vector<StreetDistrict> street_2_district;
  std::vector<StreetPostalCode> street_2_postal_code;
  std::vector<TrafficCondition> traffic_conditions;
  std::vector<ConditionAssignment> traffic_condition_2_postal_code;
  std::vector<Credential> access;

  const Street* street(int id) const;
  const District* district(int id) const;
  const PostalCode* postal_code(int id) const;
  const PostalCode* postal_code_by_value(std::string_view value) const;
  const TrafficCondition* condition(int id) const;
  const TrafficCondition* condition_by_name(std::string_view name) const;

  bool operator==(const Store&) const = default;
};

inline constexpr int kStoreSchemaVersion = 1;

class StoreError : public Error {
 public:
  using Error::Error;
};

class MissingCoreEntity : public Error {
 public:
  using Error::Error;
};

class SyncError : public Error {
 public:
  using Error::Error;
};

// Throws StoreError naming the table and row of the first violation.
void validate(const Store& store);

Store store_from_json(std::string_view text);
std::string store_to_json(const Store& store);
Store load_store(const std::filesystem::path& path);
// Writes to a temporary file next to path, then renames it into place.
void save_store(const Store& store, const std::filesystem::path& path);

std::string sha1_hex(std::string_view data);
bool verify_credentials(const Store& store, std::string_view username, std::string_view password);

// Replaces every assignment of the postal code with the given conditions.
// Throws StoreError for unknown ids; the input is not modified.
Store update_assignments(const Store& store, int postal_code_id, const std::set<int>& condition_ids);

// Individual names the synchronized ontology uses for store rows.
std::string postal_code_individual(std::string_view value);

// Core plus location individuals, hasLocation links and one
// Condition ⊑ hasLocation value <postal code> axiom per assignment.
KnowledgeBase synchronize(const KnowledgeBase& core, const Store& store);

}  // namespace dlkb
