#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dlkb {

// Exact decimal number: mantissa * 10^-scale with at most 18 significant
// digits. Comparison and equality are exact; there is no arithmetic.
class Decimal {
 public:
  Decimal() = default;
  Decimal(std::int64_t integer) : mantissa_(integer) {}  // NOLINT

  // Accepts [+-]digits[.digits]. Returns nullopt on anything else or when
  // the value does not fit in 18 digits.
  static std::optional<Decimal> parse(std::string_view text);

  std::string to_string() const;

  std::strong_ordering operator<=>(const Decimal& other) const;
  bool operator==(const Decimal& other) const {
    return (*this <=> other) == std::strong_ordering::equal;
  }

 private:
  Decimal(std::int64_t mantissa, int scale);
  void normalize();

  std::int64_t mantissa_ = 0;
  int scale_ = 0;
};

// Interval over decimals built from XSD facets. At most one lower and one
// upper facet are set; unset means unbounded on that side.
struct NumericRange {
  std::optional<Decimal> min_inclusive;
  std::optional<Decimal> min_exclusive;
  std::optional<Decimal> max_inclusive;
  std::optional<Decimal> max_exclusive;

  bool has_lower() const { return min_inclusive || min_exclusive; }
  bool has_upper() const { return max_inclusive || max_exclusive; }
  // At most one facet per side.
  bool well_formed() const {
    return !(min_inclusive && min_exclusive) &&
           !(max_inclusive && max_exclusive);
  }

  bool contains(const Decimal& value) const;
  // No decimal satisfies the facets.
  bool empty() const;

  bool operator==(const NumericRange&) const = default;
};

}  // namespace dlkb
