#pragma once

#include <vector>

#include "dlkb/decimal.hpp"

namespace dlkb {

bool check_numeric_range(const NumericRange& range, const Decimal& value);

// Some decimal lies in both ranges.
bool ranges_intersect(const NumericRange& a, const NumericRange& b);

// Tightest range contained in both.
NumericRange range_intersection(const NumericRange& a, const NumericRange& b);

// Every decimal of range lies in at least one of cover. Decimals are dense,
// so this is exact interval arithmetic, not sampling.
bool range_covered(const NumericRange& range, const std::vector<NumericRange>& cover);

}  // namespace dlkb
