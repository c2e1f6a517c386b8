#include "dlkb/datatype.hpp"

#include <algorithm>

namespace dlkb {

namespace {

// A position on the decimal line: a value approached from below (-1), the
// value itself (0), or from above (+1). Infinite ends have no value.
struct Position {
  enum Kind { NegInf, Finite, PosInf } kind = Finite;
  Decimal value;
  int side = 0;

  friend bool operator<(const Position& a, const Position& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.kind != Finite) return false;
    if (auto c = a.value <=> b.value; c != 0) return c < 0;
    return a.side < b.side;
  }
};

Position start(const NumericRange& r) {
  if (r.min_inclusive) return {Position::Finite, *r.min_inclusive, 0};
  if (r.min_exclusive) return {Position::Finite, *r.min_exclusive, 1};
  return {Position::NegInf, {}, 0};
}

Position end(const NumericRange& r) {
  if (r.max_inclusive) return {Position::Finite, *r.max_inclusive, 0};
  if (r.max_exclusive) return {Position::Finite, *r.max_exclusive, -1};
  return {Position::PosInf, {}, 0};
}

// First position strictly after p. Only called on finite positions.
Position after(const Position& p) { return {Position::Finite, p.value, p.side + 1}; }

}  // namespace

bool check_numeric_range(const NumericRange& range, const Decimal& value) {
  return range.contains(value);
}

NumericRange range_intersection(const NumericRange& a, const NumericRange& b) {
  NumericRange out;
  const NumericRange& lower = start(b) < start(a) ? a : b;
  const NumericRange& upper = end(a) < end(b) ? a : b;
  out.min_inclusive = lower.min_inclusive;
  out.min_exclusive = lower.min_exclusive;
  out.max_inclusive = upper.max_inclusive;
  out.max_exclusive = upper.max_exclusive;
  return out;
}

bool ranges_intersect(const NumericRange& a, const NumericRange& b) {
  return !range_intersection(a, b).empty();
}

bool range_covered(const NumericRange& range, const std::vector<NumericRange>& cover) {
  const Position last = end(range);
  Position cursor = start(range);
  if (last < cursor) return true;  // empty range
  for (;;) {
    // Among intervals containing the cursor, take the one reaching furthest.
    std::optional<Position> reach;
    for (const NumericRange& c : cover) {
      if (c.empty()) continue;
      Position s = start(c), e = end(c);
      if (cursor < s || e < cursor) continue;
      if (!reach || *reach < e) reach = e;
    }
    if (!reach) return false;
    if (!(*reach < last)) return true;
    cursor = after(*reach);
  }
}

}  // namespace dlkb
