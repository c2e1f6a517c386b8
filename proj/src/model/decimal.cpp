#include "dlkb/decimal.hpp"

#include <cctype>

namespace dlkb {

namespace {

constexpr int kMaxDigits = 18;

__int128 pow10(int exponent) {
  __int128 result = 1;
  for (int i = 0; i < exponent; ++i) result *= 10;
  return result;
}

}  // namespace

Decimal::Decimal(std::int64_t mantissa, int scale)
    : mantissa_(mantissa), scale_(scale) {
  normalize();
}

void Decimal::normalize() {
  while (scale_ > 0 && mantissa_ % 10 == 0) {
    mantissa_ /= 10;
    --scale_;
  }
  if (mantissa_ == 0) scale_ = 0;
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::int64_t mantissa = 0;
  int digits = 0;
  int scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    seen_digit = true;
    if (digits == 0 && c == '0') {
      if (seen_point) ++scale;
      continue;
    }
    if (++digits > kMaxDigits) return std::nullopt;
    mantissa = mantissa * 10 + (c - '0');
    if (seen_point) ++scale;
  }
  if (!seen_digit) return std::nullopt;
  if (scale > kMaxDigits) return std::nullopt;
  return Decimal(negative ? -mantissa : mantissa, scale);
}

std::string Decimal::to_string() const {
  std::string digits = std::to_string(mantissa_ < 0 ? -mantissa_ : mantissa_);
  if (scale_ > 0) {
    if (static_cast<int>(digits.size()) <= scale_) {
      digits.insert(0, static_cast<std::size_t>(scale_) - digits.size() + 1, '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(scale_), ".");
  }
  return mantissa_ < 0 ? "-" + digits : digits;
}

std::strong_ordering Decimal::operator<=>(const Decimal& other) const {
  __int128 lhs = static_cast<__int128>(mantissa_) * pow10(other.scale_);
  __int128 rhs = static_cast<__int128>(other.mantissa_) * pow10(scale_);
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool NumericRange::contains(const Decimal& value) const {
  if (min_inclusive && value < *min_inclusive) return false;
  if (min_exclusive && value <= *min_exclusive) return false;
  if (max_inclusive && value > *max_inclusive) return false;
  if (max_exclusive && value >= *max_exclusive) return false;
  return true;
}

bool NumericRange::empty() const {
  const std::optional<Decimal>& low = min_inclusive ? min_inclusive : min_exclusive;
  const std::optional<Decimal>& high = max_inclusive ? max_inclusive : max_exclusive;
  if (!low || !high) return false;
  if (*low > *high) return true;
  if (*low < *high) return false;
  // Equal bounds: only the closed point interval is nonempty.
  return !(min_inclusive && max_inclusive);
}

}  // namespace dlkb
