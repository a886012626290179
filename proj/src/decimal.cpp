#include "tot/decimal.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace tot {

namespace {

// Unsigned digit-string comparison; inputs may carry leading zeros.
int compare_magnitude(std::string_view a, std::string_view b) {
  while (!a.empty() && a.front() == '0') a.remove_prefix(1);
  while (!b.empty() && b.front() == '0') b.remove_prefix(1);
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  const int c = a.compare(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::string add_magnitude(std::string_view a, std::string_view b) {
  std::string out;
  out.reserve(std::max(a.size(), b.size()) + 1);
  int carry = 0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()) || carry; ++i) {
    int sum = carry;
    if (i < a.size()) sum += a[a.size() - 1 - i] - '0';
    if (i < b.size()) sum += b[b.size() - 1 - i] - '0';
    out.push_back(static_cast<char>('0' + sum % 10));
    carry = sum / 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Requires magnitude(a) >= magnitude(b).
std::string sub_magnitude(std::string_view a, std::string_view b) {
  std::string out;
  out.reserve(a.size());
  int borrow = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    int d = a[a.size() - 1 - i] - '0' - borrow;
    if (i < b.size()) d -= b[b.size() - 1 - i] - '0';
    if (d < 0) {
      d += 10;
      borrow = 1;
    } else {
      borrow = 0;
    }
    out.push_back(static_cast<char>('0' + d));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string mul_magnitude(std::string_view a, std::string_view b) {
  std::vector<int> acc(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int da = a[a.size() - 1 - i] - '0';
    for (std::size_t j = 0; j < b.size(); ++j) {
      acc[i + j] += da * (b[b.size() - 1 - j] - '0');
    }
  }
  int carry = 0;
  std::string out(acc.size(), '0');
  for (std::size_t i = 0; i < acc.size(); ++i) {
    const int v = acc[i] + carry;
    out[acc.size() - 1 - i] = static_cast<char>('0' + v % 10);
    carry = v / 10;
  }
  return out;
}

}  // namespace

Decimal::Decimal(bool negative, std::string coefficient, int scale)
    : negative_(negative), coefficient_(std::move(coefficient)), scale_(scale) {
  normalize();
}

void Decimal::normalize() {
  // Strip leading zeros (keeping at least one digit).
  std::size_t first = coefficient_.find_first_not_of('0');
  if (first == std::string::npos) {
    negative_ = false;
    coefficient_ = "0";
    scale_ = 0;
    return;
  }
  coefficient_.erase(0, first);
  // Strip trailing fractional zeros.
  while (scale_ > 0 && coefficient_.back() == '0') {
    coefficient_.pop_back();
    --scale_;
  }
  if (coefficient_.empty()) {
    negative_ = false;
    coefficient_ = "0";
    scale_ = 0;
  }
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  int scale = 0;
  bool seen_digit = false;
  bool seen_dot = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_dot) ++scale;
      seen_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      return std::nullopt;
    }
  }
  if (!seen_digit) return std::nullopt;
  return Decimal(negative, std::move(digits), scale);
}

Decimal Decimal::from_int(std::int64_t value) {
  const bool negative = value < 0;
  // Avoid overflow on INT64_MIN by building the digit string from unsigned.
  std::uint64_t magnitude =
      negative ? ~static_cast<std::uint64_t>(value) + 1
               : static_cast<std::uint64_t>(value);
  return Decimal(negative, std::to_string(magnitude), 0);
}

std::string Decimal::str() const {
  std::string out;
  if (negative_) out.push_back('-');
  if (scale_ == 0) {
    out += coefficient_;
    return out;
  }
  const auto len = coefficient_.size();
  if (len > static_cast<std::size_t>(scale_)) {
    out += coefficient_.substr(0, len - scale_);
    out.push_back('.');
    out += coefficient_.substr(len - scale_);
  } else {
    out += "0.";
    out.append(static_cast<std::size_t>(scale_) - len, '0');
    out += coefficient_;
  }
  return out;
}

int Decimal::compare(const Decimal& a, const Decimal& b) {
  if (a.negative_ != b.negative_) return a.negative_ ? -1 : 1;
  const int max_scale = std::max(a.scale_, b.scale_);
  std::string da = a.coefficient_ + std::string(max_scale - a.scale_, '0');
  std::string db = b.coefficient_ + std::string(max_scale - b.scale_, '0');
  const int mag = compare_magnitude(da, db);
  return a.negative_ ? -mag : mag;
}

Decimal Decimal::operator+(const Decimal& other) const {
  const int max_scale = std::max(scale_, other.scale_);
  std::string a = coefficient_ + std::string(max_scale - scale_, '0');
  std::string b = other.coefficient_ + std::string(max_scale - other.scale_, '0');
  if (negative_ == other.negative_) {
    return Decimal(negative_, add_magnitude(a, b), max_scale);
  }
  const int c = compare_magnitude(a, b);
  if (c == 0) return Decimal();
  if (c > 0) return Decimal(negative_, sub_magnitude(a, b), max_scale);
  return Decimal(other.negative_, sub_magnitude(b, a), max_scale);
}

Decimal Decimal::operator*(const Decimal& other) const {
  if (is_zero() || other.is_zero()) return Decimal();
  return Decimal(negative_ != other.negative_,
                 mul_magnitude(coefficient_, other.coefficient_),
                 scale_ + other.scale_);
}

Decimal Decimal::shifted_pow10(int k) const {
  if (is_zero() || k == 0) return *this;
  if (k > 0) {
    if (scale_ >= k) return Decimal(negative_, coefficient_, scale_ - k);
    return Decimal(negative_,
                   coefficient_ + std::string(static_cast<std::size_t>(k - scale_), '0'),
                   0);
  }
  return Decimal(negative_, coefficient_, scale_ - k);
}

double Decimal::to_double() const { return std::strtod(str().c_str(), nullptr); }

}  // namespace tot
