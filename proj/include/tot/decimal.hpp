#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tot {

/// Exact decimal number: sign * coefficient * 10^-scale.
///
/// Values are kept in a normal form so that equal values always have equal
/// representations: the coefficient carries no leading zeros, no trailing
/// zeros while scale > 0, and zero is exactly {+, "0", 0}. Addition and
/// multiplication are exact (finite decimals are closed under both), which is
/// what table cells, sorting, filtering and cost accounting rely on.
class Decimal {
 public:
  Decimal() = default;

  /// Parses plain decimal notation: [+-]? digits [. digits] (also ".5", "1.").
  /// No exponent syntax. Returns nullopt when `text` is not entirely a
  /// decimal literal.
  static std::optional<Decimal> parse(std::string_view text);
  static Decimal from_int(std::int64_t value);

  /// Canonical rendering: "-" only when negative, no leading zeros, no
  /// trailing fractional zeros, no "+". parse(str()) round-trips.
  std::string str() const;

  bool is_zero() const { return coefficient_ == "0"; }
  bool is_integer() const { return scale_ == 0; }
  bool negative() const { return negative_; }

  /// Three-way numeric comparison: -1, 0 or +1.
  static int compare(const Decimal& a, const Decimal& b);

  Decimal operator+(const Decimal& other) const;
  Decimal operator*(const Decimal& other) const;

  /// Value * 10^k, exact in both directions.
  Decimal shifted_pow10(int k) const;

  double to_double() const;

  friend bool operator==(const Decimal& a, const Decimal& b) = default;
  friend bool operator<(const Decimal& a, const Decimal& b) {
    return compare(a, b) < 0;
  }

 private:
  Decimal(bool negative, std::string coefficient, int scale);
  void normalize();

  bool negative_ = false;
  std::string coefficient_ = "0";  // ASCII digits, most significant first
  int scale_ = 0;                  // count of fractional digits, >= 0
};

}  // namespace tot
