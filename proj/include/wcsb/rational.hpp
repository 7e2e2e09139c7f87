#pragma once

#include <cstdint>
#include <string>

namespace wcsb {

// Exact nonnegative-denominator rational used for cutoffs and config values.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  Rational reciprocal() const { return Rational(den, num); }
  std::string str() const;

  // Accepts "p/q", integers and finite decimals ("0.25", "-1e-3" is rejected).
  static Rational parse(const std::string& text);
};

bool operator==(const Rational& a, const Rational& b);
bool operator<(const Rational& a, const Rational& b);

}  // namespace wcsb
