#include "wcsb/rational.hpp"

#include <cctype>
#include <numeric>
#include <stdexcept>

namespace wcsb {

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  num = g ? n / g : 0;
  den = g ? d / g : 1;
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

std::int64_t parse_int(const std::string& s, const std::string& whole) {
  if (s.empty()) throw std::invalid_argument("bad rational: '" + whole + "'");
  std::size_t pos = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    pos = 1;
  }
  if (pos == s.size()) throw std::invalid_argument("bad rational: '" + whole + "'");
  std::int64_t v = 0;
  for (; pos < s.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(s[pos])))
      throw std::invalid_argument("bad rational: '" + whole + "'");
    if (v > (INT64_MAX - 9) / 10) throw std::invalid_argument("rational overflow: '" + whole + "'");
    v = v * 10 + (s[pos] - '0');
  }
  return neg ? -v : v;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

Rational Rational::parse(const std::string& text) {
  const std::string t = trim(text);
  const auto slash = t.find('/');
  if (slash != std::string::npos) {
    return Rational(parse_int(trim(t.substr(0, slash)), t), parse_int(trim(t.substr(slash + 1)), t));
  }
  const auto dot = t.find('.');
  if (dot == std::string::npos) return Rational(parse_int(t, t), 1);
  const std::string ip = t.substr(0, dot);
  const std::string fp = t.substr(dot + 1);
  if (fp.size() > 15) throw std::invalid_argument("too many decimals: '" + t + "'");
  std::int64_t den = 1;
  for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
  const bool neg = !ip.empty() && ip[0] == '-';
  const std::int64_t whole = (ip.empty() || ip == "-" || ip == "+") ? 0 : parse_int(ip, t);
  const std::int64_t frac = fp.empty() ? 0 : parse_int(fp, t);
  if (frac < 0) throw std::invalid_argument("bad rational: '" + t + "'");
  const std::int64_t mag = (whole < 0 ? -whole : whole) * den + frac;
  return Rational(neg ? -mag : mag, den);
}

bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

}  // namespace wcsb
