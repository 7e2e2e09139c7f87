#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wcsb/lattice.hpp"
#include "wcsb/rational.hpp"

namespace wcsb {

// INI-style configuration flattened to "section.key" -> value. Numbers accept rationals
// ("2/21"), vectors are comma separated ("2, 0"), modes are colon separated ("1:0").
class Config {
 public:
  static Config parse(std::istream& in);
  static Config parse_string(const std::string& text);
  static Config parse_file(const std::string& path);
  std::string serialize() const;

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  void set(const std::string& key, const std::string& value);
  const std::map<std::string, std::string>& entries() const { return entries_; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& def) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double def) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long def) const;
  bool get_bool(const std::string& key, bool def) const;
  Rational get_rational(const std::string& key) const;
  std::vector<Rational> get_rationals(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<int> get_ints(const std::string& key) const;
  Vec get_vec(const std::string& key) const;
  Mode get_mode(const std::string& key) const;
  std::vector<Mode> get_modes(const std::string& key) const;

  bool operator==(const Config& o) const { return entries_ == o.entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

Mode parse_mode(const std::string& text);
std::string format_mode(const Mode& k, int d);

}  // namespace wcsb
