#include "wcsb/config.hpp"

#include <fstream>
#include <sstream>

#include "wcsb/errors.hpp"

namespace wcsb {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Rational parse_rational(const std::string& key, const std::string& v) {
  try {
    return Rational::parse(v);
  } catch (const std::exception& e) {
    throw ConfigError("config key '" + key + "': cannot parse number '" + v + "'");
  }
}

}  // namespace

Mode parse_mode(const std::string& text) {
  Mode k{};
  std::istringstream is(trim(text));
  std::string part;
  int i = 0;
  while (std::getline(is, part, ':')) {
    if (i >= kMaxDim) throw ConfigError("mode '" + text + "' has too many coordinates");
    try {
      std::size_t used = 0;
      k[i++] = std::stoi(trim(part), &used);
      if (used != trim(part).size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse mode '" + text + "'");
    }
  }
  if (i == 0) throw ConfigError("empty mode");
  return k;
}

std::string format_mode(const Mode& k, int d) {
  std::string s;
  for (int i = 0; i < d; ++i) {
    if (i) s += ":";
    s += std::to_string(k[i]);
  }
  return s;
}

Config Config::parse(std::istream& in) {
  Config c;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty() || section.find('.') != std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) + ": bad section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (c.has(full)) throw ConfigError("duplicate config key '" + full + "'");
    c.entries_[full] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::parse_string(const std::string& text) {
  std::istringstream is(text);
  return parse(is);
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in);
}

std::string Config::serialize() const {
  std::ostringstream os;
  std::string current;
  bool first = true;
  // Keys without a section come first because std::map orders "" before any section.
  for (const auto& [full, value] : entries_) {
    const auto dot = full.find('.');
    const std::string section = dot == std::string::npos ? "" : full.substr(0, dot);
    const std::string key = dot == std::string::npos ? full : full.substr(dot + 1);
    if (section != current || (first && !section.empty())) {
      if (!first) os << "\n";
      os << "[" << section << "]\n";
      current = section;
    }
    first = false;
    os << key << " = " << value << "\n";
  }
  return os.str();
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = trim(value); }

std::string Config::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& def) const {
  return has(key) ? get_string(key) : def;
}

Rational Config::get_rational(const std::string& key) const { return parse_rational(key, get_string(key)); }

double Config::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    return Rational::parse(v).value();
  } catch (const std::exception&) {
  }
  // Scientific notation is accepted for plain floating-point fields.
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': cannot parse number '" + v + "'");
}

double Config::get_double(const std::string& key, double def) const { return has(key) ? get_double(key) : def; }

long long Config::get_int(const std::string& key) const {
  const Rational r = get_rational(key);
  if (r.den != 1) throw ConfigError("config key '" + key + "' must be an integer");
  return r.num;
}

long long Config::get_int(const std::string& key, long long def) const { return has(key) ? get_int(key) : def; }

bool Config::get_bool(const std::string& key, bool def) const {
  if (!has(key)) return def;
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "' must be a boolean");
}

std::vector<Rational> Config::get_rationals(const std::string& key) const {
  std::vector<Rational> out;
  for (const auto& item : split_list(get_string(key))) out.push_back(parse_rational(key, item));
  return out;
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const Rational& r : get_rationals(key)) out.push_back(r.value());
  return out;
}

std::vector<int> Config::get_ints(const std::string& key) const {
  std::vector<int> out;
  for (const Rational& r : get_rationals(key)) {
    if (r.den != 1) throw ConfigError("config key '" + key + "' must hold integers");
    out.push_back(static_cast<int>(r.num));
  }
  return out;
}

Vec Config::get_vec(const std::string& key) const {
  const auto v = get_doubles(key);
  if (v.empty() || v.size() > static_cast<std::size_t>(kMaxDim)) throw ConfigError("config key '" + key + "' must be a vector");
  Vec out{};
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

Mode Config::get_mode(const std::string& key) const { return parse_mode(get_string(key)); }

std::vector<Mode> Config::get_modes(const std::string& key) const {
  std::vector<Mode> out;
  for (const auto& item : split_list(get_string(key))) out.push_back(parse_mode(item));
  return out;
}

}  // namespace wcsb
