#include <sstream>

#include "doctest.h"
#include "wcsb/config.hpp"

using namespace wcsb;

TEST_CASE("parsing and typed getters") {
  const Config c = Config::parse_string(R"(
# comment
[lattice]
d = 2
eps = 1/8   
[model]
w = 2, 0
; another comment
[sim]
dt = 1e-3
modes = 1:0, 0:1, -1:2
flag = true
)");
  CHECK(c.get_int("lattice.d") == 2);
  CHECK(c.get_rational("lattice.eps") == Rational(1, 8));
  CHECK(c.get_double("lattice.eps") == 0.125);
  CHECK(c.get_double("sim.dt") == 1e-3);
  CHECK(c.get_vec("model.w")[0] == 2.0);
  CHECK(c.get_modes("sim.modes").size() == 3);
  CHECK(c.get_modes("sim.modes")[2] == make_mode({-1, 2}));
  CHECK(c.get_bool("sim.flag", false));
  CHECK(c.get_int("sim.missing", 7) == 7);
  CHECK_THROWS(c.get_string("sim.missing"));
}

TEST_CASE("round trip") {
  const Config c = Config::parse_string("[a]\nx = 1/3\ny = 1:2:3\n[b]\nz = hello\n");
  CHECK(Config::parse_string(c.serialize()) == c);
  CHECK(format_mode(parse_mode("1:-2:0"), 3) == "1:-2:0");
}

TEST_CASE("malformed input") {
  CHECK_THROWS(Config::parse_string("[a]\nx = 1\nx = 2\n"));
  CHECK_THROWS(Config::parse_string("[a]\nnovalue\n"));
  CHECK_THROWS(Config::parse_string("[a\nx = 1\n"));
  CHECK_THROWS(Config::parse_string("[a]\nx = abc\n").get_double("a.x"));
  CHECK_THROWS(parse_mode("1:x"));
}
