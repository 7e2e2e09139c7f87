#include <cmath>

#include "doctest.h"
#include "wcsb/lattice.hpp"

using namespace wcsb;

TEST_CASE("coupling constant") {
  CHECK(make_lattice(2, Rational(1, 10))->lambda() == doctest::Approx(0.465990).epsilon(1e-6));
  CHECK(make_lattice(3, Rational(2, 21))->lambda() == doctest::Approx(std::sqrt(2.0 / 21)).epsilon(1e-12));
  // 1/eps = 10 is not a half-integer, so d = 3 at eps = 0.1 is rejected; the formula is sqrt(eps).
  CHECK_THROWS_AS(make_lattice(3, Rational(1, 10)), std::invalid_argument);
  CHECK(make_lattice(2, Rational(1, 8))->lambda() < make_lattice(2, Rational(1, 4))->lambda());
  CHECK(make_lattice(3, Rational(2, 7))->lambda() < make_lattice(3, Rational(2, 5))->lambda());
}

TEST_CASE("mode enumeration against brute force") {
  for (auto [d, eps] : {std::pair{2, Rational(1, 2)}, {2, Rational(1, 4)}, {3, Rational(2, 3)}, {3, Rational(2, 5)}}) {
    const auto lat = make_lattice(d, eps);
    const double r = 1.0 / eps.value();
    int count = 0;
    const int R = static_cast<int>(r) + 1;
    for (int a = -R; a <= R; ++a)
      for (int b = -R; b <= R; ++b)
        for (int c = (d == 3 ? -R : 0); c <= (d == 3 ? R : 0); ++c) {
          if (a == 0 && b == 0 && c == 0) continue;
          const bool in = d == 2 ? a * a + b * b <= r * r
                                 : std::max({std::abs(a), std::abs(b), std::abs(c)}) <= r;
          count += in;
        }
    CHECK(static_cast<int>(lat->modes().size()) == count);
    CHECK(lat->canonical_modes().size() * 2 == lat->modes().size());
  }
  CHECK(make_lattice(2, Rational(1, 2))->modes().size() == 12);
  CHECK(make_lattice(3, Rational(2, 3))->modes().size() == 26);
}

TEST_CASE("cutoff indicator") {
  const auto lat = make_lattice(2, Rational(1, 2));
  CHECK(lat->indicator(make_mode({1, 0}), make_mode({0, 1})));
  CHECK_FALSE(lat->indicator(make_mode({1, 0}), make_mode({-1, 0})));
  CHECK_FALSE(lat->indicator(make_mode({2, 0}), make_mode({1, 0})));
  CHECK_FALSE(lat->indicator(make_mode({1, 1}), make_mode({1, 1})));
  bool conj = false;
  CHECK(lat->canonical_index(make_mode({-1, 0}), &conj) >= 0);
  CHECK(conj);
  CHECK(lat->mode_index(make_mode({3, 0})) == -1);
}

TEST_CASE("invalid lattices") {
  CHECK_THROWS_AS(make_lattice(2, Rational(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(make_lattice(1, Rational(1, 4)), std::invalid_argument);
  CHECK_THROWS_AS(make_lattice(3, Rational(1, 4)), std::invalid_argument);
}
