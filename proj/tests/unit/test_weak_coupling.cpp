#include <cmath>

#include "doctest.h"
#include "wcsb/weak_coupling.hpp"

using namespace wcsb;

namespace {

double G_oracle(double x, double w) { return (std::pow(1.5 * w * w * x / M_PI + 1, 2.0 / 3) - 1) / (w * w); }

}  // namespace

TEST_CASE("closed-form G and the diffusivity") {
  CHECK(G_of(1.0, 1.0) == doctest::Approx(0.29721).epsilon(1e-5));
  CHECK(G_of(1.15155, 1.0) == doctest::Approx(0.33923).epsilon(1e-5));
  CHECK(dshe_d2(1.0) == doctest::Approx(G_oracle(1, 1)).epsilon(1e-14));
  CHECK(G_of(0.3, 0.0) == doctest::Approx(0.3 / M_PI));
  const double h = 1e-6;
  CHECK(G_prime(0.7, 2.0) == doctest::Approx((G_oracle(0.7 + h, 2) - G_oracle(0.7 - h, 2)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("G solves its integral equation") {
  std::vector<double> grid;
  for (int i = 0; i <= 50; ++i) grid.push_back(0.1 * i);
  for (double w : {0.0, 0.5, 1.0, 2.0}) CHECK(fixed_point_residual(grid, w) < 1e-8);
}

TEST_CASE("L_eps") {
  CHECK(L_eps(0.5, 0.1) == doctest::Approx(std::log(201.0) / std::log(100.0)).epsilon(1e-14));
  CHECK(std::abs(L_eps(0.5, 0.1) - 1.15155) < 1e-4);
  const double lam2 = 1.0 / std::log(1.0 / (0.1 * 0.1));
  CHECK(L_eps(100.0, 0.1) == doctest::Approx(lam2 * std::log(2.0)));
  CHECK(L_eps(0.5, 1.0 / 64) < L_eps(0.5, 1.0 / 8));
}

TEST_CASE("approximation gap stays of order lambda^2") {
  const auto set = default_gap_test_set();
  double prev = 0;
  for (int m : {8, 16, 32}) {
    const auto lat = make_lattice(2, Rational(1, m));
    const double r = approx_gap(*lat, set, make_vec({1, 0})) / (lat->lambda() * lat->lambda());
    CHECK(std::isfinite(r));
    if (prev > 0) CHECK(r <= 2 * prev);
    prev = r;
  }
  const auto lat = make_lattice(2, Rational(1, 8));
  CHECK(p_eps(*lat, {make_mode({20, 0})}, make_vec({1, 0})) == 0.0);
}

TEST_CASE("replacement gap vanishes for w = 0") {
  const auto lat = make_lattice(2, Rational(1, 4));
  Rng rng = make_stream(1, 1);
  const auto a = random_kernel(lat, 2, 3, 2, rng);
  const auto b = random_kernel(lat, 2, 3, 2, rng);
  CHECK(replacement_gap(a, b, make_vec({0, 0})).gap == doctest::Approx(0.0));
  const auto r1 = replacement_gap(a, b, make_vec({1, 0}));
  const auto r2 = replacement_gap(a, b, make_vec({1, 0}), true);
  CHECK(r1.gap == doctest::Approx(r2.gap).epsilon(1e-10));
}
