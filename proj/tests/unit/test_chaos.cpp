#include <cmath>

#include "doctest.h"
#include "wcsb/chaos.hpp"

using namespace wcsb;

TEST_CASE("creation amplitude on a single pair") {
  const auto lat = make_lattice(2, Rational(1, 2));
  const auto g = apply_interaction(Sign::kPlus, basis_kernel(lat, make_mode({1, 0})), make_vec({1, 0}));
  const cplx v = g.get({make_mode({0, 1}), make_mode({1, -1})});
  CHECK(std::abs(v - cplx(0, -lat->lambda() / (2 * M_PI))) < 1e-12);
  CHECK(std::abs(v - cplx(0, -0.13517)) < 1e-5);
}

TEST_CASE("annihilation amplitude") {
  const auto lat = make_lattice(2, Rational(1, 2));
  const auto f = sym_tensor(lat, make_mode({1, 0}), make_mode({0, 1}));
  const auto g = apply_interaction(Sign::kMinus, f, make_vec({1, 0}));
  // Single term: -i lambda n c (w.k) sum over the two ordered splits of kernel value 1/2.
  const cplx v = g.get({make_mode({1, 1})});
  CHECK(std::abs(v - cplx(0, -lat->lambda() / M_PI)) < 1e-12);
  CHECK(std::abs(v - cplx(0, -0.27035)) < 1e-5);
}

TEST_CASE("creation and annihilation are negative adjoints") {
  for (auto [d, eps] : {std::pair{2, Rational(1, 4)}, {3, Rational(2, 5)}}) {
    const auto lat = make_lattice(d, eps);
    Rng rng = make_stream(21, d);
    const Vec w = d == 2 ? make_vec({1.0, 0.4}) : make_vec({1.0, -0.3, 0.6});
    for (int level = 1; level <= 2; ++level) {
      const auto f = random_kernel(lat, level, 5, 2, rng);
      const auto g = random_kernel(lat, level + 1, 8, 2, rng);
      const cplx lhs = inner_product(apply_interaction(Sign::kPlus, f, w), g);
      const cplx rhs = inner_product(f, apply_interaction(Sign::kMinus, g, w));
      CHECK(std::abs(lhs + rhs) <= 1e-12 * norm(f) * norm(g));
    }
  }
}

TEST_CASE("interaction commutes with total momentum") {
  const auto lat = make_lattice(2, Rational(1, 3));
  Rng rng = make_stream(2, 2);
  const auto f = random_kernel(lat, 2, 6, 2, rng);
  const Vec w = make_vec({1, 1});
  for (Sign s : {Sign::kPlus, Sign::kMinus}) {
    for (int i = 0; i < 2; ++i) {
      const auto a = apply_interaction(s, apply_multiplier(Multiplier::Momentum(i), f), w);
      auto b = apply_multiplier(Multiplier::Momentum(i), apply_interaction(s, f, w));
      b.axpy(-1.0, a);
      CHECK(norm(b) <= 1e-12 * (norm(a) + 1));
    }
  }
}

TEST_CASE("weighted norms and multipliers") {
  const auto lat = make_lattice(2, Rational(1, 2));
  CHECK(weighted_norm(basis_kernel(lat, make_mode({1, 0})), 1, 0.5) == doctest::Approx(0.70711).epsilon(1e-5));
  const auto lat10 = make_lattice(2, Rational(1, 10));
  const Tuple t = make_tuple({make_mode({1, 0})});
  CHECK(multiplier_value(*lat10, Multiplier::Geps(make_vec({1, 0})), t) == doctest::Approx(0.33923).epsilon(1e-5));
  CHECK(inner_product(sym_tensor(lat, make_mode({1, 0}), make_mode({0, 1})),
                      sym_tensor(lat, make_mode({1, 0}), make_mode({0, 1})))
            .real() == doctest::Approx(1.0));
}

TEST_CASE("tuple helpers") {
  const Tuple t = make_tuple({make_mode({2, 0}), make_mode({1, 0}), make_mode({0, 1})});
  CHECK(t.sorted());
  CHECK(t.total() == make_mode({3, 1}));
  const Tuple r = replace_slots(t, {0, 2}, {pack(make_mode({-1, -1}))});
  CHECK(r.n == 2);
  CHECK(r.sorted());
  CHECK(r.total() == make_mode({-1, -1}) + t.mode(1));
  CHECK(orderings(make_tuple({make_mode({1, 0}), make_mode({1, 0})})) == 1);
  CHECK(orderings(make_tuple({make_mode({1, 0}), make_mode({0, 1})})) == 2);
}
