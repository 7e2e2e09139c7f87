#include <cmath>

#include "doctest.h"
#include "wcsb/generator.hpp"
#include "wcsb/truncated_space.hpp"

using namespace wcsb;

TEST_CASE("d = 2 ansatz satisfies its defining equations") {
  const auto lat = make_lattice(2, Rational(1, 6));
  const Vec w = make_vec({1, 0});
  const auto g = apply_interaction(Sign::kPlus, basis_kernel(lat, make_mode({1, 0})), w);
  const auto u = solve_ansatz_d2(g, 2, 4, w);
  CHECK(ansatz_residual(u, g, 2, 4, w) <= 1e-12);
  CHECK(u.max_level() == 4);
  const auto prof = chaos_profile(u, 1);
  REQUIRE(prof.size() == 3);
  CHECK(prof[1].level_norm < prof[0].level_norm);
  CHECK(prof[2].level_norm < prof[1].level_norm);
}

TEST_CASE("truncated operator is skew in symmetric coordinates") {
  const auto lat = make_lattice(3, Rational(2, 3));
  const Vec w = make_vec({1, 0.5, -0.25});
  const TruncatedSpace sp(lat, w, 1, 3, {make_tuple({make_mode({1, 0, 0})})});
  REQUIRE(sp.dim() > 10);
  Rng rng = make_stream(4, 4);
  CVector x(sp.dim()), y(sp.dim()), tx, ty;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x[i] = complex_gaussian(rng);
    y[i] = complex_gaussian(rng);
  }
  sp.apply_T(x, tx);
  sp.apply_T(y, ty);
  CHECK(std::abs(x.dot(ty) + tx.dot(y)) <= 1e-12 * x.norm() * y.norm() * (1 + tx.norm()));
}

TEST_CASE("GMRES and dense solves agree") {
  const auto lat = make_lattice(3, Rational(2, 3));
  const Vec w = make_vec({1, 0.5, -0.25});
  const auto f = basis_kernel(lat, make_mode({1, 0, 0}));
  const auto g = apply_interaction(Sign::kPlus, f, w);
  const TruncatedSolve s = solve_truncated(g, 2, 3, w, 1e-12);
  CHECK(s.converged);
  CHECK(s.dim <= 500);
  const auto dense = dense_truncated_solve(g, 2, 3, w);
  auto diff = dense;
  diff.axpy(-1.0, s.u);
  CHECK(norm(diff) <= 1e-8 * norm(dense));
  CHECK(truncated_equation_residual(s.u, g, 2, 3, w) <= 1e-10);
  CHECK(s.contraction == doctest::Approx(9 * lat->lambda() * lat->lambda()));
}

TEST_CASE("fd residual of the zero kernel") {
  const auto lat = make_lattice(2, Rational(1, 4));
  const Vec w = make_vec({1, 0});
  const auto f = basis_kernel(lat, make_mode({1, 0}));
  const auto g = apply_interaction(Sign::kPlus, f, w);
  // With w = 0 the residual is ||(-L0)^{-1/2} A+ f||.
  const double r0 = fd_residual(ChaosKernel(lat), f, 2, w);
  CHECK(r0 == doctest::Approx(norm(apply_multiplier(Multiplier::FracL0(-0.5), g))));
  const double r4 = fd_residual(solve_ansatz_d2(g, 2, 4, w), f, 2, w);
  CHECK(r4 < r0);
}

TEST_CASE("contraction surrogate") {
  const auto lat = make_lattice(2, Rational(1, 8));
  CHECK(contraction_surrogate(*lat, 3) == doctest::Approx(9 * lat->lambda() * lat->lambda()));
}
