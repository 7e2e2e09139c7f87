#include <cmath>

#include "doctest.h"
#include "wcsb/she.hpp"
#include "wcsb/weak_coupling.hpp"

using namespace wcsb;

TEST_CASE("SHE correlation") {
  const Vec w = make_vec({1, 0});
  const double d = std::pow(1.5 / M_PI + 1, 2.0 / 3) - 1;
  CHECK(she_correlation(make_mode({1, 0}), 1.0, dshe_d2(1.0), w) == doctest::Approx(std::exp(-0.5 * (1 + d))).epsilon(1e-12));
  // The rounded reference value 0.52279 is good to about 2e-5.
  CHECK(std::abs(she_correlation(make_mode({1, 0}), 1.0, dshe_d2(1.0), w) - 0.52279) < 5e-5);
  CHECK(she_rate(make_mode({0, 1}), 0.3, w) == doctest::Approx(0.5));
  CHECK_THROWS(she_rate(make_mode({0, 0}), 0.3, w));
}

TEST_CASE("rate fit on synthetic exponential correlations") {
  TrajectoryStats st;
  st.lattice = make_lattice(2, Rational(1, 4));
  st.corr_modes = {make_mode({1, 0}), make_mode({0, 1})};
  st.n_samples = 8;
  const double rates[] = {0.8, 0.5};
  for (int l = 0; l < 6; ++l) st.lags.push_back(0.25 * l);
  for (int c = 0; c < 2; ++c) {
    for (int l = 0; l < 6; ++l) {
      std::vector<cplx> members;
      for (int m = 0; m < st.n_samples; ++m) {
        // Member noise that averages out exactly.
        const double jitter = 0.01 * ((m % 2) ? 1 : -1) * l;
        members.push_back(std::exp(-rates[c] * st.lags[l]) + jitter);
      }
      st.corr_members[{c, l}] = members;
    }
  }
  const auto cmp = compare_sbe_she(st, 0.3, make_vec({1, 0}));
  REQUIRE(cmp.size() == 2);
  CHECK(cmp[0].fitted_rate == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(cmp[1].fitted_rate == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(cmp[0].rate_err > 0);
  CHECK(cmp[0].z_excess > 3);
  CHECK(std::abs(cmp[1].z_excess) < 1e-6);
}
