// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance --suite fast       criteria 1-9
//   acceptance --suite extended   criteria 10-11
//   acceptance --only N           a single criterion
//   --allow-fail N                still prints FAIL for N but leaves the exit status alone

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wcsb/config.hpp"
#include "wcsb/generator.hpp"
#include "wcsb/paths.hpp"
#include "wcsb/she.hpp"
#include "wcsb/simulator.hpp"
#include "wcsb/spectral_field.hpp"
#include "wcsb/weak_coupling.hpp"

using namespace wcsb;

namespace {

// Tolerances.
constexpr double kSkewTol = 1e-12;
constexpr double kBracketTol = 1e-12;
constexpr double kFixedPointTol = 1e-8;
constexpr double kDsheTol = 1e-5;
constexpr double kGapGrowth = 2.0;
constexpr double kReplacementSpread = 4.0;
constexpr double kAnsatzTol = 1e-12;
constexpr double kDenseTol = 1e-8;
constexpr double kVarianceZ = 5.0;
constexpr double kBiasRatio = 1.5;
constexpr double kItoSpread = 4.0;
constexpr double kItoZ = 3.0;
constexpr double kVariationalRel = 0.02;
constexpr double kSheZ = 3.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------------------------

Outcome skew_structure() {
  double worst = 0;
  bool momentum_ok = true;
  int pairs = 0;
  for (const Rational& eps : {Rational(1, 4), Rational(1, 8)}) {
    const auto lat = make_lattice(2, eps);
    for (int level = 1; level <= 2; ++level) {
      Rng rng = make_stream(2024, static_cast<std::uint64_t>(eps.den * 10 + level));
      for (int i = 0; i < 50; ++i, ++pairs) {
        const Vec w = make_vec({std::normal_distribution<>(0, 1)(rng), std::normal_distribution<>(0, 1)(rng)});
        const auto f = random_kernel(lat, level, 3 + i % 5, lat->radius(), rng);
        const auto g = random_kernel(lat, level + 1, 3 + i % 7, lat->radius(), rng);
        const auto af = apply_interaction(Sign::kPlus, f, w);
        const auto ag = apply_interaction(Sign::kMinus, g, w);
        const cplx s = inner_product(af, g) + inner_product(f, ag);
        worst = std::max(worst, std::abs(s) / (norm(f) * norm(g)));
        // Every output tuple keeps the total momentum of the input it came from.
        for (const auto* k : {&af, &ag}) {
          for (const auto& [n, lvl] : k->levels()) {
            for (const auto& [t, v] : k->sorted_entries(n)) {
              const Mode tot = t.total();
              bool found = false;
              const auto& src = k == &af ? f : g;
              for (const auto& [m, l2] : src.levels())
                for (const auto& [u, x] : src.sorted_entries(m)) found = found || u.total() == tot;
              momentum_ok = momentum_ok && found;
            }
          }
        }
      }
    }
  }
  return {worst <= kSkewTol && momentum_ok, std::to_string(pairs) + " pairs, max |<A+f,g>+<f,A-g>|/(|f||g|) = " +
                                                fmt("%.2e", worst) + ", momentum " + (momentum_ok ? "conserved" : "VIOLATED")};
}

Outcome invariance_identity() {
  double worst = 0;
  for (auto [d, eps] : {std::pair{2, Rational(1, 8)}, {3, Rational(2, 7)}}) {
    const auto lat = make_lattice(d, eps);
    Rng rng = make_stream(77, d);
    for (int i = 0; i < 100; ++i) {
      Vec w{};
      for (int a = 0; a < d; ++a) w[a] = std::normal_distribution<>(0, 1)(rng);
      const SpectralField f = sample_white_noise(lat, rng);
      const double b = energy_bracket(f, w, lat->lambda());
      const double scale = std::sqrt(nonlinearity(f, w, lat->lambda()).norm2() * f.norm2());
      worst = std::max(worst, std::abs(b) / scale);
    }
  }
  return {worst <= kBracketTol, "200 fields (d = 2, 3), max relative bracket " + fmt("%.2e", worst)};
}

Outcome g_fixed_point() {
  std::vector<double> grid;
  for (int i = 0; i <= 500; ++i) grid.push_back(0.01 * i);
  double worst = 0;
  for (double w : {0.5, 1.0, 2.0}) worst = std::max(worst, fixed_point_residual(grid, w));
  const double oracle = std::pow(1.5 / M_PI + 1, 2.0 / 3) - 1;
  const double d = dshe_d2(1.0);
  const bool ok = worst < kFixedPointTol && std::abs(d - oracle) <= kDsheTol && std::abs(d - 0.29721) <= kDsheTol;
  return {ok, "max residual " + fmt("%.2e", worst) + ", D_SHE(1) = " + fmt("%.6f", d)};
}

Outcome approximation_identity() {
  const auto set = default_gap_test_set();
  const Vec w = make_vec({1, 0});
  std::vector<double> r;
  std::string detail = "sup gap/lambda^2:";
  for (int m : {8, 16, 32, 64}) {
    const auto lat = make_lattice(2, Rational(1, m));
    r.push_back(approx_gap(*lat, set, w) / (lat->lambda() * lat->lambda()));
    detail += " " + fmt("%.4g", r.back());
  }
  bool ok = true;
  for (std::size_t i = 1; i < r.size(); ++i) ok = ok && std::isfinite(r[i]) && r[i] <= kGapGrowth * r[i - 1];
  return {ok, detail};
}

Outcome replacement_lemma() {
  const Vec w = make_vec({1, 0});
  std::vector<double> sups;
  std::string detail = "max gap/bound per eps:";
  for (int m : {8, 16, 32}) {
    const auto lat = make_lattice(2, Rational(1, m));
    double s = 0;
    for (int p = 0; p < 20; ++p) {
      Rng rng = make_stream(99, static_cast<std::uint64_t>(p), 0x5EED);
      const auto a = random_kernel(lat, 2, 4, 3, rng);
      const auto b = random_kernel(lat, 2, 4, 3, rng);
      const auto g = replacement_gap(a, b, w);
      s = std::max(s, g.gap / g.bound);
    }
    sups.push_back(s);
    detail += " " + fmt("%.4g", s);
  }
  const double spread = *std::max_element(sups.begin(), sups.end()) / *std::min_element(sups.begin(), sups.end());
  return {spread <= kReplacementSpread, detail + ", max/min " + fmt("%.3f", spread)};
}

Outcome generator_contracts() {
  const auto lat2 = make_lattice(2, Rational(1, 8));
  const Vec w2 = make_vec({1, 0});
  const auto f2 = basis_kernel(lat2, make_mode({1, 0}));
  const auto g2 = apply_interaction(Sign::kPlus, f2, w2);
  double ansatz = 0;
  std::vector<double> fd;
  for (int n : {2, 3, 4}) {
    const auto u = solve_ansatz_d2(g2, 2, n, w2);
    ansatz = std::max(ansatz, ansatz_residual(u, g2, 2, n, w2));
    fd.push_back(fd_residual(u, f2, 2, w2));
  }
  const bool fd_ok = fd[1] < fd[0] && fd[2] < fd[1];

  const auto lat3 = make_lattice(3, Rational(2, 3));
  const Vec w3 = make_vec({1, 0.5, -0.25});
  const auto g3 = apply_interaction(Sign::kPlus, basis_kernel(lat3, make_mode({1, 0, 0})), w3);
  const TruncatedSolve s = solve_truncated(g3, 2, 3, w3, 1e-12);
  auto diff = dense_truncated_solve(g3, 2, 3, w3);
  const double dn = norm(diff);
  diff.axpy(-1.0, s.u);
  const double rel = norm(diff) / dn;
  const bool ok = ansatz <= kAnsatzTol && s.dim <= 500 && rel <= kDenseTol && fd_ok;
  return {ok, "ansatz residual " + fmt("%.2e", ansatz) + ", GMRES vs dense " + fmt("%.2e", rel) + " (dim " +
                  std::to_string(s.dim) + "), fd residual n=2,3,4: " + fmt("%.4e", fd[0]) + " " + fmt("%.4e", fd[1]) +
                  " " + fmt("%.4e", fd[2])};
}

Outcome stationarity() {
  SimConfig s;
  s.lattice = make_lattice(2, Rational(1, 4));
  s.w = make_vec({1, 0});
  s.dt = 1e-3;
  s.horizon = 2.0;
  s.n_samples = 512;
  s.master_seed = 4242;
  s.sample_interval = 0.05;
  s.burn_in = 0;
  const auto st = run_stationary(s);
  double worst = 0;
  for (const auto& e : st.variance) worst = std::max(worst, std::abs(e.value.real() - 1.0) / e.std_err);

  SimConfig b = s;
  b.horizon = 1.0;
  b.n_samples = 128;
  const CoupledBias cb = coupled_variance_bias(b);
  const bool ok = worst <= kVarianceZ && cb.bias_ratio() >= kBiasRatio;
  return {ok, "worst |var-1|/se " + fmt("%.2f", worst) + ", bias ratio " + fmt("%.2f", cb.bias_ratio()) +
                  " (dt " + fmt("%g", b.dt) + ": " + fmt("%.2e", cb.worst_bias_coarse) + ", dt/2: " +
                  fmt("%.2e", cb.worst_bias_fine) + ")"};
}

Outcome ito_trick() {
  const auto lat = make_lattice(2, Rational(1, 4));
  std::vector<ChaosKernel> obs;
  for (const Mode& k : {make_mode({1, 0}), make_mode({2, 0}), make_mode({1, 1})}) {
    ChaosKernel f(lat);
    f.set({k}, 1.0);
    f.set({-k}, 1.0);
    obs.push_back(f);
  }
  SimConfig s;
  s.lattice = lat;
  s.w = make_vec({2, 0});
  s.dt = 2e-3;
  s.horizon = 1.0;
  s.n_samples = 1024;
  s.master_seed = 8;
  const auto nl = time_average_variance(s, obs, 1.0);
  double lo = INFINITY, hi = 0;
  std::string detail = "ratios";
  for (const auto& r : nl) {
    lo = std::min(lo, r.ratio());
    hi = std::max(hi, r.ratio());
    detail += " " + fmt("%.3f", r.ratio());
  }
  s.w = make_vec({0, 0});
  const auto lin = time_average_variance(s, obs, 1.0);
  double worst_z = 0;
  for (std::size_t i = 0; i < obs.size(); ++i)
    worst_z = std::max(worst_z, std::abs(lin[i].variance - linear_time_average_variance(obs[i], 1.0)) / lin[i].std_err);
  const bool ok = std::isfinite(hi) && hi / lo <= kItoSpread && worst_z <= kItoZ;
  return {ok, detail + ", spread " + fmt("%.3f", hi / lo) + ", linear closed form worst z " + fmt("%.2f", worst_z)};
}

Outcome combinatorics() {
  bool ok = true;
  std::size_t checked = 0;
  for (int a = 2; a <= 12; a += 2) {
    const auto ps = enumerate_paths(kNoCeiling, a, 1);
    ok = ok && ps.size() == catalan(a / 2 - 1) && ps.size() == count_excursions(kNoCeiling, a);
    if (a > 6) continue;
    for (const auto& p : ps) {
      for (int kappa : {1, 2}) ok = ok && enumerate_graphs(p, kappa).size() == graph_count(p, kappa);
      ok = ok && enumerate_graphs_tilde2(p).size() == 2 * graph_count(p, 1);
      ++checked;
    }
  }
  for (int m = 2; m <= 4; ++m) {
    for (int a = m - 1; a <= 7; a += 2) {
      for (const auto& p : enumerate_paths(kNoCeiling, a, m)) {
        for (int kappa : {1, 2}) ok = ok && enumerate_graphs(p, kappa).size() == graph_count(p, kappa);
        ++checked;
      }
    }
  }
  return {ok, "path counts a <= 12 and graph counts for " + std::to_string(checked) + " walks"};
}

Outcome d3_limits() {
  const int d = 3;
  const Vec w = make_vec({1, 0.6, 0.3});
  const Mode j1 = make_mode({1, 0, 0}), j2 = make_mode({1, 1, 0});
  std::ostringstream detail;
  bool ok = true;

  struct Case {
    std::vector<int> heights;
    std::vector<Rational> eps;
  };
  const std::vector<Case> cases = {
      {{1, 2, 1}, {Rational(2, 11), Rational(2, 21), Rational(2, 41), Rational(2, 81)}},
      {{1, 2, 3, 2, 1}, {Rational(2, 7), Rational(2, 11), Rational(2, 15), Rational(2, 21)}}};
  for (const auto& c : cases) {
    const WalkPath p = make_path(c.heights);
    const Extrapolation a = c_of_path(d, p, c.eps, w, j1);
    const Extrapolation b = c_of_path(d, p, c.eps, w, j2);
    const bool pass = std::abs(a.value - b.value) <= a.error + b.error;
    ok = ok && pass;
    detail << "c" << p.str() << " " << fmt("%.5f", a.value) << "+-" << fmt("%.1e", a.error) << " vs "
           << fmt("%.5f", b.value) << "+-" << fmt("%.1e", b.error) << (pass ? "" : " (j-dependent)") << "; ";
  }

  const double q = variational_integral(d);
  const double vb21 = variational_bound(*make_lattice(d, Rational(2, 21)), j1);
  const double vb = variational_bound(*make_lattice(d, Rational(2, 41)), j1);
  const double vrel = std::abs(vb - q) / q;
  ok = ok && vrel <= kVariationalRel;
  detail << "variational " << fmt("%.4f", vb) << " vs " << fmt("%.4f", q) << " (" << fmt("%.2f", 100 * vrel)
         << "%; " << fmt("%.2f", 100 * std::abs(vb21 - q) / q) << "% at 2/21)" << (vrel <= kVariationalRel ? "" : " (above 2%)")
         << "; ";

  const std::vector<Rational> dn_eps = {Rational(2, 3), Rational(2, 5), Rational(2, 7)};
  std::vector<double> dn;
  for (int n : {2, 3, 4}) dn.push_back(D_n_estimate(d, n, dn_eps, w, j1).extrapolated.value);
  const bool dn_ok = std::abs(dn[2] - dn[1]) < std::abs(dn[1] - dn[0]);
  ok = ok && dn_ok;
  detail << "D^n " << fmt("%.5f", dn[0]) << " " << fmt("%.5f", dn[1]) << " " << fmt("%.5f", dn[2])
         << (dn_ok ? "" : " (differences not decreasing)") << "; ";

  const std::vector<Rational> halving = {Rational(2, 11), Rational(2, 21), Rational(2, 41)};
  auto decreasing = [](const std::vector<VanishingRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (!(rows[i].norm < rows[i - 1].norm)) return false;
    return true;
  };
  const WalkPath open = make_path({1, 2});
  const auto tail = vanishing_checks(d, open, enumerate_graphs(open, 1)[0], {j1}, halving, w, true);
  const WalkPath p2 = make_path({1, 2, 1});
  GraphAssignment crossing;
  for (const auto& g : enumerate_graphs(p2, 2))
    if (!spectator_untouched(p2, g)) {
      crossing = g;
      break;
    }
  const auto merge = vanishing_checks(d, p2, crossing, {j1, j2}, halving, w, false);
  ok = ok && decreasing(tail) && decreasing(merge);
  if (!decreasing(tail) || !decreasing(merge)) detail << "(not decreasing) ";
  detail << "vanishing";
  for (const auto& r : tail) detail << " " << fmt("%.3e", r.norm);
  detail << " |";
  for (const auto& r : merge) detail << " " << fmt("%.3e", r.norm);
  return {ok, detail.str()};
}

Outcome superdiffusive_excess() {
  SimConfig s;
  s.lattice = make_lattice(2, Rational(1, 4));
  s.w = make_vec({2, 0});
  s.dt = 2e-3;
  s.horizon = 24;
  s.n_samples = 128;
  s.master_seed = 1111;
  s.sample_interval = 0.1;
  s.max_lag = 3;
  s.corr_modes = {make_mode({1, 0}), make_mode({0, 1})};
  const auto st = run_stationary(s);
  const auto cmp = compare_sbe_she(st, dshe_d2(2.0), s.w);
  bool ok = true;
  std::string detail;
  for (const auto& r : cmp) {
    const bool transverse = dot(s.w, r.mode) == 0.0;
    ok = ok && (transverse ? std::abs(r.z_excess) < kSheZ : r.z_excess >= kSheZ);
    detail += format_mode(r.mode, 2) + ": rate " + fmt("%.4f", r.fitted_rate) + "+-" + fmt("%.4f", r.rate_err) +
              " (linear " + fmt("%.2f", r.linear_rate) + ", SHE " + fmt("%.3f", r.she_rate) + ", z " +
              fmt("%.2f", r.z_excess) + "); ";
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string suite = "fast";
  int only = 0;
  std::vector<int> allowed;
  app.add_option("--suite", suite, "fast, extended or all")->check(CLI::IsMember({"fast", "extended", "all"}));
  app.add_option("--only", only, "Run a single criterion")->check(CLI::Range(1, 11));
  app.add_option("--allow-fail", allowed, "Criteria whose failure does not change the exit status");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"skew structure", skew_structure},
      {"invariance identity", invariance_identity},
      {"G fixed point", g_fixed_point},
      {"approximation identity", approximation_identity},
      {"replacement lemma", replacement_lemma},
      {"generator equation", generator_contracts},
      {"stationarity", stationarity},
      {"Ito trick", ito_trick},
      {"combinatorics", combinatorics},
      {"d >= 3 limits", d3_limits},
      {"superdiffusive excess", superdiffusive_excess}};

  int failures = 0;
  for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) {
    if (only && i != only) continue;
    if (!only && suite == "fast" && i > 9) continue;
    if (!only && suite == "extended" && i <= 9) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i - 1].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool excused = std::find(allowed.begin(), allowed.end(), i) != allowed.end();
    std::cout << (o.pass ? "PASS" : excused ? "FAIL (allowed)" : "FAIL") << "  criterion " << i << " (" << criteria[i - 1].first << "): " << o.detail
              << " [" << fmt("%.1f", sec) << " s]" << std::endl;
    failures += !o.pass && !excused;
  }
  return failures == 0 ? 0 : 1;
}
