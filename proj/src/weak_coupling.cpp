#include "wcsb/weak_coupling.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

namespace wcsb {

double L_eps(double x, double eps) {
  if (!(eps > 0 && eps < 1)) throw std::domain_error("L_eps requires 0 < eps < 1");
  if (!(x >= 0.5)) throw std::domain_error("L_eps requires x >= 1/2");
  const double lam2 = 1.0 / std::log(1.0 / (eps * eps));
  return lam2 * std::log1p(1.0 / (eps * eps * x));
}

double G_of(double x, double w_norm) {
  if (x < 0) throw std::domain_error("G requires x >= 0");
  const double w2 = w_norm * w_norm;
  if (w2 == 0.0) return x / M_PI;
  const double u = 3.0 * w2 * x / (2.0 * M_PI);
  // (1+u)^{2/3} - 1 written to avoid cancellation for small u.
  return std::expm1(std::log1p(u) * (2.0 / 3.0)) / w2;
}

double G_prime(double x, double w_norm) {
  const double u = 3.0 * w_norm * w_norm * x / (2.0 * M_PI);
  return std::pow(1.0 + u, -1.0 / 3.0) / M_PI;
}

double fixed_point_residual(const std::vector<double>& x_grid, double w_norm, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  const double w2 = w_norm * w_norm;
  auto integrand = [&](double y) { return 1.0 / std::sqrt(1.0 + w2 * G_of(y, w_norm)); };
  double worst = 0;
  for (double x : x_grid) {
    if (x < 0) throw std::domain_error("fixed point grid must be nonnegative");
    double rhs = 0;
    if (x > 0) {
      double err = 0;
      rhs = gauss_kronrod<double, 31>::integrate(integrand, 0.0, x, 20, tol, &err) / M_PI;
    }
    worst = std::max(worst, std::abs(G_of(x, w_norm) - rhs));
  }
  return worst;
}

double dshe_d2(double w_norm) {
  if (!(w_norm > 0)) throw std::domain_error("dshe_d2 requires |w| > 0");
  return G_of(1.0, w_norm);
}

double p_eps(const Lattice& lat, const std::vector<Mode>& k, const Vec& w) {
  if (lat.dim() != 2) throw std::invalid_argument("P^eps is defined on d = 2 lattices");
  if (k.empty()) throw std::invalid_argument("P^eps needs at least one mode");
  const double wn = std::sqrt(norm2(w));
  double rest2 = 0, rest_w = 0;
  for (std::size_t i = 1; i < k.size(); ++i) {
    rest2 += static_cast<double>(norm2(k[i]));
    const double wk = dot(w, k[i]);
    rest_w += wk * wk;
  }
  const double lam2 = lat.lambda() * lat.lambda();
  double s = 0;
  for (const Mode& l : lat.modes()) {
    const Mode m = k[0] - l;
    if (!lat.indicator(l, m)) continue;
    const double gt = 0.5 * (static_cast<double>(norm2(l) + norm2(m)) + rest2);
    const double wl = dot(w, l), wm = dot(w, m);
    const double gw = 0.5 * (wl * wl + wm * wm + rest_w);
    s += 1.0 / (gt + gw * G_of(L_eps(gt, lat.eps()), wn));
  }
  return lam2 / (M_PI * M_PI) * s;
}

std::vector<std::vector<Mode>> default_gap_test_set() {
  std::vector<std::vector<Mode>> set;
  const Mode pad = make_mode({1, 0});
  for (int n = 1; n <= 2; ++n) {
    for (int a = -4; a <= 4; ++a) {
      for (int b = -4; b <= 4; ++b) {
        const Mode k = make_mode({a, b});
        if (is_zero(k) || norm2(k) > 16 || !is_canonical(k)) continue;
        if (n == 1) {
          set.push_back({k});
        } else {
          set.push_back({k, pad});
        }
      }
    }
  }
  return set;
}

std::vector<GapRow> approx_gap_table(const Lattice& lat, const std::vector<std::vector<Mode>>& set, const Vec& w) {
  std::vector<GapRow> rows;
  const double wn = std::sqrt(norm2(w));
  for (const auto& k : set) {
    GapRow r;
    r.k = k;
    r.p_eps = p_eps(lat, k, w);
    double k2 = 0;
    for (const Mode& m : k) k2 += static_cast<double>(norm2(m));
    r.g_of_l = G_of(L_eps(0.5 * k2, lat.eps()), wn);
    r.gap = std::abs(r.p_eps - r.g_of_l);
    rows.push_back(std::move(r));
  }
  return rows;
}

double approx_gap(const Lattice& lat, const std::vector<std::vector<Mode>>& set, const Vec& w) {
  double worst = 0;
  for (const GapRow& r : approx_gap_table(lat, set, w)) worst = std::max(worst, r.gap);
  return worst;
}

ReplacementGap replacement_gap(const ChaosKernel& psi1, const ChaosKernel& psi2, const Vec& w, bool explicit_minus) {
  const Lattice& lat = psi1.lattice();
  if (lat.dim() != 2) throw std::invalid_argument("the replacement gap is a d = 2 quantity");
  if (psi1.levels().size() != 1 || psi2.levels().size() != 1)
    throw std::invalid_argument("replacement gap expects single-level kernels");
  ReplacementGap out;
  const double lam2 = lat.lambda() * lat.lambda();
  out.bound = lam2 * weighted_norm(psi1, 1, 0.5) * weighted_norm(psi2, 1, 0.5);
  if (psi1.levels().begin()->first != psi2.levels().begin()->first) return out;

  const ChaosKernel u = apply_multiplier(Multiplier::ShiftedInverse(w), apply_interaction(Sign::kPlus, psi1, w));
  cplx first;
  if (explicit_minus) {
    ChaosKernel am = apply_interaction(Sign::kMinus, u, w);
    am.scale(-1.0);
    first = inner_product(am, psi2);
  } else {
    first = inner_product(u, apply_interaction(Sign::kPlus, psi2, w));
  }
  const ChaosKernel diag = apply_multiplier(Multiplier::L0w(w), apply_multiplier(Multiplier::Geps(w), psi1));
  out.gap = std::abs(first + inner_product(diag, psi2));
  return out;
}

double crucial_bound_surrogate(const Lattice& lat) {
  double s = 0;
  for (const Mode& k : lat.modes()) s += 1.0 / static_cast<double>(norm2(k));
  return lat.lambda() * lat.lambda() * s;
}

}  // namespace wcsb
