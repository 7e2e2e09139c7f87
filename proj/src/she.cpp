#include "wcsb/she.hpp"

#include <cmath>
#include <stdexcept>

namespace wcsb {

double she_rate(const Mode& k, double D, const Vec& w) {
  if (is_zero(k)) throw std::invalid_argument("she_rate needs a nonzero mode");
  if (D < 0) throw std::invalid_argument("diffusivity must be nonnegative");
  const double wk = dot(w, k);
  return 0.5 * (static_cast<double>(norm2(k)) + D * wk * wk);
}

double she_correlation(const Mode& k, double lag, double D, const Vec& w) {
  if (lag < 0) throw std::invalid_argument("lag must be nonnegative");
  return std::exp(-she_rate(k, D, w) * lag);
}

namespace {

// Slope of log(c) against lag, negated; NaN when fewer than two usable points.
double fit_rate(const std::vector<double>& lags, const std::vector<double>& c, const std::vector<bool>& use) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (!use[i] || !(c[i] > 0)) continue;
    const double y = std::log(c[i]);
    sx += lags[i];
    sy += y;
    sxx += lags[i] * lags[i];
    sxy += lags[i] * y;
    ++n;
  }
  if (n < 2) return std::nan("");
  const double den = n * sxx - sx * sx;
  return -(n * sxy - sx * sy) / den;
}

}  // namespace

std::vector<SheComparison> compare_sbe_she(const TrajectoryStats& stats, double D, const Vec& w) {
  std::vector<SheComparison> out;
  const int members = stats.n_samples;
  for (std::size_t c = 0; c < stats.corr_modes.size(); ++c) {
    std::vector<double> lags;
    std::vector<std::vector<double>> per_member;  // [lag][member], real parts
    std::vector<double> mean;
    for (std::size_t l = 0; l < stats.lags.size(); ++l) {
      auto it = stats.corr_members.find({static_cast<int>(c), static_cast<int>(l)});
      if (it == stats.corr_members.end()) continue;
      lags.push_back(stats.lags[l]);
      std::vector<double> xs;
      double s = 0;
      for (const cplx& v : it->second) {
        xs.push_back(v.real());
        s += v.real();
      }
      per_member.push_back(std::move(xs));
      mean.push_back(s / members);
    }
    std::vector<bool> use(lags.size());
    int used = 0;
    for (std::size_t l = 0; l < lags.size(); ++l) {
      use[l] = mean[l] > 0.1;
      used += use[l];
    }
    if (used < 2) throw std::runtime_error("insufficient lags above 0.1 for a rate fit");
    SheComparison r;
    r.mode = stats.corr_modes[c];
    r.lags_used = used;
    r.fitted_rate = fit_rate(lags, mean, use);
    r.she_rate = she_rate(r.mode, D, w);
    r.linear_rate = 0.5 * static_cast<double>(norm2(r.mode));
    if (members > 1) {
      std::vector<double> jack(members);
      double jm = 0;
      for (int m = 0; m < members; ++m) {
        std::vector<double> loo(lags.size());
        for (std::size_t l = 0; l < lags.size(); ++l) loo[l] = (mean[l] * members - per_member[l][m]) / (members - 1);
        jack[m] = fit_rate(lags, loo, use);
        jm += jack[m];
      }
      jm /= members;
      double v = 0;
      for (double x : jack) v += (x - jm) * (x - jm);
      r.rate_err = std::sqrt(v * (members - 1) / members);
    } else {
      r.rate_err = std::nan("");
    }
    r.z_excess = (r.fitted_rate - r.linear_rate) / r.rate_err;
    out.push_back(r);
  }
  return out;
}

}  // namespace wcsb
