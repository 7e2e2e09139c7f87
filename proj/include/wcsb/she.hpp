#pragma once

#include <vector>

#include "wcsb/simulator.hpp"

namespace wcsb {

// Stationary two-time correlation of mode k for the limiting heat equation:
// exp(-mu lag), mu = (|k|^2 + D (w.k)^2) / 2. The stationary variance is 1.
double she_correlation(const Mode& k, double lag, double D, const Vec& w);
double she_rate(const Mode& k, double D, const Vec& w);

struct SheComparison {
  Mode mode{};
  double fitted_rate = 0;
  double rate_err = 0;
  double she_rate = 0;
  double linear_rate = 0;
  double z_excess = 0;  // (fitted - linear) / rate_err
  int lags_used = 0;
};

// Log-linear least squares of the measured correlation over the lags where it exceeds 0.1;
// the error comes from a delete-one jackknife over ensemble members.
std::vector<SheComparison> compare_sbe_she(const TrajectoryStats& stats, double D, const Vec& w);

}  // namespace wcsb
