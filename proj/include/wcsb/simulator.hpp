#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wcsb/chaos.hpp"
#include "wcsb/spectral_field.hpp"

namespace wcsb {

struct SimConfig {
  LatticePtr lattice;
  Vec w{};
  double dt = 1e-3;
  double horizon = 1.0;
  int n_samples = 1;
  std::uint64_t master_seed = 0;
  // Snapshots for statistics are taken every sample_interval (a multiple of dt; 0 means dt).
  double sample_interval = 0;
  double max_lag = 0;
  // Modes whose two-time correlations are tabulated (variances are kept for all modes).
  std::vector<Mode> corr_modes;
  // Negative: max(1, 4 / min|k|^2), halved to horizon/2 if it would swallow the run.
  double burn_in = -1;
  int jobs = 1;
  ConvolutionMethod method = ConvolutionMethod::kAuto;

  void validate() const;
  int steps_per_sample() const;
  double effective_burn_in() const;
};

// Exponential Euler: exact OU factor per mode, nonlinearity explicit.
class Stepper {
 public:
  Stepper(LatticePtr lat, const Vec& w, double dt, ConvolutionMethod method = ConvolutionMethod::kAuto);

  void step(SpectralField& field, Rng& rng) const;
  // Same update with a caller-provided noise term per canonical mode (already scaled).
  void step_with_noise(SpectralField& field, const std::vector<cplx>& noise) const;

  const std::vector<double>& decay() const { return decay_; }
  const std::vector<double>& noise_scale() const { return noise_; }
  double dt() const { return dt_; }

 private:
  LatticePtr lat_;
  Vec w_;
  double dt_;
  double lambda_;
  ConvolutionMethod method_;
  std::vector<double> decay_;
  std::vector<double> noise_;
};

SpectralField step(const SpectralField& field, const SimConfig& config, Rng& rng);

struct Estimate {
  cplx value = 0;
  double std_err = 0;
  int n = 0;
  bool std_err_defined() const { return n > 1; }
};

struct TrajectoryStats {
  LatticePtr lattice;
  std::vector<Mode> modes;          // canonical modes, variance order
  std::vector<Estimate> variance;   // E|eta_t(k)|^2
  std::vector<double> lags;
  // (corr mode index, lag index) -> estimate of E[eta_{t+lag}(k) conj(eta_t(k))].
  std::map<std::pair<int, int>, Estimate> corr;
  std::vector<Mode> corr_modes;
  // Per-member time averages behind corr, kept for resampling error estimates.
  std::map<std::pair<int, int>, std::vector<cplx>> corr_members;
  int n_samples = 0;
  double dt = 0;
  double horizon = 0;
  double burn_in = 0;
  bool burn_in_clipped = false;
};

TrajectoryStats run_stationary(const SimConfig& config);

Estimate two_time_correlation(const TrajectoryStats& stats, const Mode& k, double lag);

// Rows: observable, k, lag, estimate_re, estimate_im, std_err, n.
void write_stats_csv(std::ostream& os, const TrajectoryStats& stats);

// F(eta) for a kernel with levels 1 and 2: I_1(f) = sum_k f(k) eta(-k),
// I_2(f) = sum_{k1,k2} f(k1,k2) (eta(-k1) eta(-k2) - 1{k1+k2=0}).
cplx evaluate_observable(const ChaosKernel& f, const SpectralField& field);

struct TimeAverageVariance {
  double variance = 0;
  double std_err = 0;
  int n = 0;
  double surrogate = 0;  // t ||(-L0)^{-1/2} F||^2
  double ratio() const { return variance / surrogate; }
};

// Monte Carlo Var(int_0^t F(eta_s) ds) along stationary trajectories; one entry per observable.
std::vector<TimeAverageVariance> time_average_variance(const SimConfig& config, const std::vector<ChaosKernel>& observables,
                                                       double t);
// Closed form of the same quantity for the linear dynamics and a level-1 kernel.
double linear_time_average_variance(const ChaosKernel& f, double t);

struct CoupledBias {
  std::vector<double> dts;                     // dt, dt/2, dt/4, ...
  std::vector<std::vector<Estimate>> variance; // [level][canonical mode]
  // Bias of levels 0 and 1 against the Richardson value 2 V_2 - V_1, paired across levels.
  std::vector<Estimate> bias_coarse;
  std::vector<Estimate> bias_fine;
  double worst_bias_coarse = 0;
  double worst_bias_fine = 0;
  double bias_ratio() const { return worst_bias_coarse / worst_bias_fine; }
};

// Runs levels dt, dt/2, dt/4 on common Brownian paths (exact OU aggregation of the
// finest noise) and estimates the stationary-variance bias at dt and dt/2.
CoupledBias coupled_variance_bias(const SimConfig& config);

}  // namespace wcsb
