#include "wcsb/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace wcsb {

void SimConfig::validate() const {
  if (!lattice) throw std::invalid_argument("simulation needs a lattice");
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  if (dt > 0.1 / lattice->max_norm2() * (1 + 1e-12))
    throw std::invalid_argument("dt exceeds the stability guard 0.1 / max|k|^2");
  if (n_samples < 1) throw std::invalid_argument("n_samples must be at least 1");
  if (!(horizon >= dt)) throw std::invalid_argument("horizon must cover at least one step");
  if (sample_interval < 0) throw std::invalid_argument("sample_interval must be nonnegative");
  const double r = (sample_interval > 0 ? sample_interval : dt) / dt;
  if (std::abs(r - std::round(r)) > 1e-9) throw std::invalid_argument("sample_interval must be a multiple of dt");
  for (const Mode& k : corr_modes) {
    if (!lattice->in_cutoff(k)) throw std::invalid_argument("correlation mode outside the cutoff");
  }
}

int SimConfig::steps_per_sample() const {
  return sample_interval > 0 ? static_cast<int>(std::lround(sample_interval / dt)) : 1;
}

double SimConfig::effective_burn_in() const {
  if (burn_in >= 0) return burn_in;
  const double b = std::max(1.0, 4.0 / lattice->min_norm2());
  return b < horizon ? b : 0.5 * horizon;
}

Stepper::Stepper(LatticePtr lat, const Vec& w, double dt, ConvolutionMethod method)
    : lat_(std::move(lat)), w_(w), dt_(dt), lambda_(lat_->lambda()), method_(method) {
  for (const Mode& k : lat_->canonical_modes()) {
    const double g = 0.5 * static_cast<double>(norm2(k));
    decay_.push_back(std::exp(-g * dt));
    noise_.push_back(std::sqrt(-std::expm1(-2.0 * g * dt)));
  }
}

void Stepper::step_with_noise(SpectralField& field, const std::vector<cplx>& noise) const {
  if (field.lattice_ptr() != lat_ && !(field.lattice().dim() == lat_->dim() &&
                                       field.lattice().eps_exact() == lat_->eps_exact()))
    throw std::invalid_argument("field lives on a different lattice");
  const bool nonlinear = norm2(w_) > 0;
  SpectralField nl = nonlinear ? nonlinearity(field, w_, lambda_, method_) : SpectralField(lat_);
  auto& c = field.canonical();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = decay_[i] * (c[i] + dt_ * nl.canonical()[i]) + noise[i];
}

void Stepper::step(SpectralField& field, Rng& rng) const {
  std::vector<cplx> noise(noise_.size());
  for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = noise_[i] * complex_gaussian(rng);
  step_with_noise(field, noise);
}

SpectralField step(const SpectralField& field, const SimConfig& config, Rng& rng) {
  if (field.lattice_ptr() != config.lattice) throw std::invalid_argument("field lattice does not match the config");
  Stepper s(config.lattice, config.w, config.dt, config.method);
  SpectralField out = field;
  s.step(out, rng);
  return out;
}

namespace {

template <class Fn>
void for_members(int n, int jobs, Fn fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

Estimate mean_estimate(const std::vector<cplx>& xs) {
  Estimate e;
  e.n = static_cast<int>(xs.size());
  cplx s = 0;
  for (const cplx& x : xs) s += x;
  e.value = s / static_cast<double>(e.n);
  if (e.n > 1) {
    double v = 0;
    for (const cplx& x : xs) v += std::norm(x - e.value);
    e.std_err = std::sqrt(v / (e.n - 1) / e.n);
  } else {
    e.std_err = std::nan("");
  }
  return e;
}

std::string mode_str(const Mode& k, int d) {
  std::string s;
  for (int i = 0; i < d; ++i) {
    if (i) s += ":";
    s += std::to_string(k[i]);
  }
  return s;
}

}  // namespace

TrajectoryStats run_stationary(const SimConfig& config) {
  config.validate();
  const Lattice& lat = *config.lattice;
  const int spp = config.steps_per_sample();
  const double interval = spp * config.dt;
  const int n_snap = static_cast<int>(std::floor(config.horizon / interval + 1e-9));
  const double burn = config.effective_burn_in();
  const int s0 = static_cast<int>(std::ceil(burn / interval - 1e-9));
  const int n_lag = static_cast<int>(std::floor(config.max_lag / interval + 1e-9));
  if (s0 > n_snap) throw std::invalid_argument("burn-in exceeds the horizon");

  std::vector<int> corr_idx;
  std::vector<bool> corr_conj;
  for (const Mode& k : config.corr_modes) {
    bool conj = false;
    corr_idx.push_back(lat.canonical_index(k, &conj));
    corr_conj.push_back(conj);
  }
  const std::size_t nm = lat.canonical_modes().size();
  const std::size_t nc = corr_idx.size();
  std::vector<std::vector<double>> var_member(config.n_samples, std::vector<double>(nm));
  std::vector<std::vector<cplx>> corr_member(config.n_samples, std::vector<cplx>(nc * (n_lag + 1)));

  Stepper stepper(config.lattice, config.w, config.dt, config.method);
  for_members(config.n_samples, config.jobs, [&](int member) {
    Rng rng = make_stream(config.master_seed, static_cast<std::uint64_t>(member));
    SpectralField f = sample_white_noise(config.lattice, rng);
    std::vector<std::vector<cplx>> hist(n_snap + 1, std::vector<cplx>(nc));
    std::vector<double>& var = var_member[member];
    int used = 0;
    for (int s = 0; s <= n_snap; ++s) {
      if (s > 0) {
        for (int j = 0; j < spp; ++j) stepper.step(f, rng);
      }
      for (std::size_t c = 0; c < nc; ++c) {
        const cplx v = f.canonical()[corr_idx[c]];
        hist[s][c] = corr_conj[c] ? std::conj(v) : v;
      }
      if (s >= s0) {
        for (std::size_t i = 0; i < nm; ++i) var[i] += std::norm(f.canonical()[i]);
        ++used;
      }
    }
    for (double& v : var) v /= used;
    for (std::size_t c = 0; c < nc; ++c) {
      for (int l = 0; l <= n_lag; ++l) {
        cplx acc = 0;
        int cnt = 0;
        for (int s = s0; s + l <= n_snap; ++s) {
          acc += hist[s + l][c] * std::conj(hist[s][c]);
          ++cnt;
        }
        corr_member[member][c * (n_lag + 1) + l] = cnt ? acc / static_cast<double>(cnt) : cplx(std::nan(""));
      }
    }
  });

  TrajectoryStats st;
  st.lattice = config.lattice;
  st.modes = lat.canonical_modes();
  st.n_samples = config.n_samples;
  st.dt = config.dt;
  st.horizon = config.horizon;
  st.burn_in = s0 * interval;
  st.burn_in_clipped = config.burn_in < 0 && burn < std::max(1.0, 4.0 / lat.min_norm2());
  st.corr_modes = config.corr_modes;
  for (std::size_t i = 0; i < nm; ++i) {
    std::vector<cplx> xs(config.n_samples);
    for (int m = 0; m < config.n_samples; ++m) xs[m] = var_member[m][i];
    st.variance.push_back(mean_estimate(xs));
  }
  for (int l = 0; l <= n_lag; ++l) st.lags.push_back(l * interval);
  for (std::size_t c = 0; c < nc; ++c) {
    for (int l = 0; l <= n_lag; ++l) {
      if (s0 + l > n_snap) continue;
      std::vector<cplx> xs(config.n_samples);
      for (int m = 0; m < config.n_samples; ++m) xs[m] = corr_member[m][c * (n_lag + 1) + l];
      st.corr[{static_cast<int>(c), l}] = mean_estimate(xs);
      st.corr_members[{static_cast<int>(c), l}] = std::move(xs);
    }
  }
  return st;
}

Estimate two_time_correlation(const TrajectoryStats& stats, const Mode& k, double lag) {
  int li = -1;
  for (std::size_t l = 0; l < stats.lags.size(); ++l) {
    if (std::abs(stats.lags[l] - lag) <= 1e-9 * std::max(1.0, lag)) li = static_cast<int>(l);
  }
  if (li < 0) throw std::out_of_range("lag not present in the correlation table");
  for (std::size_t c = 0; c < stats.corr_modes.size(); ++c) {
    const Mode& m = stats.corr_modes[c];
    if (m == k || m == -k) {
      auto it = stats.corr.find({static_cast<int>(c), li});
      if (it == stats.corr.end()) throw std::out_of_range("lag not covered after burn-in");
      Estimate e = it->second;
      if (m != k) e.value = std::conj(e.value);
      return e;
    }
  }
  throw std::out_of_range("mode not present in the correlation table");
}

void write_stats_csv(std::ostream& os, const TrajectoryStats& stats) {
  const int d = stats.lattice->dim();
  os.precision(12);
  os << "observable,k,lag,estimate_re,estimate_im,stderr,n\n";
  for (std::size_t i = 0; i < stats.modes.size(); ++i) {
    const Estimate& e = stats.variance[i];
    os << "variance," << mode_str(stats.modes[i], d) << ",0," << e.value.real() << "," << e.value.imag() << ","
       << e.std_err << "," << e.n << "\n";
  }
  for (const auto& [key, e] : stats.corr) {
    os << "correlation," << mode_str(stats.corr_modes[key.first], d) << "," << stats.lags[key.second] << ","
       << e.value.real() << "," << e.value.imag() << "," << e.std_err << "," << e.n << "\n";
  }
}

cplx evaluate_observable(const ChaosKernel& f, const SpectralField& field) {
  cplx s = 0;
  for (const auto& [n, lv] : f.levels()) {
    if (n == 0 || n > 2) throw std::invalid_argument("observables are supported on chaos levels 1 and 2");
    for (const auto& [t, v] : lv) {
      if (n == 1) {
        s += v * field.at(-t.mode(0));
        continue;
      }
      // Sum over the orderings of the sorted pair.
      const Mode a = t.mode(0), b = t.mode(1);
      cplx prod = field.at(-a) * field.at(-b);
      if (is_zero(a + b)) prod -= 1.0;
      s += v * prod * (a == b ? 1.0 : 2.0);
    }
  }
  return s;
}

std::vector<TimeAverageVariance> time_average_variance(const SimConfig& config, const std::vector<ChaosKernel>& observables,
                                                       double t) {
  config.validate();
  for (const ChaosKernel& f : observables) {
    if (f.level(0) || f.size() == 0) throw std::invalid_argument("observable must have positive chaos order");
  }
  const int steps = static_cast<int>(std::lround(t / config.dt));
  if (std::abs(steps * config.dt - t) > 1e-9 * t) throw std::invalid_argument("t must be a multiple of dt");
  const std::size_t no = observables.size();
  std::vector<std::vector<cplx>> integral(no, std::vector<cplx>(config.n_samples));
  Stepper stepper(config.lattice, config.w, config.dt, config.method);
  for_members(config.n_samples, config.jobs, [&](int member) {
    Rng rng = make_stream(config.master_seed, static_cast<std::uint64_t>(member), 0x17);
    SpectralField f = sample_white_noise(config.lattice, rng);
    std::vector<cplx> prev(no), acc(no);
    for (std::size_t o = 0; o < no; ++o) prev[o] = evaluate_observable(observables[o], f);
    for (int s = 0; s < steps; ++s) {
      stepper.step(f, rng);
      for (std::size_t o = 0; o < no; ++o) {
        const cplx cur = evaluate_observable(observables[o], f);
        acc[o] += 0.5 * config.dt * (prev[o] + cur);
        prev[o] = cur;
      }
    }
    for (std::size_t o = 0; o < no; ++o) integral[o][member] = acc[o];
  });
  std::vector<TimeAverageVariance> out;
  for (std::size_t o = 0; o < no; ++o) {
    const auto& xs = integral[o];
    const int n = static_cast<int>(xs.size());
    cplx mean = 0;
    for (const cplx& x : xs) mean += x;
    mean /= static_cast<double>(n);
    std::vector<double> dev(n);
    double var = 0;
    for (int i = 0; i < n; ++i) {
      dev[i] = std::norm(xs[i] - mean);
      var += dev[i];
    }
    var /= std::max(1, n - 1);
    double v2 = 0;
    for (double x : dev) v2 += (x - var) * (x - var);
    TimeAverageVariance r;
    r.variance = var;
    r.n = n;
    r.std_err = n > 1 ? std::sqrt(v2 / (static_cast<double>(n) * (n - 1))) : std::nan("");
    const double nrm = norm(apply_multiplier(Multiplier::FracL0(-0.5), observables[o]));
    r.surrogate = t * nrm * nrm;
    out.push_back(r);
  }
  return out;
}

double linear_time_average_variance(const ChaosKernel& f, double t) {
  double s = 0;
  for (const auto& [n, lv] : f.levels()) {
    if (n != 1) throw std::invalid_argument("closed form covers level-1 observables");
    for (const auto& [tup, v] : lv) {
      const double g = 0.5 * static_cast<double>(norm2(tup.mode(0)));
      s += std::norm(v) * 2.0 * (t / g + std::expm1(-g * t) / (g * g));
    }
  }
  return s;
}

CoupledBias coupled_variance_bias(const SimConfig& config) {
  config.validate();
  constexpr int kLevels = 3;
  const Lattice& lat = *config.lattice;
  const std::size_t nm = lat.canonical_modes().size();
  const int coarse_steps = static_cast<int>(std::lround(config.horizon / config.dt));
  const double burn = config.effective_burn_in();
  const int b0 = static_cast<int>(std::ceil(burn / config.dt - 1e-9));

  std::vector<Stepper> steppers;
  std::vector<double> dts;
  for (int l = 0; l < kLevels; ++l) {
    dts.push_back(config.dt / (1 << l));
    steppers.emplace_back(config.lattice, config.w, dts.back(), config.method);
  }
  const Stepper& fine = steppers.back();
  // member -> level -> mode
  std::vector<std::vector<std::vector<double>>> var(config.n_samples,
                                                    std::vector<std::vector<double>>(kLevels, std::vector<double>(nm)));
  for_members(config.n_samples, config.jobs, [&](int member) {
    Rng rng = make_stream(config.master_seed, static_cast<std::uint64_t>(member), 0xB1A5);
    const SpectralField init = sample_white_noise(config.lattice, rng);
    std::vector<SpectralField> fields(kLevels, init);
    std::vector<std::vector<cplx>> acc(kLevels, std::vector<cplx>(nm));
    std::vector<cplx> xi(nm);
    int used = 0;
    for (int s = 0; s < coarse_steps; ++s) {
      for (int l = 0; l < kLevels; ++l) std::fill(acc[l].begin(), acc[l].end(), 0.0);
      const int fine_per_coarse = 1 << (kLevels - 1);
      for (int f = 0; f < fine_per_coarse; ++f) {
        for (std::size_t i = 0; i < nm; ++i) xi[i] = fine.noise_scale()[i] * complex_gaussian(rng);
        // Exact OU aggregation: the noise of a step of size 2h is a_h * noise_1 + noise_2.
        for (int l = 0; l < kLevels; ++l) {
          for (std::size_t i = 0; i < nm; ++i) acc[l][i] = fine.decay()[i] * acc[l][i] + xi[i];
          const int every = 1 << (kLevels - 1 - l);
          if ((f + 1) % every == 0) {
            steppers[l].step_with_noise(fields[l], acc[l]);
            std::fill(acc[l].begin(), acc[l].end(), 0.0);
          }
        }
      }
      if (s + 1 >= b0) {
        for (int l = 0; l < kLevels; ++l) {
          for (std::size_t i = 0; i < nm; ++i) var[member][l][i] += std::norm(fields[l].canonical()[i]);
        }
        ++used;
      }
    }
    for (auto& lv : var[member]) {
      for (double& v : lv) v /= std::max(1, used);
    }
  });

  CoupledBias out;
  out.dts = dts;
  for (int l = 0; l < kLevels; ++l) {
    std::vector<Estimate> row;
    for (std::size_t i = 0; i < nm; ++i) {
      std::vector<cplx> xs(config.n_samples);
      for (int m = 0; m < config.n_samples; ++m) xs[m] = var[m][l][i];
      row.push_back(mean_estimate(xs));
    }
    out.variance.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < nm; ++i) {
    std::vector<cplx> bc(config.n_samples), bf(config.n_samples);
    for (int m = 0; m < config.n_samples; ++m) {
      const double rich = 2.0 * var[m][2][i] - var[m][1][i];
      bc[m] = var[m][0][i] - rich;
      bf[m] = var[m][1][i] - rich;
    }
    out.bias_coarse.push_back(mean_estimate(bc));
    out.bias_fine.push_back(mean_estimate(bf));
    out.worst_bias_coarse = std::max(out.worst_bias_coarse, std::abs(out.bias_coarse.back().value));
    out.worst_bias_fine = std::max(out.worst_bias_fine, std::abs(out.bias_fine.back().value));
  }
  return out;
}

}  // namespace wcsb
