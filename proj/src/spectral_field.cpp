#include "wcsb/spectral_field.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>

namespace wcsb {

SpectralField::SpectralField(LatticePtr lat) : lat_(std::move(lat)), c_(lat_->canonical_modes().size()) {}

SpectralField::SpectralField(LatticePtr lat, std::vector<cplx> canonical_coeffs)
    : lat_(std::move(lat)), c_(std::move(canonical_coeffs)) {
  if (c_.size() != lat_->canonical_modes().size()) throw std::invalid_argument("coefficient count mismatch");
}

cplx SpectralField::at(const Mode& k) const {
  bool conj = false;
  const int i = lat_->canonical_index(k, &conj);
  if (i < 0) return 0.0;
  return conj ? std::conj(c_[i]) : c_[i];
}

void SpectralField::set(const Mode& k, cplx v) {
  bool conj = false;
  const int i = lat_->canonical_index(k, &conj);
  if (i < 0) throw std::out_of_range("mode outside the cutoff");
  c_[i] = conj ? std::conj(v) : v;
}

void SpectralField::expand(std::vector<cplx>& full) const {
  const auto& modes = lat_->modes();
  full.resize(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) full[i] = at(modes[i]);
}

double SpectralField::norm2() const {
  double s = 0;
  for (const cplx& v : c_) s += 2.0 * std::norm(v);
  return s;
}

SpectralField sample_white_noise(const LatticePtr& lat, Rng& rng) {
  SpectralField f(lat);
  for (cplx& v : f.canonical()) v = complex_gaussian(rng);
  return f;
}

namespace {

int fft_size(int min_size) {
  for (int m = std::max(min_size, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

struct FftPlans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// Plans are created once per (d, M) under a lock; execution with the new-array
// interface is thread safe.
const FftPlans& plans_for(int d, int m) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, FftPlans> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({d, m});
  if (it != cache.end()) return it->second;
  std::vector<int> dims(d, m);
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(m);
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
  FftPlans p;
  p.forward = fftw_plan_dft(d, dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  p.backward = fftw_plan_dft(d, dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(buf);
  return cache.emplace(std::make_pair(d, m), p).first->second;
}

// conv[i] = sum_{l+m = canon[i]} J(l,m) eta(l) eta(m), via the pair table.
void convolve_direct(const SpectralField& f, std::vector<cplx>& conv) {
  const Lattice& lat = f.lattice();
  const PairTable& t = lat.pair_table();
  std::vector<cplx> full;
  f.expand(full);
  conv.assign(lat.canonical_modes().size(), 0.0);
  for (std::size_t n = 0; n < conv.size(); ++n) {
    cplx s = 0;
    for (std::size_t p = t.offsets[n]; p < t.offsets[n + 1]; ++p) s += t.weight[p] * full[t.first[p]] * full[t.second[p]];
    conv[n] = s;
  }
}

// Same sum through a zero-padded transform of size M >= 3R+1 per axis, which keeps
// every product l+m with |l|,|m| <= R from wrapping onto an in-cutoff output.
void convolve_fft(const SpectralField& f, std::vector<cplx>& conv) {
  const Lattice& lat = f.lattice();
  const int d = lat.dim();
  const int m = fft_size(3 * lat.radius() + 1);
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(m);
  const FftPlans& plans = plans_for(d, m);
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
  for (std::size_t i = 0; i < total; ++i) buf[i][0] = buf[i][1] = 0.0;
  auto grid_index = [&](const Mode& k) {
    std::size_t idx = 0;
    for (int i = 0; i < d; ++i) idx = idx * m + static_cast<std::size_t>((k[i] % m + m) % m);
    return idx;
  };
  for (const Mode& k : lat.modes()) {
    const cplx v = f.at(k);
    const std::size_t g = grid_index(k);
    buf[g][0] = v.real();
    buf[g][1] = v.imag();
  }
  fftw_execute_dft(plans.backward, buf, buf);
  for (std::size_t i = 0; i < total; ++i) {
    const cplx u(buf[i][0], buf[i][1]);
    const cplx u2 = u * u;
    buf[i][0] = u2.real();
    buf[i][1] = u2.imag();
  }
  fftw_execute_dft(plans.forward, buf, buf);
  const double scale = 1.0 / static_cast<double>(total);
  const auto& canon = lat.canonical_modes();
  conv.resize(canon.size());
  for (std::size_t n = 0; n < canon.size(); ++n) {
    const std::size_t g = grid_index(canon[n]);
    conv[n] = cplx(buf[g][0], buf[g][1]) * scale;
  }
  fftw_free(buf);
}

bool prefer_fft(const Lattice& lat) {
  // The pair table costs ~|modes|^2 / 2 products; the transform ~ 2 M^d log M^d.
  const double n = static_cast<double>(lat.modes().size());
  double grid = 1;
  const int m = fft_size(3 * lat.radius() + 1);
  for (int i = 0; i < lat.dim(); ++i) grid *= m;
  return 0.5 * n * n > 10.0 * grid * std::log2(grid + 1.0);
}

}  // namespace

SpectralField nonlinearity(const SpectralField& field, const Vec& w, double lambda, ConvolutionMethod method) {
  const Lattice& lat = field.lattice();
  SpectralField out(field.lattice_ptr());
  if (norm2(w) == 0.0 || lambda == 0.0) return out;
  std::vector<cplx> conv;
  const bool fft = method == ConvolutionMethod::kFft || (method == ConvolutionMethod::kAuto && prefer_fft(lat));
  if (fft) {
    convolve_fft(field, conv);
  } else {
    convolve_direct(field, conv);
  }
  const double c = lambda / std::pow(2.0 * M_PI, 0.5 * lat.dim());
  const auto& canon = lat.canonical_modes();
  for (std::size_t n = 0; n < canon.size(); ++n) out.canonical()[n] = cplx(0.0, c * dot(w, canon[n])) * conv[n];
  return out;
}

double energy_bracket(const SpectralField& field, const Vec& w, double lambda, ConvolutionMethod method) {
  const SpectralField nl = nonlinearity(field, w, lambda, method);
  double s = 0;
  for (std::size_t i = 0; i < nl.canonical().size(); ++i)
    s += 2.0 * (nl.canonical()[i] * std::conj(field.canonical()[i])).real();
  return s;
}

void write_field_csv(std::ostream& os, const SpectralField& field) {
  const Lattice& lat = field.lattice();
  for (int i = 0; i < lat.dim(); ++i) os << "k" << (i + 1) << ",";
  os << "re,im\n";
  os.precision(17);
  const auto& canon = lat.canonical_modes();
  for (std::size_t n = 0; n < canon.size(); ++n) {
    for (int i = 0; i < lat.dim(); ++i) os << canon[n][i] << ",";
    os << field.canonical()[n].real() << "," << field.canonical()[n].imag() << "\n";
  }
}

}  // namespace wcsb
