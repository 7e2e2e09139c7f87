#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "wcsb/lattice.hpp"
#include "wcsb/rng.hpp"

namespace wcsb {

using cplx = std::complex<double>;

// Fourier coefficients of a real mean-zero field, stored on canonical modes only.
class SpectralField {
 public:
  explicit SpectralField(LatticePtr lat);
  SpectralField(LatticePtr lat, std::vector<cplx> canonical_coeffs);

  const Lattice& lattice() const { return *lat_; }
  const LatticePtr& lattice_ptr() const { return lat_; }

  // Coefficient at any in-cutoff mode (conjugate materialized for non-canonical k); 0 outside.
  cplx at(const Mode& k) const;
  // Set the coefficient of k (and implicitly of -k).
  void set(const Mode& k, cplx v);

  const std::vector<cplx>& canonical() const { return c_; }
  std::vector<cplx>& canonical() { return c_; }

  // Values on the full mode list modes(), used by the convolution kernels.
  void expand(std::vector<cplx>& full) const;

  double norm2() const;

 private:
  LatticePtr lat_;
  std::vector<cplx> c_;
};

enum class ConvolutionMethod { kAuto, kDirect, kFft };

SpectralField sample_white_noise(const LatticePtr& lat, Rng& rng);

// Coefficient at n: (i / (2 pi)^{d/2}) lambda (w.n) sum_{l+m=n} J(l,m) eta(l) eta(m).
SpectralField nonlinearity(const SpectralField& field, const Vec& w, double lambda,
                           ConvolutionMethod method = ConvolutionMethod::kAuto);

// sum_k N(k) eta(-k); vanishes identically.
double energy_bracket(const SpectralField& field, const Vec& w, double lambda,
                      ConvolutionMethod method = ConvolutionMethod::kAuto);

// One row per canonical mode: k_1..k_d, Re, Im.
void write_field_csv(std::ostream& os, const SpectralField& field);

}  // namespace wcsb
