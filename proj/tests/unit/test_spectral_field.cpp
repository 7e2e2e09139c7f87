#include <cmath>

#include "doctest.h"
#include "wcsb/spectral_field.hpp"

using namespace wcsb;

TEST_CASE("nonlinearity on a hand-expanded field") {
  const auto lat = make_lattice(2, Rational(1, 2));
  SpectralField f(lat);
  f.set(make_mode({1, 0}), 1.0);
  f.set(make_mode({0, 1}), 1.0);
  const Vec w = make_vec({1, 0});
  for (auto m : {ConvolutionMethod::kDirect, ConvolutionMethod::kFft}) {
    const SpectralField n = nonlinearity(f, w, lat->lambda(), m);
    const cplx expected = cplx(0, 1) / (2 * M_PI) * lat->lambda() * 2.0;
    CHECK(std::abs(n.at(make_mode({1, 1})) - expected) < 1e-12);
    CHECK(std::abs(n.at(make_mode({-1, -1})) - std::conj(expected)) < 1e-12);
    // (0,2) has w.n = 0.
    CHECK(std::abs(n.at(make_mode({0, 2}))) < 1e-12);
  }
}

TEST_CASE("direct and FFT convolutions agree") {
  for (auto [d, eps] : {std::pair{2, Rational(1, 5)}, {3, Rational(2, 5)}}) {
    const auto lat = make_lattice(d, eps);
    Rng rng = make_stream(7, d);
    const SpectralField f = sample_white_noise(lat, rng);
    const Vec w = d == 2 ? make_vec({1.0, -0.5}) : make_vec({0.3, 1.0, -0.7});
    const auto a = nonlinearity(f, w, lat->lambda(), ConvolutionMethod::kDirect);
    const auto b = nonlinearity(f, w, lat->lambda(), ConvolutionMethod::kFft);
    double diff = 0, scale = 0;
    for (std::size_t i = 0; i < a.canonical().size(); ++i) {
      diff = std::max(diff, std::abs(a.canonical()[i] - b.canonical()[i]));
      scale = std::max(scale, std::abs(a.canonical()[i]));
    }
    CHECK(diff <= 1e-12 * scale);
  }
}

TEST_CASE("energy bracket vanishes") {
  const auto lat = make_lattice(2, Rational(1, 6));
  Rng rng = make_stream(11, 0);
  for (int i = 0; i < 5; ++i) {
    const SpectralField f = sample_white_noise(lat, rng);
    const double b = energy_bracket(f, make_vec({1, 2}), lat->lambda());
    const auto n = nonlinearity(f, make_vec({1, 2}), lat->lambda());
    CHECK(std::abs(b) <= 1e-12 * std::sqrt(n.norm2() * f.norm2()));
  }
}

TEST_CASE("white noise has unit variance per mode") {
  const auto lat = make_lattice(2, Rational(1, 4));
  Rng rng = make_stream(3, 0);
  double s = 0;
  int n = 0;
  for (int i = 0; i < 2000; ++i) {
    const SpectralField f = sample_white_noise(lat, rng);
    for (const cplx& c : f.canonical()) {
      s += std::norm(c);
      ++n;
    }
  }
  CHECK(s / n == doctest::Approx(1.0).epsilon(0.02));
}
