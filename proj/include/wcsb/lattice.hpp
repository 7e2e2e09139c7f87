#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "wcsb/rational.hpp"

namespace wcsb {

constexpr int kMaxDim = 4;

// Integer Fourier mode; coordinates beyond the lattice dimension are zero.
using Mode = std::array<int, kMaxDim>;
using Vec = std::array<double, kMaxDim>;

inline Mode operator+(const Mode& a, const Mode& b) {
  Mode r{};
  for (int i = 0; i < kMaxDim; ++i) r[i] = a[i] + b[i];
  return r;
}
inline Mode operator-(const Mode& a, const Mode& b) {
  Mode r{};
  for (int i = 0; i < kMaxDim; ++i) r[i] = a[i] - b[i];
  return r;
}
inline Mode operator-(const Mode& a) {
  Mode r{};
  for (int i = 0; i < kMaxDim; ++i) r[i] = -a[i];
  return r;
}
inline bool is_zero(const Mode& k) { return k[0] == 0 && k[1] == 0 && k[2] == 0 && k[3] == 0; }
inline std::int64_t norm2(const Mode& k) {
  std::int64_t s = 0;
  for (int v : k) s += static_cast<std::int64_t>(v) * v;
  return s;
}
inline double dot(const Vec& w, const Mode& k) {
  double s = 0;
  for (int i = 0; i < kMaxDim; ++i) s += w[i] * k[i];
  return s;
}
inline double norm2(const Vec& w) {
  double s = 0;
  for (double v : w) s += v * v;
  return s;
}
// One representative of each {k,-k} pair: the first nonzero coordinate is positive.
inline bool is_canonical(const Mode& k) {
  for (int v : k) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return false;
}

Mode make_mode(std::initializer_list<int> coords);
Vec make_vec(std::initializer_list<double> coords);

enum class NormKind { kEuclidean, kSup };

struct PairTable;

class Lattice {
 public:
  // d = 2 accepts any eps in (0,1); d >= 3 requires 1/eps in N + 1/2.
  Lattice(int d, Rational eps);

  int dim() const { return d_; }
  const Rational& eps_exact() const { return eps_; }
  double eps() const { return eps_.value(); }
  NormKind norm_kind() const { return d_ == 2 ? NormKind::kEuclidean : NormKind::kSup; }
  // Largest coordinate magnitude of an in-cutoff mode.
  int radius() const { return radius_; }
  double lambda() const { return lambda_; }

  // |k| <= 1/eps in the dimension-appropriate norm (exact integer comparison).
  bool within(const Mode& k) const;
  // Nonzero and within the cutoff.
  bool in_cutoff(const Mode& k) const { return !is_zero(k) && within(k); }
  // The interaction indicator: l, m, l+m all nonzero and within the cutoff.
  bool indicator(const Mode& l, const Mode& m) const;

  // Sorted, negation-closed list of nonzero in-cutoff modes.
  const std::vector<Mode>& modes() const { return modes_; }
  // Sorted canonical representatives.
  const std::vector<Mode>& canonical_modes() const { return canon_; }
  // Index into modes(), or -1.
  int mode_index(const Mode& k) const;
  // Index into canonical_modes() of k or -k, or -1; sets *conj when k is not canonical.
  int canonical_index(const Mode& k, bool* conj) const;

  double max_norm2() const { return static_cast<double>(max_norm2_); }
  double min_norm2() const { return 1.0; }

  // Pair table for the direct convolution, built once on first use.
  const PairTable& pair_table() const;

 private:
  int box_index(const Mode& k) const;

  int d_;
  Rational eps_;
  int radius_ = 0;
  double lambda_ = 0;
  std::int64_t max_norm2_ = 0;
  std::vector<Mode> modes_;
  std::vector<Mode> canon_;
  std::vector<int> box_to_mode_;
  std::vector<int> box_to_canon_;
  mutable std::once_flag pairs_once_;
  mutable std::unique_ptr<PairTable> pairs_;
};

using LatticePtr = std::shared_ptr<const Lattice>;

LatticePtr make_lattice(int d, Rational eps);

double lambda_eps(const Lattice& lat);
bool cutoff_indicator(const Lattice& lat, const Mode& l, const Mode& m);
const std::vector<Mode>& enumerate_modes(const Lattice& lat);

// For each canonical output n, the unordered pairs {l, m} (indices into modes()) with
// l + m = n and indicator(l, m); weight is 2 for l != m and 1 otherwise.
struct PairTable {
  std::vector<std::size_t> offsets;
  std::vector<int> first;
  std::vector<int> second;
  std::vector<double> weight;
};

}  // namespace wcsb
