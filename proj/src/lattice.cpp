#include "wcsb/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wcsb {

Mode make_mode(std::initializer_list<int> coords) {
  if (coords.size() > static_cast<std::size_t>(kMaxDim)) throw std::invalid_argument("mode too long");
  Mode k{};
  std::copy(coords.begin(), coords.end(), k.begin());
  return k;
}

Vec make_vec(std::initializer_list<double> coords) {
  if (coords.size() > static_cast<std::size_t>(kMaxDim)) throw std::invalid_argument("vector too long");
  Vec v{};
  std::copy(coords.begin(), coords.end(), v.begin());
  return v;
}

Lattice::Lattice(int d, Rational eps) : d_(d), eps_(eps) {
  if (d < 2 || d > kMaxDim) throw std::invalid_argument("dimension must be in [2, " + std::to_string(kMaxDim) + "]");
  if (eps.num <= 0) throw std::invalid_argument("eps must be positive");
  if (d == 2) {
    if (!(eps < Rational(1, 1))) throw std::invalid_argument("d = 2 requires eps < 1");
  } else {
    // 1/eps = den/num must equal m + 1/2, i.e. 2*den/num is an odd integer.
    if ((2 * eps.den) % eps.num != 0 || ((2 * eps.den) / eps.num) % 2 == 0)
      throw std::invalid_argument("d >= 3 requires 1/eps in N + 1/2, got eps = " + eps.str());
  }
  radius_ = static_cast<int>(eps.den / eps.num);
  lambda_ = d == 2 ? 1.0 / std::sqrt(std::log(1.0 / (eps.value() * eps.value())))
                   : std::pow(eps.value(), 0.5 * d - 1.0);

  const int side = 2 * radius_ + 1;
  std::size_t box = 1;
  for (int i = 0; i < d_; ++i) box *= static_cast<std::size_t>(side);
  box_to_mode_.assign(box, -1);
  box_to_canon_.assign(box, -1);

  Mode k{};
  for (int i = 0; i < d_; ++i) k[i] = -radius_;
  for (std::size_t b = 0; b < box; ++b) {
    if (in_cutoff(k)) modes_.push_back(k);
    for (int i = d_ - 1; i >= 0; --i) {
      if (++k[i] <= radius_) break;
      k[i] = -radius_;
    }
  }
  // The odometer above runs the last coordinate fastest, which is lexicographic order.
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    box_to_mode_[box_index(modes_[i])] = static_cast<int>(i);
    max_norm2_ = std::max(max_norm2_, norm2(modes_[i]));
    if (is_canonical(modes_[i])) canon_.push_back(modes_[i]);
  }
  for (std::size_t i = 0; i < canon_.size(); ++i) {
    box_to_canon_[box_index(canon_[i])] = static_cast<int>(i);
    box_to_canon_[box_index(-canon_[i])] = static_cast<int>(i);
  }
}

bool Lattice::within(const Mode& k) const {
  const __int128 n = eps_.num, dd = eps_.den;
  if (d_ == 2) return static_cast<__int128>(norm2(k)) * n * n <= dd * dd;
  for (int i = 0; i < d_; ++i) {
    if (static_cast<__int128>(std::abs(k[i])) * n > dd) return false;
  }
  return true;
}

bool Lattice::indicator(const Mode& l, const Mode& m) const {
  return in_cutoff(l) && in_cutoff(m) && in_cutoff(l + m);
}

int Lattice::box_index(const Mode& k) const {
  const int side = 2 * radius_ + 1;
  int idx = 0;
  for (int i = 0; i < d_; ++i) {
    const int c = k[i] + radius_;
    if (c < 0 || c >= side) return -1;
    idx = idx * side + c;
  }
  for (int i = d_; i < kMaxDim; ++i) {
    if (k[i] != 0) return -1;
  }
  return idx;
}

int Lattice::mode_index(const Mode& k) const {
  const int b = box_index(k);
  return b < 0 ? -1 : box_to_mode_[b];
}

int Lattice::canonical_index(const Mode& k, bool* conj) const {
  const int b = box_index(k);
  if (b < 0) return -1;
  if (conj) *conj = !is_canonical(k);
  return box_to_canon_[b];
}

const PairTable& Lattice::pair_table() const {
  std::call_once(pairs_once_, [this] {
    auto t = std::make_unique<PairTable>();
    t->offsets.push_back(0);
    for (const Mode& n : canon_) {
      for (std::size_t a = 0; a < modes_.size(); ++a) {
        const Mode m = n - modes_[a];
        const int b = mode_index(m);
        if (b < 0 || b < static_cast<int>(a)) continue;
        if (!indicator(modes_[a], m)) continue;
        t->first.push_back(static_cast<int>(a));
        t->second.push_back(b);
        t->weight.push_back(b == static_cast<int>(a) ? 1.0 : 2.0);
      }
      t->offsets.push_back(t->first.size());
    }
    pairs_ = std::move(t);
  });
  return *pairs_;
}

LatticePtr make_lattice(int d, Rational eps) { return std::make_shared<const Lattice>(d, eps); }

double lambda_eps(const Lattice& lat) { return lat.lambda(); }

bool cutoff_indicator(const Lattice& lat, const Mode& l, const Mode& m) { return lat.indicator(l, m); }

const std::vector<Mode>& enumerate_modes(const Lattice& lat) { return lat.modes(); }

}  // namespace wcsb
