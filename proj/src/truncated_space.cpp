#include "wcsb/truncated_space.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace wcsb {

TruncatedSpace::TruncatedSpace(LatticePtr lat, const Vec& w, int lo, int hi, const std::vector<Tuple>& seeds)
    : lat_(std::move(lat)), w_(w), lo_(lo), hi_(hi) {
  if (lo < 1 || hi < lo || hi > kMaxLevel) throw std::invalid_argument("invalid level window");
  const Lattice& L = *lat_;
  std::deque<Tuple> queue;
  std::unordered_map<Tuple, long, TupleHash> seen;
  for (Tuple t : seeds) {
    t.sort();
    if (t.n < lo || t.n > hi) throw std::invalid_argument("seed outside the level window");
    for (int i = 0; i < t.n; ++i) {
      if (!L.in_cutoff(t.mode(i))) throw std::invalid_argument("seed mode outside the cutoff");
    }
    if (seen.emplace(t, 0).second) queue.push_back(t);
  }
  const auto& modes = L.modes();
  while (!queue.empty()) {
    const Tuple s = queue.front();
    queue.pop_front();
    if (s.n < hi) {
      for (int j = 0; j < s.n; ++j) {
        if (j > 0 && s.k[j] == s.k[j - 1]) continue;
        const Mode q = s.mode(j);
        for (const Mode& l : modes) {
          const Mode m = q - l;
          if (!L.in_cutoff(m)) continue;
          Tuple t = replace_slots(s, {j}, {pack(l), pack(m)});
          if (seen.emplace(t, 0).second) queue.push_back(t);
        }
      }
    }
    if (s.n > lo) {
      for (int a = 0; a < s.n; ++a) {
        for (int b = a + 1; b < s.n; ++b) {
          const Mode ka = s.mode(a), kb = s.mode(b);
          if (!L.indicator(ka, kb)) continue;
          Tuple t = replace_slots(s, {a, b}, {pack(ka + kb)});
          if (seen.emplace(t, 0).second) queue.push_back(t);
        }
      }
    }
  }
  tuples_.reserve(seen.size());
  for (const auto& kv : seen) tuples_.push_back(kv.first);
  seen.clear();
  std::sort(tuples_.begin(), tuples_.end());
  index_.reserve(tuples_.size());
  level_start_.resize(hi - lo + 2);
  for (int n = lo; n <= hi + 1; ++n) {
    level_start_[n - lo] = static_cast<std::size_t>(
        std::partition_point(tuples_.begin(), tuples_.end(), [n](const Tuple& t) { return t.n < n; }) -
        tuples_.begin());
  }
  weight_.resize(tuples_.size());
  diag_.resize(tuples_.size());
  for (std::size_t i = 0; i < tuples_.size(); ++i) {
    index_.emplace(tuples_[i], static_cast<long>(i));
    weight_[i] = factorial(tuples_[i].n) * orderings(tuples_[i]);
    diag_[i] = 0.5 * tuple_norm2(tuples_[i]);
  }

  const double c = L.lambda() / std::pow(2.0 * M_PI, 0.5 * L.dim());
  const std::size_t first_row = level_begin(lo + 1);
  up_ptr_.push_back(0);
  for (std::size_t r = first_row; r < tuples_.size(); ++r) {
    const Tuple& t = tuples_[r];
    const int n = t.n - 1;
    const cplx pref(0.0, -2.0 * c / (n + 1));
    for (int a = 0; a < t.n; ++a) {
      for (int b = a + 1; b < t.n; ++b) {
        const Mode ka = t.mode(a), kb = t.mode(b);
        if (!L.indicator(ka, kb)) continue;
        const Mode q = ka + kb;
        const double wq = dot(w_, q);
        if (wq == 0.0) continue;
        const long s = index(replace_slots(t, {a, b}, {pack(q)}));
        if (s < 0) throw std::logic_error("closure is missing a merged tuple");
        const double scale = std::sqrt(weight_[r] / weight_[s]) / std::sqrt(diag_[r] * diag_[s]);
        up_col_.push_back(s);
        up_val_.push_back(pref * wq * scale);
      }
    }
    up_ptr_.push_back(up_col_.size());
  }
}

std::size_t TruncatedSpace::level_begin(int n) const {
  if (n < lo_) return 0;
  if (n > hi_) return tuples_.size();
  return level_start_[n - lo_];
}

std::size_t TruncatedSpace::level_size(int n) const { return level_begin(n + 1) - level_begin(n); }

long TruncatedSpace::index(const Tuple& t) const {
  auto it = index_.find(t);
  return it == index_.end() ? -1 : it->second;
}

void TruncatedSpace::apply_T(const CVector& y, CVector& out, int from, int to) const {
  if (static_cast<std::size_t>(y.size()) != dim()) throw std::invalid_argument("vector size does not match the space");
  out.setZero(static_cast<Eigen::Index>(dim()));
  from = std::max(from, lo_);
  to = std::min(to, hi_);
  if (to <= from) return;
  const std::size_t offset = level_begin(lo_ + 1);
  for (std::size_t r = level_begin(from + 1); r < level_begin(to + 1); ++r) {
    const std::size_t row = r - offset;
    cplx acc = 0;
    const cplx yr = y[static_cast<Eigen::Index>(r)];
    for (std::size_t e = up_ptr_[row]; e < up_ptr_[row + 1]; ++e) {
      acc += up_val_[e] * y[up_col_[e]];
      out[up_col_[e]] -= std::conj(up_val_[e]) * yr;
    }
    out[static_cast<Eigen::Index>(r)] += acc;
  }
}

CVector TruncatedSpace::symmetrize_rhs(const ChaosKernel& g) const {
  CVector x = coordinates(g);
  for (std::size_t i = 0; i < dim(); ++i) x[i] *= std::sqrt(weight_[i] / diag_[i]);
  return x;
}

ChaosKernel TruncatedSpace::unsymmetrize(const CVector& y) const {
  CVector x = y;
  for (std::size_t i = 0; i < dim(); ++i) x[i] /= std::sqrt(weight_[i] * diag_[i]);
  return kernel(x);
}

CVector TruncatedSpace::coordinates(const ChaosKernel& f) const {
  CVector x = CVector::Zero(static_cast<Eigen::Index>(dim()));
  for (const auto& [n, lv] : f.levels()) {
    for (const auto& [t, v] : lv) {
      if (v == 0.0) continue;
      const long i = index(t);
      if (i < 0) throw std::out_of_range("kernel support outside the truncated space");
      x[i] = v;
    }
  }
  return x;
}

ChaosKernel TruncatedSpace::kernel(const CVector& x) const {
  ChaosKernel f(lat_);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i] != 0.0) f.set(tuples_[i], x[i]);
  }
  return f;
}

}  // namespace wcsb
